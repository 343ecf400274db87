#include "fidmem/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fidmem::analytic {

namespace {

constexpr double kPi = std::numbers::pi;

void check_domain(double alphaL, double gammaT)
{
    if (!(alphaL >= 0.0))
        throw std::invalid_argument("analytic: alphaL must be >= 0");
    if (!(gammaT > 0.0))
        throw std::invalid_argument("analytic: gammaT must be > 0");
}

// exp(aL/(2(iw-1))) via explicit real/imaginary split; the exponent has
// negative real part for every w, so this never overflows.
cdouble attenuation_exponential(double alphaL, double omega)
{
    const double denom = 2.0 * (1.0 + omega * omega);
    const double re = -alphaL / denom;
    const double im = -alphaL * omega / denom;
    return std::exp(re) * cdouble{std::cos(im), std::sin(im)};
}

} // namespace

double absorption_efficiency(double alphaL, double gammaT)
{
    check_domain(alphaL, gammaT);
    return 1.0 - std::exp(-alphaL * gammaT / (1.0 + gammaT));
}

double coherent_absorption_efficiency(double alphaL, double gammaT)
{
    check_domain(alphaL, gammaT);
    return absorption_efficiency(alphaL, gammaT) / (1.0 + gammaT);
}

double backward_efficiency_asymptote(double gammaT)
{
    if (!(gammaT > 0.0))
        throw std::invalid_argument("analytic: gammaT must be > 0");
    return 1.0 / (1.0 + 2.0 * gammaT);
}

double backward_efficiency_lowdepth(double alphaL, double gammaT)
{
    const double r = alphaL / (2.0 * (1.0 + gammaT));
    return gammaT * r * r;
}

double optimal_gammaT(double alphaL)
{
    if (!(alphaL >= 0.0))
        throw std::invalid_argument("analytic: alphaL must be >= 0");
    return 1.0 / (1.0 + alphaL / 4.0);
}

double optimized_backward_efficiency(double alphaL)
{
    if (!(alphaL >= 0.0))
        throw std::invalid_argument("analytic: alphaL must be >= 0");
    const double a = alphaL / 4.0;
    const double pref = (1.0 + a) / (2.0 + a);
    const double e = 1.0 - std::exp(-alphaL / (2.0 + a));
    return pref * pref * e * e;
}

cdouble input_spectrum(double gammaT, double omega)
{
    const double T = gammaT;
    return std::sqrt(T / kPi) / cdouble{1.0, omega * T};
}

cdouble backward_output_spectrum(double alphaL, double gammaT, double omega)
{
    if (!(gammaT > 0.0))
        throw std::invalid_argument("analytic: gammaT must be > 0");
    const double c = 1.0 + 2.0 * gammaT;
    const double B = std::exp(-alphaL * gammaT / (2.0 * (1.0 + gammaT)));
    const cdouble inner = attenuation_exponential(alphaL, omega) * B;
    return -(1.0 / c) * input_spectrum(gammaT, -omega / c) * (1.0 - inner);
}

cdouble forward_output_spectrum(double alphaL, double gammaT, double omega)
{
    if (!(gammaT > 0.0))
        throw std::invalid_argument("analytic: gammaT must be > 0");
    const double B = std::exp(-alphaL * gammaT / (2.0 * (1.0 + gammaT)));
    // e^{A} (1 - e^{-A} B) = e^{A} - B
    return input_spectrum(gammaT, omega) * (attenuation_exponential(alphaL, omega) - B);
}

namespace {

template <typename F>
EfficiencyQuadrature omega_energy(F&& spectrum, double scale, double tol)
{
    // w = scale * tan(phi), midpoint rule in phi on (-pi/2, pi/2). The
    // integrand decays as 1/w^2, so the mapped integrand is smooth up to
    // the interval ends and the rule converges rapidly under doubling.
    EfficiencyQuadrature out;
    double prev = -1.0;
    for (int n = 1 << 9; n <= (1 << 17); n <<= 1) {
        double sum = 0.0;
        for (int k = 0; k < n; ++k) {
            const double phi = -kPi / 2.0 + kPi * (k + 0.5) / n;
            const double c = std::cos(phi);
            const double w = scale * std::tan(phi);
            const double jac = scale * (kPi / n) / (c * c);
            sum += std::norm(spectrum(w)) * jac;
        }
        out.n_nodes = n;
        out.value = sum;
        if (prev >= 0.0) {
            out.last_change = std::abs(sum - prev);
            if (out.last_change <= tol) {
                out.converged = true;
                return out;
            }
        }
        prev = sum;
    }
    return out;
}

} // namespace

EfficiencyQuadrature backward_efficiency_quad(double alphaL, double gammaT, double tol)
{
    check_domain(alphaL, gammaT);
    const double scale = (1.0 + 2.0 * gammaT) / gammaT;
    return omega_energy([=](double w) { return backward_output_spectrum(alphaL, gammaT, w); },
                        scale, tol);
}

EfficiencyQuadrature forward_efficiency_quad(double alphaL, double gammaT, double tol)
{
    check_domain(alphaL, gammaT);
    return omega_energy([=](double w) { return forward_output_spectrum(alphaL, gammaT, w); },
                        1.0 / gammaT, tol);
}

double backward_efficiency(double alphaL, double gammaT)
{
    return backward_efficiency_quad(alphaL, gammaT).value;
}

double forward_efficiency(double alphaL, double gammaT)
{
    return forward_efficiency_quad(alphaL, gammaT).value;
}

} // namespace fidmem::analytic
