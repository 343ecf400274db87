#include "fidmem/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace fidmem {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = 0.693147180559945309417;

// Gauss-Hermite nodes/weights by Golub-Welsch on the Jacobi matrix of the
// physicists' Hermite recurrence. Weight_j = sqrt(pi) * q_{0j}^2, which after
// normalizing the measure to 1 is just q_{0j}^2; these sum to exactly 1.
void gauss_hermite(std::size_t n, std::vector<double>& x, std::vector<double>& w)
{
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(static_cast<long>(n));
    Eigen::VectorXd sub(static_cast<long>(n) - 1);
    for (long k = 1; k < static_cast<long>(n); ++k)
        sub[k - 1] = std::sqrt(0.5 * static_cast<double>(k));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("gauss_hermite: eigensolver failed");

    x.resize(n);
    w.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        x[j] = es.eigenvalues()[static_cast<long>(j)];
        const double q0 = es.eigenvectors()(0, static_cast<long>(j));
        w[j] = q0 * q0;
    }
}

DetuningQuadrature lorentzian_rule(std::size_t n)
{
    // Uniform core on [-dc, dc] with exact per-cell mass, tangent-mapped
    // wings beyond. Core spacing sets the kernel aliasing time 2*pi/spacing,
    // which must exceed twice the retrieval horizon.
    const std::size_t n_wing = std::max<std::size_t>(16, n / 8);
    if (n < 2 * n_wing + 8)
        throw std::invalid_argument("sample_distribution: n_delta too small");
    const std::size_t n_core = n - 2 * n_wing;
    const double dc = 0.8 * std::sqrt(static_cast<double>(n_core));

    DetuningQuadrature q;
    q.nodes.reserve(n);
    q.weights.reserve(n);

    const double step = 2.0 * dc / static_cast<double>(n_core);
    for (std::size_t i = 0; i < n_core; ++i) {
        const double a = -dc + step * static_cast<double>(i);
        const double b = a + step;
        q.nodes.push_back(0.5 * (a + b));
        q.weights.push_back((std::atan(b) - std::atan(a)) / kPi);
    }
    const double th_lo = std::atan(dc);
    const double dth = (kPi / 2.0 - th_lo) / static_cast<double>(n_wing);
    for (std::size_t i = 0; i < n_wing; ++i) {
        const double th = th_lo + dth * (static_cast<double>(i) + 0.5);
        const double x = std::tan(th);
        const double wgt = dth / kPi;
        q.nodes.push_back(x);
        q.weights.push_back(wgt);
        q.nodes.push_back(-x);
        q.weights.push_back(wgt);
    }

    double total = 0.0;
    for (double w : q.weights)
        total += w;
    for (double& w : q.weights)
        w /= total;
    return q;
}

DetuningQuadrature gaussian_rule(std::size_t n)
{
    std::vector<double> y, v;
    gauss_hermite(n, y, v);
    DetuningQuadrature q;
    q.nodes.resize(n);
    q.weights = std::move(v);
    const double scale = 1.0 / std::sqrt(kLn2);  // FWHM 2 in units of Gamma
    for (std::size_t j = 0; j < n; ++j)
        q.nodes[j] = y[j] * scale;
    return q;
}

} // namespace

DetuningQuadrature sample_distribution(const LineShape& line, std::size_t n_delta)
{
    if (n_delta < 2)
        throw std::invalid_argument("sample_distribution: n_delta must be >= 2");
    if (line.kind == LineKind::Lorentzian)
        return lorentzian_rule(n_delta);
    return gaussian_rule(n_delta);
}

} // namespace fidmem
