#include "fidmem/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fidmem {

PulseEnvelope exponential_input(double gammaT, const TimeGrid& grid)
{
    if (!(gammaT > 0.0))
        throw std::invalid_argument("exponential_input: gammaT must be positive");
    if (grid.n_points < 2 || grid.t_min >= 0.0)
        throw std::invalid_argument("exponential_input: grid must cover t <= 0");

    const double T = gammaT;
    PulseEnvelope p;
    p.grid = grid;
    p.amplitude.assign(grid.n_points, cdouble{0.0, 0.0});
    const double amp = std::sqrt(2.0 / T);
    for (std::size_t i = 0; i < grid.n_points; ++i) {
        const double t = grid.time(i);
        if (t <= 0.0)
            p.amplitude[i] = amp * std::exp(t / T);
    }
    // Discrete renormalization: the sampled tail and the t = 0 endpoint make
    // the Riemann sum deviate from 1 at O(dt/T).
    const double en = pulse_energy(p);
    if (en > 0.0) {
        const double s = 1.0 / std::sqrt(en);
        for (auto& a : p.amplitude)
            a *= s;
    }
    return p;
}

double pulse_energy(const PulseEnvelope& p)
{
    double s = 0.0;
    for (const auto& a : p.amplitude)
        s += std::norm(a);
    return s * p.grid.dt;
}

PulseEnvelope time_reverse(const PulseEnvelope& p)
{
    PulseEnvelope r;
    r.grid = p.grid;
    r.amplitude.resize(p.amplitude.size());
    std::transform(p.amplitude.rbegin(), p.amplitude.rend(), r.amplitude.begin(),
                   [](const cdouble& a) { return std::conj(a); });
    return r;
}

cdouble pulse_overlap(const PulseEnvelope& a, const PulseEnvelope& b)
{
    if (a.amplitude.size() != b.amplitude.size())
        throw std::invalid_argument("pulse_overlap: mismatched grids");
    cdouble s{0.0, 0.0};
    for (std::size_t i = 0; i < a.amplitude.size(); ++i)
        s += std::conj(a.amplitude[i]) * b.amplitude[i];
    return s * a.grid.dt;
}

} // namespace fidmem
