#pragma once

#include <cstddef>

namespace fidmem {

// Uniform time grid in units of 1/Gamma, symmetric about t = 0.
// t = 0 is always a sample: it is the instant the pi-pulse pair acts,
// separating absorption (t <= 0) from re-emission (t > 0).
struct TimeGrid {
    double t_min = 0.0;
    double t_max = 0.0;
    std::size_t n_points = 0;
    double dt = 0.0;

    double time(std::size_t i) const { return t_min + static_cast<double>(i) * dt; }
    std::size_t mid() const { return (n_points - 1) / 2; }

    bool operator==(const TimeGrid&) const = default;
};

// Grid spans [-W*T, +W*T] with T = gammaT in internal units. An even
// n_points is bumped by one so the midpoint lands exactly on t = 0.
TimeGrid make_time_grid(double gammaT, double window_factor, std::size_t n_points);

} // namespace fidmem
