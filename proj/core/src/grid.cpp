#include "fidmem/grid.hpp"

#include <stdexcept>

namespace fidmem {

TimeGrid make_time_grid(double gammaT, double window_factor, std::size_t n_points)
{
    if (!(gammaT > 0.0))
        throw std::invalid_argument("make_time_grid: gammaT must be positive");
    if (window_factor < 15.0)
        throw std::invalid_argument("make_time_grid: window_factor must be >= 15");
    if (n_points < 16)
        throw std::invalid_argument("make_time_grid: need at least 16 points");

    if (n_points % 2 == 0)
        ++n_points;  // keep t = 0 on the grid

    TimeGrid g;
    g.t_max = window_factor * gammaT;
    g.t_min = -g.t_max;
    g.n_points = n_points;
    g.dt = (g.t_max - g.t_min) / static_cast<double>(n_points - 1);
    return g;
}

} // namespace fidmem
