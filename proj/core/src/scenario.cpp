#include "fidmem/scenario.hpp"

#include <stdexcept>

namespace fidmem {

void MediumScenario::validate() const
{
    if (!(alphaL >= 0.0))
        throw std::invalid_argument("MediumScenario: alphaL must be >= 0");
    if (!(gammaT > 0.0))
        throw std::invalid_argument("MediumScenario: gammaT must be > 0");
    if (n_z < 2)
        throw std::invalid_argument("MediumScenario: n_z must be >= 2");
    if (n_delta < 2)
        throw std::invalid_argument("MediumScenario: n_delta must be >= 2");
    if (window_factor < 15.0)
        throw std::invalid_argument("MediumScenario: window_factor must be >= 15");
    if (n_points < 16)
        throw std::invalid_argument("MediumScenario: n_points must be >= 16");
}

} // namespace fidmem
