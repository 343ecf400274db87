#pragma once

#include <cstddef>

#include "fidmem/line.hpp"

namespace fidmem {

enum class Direction { Forward, Backward };

// Dimensionless description of one storage-and-retrieval run. alphaL is the
// peak optical depth; gammaT the product of inhomogeneous half width and
// input time constant. Grid resolutions live here so a scenario fully
// determines a deterministic run.
struct MediumScenario {
    double alphaL = 0.0;
    double gammaT = 0.1;
    LineShape line = lorentzian_line();
    Direction direction = Direction::Backward;
    std::size_t n_z = 400;
    std::size_t n_delta = 512;
    std::size_t n_points = 8192;
    double window_factor = 15.0;

    void validate() const;  // throws std::invalid_argument
};

} // namespace fidmem
