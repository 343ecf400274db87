#pragma once

#include <cstddef>
#include <vector>

#include "fidmem/line.hpp"

namespace fidmem {

// Discretization of the atomic spectral distribution: sum w_j f(D_j)
// approximates int n(D) f(D) dD. Weights are positive and sum to 1.
struct DetuningQuadrature {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

// Lorentzian: composite rule built on the tangent substitution D = tan(theta).
// A uniformly spaced core carries the exact per-cell Lorentzian mass
// (arctan differences); the heavy tails are covered by equal-theta wing
// cells. The uniform core keeps the discrete dephasing kernel free of
// spurious noise out to the aliasing time 2*pi/spacing, which pointwise
// tangent nodes cannot achieve.
// Gaussian: Gauss-Hermite nodes/weights (Golub-Welsch), rescaled to FWHM 2.
DetuningQuadrature sample_distribution(const LineShape& line, std::size_t n_delta);

} // namespace fidmem
