#pragma once

#include <cstddef>
#include <functional>

#include "fidmem/mbsolve.hpp"

namespace fidmem::opt {

struct DurationOptimum {
    double gammaT_opt = 0.0;
    double eta_opt = 0.0;
    std::size_t n_evaluations = 0;
    bool scan_fallback = false;  // pre-scan was not unimodal; dense scan used
};

struct ShapeOptimum {
    PulseEnvelope pulse;     // optimal input shape, unit energy
    double eta_opt = 0.0;
    std::size_t n_iterations = 0;
    bool converged = false;
};

// Scenario parameters for an optimization: everything but gammaT.
struct DurationProblem {
    double alphaL = 0.0;
    LineShape line = lorentzian_line();
    Direction direction = Direction::Backward;
    // resolutions for the search phase; the optimum is re-evaluated at the
    // final resolutions below before being reported
    std::size_t scan_n_z = 200;
    std::size_t scan_n_delta = 256;
    std::size_t scan_n_points = 4096;
    std::size_t final_n_z = 400;
    std::size_t final_n_delta = 512;
    std::size_t final_n_points = 8192;
    double window_factor = 15.0;
    mb::RunOptions run;
};

// Golden-section search for the efficiency-maximizing pulse duration on a
// log-gammaT axis, after a 16-point unimodality pre-scan. Terminates when
// the bracket is narrower than 1e-3 relative.
DurationOptimum optimize_duration(const DurationProblem& problem,
                                  double gammaT_lo, double gammaT_hi);

// Time-reversal iteration: run the memory, reverse the retrieved pulse,
// renormalize, feed it back. Converged when both the normalized shape
// distance and the efficiency change drop below tol.
ShapeOptimum optimize_shape(const MediumScenario& scenario, const PulseEnvelope& initial,
                            double tol, std::size_t max_iter,
                            const mb::RunOptions& run = {});

} // namespace fidmem::opt
