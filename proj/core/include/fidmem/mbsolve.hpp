#pragma once

#include <vector>

#include "fidmem/pulse.hpp"
#include "fidmem/quadrature.hpp"
#include "fidmem/scenario.hpp"

namespace fidmem::mb {

using fidmem::cdouble;

// Atomic coherence snapshot sigma(z, Delta) on the space x detuning grid,
// taken at the pi-pulse instant t = 0.
struct CoherenceField {
    std::size_t n_z = 0;
    DetuningQuadrature quadrature;
    std::vector<cdouble> values;  // row-major, values[iz * n_delta + j]

    std::size_t n_delta() const { return quadrature.size(); }
    // weighted sum_z sum_j w_j |sigma|^2 dz
    double total_excitation() const;
};

struct MemoryResult {
    PulseEnvelope transmitted;   // t <= 0 samples at z = L
    PulseEnvelope retrieved;     // t >= 0 samples at the output face
    double eta_abs = 0.0;
    double eta_total = 0.0;
    double distortion = 0.0;     // 1 - |<retrieved, time-reversed input>|^2
    double tail_energy = 0.0;    // retrieved energy beyond the grid window
    bool refinement_checked = false;
    bool refinement_ok = true;
    double refinement_delta = 0.0;  // |eta_total(refined) - eta_total|
};

struct RunOptions {
    bool check_refinement = false;
    int n_threads = 0;  // 0 = library default
};

// Integrates the coupled field/coherence equations from t_min to 0 with the
// input as the z = 0 boundary. Time update: exact integrating factor for the
// detuning rotation with the drive integrated exactly for a piecewise-linear
// field. Space update: trapezoidal march of the polarization source.
struct AbsorbResult {
    PulseEnvelope transmitted;
    CoherenceField coherence;
};
AbsorbResult absorb(const PulseEnvelope& input, const MediumScenario& scenario,
                    const RunOptions& opts = {});

// Counter-propagating (Backward) or co-propagating (Forward) pi-pulse pair:
// in the envelope picture both are the identity map on the coherence.
CoherenceField apply_pi_pulses(const CoherenceField& coherence, Direction direction);

struct RetrieveResult {
    PulseEnvelope pulse;     // t >= 0 samples at the output face
    double energy = 0.0;     // total re-emitted energy incl. the slow tail
    double tail_energy = 0.0;
};
// Integrates re-emission for t > 0. Backward: field marched from z = L
// (E_b(L,t) = 0) toward z = 0, output at z = 0. Forward: zero input boundary
// at z = 0, output at z = L. Emission slower than the grid window (the
// inhomogeneous FID persists for ~1/Gamma) is integrated in a coarse-step
// extension and reported as tail energy.
RetrieveResult retrieve(const CoherenceField& coherence, const MediumScenario& scenario,
                        const RunOptions& opts = {});

// absorb -> apply_pi_pulses -> retrieve, with energy bookkeeping against the
// (trapezoidal) input energy so efficiencies are discretization-unbiased.
MemoryResult run_memory(const PulseEnvelope& input, const MediumScenario& scenario,
                        const RunOptions& opts = {});

} // namespace fidmem::mb
