#pragma once

#include <complex>
#include <vector>

#include "fidmem/grid.hpp"

namespace fidmem {

using cdouble = std::complex<double>;

// Complex field envelope sampled on a TimeGrid.
struct PulseEnvelope {
    TimeGrid grid;
    std::vector<cdouble> amplitude;
};

// Eq-of-the-protocol rising exponential sqrt(2/T) e^{t/T} for t <= 0, zero
// after. Discretely renormalized so pulse_energy() == 1 exactly.
PulseEnvelope exponential_input(double gammaT, const TimeGrid& grid);

// sum |E|^2 dt over all samples
double pulse_energy(const PulseEnvelope& p);

// amplitude(t) -> conj(amplitude(-t)); exact sample permutation on the
// symmetric grid, so energy is preserved bit for bit.
PulseEnvelope time_reverse(const PulseEnvelope& p);

// <a, b> = sum conj(a) b dt
cdouble pulse_overlap(const PulseEnvelope& a, const PulseEnvelope& b);

} // namespace fidmem
