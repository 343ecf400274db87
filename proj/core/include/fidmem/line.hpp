#pragma once

#include <cmath>

namespace fidmem {

enum class LineKind { Lorentzian, Gaussian };

// Inhomogeneous spectral distribution n(Delta), normalized to unit integral.
// Internal units: Gamma = 1 is the half width at half maximum, so both lines
// have FWHM 2. Lorentzian: n = 1/(pi (1+D^2)). Gaussian: FWHM 2, i.e.
// n = sqrt(ln2/pi) exp(-D^2 ln2).
struct LineShape {
    LineKind kind = LineKind::Lorentzian;

    double density(double delta) const;
    double peak_density() const;
    // dephasing kernel K(t) = int n(D) e^{-iDt} dD (real by symmetry)
    double kernel(double t) const;
};

inline LineShape lorentzian_line() { return {LineKind::Lorentzian}; }
inline LineShape gaussian_line() { return {LineKind::Gaussian}; }

} // namespace fidmem
