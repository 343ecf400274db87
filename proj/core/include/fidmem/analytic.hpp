#pragma once

#include <complex>

namespace fidmem::analytic {

using cdouble = std::complex<double>;

// closed forms ------------------------------------------------------------

// eta_abs = 1 - exp(-aL gT/(1+gT))
double absorption_efficiency(double alphaL, double gammaT);

// coherently absorbed fraction: extra 1/(1+gT) dephasing prefactor
double coherent_absorption_efficiency(double alphaL, double gammaT);

// large-depth limit of the backward protocol, 1/(1+2 gT)
double backward_efficiency_asymptote(double gammaT);

// low-depth expansion gT (aL/(2(1+gT)))^2, valid for aL*gT << 1
double backward_efficiency_lowdepth(double alphaL, double gammaT);

// duration optimum of the squared coherent absorption, 1/(1+aL/4)
double optimal_gammaT(double alphaL);

// heuristic optimized overall efficiency at the optimal duration
double optimized_backward_efficiency(double alphaL);

// spectra -----------------------------------------------------------------

// Unitary Fourier convention E(w) = (2 pi)^{-1/2} int e^{iwt} E(t) dt, under
// which the input of unit energy has int |E(w)|^2 dw = 1 and the aL -> inf
// limit of the backward energy integral reproduces the 1/(1+2 gT) asymptote
// exactly. Input spectrum: sqrt(T/pi)/(1+iwT).
cdouble input_spectrum(double gammaT, double omega);

// backward-retrieved field at the input face
cdouble backward_output_spectrum(double alphaL, double gammaT, double omega);

// forward-retrieved field at the far face
cdouble forward_output_spectrum(double alphaL, double gammaT, double omega);

// energy quadratures --------------------------------------------------------

struct EfficiencyQuadrature {
    double value = 0.0;
    bool converged = false;   // node doubling changed the result by <= tol
    int n_nodes = 0;
    double last_change = 0.0;
};

// omega-integral of |output spectrum|^2 via the tangent substitution
// (no window truncation; the 1/w^2 tail is mapped to a finite interval).
// Nodes double until the result moves by less than tol.
EfficiencyQuadrature backward_efficiency_quad(double alphaL, double gammaT, double tol = 1e-4);
EfficiencyQuadrature forward_efficiency_quad(double alphaL, double gammaT, double tol = 1e-4);

double backward_efficiency(double alphaL, double gammaT);
double forward_efficiency(double alphaL, double gammaT);

} // namespace fidmem::analytic
