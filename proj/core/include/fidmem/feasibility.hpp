#pragma once

#include <string>
#include <vector>

#include "fidmem/line.hpp"
#include "fidmem/optimize.hpp"

namespace fidmem::feas {

// SI constants used by the physical-units layer.
namespace constants {
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double c = 2.99792458e8;              // m/s
inline constexpr double eps0 = 8.8541878128e-12;       // F/m
inline constexpr double bohr_magneton_hz = 13.996e9;   // Hz/T
} // namespace constants

// Physical description of a storage crystal. All quantities SI.
struct CrystalSpec {
    std::string name;
    double wavelength = 0.0;       // m
    double alpha = 0.0;            // 1/m, peak absorption coefficient
    double length = 0.0;           // m (effective optical path)
    double inhom_fwhm = 0.0;       // rad/s, equals 2*Gamma
    std::vector<double> g_factors;
    double dipole_moment = 0.0;    // C m
    double beam_diameter = 0.0;    // m

    double alphaL() const { return alpha * length; }
    double gamma() const { return 0.5 * inhom_fwhm; }  // rad/s
    void validate() const;
};

struct FeasibilityReport {
    std::string crystal;
    double alphaL = 0.0;
    double gammaT_opt = 0.0;
    double T_half = 0.0;              // s, intensity rise time T/2
    double pi_pulse_duration = 0.0;   // s
    double pi_pulse_energy = 0.0;     // J
    double control_loss_estimate = 0.0;  // tau / (T/2)
    double predicted_eta = 0.0;       // optimizer efficiency x (1 - loss)
    double rayleigh_range = 0.0;      // m, recorded, not used in the energy
};

// Zeeman doublet splitting g * mu_B * B in Hz.
double zeeman_splitting(double g_factor, double B_tesla);

struct OptimalDuration {
    double gammaT_opt = 0.0;
    double T_half = 0.0;  // s
    double eta_opt = 0.0;
};
// Duration-optimizes the dimensionless memory for the crystal's optical
// depth and converts the optimum to seconds via Gamma = inhom_fwhm / 2.
OptimalDuration optimal_input_duration(const CrystalSpec& spec, const LineShape& line,
                                       const opt::DurationProblem& base = {});

// Energy of a resonant square pi-pulse of duration tau focused to the
// spec's beam diameter: E = eps0 c pi^3 hbar^2 d^2 / (8 p^2 tau).
double pi_pulse_energy(const CrystalSpec& spec, double tau);

// Dipole moment that makes pi_pulse_energy(spec, tau) equal a measured
// energy; used once to pin the reference value from a quoted design point.
double dipole_moment_from_energy(double energy, double tau, double beam_diameter);

FeasibilityReport feasibility_report(const CrystalSpec& spec, const LineShape& line,
                                     double tau_ratio,
                                     const opt::DurationProblem& base = {});

// Crystal database: '#' comments, [name] sections, key = value lines with
// units in the key names.
CrystalSpec load_crystal(const std::string& path, const std::string& name);
std::vector<std::string> list_crystals(const std::string& path);

} // namespace fidmem::feas
