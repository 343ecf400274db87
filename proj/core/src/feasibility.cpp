#include "fidmem/feasibility.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace fidmem::feas {

namespace {
constexpr double kPi = std::numbers::pi;
} // namespace

void CrystalSpec::validate() const
{
    auto pos = [](double v, const char* what) {
        if (!(v > 0.0))
            throw std::invalid_argument(std::string("CrystalSpec: ") + what +
                                        " must be positive");
    };
    pos(wavelength, "wavelength");
    pos(alpha, "alpha");
    pos(length, "length");
    pos(inhom_fwhm, "inhom_fwhm");
    pos(dipole_moment, "dipole_moment");
    pos(beam_diameter, "beam_diameter");
}

double zeeman_splitting(double g_factor, double B_tesla)
{
    if (B_tesla < 0.0)
        throw std::invalid_argument("zeeman_splitting: B must be >= 0");
    return g_factor * constants::bohr_magneton_hz * B_tesla;
}

OptimalDuration optimal_input_duration(const CrystalSpec& spec, const LineShape& line,
                                       const opt::DurationProblem& base)
{
    spec.validate();
    opt::DurationProblem p = base;
    p.alphaL = spec.alphaL();
    p.line = line;
    p.direction = Direction::Backward;
    const opt::DurationOptimum o = opt::optimize_duration(p, 2e-3, 1.5);

    OptimalDuration out;
    out.gammaT_opt = o.gammaT_opt;
    out.eta_opt = o.eta_opt;
    out.T_half = 0.5 * o.gammaT_opt / spec.gamma();
    return out;
}

double pi_pulse_energy(const CrystalSpec& spec, double tau)
{
    spec.validate();
    if (!(tau > 0.0))
        throw std::invalid_argument("pi_pulse_energy: tau must be positive");
    // Area condition Omega tau = pi with Omega = p E / hbar gives the peak
    // field; intensity (eps0 c / 2) E^2 over a flat-top disc of diameter d.
    const double field = kPi * constants::hbar / (spec.dipole_moment * tau);
    const double intensity = 0.5 * constants::eps0 * constants::c * field * field;
    const double area = kPi * spec.beam_diameter * spec.beam_diameter / 4.0;
    return intensity * area * tau;
}

double dipole_moment_from_energy(double energy, double tau, double beam_diameter)
{
    if (!(energy > 0.0) || !(tau > 0.0) || !(beam_diameter > 0.0))
        throw std::invalid_argument("dipole_moment_from_energy: inputs must be positive");
    const double num = constants::eps0 * constants::c * kPi * kPi * kPi *
                       constants::hbar * constants::hbar * beam_diameter * beam_diameter;
    return std::sqrt(num / (8.0 * energy * tau));
}

FeasibilityReport feasibility_report(const CrystalSpec& spec, const LineShape& line,
                                     double tau_ratio, const opt::DurationProblem& base)
{
    if (!(tau_ratio > 0.0) || tau_ratio > 0.5)
        throw std::invalid_argument("feasibility_report: tau_ratio must be in (0, 0.5]");
    const OptimalDuration od = optimal_input_duration(spec, line, base);

    FeasibilityReport r;
    r.crystal = spec.name;
    r.alphaL = spec.alphaL();
    r.gammaT_opt = od.gammaT_opt;
    r.T_half = od.T_half;
    r.pi_pulse_duration = tau_ratio * od.T_half;
    r.pi_pulse_energy = pi_pulse_energy(spec, r.pi_pulse_duration);
    r.control_loss_estimate = tau_ratio;
    r.predicted_eta = od.eta_opt * (1.0 - tau_ratio);
    // Gaussian-beam Rayleigh range for a waist of half the flat-top diameter
    const double w0 = 0.5 * spec.beam_diameter;
    r.rayleigh_range = kPi * w0 * w0 / spec.wavelength;
    return r;
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line)
{
    const auto h = line.find('#');
    return h == std::string::npos ? line : line.substr(0, h);
}

} // namespace

CrystalSpec load_crystal(const std::string& path, const std::string& name)
{
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("load_crystal: cannot open " + path);

    CrystalSpec spec;
    spec.name = name;
    bool in_section = false, found = false;
    std::string line;
    while (std::getline(f, line)) {
        line = trim(strip_comment(line));
        if (line.empty())
            continue;
        if (line.front() == '[' && line.back() == ']') {
            in_section = trim(line.substr(1, line.size() - 2)) == name;
            found = found || in_section;
            continue;
        }
        if (!in_section)
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("load_crystal: malformed line '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "wavelength_nm")
            spec.wavelength = std::stod(val) * 1e-9;
        else if (key == "alpha_per_cm")
            spec.alpha = std::stod(val) * 1e2;
        else if (key == "length_cm")
            spec.length = std::stod(val) * 1e-2;
        else if (key == "inhom_fwhm_GHz")
            spec.inhom_fwhm = 2.0 * kPi * std::stod(val) * 1e9;
        else if (key == "dipole_moment_Cm")
            spec.dipole_moment = std::stod(val);
        else if (key == "beam_diameter_um")
            spec.beam_diameter = std::stod(val) * 1e-6;
        else if (key == "g_factors") {
            std::stringstream ss(val);
            std::string tok;
            spec.g_factors.clear();
            while (std::getline(ss, tok, ','))
                spec.g_factors.push_back(std::stod(trim(tok)));
        } else {
            throw std::runtime_error("load_crystal: unknown key '" + key + "'");
        }
    }
    if (!found)
        throw std::runtime_error("load_crystal: no crystal named '" + name + "' in " + path);
    spec.validate();
    return spec;
}

std::vector<std::string> list_crystals(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw std::runtime_error("list_crystals: cannot open " + path);
    std::vector<std::string> names;
    std::string line;
    while (std::getline(f, line)) {
        line = trim(strip_comment(line));
        if (line.size() > 2 && line.front() == '[' && line.back() == ']')
            names.push_back(trim(line.substr(1, line.size() - 2)));
    }
    return names;
}

} // namespace fidmem::feas
