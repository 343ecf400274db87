#pragma once

#include <cstdint>
#include <stdexcept>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fidmem::cli {

enum class Mode { Analytic, Simulate, OptimizeDuration, OptimizeShape, Feasibility, Figure };

Mode parse_mode(const std::string& s);  // throws ConfigError
std::string mode_name(Mode m);

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat dotted-key configuration. Files hold `key = value` lines with '#'
// comments; unknown keys are errors. CLI flags overwrite file values.
struct KeyValues {
    std::map<std::string, std::string> values;

    static KeyValues from_file(const std::string& path);
    void set(const std::string& key, const std::string& value);
    std::optional<std::string> get(const std::string& key) const;

    double get_double(const std::string& key, double fallback) const;
    std::size_t get_size(const std::string& key, std::size_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    std::vector<double> get_list(const std::string& key) const;  // comma separated

    // error if any key is not in the allowed set
    void check_known(const std::vector<std::string>& allowed) const;
};

struct SweepAxis {
    std::vector<double> values;  // explicit values, or linspace start/stop/count
    bool active = false;
};

struct RunConfig {
    Mode mode = Mode::Simulate;
    std::string out_dir = "out";
    bool dense = false;
    int workers = 0;       // 0 = hardware concurrency
    double tol = 1e-3;
    int figure_id = 0;

    // scenario block
    double alphaL = 40.0;
    double gammaT = 0.1;
    std::string line = "lorentzian";
    std::string direction = "backward";
    std::size_t n_z = 400;
    std::size_t n_delta = 512;
    std::size_t n_points = 8192;
    double window_factor = 15.0;

    SweepAxis sweep_alphaL;
    SweepAxis sweep_gammaT;

    // feasibility block
    std::string crystal_file = "data/crystals.txt";
    std::string crystal_name = "Nd:YVO4";
    double tau_ratio = 0.1;

    std::uint64_t config_hash = 0;

    static RunConfig build(Mode mode, const KeyValues& kv);
};

std::uint64_t fnv1a_hash(const std::string& text);

} // namespace fidmem::cli
