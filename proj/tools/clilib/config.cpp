#include "clilib/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace fidmem::cli {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

Mode parse_mode(const std::string& s)
{
    if (s == "analytic") return Mode::Analytic;
    if (s == "simulate") return Mode::Simulate;
    if (s == "optimize-duration") return Mode::OptimizeDuration;
    if (s == "optimize-shape") return Mode::OptimizeShape;
    if (s == "feasibility") return Mode::Feasibility;
    if (s == "figure") return Mode::Figure;
    throw ConfigError("unknown mode '" + s + "'");
}

std::string mode_name(Mode m)
{
    switch (m) {
    case Mode::Analytic: return "analytic";
    case Mode::Simulate: return "simulate";
    case Mode::OptimizeDuration: return "optimize-duration";
    case Mode::OptimizeShape: return "optimize-shape";
    case Mode::Feasibility: return "feasibility";
    case Mode::Figure: return "figure";
    }
    return "?";
}

KeyValues KeyValues::from_file(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw ConfigError("cannot open config file '" + path + "'");
    KeyValues kv;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto h = line.find('#');
        if (h != std::string::npos)
            line = line.substr(0, h);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        if (kv.values.count(key))
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": duplicate key '" + key + "'");
        kv.values[key] = val;
    }
    return kv;
}

void KeyValues::set(const std::string& key, const std::string& value)
{
    values[key] = value;
}

std::optional<std::string> KeyValues::get(const std::string& key) const
{
    const auto it = values.find(key);
    if (it == values.end())
        return std::nullopt;
    return it->second;
}

double KeyValues::get_double(const std::string& key, double fallback) const
{
    const auto v = get(key);
    if (!v)
        return fallback;
    try {
        std::size_t pos = 0;
        const double d = std::stod(*v, &pos);
        if (pos != v->size())
            throw ConfigError("");
        return d;
    } catch (...) {
        throw ConfigError("key '" + key + "': not a number: '" + *v + "'");
    }
}

std::size_t KeyValues::get_size(const std::string& key, std::size_t fallback) const
{
    const double d = get_double(key, static_cast<double>(fallback));
    if (d < 0.0 || d != static_cast<double>(static_cast<std::size_t>(d)))
        throw ConfigError("key '" + key + "': not a non-negative integer");
    return static_cast<std::size_t>(d);
}

bool KeyValues::get_bool(const std::string& key, bool fallback) const
{
    const auto v = get(key);
    if (!v)
        return fallback;
    if (*v == "true" || *v == "1")
        return true;
    if (*v == "false" || *v == "0")
        return false;
    throw ConfigError("key '" + key + "': expected true/false");
}

std::string KeyValues::get_string(const std::string& key, const std::string& fallback) const
{
    return get(key).value_or(fallback);
}

std::vector<double> KeyValues::get_list(const std::string& key) const
{
    const auto v = get(key);
    std::vector<double> out;
    if (!v)
        return out;
    std::stringstream ss(*v);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty())
            throw ConfigError("key '" + key + "': empty list element");
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            throw ConfigError("key '" + key + "': not a number: '" + tok + "'");
        }
    }
    return out;
}

void KeyValues::check_known(const std::vector<std::string>& allowed) const
{
    for (const auto& [key, _] : values) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ConfigError("unknown config key '" + key + "'");
    }
}

std::uint64_t fnv1a_hash(const std::string& text)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace {

SweepAxis read_axis(const KeyValues& kv, const std::string& prefix, double fallback)
{
    SweepAxis ax;
    const auto vals = kv.get_list(prefix + ".values");
    if (!vals.empty()) {
        ax.values = vals;
        ax.active = true;
        return ax;
    }
    if (kv.get(prefix + ".start") || kv.get(prefix + ".stop") || kv.get(prefix + ".count")) {
        const double start = kv.get_double(prefix + ".start", 0.0);
        const double stop = kv.get_double(prefix + ".stop", start);
        const std::size_t count = kv.get_size(prefix + ".count", 1);
        if (count < 1)
            throw ConfigError(prefix + ".count must be >= 1");
        for (std::size_t i = 0; i < count; ++i) {
            const double f = count == 1 ? 0.0
                                        : static_cast<double>(i) / static_cast<double>(count - 1);
            ax.values.push_back(start + (stop - start) * f);
        }
        ax.active = true;
        return ax;
    }
    ax.values = {fallback};
    return ax;
}

} // namespace

RunConfig RunConfig::build(Mode mode, const KeyValues& kv)
{
    static const std::vector<std::string> allowed = {
        "out", "dense", "workers", "tol", "figure.id",
        "scenario.alphaL", "scenario.gammaT", "scenario.line", "scenario.direction",
        "scenario.n_z", "scenario.n_delta", "scenario.n_points", "scenario.window_factor",
        "sweep.alphaL.values", "sweep.alphaL.start", "sweep.alphaL.stop", "sweep.alphaL.count",
        "sweep.gammaT.values", "sweep.gammaT.start", "sweep.gammaT.stop", "sweep.gammaT.count",
        "crystal.file", "crystal.name", "crystal.tau_ratio",
    };
    kv.check_known(allowed);

    RunConfig c;
    c.mode = mode;
    c.out_dir = kv.get_string("out", c.out_dir);
    c.dense = kv.get_bool("dense", c.dense);
    c.workers = static_cast<int>(kv.get_size("workers", 0));
    c.tol = kv.get_double("tol", c.tol);
    c.figure_id = static_cast<int>(kv.get_size("figure.id", 0));

    c.alphaL = kv.get_double("scenario.alphaL", c.alphaL);
    c.gammaT = kv.get_double("scenario.gammaT", c.gammaT);
    c.line = kv.get_string("scenario.line", c.line);
    c.direction = kv.get_string("scenario.direction", c.direction);
    c.n_z = kv.get_size("scenario.n_z", c.n_z);
    c.n_delta = kv.get_size("scenario.n_delta", c.n_delta);
    c.n_points = kv.get_size("scenario.n_points", c.n_points);
    c.window_factor = kv.get_double("scenario.window_factor", c.window_factor);

    if (c.line != "lorentzian" && c.line != "gaussian")
        throw ConfigError("scenario.line must be lorentzian or gaussian");
    if (c.direction != "backward" && c.direction != "forward")
        throw ConfigError("scenario.direction must be backward or forward");

    c.sweep_alphaL = read_axis(kv, "sweep.alphaL", c.alphaL);
    c.sweep_gammaT = read_axis(kv, "sweep.gammaT", c.gammaT);

    c.crystal_file = kv.get_string("crystal.file", c.crystal_file);
    c.crystal_name = kv.get_string("crystal.name", c.crystal_name);
    c.tau_ratio = kv.get_double("crystal.tau_ratio", c.tau_ratio);

    // canonical text for the run hash: sorted key=value lines plus the mode
    std::string canon = "mode=" + mode_name(mode) + "\n";
    for (const auto& [k, v] : kv.values)
        canon += k + "=" + v + "\n";
    c.config_hash = fnv1a_hash(canon);
    return c;
}

} // namespace fidmem::cli
