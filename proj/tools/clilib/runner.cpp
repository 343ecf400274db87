#include "clilib/runner.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <algorithm>
#include <fstream>

#include "clilib/csv.hpp"
#include "fidmem/analytic.hpp"
#include "fidmem/feasibility.hpp"
#include "fidmem/mbsolve.hpp"
#include "fidmem/optimize.hpp"

namespace fidmem::cli {

namespace {

constexpr const char* kToolVersion = "fidmem 0.1.0";

LineShape to_line(const std::string& s)
{
    return s == "gaussian" ? gaussian_line() : lorentzian_line();
}

Direction to_dir(const std::string& s)
{
    return s == "forward" ? Direction::Forward : Direction::Backward;
}

MediumScenario scenario_from(const RunConfig& c, double aL, double gT)
{
    MediumScenario s;
    s.alphaL = aL;
    s.gammaT = gT;
    s.line = to_line(c.line);
    s.direction = to_dir(c.direction);
    s.n_z = c.n_z;
    s.n_delta = c.n_delta;
    s.n_points = c.n_points;
    s.window_factor = c.window_factor;
    return s;
}

int effective_workers(const RunConfig& c, std::size_t n_points)
{
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0)
        hw = 1;
    std::size_t w = c.workers > 0 ? static_cast<std::size_t>(c.workers) : hw;
    return static_cast<int>(std::min(w, std::max<std::size_t>(1, n_points)));
}

// Evaluates f(i) for i in [0, n) on a small worker pool. Results must be
// stored by index inside f, so the output order is independent of scheduling.
template <typename F>
void parallel_points(std::size_t n, int workers, F&& f)
{
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n)
                    return;
                f(i);
            }
        });
    }
    for (auto& th : pool)
        th.join();
}

struct Flags {
    std::vector<std::string> notes;
    std::mutex mu;
    void add(const std::string& s)
    {
        std::lock_guard<std::mutex> lock(mu);
        notes.push_back(s);
    }
    bool any() const { return !notes.empty(); }
};

std::string hash_hex(std::uint64_t h)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string timestamp_utc()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[40];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const RunConfig& c, const std::string& dir, std::size_t n_points,
                    const Flags& flags, const std::vector<std::string>& extra)
{
    std::ostringstream m;
    m << "tool = " << kToolVersion << "\n";
    m << "mode = " << mode_name(c.mode) << "\n";
    m << "config_hash = " << hash_hex(c.config_hash) << "\n";
    m << "timestamp = " << timestamp_utc() << "\n";
    m << "workers = " << effective_workers(c, n_points) << "\n";
    m << "points = " << n_points << "\n";
    m << "resolutions = n_z:" << c.n_z << " n_delta:" << c.n_delta
      << " n_points:" << c.n_points << " window_factor:" << format_double(c.window_factor)
      << "\n";
    for (const auto& e : extra)
        m << e << "\n";
    m << "non_converged = " << flags.notes.size() << "\n";
    for (const auto& n : flags.notes)
        m << "flag = " << n << "\n";
    std::ofstream f(dir + "/manifest.txt");
    f << m.str();
}

void csv_preamble(CsvBuilder& csv, const RunConfig& c, const std::string& schema,
                  const std::string& units)
{
    csv.comment(std::string(kToolVersion) + " " + schema);
    csv.comment("config_hash " + hash_hex(c.config_hash));
    csv.comment(units);
}

mb::RunOptions solver_opts(const RunConfig& /*c*/, int workers)
{
    mb::RunOptions o;
    o.n_threads = workers > 1 ? 1 : 0;
    return o;
}

struct Grid2D {
    std::vector<std::pair<double, double>> pts;  // (alphaL, gammaT), row-major
};

Grid2D sweep_grid(const RunConfig& c)
{
    Grid2D g;
    for (double a : c.sweep_alphaL.values)
        for (double t : c.sweep_gammaT.values)
            g.pts.emplace_back(a, t);
    return g;
}

int finish(const RunConfig& c, const std::string& csv_name, const CsvBuilder& csv,
           std::size_t n_points, const Flags& flags,
           const std::vector<std::string>& extra = {})
{
    std::filesystem::create_directories(c.out_dir);
    csv.write(c.out_dir + "/" + csv_name);
    write_manifest(c, c.out_dir, n_points, flags, extra);
    return flags.any() ? kExitNumerical : kExitOk;
}

// ---- modes ---------------------------------------------------------------

int run_analytic(const RunConfig& c)
{
    const Grid2D grid = sweep_grid(c);
    struct Row {
        double aL, gT, e13, e21, back, fwd, asym, taylor;
        bool conv;
    };
    std::vector<Row> rows(grid.pts.size());
    Flags flags;
    const int workers = effective_workers(c, grid.pts.size());
    parallel_points(grid.pts.size(), workers, [&](std::size_t i) {
        const auto [aL, gT] = grid.pts[i];
        auto back = analytic::backward_efficiency_quad(aL, gT);
        auto fwd = analytic::forward_efficiency_quad(aL, gT);
        rows[i] = {aL, gT,
                   analytic::absorption_efficiency(aL, gT),
                   analytic::coherent_absorption_efficiency(aL, gT),
                   back.value, fwd.value,
                   analytic::backward_efficiency_asymptote(gT),
                   analytic::backward_efficiency_lowdepth(aL, gT),
                   back.converged && fwd.converged};
        if (!(back.converged && fwd.converged))
            flags.add("quadrature not converged at alphaL=" + format_double(aL) +
                      " gammaT=" + format_double(gT));
    });

    CsvBuilder csv;
    csv_preamble(csv, c, "analytic-v1",
                 "columns: alphaL [-], gammaT [-], efficiencies [0..1]");
    csv.columns({"alphaL", "gammaT", "eta_abs", "eta_coherent_abs", "eta_back", "eta_fwd",
                 "eta_back_asymptote", "eta_back_lowdepth", "quad_converged"});
    for (const auto& r : rows)
        csv.row({r.aL, r.gT, r.e13, r.e21, r.back, r.fwd, r.asym, r.taylor,
                 static_cast<long long>(r.conv ? 1 : 0)});
    return finish(c, "analytic.csv", csv, grid.pts.size(), flags);
}

int run_simulate(const RunConfig& c)
{
    const Grid2D grid = sweep_grid(c);
    struct Row {
        double aL, gT, ea, et, dist, tail;
    };
    std::vector<Row> rows(grid.pts.size());
    Flags flags;
    const int workers = effective_workers(c, grid.pts.size());
    parallel_points(grid.pts.size(), workers, [&](std::size_t i) {
        const auto [aL, gT] = grid.pts[i];
        MediumScenario s = scenario_from(c, aL, gT);
        const TimeGrid g = make_time_grid(gT, s.window_factor, s.n_points);
        const PulseEnvelope in = exponential_input(gT, g);
        const auto r = mb::run_memory(in, s, solver_opts(c, workers));
        rows[i] = {aL, gT, r.eta_abs, r.eta_total, r.distortion, r.tail_energy};
    });

    CsvBuilder csv;
    csv_preamble(csv, c, "simulate-v1",
                 "columns: alphaL [-], gammaT [-], eta/distortion/tail [0..1]; line " +
                     c.line + ", direction " + c.direction);
    csv.columns({"alphaL", "gammaT", "eta_abs", "eta_total", "distortion", "tail_energy"});
    for (const auto& r : rows)
        csv.row({r.aL, r.gT, r.ea, r.et, r.dist, r.tail});
    return finish(c, "simulate.csv", csv, grid.pts.size(), flags);
}

opt::DurationProblem duration_problem(const RunConfig& c, double aL, int workers)
{
    opt::DurationProblem p;
    p.alphaL = aL;
    p.line = to_line(c.line);
    p.direction = to_dir(c.direction);
    p.final_n_z = c.n_z;
    p.final_n_delta = c.n_delta;
    p.final_n_points = c.n_points;
    p.scan_n_z = std::max<std::size_t>(100, c.n_z / 2);
    p.scan_n_delta = std::max<std::size_t>(128, c.n_delta / 2);
    p.scan_n_points = std::max<std::size_t>(2048, c.n_points / 2);
    p.window_factor = c.window_factor;
    p.run = solver_opts(c, workers);
    return p;
}

std::pair<double, double> duration_bracket(const RunConfig& c)
{
    if (c.sweep_gammaT.active) {
        const auto& v = c.sweep_gammaT.values;
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        if (*lo < *hi)
            return {*lo, *hi};
    }
    return {2e-3, 1.5};
}

int run_opt_duration(const RunConfig& c)
{
    const auto& axis = c.sweep_alphaL.values;
    struct Row {
        double aL, gt, eta;
        long long evals;
        bool fallback;
    };
    std::vector<Row> rows(axis.size());
    Flags flags;
    const int workers = effective_workers(c, axis.size());
    const auto [lo, hi] = duration_bracket(c);
    parallel_points(axis.size(), workers, [&](std::size_t i) {
        const auto o = opt::optimize_duration(duration_problem(c, axis[i], workers), lo, hi);
        rows[i] = {axis[i], o.gammaT_opt, o.eta_opt,
                   static_cast<long long>(o.n_evaluations), o.scan_fallback};
        if (o.scan_fallback)
            flags.add("non-unimodal pre-scan at alphaL=" + format_double(axis[i]) +
                      "; dense scan used");
    });

    CsvBuilder csv;
    csv_preamble(csv, c, "optimize-duration-v1",
                 "columns: alphaL [-], gammaT_opt [-], eta_opt [0..1]; line " + c.line +
                     ", direction " + c.direction);
    csv.columns({"alphaL", "gammaT_opt", "eta_opt", "n_evaluations", "scan_fallback"});
    for (const auto& r : rows)
        csv.row({r.aL, r.gt, r.eta, r.evals, static_cast<long long>(r.fallback ? 1 : 0)});
    return finish(c, "optimize-duration.csv", csv, axis.size(), flags);
}

int run_opt_shape(const RunConfig& c)
{
    const auto& axis = c.sweep_alphaL.values;
    struct Row {
        double aL, gt, eta_dur, eta_shape;
        long long iters;
        bool conv;
    };
    std::vector<Row> rows(axis.size());
    Flags flags;
    const int workers = effective_workers(c, axis.size());
    const auto [lo, hi] = duration_bracket(c);
    parallel_points(axis.size(), workers, [&](std::size_t i) {
        const auto prob = duration_problem(c, axis[i], workers);
        const auto d = opt::optimize_duration(prob, lo, hi);
        MediumScenario s = scenario_from(c, axis[i], d.gammaT_opt);
        const TimeGrid g = make_time_grid(d.gammaT_opt, s.window_factor, s.n_points);
        const PulseEnvelope init = exponential_input(d.gammaT_opt, g);
        const auto sh = opt::optimize_shape(s, init, c.tol, 25, solver_opts(c, workers));
        rows[i] = {axis[i], d.gammaT_opt, d.eta_opt, sh.eta_opt,
                   static_cast<long long>(sh.n_iterations), sh.converged};
        if (!sh.converged)
            flags.add("shape iteration not converged at alphaL=" + format_double(axis[i]));
    });

    CsvBuilder csv;
    csv_preamble(csv, c, "optimize-shape-v1",
                 "columns: alphaL [-], gammaT_opt [-], eta [0..1]; line " + c.line);
    csv.columns({"alphaL", "gammaT_opt", "eta_duration_opt", "eta_shape_opt",
                 "n_iterations", "converged"});
    for (const auto& r : rows)
        csv.row({r.aL, r.gt, r.eta_dur, r.eta_shape, r.iters,
                 static_cast<long long>(r.conv ? 1 : 0)});
    return finish(c, "optimize-shape.csv", csv, axis.size(), flags);
}

int run_feasibility(const RunConfig& c)
{
    const auto spec = feas::load_crystal(c.crystal_file, c.crystal_name);
    Flags flags;
    const auto rep = feas::feasibility_report(spec, to_line(c.line), c.tau_ratio,
                                              duration_problem(c, spec.alphaL(), 1));

    CsvBuilder csv;
    csv_preamble(csv, c, "feasibility-v1",
                 "columns: alphaL [-], gammaT_opt [-], T_half [s], tau [s], energy [J], "
                 "loss [-], eta [0..1], zeeman at 1 T [Hz], rayleigh [m]");
    std::vector<std::string> cols = {"crystal", "alphaL", "gammaT_opt", "T_half_s",
                                     "pi_pulse_s", "pi_pulse_J", "control_loss",
                                     "predicted_eta", "rayleigh_m"};
    for (std::size_t i = 0; i < spec.g_factors.size(); ++i)
        cols.push_back("zeeman_Hz_per_T_g" + std::to_string(i + 1));
    csv.columns(cols);
    std::vector<CsvBuilder::Cell> cells = {spec.name, rep.alphaL, rep.gammaT_opt,
                                           rep.T_half, rep.pi_pulse_duration,
                                           rep.pi_pulse_energy, rep.control_loss_estimate,
                                           rep.predicted_eta, rep.rayleigh_range};
    for (double g : spec.g_factors)
        cells.push_back(feas::zeeman_splitting(g, 1.0));
    csv.row(cells);
    return finish(c, "feasibility.csv", csv, 1, flags,
                  {"crystal = " + spec.name,
                   "crystal_file = " + c.crystal_file});
}

// ---- figure reproduction ---------------------------------------------------

std::vector<double> linspace(double a, double b, std::size_t n)
{
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

int run_figure(const RunConfig& c)
{
    const int id = c.figure_id;
    if (id < 2 || id > 6)
        throw ConfigError("figure id must be 2..6");

    Flags flags;
    CsvBuilder csv;
    std::vector<std::string> extra;
    std::string name = "fig" + std::to_string(id) + ".csv";
    const std::vector<double> gLines = {0.1, 0.05, 0.01};

    if (id == 2 || id == 3) {
        const auto aLs = linspace(0.0, 200.0, c.dense ? 201 : 41);
        struct Row { double gT, aL, eta; bool conv; };
        std::vector<Row> rows(gLines.size() * aLs.size());
        const int workers = effective_workers(c, rows.size());
        parallel_points(rows.size(), workers, [&](std::size_t i) {
            const double gT = gLines[i / aLs.size()];
            const double aL = aLs[i % aLs.size()];
            const auto q = id == 2 ? analytic::backward_efficiency_quad(aL, gT)
                                   : analytic::forward_efficiency_quad(aL, gT);
            rows[i] = {gT, aL, q.value, q.converged};
            if (!q.converged)
                flags.add("quadrature not converged at alphaL=" + format_double(aL));
        });
        csv_preamble(csv, c, "figure" + std::to_string(id) + "-v1",
                     std::string("overall efficiency vs optical depth, ") +
                         (id == 2 ? "backward" : "forward") + " retrieval, Lorentzian line");
        csv.columns({"gammaT", "alphaL", "eta"});
        for (const auto& r : rows)
            csv.row({r.gT, r.aL, r.eta});
    } else if (id == 4) {
        const auto aLs = c.dense ? linspace(4.0, 60.0, 15)
                                 : std::vector<double>{2, 5, 10, 15, 20, 30, 45, 60};
        struct Curve { std::string line, dir; };
        const std::vector<Curve> curves = {{"lorentzian", "backward"},
                                           {"lorentzian", "forward"},
                                           {"gaussian", "backward"},
                                           {"gaussian", "forward"}};
        struct Row { std::string line, dir; double aL, gt, eta; };
        std::vector<Row> rows(curves.size() * aLs.size());
        const int workers = effective_workers(c, rows.size());
        parallel_points(rows.size(), workers, [&](std::size_t i) {
            const auto& cv = curves[i / aLs.size()];
            const double aL = aLs[i % aLs.size()];
            RunConfig cc = c;
            cc.line = cv.line;
            cc.direction = cv.dir;
            const auto o = opt::optimize_duration(duration_problem(cc, aL, workers),
                                                  2e-3, 1.5);
            rows[i] = {cv.line, cv.dir, aL, o.gammaT_opt, o.eta_opt};
        });
        csv_preamble(csv, c, "figure4-v1",
                     "duration-optimized efficiency vs optical depth, all lines/directions");
        csv.columns({"line", "direction", "alphaL", "gammaT_opt", "eta_opt"});
        for (const auto& r : rows)
            csv.row({r.line, r.dir, r.aL, r.gt, r.eta});
        // refinement sentinel at the deepest point of the first curve
        {
            RunConfig cc = c;
            cc.line = "lorentzian";
            cc.direction = "backward";
            const auto o = opt::optimize_duration(duration_problem(cc, aLs.back(), 1), 2e-3, 1.5);
            MediumScenario s = scenario_from(cc, aLs.back(), o.gammaT_opt);
            const TimeGrid g = make_time_grid(o.gammaT_opt, s.window_factor, s.n_points);
            mb::RunOptions ro;
            ro.check_refinement = true;
            const auto r = mb::run_memory(exponential_input(o.gammaT_opt, g), s, ro);
            extra.push_back("refinement_delta = " + format_double(r.refinement_delta));
            if (!r.refinement_ok)
                flags.add("refinement check failed at alphaL=" + format_double(aLs.back()));
        }
    } else if (id == 5) {
        const auto aLs = c.dense ? linspace(5.0, 60.0, 12)
                                 : std::vector<double>{2, 4, 10, 20, 30, 40, 60};
        struct Row { double aL, num, formula; };
        std::vector<Row> rows(aLs.size());
        const int workers = effective_workers(c, rows.size());
        parallel_points(rows.size(), workers, [&](std::size_t i) {
            RunConfig cc = c;
            cc.line = "lorentzian";
            cc.direction = "backward";
            const auto o = opt::optimize_duration(duration_problem(cc, aLs[i], workers),
                                                  2e-3, 1.5);
            rows[i] = {aLs[i], o.eta_opt, analytic::optimized_backward_efficiency(aLs[i])};
        });
        csv_preamble(csv, c, "figure5-v1",
                     "duration-optimized backward efficiency: numerical vs heuristic formula");
        csv.columns({"alphaL", "eta_numeric", "eta_formula"});
        for (const auto& r : rows)
            csv.row({r.aL, r.num, r.formula});
    } else {  // id == 6
        const auto aLs = c.dense ? linspace(5.0, 60.0, 12)
                                 : std::vector<double>{10, 20, 40, 50, 60};
        struct Row { double aL, gt, eta_dur, eta_shape; bool conv; };
        std::vector<Row> rows(aLs.size());
        const int workers = effective_workers(c, rows.size());
        parallel_points(rows.size(), workers, [&](std::size_t i) {
            RunConfig cc = c;
            cc.line = "gaussian";
            cc.direction = "backward";
            const auto prob = duration_problem(cc, aLs[i], workers);
            const auto d = opt::optimize_duration(prob, 2e-3, 1.5);
            MediumScenario s = scenario_from(cc, aLs[i], d.gammaT_opt);
            const TimeGrid g = make_time_grid(d.gammaT_opt, s.window_factor, s.n_points);
            const auto sh = opt::optimize_shape(s, exponential_input(d.gammaT_opt, g),
                                                c.tol, 25, solver_opts(cc, workers));
            rows[i] = {aLs[i], d.gammaT_opt, d.eta_opt, sh.eta_opt, sh.converged};
            if (!sh.converged)
                flags.add("shape iteration not converged at alphaL=" + format_double(aLs[i]));
        });
        csv_preamble(csv, c, "figure6-v1",
                     "duration-only vs shape-optimized efficiency, Gaussian line, backward");
        csv.columns({"alphaL", "gammaT_opt", "eta_duration", "eta_shape"});
        for (const auto& r : rows)
            csv.row({r.aL, r.gt, r.eta_dur, r.eta_shape});
    }
    return finish(c, name, csv, 1, flags, extra);
}

} // namespace

int run(const RunConfig& config)
{
    try {
        switch (config.mode) {
        case Mode::Analytic: return run_analytic(config);
        case Mode::Simulate: return run_simulate(config);
        case Mode::OptimizeDuration: return run_opt_duration(config);
        case Mode::OptimizeShape: return run_opt_shape(config);
        case Mode::Feasibility: return run_feasibility(config);
        case Mode::Figure: return run_figure(config);
        }
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

} // namespace fidmem::cli
