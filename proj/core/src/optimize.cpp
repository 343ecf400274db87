#include "fidmem/optimize.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fidmem::opt {

namespace {

double eval_eta(const DurationProblem& p, double gammaT, bool final_res, std::size_t& evals)
{
    MediumScenario s;
    s.alphaL = p.alphaL;
    s.gammaT = gammaT;
    s.line = p.line;
    s.direction = p.direction;
    s.n_z = final_res ? p.final_n_z : p.scan_n_z;
    s.n_delta = final_res ? p.final_n_delta : p.scan_n_delta;
    s.n_points = final_res ? p.final_n_points : p.scan_n_points;
    s.window_factor = p.window_factor;
    const TimeGrid grid = make_time_grid(gammaT, s.window_factor, s.n_points);
    const PulseEnvelope in = exponential_input(gammaT, grid);
    ++evals;
    return mb::run_memory(in, s, p.run).eta_total;
}

} // namespace

DurationOptimum optimize_duration(const DurationProblem& problem,
                                  double gammaT_lo, double gammaT_hi)
{
    if (!(gammaT_lo > 0.0) || !(gammaT_hi > gammaT_lo))
        throw std::invalid_argument("optimize_duration: need 0 < lo < hi");

    DurationOptimum out;
    std::size_t evals = 0;

    if (problem.alphaL == 0.0) {  // nothing stored, nothing retrieved
        out.gammaT_opt = gammaT_lo;
        out.eta_opt = 0.0;
        return out;
    }

    // unimodality pre-scan on a log grid
    constexpr int kPre = 16;
    const double la = std::log(gammaT_lo), lb = std::log(gammaT_hi);
    std::vector<double> lx(kPre), fx(kPre);
    for (int i = 0; i < kPre; ++i) {
        lx[i] = la + (lb - la) * i / (kPre - 1);
        fx[i] = eval_eta(problem, std::exp(lx[i]), false, evals);
    }
    int best = 0;
    for (int i = 1; i < kPre; ++i)
        if (fx[i] > fx[best])
            best = i;

    int sign_changes = 0;
    for (int i = 1; i + 1 < kPre; ++i) {
        const double d1 = fx[i] - fx[i - 1];
        const double d2 = fx[i + 1] - fx[i];
        if (d1 > 1e-9 && d2 < -1e-9)
            ++sign_changes;  // interior maximum
    }
    if (sign_changes > 1) {
        // not unimodal at scan resolution; fall back to a dense scan
        out.scan_fallback = true;
        constexpr int kDense = 128;
        double bx = lx[best], bf = fx[best];
        for (int i = 0; i < kDense; ++i) {
            const double l = la + (lb - la) * i / (kDense - 1);
            const double f = eval_eta(problem, std::exp(l), false, evals);
            if (f > bf) {
                bf = f;
                bx = l;
            }
        }
        out.gammaT_opt = std::exp(bx);
        out.eta_opt = eval_eta(problem, out.gammaT_opt, true, evals);
        out.n_evaluations = evals;
        return out;
    }

    double a = lx[best > 0 ? best - 1 : 0];
    double b = lx[best + 1 < kPre ? best + 1 : kPre - 1];
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = eval_eta(problem, std::exp(c), false, evals);
    double fd = eval_eta(problem, std::exp(d), false, evals);
    while (b - a > 1e-3) {  // log width ~ relative width
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = eval_eta(problem, std::exp(c), false, evals);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = eval_eta(problem, std::exp(d), false, evals);
        }
    }
    out.gammaT_opt = std::exp(0.5 * (a + b));
    out.eta_opt = eval_eta(problem, out.gammaT_opt, true, evals);
    out.n_evaluations = evals;
    return out;
}

ShapeOptimum optimize_shape(const MediumScenario& scenario, const PulseEnvelope& initial,
                            double tol, std::size_t max_iter, const mb::RunOptions& run)
{
    if (!(tol > 0.0))
        throw std::invalid_argument("optimize_shape: tol must be positive");
    if (max_iter == 0)
        throw std::invalid_argument("optimize_shape: max_iter must be >= 1");

    const double dt = initial.grid.dt;
    auto normalize = [&](PulseEnvelope& p) {
        const double e = pulse_energy(p);
        if (e > 0.0) {
            const double s = 1.0 / std::sqrt(e);
            for (auto& a : p.amplitude)
                a *= s;
        }
    };

    ShapeOptimum out;
    PulseEnvelope in = initial;
    normalize(in);
    MediumScenario scen = scenario;
    double prev_eta = -1.0;
    PulseEnvelope prev_shape;

    for (std::size_t it = 0; it < max_iter; ++it) {
        mb::MemoryResult r = mb::run_memory(in, scen, run);
        out.n_iterations = it + 1;

        // window adequacy: emission escaping past the grid window must be
        // negligible before the reversed pulse is reused as an input
        if (r.eta_total > 0.0 && r.tail_energy > 1e-4 * r.eta_total) {
            if (scen.window_factor * scen.gammaT < 16.0 && scen.n_points < (1u << 16)) {
                scen.window_factor *= 2.0;
                scen.n_points = 2 * (scen.n_points - 1) + 1;
                const TimeGrid wide = make_time_grid(scen.gammaT, scen.window_factor,
                                                     scen.n_points);
                PulseEnvelope rein;
                rein.grid = wide;
                rein.amplitude.assign(wide.n_points, cdouble{0.0, 0.0});
                // re-embed the current input into the wider window
                const std::size_t mid_new = wide.mid();
                const std::size_t mid_old = in.grid.mid();
                for (std::size_t k = 0; k <= mid_old; ++k) {
                    const double t = in.grid.time(k);
                    const long idx = static_cast<long>(mid_new)
                                     + static_cast<long>(std::lround(t / wide.dt));
                    if (idx >= 0 && idx <= static_cast<long>(mid_new))
                        rein.amplitude[static_cast<std::size_t>(idx)] = in.amplitude[k];
                }
                normalize(rein);
                in = std::move(rein);
                continue;  // repeat the iteration in the enlarged window
            }
            // cannot enlarge further: report the partial result
            out.pulse = in;
            out.eta_opt = r.eta_total;
            out.converged = false;
            return out;
        }

        PulseEnvelope next = time_reverse(r.retrieved);
        normalize(next);

        bool done = false;
        if (prev_eta >= 0.0) {
            double d2 = 0.0;
            if (prev_shape.amplitude.size() == next.amplitude.size()) {
                for (std::size_t i = 0; i < next.amplitude.size(); ++i)
                    d2 += std::norm(next.amplitude[i] - prev_shape.amplitude[i]);
                d2 *= dt;
            } else {
                d2 = 1.0;
            }
            done = std::sqrt(d2) < tol && std::abs(r.eta_total - prev_eta) < tol;
        }
        out.pulse = in;
        out.eta_opt = r.eta_total;
        if (done) {
            out.converged = true;
            return out;
        }
        prev_eta = r.eta_total;
        prev_shape = next;
        in = std::move(next);
    }
    out.converged = false;
    return out;
}

} // namespace fidmem::opt
