#include "fidmem/mbsolve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fidmem::mb {

namespace {

constexpr double kLn2 = 0.693147180559945309417;
constexpr double kPi = std::numbers::pi;
constexpr double kTailDt = 1.0 / 64.0;  // FID tail step, units of 1/Gamma

// Weak-field narrowband transmission through the full medium must equal
// exp(-alphaL); that pins the field-coherence coupling for each line shape.
double coupling_strength(double alphaL, const LineShape& line)
{
    return alphaL / (kPi * line.peak_density());
}

double tail_horizon(const LineShape& line)
{
    // kernel energy below 1e-9 of its peak beyond these times
    return line.kind == LineKind::Lorentzian ? 12.0 : 5.0;
}

// Exact step coefficients: s(t+h) = A s(t) + i h (c0 E(t) + c1 E(t+h)) with
// A = e^{-iu}, u = Delta h, is the exact solution of the coherence equation
// for a field linear on the step. c0 = int_0^1 y e^{-iuy} dy,
// c1 = int_0^1 (1-y) e^{-iuy} dy.
struct PhaseCoefs {
    std::vector<double> a_re, a_im;   // rotation A_j
    std::vector<double> q_re, q_im;   // q_j = A_j c1_j + c0_j (fused drive)
    std::vector<double> c1_re, c1_im; // for state snapshots
    std::vector<double> w;
    cdouble kappa;                    // (C h / 2) * sum_j w_j c1_j
    double dt = 0.0;
};

PhaseCoefs make_coefs(const DetuningQuadrature& quad, double dt, double C)
{
    const std::size_t n = quad.size();
    PhaseCoefs c;
    c.a_re.resize(n); c.a_im.resize(n);
    c.q_re.resize(n); c.q_im.resize(n);
    c.c1_re.resize(n); c.c1_im.resize(n);
    c.w = quad.weights;
    c.dt = dt;
    cdouble c1bar{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
        const double u = quad.nodes[j] * dt;
        const cdouble A{std::cos(u), -std::sin(u)};
        cdouble c0, c1;
        if (std::abs(u) >= 1e-3) {
            const cdouble iu{0.0, u};
            const double u2 = u * u;
            c0 = ((1.0 + iu) * A - 1.0) / u2;
            c1 = (1.0 - iu - A) / u2;
        } else {
            const double u2 = u * u;
            c0 = cdouble{0.5 - u2 / 8.0, -u / 3.0 + u2 * u / 30.0};
            c1 = cdouble{0.5 - u2 / 24.0, -u / 6.0 + u2 * u / 120.0};
        }
        const cdouble q = A * c1 + c0;
        c.a_re[j] = A.real(); c.a_im[j] = A.imag();
        c.q_re[j] = q.real(); c.q_im[j] = q.imag();
        c.c1_re[j] = c1.real(); c.c1_im[j] = c1.imag();
        c1bar += quad.weights[j] * c1;
    }
    c.kappa = 0.5 * C * dt * c1bar;
    return c;
}

// Integration state: the fused array tmp(z, j) with per-row weighted sums.
struct State {
    std::size_t n_z = 0, n_d = 0;
    std::vector<double> t_re, t_im;   // tmp, row-major
    std::vector<cdouble> row_sum;     // sum_j w_j tmp(z, j)
    int n_threads = 0;

    void resize(std::size_t nz, std::size_t nd)
    {
        n_z = nz; n_d = nd;
        t_re.assign(nz * nd, 0.0);
        t_im.assign(nz * nd, 0.0);
        row_sum.assign(nz, cdouble{0.0, 0.0});
    }

    // tmp <- A*s0 + i h c0 E0 given an explicit coherence snapshot
    void init_from(const std::vector<cdouble>& s0, const std::vector<cdouble>& E0,
                   const PhaseCoefs& c, const DetuningQuadrature& quad)
    {
        const std::size_t nd = n_d;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(n_threads > 0 ? n_threads : omp_get_max_threads())
#endif
        for (long iz = 0; iz < static_cast<long>(n_z); ++iz) {
            double sum_re = 0.0, sum_im = 0.0;
            const double er = E0[static_cast<std::size_t>(iz)].real();
            const double ei = E0[static_cast<std::size_t>(iz)].imag();
            const std::size_t base = static_cast<std::size_t>(iz) * nd;
            for (std::size_t j = 0; j < nd; ++j) {
                const double u = quad.nodes[j] * c.dt;
                const double ar = std::cos(u), ai = -std::sin(u);
                // c0 = q - A c1
                const double c0r = c.q_re[j] - (ar * c.c1_re[j] - ai * c.c1_im[j]);
                const double c0i = c.q_im[j] - (ar * c.c1_im[j] + ai * c.c1_re[j]);
                const double sr = s0[base + j].real(), si = s0[base + j].imag();
                // A*s0
                double tr = ar * sr - ai * si;
                double ti = ar * si + ai * sr;
                // + i h c0 E0
                tr += c.dt * (-(c0r * ei + c0i * er));
                ti += c.dt * (c0r * er - c0i * ei);
                t_re[base + j] = tr;
                t_im[base + j] = ti;
                sum_re += c.w[j] * tr;
                sum_im += c.w[j] * ti;
            }
            row_sum[static_cast<std::size_t>(iz)] = {sum_re, sum_im};
        }
    }

    // one time step: tmp <- A tmp + i h q E(z), refreshing row sums
    void advance(const std::vector<cdouble>& E, const PhaseCoefs& c)
    {
        const std::size_t nd = n_d;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(n_threads > 0 ? n_threads : omp_get_max_threads())
#endif
        for (long iz = 0; iz < static_cast<long>(n_z); ++iz) {
            const double er = E[static_cast<std::size_t>(iz)].real();
            const double ei = E[static_cast<std::size_t>(iz)].imag();
            const std::size_t base = static_cast<std::size_t>(iz) * nd;
            double sum_re = 0.0, sum_im = 0.0;
            for (std::size_t j = 0; j < nd; ++j) {
                const double tr = t_re[base + j], ti = t_im[base + j];
                double nr = c.a_re[j] * tr - c.a_im[j] * ti;
                double ni = c.a_re[j] * ti + c.a_im[j] * tr;
                nr += c.dt * (-(c.q_re[j] * ei + c.q_im[j] * er));
                ni += c.dt * (c.q_re[j] * er - c.q_im[j] * ei);
                t_re[base + j] = nr;
                t_im[base + j] = ni;
                sum_re += c.w[j] * nr;
                sum_im += c.w[j] * ni;
            }
            row_sum[static_cast<std::size_t>(iz)] = {sum_re, sum_im};
        }
    }

    // coherence at the current instant: s = tmp + i h c1 E
    void snapshot(const std::vector<cdouble>& E, const PhaseCoefs& c,
                  std::vector<cdouble>& out) const
    {
        out.resize(n_z * n_d);
        for (std::size_t iz = 0; iz < n_z; ++iz) {
            const double er = E[iz].real(), ei = E[iz].imag();
            const std::size_t base = iz * n_d;
            for (std::size_t j = 0; j < n_d; ++j) {
                const double dr = c.dt * (-(c.c1_re[j] * ei + c.c1_im[j] * er));
                const double di = c.dt * (c.c1_re[j] * er - c.c1_im[j] * ei);
                out[base + j] = {t_re[base + j] + dr, t_im[base + j] + di};
            }
        }
    }
};

// Trapezoidal march of E' = i(C/2) G - kappa E along the propagation
// direction. `order` maps march index -> z row.
void march_field(const std::vector<cdouble>& G, bool reversed, cdouble bc,
                 double C, cdouble kappa, double dz, std::vector<cdouble>& E)
{
    const std::size_t n = G.size();
    E.resize(n);
    const cdouble ihalf{0.0, 0.5 * C};
    const cdouble den = 1.0 + kappa * dz * 0.5;
    const cdouble num = 1.0 - kappa * dz * 0.5;
    auto g_at = [&](std::size_t m) {
        return ihalf * G[reversed ? n - 1 - m : m];
    };
    cdouble cur = bc;
    E[reversed ? n - 1 : 0] = cur;
    for (std::size_t m = 0; m + 1 < n; ++m) {
        cur = (cur * num + 0.5 * dz * (g_at(m) + g_at(m + 1))) / den;
        E[reversed ? n - 2 - m : m + 1] = cur;
    }
}

double trapezoid_energy(const cdouble* x, std::size_t n, double dt)
{
    if (n < 2)
        return 0.0;
    double s = 0.5 * (std::norm(x[0]) + std::norm(x[n - 1]));
    for (std::size_t i = 1; i + 1 < n; ++i)
        s += std::norm(x[i]);
    return s * dt;
}

int resolve_threads(const RunOptions& opts)
{
#ifdef _OPENMP
    return opts.n_threads > 0 ? opts.n_threads : omp_get_max_threads();
#else
    (void)opts;
    return 1;
#endif
}

PulseEnvelope resample_double(const PulseEnvelope& p)
{
    PulseEnvelope r;
    r.grid.t_min = p.grid.t_min;
    r.grid.t_max = p.grid.t_max;
    r.grid.n_points = 2 * (p.grid.n_points - 1) + 1;
    r.grid.dt = p.grid.dt / 2.0;
    r.amplitude.assign(r.grid.n_points, cdouble{0.0, 0.0});
    for (std::size_t i = 0; i < p.grid.n_points; ++i) {
        r.amplitude[2 * i] = p.amplitude[i];
        if (i + 1 < p.grid.n_points)
            r.amplitude[2 * i + 1] = 0.5 * (p.amplitude[i] + p.amplitude[i + 1]);
    }
    return r;
}

} // namespace

double CoherenceField::total_excitation() const
{
    const std::size_t nd = n_delta();
    const double dz = n_z > 1 ? 1.0 / static_cast<double>(n_z - 1) : 1.0;
    double s = 0.0;
    for (std::size_t iz = 0; iz < n_z; ++iz)
        for (std::size_t j = 0; j < nd; ++j)
            s += quadrature.weights[j] * std::norm(values[iz * nd + j]);
    return s * dz;
}

AbsorbResult absorb(const PulseEnvelope& input, const MediumScenario& scenario,
                    const RunOptions& opts)
{
    scenario.validate();
    const TimeGrid& grid = input.grid;
    if (grid.n_points < 3 || grid.n_points % 2 == 0)
        throw std::invalid_argument("absorb: input grid must be symmetric with t=0 on it");
    const std::size_t mid = grid.mid();
    for (std::size_t k = mid + 1; k < grid.n_points; ++k)
        if (std::norm(input.amplitude[k]) != 0.0)
            throw std::invalid_argument("absorb: input must vanish for t > 0");

    AbsorbResult res;
    res.transmitted.grid = grid;
    res.transmitted.amplitude.assign(grid.n_points, cdouble{0.0, 0.0});
    res.coherence.n_z = scenario.n_z;
    res.coherence.quadrature = sample_distribution(scenario.line, scenario.n_delta);

    if (scenario.alphaL == 0.0) {  // no atoms: the field slides through
        for (std::size_t k = 0; k <= mid; ++k)
            res.transmitted.amplitude[k] = input.amplitude[k];
        res.coherence.values.assign(scenario.n_z * scenario.n_delta, cdouble{0.0, 0.0});
        return res;
    }

    const double C = coupling_strength(scenario.alphaL, scenario.line);
    const double dz = 1.0 / static_cast<double>(scenario.n_z - 1);
    const DetuningQuadrature& quad = res.coherence.quadrature;
    const PhaseCoefs coefs = make_coefs(quad, grid.dt, C);

    State st;
    st.n_threads = resolve_threads(opts);
    st.resize(scenario.n_z, quad.size());

    // at t_min the medium is dark; the (negligible) field is uniform
    std::vector<cdouble> E(scenario.n_z, input.amplitude[0]);
    std::vector<cdouble> s0(scenario.n_z * quad.size(), cdouble{0.0, 0.0});
    st.init_from(s0, E, coefs, quad);
    res.transmitted.amplitude[0] = input.amplitude[0];

    for (std::size_t k = 1; k <= mid; ++k) {
        march_field(st.row_sum, false, input.amplitude[k], C, coefs.kappa, dz, E);
        res.transmitted.amplitude[k] = E.back();
        if (k == mid) {
            st.snapshot(E, coefs, res.coherence.values);
            break;
        }
        st.advance(E, coefs);
    }
    return res;
}

CoherenceField apply_pi_pulses(const CoherenceField& coherence, Direction /*direction*/)
{
    // Perfect, instantaneous pi-pulse pair: sigma_out(z,0+) = sigma_in(z,0-)
    // for both propagation choices; the direction only selects which field
    // mode the coherence couples to afterwards.
    return coherence;
}

RetrieveResult retrieve(const CoherenceField& coherence, const MediumScenario& scenario,
                        const RunOptions& opts)
{
    scenario.validate();
    if (coherence.n_z != scenario.n_z || coherence.n_delta() != scenario.n_delta)
        throw std::invalid_argument("retrieve: coherence grid does not match scenario");

    const TimeGrid grid = make_time_grid(scenario.gammaT, scenario.window_factor,
                                         scenario.n_points);
    const std::size_t mid = grid.mid();
    const std::size_t n_out = grid.n_points - mid;  // samples at t = 0 .. t_max

    RetrieveResult res;
    res.pulse.grid = grid;
    res.pulse.amplitude.assign(grid.n_points, cdouble{0.0, 0.0});
    if (scenario.alphaL == 0.0)
        return res;

    const bool rev = scenario.direction == Direction::Backward;
    const double C = coupling_strength(scenario.alphaL, scenario.line);
    const double dz = 1.0 / static_cast<double>(scenario.n_z - 1);
    const DetuningQuadrature& quad = coherence.quadrature;

    // instantaneous field slaved to the freshly transferred coherence
    std::vector<cdouble> row_s(scenario.n_z);
    for (std::size_t iz = 0; iz < scenario.n_z; ++iz) {
        cdouble acc{0.0, 0.0};
        for (std::size_t j = 0; j < quad.size(); ++j)
            acc += quad.weights[j] * coherence.values[iz * quad.size() + j];
        row_s[iz] = acc;
    }
    std::vector<cdouble> E;
    march_field(row_s, rev, cdouble{0.0, 0.0}, C, cdouble{0.0, 0.0}, dz, E);
    res.pulse.amplitude[mid] = rev ? E.front() : E.back();

    const PhaseCoefs coefs = make_coefs(quad, grid.dt, C);
    State st;
    st.n_threads = resolve_threads(opts);
    st.resize(scenario.n_z, quad.size());
    st.init_from(coherence.values, E, coefs, quad);

    std::vector<cdouble> s_end, E_end;
    for (std::size_t k = 1; k < n_out; ++k) {
        march_field(st.row_sum, rev, cdouble{0.0, 0.0}, C, coefs.kappa, dz, E);
        res.pulse.amplitude[mid + k] = rev ? E.front() : E.back();
        if (k == n_out - 1) {
            st.snapshot(E, coefs, s_end);
            E_end = E;
            break;
        }
        st.advance(E, coefs);
    }
    res.energy = trapezoid_energy(res.pulse.amplitude.data() + mid, n_out, grid.dt);

    // coarse-step extension for the slow inhomogeneous-FID tail
    const double horizon = tail_horizon(scenario.line);
    if (grid.t_max < horizon) {
        const std::size_t n_tail =
            static_cast<std::size_t>(std::ceil((horizon - grid.t_max) / kTailDt));
        const PhaseCoefs tail_coefs = make_coefs(quad, kTailDt, C);
        st.init_from(s_end, E_end, tail_coefs, quad);
        cdouble prev = res.pulse.amplitude[grid.n_points - 1];
        double s = 0.5 * std::norm(prev);
        for (std::size_t k = 0; k < n_tail; ++k) {
            march_field(st.row_sum, rev, cdouble{0.0, 0.0}, C, tail_coefs.kappa, dz, E);
            const cdouble out = rev ? E.front() : E.back();
            s += (k + 1 < n_tail) ? std::norm(out) : 0.5 * std::norm(out);
            st.advance(E, tail_coefs);
        }
        res.tail_energy = s * kTailDt;
        res.energy += res.tail_energy;
    }
    return res;
}

MemoryResult run_memory(const PulseEnvelope& input, const MediumScenario& scenario,
                        const RunOptions& opts)
{
    MediumScenario scen = scenario;
    scen.n_points = input.grid.n_points;  // the input grid is authoritative
    auto ab = absorb(input, scen, opts);

    const std::size_t mid = input.grid.mid();
    const double e_in = trapezoid_energy(input.amplitude.data(), mid + 1, input.grid.dt);
    if (!(e_in > 0.0))
        throw std::invalid_argument("run_memory: input has no energy");
    const double e_trans =
        trapezoid_energy(ab.transmitted.amplitude.data(), mid + 1, input.grid.dt);

    auto coh = apply_pi_pulses(ab.coherence, scen.direction);
    auto ret = retrieve(coh, scen, opts);

    MemoryResult res;
    res.transmitted = std::move(ab.transmitted);
    res.retrieved = std::move(ret.pulse);
    res.eta_abs = 1.0 - e_trans / e_in;
    res.eta_total = ret.energy / e_in;
    res.tail_energy = ret.tail_energy / e_in;

    // distortion against the time-reversed input on the grid window
    const double e_ret_grid = pulse_energy(res.retrieved);
    if (e_ret_grid > 0.0) {
        PulseEnvelope target = time_reverse(input);
        const double e_t = pulse_energy(target);
        const cdouble ov = pulse_overlap(res.retrieved, target);
        res.distortion = 1.0 - std::norm(ov) / (e_ret_grid * e_t);
    } else {
        res.distortion = 1.0;
    }

    if (opts.check_refinement) {
        MediumScenario fine = scen;
        fine.n_z = 2 * scen.n_z;
        fine.n_delta = 2 * scen.n_delta;
        fine.n_points = 2 * (input.grid.n_points - 1) + 1;
        RunOptions sub = opts;
        sub.check_refinement = false;
        PulseEnvelope fine_input = resample_double(input);
        MemoryResult fine_res = run_memory(fine_input, fine, sub);
        res.refinement_checked = true;
        res.refinement_delta = std::abs(fine_res.eta_total - res.eta_total);
        res.refinement_ok = res.refinement_delta < 2e-3;
    }
    return res;
}

} // namespace fidmem::mb
