#include "ttplab/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ttplab/errors.hpp"
#include "ttplab/parallel.hpp"

namespace ttplab {

void tangent_frame(const Vec3& b, Vec3& e1, Vec3& e2) {
    Vec3 axis{1, 0, 0};
    double best = std::abs(b.x);
    if (std::abs(b.y) < best) {
        axis = {0, 1, 0};
        best = std::abs(b.y);
    }
    if (std::abs(b.z) < best) axis = {0, 0, 1};
    e1 = normalized(cross(b, axis));
    e2 = cross(b, e1);
}

double f1_gaussian(double rho, double v_th, double beta) {
    const double pi32 = std::pow(std::numbers::pi, 1.5);
    return 2.0 * rho / (pi32 * v_th * v_th * v_th) * std::exp(-beta * beta);
}

TTPState sample_ttp(const FieldScenario& scenario, const Vec3& r, double t, const P0Value& p0,
                    Rng& rng) {
    const FluidSample s = scenario.eval(r, t);
    const KineticFields kf = kinetic_fields(s, p0, scenario);
    if (!kf.b_defined)
        throw DegenerateGradientError("sample_ttp: b undefined at the spawn point");
    Vec3 e1, e2;
    tangent_frame(kf.b, e1, e2);
    TTPState out;
    out.r = r;
    out.t = t;
    out.beta = beta_thermal::sample(rng);
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    out.n = std::cos(phi) * e1 + std::sin(phi) * e2;
    return out;
}

MomentEstimate estimate_moments(const std::vector<TTPState>& samples,
                                const FieldScenario& scenario, double t, const P0Value& p0,
                                const Vec3& ref_point) {
    if (samples.size() < 30)
        throw InsufficientSamplesError("estimate_moments: need at least 30 samples");
    const FluidSample s = scenario.eval(ref_point, t);
    const KineticFields kf = kinetic_fields(s, p0, scenario);

    const std::size_t n = samples.size();
    const double sqrt_pi_over_2 = std::sqrt(std::numbers::pi) / 2.0;

    // Accumulate per-sample statistics, then their spread.
    double sum_rho = 0.0, sum_rho2 = 0.0;
    Vec3 sum_v{}, sum_v2{};
    double sum_p1 = 0.0, sum_p12 = 0.0;
    for (const TTPState& p : samples) {
        const Vec3 u = p.beta * kf.v_th * p.n;
        const double st_rho = s.rho * sqrt_pi_over_2 * p.beta;
        const Vec3 st_v = s.V + u;
        const double st_p1 = s.rho * norm2(u) / 3.0;
        sum_rho += st_rho;
        sum_rho2 += st_rho * st_rho;
        sum_v += st_v;
        sum_v2 += Vec3{st_v.x * st_v.x, st_v.y * st_v.y, st_v.z * st_v.z};
        sum_p1 += st_p1;
        sum_p12 += st_p1 * st_p1;
    }
    auto stderr_of = [n](double sum, double sum2) {
        const double mean = sum / n;
        const double var = std::max(0.0, sum2 / n - mean * mean);
        return std::sqrt(var / n);
    };

    MomentEstimate m;
    m.n_samples = n;
    m.rho_hat = sum_rho / n;
    m.rho_stderr = stderr_of(sum_rho, sum_rho2);
    m.rho_ref = s.rho;
    m.V_hat = sum_v / static_cast<double>(n);
    m.V_stderr = {stderr_of(sum_v.x, sum_v2.x), stderr_of(sum_v.y, sum_v2.y),
                  stderr_of(sum_v.z, sum_v2.z)};
    m.V_ref = s.V;
    m.p1_hat = sum_p1 / n;
    m.p1_stderr = stderr_of(sum_p1, sum_p12);
    m.p1_ref = kf.p1;
    return m;
}

namespace {

struct SharedP0Path {
    std::vector<P0Segment> segments;
    std::vector<std::array<double, 4>> ledger;
    PseudoPressureState final_state;
};

SharedP0Path advance_p0_path(const FieldScenario& scenario, const PseudoPressureState& p0_state,
                             const QuadratureGrid& grid, double t1, double dt) {
    SharedP0Path path;
    PseudoPressureState ps = p0_state;
    path.ledger.push_back({ps.t, ps.p0, ps.S_fM, ps.dS_T_dt});
    const int n_steps = static_cast<int>(std::llround((t1 - p0_state.t) / dt));
    for (int i = 0; i < n_steps; ++i) {
        P0Step step = advance_p0(ps, scenario, dt, grid);
        path.segments.push_back(step.segment);
        ps = step.state;
        path.ledger.push_back({ps.t, ps.p0, ps.S_fM, ps.dS_T_dt});
    }
    path.final_state = ps;
    return path;
}

TrajectoryResult run_against_path(const FieldScenario& scenario, const TTPState& initial,
                                  const SharedP0Path& path, double dt,
                                  const TrajectoryOptions& opts) {
    TrajectoryResult out;
    TTPState s = initial;
    Vec3 u_check{};
    bool track = opts.track_u_check;
    if (track) {
        const P0Value pv = path.segments.empty()
                               ? P0Value{path.final_state.p0, 0.0}
                               : path.segments.front().at(initial.t);
        const FluidSample fs = scenario.eval(s.r, s.t);
        const KineticFields kf = kinetic_fields(fs, pv, scenario);
        u_check = s.beta * kf.v_th * s.n;
    }

    auto record = [&](const TTPState& st, double tangency, const P0Value& pv) {
        const FluidSample fs = scenario.eval(st.r, st.t);
        const KineticFields kf = kinetic_fields(fs, pv, scenario);
        TrajectoryPoint pt;
        pt.t = st.t;
        pt.r = st.r;
        pt.n = st.n;
        pt.beta = st.beta;
        pt.tangency_defect = tangency;
        pt.u_mag = st.beta * kf.v_th;
        pt.beta_check = track ? norm(u_check) / kf.v_th : st.beta;
        out.points.push_back(pt);
    };

    try {
        {
            const P0Value pv0 = path.segments.empty() ? P0Value{path.final_state.p0, 0.0}
                                                      : path.segments.front().at(s.t);
            record(s, 0.0, pv0);
        }
        std::size_t step_idx = 0;
        for (const P0Segment& seg : path.segments) {
            StepDiagnostics diag;
            s = step_ttp(s, scenario, seg, dt, opts.step, &diag, track ? &u_check : nullptr);
            out.max_tangency_pre = std::max(out.max_tangency_pre, diag.tangency_pre);
            out.max_tangency_post = std::max(out.max_tangency_post, diag.tangency_post);
            out.max_norm_err = std::max(out.max_norm_err, diag.n_norm_err);
            if (track && s.beta > 0.0 && diag.v_th_end > 0.0) {
                const double beta_check = norm(u_check) / diag.v_th_end;
                out.max_beta_drift =
                    std::max(out.max_beta_drift, std::abs(beta_check - s.beta) / s.beta);
            }
            if (diag.degenerate_segment) out.status = TrajectoryStatus::Degenerate;
            ++step_idx;
            if (!diag.in_domain) {
                out.status = TrajectoryStatus::LeftDomain;
                out.message = "trajectory left the domain";
                record(s, diag.tangency_post, seg.at(s.t));
                break;
            }
            if (opts.record_every > 0 && step_idx % opts.record_every == 0)
                record(s, diag.tangency_post, seg.at(s.t));
        }
    } catch (const Error& e) {
        out.status = TrajectoryStatus::Failed;
        out.message = e.what();
    }
    out.final_state = s;
    out.u_check = u_check;
    return out;
}

}  // namespace

TrajectoryResult run_trajectory(const FieldScenario& scenario, const TTPState& initial,
                                const PseudoPressureState& p0_state, const QuadratureGrid& grid,
                                double t1, double dt, const TrajectoryOptions& opts) {
    SharedP0Path path = advance_p0_path(scenario, p0_state, grid, t1, dt);
    TrajectoryResult out = run_against_path(scenario, initial, path, dt, opts);
    out.p0_ledger = path.ledger;
    out.p0_final = path.final_state;
    return out;
}

BatchResult run_batch(const FieldScenario& scenario, const std::vector<TTPState>& initial,
                      const PseudoPressureState& p0_state, const QuadratureGrid& grid, double t1,
                      double dt, const TrajectoryOptions& opts, int n_threads) {
    SharedP0Path path = advance_p0_path(scenario, p0_state, grid, t1, dt);
    BatchResult out;
    out.particles.resize(initial.size());
    parallel_for(initial.size(), n_threads, [&](std::size_t i) {
        out.particles[i] = run_against_path(scenario, initial[i], path, dt, opts);
    });
    for (const auto& p : out.particles)
        if (p.status == TrajectoryStatus::Failed) ++out.failures;
    out.p0_ledger = path.ledger;
    out.p0_final = path.final_state;
    return out;
}

EnsembleResult evolve_ensemble(const EnsembleConfig& config, const FieldScenario& scenario,
                               const PseudoPressureState& p0_state, const QuadratureGrid& grid,
                               double t1, double dt, int snapshot_every, int n_threads) {
    if (config.n_particles < 1) throw ConfigError("evolve_ensemble: n_particles must be >= 1");
    std::vector<Vec3> cohorts = config.spawn_points;
    if (cohorts.empty()) {
        // Default cohort: center of the spawn region.
        cohorts.push_back(0.5 * (config.spawn_region.lo + config.spawn_region.hi));
    }
    for (const Vec3& c : cohorts)
        if (!scenario.domain().contains(c))
            throw ConfigError("evolve_ensemble: spawn point outside the scenario domain");

    const P0Value pv0{p0_state.p0, 0.0};
    std::vector<TTPState> particles(config.n_particles);
    std::vector<std::size_t> cohort_of(config.n_particles);
    parallel_for(config.n_particles, n_threads, [&](std::size_t i) {
        Rng rng = Rng::for_stream(config.seed, i);
        const std::size_t c = i % cohorts.size();
        cohort_of[i] = c;
        particles[i] = sample_ttp(scenario, cohorts[c], config.t0, pv0, rng);
    });

    EnsembleResult result;
    auto snapshot = [&](double t, const PseudoPressureState& ps,
                        const std::vector<TTPState>& states,
                        const std::vector<unsigned char>& alive) {
        EnsembleSnapshot snap;
        snap.t = t;
        snap.p0 = ps.p0;
        snap.S_fM = ps.S_fM;
        snap.dS_T_dt = ps.dS_T_dt;
        const P0Value pv{ps.p0, 0.0};
        for (std::size_t c = 0; c < cohorts.size(); ++c) {
            std::vector<TTPState> members;
            for (std::size_t i = 0; i < states.size(); ++i)
                if (cohort_of[i] == c && alive[i]) members.push_back(states[i]);
            if (members.size() >= 30) {
                // Spawn-point evaluation: members report against their origin.
                snap.cohorts.push_back(
                    estimate_moments(members, scenario, config.t0, pv0, cohorts[c]));
            } else if (!members.empty()) {
                MomentEstimate m;
                m.n_samples = members.size();
                snap.cohorts.push_back(m);
            }
        }
        (void)pv;
        result.snapshots.push_back(snap);
    };

    const int n_steps = std::max(0, static_cast<int>(std::llround((t1 - config.t0) / dt)));
    std::vector<unsigned char> alive(config.n_particles, 1);
    PseudoPressureState ps = p0_state;
    result.entropy_ledger.push_back({ps.t, ps.p0, ps.S_fM, ps.dS_T_dt});
    snapshot(config.t0, ps, particles, alive);

    TrajectoryOptions opts;
    opts.track_u_check = false;

    for (int step = 0; step < n_steps; ++step) {
        P0Step p0s = advance_p0(ps, scenario, dt, grid);
        std::vector<std::string> errors(config.n_particles);
        parallel_for(config.n_particles, n_threads, [&](std::size_t i) {
            if (!alive[i]) return;
            try {
                StepDiagnostics diag;
                particles[i] = step_ttp(particles[i], scenario, p0s.segment, dt, opts.step, &diag);
                if (!diag.in_domain) alive[i] = 0;
            } catch (const Error& e) {
                alive[i] = 0;
                errors[i] = e.what();
            }
        });
        ps = p0s.state;
        result.entropy_ledger.push_back({ps.t, ps.p0, ps.S_fM, ps.dS_T_dt});
        if (snapshot_every > 0 && (step + 1) % snapshot_every == 0)
            snapshot(ps.t, ps, particles, alive);
    }
    if (snapshot_every <= 0 || n_steps % std::max(snapshot_every, 1) != 0)
        snapshot(ps.t, ps, particles, alive);

    result.final_states = particles;
    for (auto a : alive)
        if (!a) ++result.failures;
    if (2 * result.failures > config.n_particles)
        throw Error("evolve_ensemble: more than half of the particles failed");
    return result;
}

VarianceCheck hre_variance_check(const FieldScenario& scenario, const Vec3& r, double t,
                                 const P0Value& p0, std::size_t n_samples, std::uint64_t seed) {
    const FluidSample s = scenario.eval(r, t);
    const KineticFields kf = kinetic_fields(s, p0, scenario);
    const double sigma = std::sqrt(kf.p1_hat);  // per-axis standard deviation

    double sum = 0.0, sum2 = 0.0;
    Rng rng = Rng::for_stream(seed, 0);
    for (std::size_t i = 0; i < n_samples; ++i) {
        const Vec3 dv{sigma * rng.normal(), sigma * rng.normal(), sigma * rng.normal()};
        const double stat = norm2(dv) / 3.0;
        sum += stat;
        sum2 += stat * stat;
    }
    VarianceCheck out;
    out.lhs = sum / n_samples;
    const double var = std::max(0.0, sum2 / n_samples - out.lhs * out.lhs);
    out.stderr_ = std::sqrt(var / n_samples);
    out.rhs = kf.p1_hat;
    return out;
}

}  // namespace ttplab
