#include "ttplab/stochastic.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

#include "ttplab/errors.hpp"
#include "ttplab/parallel.hpp"
#include "ttplab/quadrature.hpp"

namespace ttplab {

double StochasticModel::pdf(std::span<const double> alpha) const {
    if (alpha.size() != components.size())
        throw ConfigError("StochasticModel::pdf: alpha arity mismatch");
    double g = 1.0;
    for (std::size_t i = 0; i < components.size(); ++i) {
        const auto& c = components[i];
        switch (kind) {
            case StochasticKind::DeterministicDelta:
                throw ConfigError("pdf of a deterministic model is a distribution, not a function");
            case StochasticKind::Uniform: {
                if (c.width <= 0.0) throw ConfigError("uniform component needs positive width");
                const double lo = c.center - c.width, hi = c.center + c.width;
                g *= (alpha[i] >= lo && alpha[i] <= hi) ? 1.0 / (2.0 * c.width) : 0.0;
                break;
            }
            case StochasticKind::Gaussian: {
                if (c.width <= 0.0) throw ConfigError("gaussian component needs positive width");
                const double z = (alpha[i] - c.center) / c.width;
                g *= std::exp(-0.5 * z * z) / (c.width * std::sqrt(2.0 * std::numbers::pi));
                break;
            }
        }
    }
    return g;
}

std::vector<double> StochasticModel::sample(Rng& rng) const {
    std::vector<double> a(components.size());
    for (std::size_t i = 0; i < components.size(); ++i) {
        const auto& c = components[i];
        switch (kind) {
            case StochasticKind::DeterministicDelta:
                a[i] = c.center;
                break;
            case StochasticKind::Uniform:
                a[i] = rng.uniform(c.center - c.width, c.center + c.width);
                break;
            case StochasticKind::Gaussian:
                a[i] = c.center + c.width * rng.normal();
                break;
        }
    }
    return a;
}

std::vector<double> sample_alpha(const StochasticModel& model, Rng& rng) {
    return model.sample(rng);
}

StochasticModel::Quadrature StochasticModel::quadrature(int points_per_dim) const {
    Quadrature q;
    if (kind == StochasticKind::DeterministicDelta) {
        std::vector<double> node(components.size());
        for (std::size_t i = 0; i < components.size(); ++i) node[i] = components[i].center;
        q.nodes.push_back(node);
        q.weights.push_back(1.0);
        return q;
    }
    // Per-component 1D rules, then a tensor product.
    std::vector<std::vector<double>> xs(components.size()), ws(components.size());
    for (std::size_t i = 0; i < components.size(); ++i) {
        const auto& c = components[i];
        std::vector<double> x, w;
        if (kind == StochasticKind::Uniform) {
            gauss_legendre(points_per_dim, c.center - c.width, c.center + c.width, x, w);
            for (double& v : w) v /= 2.0 * c.width;
        } else {
            gauss_hermite(points_per_dim, x, w);
            const double norm = std::sqrt(std::numbers::pi);
            for (std::size_t k = 0; k < x.size(); ++k) {
                x[k] = c.center + std::sqrt(2.0) * c.width * x[k];
                w[k] /= norm;
            }
        }
        xs[i] = std::move(x);
        ws[i] = std::move(w);
    }
    std::vector<std::size_t> idx(components.size(), 0);
    while (true) {
        std::vector<double> node(components.size());
        double w = 1.0;
        for (std::size_t i = 0; i < components.size(); ++i) {
            node[i] = xs[i][idx[i]];
            w *= ws[i][idx[i]];
        }
        q.nodes.push_back(std::move(node));
        q.weights.push_back(w);
        std::size_t d = 0;
        while (d < idx.size() && ++idx[d] == xs[d].size()) {
            idx[d] = 0;
            ++d;
        }
        if (d == idx.size()) break;
    }
    return q;
}

StochasticModel StochasticModel::from_json(const nlohmann::json& j) {
    StochasticModel m;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "deterministic-delta") m.kind = StochasticKind::DeterministicDelta;
    else if (kind == "uniform") m.kind = StochasticKind::Uniform;
    else if (kind == "gaussian") m.kind = StochasticKind::Gaussian;
    else throw ConfigError("unknown stochastic model kind: " + kind);
    for (const auto& c : j.at("components"))
        m.components.push_back({c.at("center").get<double>(), c.value("width", 0.0)});
    if (m.components.empty()) throw ConfigError("stochastic model needs >= 1 component");
    return m;
}

nlohmann::json StochasticModel::to_json() const {
    nlohmann::json j;
    switch (kind) {
        case StochasticKind::DeterministicDelta: j["kind"] = "deterministic-delta"; break;
        case StochasticKind::Uniform: j["kind"] = "uniform"; break;
        case StochasticKind::Gaussian: j["kind"] = "gaussian"; break;
    }
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : components) comps.push_back({{"center", c.center}, {"width", c.width}});
    j["components"] = comps;
    return j;
}

Decomposition decompose(std::span<const double> values) {
    if (values.size() < 1) throw ConfigError("decompose: need at least one sample");
    Decomposition d;
    double sum = 0.0;
    for (double v : values) sum += v;
    d.mean = sum / values.size();
    d.fluctuations.reserve(values.size());
    for (double v : values) d.fluctuations.push_back(v - d.mean);
    return d;
}

Decomposition decompose(std::span<const double> values, std::span<const double> weights) {
    if (values.size() != weights.size() || values.empty())
        throw ConfigError("decompose: mismatched values/weights");
    Decomposition d;
    double sum = 0.0, wsum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        sum += weights[i] * values[i];
        wsum += weights[i];
    }
    d.mean = sum / wsum;
    d.fluctuations.reserve(values.size());
    for (double v : values) d.fluctuations.push_back(v - d.mean);
    return d;
}

KMTable kramers_moyal(const EventSamples& samples, int n_max, int u_axis) {
    const std::size_t m = samples.F.size();
    if (m != samples.rho.size() || m != samples.p1.size() || m != samples.u_th.size())
        throw ConfigError("kramers_moyal: inconsistent sample arrays");
    const bool weighted = !samples.weights.empty();
    if (weighted && samples.weights.size() != m)
        throw ConfigError("kramers_moyal: weights size mismatch");
    if (!weighted && m < 30)
        throw EstimationError("kramers_moyal: need >= 30 Monte-Carlo draws");
    if (n_max < 2) throw ConfigError("kramers_moyal: n_max must be >= 2");
    if (u_axis < 0 || u_axis > 2) throw ConfigError("kramers_moyal: u_axis out of range");

    std::vector<double> w(m, 1.0 / m);
    if (weighted) w = samples.weights;

    // Weighted means, then fluctuations.
    Vec3 F_mean{};
    double rho_mean = 0.0, p1_mean = 0.0;
    Vec3 u_mean{};
    double wsum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        F_mean += w[i] * samples.F[i];
        rho_mean += w[i] * samples.rho[i];
        p1_mean += w[i] * samples.p1[i];
        u_mean += w[i] * samples.u_th[i];
        wsum += w[i];
    }
    F_mean = F_mean / wsum;
    rho_mean /= wsum;
    p1_mean /= wsum;
    u_mean = u_mean / wsum;

    KMTable table;
    table.n_max = n_max;
    table.u_axis = u_axis;

    double factorial[16];
    factorial[0] = 1.0;
    for (int i = 1; i < 16; ++i) factorial[i] = factorial[i - 1] * i;

    for (int n = 2; n <= n_max; ++n) {
        for (int i = 0; i <= n; ++i)
            for (int j = 0; i + j <= n; ++j) {
                const int k = n - i - j;
                KMEntry entry;
                entry.order = {i, j, k};
                Vec3 acc{}, acc2{};
                for (std::size_t s = 0; s < m; ++s) {
                    const double drho = samples.rho[s] - rho_mean;
                    const double dp1 = samples.p1[s] - p1_mean;
                    const double du = samples.u_th[s][u_axis] - u_mean[u_axis];
                    double f = 1.0;
                    for (int c = 0; c < i; ++c) f *= drho;
                    for (int c = 0; c < j; ++c) f *= dp1;
                    for (int c = 0; c < k; ++c) f *= du;
                    const Vec3 dF = samples.F[s] - F_mean;
                    const Vec3 prod = f * dF;
                    acc += (w[s] / wsum) * prod;
                    acc2 += (w[s] / wsum) *
                            Vec3{prod.x * prod.x, prod.y * prod.y, prod.z * prod.z};
                }
                entry.value = (1.0 / factorial[n]) * acc;
                if (!weighted) {
                    for (int c = 0; c < 3; ++c) {
                        const double var = std::max(0.0, acc2[c] - acc[c] * acc[c]);
                        entry.stderr_[c] = std::sqrt(var / m) / factorial[n];
                    }
                }
                table.entries.push_back(entry);
            }
    }
    return table;
}

nlohmann::json km_to_json(const KMTable& table) {
    nlohmann::json j;
    j["n_max"] = table.n_max;
    j["u_axis"] = table.u_axis;
    j["layout"] = "C[i,j,k] = (1/n!) <dF (d_rho)^i (d_p1)^j (d_uth[axis])^k>, n=i+j+k";
    nlohmann::json entries = nlohmann::json::object();
    for (const auto& e : table.entries) {
        const std::string key = std::to_string(e.order[0]) + "," + std::to_string(e.order[1]) +
                                "," + std::to_string(e.order[2]);
        entries[key] = {{"value", {e.value.x, e.value.y, e.value.z}},
                        {"stderr", {e.stderr_.x, e.stderr_.y, e.stderr_.z}}};
    }
    j["entries"] = entries;
    return j;
}

OrderingReport ordering_report(const OrderingInput& in) {
    const std::size_t m = in.V.size();
    if (m == 0 || in.rho.size() != m || in.p1.size() != m || in.p0.size() != m ||
        in.f1_ref.size() != m)
        throw ConfigError("ordering_report: inconsistent input arrays");
    std::vector<double> w(m, 1.0 / m);
    if (!in.weights.empty()) {
        if (in.weights.size() != m) throw ConfigError("ordering_report: weights size mismatch");
        w = in.weights;
    }
    double wsum = 0.0;
    for (double v : w) wsum += v;

    Vec3 V_mean{};
    double rho_mean = 0.0, p0_mean = 0.0, f1_mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        V_mean += w[i] * in.V[i];
        rho_mean += w[i] * in.rho[i];
        p0_mean += w[i] * in.p0[i];
        f1_mean += w[i] * in.f1_ref[i];
    }
    V_mean = V_mean / wsum;
    rho_mean /= wsum;
    p0_mean /= wsum;
    f1_mean /= wsum;

    double dv2 = 0.0, drho2 = 0.0, df2 = 0.0, p_off = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        dv2 += (w[i] / wsum) * norm2(in.V[i] - V_mean);
        const double dr = in.rho[i] - rho_mean;
        drho2 += (w[i] / wsum) * dr * dr;
        const double df = in.f1_ref[i] - f1_mean;
        df2 += (w[i] / wsum) * df * df;
        p_off += (w[i] / wsum) * std::abs(in.p1[i] - in.p0[i]);
    }

    OrderingReport rep;
    const double vnorm = norm(V_mean);
    rep.zeta_V = vnorm > 0.0 ? std::sqrt(dv2) / vnorm : std::sqrt(dv2);
    rep.zeta_rho = rho_mean > 0.0 ? std::sqrt(drho2) / rho_mean : std::sqrt(drho2);
    rep.zeta_f = f1_mean > 0.0 ? std::sqrt(df2) / f1_mean : std::sqrt(df2);
    rep.zeta_p = p0_mean != 0.0 ? p_off / std::abs(p0_mean) : p_off;
    return rep;
}

OrderingInput ordering_samples(const FieldScenario& scenario, const StochasticModel& model,
                               const Vec3& r, double t, double beta_ref,
                               const std::vector<double>& p0_per_node, int points_per_dim) {
    const auto quad = model.quadrature(points_per_dim);
    if (p0_per_node.size() != quad.nodes.size())
        throw ConfigError("ordering_samples: p0_per_node size mismatch");
    OrderingInput in;
    in.weights = quad.weights;
    for (std::size_t a = 0; a < quad.nodes.size(); ++a) {
        const FieldScenario sa = scenario.resolved(quad.nodes[a]);
        const FluidSample s = sa.eval(r, t);
        const KineticFields kf = kinetic_fields(s, {p0_per_node[a], 0.0}, sa);
        in.V.push_back(s.V);
        in.rho.push_back(s.rho);
        in.p1.push_back(kf.p1);
        in.p0.push_back(p0_per_node[a]);
        in.f1_ref.push_back(f1_gaussian(s.rho, kf.v_th, beta_ref));
    }
    return in;
}

nlohmann::json ordering_to_json(const OrderingReport& r) {
    return {{"zeta_V", r.zeta_V}, {"zeta_p", r.zeta_p}, {"zeta_rho", r.zeta_rho},
            {"zeta_f", r.zeta_f}};
}

namespace {

std::vector<std::vector<double>> draw_alphas(const StochasticModel& model, std::size_t m_alpha,
                                             std::uint64_t seed) {
    std::vector<std::vector<double>> draws(m_alpha);
    for (std::size_t i = 0; i < m_alpha; ++i) {
        Rng rng = Rng::for_stream(seed, i);
        draws[i] = model.sample(rng);
    }
    return draws;
}

}  // namespace

LangevinBundle langevin_run(const FieldScenario& scenario, const LangevinSpec& spec,
                            const StochasticModel& model, std::size_t m_alpha, double t1,
                            double dt, std::uint64_t seed, const TrajectoryOptions& opts,
                            int n_threads, bool quadrature_mode) {
    std::vector<std::vector<double>> alphas;
    std::vector<double> weights;
    if (quadrature_mode) {
        const auto quad = model.quadrature(static_cast<int>(m_alpha));
        alphas = quad.nodes;
        weights = quad.weights;
    } else {
        alphas = draw_alphas(model, m_alpha, seed);
        weights.assign(alphas.size(), 1.0 / alphas.size());
    }

    LangevinBundle bundle;
    bundle.members.resize(alphas.size());
    parallel_for(alphas.size(), n_threads, [&](std::size_t i) {
        LangevinMemberSummary member;
        member.alpha = alphas[i];
        member.weight = weights[i];
        try {
            const FieldScenario sa = scenario.resolved(alphas[i]);
            const QuadratureGrid grid = sa.make_grid();
            PseudoPressureState ps = spec.solve_p0
                                         ? make_p0_state(sa, spec.t0, grid)
                                         : make_p0_state(sa, spec.t0, grid, spec.p0);
            member.p0_initial = ps.p0;
            // Spawn direction re-projected per draw: b depends on alpha.
            const FluidSample fs = sa.eval(spec.r0, spec.t0);
            const KineticFields kf = kinetic_fields(fs, {ps.p0, 0.0}, sa);
            if (!kf.b_defined)
                throw DegenerateGradientError("langevin_run: b undefined at spawn");
            Vec3 e1, e2;
            tangent_frame(kf.b, e1, e2);
            TTPState s0;
            s0.r = spec.r0;
            s0.t = spec.t0;
            s0.beta = spec.beta;
            s0.n = std::cos(spec.azimuth) * e1 + std::sin(spec.azimuth) * e2;
            member.trajectory = run_trajectory(sa, s0, ps, grid, t1, dt, opts);
        } catch (const Error& e) {
            member.trajectory.status = TrajectoryStatus::Failed;
            member.trajectory.message = e.what();
        }
        bundle.members[i] = std::move(member);
    });
    for (const auto& m : bundle.members)
        if (m.trajectory.status == TrajectoryStatus::Failed) ++bundle.failures;
    bundle.success_fraction =
        1.0 - static_cast<double>(bundle.failures) / std::max<std::size_t>(1, bundle.members.size());
    return bundle;
}

EventSamples langevin_event_samples(const FieldScenario& scenario, const LangevinSpec& spec,
                                    const StochasticModel& model, std::size_t m_alpha,
                                    std::uint64_t seed, bool quadrature_mode,
                                    int points_per_dim) {
    std::vector<std::vector<double>> alphas;
    EventSamples out;
    if (quadrature_mode) {
        const auto quad = model.quadrature(points_per_dim);
        alphas = quad.nodes;
        out.weights = quad.weights;
    } else {
        alphas = draw_alphas(model, m_alpha, seed);
    }
    for (const auto& a : alphas) {
        const FieldScenario sa = scenario.resolved(a);
        const QuadratureGrid grid = sa.make_grid();
        const double p0 = spec.solve_p0 ? solve_initial_p0(sa, spec.t0, grid) : spec.p0;
        const FluidSample fs = sa.eval(spec.r0, spec.t0);
        const KineticFields kf = kinetic_fields(fs, {p0, 0.0}, sa);
        if (!kf.b_defined)
            throw DegenerateGradientError("langevin_event_samples: b undefined at spawn");
        Vec3 e1, e2;
        tangent_frame(kf.b, e1, e2);
        TTPState s0;
        s0.r = spec.r0;
        s0.t = spec.t0;
        s0.beta = spec.beta;
        s0.n = std::cos(spec.azimuth) * e1 + std::sin(spec.azimuth) * e2;
        out.F.push_back(ttp_mean_field(sa, s0, {p0, 0.0}));
        out.rho.push_back(fs.rho);
        out.p1.push_back(kf.p1);
        out.u_th.push_back(spec.beta * kf.v_th * s0.n);
    }
    return out;
}

EntropyInequality entropy_inequality_check(const FieldScenario& scenario,
                                           const StochasticModel& model, double t,
                                           const QuadratureGrid& grid, int points_per_dim,
                                           int u_points) {
    const auto quad = model.quadrature(points_per_dim);
    std::vector<double> p0s(quad.nodes.size());
    for (std::size_t a = 0; a < quad.nodes.size(); ++a)
        p0s[a] = solve_initial_p0(scenario.resolved(quad.nodes[a]), t, grid);
    return entropy_inequality_at(scenario, model, t, grid, p0s, points_per_dim, u_points);
}

EntropyInequality entropy_inequality_at(const FieldScenario& scenario,
                                        const StochasticModel& model, double t,
                                        const QuadratureGrid& grid,
                                        const std::vector<double>& p0_per_node,
                                        int points_per_dim, int u_points) {
    const auto quad = model.quadrature(points_per_dim);
    const std::size_t m = quad.nodes.size();
    if (p0_per_node.size() != m)
        throw ConfigError("entropy_inequality_at: p0_per_node size mismatch");
    const std::vector<double>& p0s = p0_per_node;

    std::vector<FieldScenario> resolved;
    resolved.reserve(m);
    for (std::size_t a = 0; a < m; ++a) resolved.push_back(scenario.resolved(quad.nodes[a]));

    EntropyInequality out;
    // <S(f1)>: closed form per draw, S(f1) = S(f_M) - ln 2 * total mass.
    for (std::size_t a = 0; a < m; ++a) {
        const double S_fM = gaussian_entropy(resolved[a], p0s[a], t, grid);
        const double mass = grid.integrate(
            [&](const Vec3& r) { return resolved[a].eval(r, t).rho; });
        out.mean_of_S += quad.weights[a] * (S_fM - std::log(2.0) * mass);
    }

    // S(<f1>): mixture entropy by quadrature over (r, u); the mixture is
    // built on the physical speed axis shared by all draws.
    double v_th_max = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
        for (const Vec3& r : grid.nodes()) {
            const FluidSample s = resolved[a].eval(r, t);
            const KineticFields kf = kinetic_fields(s, {p0s[a], 0.0}, resolved[a]);
            v_th_max = std::max(v_th_max, kf.v_th);
        }
    }
    std::vector<double> ux, uw;
    gauss_legendre(u_points, 0.0, 8.0 * v_th_max, ux, uw);

    const auto& nodes = grid.nodes();
    const auto& w = grid.weights();
    double S_mix = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        // Cache per-draw (rho, v_th) at this point.
        std::vector<double> rho(m), vth(m);
        for (std::size_t a = 0; a < m; ++a) {
            const FluidSample s = resolved[a].eval(nodes[i], t);
            const KineticFields kf = kinetic_fields(s, {p0s[a], 0.0}, resolved[a]);
            rho[a] = s.rho;
            vth[a] = kf.v_th;
        }
        double inner = 0.0;
        for (std::size_t q = 0; q < ux.size(); ++q) {
            double fbar = 0.0;
            for (std::size_t a = 0; a < m; ++a)
                fbar += quad.weights[a] * f1_gaussian(rho[a], vth[a], ux[q] / vth[a]);
            if (fbar > 0.0) inner += uw[q] * ux[q] * ux[q] * (-fbar * std::log(fbar));
        }
        S_mix += w[i] * 2.0 * std::numbers::pi * inner;
    }
    out.S_of_mean = S_mix;
    return out;
}

}  // namespace ttplab
