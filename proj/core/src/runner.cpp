#include "ttplab/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include "ttplab/ensemble.hpp"
#include "ttplab/errors.hpp"
#include "ttplab/kinetics.hpp"
#include "ttplab/scenario.hpp"
#include "ttplab/stochastic.hpp"
#include "ttplab/ttp.hpp"

namespace ttplab {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 1469598103934665603ULL;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file for hashing: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string bytes = ss.str();
    return fnv1a64(bytes.data(), bytes.size());
}

namespace {

// Fixed-format doubles keep CSV output byte-stable.
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

class OutputSet {
  public:
    explicit OutputSet(const std::string& dir) : dir_(dir) { fs::create_directories(dir_); }

    void write(const std::string& name, const std::string& bytes) {
        const fs::path p = fs::path(dir_) / name;
        std::ofstream out(p, std::ios::binary);
        if (!out) throw Error("cannot open output file: " + p.string());
        out << bytes;
        out.close();
        records_.push_back({name, bytes.size(), fnv1a64(bytes.data(), bytes.size())});
    }

    void write_json(const std::string& name, const nlohmann::json& j) {
        write(name, j.dump(2) + "\n");
    }

    nlohmann::json manifest(const RunConfig& cfg, const nlohmann::json& extra) const {
        nlohmann::json m;
        m["command"] = cfg.doc.value("command", "");
        m["seed"] = cfg.seed;
        m["threads"] = cfg.threads;
        m["config_digest"] = hex64(config_digest(cfg));
        nlohmann::json outs = nlohmann::json::array();
        std::uint64_t combined = 1469598103934665603ULL;
        for (const auto& r : records_) {
            outs.push_back({{"path", r.name}, {"bytes", r.bytes}, {"fnv1a64", hex64(r.digest)}});
            combined ^= r.digest;
            combined *= 1099511628211ULL;
        }
        m["outputs"] = outs;
        m["content_digest"] = hex64(combined);
        for (auto& [k, v] : extra.items()) m[k] = v;
        return m;
    }

    static std::uint64_t config_digest(const RunConfig& cfg) {
        nlohmann::json c = cfg.doc;
        c["seed"] = cfg.seed;
        const std::string bytes = c.dump();
        return fnv1a64(bytes.data(), bytes.size());
    }

    const std::string& dir() const { return dir_; }

  private:
    struct Record {
        std::string name;
        std::size_t bytes;
        std::uint64_t digest;
    };
    std::string dir_;
    std::vector<Record> records_;
};

FieldScenario scenario_from_config(const nlohmann::json& doc) {
    const auto& s = doc.at("scenario");
    if (s.is_string()) {
        const std::string name = s.get<std::string>();
        if (name.size() > 5 && name.substr(name.size() - 5) == ".json")
            return FieldScenario::from_json_file(name);
        return FieldScenario::builtin(name);
    }
    return FieldScenario::from_json(s);
}

QuadratureGrid grid_from_config(const nlohmann::json& doc, const FieldScenario& sc) {
    if (doc.contains("grid_order")) {
        const auto& g = doc.at("grid_order");
        if (g.is_array())
            return QuadratureGrid(sc.domain(),
                                  {g.at(0).get<int>(), g.at(1).get<int>(), g.at(2).get<int>()});
        return QuadratureGrid(sc.domain(), g.get<int>());
    }
    return sc.make_grid();
}

PseudoPressureState p0_from_config(const nlohmann::json& doc, const FieldScenario& sc, double t0,
                                   const QuadratureGrid& grid) {
    if (doc.contains("p0") && doc.at("p0").is_number())
        return make_p0_state(sc, t0, grid, doc.at("p0").get<double>());
    return make_p0_state(sc, t0, grid);
}

TTPState particle_from_json(const nlohmann::json& p, const FieldScenario& sc, double t0,
                            const P0Value& pv) {
    const auto& rj = p.at("r");
    const Vec3 r{rj.at(0).get<double>(), rj.at(1).get<double>(), rj.at(2).get<double>()};
    if (p.contains("u")) {
        const auto& uj = p.at("u");
        const Vec3 u{uj.at(0).get<double>(), uj.at(1).get<double>(), uj.at(2).get<double>()};
        return init_ttp(r, u, t0, pv, sc);
    }
    const double beta = p.at("beta").get<double>();
    const double az = p.value("azimuth", 0.0);
    const FluidSample fs = sc.eval(r, t0);
    const KineticFields kf = kinetic_fields(fs, pv, sc);
    if (!kf.b_defined) throw DegenerateGradientError("particle spawn: b undefined");
    Vec3 e1, e2;
    tangent_frame(kf.b, e1, e2);
    TTPState s;
    s.r = r;
    s.t = t0;
    s.beta = beta;
    s.n = std::cos(az) * e1 + std::sin(az) * e2;
    return s;
}

std::string trajectory_csv(const TrajectoryResult& res) {
    std::string csv = "t,r_x,r_y,r_z,n_x,n_y,n_z,beta,tangency_defect,u_mag\n";
    for (const auto& p : res.points) {
        csv += fmt(p.t) + "," + fmt(p.r.x) + "," + fmt(p.r.y) + "," + fmt(p.r.z) + "," +
               fmt(p.n.x) + "," + fmt(p.n.y) + "," + fmt(p.n.z) + "," + fmt(p.beta) + "," +
               fmt(p.tangency_defect) + "," + fmt(p.u_mag) + "\n";
    }
    return csv;
}

std::string ledger_csv(const std::vector<std::array<double, 4>>& rows) {
    std::string csv = "t,p0,S_fM,dS_T_dt\n";
    for (const auto& r : rows)
        csv += fmt(r[0]) + "," + fmt(r[1]) + "," + fmt(r[2]) + "," + fmt(r[3]) + "\n";
    return csv;
}

const char* status_name(TrajectoryStatus s) {
    switch (s) {
        case TrajectoryStatus::Ok: return "ok";
        case TrajectoryStatus::LeftDomain: return "left-domain";
        case TrajectoryStatus::Degenerate: return "degenerate";
        case TrajectoryStatus::Failed: return "failed";
    }
    return "unknown";
}

nlohmann::json moment_json(const MomentEstimate& m) {
    return {{"n_samples", m.n_samples},
            {"rho_hat", m.rho_hat},
            {"rho_stderr", m.rho_stderr},
            {"rho_ref", m.rho_ref},
            {"V_hat", {m.V_hat.x, m.V_hat.y, m.V_hat.z}},
            {"V_stderr", {m.V_stderr.x, m.V_stderr.y, m.V_stderr.z}},
            {"V_ref", {m.V_ref.x, m.V_ref.y, m.V_ref.z}},
            {"p1_hat", m.p1_hat},
            {"p1_stderr", m.p1_stderr},
            {"p1_ref", m.p1_ref}};
}

int cmd_simulate(const RunConfig& cfg, OutputSet& out) {
    const FieldScenario sc = scenario_from_config(cfg.doc);
    const QuadratureGrid grid = grid_from_config(cfg.doc, sc);
    const double t0 = cfg.doc.value("t0", sc.t_begin());
    const double t1 = cfg.doc.at("t1").get<double>();
    const double dt = cfg.doc.at("dt").get<double>();
    if (dt <= 0.0 || t1 <= t0) throw ConfigError("simulate: require dt > 0 and t1 > t0");

    PseudoPressureState ps = p0_from_config(cfg.doc, sc, t0, grid);
    const P0Value pv{ps.p0, 0.0};

    std::vector<TTPState> particles;
    for (const auto& pj : cfg.doc.at("particles")) {
        particles.push_back(particle_from_json(pj, sc, t0, pv));
    }

    TrajectoryOptions opts;
    opts.record_every = cfg.doc.value("record_every", 1);
    opts.track_u_check = cfg.doc.value("track_u_check", true);

    BatchResult batch = run_batch(sc, particles, ps, grid, t1, dt, opts, cfg.threads);

    nlohmann::json summary = nlohmann::json::array();
    for (std::size_t i = 0; i < batch.particles.size(); ++i) {
        const auto& res = batch.particles[i];
        const std::string name = "trajectory_" + std::to_string(i) + ".csv";
        out.write(name, trajectory_csv(res));
        summary.push_back({{"file", name},
                           {"status", status_name(res.status)},
                           {"message", res.message},
                           {"beta", res.final_state.beta},
                           {"max_beta_drift", res.max_beta_drift},
                           {"max_tangency_pre", res.max_tangency_pre},
                           {"max_tangency_post", res.max_tangency_post},
                           {"max_norm_err", res.max_norm_err}});
    }
    out.write("p0_ledger.csv", ledger_csv(batch.p0_ledger));
    out.write_json("manifest.json",
                   out.manifest(cfg, {{"particles", summary}, {"status", "ok"}}));
    return 0;
}

int cmd_ensemble(const RunConfig& cfg, OutputSet& out) {
    const FieldScenario sc = scenario_from_config(cfg.doc);
    const QuadratureGrid grid = grid_from_config(cfg.doc, sc);
    const double t0 = cfg.doc.value("t0", sc.t_begin());
    const double t1 = cfg.doc.value("t1", t0);
    const double dt = cfg.doc.value("dt", 1e-2);

    EnsembleConfig ec;
    ec.n_particles = cfg.doc.at("n_particles").get<std::size_t>();
    ec.seed = cfg.seed;
    ec.t0 = t0;
    if (cfg.doc.contains("spawn_points")) {
        for (const auto& pj : cfg.doc.at("spawn_points"))
            ec.spawn_points.push_back(
                {pj.at(0).get<double>(), pj.at(1).get<double>(), pj.at(2).get<double>()});
    }
    ec.spawn_region = sc.domain();

    PseudoPressureState ps = p0_from_config(cfg.doc, sc, t0, grid);
    const int snapshot_every = cfg.doc.value("snapshot_every", 0);

    EnsembleResult res = evolve_ensemble(ec, sc, ps, grid, t1, dt, snapshot_every, cfg.threads);

    nlohmann::json snaps = nlohmann::json::array();
    for (const auto& s : res.snapshots) {
        nlohmann::json cj = nlohmann::json::array();
        for (const auto& m : s.cohorts) cj.push_back(moment_json(m));
        snaps.push_back({{"t", s.t}, {"p0", s.p0}, {"S_fM", s.S_fM}, {"dS_T_dt", s.dS_T_dt},
                         {"cohorts", cj}});
    }
    nlohmann::json summary{{"config",
                            {{"n_particles", ec.n_particles},
                             {"seed", ec.seed},
                             {"t0", t0},
                             {"t1", t1},
                             {"dt", dt}}},
                           {"snapshots", snaps},
                           {"failures", res.failures}};
    out.write_json("ensemble_summary.json", summary);
    out.write("entropy_ledger.csv", ledger_csv(res.entropy_ledger));
    if (cfg.emit_plot_data && !res.snapshots.empty()) {
        std::string csv = "t,p0,S_fM,rho_hat,p1_hat\n";
        for (const auto& s : res.snapshots) {
            const double rho = s.cohorts.empty() ? 0.0 : s.cohorts[0].rho_hat;
            const double p1 = s.cohorts.empty() ? 0.0 : s.cohorts[0].p1_hat;
            csv += fmt(s.t) + "," + fmt(s.p0) + "," + fmt(s.S_fM) + "," + fmt(rho) + "," +
                   fmt(p1) + "\n";
        }
        out.write("moments.csv", csv);
    }
    out.write_json("manifest.json", out.manifest(cfg, {{"status", "ok"}}));
    return 0;
}

int cmd_stochastic(const RunConfig& cfg, OutputSet& out) {
    const FieldScenario sc = scenario_from_config(cfg.doc);
    const StochasticModel model = StochasticModel::from_json(cfg.doc.at("model"));
    const double t1 = cfg.doc.at("t1").get<double>();
    const double dt = cfg.doc.at("dt").get<double>();
    const std::size_t m_alpha = cfg.doc.value("m_alpha", std::size_t{8});
    const bool quadrature = cfg.doc.value("mode", std::string("mc")) == "quadrature";

    LangevinSpec spec;
    const auto& tj = cfg.doc.at("ttp0");
    const auto& rj = tj.at("r");
    spec.r0 = {rj.at(0).get<double>(), rj.at(1).get<double>(), rj.at(2).get<double>()};
    spec.beta = tj.at("beta").get<double>();
    spec.azimuth = tj.value("azimuth", 0.0);
    spec.t0 = cfg.doc.value("t0", sc.t_begin());
    if (cfg.doc.contains("p0") && cfg.doc.at("p0").is_number()) {
        spec.solve_p0 = false;
        spec.p0 = cfg.doc.at("p0").get<double>();
    }

    TrajectoryOptions opts;
    opts.record_every = cfg.doc.value("record_every", 1);

    LangevinBundle bundle =
        langevin_run(sc, spec, model, m_alpha, t1, dt, cfg.seed, opts, cfg.threads, quadrature);

    nlohmann::json members = nlohmann::json::array();
    for (std::size_t i = 0; i < bundle.members.size(); ++i) {
        const auto& m = bundle.members[i];
        nlohmann::json mj{{"alpha", m.alpha},
                          {"weight", m.weight},
                          {"p0_initial", m.p0_initial},
                          {"status", status_name(m.trajectory.status)},
                          {"max_beta_drift", m.trajectory.max_beta_drift}};
        if (cfg.emit_plot_data) {
            const std::string name = "member_" + std::to_string(i) + ".csv";
            out.write(name, trajectory_csv(m.trajectory));
            mj["file"] = name;
        }
        members.push_back(mj);
    }

    EventSamples ev = langevin_event_samples(sc, spec, model, m_alpha, cfg.seed, quadrature);
    const int km_orders = cfg.doc.value("km_orders", 2);
    nlohmann::json kmj;
    try {
        kmj = km_to_json(kramers_moyal(ev, km_orders));
    } catch (const EstimationError& e) {
        kmj = {{"error", e.what()}};
    }
    out.write_json("km_table.json", kmj);

    OrderingInput oi;
    oi.weights = ev.weights;
    oi.V.resize(ev.F.size());
    oi.rho = ev.rho;
    oi.p1 = ev.p1;
    oi.p0.assign(ev.rho.size(), bundle.members.empty() ? 0.0 : bundle.members[0].p0_initial);
    oi.f1_ref.resize(ev.rho.size());
    for (std::size_t i = 0; i < bundle.members.size() && i < oi.p0.size(); ++i)
        oi.p0[i] = bundle.members[i].p0_initial;
    for (std::size_t i = 0; i < ev.rho.size(); ++i) {
        const FieldScenario sa = sc.resolved(
            i < bundle.members.size() ? std::span<const double>(bundle.members[i].alpha)
                                      : std::span<const double>{});
        const FluidSample fs = sa.eval(spec.r0, spec.t0);
        oi.V[i] = fs.V;
        const KineticFields kf = kinetic_fields(fs, {oi.p0[i], 0.0}, sa);
        oi.f1_ref[i] = f1_gaussian(fs.rho, kf.v_th, spec.beta);
    }
    out.write_json("ordering.json", ordering_to_json(ordering_report(oi)));

    out.write_json("bundle_summary.json",
                   {{"members", members},
                    {"failures", bundle.failures},
                    {"success_fraction", bundle.success_fraction},
                    {"model", model.to_json()}});
    out.write_json("manifest.json", out.manifest(cfg, {{"status", "ok"}}));
    return 0;
}

int cmd_residuals(const RunConfig& cfg, OutputSet& out) {
    const FieldScenario sc = scenario_from_config(cfg.doc);
    const int n_axis = cfg.doc.value("samples_per_axis", 5);
    const int n_times = cfg.doc.value("n_times", 5);
    const double t0 = cfg.doc.value("t0", sc.t_begin());
    const double t1 = cfg.doc.value("t1", std::min(sc.t_end(), t0 + 1.0));

    double max_continuity = 0.0, max_momentum = 0.0, max_fourier = 0.0;
    const Box3& d = sc.domain();
    for (int it = 0; it < n_times; ++it) {
        const double t = n_times == 1 ? t0 : t0 + (t1 - t0) * it / (n_times - 1);
        for (int ix = 0; ix < n_axis; ++ix)
            for (int iy = 0; iy < n_axis; ++iy)
                for (int iz = 0; iz < n_axis; ++iz) {
                    const Vec3 r{
                        d.lo.x + (d.hi.x - d.lo.x) * (ix + 0.5) / n_axis,
                        d.lo.y + (d.hi.y - d.lo.y) * (iy + 0.5) / n_axis,
                        d.lo.z + (d.hi.z - d.lo.z) * (iz + 0.5) / n_axis};
                    const Residuals res = residuals(sc, r, t);
                    max_continuity = std::max(max_continuity, std::abs(res.continuity));
                    max_momentum = std::max(max_momentum, norm(res.momentum));
                    max_fourier = std::max(max_fourier, std::abs(res.fourier));
                }
    }
    nlohmann::json rj{{"scenario", sc.id()},
                      {"samples_per_axis", n_axis},
                      {"n_times", n_times},
                      {"max_continuity", max_continuity},
                      {"max_momentum", max_momentum},
                      {"max_fourier", max_fourier},
                      {"governs_fourier", sc.governs_fourier()}};
    out.write_json("residuals.json", rj);
    out.write_json("manifest.json", out.manifest(cfg, {{"status", "ok"}}));
    return 0;
}

int cmd_p0_solve(const RunConfig& cfg, OutputSet& out) {
    const FieldScenario sc = scenario_from_config(cfg.doc);
    const QuadratureGrid grid = grid_from_config(cfg.doc, sc);
    const double t0 = cfg.doc.value("t0", sc.t_begin());

    const double p0 = solve_initial_p0(sc, t0, grid);
    const double S = gaussian_entropy(sc, p0, t0, grid);
    double min_p1 = std::numeric_limits<double>::infinity();
    for (const Vec3& r : grid.nodes()) {
        const FluidSample s = sc.eval(r, t0);
        min_p1 = std::min(min_p1, (s.psi + p0 * s.inv_rho) * s.rho);
    }
    out.write_json("manifest.json",
                   out.manifest(cfg, {{"status", "ok"},
                                      {"p0", p0},
                                      {"S_fM", S},
                                      {"min_p1", min_p1},
                                      {"p0_inf", p0_infimum(sc, t0, grid)}}));
    return 0;
}

int cmd_check(const RunConfig& cfg, OutputSet& out) {
    int passed = 0, failed = 0;
    nlohmann::json checks = nlohmann::json::array();
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        checks.push_back({{"name", name}, {"ok", ok}, {"detail", detail}});
        std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
        (ok ? passed : failed) += 1;
    };

    for (const std::string id :
         {"uniform", "rigid-rotation", "taylor-green", "manufactured-compressible"}) {
        const FieldScenario sc = FieldScenario::builtin(id);
        double worst = 0.0;
        const Box3& d = sc.domain();
        for (int ix = 0; ix < 4; ++ix)
            for (int iy = 0; iy < 4; ++iy) {
                const Vec3 r{d.lo.x + (d.hi.x - d.lo.x) * (ix + 0.5) / 4,
                             d.lo.y + (d.hi.y - d.lo.y) * (iy + 0.5) / 4,
                             0.5 * (d.lo.z + d.hi.z)};
                const double t = 0.5 * (sc.t_begin() + std::min(sc.t_end(), sc.t_begin() + 1.0));
                const Residuals res = residuals(sc, r, t);
                worst = std::max({worst, std::abs(res.continuity), norm(res.momentum),
                                  sc.governs_fourier() ? std::abs(res.fourier) : 0.0});
            }
        const double tol = (id == "manufactured-compressible") ? 1e-8 : 1e-10;
        report("residuals/" + id, worst < tol, "max " + fmt(worst) + " tol " + fmt(tol));
    }

    {
        const FieldScenario sc = FieldScenario::builtin("taylor-green");
        const double dev = fd_check(sc, {2.1, 1.7, 0.5}, 0.3, 1e-4);
        report("fd-check/taylor-green", dev < 1e-6, "max relative deviation " + fmt(dev));
    }
    {
        FieldScenario sc = FieldScenario::builtin("uniform");
        sc.set_param("pressure", 0.0);
        sc.set_param("vx", 1.0);
        const QuadratureGrid grid = sc.make_grid();
        const double p0 = solve_initial_p0(sc, 0.0, grid);
        const double expect = 1.0 / (2.0 * std::numbers::pi * std::numbers::e);
        report("p0-solve/uniform-unit", std::abs(p0 - expect) < 1e-8,
               "p0 " + fmt(p0) + " expected " + fmt(expect));
    }
    {
        const FieldScenario sc = FieldScenario::builtin("rigid-rotation");
        const P0Value pv{1.0, 0.0};
        double worst = 0.0;
        Rng rng(12345);
        for (int i = 0; i < 100; ++i) {
            const double R = 0.7 + 0.6 * rng.uniform();
            const double th = rng.uniform(0.0, 2 * std::numbers::pi);
            const Vec3 r{R * std::cos(th), R * std::sin(th), 0.0};
            const FluidSample fs = sc.eval(r, 0.0);
            const KineticFields kf = kinetic_fields(fs, pv, sc);
            Vec3 e1, e2;
            tangent_frame(kf.b, e1, e2);
            const double az = rng.uniform(0.0, 2 * std::numbers::pi);
            TTPState s;
            s.r = r;
            s.t = 0.0;
            s.beta = 0.2 + rng.uniform();
            s.n = std::cos(az) * e1 + std::sin(az) * e2;
            const Vec3 om = omega(sc, s, pv);
            const Vec3 xi = vorticity(fs);
            worst = std::max(worst, std::abs(dot(om, kf.b) + dot(xi, kf.b)));
            const Vec3 lhs = ttp_mean_field(sc, s, pv);
            const Vec3 rhs = itp_mean_field_gaussian(
                                 sc, {s.r, s.beta * kf.v_th * s.n, s.t}, pv) +
                             gauge_field_ttp(sc, s, pv);
            worst = std::max(worst, norm(lhs - rhs));
        }
        report("identities/omega-and-force", worst < 1e-10, "max defect " + fmt(worst));
    }

    out.write_json("check_report.json",
                   {{"passed", passed}, {"failed", failed}, {"checks", checks}});
    out.write_json("manifest.json",
                   out.manifest(cfg, {{"status", failed == 0 ? "ok" : "failed"},
                                      {"passed", passed},
                                      {"failed", failed}}));
    std::printf("%d passed, %d failed\n", passed, failed);
    return failed == 0 ? 0 : 3;
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
    RunConfig cfg;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    try {
        in >> cfg.doc;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    cfg.seed = cfg.doc.value("seed", std::uint64_t{0});
    return cfg;
}

int run(const RunConfig& config) {
    OutputSet out(config.out_dir);
    try {
        if (!config.doc.contains("command"))
            throw ConfigError("config must carry a \"command\" field");
        const std::string cmd = config.doc.at("command").get<std::string>();
        if (cmd == "simulate") return cmd_simulate(config, out);
        if (cmd == "ensemble") return cmd_ensemble(config, out);
        if (cmd == "stochastic") return cmd_stochastic(config, out);
        if (cmd == "residuals") return cmd_residuals(config, out);
        if (cmd == "p0-solve") return cmd_p0_solve(config, out);
        if (cmd == "check") return cmd_check(config, out);
        throw ConfigError("unknown command: " + cmd);
    } catch (const ConfigError& e) {
        out.write_json("error_report.json", {{"error", "config"}, {"message", e.what()}});
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const nlohmann::json::exception& e) {
        out.write_json("error_report.json", {{"error", "config"}, {"message", e.what()}});
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        out.write_json("error_report.json", {{"error", "numerical"}, {"message", e.what()}});
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        out.write_json("error_report.json", {{"error", "internal"}, {"message", e.what()}});
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 3;
    }
}

}  // namespace ttplab
