#include "ttplab/scenario.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ttplab/errors.hpp"

namespace ttplab {

namespace {

// Scalar field with the derivatives every kernel must provide.
struct Scal {
    double val = 0.0, dt = 0.0;
    Vec3 grad{}, dt_grad{};
    Mat3 hess{};
};

struct VecField {
    Vec3 val{}, dt{}, lap{}, grad_div{};
    Mat3 grad{};
    double div = 0.0;
};

struct Bundles {
    Scal rho, p, T, phi;
    VecField V;
    Vec3 f_R{};
    double J_ext = 0.0;
};

double get(const std::map<std::string, double>& m, const std::string& k) {
    auto it = m.find(k);
    if (it == m.end()) throw ConfigError("missing scenario parameter: " + k);
    return it->second;
}

Bundles eval_uniform(const std::map<std::string, double>& q, const Vec3&, double) {
    Bundles b;
    b.V.val = {get(q, "vx"), get(q, "vy"), get(q, "vz")};
    b.rho.val = get(q, "rho0");
    b.p.val = get(q, "pressure");
    b.T.val = get(q, "temperature");
    return b;
}

Bundles eval_rigid_rotation(const std::map<std::string, double>& q, const Vec3& r, double) {
    Bundles b;
    const double om = get(q, "omega");
    const double rho0 = get(q, "rho0");
    b.rho.val = rho0;
    b.T.val = get(q, "temperature");

    b.V.val = {-om * r.y, om * r.x, 0.0};
    b.V.grad(0, 1) = -om;
    b.V.grad(1, 0) = om;

    // Centrifugal pressure balances V . grad V exactly.
    const double c = rho0 * om * om;
    b.p.val = 0.5 * c * (r.x * r.x + r.y * r.y);
    b.p.grad = {c * r.x, c * r.y, 0.0};
    b.p.hess(0, 0) = c;
    b.p.hess(1, 1) = c;
    return b;
}

Bundles eval_taylor_green(const std::map<std::string, double>& q, const Vec3& r, double t,
                          double mu) {
    Bundles b;
    const double U = get(q, "U0");
    const double rho0 = get(q, "rho0");
    const double nu = mu / rho0;
    const double F = std::exp(-2.0 * nu * t);
    const double F2 = F * F;

    b.rho.val = rho0;
    b.T.val = get(q, "temperature");

    const double sx = std::sin(r.x), cx = std::cos(r.x);
    const double sy = std::sin(r.y), cy = std::cos(r.y);

    b.V.val = {U * F * sx * cy, -U * F * cx * sy, 0.0};
    b.V.dt = -2.0 * nu * b.V.val;
    b.V.grad(0, 0) = U * F * cx * cy;
    b.V.grad(0, 1) = -U * F * sx * sy;
    b.V.grad(1, 0) = U * F * sx * sy;
    b.V.grad(1, 1) = -U * F * cx * cy;
    b.V.lap = -2.0 * b.V.val;

    // Offset keeps p >= 0 while leaving grad p (the only dynamically
    // relevant part) unchanged.
    const double qp = 0.25 * rho0 * U * U;
    const double s2x = std::sin(2 * r.x), c2x = std::cos(2 * r.x);
    const double s2y = std::sin(2 * r.y), c2y = std::cos(2 * r.y);
    b.p.val = qp * F2 * (2.0 + c2x + c2y);
    b.p.dt = -4.0 * nu * b.p.val;
    b.p.grad = {-2.0 * qp * F2 * s2x, -2.0 * qp * F2 * s2y, 0.0};
    b.p.dt_grad = -4.0 * nu * b.p.grad;
    b.p.hess(0, 0) = -4.0 * qp * F2 * c2x;
    b.p.hess(1, 1) = -4.0 * qp * F2 * c2y;
    return b;
}

Bundles eval_shear(const std::map<std::string, double>& q, const Vec3& r, double) {
    Bundles b;
    const double g = get(q, "gamma");
    b.rho.val = get(q, "rho0");
    b.p.val = get(q, "pressure");
    b.T.val = get(q, "temperature");
    b.V.val = {g * r.y, 0.0, 0.0};
    b.V.grad(0, 1) = g;
    return b;
}

// Steady compressible thermofluid with closed-form balancing force and
// external heating:
//   rho(x) = rho_c + rho_a cos x,   V = (m0/rho, 0, 0)   (exact continuity)
//   p(x)   = p_c + p_a sin x,       T(y) = T_c + T_a cos y
//   phi(x) = phi_a (1 - cos x)      (phi = 0 at the reference point x = 0)
//   f_R    = rho W W' + p' + phi' - (4mu/3 + lambda) W''   along x
//   J_ext  chosen so the heat production rate vanishes identically.
Bundles eval_manufactured(const std::map<std::string, double>& q, const Vec3& r, double,
                          double mu, double lambda, double k_cond, double alpha_coef,
                          double beta_T, double m_ref) {
    Bundles b;
    const double rho_c = get(q, "rho_c"), rho_a = get(q, "rho_a");
    const double m0 = get(q, "m0");
    const double p_c = get(q, "p_c"), p_a = get(q, "p_a");
    const double T_c = get(q, "T_c"), T_a = get(q, "T_a");
    const double phi_a = get(q, "phi_a");

    const double sx = std::sin(r.x), cx = std::cos(r.x);
    const double sy = std::sin(r.y), cy = std::cos(r.y);

    const double rho = rho_c + rho_a * cx;
    const double rho_x = -rho_a * sx;
    const double rho_xx = -rho_a * cx;
    b.rho.val = rho;
    b.rho.grad = {rho_x, 0, 0};
    b.rho.hess(0, 0) = rho_xx;

    b.p.val = p_c + p_a * sx;
    b.p.grad = {p_a * cx, 0, 0};
    b.p.hess(0, 0) = -p_a * sx;

    b.T.val = T_c + T_a * cy;
    b.T.grad = {0, -T_a * sy, 0};
    b.T.hess(1, 1) = -T_a * cy;

    b.phi.val = phi_a * (1.0 - cx);
    b.phi.grad = {phi_a * sx, 0, 0};
    b.phi.hess(0, 0) = phi_a * cx;

    const double W = m0 / rho;
    const double Wp = -m0 * rho_x / (rho * rho);
    const double Wpp = -m0 * rho_xx / (rho * rho) + 2.0 * m0 * rho_x * rho_x / (rho * rho * rho);
    b.V.val = {W, 0, 0};
    b.V.grad(0, 0) = Wp;
    b.V.div = Wp;
    b.V.lap = {Wpp, 0, 0};
    b.V.grad_div = {Wpp, 0, 0};

    const double visc = (4.0 / 3.0) * mu + lambda;
    const double fRx = rho * W * Wp + b.p.grad.x + b.phi.grad.x - visc * Wpp;
    b.f_R = {fRx, 0, 0};

    // Heat bookkeeping: Phi = (4mu/3 + lambda) W'^2, f_x = -phi' + f_Rx,
    // n J_ext = W f_x + (beta_T n - alpha T) W p' + p W' - Phi - k T''.
    const double n = rho / m_ref;
    const double fx = -b.phi.grad.x + fRx;
    const double Phi = visc * Wp * Wp;
    const double Tpp = b.T.hess(1, 1);
    const double nJext = W * fx + (beta_T * n - alpha_coef * b.T.val) * W * b.p.grad.x +
                         b.p.val * Wp - Phi - k_cond * Tpp;
    b.J_ext = nJext * m_ref / rho;
    return b;
}

// psi = (p - phi)/rho + T/m and 1/rho, with full derivative sets assembled
// from the primitive bundles by the product rule.
void assemble(const Bundles& b, double m_ref, FluidSample& s) {
    s.rho = b.rho.val;
    s.p = b.p.val;
    s.T = b.T.val;
    s.phi = b.phi.val;
    s.V = b.V.val;
    s.f_body = b.f_R;
    s.J_ext = b.J_ext;

    s.grad_rho = b.rho.grad;
    s.grad_p = b.p.grad;
    s.grad_T = b.T.grad;
    s.grad_phi = b.phi.grad;
    s.grad_V = b.V.grad;
    s.div_V = b.V.div;
    s.dt_V = b.V.dt;
    s.lap_V = b.V.lap;
    s.grad_div_V = b.V.grad_div;
    s.dt_rho = b.rho.dt;
    s.dt_p = b.p.dt;
    s.dt_T = b.T.dt;
    s.dt_phi = b.phi.dt;
    s.lap_T = b.T.hess.trace();

    const double rho = b.rho.val;
    const double ir = 1.0 / rho;
    s.inv_rho = ir;
    s.grad_inv_rho = -ir * ir * b.rho.grad;
    s.dt_inv_rho = -ir * ir * b.rho.dt;
    s.hess_inv_rho = (-ir * ir) * b.rho.hess + (2.0 * ir * ir * ir) * outer(b.rho.grad, b.rho.grad);
    s.dt_grad_inv_rho = (-ir * ir) * b.rho.dt_grad + (2.0 * ir * ir * ir * b.rho.dt) * b.rho.grad;

    // u = p - phi
    const double u = b.p.val - b.phi.val;
    const double u_dt = b.p.dt - b.phi.dt;
    const Vec3 u_grad = b.p.grad - b.phi.grad;
    const Vec3 u_dt_grad = b.p.dt_grad - b.phi.dt_grad;
    const Mat3 u_hess = b.p.hess - b.phi.hess;

    s.psi = u * ir + b.T.val / m_ref;
    s.grad_psi = ir * u_grad + u * s.grad_inv_rho + (1.0 / m_ref) * b.T.grad;
    s.dt_psi = ir * u_dt + u * s.dt_inv_rho + b.T.dt / m_ref;
    s.hess_p1_part = ir * u_hess + outer(u_grad, s.grad_inv_rho) + outer(s.grad_inv_rho, u_grad) +
                     u * s.hess_inv_rho + (1.0 / m_ref) * b.T.hess;
    s.dt_grad_psi = ir * u_dt_grad + s.dt_inv_rho * u_grad + u_dt * s.grad_inv_rho +
                    u * s.dt_grad_inv_rho + (1.0 / m_ref) * b.T.dt_grad;
}

}  // namespace

FluidSample FieldScenario::eval(const Vec3& r, double t) const {
    Bundles b;
    switch (kind_) {
        case ScenarioKind::Uniform:
            b = eval_uniform(params_, r, t);
            break;
        case ScenarioKind::RigidRotation:
            b = eval_rigid_rotation(params_, r, t);
            break;
        case ScenarioKind::TaylorGreen:
            b = eval_taylor_green(params_, r, t, mu_);
            break;
        case ScenarioKind::Shear:
            b = eval_shear(params_, r, t);
            break;
        case ScenarioKind::ManufacturedCompressible:
            b = eval_manufactured(params_, r, t, mu_, lambda_, k_cond_, alpha_coef_, beta_T_,
                                  m_ref_);
            break;
    }
    FluidSample s;
    assemble(b, m_ref_, s);
    if (s.rho <= 0.0) throw InvalidSampleError("rho <= 0 in scenario " + id_);
    return s;
}

FieldScenario FieldScenario::resolved(std::span<const double> alpha) const {
    if (alpha.empty()) return *this;
    if (alpha.size() != alpha_hooks_.size())
        throw ConfigError("alpha arity mismatch: got " + std::to_string(alpha.size()) +
                          ", scenario declares " + std::to_string(alpha_hooks_.size()));
    FieldScenario out = *this;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        const double factor = 1.0 + alpha_hooks_[i].amplitude * alpha[i];
        if (double* slot = out.transport_slot(alpha_hooks_[i].param)) {
            *slot *= factor;
            continue;
        }
        auto it = out.params_.find(alpha_hooks_[i].param);
        if (it == out.params_.end())
            throw ConfigError("alpha hook references unknown parameter: " + alpha_hooks_[i].param);
        it->second *= factor;
    }
    return out;
}

FluidSample eval_sample(const FieldScenario& scenario, const Vec3& r, double t,
                        std::span<const double> alpha) {
    const Box3& d = scenario.domain();
    const double tol = 1e-12 * norm(d.extent());
    if (!d.contains(r, tol))
        throw DomainError("evaluation point outside scenario domain");
    if (t < scenario.t_begin() - 1e-12 || t > scenario.t_end() + 1e-12)
        throw DomainError("evaluation time outside scenario t_span");
    if (alpha.empty()) return scenario.eval(r, t);
    return scenario.resolved(alpha).eval(r, t);
}

Vec3 vorticity(const FluidSample& sample) { return curl_of(sample.grad_V); }

Vec3 ns_acceleration(const FluidSample& sample, const FieldScenario& scenario) {
    if (sample.rho <= 0.0) throw InvalidSampleError("ns_acceleration: rho <= 0");
    // div sigma' for spatially constant mu, lambda.
    const Vec3 div_sigma = scenario.mu() * sample.lap_V +
                           (scenario.lambda() + scenario.mu() / 3.0) * sample.grad_div_V;
    return (1.0 / sample.rho) * (-sample.grad_p + sample.total_force() + div_sigma);
}

double viscous_dissipation(const FluidSample& sample, const FieldScenario& scenario) {
    const Mat3& g = sample.grad_V;
    double s2 = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
            const double s = g(i, k) + g(k, i) - (i == k ? (2.0 / 3.0) * sample.div_V : 0.0);
            s2 += s * s;
        }
    return 0.5 * scenario.mu() * s2 + scenario.lambda() * sample.div_V * sample.div_V;
}

double heat_source(const FluidSample& sample, const FieldScenario& scenario) {
    if (scenario.isothermal()) return 0.0;
    const double n = sample.rho / scenario.m_ref();
    const double denom = n * scenario.heat_capacity_cp() - scenario.alpha_coef() * sample.p;
    if (std::abs(denom) < 1e-300)
        throw SingularityError("heat_source: degenerate heat-capacity denominator");
    const double J_T = -dot(sample.V, sample.total_force()) / n + sample.J_ext;
    const double Dp_Dt = sample.dt_p + dot(sample.V, sample.grad_p);
    const double num = n * J_T - (scenario.beta_T() * n - scenario.alpha_coef() * sample.T) * Dp_Dt -
                       sample.p * sample.div_V + viscous_dissipation(sample, scenario) +
                       scenario.k_cond() * sample.lap_T;
    return num / denom;
}

Residuals residuals(const FieldScenario& scenario, const Vec3& r, double t) {
    const FluidSample s = eval_sample(scenario, r, t);
    Residuals res;
    res.continuity = s.dt_rho + dot(s.V, s.grad_rho) + s.rho * s.div_V;
    res.momentum = s.dt_V + advect(s.V, s.grad_V) - ns_acceleration(s, scenario);
    res.fourier = s.dt_T + dot(s.V, s.grad_T) - heat_source(s, scenario);
    return res;
}

namespace {

double rel_dev(double a, double fd) {
    return std::abs(a - fd) / std::max({1.0, std::abs(a), std::abs(fd)});
}

}  // namespace

double fd_check(const FieldScenario& scenario, const Vec3& r, double t, double h) {
    if (h <= 0.0) throw ConfigError("fd_check: step must be positive");
    const Box3& d = scenario.domain();
    for (int a = 0; a < 3; ++a) {
        Vec3 lo = r, hi = r;
        lo[a] -= h;
        hi[a] += h;
        if (!d.contains(lo) || !d.contains(hi))
            throw DomainError("fd_check: spatial stencil leaves the domain");
    }
    if (t - h < scenario.t_begin() || t + h > scenario.t_end())
        throw DomainError("fd_check: time stencil leaves t_span");

    auto at = [&](const Vec3& rr, double tt) { return scenario.eval(rr, tt); };
    auto shifted = [&](int axis, double step, double tt) {
        Vec3 rr = r;
        rr[axis] += step;
        return at(rr, tt);
    };

    const FluidSample c = at(r, t);
    double worst = 0.0;
    auto record = [&](double a, double fd) { worst = std::max(worst, rel_dev(a, fd)); };

    // Scalar fields: value extractors paired with their analytic derivatives.
    struct Entry {
        double (*get)(const FluidSample&);
        Vec3 grad;
        double dt;
        Mat3 hess;
        Vec3 dt_grad;
        bool second_order;  // hess + dt_grad available
    };
    const Entry entries[] = {
        {[](const FluidSample& s) { return s.rho; }, c.grad_rho, c.dt_rho, {}, {}, false},
        {[](const FluidSample& s) { return s.p; }, c.grad_p, c.dt_p, {}, {}, false},
        {[](const FluidSample& s) { return s.T; }, c.grad_T, c.dt_T, {}, {}, false},
        {[](const FluidSample& s) { return s.phi; }, c.grad_phi, c.dt_phi, {}, {}, false},
        {[](const FluidSample& s) { return s.psi; }, c.grad_psi, c.dt_psi, c.hess_p1_part,
         c.dt_grad_psi, true},
        {[](const FluidSample& s) { return s.inv_rho; }, c.grad_inv_rho, c.dt_inv_rho,
         c.hess_inv_rho, c.dt_grad_inv_rho, true},
    };

    for (const auto& e : entries) {
        for (int a = 0; a < 3; ++a) {
            const double fp = e.get(shifted(a, h, t));
            const double fm = e.get(shifted(a, -h, t));
            record(e.grad[a], (fp - fm) / (2 * h));
        }
        record(e.dt, (e.get(at(r, t + h)) - e.get(at(r, t - h))) / (2 * h));
        if (!e.second_order) continue;
        const double f0 = e.get(c);
        for (int a = 0; a < 3; ++a) {
            const double fp = e.get(shifted(a, h, t));
            const double fm = e.get(shifted(a, -h, t));
            record(e.hess(a, a), (fp - 2 * f0 + fm) / (h * h));
            for (int bx = a + 1; bx < 3; ++bx) {
                Vec3 pp = r, pm = r, mp = r, mm = r;
                pp[a] += h; pp[bx] += h;
                pm[a] += h; pm[bx] -= h;
                mp[a] -= h; mp[bx] += h;
                mm[a] -= h; mm[bx] -= h;
                const double fd = (e.get(at(pp, t)) - e.get(at(pm, t)) - e.get(at(mp, t)) +
                                   e.get(at(mm, t))) / (4 * h * h);
                record(e.hess(a, bx), fd);
                record(e.hess(bx, a), fd);
            }
            const double ftp = e.get(shifted(a, h, t + h));
            const double ftm = e.get(shifted(a, h, t - h));
            const double fmp = e.get(shifted(a, -h, t + h));
            const double fmm = e.get(shifted(a, -h, t - h));
            record(e.dt_grad[a], (ftp - ftm - fmp + fmm) / (4 * h * h));
        }
    }

    // Velocity: gradient, time derivative, Laplacian, grad(div V).
    for (int i = 0; i < 3; ++i) {
        for (int a = 0; a < 3; ++a) {
            const double fp = shifted(a, h, t).V[i];
            const double fm = shifted(a, -h, t).V[i];
            record(c.grad_V(i, a), (fp - fm) / (2 * h));
        }
        record(c.dt_V[i], (at(r, t + h).V[i] - at(r, t - h).V[i]) / (2 * h));
        double lap = 0.0;
        for (int a = 0; a < 3; ++a) {
            lap += (shifted(a, h, t).V[i] - 2 * c.V[i] + shifted(a, -h, t).V[i]) / (h * h);
        }
        record(c.lap_V[i], lap);
    }
    record(c.div_V, c.grad_V.trace());
    for (int a = 0; a < 3; ++a) {
        const double dp = shifted(a, h, t).div_V;
        const double dm = shifted(a, -h, t).div_V;
        record(c.grad_div_V[a], (dp - dm) / (2 * h));
    }
    {
        double lapT = 0.0;
        for (int a = 0; a < 3; ++a)
            lapT += (shifted(a, h, t).T - 2 * c.T + shifted(a, -h, t).T) / (h * h);
        record(c.lap_T, lapT);
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Construction, parameters, serialization

double FieldScenario::param(const std::string& name) const { return get(params_, name); }

double* FieldScenario::transport_slot(const std::string& name) {
    if (name == "mu") return &mu_;
    if (name == "lambda") return &lambda_;
    if (name == "k_cond") return &k_cond_;
    if (name == "c_p") return &c_p_;
    if (name == "alpha_coef") return &alpha_coef_;
    if (name == "beta_T") return &beta_T_;
    if (name == "m_ref") return &m_ref_;
    return nullptr;
}

void FieldScenario::set_param(const std::string& name, double value) {
    if (double* slot = transport_slot(name)) {
        *slot = value;
        validate();
        return;
    }
    if (params_.find(name) == params_.end())
        throw ConfigError("unknown scenario parameter: " + name);
    params_[name] = value;
}

void FieldScenario::set_t_span(double t0, double t1) {
    t0_ = t0;
    t1_ = t1;
    validate();
}

void FieldScenario::validate() const {
    if (domain_.volume() <= 0.0) throw ConfigError("scenario domain must have positive volume");
    if (!(t1_ > t0_)) throw ConfigError("scenario t_span must be nonempty");
    if (mu_ < 0.0 || lambda_ < 0.0 || k_cond_ < 0.0)
        throw ConfigError("transport coefficients must be non-negative");
    if (m_ref_ <= 0.0) throw ConfigError("reference mass must be positive");
}

FieldScenario FieldScenario::builtin(const std::string& id) {
    FieldScenario s;
    s.id_ = id;
    if (id == "uniform") {
        s.kind_ = ScenarioKind::Uniform;
        s.params_ = {{"vx", 1.0}, {"vy", 0.0}, {"vz", 0.0}, {"rho0", 1.0},
                     {"pressure", 0.2}, {"temperature", 0.0}};
        s.domain_ = {{0, 0, 0}, {1, 1, 1}};
        s.t0_ = 0.0;
        s.t1_ = 100.0;
        s.isothermal_ = true;
        s.grid_order_ = {4, 4, 2};
        s.alpha_hooks_ = {{"pressure", 0.5}};
    } else if (id == "rigid-rotation") {
        s.kind_ = ScenarioKind::RigidRotation;
        s.params_ = {{"omega", 2.0}, {"rho0", 1.0}, {"temperature", 0.0}};
        s.domain_ = {{-1.6, -1.6, -1.6}, {1.6, 1.6, 1.6}};
        s.t0_ = 0.0;
        s.t1_ = 100.0;
        s.isothermal_ = true;
        s.mu_ = 0.01;
        s.grid_order_ = {12, 12, 2};
        s.alpha_hooks_ = {{"omega", 0.1}};
    } else if (id == "taylor-green") {
        s.kind_ = ScenarioKind::TaylorGreen;
        s.params_ = {{"U0", 0.2}, {"rho0", 1.0}, {"temperature", 0.0}};
        s.domain_ = {{0, 0, 0}, {2 * 3.14159265358979323846, 2 * 3.14159265358979323846, 1.0}};
        s.t0_ = 0.0;
        s.t1_ = 100.0;
        s.isothermal_ = true;
        s.mu_ = 0.01;
        s.grid_order_ = {16, 16, 2};
        s.alpha_hooks_ = {{"U0", 0.1}};
    } else if (id == "shear") {
        s.kind_ = ScenarioKind::Shear;
        s.params_ = {{"gamma", 0.5}, {"rho0", 1.0}, {"pressure", 0.1}, {"temperature", 1.0}};
        s.domain_ = {{0, 0, 0}, {1, 1, 1}};
        s.t0_ = 0.0;
        s.t1_ = 100.0;
        s.isothermal_ = false;
        s.governs_fourier_ = false;  // T is held uniform; dissipated heat is removed
        s.mu_ = 0.05;
        s.c_p_ = 1.0;
        s.grid_order_ = {8, 8, 2};
        s.alpha_hooks_ = {{"gamma", 0.1}};
    } else if (id == "manufactured-compressible") {
        s.kind_ = ScenarioKind::ManufacturedCompressible;
        s.params_ = {{"rho_c", 1.0}, {"rho_a", 0.3}, {"m0", 0.5}, {"p_c", 1.0},
                     {"p_a", 0.2},  {"T_c", 1.0},  {"T_a", 0.2}, {"phi_a", 0.1}};
        s.domain_ = {{0, 0, 0}, {2 * 3.14159265358979323846, 2 * 3.14159265358979323846,
                                 2 * 3.14159265358979323846}};
        s.t0_ = 0.0;
        s.t1_ = 100.0;
        s.isothermal_ = false;
        s.mu_ = 0.05;
        s.lambda_ = 0.02;
        s.k_cond_ = 0.03;
        s.c_p_ = 1.0;
        s.alpha_coef_ = 0.02;
        s.beta_T_ = 0.02;
        s.grid_order_ = {16, 16, 2};
        s.alpha_hooks_ = {{"p_a", 0.2}};
    } else {
        throw ConfigError("unknown builtin scenario: " + id);
    }
    s.validate();
    return s;
}

FieldScenario FieldScenario::from_json(const nlohmann::json& j) {
    FieldScenario s = builtin(j.at("id").get<std::string>());
    if (j.contains("params")) {
        for (auto& [k, v] : j.at("params").items()) {
            if (k == "mu") s.mu_ = v.get<double>();
            else if (k == "lambda") s.lambda_ = v.get<double>();
            else if (k == "k_cond") s.k_cond_ = v.get<double>();
            else if (k == "c_p") s.c_p_ = v.get<double>();
            else if (k == "alpha_coef") s.alpha_coef_ = v.get<double>();
            else if (k == "beta_T") s.beta_T_ = v.get<double>();
            else if (k == "m_ref") s.m_ref_ = v.get<double>();
            else s.set_param(k, v.get<double>());
        }
    }
    if (j.contains("domain")) {
        const auto& d = j.at("domain");
        const auto lo = d.at("min"), hi = d.at("max");
        s.domain_ = {{lo.at(0).get<double>(), lo.at(1).get<double>(), lo.at(2).get<double>()},
                     {hi.at(0).get<double>(), hi.at(1).get<double>(), hi.at(2).get<double>()}};
    }
    if (j.contains("t_span")) {
        s.t0_ = j.at("t_span").at(0).get<double>();
        s.t1_ = j.at("t_span").at(1).get<double>();
    }
    if (j.contains("alpha_hooks")) {
        std::vector<AlphaHook> hooks;
        for (const auto& h : j.at("alpha_hooks")) {
            hooks.push_back({h.at("param").get<std::string>(), h.at("amplitude").get<double>()});
        }
        s.alpha_hooks_ = std::move(hooks);
    }
    if (j.contains("grid_order")) {
        const auto& g = j.at("grid_order");
        if (g.is_array())
            s.grid_order_ = {g.at(0).get<int>(), g.at(1).get<int>(), g.at(2).get<int>()};
        else
            s.grid_order_ = {g.get<int>(), g.get<int>(), g.get<int>()};
    }
    s.validate();
    return s;
}

FieldScenario FieldScenario::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

nlohmann::json FieldScenario::to_json() const {
    nlohmann::json j;
    j["id"] = id_;
    nlohmann::json params(params_);
    params["mu"] = mu_;
    params["lambda"] = lambda_;
    params["k_cond"] = k_cond_;
    params["c_p"] = c_p_;
    params["alpha_coef"] = alpha_coef_;
    params["beta_T"] = beta_T_;
    params["m_ref"] = m_ref_;
    j["params"] = params;
    j["domain"] = {{"min", {domain_.lo.x, domain_.lo.y, domain_.lo.z}},
                   {"max", {domain_.hi.x, domain_.hi.y, domain_.hi.z}}};
    j["t_span"] = {t0_, t1_};
    nlohmann::json hooks = nlohmann::json::array();
    for (const auto& h : alpha_hooks_) hooks.push_back({{"param", h.param}, {"amplitude", h.amplitude}});
    j["alpha_hooks"] = hooks;
    j["grid_order"] = {grid_order_[0], grid_order_[1], grid_order_[2]};
    return j;
}

}  // namespace ttplab
