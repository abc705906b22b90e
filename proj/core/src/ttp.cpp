#include "ttplab/ttp.hpp"

#include <array>
#include <cmath>

#include "ttplab/errors.hpp"

namespace ttplab {

namespace {

// Unit vector orthogonal to b, built from the axis with the smallest
// |component| for stability.
Vec3 any_orthogonal(const Vec3& b) {
    Vec3 axis{1, 0, 0};
    double best = std::abs(b.x);
    if (std::abs(b.y) < best) {
        axis = {0, 1, 0};
        best = std::abs(b.y);
    }
    if (std::abs(b.z) < best) axis = {0, 0, 1};
    return normalized(cross(b, axis));
}

struct Event {
    FluidSample sample;
    KineticFields kf;
};

Event eval_event(const FieldScenario& scenario, const Vec3& r, double t, const P0Value& p0) {
    Event e{scenario.eval(r, t), {}};
    e.kf = kinetic_fields(e.sample, p0, scenario);
    return e;
}

Vec3 omega_at(const FieldScenario& scenario, const Event& e, const Vec3& r, const Vec3& u,
              double t, const P0Value& p0) {
    (void)r;
    (void)t;
    if (!e.kf.b_defined)
        throw DegenerateGradientError("omega: grad p1_hat below threshold, b undefined");
    const P1HatDerivs d = p1hat_derivs(e.sample, p0);
    const Vec3 v = e.sample.V + u;
    // dg/dt along the particle path; Hessian is symmetric, so (v.grad)g = H v.
    const Vec3 dg_dt = d.dt_grad + d.hess * v;
    const Vec3 db_dt = (dg_dt - dot(e.kf.b, dg_dt) * e.kf.b) / e.kf.grad_norm;
    const double c = -dot(vorticity(e.sample), e.kf.b);
    return cross(e.kf.b, db_dt) + c * e.kf.b;
}

}  // namespace

TTPState init_ttp(const Vec3& r0, const Vec3& u0, double t0, const P0Value& p0,
                  const FieldScenario& scenario, double tol_orth) {
    const Event e = eval_event(scenario, r0, t0, p0);
    TTPState s;
    s.r = r0;
    s.t = t0;
    const double u_mag = norm(u0);
    if (u_mag == 0.0) {
        s.beta = 0.0;
        s.n = e.kf.b_defined ? any_orthogonal(e.kf.b) : Vec3{1, 0, 0};
        s.degenerate = true;
        return s;
    }
    s.beta = u_mag / e.kf.v_th;
    s.n = u0 / u_mag;
    if (e.kf.b_defined) {
        const double defect = std::abs(dot(s.n, e.kf.b));
        if (defect > tol_orth)
            throw InvalidInitialConditionError(
                "init_ttp: u0 violates the tangency constraint (|n.b| = " +
                std::to_string(defect) + ")");
    } else {
        s.degenerate = true;
    }
    return s;
}

Vec3 omega(const FieldScenario& scenario, const Vec3& r, const Vec3& u, double t,
           const P0Value& p0) {
    const Event e = eval_event(scenario, r, t, p0);
    return omega_at(scenario, e, r, u, t, p0);
}

Vec3 omega(const FieldScenario& scenario, const TTPState& state, const P0Value& p0) {
    const Event e = eval_event(scenario, state.r, state.t, p0);
    const Vec3 u = state.beta * e.kf.v_th * state.n;
    return omega_at(scenario, e, state.r, u, state.t, p0);
}

Vec3 ttp_mean_field(const FieldScenario& scenario, const TTPState& state, const P0Value& p0) {
    const Event e = eval_event(scenario, state.r, state.t, p0);
    const Vec3 u = state.beta * e.kf.v_th * state.n;
    Vec3 rot{};
    if (e.kf.b_defined && state.beta > 0.0) {
        const Vec3 om = omega_at(scenario, e, state.r, u, state.t, p0);
        rot = (state.beta * e.kf.v_th) * cross(om, state.n);
    }
    return ns_acceleration(e.sample, scenario) + advect(u, e.sample.grad_V) +
           (0.5 * e.kf.dln_p1hat_dt) * u + rot;
}

Vec3 gauge_field_ttp(const FieldScenario& scenario, const TTPState& state, const P0Value& p0) {
    const Event e = eval_event(scenario, state.r, state.t, p0);
    const Vec3 u = state.beta * e.kf.v_th * state.n;
    Vec3 rot{};
    if (e.kf.b_defined && state.beta > 0.0) {
        const Vec3 om = omega_at(scenario, e, state.r, u, state.t, p0);
        rot = (state.beta * e.kf.v_th) * cross(om, state.n);
    }
    const double vth2_half = 0.5 * e.kf.v_th * e.kf.v_th;
    const Vec3 grad_ln_rho = e.sample.inv_rho * e.sample.grad_rho;
    const Vec3 grad_ln_p1hat = e.kf.grad_p1_hat / e.kf.p1_hat;
    const Vec3 dF0 = -(vth2_half * grad_ln_rho +
                       vth2_half * (state.beta * state.beta - 0.5) * grad_ln_p1hat);
    return dF0 + rot;
}

Vec3 itp_mean_field_gaussian(const FieldScenario& scenario, const ITPState& state,
                             const P0Value& p0) {
    const Event e = eval_event(scenario, state.r, state.t, p0);
    const double vth2_half = 0.5 * e.kf.v_th * e.kf.v_th;
    const double X2 = norm2(state.u) / (e.kf.v_th * e.kf.v_th);
    const Vec3 grad_ln_rho = e.sample.inv_rho * e.sample.grad_rho;
    const Vec3 grad_ln_p1hat = e.kf.grad_p1_hat / e.kf.p1_hat;
    const Vec3 F_u = vth2_half * grad_ln_rho + (e.kf.A / (2.0 * e.kf.p1)) * state.u +
                     vth2_half * (X2 - 0.5) * grad_ln_p1hat;
    return ns_acceleration(e.sample, scenario) + advect(state.u, e.sample.grad_V) + F_u;
}

Vec3 f_a_extended(const ExtendedMoments& moments, const ExtendedMomentDivs& divs,
                  const KineticFields& kf, double rho, const Vec3& u) {
    const Vec3 grad_ln_p1hat = kf.grad_p1_hat / kf.p1_hat;
    const Vec3 first = (1.0 / rho) * (divs.div_Pi - kf.grad_p1);
    const double bracket = divs.div_Q - dot(grad_ln_p1hat, moments.Q_flux);
    return first + (bracket / (2.0 * kf.p1)) * u;
}

Vec3 gauge_field_general(const FieldScenario& scenario, const TTPState& state,
                         const P0Value& p0, double kdf_ratio) {
    return kdf_ratio * gauge_field_ttp(scenario, state, p0);
}

Vec3 ttp_relative_acceleration(const FieldScenario& scenario, const Vec3& r, const Vec3& u,
                               double t, const P0Value& p0) {
    const Event e = eval_event(scenario, r, t, p0);
    const double u_mag = norm(u);
    if (u_mag == 0.0) return {};
    Vec3 acc = (0.5 * e.kf.dln_p1hat_dt) * u;
    if (e.kf.b_defined) {
        const Vec3 n = u / u_mag;
        const Vec3 om = omega_at(scenario, e, r, u, t, p0);
        acc += u_mag * cross(om, n);
    }
    return acc;
}

TTPState step_ttp(const TTPState& state, const FieldScenario& scenario, const P0Segment& p0,
                  double dt, const StepOptions& opts, StepDiagnostics* diag, Vec3* u_check) {
    struct Deriv {
        Vec3 dr, dn, du;
        bool degenerate = false;
    };
    const double beta = state.beta;

    auto f = [&](double tau, const Vec3& r, const Vec3& n, const Vec3* uc) {
        Deriv d;
        const P0Value pv = p0.at(tau);
        const Event e = eval_event(scenario, r, tau, pv);
        const Vec3 u = beta * e.kf.v_th * n;
        d.dr = e.sample.V + u;
        if (e.kf.b_defined) {
            const Vec3 om = omega_at(scenario, e, r, u, tau, pv);
            d.dn = cross(om, n);
        } else {
            d.dn = {};  // frozen across degenerate-gradient segments
            d.degenerate = true;
        }
        if (uc) {
            const double um = norm(*uc);
            if (um > 0.0) {
                d.du = (0.5 * e.kf.dln_p1hat_dt) * (*uc);
                if (e.kf.b_defined) {
                    const Vec3 nc = *uc / um;
                    const Vec3 omc = omega_at(scenario, e, r, *uc, tau, pv);
                    d.du += um * cross(omc, nc);
                }
            }
        }
        return d;
    };

    const Vec3 r0 = state.r, n0 = state.n;
    Vec3 uc0 = u_check ? *u_check : Vec3{};
    const double t0 = state.t;

    const Deriv k1 = f(t0, r0, n0, u_check ? &uc0 : nullptr);
    Vec3 r2 = r0 + 0.5 * dt * k1.dr, n2 = n0 + 0.5 * dt * k1.dn;
    Vec3 uc2 = uc0 + 0.5 * dt * k1.du;
    const Deriv k2 = f(t0 + 0.5 * dt, r2, n2, u_check ? &uc2 : nullptr);
    Vec3 r3 = r0 + 0.5 * dt * k2.dr, n3 = n0 + 0.5 * dt * k2.dn;
    Vec3 uc3 = uc0 + 0.5 * dt * k2.du;
    const Deriv k3 = f(t0 + 0.5 * dt, r3, n3, u_check ? &uc3 : nullptr);
    Vec3 r4 = r0 + dt * k3.dr, n4 = n0 + dt * k3.dn;
    Vec3 uc4 = uc0 + dt * k3.du;
    const Deriv k4 = f(t0 + dt, r4, n4, u_check ? &uc4 : nullptr);

    TTPState out = state;
    out.t = t0 + dt;
    out.r = r0 + (dt / 6.0) * (k1.dr + 2.0 * k2.dr + 2.0 * k3.dr + k4.dr);
    out.n = n0 + (dt / 6.0) * (k1.dn + 2.0 * k2.dn + 2.0 * k3.dn + k4.dn);
    if (u_check) *u_check = uc0 + (dt / 6.0) * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);

    StepDiagnostics local;
    local.degenerate_segment = k1.degenerate || k2.degenerate || k3.degenerate || k4.degenerate;
    local.in_domain = scenario.domain().contains(out.r);

    const P0Value pv1 = p0.at(out.t);
    const Event e1 = eval_event(scenario, out.r, out.t, pv1);
    local.v_th_end = e1.kf.v_th;
    if (opts.renormalize) out.n = normalized(out.n);
    if (e1.kf.b_defined) {
        local.tangency_pre = std::abs(dot(out.n, e1.kf.b));
        if (opts.project) {
            out.n = out.n - dot(out.n, e1.kf.b) * e1.kf.b;
            out.n = normalized(out.n);
        }
        local.tangency_post = std::abs(dot(out.n, e1.kf.b));
    }
    local.n_norm_err = std::abs(norm(out.n) - 1.0);
    if (diag) *diag = local;
    return out;
}

namespace {

// LU determinant with partial pivoting for the 6x6 flow-map Jacobian.
double det6(std::array<std::array<double, 6>, 6> a) {
    double det = 1.0;
    for (int col = 0; col < 6; ++col) {
        int piv = col;
        for (int r = col + 1; r < 6; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (a[piv][col] == 0.0) return 0.0;
        if (piv != col) {
            std::swap(a[piv], a[col]);
            det = -det;
        }
        det *= a[col][col];
        for (int r = col + 1; r < 6; ++r) {
            const double m = a[r][col] / a[col][col];
            for (int c = col; c < 6; ++c) a[r][c] -= m * a[col][c];
        }
    }
    return det;
}

struct P0Path {
    std::vector<P0Segment> segments;
    P0Value at(double t) const {
        for (const auto& s : segments)
            if (t <= s.t1 + 1e-12) return s.at(std::min(t, s.t1));
        return segments.back().at(segments.back().t1);
    }
};

}  // namespace

LiouvilleCheck liouville_jacobian_check(const FieldScenario& scenario, const ITPState& itp0,
                                        const PseudoPressureState& p0_state,
                                        const QuadratureGrid& grid, double t1, double dt) {
    if (!(t1 > itp0.t)) throw ConfigError("liouville_jacobian_check: t1 must exceed t0");
    const int n_steps = static_cast<int>(std::ceil((t1 - itp0.t) / dt - 1e-12));
    const double h = (t1 - itp0.t) / n_steps;

    // p0(t) is a global field property: advance it once, share across probes.
    P0Path path;
    PseudoPressureState ps = p0_state;
    for (int i = 0; i < n_steps; ++i) {
        P0Step step = advance_p0(ps, scenario, h, grid);
        path.segments.push_back(step.segment);
        ps = step.state;
    }

    // State y = (r, u, s) with s accumulating the phase-space divergence.
    auto deriv = [&](double tau, const std::array<double, 7>& y, std::array<double, 7>& dy) {
        const Vec3 r{y[0], y[1], y[2]}, u{y[3], y[4], y[5]};
        const P0Value pv = path.at(tau);
        const FluidSample s = scenario.eval(r, tau);
        const KineticFields kf = kinetic_fields(s, pv, scenario);
        const Vec3 v = s.V + u;
        const double vth2_half = 0.5 * kf.v_th * kf.v_th;
        const double X2 = norm2(u) / (kf.v_th * kf.v_th);
        const Vec3 grad_ln_rho = s.inv_rho * s.grad_rho;
        const Vec3 grad_ln_p1hat = kf.grad_p1_hat / kf.p1_hat;
        const Vec3 du = vth2_half * grad_ln_rho + (kf.A / (2.0 * kf.p1)) * u +
                        vth2_half * (X2 - 0.5) * grad_ln_p1hat;
        dy = {v.x, v.y, v.z, du.x, du.y, du.z,
              1.5 * kf.A / kf.p1 + s.div_V + dot(u, grad_ln_p1hat)};
    };

    auto flow = [&](std::array<double, 7> y) {
        std::array<double, 7> k1, k2, k3, k4, tmp;
        double t = itp0.t;
        for (int i = 0; i < n_steps; ++i) {
            deriv(t, y, k1);
            for (int j = 0; j < 7; ++j) tmp[j] = y[j] + 0.5 * h * k1[j];
            deriv(t + 0.5 * h, tmp, k2);
            for (int j = 0; j < 7; ++j) tmp[j] = y[j] + 0.5 * h * k2[j];
            deriv(t + 0.5 * h, tmp, k3);
            for (int j = 0; j < 7; ++j) tmp[j] = y[j] + h * k3[j];
            deriv(t + h, tmp, k4);
            for (int j = 0; j < 7; ++j)
                y[j] += (h / 6.0) * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
            t += h;
        }
        return y;
    };

    const std::array<double, 7> y0{itp0.r.x, itp0.r.y, itp0.r.z,
                                   itp0.u.x, itp0.u.y, itp0.u.z, 0.0};
    const auto yc = flow(y0);

    std::array<std::array<double, 6>, 6> J{};
    for (int j = 0; j < 6; ++j) {
        const double eps = 1e-6 * std::max(1.0, std::abs(y0[j]));
        auto yp = y0, ym = y0;
        yp[j] += eps;
        ym[j] -= eps;
        const auto fp = flow(yp), fm = flow(ym);
        for (int i = 0; i < 6; ++i) J[i][j] = (fp[i] - fm[i]) / (2.0 * eps);
    }

    LiouvilleCheck out;
    out.numeric = det6(J);
    out.analytic = std::exp(yc[6]);
    if (!std::isfinite(out.numeric) || out.numeric <= 0.0)
        throw NumericalCheckError("liouville_jacobian_check: ill-conditioned FD Jacobian");
    return out;
}

}  // namespace ttplab
