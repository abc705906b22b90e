#include "ttplab/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ttplab/errors.hpp"

namespace ttplab {

KineticFields kinetic_fields(const FluidSample& sample, const P0Value& p0,
                             const FieldScenario& scenario) {
    if (sample.rho <= 0.0) throw InvalidSampleError("kinetic_fields: rho <= 0");
    KineticFields kf;
    kf.p1_hat = sample.psi + p0.value * sample.inv_rho;
    kf.p1 = kf.p1_hat * sample.rho;
    if (kf.p1 <= 0.0)
        throw PositivityError("kinetic pressure lost positivity (p1 = " + std::to_string(kf.p1) +
                              "); increase p0");
    kf.v_th = std::sqrt(2.0 * kf.p1_hat);

    kf.grad_p1_hat = sample.grad_psi + p0.value * sample.grad_inv_rho;
    kf.grad_p1 = sample.rho * kf.grad_p1_hat + kf.p1_hat * sample.grad_rho;
    kf.grad_norm = norm(kf.grad_p1_hat);
    kf.b_defined = kf.grad_norm >= kEpsGrad * std::max(1.0, std::abs(kf.p1_hat));
    if (kf.b_defined) kf.b = kf.grad_p1_hat / kf.grad_norm;

    // A = rho D/Dt((p0 + p - phi)/rho) + n K
    const double w = (sample.p - sample.phi + p0.value) * sample.inv_rho;
    const Vec3 grad_w = sample.inv_rho * (sample.grad_p - sample.grad_phi) +
                        (sample.p - sample.phi + p0.value) * sample.grad_inv_rho;
    const double dt_w = sample.inv_rho * (sample.dt_p - sample.dt_phi + p0.rate) +
                        (sample.p - sample.phi + p0.value) * sample.dt_inv_rho;
    const double n = sample.rho / scenario.m_ref();
    kf.A = sample.rho * (dt_w + dot(sample.V, grad_w)) + n * heat_source(sample, scenario);
    kf.dln_p1hat_dt = kf.A / kf.p1;
    (void)w;
    return kf;
}

P1HatDerivs p1hat_derivs(const FluidSample& sample, const P0Value& p0) {
    P1HatDerivs d;
    d.grad = sample.grad_psi + p0.value * sample.grad_inv_rho;
    d.hess = sample.hess_p1_part + p0.value * sample.hess_inv_rho;
    d.dt_grad = sample.dt_grad_psi + p0.value * sample.dt_grad_inv_rho +
                p0.rate * sample.grad_inv_rho;
    return d;
}

double gaussian_entropy_density(double rho, double p1) {
    return rho * (1.5 * std::log(p1) - 2.5 * std::log(rho) + kEntropyConst);
}

double gaussian_entropy(const FieldScenario& scenario, double p0, double t,
                        const QuadratureGrid& grid) {
    return grid.integrate([&](const Vec3& r) {
        const FluidSample s = scenario.eval(r, t);
        const double p1 = (s.psi + p0 * s.inv_rho) * s.rho;
        if (p1 <= 0.0) throw PositivityError("gaussian_entropy: p1 <= 0 at a quadrature node");
        return gaussian_entropy_density(s.rho, p1);
    });
}

double gaussian_entropy_slope(const FieldScenario& scenario, double p0, double t,
                              const QuadratureGrid& grid) {
    return 1.5 * grid.integrate([&](const Vec3& r) {
        const FluidSample s = scenario.eval(r, t);
        const double p1 = (s.psi + p0 * s.inv_rho) * s.rho;
        if (p1 <= 0.0) throw PositivityError("gaussian_entropy_slope: p1 <= 0");
        return s.rho / p1;
    });
}

double p0_infimum(const FieldScenario& scenario, double t, const QuadratureGrid& grid) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const Vec3& r : grid.nodes()) {
        const FluidSample s = scenario.eval(r, t);
        // p1 = p0 + rho*psi with rho*psi = p - phi + nT
        worst = std::max(worst, -s.psi * s.rho);
    }
    return worst;
}

double solve_initial_p0(const FieldScenario& scenario, double t0, const QuadratureGrid& grid,
                        double tol) {
    const double inf = p0_infimum(scenario, t0, grid);
    const double scale = std::max(1.0, std::abs(inf));
    double lo = inf + 1e-9 * scale;
    double s_lo = gaussian_entropy(scenario, lo, t0, grid);
    if (s_lo > 0.0)
        throw SolverError(
            "solve_initial_p0: S(f_M) > 0 at the positivity edge; no entropy-zero "
            "pseudo-pressure exists for this scenario scale");

    double hi = inf + scale;
    double s_hi = gaussian_entropy(scenario, hi, t0, grid);
    int guard = 0;
    while (s_hi < 0.0) {
        hi = inf + (hi - inf) * 4.0;
        if (++guard > 40 || hi > inf + 1e6 * scale)
            throw SolverError("solve_initial_p0: no bracket found within configured p0 range");
        s_hi = gaussian_entropy(scenario, hi, t0, grid);
    }

    // Newton with bisection fallback; S is strictly increasing in p0.
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double s = gaussian_entropy(scenario, x, t0, grid);
        if (std::abs(s) < tol) return x;
        if (s > 0.0) hi = x;
        else lo = x;
        const double slope = gaussian_entropy_slope(scenario, x, t0, grid);
        double next = x - s / slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) < 1e-15 * std::max(1.0, std::abs(x))) return next;
        x = next;
    }
    return x;
}

double entropy_production(const FieldScenario& scenario, double t, const QuadratureGrid& grid) {
    if (scenario.isothermal()) return 0.0;
    return grid.integrate([&](const Vec3& r) {
        const FluidSample s = scenario.eval(r, t);
        if (s.T <= 0.0)
            throw InvalidSampleError("entropy_production: T <= 0 at a node of a thermal scenario");
        const double n = s.rho / scenario.m_ref();
        const double J_T = -dot(s.V, s.total_force()) / n + s.J_ext;
        const double conduction = scenario.k_cond() * norm2(s.grad_T) / (s.T * s.T);
        return n * J_T / s.T + conduction + viscous_dissipation(s, scenario) / s.T;
    });
}

P0Rate p0_rate(const FieldScenario& scenario, double t, double p0, const QuadratureGrid& grid) {
    P0Rate out;
    double sp = 0.0, slope = 0.0;
    const auto& nodes = grid.nodes();
    const auto& w = grid.weights();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const FluidSample s = scenario.eval(nodes[i], t);
        const double p1 = (s.psi + p0 * s.inv_rho) * s.rho;
        if (p1 <= 0.0) throw PositivityError("p0_rate: p1 <= 0 at a quadrature node");
        // b = p - phi + nT = rho * psi
        const double b_dt = s.dt_psi * s.rho + s.psi * s.dt_rho;
        const Vec3 b_grad = s.rho * s.grad_psi + s.psi * s.grad_rho;
        sp += w[i] * (-1.5 * (s.rho / p1) * (b_dt + dot(s.V, b_grad)) - s.rho * s.div_V);
        slope += w[i] * 1.5 * s.rho / p1;
    }
    out.S_p = sp;
    out.slope = slope;
    out.dS_T_dt = entropy_production(scenario, t, grid);
    out.rate = (sp + out.dS_T_dt) / slope;
    return out;
}

PseudoPressureState make_p0_state(const FieldScenario& scenario, double t0,
                                  const QuadratureGrid& grid) {
    return make_p0_state(scenario, t0, grid, solve_initial_p0(scenario, t0, grid));
}

PseudoPressureState make_p0_state(const FieldScenario& scenario, double t0,
                                  const QuadratureGrid& grid, double p0) {
    PseudoPressureState st;
    st.t = t0;
    st.p0 = p0;
    st.S_fM = gaussian_entropy(scenario, p0, t0, grid);
    st.dS_T_dt = entropy_production(scenario, t0, grid);
    st.history.push_back({st.t, st.p0, st.S_fM});
    return st;
}

P0Value P0Segment::at(double t) const {
    const double h = t1 - t0;
    const double s = (t - t0) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    P0Value v;
    v.value = h00 * p0_begin + h * h10 * rate_begin + h01 * p0_end + h * h11 * rate_end;
    const double d00 = (6 * s2 - 6 * s) / h;
    const double d10 = 3 * s2 - 4 * s + 1;
    const double d01 = (-6 * s2 + 6 * s) / h;
    const double d11 = 3 * s2 - 2 * s;
    v.rate = d00 * p0_begin + d10 * rate_begin + d01 * p0_end + d11 * rate_end;
    return v;
}

P0Step advance_p0(const PseudoPressureState& state, const FieldScenario& scenario, double dt,
                  const QuadratureGrid& grid) {
    const double t = state.t;
    const double y = state.p0;
    try {
        const double k1 = p0_rate(scenario, t, y, grid).rate;
        const double k2 = p0_rate(scenario, t + 0.5 * dt, y + 0.5 * dt * k1, grid).rate;
        const double k3 = p0_rate(scenario, t + 0.5 * dt, y + 0.5 * dt * k2, grid).rate;
        const double k4 = p0_rate(scenario, t + dt, y + dt * k3, grid).rate;
        const double y1 = y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);

        P0Step step;
        const double r1 = p0_rate(scenario, t + dt, y1, grid).rate;
        step.segment = {t, t + dt, y, y1, k1, r1};

        step.state = state;
        step.state.t = t + dt;
        step.state.p0 = y1;
        step.state.S_fM = gaussian_entropy(scenario, y1, t + dt, grid);
        step.state.dS_T_dt = entropy_production(scenario, t + dt, grid);
        step.state.history.push_back({step.state.t, step.state.p0, step.state.S_fM});
        return step;
    } catch (const PositivityError& e) {
        throw StepRejectedError(std::string("advance_p0: positivity lost mid-step (") + e.what() +
                                "); retry with a smaller dt");
    }
}

}  // namespace ttplab
