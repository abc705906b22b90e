#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ttplab/geometry.hpp"
#include "ttplab/quadrature.hpp"

namespace ttplab {

// All fluid fields and their analytic derivatives at one event (r, t).
//
// Conventions:
//   - grad_V(i,j) = dV_i/dx_j
//   - f_body is the non-conservative part of the volume force density;
//     the total volume force is f = f_body - grad_phi.
//   - psi = (p - phi + n T)/rho with n = rho/m_ref is the p0-independent
//     part of the specific kinetic pressure: p1_hat = psi + p0/rho.
//   - J_ext is an external volumetric heating rate entering J_T.
struct FluidSample {
    double rho = 0.0, p = 0.0, T = 0.0, phi = 0.0;
    Vec3 V{}, f_body{};

    Vec3 grad_rho{}, grad_p{}, grad_T{}, grad_phi{};
    Mat3 grad_V{};
    double div_V = 0.0;
    Vec3 dt_V{}, lap_V{}, grad_div_V{};
    double dt_rho = 0.0, dt_p = 0.0, dt_T = 0.0, dt_phi = 0.0;
    double lap_T = 0.0;

    // Building blocks for p1_hat and its space/time derivatives.
    double psi = 0.0, dt_psi = 0.0;
    Vec3 grad_psi{}, dt_grad_psi{};
    Mat3 hess_p1_part{};  // Hessian of psi
    double inv_rho = 0.0, dt_inv_rho = 0.0;
    Vec3 grad_inv_rho{}, dt_grad_inv_rho{};
    Mat3 hess_inv_rho{};

    double J_ext = 0.0;

    Vec3 total_force() const { return f_body - grad_phi; }
};

enum class ScenarioKind {
    Uniform,
    RigidRotation,
    TaylorGreen,
    Shear,
    ManufacturedCompressible,
};

struct AlphaHook {
    std::string param;
    double amplitude = 0.0;
};

struct Residuals {
    double continuity = 0.0;
    Vec3 momentum{};
    double fourier = 0.0;
};

// An analytic flow scenario: closed-form fields with exact derivatives,
// transport coefficients, domain, and stochastic parameter hooks.
class FieldScenario {
  public:
    static FieldScenario builtin(const std::string& id);
    static FieldScenario from_json(const nlohmann::json& j);
    static FieldScenario from_json_file(const std::string& path);
    nlohmann::json to_json() const;

    const std::string& id() const { return id_; }
    ScenarioKind kind() const { return kind_; }

    const Box3& domain() const { return domain_; }
    double t_begin() const { return t0_; }
    double t_end() const { return t1_; }
    bool isothermal() const { return isothermal_; }
    // True when the temperature equation belongs to the scenario's
    // governing set (exact solutions only).
    bool governs_fourier() const { return governs_fourier_; }

    double mu() const { return mu_; }
    double lambda() const { return lambda_; }
    double k_cond() const { return k_cond_; }
    double heat_capacity_cp() const { return c_p_; }
    double alpha_coef() const { return alpha_coef_; }
    double beta_T() const { return beta_T_; }
    double m_ref() const { return m_ref_; }

    const std::map<std::string, double>& params() const { return params_; }
    double param(const std::string& name) const;
    void set_param(const std::string& name, double value);
    void set_domain(const Box3& d) { domain_ = d; }
    void set_t_span(double t0, double t1);

    const std::vector<AlphaHook>& alpha_hooks() const { return alpha_hooks_; }
    void set_alpha_hooks(std::vector<AlphaHook> hooks) { alpha_hooks_ = std::move(hooks); }
    std::size_t alpha_arity() const { return alpha_hooks_.size(); }

    // Scenario with hooks applied: param *= (1 + amplitude * alpha_i).
    FieldScenario resolved(std::span<const double> alpha) const;

    // Closed-form evaluation; no domain check (hot path).
    FluidSample eval(const Vec3& r, double t) const;

    std::array<int, 3> default_grid_order() const { return grid_order_; }
    QuadratureGrid make_grid() const { return QuadratureGrid(domain_, grid_order_); }
    QuadratureGrid make_grid(int order) const { return QuadratureGrid(domain_, order); }

  private:
    FieldScenario() = default;
    void validate() const;
    double* transport_slot(const std::string& name);

    std::string id_;
    ScenarioKind kind_ = ScenarioKind::Uniform;
    Box3 domain_{{0, 0, 0}, {1, 1, 1}};
    double t0_ = 0.0, t1_ = 1.0;
    bool isothermal_ = true;
    bool governs_fourier_ = true;
    double mu_ = 0.0, lambda_ = 0.0, k_cond_ = 0.0;
    double c_p_ = 1.0, alpha_coef_ = 0.0, beta_T_ = 0.0, m_ref_ = 1.0;
    std::array<int, 3> grid_order_{16, 16, 2};
    std::map<std::string, double> params_;
    std::vector<AlphaHook> alpha_hooks_;
};

// Domain- and arity-checked evaluation (the checked public entry point).
FluidSample eval_sample(const FieldScenario& scenario, const Vec3& r, double t,
                        std::span<const double> alpha = {});

// xi = curl V
Vec3 vorticity(const FluidSample& sample);

// F_H = (1/rho) [ -grad p + f + div sigma' ] with the Newtonian stress
// sigma' = mu (grad V + grad V^T - (2/3) I div V) + lambda I div V.
Vec3 ns_acceleration(const FluidSample& sample, const FieldScenario& scenario);

// Heat production rate K(r,t). Isothermal scenarios hold K identically zero.
double heat_source(const FluidSample& sample, const FieldScenario& scenario);

// Viscous dissipation (grad V) : sigma' >= 0.
double viscous_dissipation(const FluidSample& sample, const FieldScenario& scenario);

// Residuals of continuity, momentum and temperature equations from the
// analytic derivatives.
Residuals residuals(const FieldScenario& scenario, const Vec3& r, double t);

// Compares every analytic derivative against central finite differences
// of the field evaluators; returns the worst relative deviation.
double fd_check(const FieldScenario& scenario, const Vec3& r, double t, double h);

}  // namespace ttplab
