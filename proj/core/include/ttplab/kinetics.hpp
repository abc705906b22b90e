#pragma once

#include <array>
#include <vector>

#include "ttplab/geometry.hpp"
#include "ttplab/quadrature.hpp"
#include "ttplab/scenario.hpp"

namespace ttplab {

// Pseudo-pressure value together with its time derivative: the rate feeds
// the unsteady part of the kinetic-pressure derivatives.
struct P0Value {
    double value = 0.0;
    double rate = 0.0;
};

// Derived kinetic quantities at one event.
struct KineticFields {
    double p1 = 0.0;       // kinetic pressure p0 + p - phi + n T
    double p1_hat = 0.0;   // p1 / rho
    double v_th = 0.0;     // sqrt(2 p1 / rho)
    Vec3 grad_p1_hat{};
    Vec3 grad_p1{};
    double grad_norm = 0.0;
    bool b_defined = false;
    Vec3 b{};              // grad p1_hat / |grad p1_hat|
    double A = 0.0;        // rho D/Dt((p0+p-phi)/rho) + n K
    double dln_p1hat_dt = 0.0;  // A / p1
};

// Second-derivative data of p1_hat needed for the rotation dynamics of b.
struct P1HatDerivs {
    Vec3 grad{};
    Mat3 hess{};
    Vec3 dt_grad{};
};

struct PseudoPressureState {
    double t = 0.0;
    double p0 = 0.0;
    double S_fM = 0.0;
    double dS_T_dt = 0.0;
    std::vector<std::array<double, 3>> history;  // rows (t, p0, S_fM)
};

// Cubic-Hermite dense output of one pseudo-pressure step; gives p0 (and its
// rate) at the sub-step times a particle integrator needs.
struct P0Segment {
    double t0 = 0.0, t1 = 0.0;
    double p0_begin = 0.0, p0_end = 0.0;
    double rate_begin = 0.0, rate_end = 0.0;
    P0Value at(double t) const;
};

inline constexpr double kEntropyConst = 1.5 * (1.0 + 1.8378770664093455);  // (3/2)(1+ln 2pi)

// Relative threshold below which the isobaric direction b is undefined.
inline constexpr double kEpsGrad = 1e-12;

KineticFields kinetic_fields(const FluidSample& sample, const P0Value& p0,
                             const FieldScenario& scenario);

P1HatDerivs p1hat_derivs(const FluidSample& sample, const P0Value& p0);

// Entropy density of the local Gaussian distribution:
//   rho [ (3/2) ln p1 - (5/2) ln rho + (3/2)(1 + ln 2 pi) ].
double gaussian_entropy_density(double rho, double p1);

// S(f_M(t)) by quadrature over the scenario domain.
double gaussian_entropy(const FieldScenario& scenario, double p0, double t,
                        const QuadratureGrid& grid);

// d S(f_M)/d p0 = (3/2) integral rho/p1.
double gaussian_entropy_slope(const FieldScenario& scenario, double p0, double t,
                              const QuadratureGrid& grid);

// Initial pseudo-pressure from S(f_M(t0)) = 0; bracketed, monotone solve.
double solve_initial_p0(const FieldScenario& scenario, double t0, const QuadratureGrid& grid,
                        double tol = 1e-12);

// Smallest admissible pseudo-pressure: max over the grid of (phi - p - nT).
double p0_infimum(const FieldScenario& scenario, double t, const QuadratureGrid& grid);

// Global thermodynamic entropy production rate (>= 0); identically zero for
// isothermal scenarios.
double entropy_production(const FieldScenario& scenario, double t, const QuadratureGrid& grid);

struct P0Rate {
    double rate = 0.0;
    double S_p = 0.0;
    double dS_T_dt = 0.0;
    double slope = 0.0;  // (3/2) integral rho/p1
};

P0Rate p0_rate(const FieldScenario& scenario, double t, double p0, const QuadratureGrid& grid);

PseudoPressureState make_p0_state(const FieldScenario& scenario, double t0,
                                  const QuadratureGrid& grid);
PseudoPressureState make_p0_state(const FieldScenario& scenario, double t0,
                                  const QuadratureGrid& grid, double p0);

struct P0Step {
    PseudoPressureState state;
    P0Segment segment;
};

// One classical RK4 step of dp0/dt = [S_p + dS_T/dt] / ((3/2) int rho/p1).
P0Step advance_p0(const PseudoPressureState& state, const FieldScenario& scenario, double dt,
                  const QuadratureGrid& grid);

}  // namespace ttplab
