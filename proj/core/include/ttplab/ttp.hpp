#pragma once

#include <optional>
#include <vector>

#include "ttplab/geometry.hpp"
#include "ttplab/kinetics.hpp"
#include "ttplab/scenario.hpp"

namespace ttplab {

// Thermal tracer particle: relative velocity u = beta * v_th(r,t) * n with
// |n| = 1, n orthogonal to b wherever b is defined, beta a trajectory
// invariant.
struct TTPState {
    Vec3 r{};
    Vec3 n{0.0, 0.0, 1.0};
    double beta = 0.0;
    double t = 0.0;
    bool degenerate = false;  // beta == 0 spawn, or b undefined at spawn
};

// Unconstrained tracer in relative coordinates (r, u).
struct ITPState {
    Vec3 r{};
    Vec3 u{};
    double t = 0.0;
};

struct ExtendedMoments {
    Vec3 Q_flux{};
    Mat3 Pi{};
};

// Divergence data the caller supplies alongside analytic test moments.
struct ExtendedMomentDivs {
    Vec3 div_Pi{};
    double div_Q = 0.0;
};

inline constexpr double kDefaultOrthTol = 1e-8;

// beta and n from an initial relative velocity; validates the tangency
// constraint n . b = 0 at the spawn event.
TTPState init_ttp(const Vec3& r0, const Vec3& u0, double t0, const P0Value& p0,
                  const FieldScenario& scenario, double tol_orth = kDefaultOrthTol);

// Rotation pseudo-vector: Omega = b x db/dt - (xi . b) b, where db/dt is
// taken along the particle path (velocity V + u).
Vec3 omega(const FieldScenario& scenario, const Vec3& r, const Vec3& u, double t,
           const P0Value& p0);
Vec3 omega(const FieldScenario& scenario, const TTPState& state, const P0Value& p0);

// Total acceleration of a TTP:
//   F_H + u . grad V + (u/2) (A/p1) + beta v_th Omega x n.
Vec3 ttp_mean_field(const FieldScenario& scenario, const TTPState& state, const P0Value& p0);

// Gauge part for TTPs:
//   dF0 = -[(v_th^2/2) grad ln rho + (v_th^2/2) grad ln p1_hat (beta^2 - 1/2)]
//   dF1 = beta v_th Omega x n.
Vec3 gauge_field_ttp(const FieldScenario& scenario, const TTPState& state, const P0Value& p0);

// Gaussian-closure mean field for a generic tracer at relative velocity u:
//   F_H + u . grad V + (v_th^2/2) grad ln rho + (u/2p1) A
//   + (v_th^2/2) grad ln p1_hat (X^2 - 1/2),  X^2 = u^2 / v_th^2.
Vec3 itp_mean_field_gaussian(const FieldScenario& scenario, const ITPState& state,
                             const P0Value& p0);

// Extended-field correction evaluator (linear in the caller's moments):
//   (1/rho)[div Pi - grad p1] + (u/2p1)[div Q - grad ln p1_hat . Q].
Vec3 f_a_extended(const ExtendedMoments& moments, const ExtendedMomentDivs& divs,
                  const KineticFields& kf, double rho, const Vec3& u);

// Gauge field extended off the tracer set for a general distribution:
// the tracer gauge scaled by the caller's density ratio f(u_th)/f(u).
// Pure evaluator; no distribution is evolved here.
Vec3 gauge_field_general(const FieldScenario& scenario, const TTPState& state,
                         const P0Value& p0, double kdf_ratio);

struct StepOptions {
    bool project = true;      // project n back onto the plane orthogonal to b
    bool renormalize = true;  // rescale n to unit length after the step
};

struct StepDiagnostics {
    double tangency_pre = 0.0;   // |n . b| before projection
    double tangency_post = 0.0;  // |n . b| after projection
    double n_norm_err = 0.0;     // | |n| - 1 | after renormalization
    double v_th_end = 0.0;       // thermal velocity at the end of the step
    bool degenerate_segment = false;
    bool in_domain = true;
};

// One RK4 step of (r, n) with beta frozen. If u_check is non-null it is
// advanced through the mean-field acceleration as a redundant integration of
// u itself; the drift of |u_check| / v_th off beta measures how well the
// unconstrained relative dynamics preserves the constraint set.
TTPState step_ttp(const TTPState& state, const FieldScenario& scenario, const P0Segment& p0,
                  double dt, const StepOptions& opts = {}, StepDiagnostics* diag = nullptr,
                  Vec3* u_check = nullptr);

// Relative acceleration used for the redundant u channel and for ITP-style
// verification runs of the constrained dynamics:
//   du/dt = (u/2)(A/p1) + beta v_th Omega x n   evaluated at u.
Vec3 ttp_relative_acceleration(const FieldScenario& scenario, const Vec3& r, const Vec3& u,
                               double t, const P0Value& p0);

struct LiouvilleCheck {
    double numeric = 0.0;   // FD determinant of the 6x6 flow map
    double analytic = 0.0;  // exp of the integrated phase-space divergence
};

// Compares the finite-difference flow-map Jacobian determinant of the
// (r, u) dynamics against exp(int div_u F dt) with
//   div_u F = (3/2p1) A + div V + u . grad ln p1_hat.
LiouvilleCheck liouville_jacobian_check(const FieldScenario& scenario, const ITPState& itp0,
                                        const PseudoPressureState& p0_state,
                                        const QuadratureGrid& grid, double t1, double dt);

}  // namespace ttplab
