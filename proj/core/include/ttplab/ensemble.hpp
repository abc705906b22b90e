#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ttplab/kinetics.hpp"
#include "ttplab/rng.hpp"
#include "ttplab/scenario.hpp"
#include "ttplab/ttp.hpp"

namespace ttplab {

struct EnsembleConfig {
    std::size_t n_particles = 1000;
    std::uint64_t seed = 0;
    Box3 spawn_region{};
    std::vector<Vec3> spawn_points;  // cohort reference points inside spawn_region
    double t0 = 0.0;
};

struct MomentEstimate {
    double rho_hat = 0.0, rho_stderr = 0.0, rho_ref = 0.0;
    Vec3 V_hat{}, V_stderr{}, V_ref{};
    double p1_hat = 0.0, p1_stderr = 0.0, p1_ref = 0.0;
    std::size_t n_samples = 0;
};

// Orthonormal frame {e1, e2, b}; e1 is built from the axis with the
// smallest |b| component.
void tangent_frame(const Vec3& b, Vec3& e1, Vec3& e2);

// Gaussian conditional density on the tangent set, per d(eta) = u^2 du dphi:
//   f1 = (2 rho / (pi^{3/2} v_th^3)) exp(-beta^2).
double f1_gaussian(double rho, double v_th, double beta);

// One draw: beta from the b^2 exp(-b^2) law, azimuth uniform on the tangent
// circle of b(r, t).
TTPState sample_ttp(const FieldScenario& scenario, const Vec3& r, double t, const P0Value& p0,
                    Rng& rng);

// Spawn-point moment estimators over a cohort of samples; requires >= 30
// samples. rho uses the first-moment statistic (sqrt(pi)/2) <beta>, V the
// plain mean of V + u, p1 the energy statistic rho <u^2/3>.
MomentEstimate estimate_moments(const std::vector<TTPState>& samples,
                                const FieldScenario& scenario, double t, const P0Value& p0,
                                const Vec3& ref_point);

struct TrajectoryPoint {
    double t = 0.0;
    Vec3 r{}, n{};
    double beta = 0.0;
    double tangency_defect = 0.0;
    double u_mag = 0.0;
    double beta_check = 0.0;  // |u_check| / v_th from the redundant channel
};

struct TrajectoryOptions {
    StepOptions step{};
    bool track_u_check = true;
    int record_every = 1;
    int p0_strides = 1;  // pseudo-pressure sub-steps per recorded step
};

enum class TrajectoryStatus { Ok, LeftDomain, Degenerate, Failed };

struct TrajectoryResult {
    std::vector<TrajectoryPoint> points;
    TTPState final_state{};
    Vec3 u_check{};
    double max_beta_drift = 0.0;     // relative drift of beta_check
    double max_tangency_pre = 0.0;   // before projection
    double max_tangency_post = 0.0;  // after projection
    double max_norm_err = 0.0;
    TrajectoryStatus status = TrajectoryStatus::Ok;
    std::string message;
    std::vector<std::array<double, 4>> p0_ledger;  // t, p0, S_fM, dS_T/dt
    PseudoPressureState p0_final{};
};

// Single-particle run with the pseudo-pressure advanced jointly.
TrajectoryResult run_trajectory(const FieldScenario& scenario, const TTPState& initial,
                                const PseudoPressureState& p0_state, const QuadratureGrid& grid,
                                double t1, double dt, const TrajectoryOptions& opts = {});

struct BatchResult {
    std::vector<TrajectoryResult> particles;  // indexed like the input
    std::vector<std::array<double, 4>> p0_ledger;
    PseudoPressureState p0_final{};
    std::size_t failures = 0;
};

// Advances a batch of particles against a shared pseudo-pressure path.
// Per-particle work is data-parallel; the p0 path is computed once.
BatchResult run_batch(const FieldScenario& scenario, const std::vector<TTPState>& initial,
                      const PseudoPressureState& p0_state, const QuadratureGrid& grid, double t1,
                      double dt, const TrajectoryOptions& opts = {}, int n_threads = 1);

struct EnsembleSnapshot {
    double t = 0.0;
    double p0 = 0.0;
    double S_fM = 0.0;
    double dS_T_dt = 0.0;
    std::vector<MomentEstimate> cohorts;
};

struct EnsembleResult {
    std::vector<EnsembleSnapshot> snapshots;
    std::vector<TTPState> final_states;
    std::size_t failures = 0;
    std::vector<std::array<double, 4>> entropy_ledger;
};

// Spawns n_particles split across the cohort points, advances them jointly
// with p0, and records per-snapshot moment estimates and the entropy ledger.
// Per-particle errors are collected; throws only if more than half the
// particles fail.
EnsembleResult evolve_ensemble(const EnsembleConfig& config, const FieldScenario& scenario,
                               const PseudoPressureState& p0_state, const QuadratureGrid& grid,
                               double t1, double dt, int snapshot_every = 0, int n_threads = 1);

struct VarianceCheck {
    double lhs = 0.0;     // sample mean of |dV|^2 / 3
    double rhs = 0.0;     // p1_hat at the evaluation point
    double stderr_ = 0.0;
};

// Draws dV from the full 3D Gaussian velocity law (per-axis variance
// p1_hat) and compares <dV^2/3> with p1_hat.
VarianceCheck hre_variance_check(const FieldScenario& scenario, const Vec3& r, double t,
                                 const P0Value& p0, std::size_t n_samples, std::uint64_t seed);

}  // namespace ttplab
