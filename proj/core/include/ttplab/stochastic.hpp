#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ttplab/ensemble.hpp"
#include "ttplab/kinetics.hpp"
#include "ttplab/rng.hpp"
#include "ttplab/scenario.hpp"

namespace ttplab {

enum class StochasticKind { DeterministicDelta, Uniform, Gaussian };

struct StochasticComponent {
    double center = 0.0;
    double width = 0.0;  // half-width (uniform) or standard deviation (gaussian)
};

// Distribution of the hidden parameters driving field fluctuations.
struct StochasticModel {
    StochasticKind kind = StochasticKind::DeterministicDelta;
    std::vector<StochasticComponent> components;

    std::size_t dim() const { return components.size(); }
    double pdf(std::span<const double> alpha) const;
    std::vector<double> sample(Rng& rng) const;

    struct Quadrature {
        std::vector<std::vector<double>> nodes;
        std::vector<double> weights;  // sum to 1
    };
    // Tensor-product quadrature matched to the kind: a single node for the
    // delta model, Gauss-Legendre for uniform, Gauss-Hermite for gaussian.
    Quadrature quadrature(int points_per_dim) const;

    static StochasticModel from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

std::vector<double> sample_alpha(const StochasticModel& model, Rng& rng);

struct Decomposition {
    double mean = 0.0;
    std::vector<double> fluctuations;
};

// Stochastic decomposition of per-draw values. Weighted form (quadrature
// mode) has exactly vanishing weighted-mean fluctuations.
Decomposition decompose(std::span<const double> values);
Decomposition decompose(std::span<const double> values, std::span<const double> weights);

// Per-draw values of the force and fields at one shared evaluation event.
struct EventSamples {
    std::vector<double> weights;  // empty => equal-weight Monte Carlo
    std::vector<Vec3> F;
    std::vector<double> rho;
    std::vector<double> p1;
    std::vector<Vec3> u_th;
};

struct KMEntry {
    std::array<int, 3> order{};  // (i, j, k) powers of (d rho, d p1, d u_th)
    Vec3 value{};
    Vec3 stderr_{};
};

struct KMTable {
    int n_max = 2;
    int u_axis = 0;  // component of d(u_th) used by the k-fold factors
    std::vector<KMEntry> entries;
};

// C_{i,j,k} = (1/n!) < dF (d rho)^i (d p1)^j (d u_th . e)^k >, n = i+j+k >= 2.
KMTable kramers_moyal(const EventSamples& samples, int n_max, int u_axis = 0);

nlohmann::json km_to_json(const KMTable& table);

struct OrderingReport {
    double zeta_V = 0.0;    // rms |dV| / |<V>|
    double zeta_p = 0.0;    // <|p1 - p0|> / <p0>
    double zeta_rho = 0.0;  // rms d rho / <rho>
    double zeta_f = 0.0;    // rms d f1 / <f1> at the reference speed
};

// Per-draw field data at a reference event, for the ordering diagnostics.
struct OrderingInput {
    std::vector<double> weights;  // empty => equal weights
    std::vector<Vec3> V;
    std::vector<double> rho;
    std::vector<double> p1;
    std::vector<double> p0;
    std::vector<double> f1_ref;
};

OrderingReport ordering_report(const OrderingInput& input);

// Convenience: assemble OrderingInput by evaluating a scenario family over
// quadrature nodes of the model at (r, t), each with its own solved or
// prescribed p0.
OrderingInput ordering_samples(const FieldScenario& scenario, const StochasticModel& model,
                               const Vec3& r, double t, double beta_ref,
                               const std::vector<double>& p0_per_node, int points_per_dim);

nlohmann::json ordering_to_json(const OrderingReport& report);

struct LangevinMemberSummary {
    std::vector<double> alpha;
    double weight = 1.0;  // quadrature weight, 1/m for MC
    TrajectoryResult trajectory;
    double p0_initial = 0.0;
};

struct LangevinBundle {
    std::vector<LangevinMemberSummary> members;
    std::size_t failures = 0;
    double success_fraction = 1.0;
};

struct LangevinSpec {
    Vec3 r0{};
    double beta = 0.0;
    double azimuth = 0.0;  // angle in the tangent frame of b(alpha)
    double t0 = 0.0;
    bool solve_p0 = true;
    double p0 = 0.0;  // used when solve_p0 is false
};

// Per-draw deterministic pipeline: resolve the scenario at alpha, fix p0,
// re-project the spawn direction onto the tangent plane of b(alpha), then
// advance p0 and the particle jointly.
LangevinBundle langevin_run(const FieldScenario& scenario, const LangevinSpec& spec,
                            const StochasticModel& model, std::size_t m_alpha, double t1,
                            double dt, std::uint64_t seed, const TrajectoryOptions& opts = {},
                            int n_threads = 1, bool quadrature_mode = false);

// Per-draw values of (F, rho, p1, u_th) for a TTP spec at one event.
EventSamples langevin_event_samples(const FieldScenario& scenario, const LangevinSpec& spec,
                                    const StochasticModel& model, std::size_t m_alpha,
                                    std::uint64_t seed, bool quadrature_mode = false,
                                    int points_per_dim = 8);

struct EntropyInequality {
    double S_of_mean = 0.0;  // S(<f1>)
    double mean_of_S = 0.0;  // <S(f1)>
};

// Brillouin-type mixture inequality S(<f1>) >= <S(f1)>, both sides by
// quadrature; each draw carries its own entropy-zero p0.
EntropyInequality entropy_inequality_check(const FieldScenario& scenario,
                                           const StochasticModel& model, double t,
                                           const QuadratureGrid& grid, int points_per_dim = 8,
                                           int u_points = 96);

// Same check with caller-supplied per-node pseudo-pressures (one per
// quadrature node of the model), e.g. values advanced in time by the
// pseudo-pressure law rather than re-initialized.
EntropyInequality entropy_inequality_at(const FieldScenario& scenario,
                                        const StochasticModel& model, double t,
                                        const QuadratureGrid& grid,
                                        const std::vector<double>& p0_per_node,
                                        int points_per_dim = 8, int u_points = 96);

}  // namespace ttplab
