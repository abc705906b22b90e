#include <cmath>
#include <numbers>

#include <doctest.h>

#include "support/oracles.hpp"
#include "ttplab/errors.hpp"
#include "ttplab/stochastic.hpp"

using namespace ttplab;

namespace {
StochasticModel delta_model(double center) {
    return {StochasticKind::DeterministicDelta, {{center, 0.0}}};
}
StochasticModel uniform_model(double center, double half_width) {
    return {StochasticKind::Uniform, {{center, half_width}}};
}
StochasticModel gaussian_model(double center, double sd) {
    return {StochasticKind::Gaussian, {{center, sd}}};
}
}  // namespace

TEST_CASE("sample_alpha") {
    SUBCASE("delta model always returns the center") {
        const StochasticModel m = delta_model(0.3);
        Rng rng(1);
        for (int i = 0; i < 10; ++i) CHECK(sample_alpha(m, rng)[0] == 0.3);
    }
    SUBCASE("uniform draws have the right mean") {
        const StochasticModel m = uniform_model(0.0, 1.0);
        Rng rng(2);
        const std::size_t n = 1000000;
        double sum = 0.0, sum2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = sample_alpha(m, rng)[0];
            CHECK(a >= -1.0);
            CHECK(a <= 1.0);
            sum += a;
            sum2 += a * a;
        }
        const double mean = sum / n;
        const double se = std::sqrt((sum2 / n - mean * mean) / n);
        CHECK(std::abs(mean) < 5 * se);
    }
    SUBCASE("gaussian draws have the right variance") {
        const double sd = 0.7;
        const StochasticModel m = gaussian_model(0.0, sd);
        Rng rng(3);
        const std::size_t n = 400000;
        double sum2 = 0.0, sum4 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = sample_alpha(m, rng)[0];
            sum2 += a * a;
            sum4 += a * a * a * a;
        }
        const double var = sum2 / n;
        const double se = std::sqrt((sum4 / n - var * var) / n);
        CHECK(std::abs(var - sd * sd) < 5 * se);
    }
}

TEST_CASE("model quadrature integrates to one and matches Gaussian moments") {
    const StochasticModel g = gaussian_model(0.2, 1.3);
    const auto q = g.quadrature(12);
    double w = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        w += q.weights[i];
        m1 += q.weights[i] * q.nodes[i][0];
        m2 += q.weights[i] * q.nodes[i][0] * q.nodes[i][0];
    }
    CHECK(w == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(m1 == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(m2 == doctest::Approx(0.2 * 0.2 + 1.3 * 1.3).epsilon(1e-12));
}

TEST_CASE("decompose") {
    SUBCASE("constant values have zero fluctuations") {
        const std::vector<double> v(8, 3.14);
        const Decomposition d = decompose(v);
        CHECK(d.mean == doctest::Approx(3.14));
        for (double f : d.fluctuations) CHECK(f == doctest::Approx(0.0));
    }
    SUBCASE("odd quantity under a symmetric law has zero quadrature mean") {
        const StochasticModel m = uniform_model(0.0, 1.0);
        const auto q = m.quadrature(8);
        std::vector<double> vals;
        for (const auto& node : q.nodes) vals.push_back(2.5 * node[0]);
        const Decomposition d = decompose(vals, q.weights);
        CHECK(std::abs(d.mean) < 1e-14);
        // Weighted mean of fluctuations vanishes identically.
        double acc = 0.0;
        for (std::size_t i = 0; i < vals.size(); ++i) acc += q.weights[i] * d.fluctuations[i];
        CHECK(std::abs(acc) < 1e-14);
    }
    SUBCASE("alpha^2 under a unit gaussian has mean one") {
        const StochasticModel m = gaussian_model(0.0, 1.0);
        const auto q = m.quadrature(16);
        std::vector<double> vals;
        for (const auto& node : q.nodes) vals.push_back(node[0] * node[0]);
        CHECK(decompose(vals, q.weights).mean == doctest::Approx(1.0).epsilon(1e-10));

        Rng rng(17);
        const std::size_t n = 200000;
        std::vector<double> draws(n);
        for (auto& v : draws) {
            const double a = m.sample(rng)[0];
            v = a * a;
        }
        const Decomposition d = decompose(draws);
        double var = 0.0;
        for (double f : d.fluctuations) var += f * f;
        const double se = std::sqrt(var / n / n);
        CHECK(std::abs(d.mean - 1.0) < 5 * se);
    }
}

TEST_CASE("kramers_moyal") {
    SUBCASE("delta model: no fluctuations, all coefficients zero") {
        EventSamples ev;
        ev.weights = {1.0};
        ev.F = {{1.0, 2.0, 3.0}};
        ev.rho = {1.0};
        ev.p1 = {2.0};
        ev.u_th = {{0.1, 0.2, 0.3}};
        const KMTable t = kramers_moyal(ev, 3);
        for (const auto& e : t.entries) CHECK(norm(e.value) == 0.0);
    }
    SUBCASE("parity: even force with odd field responses kills odd total orders") {
        // dF ~ (alpha^2 - <alpha^2>), fields ~ alpha. Products with odd
        // i+j+k integrate to zero against the symmetric gaussian.
        const StochasticModel m = gaussian_model(0.0, 1.0);
        const auto q = m.quadrature(24);
        EventSamples ev;
        ev.weights = q.weights;
        for (const auto& node : q.nodes) {
            const double a = node[0];
            ev.F.push_back({0.8 * a * a, -0.3 * a * a, 0.1 * a * a});
            ev.rho.push_back(1.0 + 0.2 * a);
            ev.p1.push_back(2.0 + 0.5 * a);
            ev.u_th.push_back({0.3 * a, -0.1 * a, 0.05 * a});
        }
        const KMTable t = kramers_moyal(ev, 4);
        bool saw_even_nonzero = false;
        for (const auto& e : t.entries) {
            const int n = e.order[0] + e.order[1] + e.order[2];
            if (n % 2 == 1) {
                CHECK(norm(e.value) < 1e-12);
            } else if (norm(e.value) > 1e-10) {
                saw_even_nonzero = true;
            }
        }
        CHECK(saw_even_nonzero);
    }
    SUBCASE("Monte-Carlo estimate agrees with the quadrature oracle") {
        const StochasticModel m = gaussian_model(0.0, 1.0);
        auto fill = [](EventSamples& ev, double a) {
            ev.F.push_back({0.5 * a * a + 0.1 * a, 0.0, 0.0});
            ev.rho.push_back(1.0 + 0.3 * a);
            ev.p1.push_back(2.0 + 0.4 * a);
            ev.u_th.push_back({0.2 * a, 0.0, 0.0});
        };
        EventSamples exact;
        const auto q = m.quadrature(32);
        exact.weights = q.weights;
        for (const auto& node : q.nodes) fill(exact, node[0]);
        const KMTable oracle = kramers_moyal(exact, 2);

        EventSamples mc;
        Rng rng(31);
        for (int i = 0; i < 200000; ++i) fill(mc, m.sample(rng)[0]);
        const KMTable est = kramers_moyal(mc, 2);

        REQUIRE(est.entries.size() == oracle.entries.size());
        for (std::size_t i = 0; i < est.entries.size(); ++i) {
            for (int c = 0; c < 3; ++c) {
                const double se = std::max(est.entries[i].stderr_[c], 1e-12);
                CHECK(std::abs(est.entries[i].value[c] - oracle.entries[i].value[c]) < 5 * se);
            }
        }
    }
    SUBCASE("insufficient Monte-Carlo draws raise an estimation error") {
        EventSamples ev;
        for (int i = 0; i < 5; ++i) {
            ev.F.push_back({});
            ev.rho.push_back(1.0);
            ev.p1.push_back(1.0);
            ev.u_th.push_back({});
        }
        CHECK_THROWS_AS(kramers_moyal(ev, 2), EstimationError);
    }
}

TEST_CASE("ordering report") {
    SUBCASE("deterministic pipeline reports all zeros") {
        // Uniform fields with zero pressure: p1 = p0 exactly, no fluctuations.
        FieldScenario sc = FieldScenario::builtin("uniform");
        sc.set_param("pressure", 0.0);
        const StochasticModel m = delta_model(0.0);
        const std::vector<double> p0s{0.4};
        const OrderingInput in =
            ordering_samples(sc, m, {0.5, 0.5, 0.5}, 0.0, 1.0, p0s, 1);
        const OrderingReport rep = ordering_report(in);
        CHECK(rep.zeta_V == 0.0);
        CHECK(rep.zeta_p == 0.0);
        CHECK(rep.zeta_rho == 0.0);
        CHECK(rep.zeta_f == 0.0);
    }
    SUBCASE("pressure-offset ratio scales linearly with the field amplitude") {
        const StochasticModel m = delta_model(0.0);
        std::vector<double> zetas;
        for (double amp : {0.01, 0.02, 0.03}) {
            FieldScenario sc = FieldScenario::builtin("uniform");
            sc.set_param("pressure", amp);
            const std::vector<double> p0s{0.5};
            const OrderingInput in =
                ordering_samples(sc, m, {0.5, 0.5, 0.5}, 0.0, 1.0, p0s, 1);
            zetas.push_back(ordering_report(in).zeta_p);
        }
        CHECK(zetas[1] == doctest::Approx(2.0 * zetas[0]).epsilon(1e-10));
        CHECK(zetas[2] == doctest::Approx(3.0 * zetas[0]).epsilon(1e-10));
    }
    SUBCASE("velocity fluctuation ratio scales with the hook amplitude") {
        std::vector<double> zetas;
        for (double amp : {0.05, 0.10, 0.15}) {
            FieldScenario sc = FieldScenario::builtin("uniform");
            sc.set_alpha_hooks({{"vx", amp}});
            const StochasticModel m = uniform_model(0.0, 1.0);
            const auto q = m.quadrature(8);
            const std::vector<double> p0s(q.nodes.size(), 0.4);
            const OrderingInput in =
                ordering_samples(sc, m, {0.5, 0.5, 0.5}, 0.0, 1.0, p0s, 8);
            const OrderingReport rep = ordering_report(in);
            CHECK(rep.zeta_V >= 0.0);
            zetas.push_back(rep.zeta_V);
        }
        CHECK(zetas[1] == doctest::Approx(2.0 * zetas[0]).epsilon(1e-6));
        CHECK(zetas[2] == doctest::Approx(3.0 * zetas[0]).epsilon(1e-6));
    }
}

TEST_CASE("entropy inequality") {
    SUBCASE("delta model: both sides coincide") {
        FieldScenario sc = FieldScenario::builtin("taylor-green");
        const StochasticModel m = delta_model(0.0);
        const QuadratureGrid grid = sc.make_grid(8);
        const EntropyInequality r = entropy_inequality_check(sc, m, 0.0, grid, 1, 128);
        CHECK(r.S_of_mean == doctest::Approx(r.mean_of_S).epsilon(1e-8));
    }
    SUBCASE("two-point mixture of distinct kinetic pressures is strict") {
        // Two-node Gauss-Legendre rule on a uniform law = an equal-weight
        // two-point mixture; the hook splits the pressure scale.
        FieldScenario sc = FieldScenario::builtin("taylor-green");
        sc.set_alpha_hooks({{"U0", 0.8}});
        const StochasticModel m = uniform_model(0.0, 1.0);
        const QuadratureGrid grid = sc.make_grid(8);
        const EntropyInequality r = entropy_inequality_check(sc, m, 0.0, grid, 2, 160);
        CHECK(r.S_of_mean > r.mean_of_S + 1e-8);
    }
    SUBCASE("inequality holds across an amplitude sweep") {
        for (double zeta : {0.2, 0.4, 0.8}) {
            FieldScenario sc = FieldScenario::builtin("taylor-green");
            sc.set_alpha_hooks({{"U0", zeta}});
            const StochasticModel m = uniform_model(0.0, 1.0);
            const QuadratureGrid grid = sc.make_grid(8);
            const EntropyInequality r = entropy_inequality_check(sc, m, 0.0, grid, 4, 160);
            CHECK(r.S_of_mean >= r.mean_of_S - 1e-8);
        }
    }
    SUBCASE("averaged entropy is non-decreasing along an isothermal run") {
        // Stochastic viscosity: every member starts from the same fields
        // and the mixture spreads as the decay rates separate, so the
        // entropy of the average can only grow. Each member's
        // pseudo-pressure is advanced by its own law.
        FieldScenario sc = FieldScenario::builtin("taylor-green");
        sc.set_param("mu", 0.2);
        sc.set_alpha_hooks({{"mu", 0.8}});
        const StochasticModel m = uniform_model(0.0, 1.0);
        const QuadratureGrid grid = sc.make_grid();
        const auto q = m.quadrature(2);

        std::vector<FieldScenario> members;
        std::vector<PseudoPressureState> states;
        for (const auto& node : q.nodes) {
            members.push_back(sc.resolved(node));
            states.push_back(make_p0_state(members.back(), 0.0, grid));
        }
        std::vector<double> p0s{states[0].p0, states[1].p0};
        double prev = entropy_inequality_at(sc, m, 0.0, grid, p0s, 2, 128).S_of_mean;
        const double S_start = prev;
        for (int step = 0; step < 4; ++step) {
            for (std::size_t a = 0; a < states.size(); ++a)
                for (int k = 0; k < 25; ++k)
                    states[a] = advance_p0(states[a], members[a], 0.01, grid).state;
            p0s = {states[0].p0, states[1].p0};
            const double t = states[0].t;
            const double S = entropy_inequality_at(sc, m, t, grid, p0s, 2, 128).S_of_mean;
            CHECK(S >= prev - 1e-8);
            prev = S;
        }
        CHECK(prev > S_start);  // strictly grew over the run
    }
}

TEST_CASE("langevin bundles") {
    const FieldScenario sc = FieldScenario::builtin("rigid-rotation");
    LangevinSpec spec;
    spec.r0 = {1.0, 0.0, 0.0};
    spec.beta = 0.4;
    spec.azimuth = 0.3;
    spec.t0 = 0.0;
    spec.solve_p0 = false;
    spec.p0 = 1.0;

    SUBCASE("delta model reproduces the deterministic run bit for bit") {
        const StochasticModel m = delta_model(0.0);
        const LangevinBundle bundle = langevin_run(sc, spec, m, 3, 0.5, 0.01, 42, {}, 1);
        REQUIRE(bundle.members.size() == 3);
        CHECK(bundle.failures == 0);

        // Deterministic reference through the same public pipeline.
        const QuadratureGrid grid = sc.make_grid();
        PseudoPressureState ps = make_p0_state(sc, 0.0, grid, 1.0);
        const FluidSample fs = sc.eval(spec.r0, 0.0);
        const KineticFields kf = kinetic_fields(fs, {1.0, 0.0}, sc);
        Vec3 e1, e2;
        tangent_frame(kf.b, e1, e2);
        TTPState s0;
        s0.r = spec.r0;
        s0.beta = spec.beta;
        s0.n = std::cos(spec.azimuth) * e1 + std::sin(spec.azimuth) * e2;
        const TrajectoryResult ref = run_trajectory(sc, s0, ps, grid, 0.5, 0.01, {});

        for (const auto& member : bundle.members) {
            REQUIRE(member.trajectory.points.size() == ref.points.size());
            CHECK(norm(member.trajectory.final_state.r - ref.final_state.r) == 0.0);
            CHECK(norm(member.trajectory.final_state.n - ref.final_state.n) == 0.0);
            CHECK(member.trajectory.final_state.beta == ref.final_state.beta);
        }
    }
    SUBCASE("every member preserves its own beta") {
        const StochasticModel m = gaussian_model(0.0, 1.0);
        const LangevinBundle bundle = langevin_run(sc, spec, m, 6, 0.5, 0.005, 7, {}, 2);
        CHECK(bundle.failures == 0);
        for (const auto& member : bundle.members) {
            CHECK(member.trajectory.final_state.beta == spec.beta);
            CHECK(member.trajectory.max_beta_drift < 1e-8);
        }
    }
    SUBCASE("fixed seed reproduces the bundle exactly") {
        const StochasticModel m = gaussian_model(0.0, 0.5);
        const LangevinBundle a = langevin_run(sc, spec, m, 4, 0.2, 0.01, 99, {}, 1);
        const LangevinBundle b = langevin_run(sc, spec, m, 4, 0.2, 0.01, 99, {}, 2);
        REQUIRE(a.members.size() == b.members.size());
        for (std::size_t i = 0; i < a.members.size(); ++i) {
            CHECK(a.members[i].alpha[0] == b.members[i].alpha[0]);
            CHECK(norm(a.members[i].trajectory.final_state.r -
                       b.members[i].trajectory.final_state.r) == 0.0);
        }
    }
}
