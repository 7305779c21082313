#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "sisopt/equilibrium.hpp"
#include "sisopt/model.hpp"
#include "sisopt/rng.hpp"
#include "sisopt/spectral.hpp"
#include "test_support.hpp"

using namespace sisopt;

TEST_CASE("vector field closed forms") {
    SisModel homog = build_homogeneous(2.0);
    Strategy ones = Strategy::ones(1);

    auto f0 = vector_field(homog, ones, std::vector<double>{0.0});
    CHECK(f0[0] == 0.0);

    auto fe = vector_field(homog, ones, std::vector<double>{0.5});
    CHECK(fe[0] == doctest::Approx(0.0));

    auto fq = vector_field(homog, ones, std::vector<double>{0.25});
    CHECK(fq[0] == doctest::Approx(0.125)); // (3/4)(1/2) - 1/4

    CHECK_THROWS_AS(vector_field(homog, ones, std::vector<double>{1.5}), OutOfRangeState);
}

TEST_CASE("RK4 integration: invariance of 0, logistic limit, monotone decay from 1") {
    SisModel homog = build_homogeneous(2.0);
    Strategy ones = Strategy::ones(1);

    auto still = integrate_sis(homog, ones, std::vector<double>{0.0}, 10.0);
    CHECK(still.states.back()[0] == 0.0);

    auto traj = integrate_sis(homog, ones, std::vector<double>{0.9}, 50.0);
    CHECK(traj.states.back()[0] == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(traj.max_clamp <= 1e-10);

    auto from_one = integrate_sis(homog, ones, std::vector<double>{1.0}, 30.0);
    for (std::size_t s = 1; s < from_one.states.size(); ++s)
        CHECK(from_one.states[s][0] <= from_one.states[s - 1][0] + 1e-12);
}

TEST_CASE("oversized steps are rejected") {
    SisModel homog = build_homogeneous(2.0);
    CHECK_THROWS_AS(
        integrate_sis(homog, Strategy::ones(1), std::vector<double>{0.9}, 50.0, 10.0),
        StepTooLarge);
}

TEST_CASE("maximal equilibrium closed forms") {
    // subcritical: g = 0
    SisModel sub = build_homogeneous(0.8);
    Equilibrium esub = maximal_equilibrium(sub, Strategy::ones(1));
    CHECK(esub.g[0] == 0.0);
    CHECK(esub.infected_fraction == 0.0);
    CHECK(esub.maximality_certificate <= 1.0 + 1e-8);

    // supercritical homogeneous: g = 1 - 1/kappa
    SisModel sup = build_homogeneous(2.0);
    Equilibrium esup = maximal_equilibrium(sup, Strategy::ones(1));
    CHECK(esup.g[0] == doctest::Approx(0.5).epsilon(1e-11));
    CHECK(esup.residual <= 1e-12);

    // partially vaccinated homogeneous: g = 1 - 1/(eta kappa)
    Equilibrium epart = maximal_equilibrium(sup, Strategy::constant(1, 0.75));
    CHECK(epart.g[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-11));
    CHECK(epart.infected_fraction == doctest::Approx(0.25).epsilon(1e-10));
}

TEST_CASE("two-population equilibrium closed form") {
    // symmetric SBM2 at eta = 1: g solves g = 1.5 g / (1 + 1.5 g), so
    // g = 1/3 on both sites and I(1) = 1/3
    SisModel m = testsup::sbm2();
    Equilibrium eq = maximal_equilibrium(m, Strategy::ones(2));
    CHECK(eq.g[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-11));
    CHECK(eq.g[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-11));
    CHECK(eq.infected_fraction == doctest::Approx(1.0 / 3.0).epsilon(1e-11));
    CHECK(eq.maximality_certificate == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("fixed point and long-time ODE state agree") {
    Rng rng(2025);
    std::vector<SisModel> zoo;
    zoo.push_back(build_homogeneous(2.0));
    zoo.push_back(testsup::sbm2());
    zoo.push_back(testsup::sbm2_hetero());
    zoo.push_back(build_multipartite(5, 2.0));
    for (const auto& model : zoo) {
        const std::size_t n = model.size();
        for (int s = 0; s < 5; ++s) {
            Strategy eta = s == 0 ? Strategy::ones(n) : testsup::random_strategy(n, rng);
            Equilibrium eq = maximal_equilibrium(model, eta);
            std::vector<double> u(n, 1.0);
            double t = 0.0;
            double gap = 1.0;
            while (t < 2000.0 && gap > 5e-7) {
                auto traj = integrate_sis(model, eta, u, 50.0);
                u = traj.states.back();
                t += 50.0;
                gap = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    gap = std::max(gap, std::abs(u[i] - eq.g[i]));
            }
            CHECK(gap <= 1e-6);
        }
    }
}

TEST_CASE("reducible model: equilibrium mixes extinct and endemic blocks") {
    // disconnected blocks with per-block effective reproduction numbers 2 and
    // 0.5: the first settles at 1/2, the second dies out
    SisModel split = build_block_model({0.5, 0.5}, {{4, 0}, {0, 1}}, {1, 1});
    Equilibrium eq = maximal_equilibrium(split, Strategy::ones(2));
    CHECK(eq.g[0] == doctest::Approx(0.5).epsilon(1e-11));
    CHECK(eq.g[1] <= 1e-11); // extinct block decays geometrically to the tolerance
    CHECK(eq.infected_fraction == doctest::Approx(0.25).epsilon(1e-10));
    // the damped kernel is exactly critical on the endemic block
    CHECK(eq.maximality_certificate == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("monotonicity of the equilibrium in the strategy") {
    Rng rng(31);
    SisModel model = testsup::sbm2();
    for (int s = 0; s < 30; ++s) {
        Strategy eta1 = testsup::random_strategy(2, rng);
        Strategy eta2 = eta1;
        for (std::size_t i = 0; i < 2; ++i)
            eta2[i] = eta1[i] + (1.0 - eta1[i]) * rng.uniform();
        Equilibrium e1 = solve_equilibrium(model, eta1);
        Equilibrium e2 = solve_equilibrium(model, eta2);
        for (std::size_t i = 0; i < 2; ++i)
            CHECK(e1.g[i] <= e2.g[i] + 1e-10);
        CHECK(e1.infected_fraction <= e2.infected_fraction + 1e-10);
    }
}

TEST_CASE("sub-homogeneity of the infected fraction") {
    Rng rng(32);
    SisModel model = testsup::sbm2();
    for (int s = 0; s < 30; ++s) {
        Strategy eta = testsup::random_strategy(2, rng);
        const double lam = rng.uniform();
        Strategy scaled = eta;
        for (std::size_t i = 0; i < 2; ++i)
            scaled[i] *= lam;
        const double full = solve_equilibrium(model, eta).infected_fraction;
        const double part = solve_equilibrium(model, scaled).infected_fraction;
        CHECK(part <= lam * full + 1e-10);
    }
}

TEST_CASE("threshold: positive infection iff R_e above one") {
    Rng rng(1234);
    SisModel model = testsup::sbm2();
    int above = 0, below = 0;
    for (int s = 0; s < 100; ++s) {
        // half raw uniforms (mostly subcritical), half pushed toward 1
        Strategy eta = testsup::random_strategy(2, rng);
        if (s % 2 == 1)
            for (std::size_t i = 0; i < 2; ++i)
                eta[i] = 1.0 - 0.25 * (1.0 - eta[i]);
        const double re = effective_R(model, eta);
        const double infected = solve_equilibrium(model, eta).infected_fraction;
        if (re > 1.0 + 1e-8) {
            CHECK(infected > 1e-10);
            ++above;
        } else {
            CHECK(infected <= 1e-10);
            ++below;
        }
    }
    // the sample really spans both regimes
    CHECK(above >= 20);
    CHECK(below >= 20);
}

TEST_CASE("equilibrium strategy is critical") {
    SisModel sub = build_homogeneous(0.8);
    Strategy s_sub = equilibrium_strategy(sub);
    CHECK(s_sub[0] == doctest::Approx(1.0));

    SisModel homog = build_homogeneous(2.0);
    Strategy s_h = equilibrium_strategy(homog);
    CHECK(s_h[0] == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(effective_R(homog, s_h) == doctest::Approx(1.0).epsilon(1e-8));

    SisModel m = testsup::sbm2();
    Strategy s_m = equilibrium_strategy(m);
    CHECK(effective_R(m, s_m) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("linear stability through the damped kernel") {
    SisModel model = testsup::sbm2();
    Strategy ones = Strategy::ones(2);

    Equilibrium eq = maximal_equilibrium(model, ones);
    auto at_eq = linear_stability(model, ones, eq.g);
    CHECK(at_eq.verdict == StabilityVerdict::Stable);

    // h = 0 leaves the kernel unchanged: certificate equals R_e(eta)
    auto at_zero = linear_stability(model, ones, std::vector<double>{0.0, 0.0});
    CHECK(at_zero.verdict == StabilityVerdict::Unstable);
    CHECK(at_zero.certificate == doctest::Approx(1.5).epsilon(1e-10));

    Strategy small = Strategy::constant(2, 0.5); // R_e = 0.75 < 1
    auto calm = linear_stability(model, small, std::vector<double>{0.0, 0.0});
    CHECK(calm.verdict == StabilityVerdict::Stable);
    CHECK(calm.certificate == doctest::Approx(0.75).epsilon(1e-10));

    CHECK_THROWS_AS(linear_stability(model, ones, std::vector<double>{0.3, 0.3}),
                    NotAnEquilibrium);
}

TEST_CASE("solver failure paths") {
    SisModel model = testsup::sbm2();
    EquilibriumOptions strangled;
    strangled.max_iter = 3;
    CHECK_THROWS_AS(maximal_equilibrium(model, Strategy::ones(2), strangled),
                    EquilibriumNoConvergence);
    try {
        maximal_equilibrium(model, Strategy::ones(2), strangled);
    } catch (const EquilibriumNoConvergence& e) {
        CHECK(e.partial.g.size() == 2);
        CHECK_FALSE(e.partial.converged);
        CHECK(e.partial.iterations == 3);
    }
    Equilibrium partial = solve_equilibrium(model, Strategy::ones(2), strangled);
    CHECK_FALSE(partial.converged);
    // monotone iterates from 1 stay above the true equilibrium
    Equilibrium full = maximal_equilibrium(model, Strategy::ones(2));
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(partial.g[i] >= full.g[i] - 1e-12);
}
