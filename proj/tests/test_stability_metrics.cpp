#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "slpencil/errors.hpp"
#include "slpencil/stability_metrics.hpp"

using namespace slp;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("d_alpha basics") {
    const Problem P1{MeanZeroFunction(512), RationalHN::constant(0.3), RationalHN::constant(0.1)};
    CHECK(d_alpha(P1, P1, 0.25) == doctest::Approx(0.0));

    // sigma differs by sin(2x): single coefficient, alpha = 0 -> 1
    const Problem P2{MeanZeroFunction::sample([](double x) { return std::sin(2 * x); }, 512),
                     RationalHN::constant(0.3), RationalHN::constant(0.1)};
    CHECK(d_alpha(P1, P2, 0.0) == doctest::Approx(1.0).epsilon(1e-9));

    // M = N = -1 pairs reduce to the sigma norm alone
    const Problem D1{MeanZeroFunction(512), RationalHN::infinity(), RationalHN::infinity()};
    const Problem D2{MeanZeroFunction::sample([](double x) { return std::sin(2 * x); }, 512),
                     RationalHN::infinity(), RationalHN::infinity()};
    CHECK(d_alpha(D1, D2, 0.25) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-9));

    CHECK_THROWS_AS(d_alpha(P1, D1, 0.25), IndexMismatchError);
}

TEST_CASE("metric axioms on samples") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    for (int rep = 0; rep < 10; ++rep) {
        const double a1 = u(rng), a2 = u(rng), a3 = u(rng);
        const auto mk = [&](double c1, double c2) {
            return Problem{MeanZeroFunction::sample(
                               [=](double x) { return c1 * std::cos(x) + c2 * std::cos(2 * x); }, 512),
                           RationalHN::constant(c1), RationalHN::constant(c2)};
        };
        const Problem A = mk(a1, a2), B = mk(a2, a3), C = mk(a3, a1);
        const double ab = d_alpha(A, B, 0.25);
        const double ba = d_alpha(B, A, 0.25);
        CHECK(ab == doctest::Approx(ba)); // symmetry
        CHECK(d_alpha(A, C, 0.25) <= ab + d_alpha(B, C, 0.25) + 1e-12); // triangle
        CHECK(d_alpha(A, A, 0.25) <= 1e-12);
    }
}

TEST_CASE("rho_alpha basics and truncation metadata") {
    std::vector<SpectralPair> pairs;
    for (int n = 1; n <= 12; ++n) pairs.push_back({static_cast<double>(n * n), kPi / (2.0 * n * n)});
    const SpectralData S1(-1, -1, pairs);
    CHECK(rho_alpha(S1, S1, 0.25).value == doctest::Approx(0.0));

    // doubling gamma_1 changes beta_1 by 1 -> rho = 1
    std::vector<SpectralPair> pairs2 = pairs;
    pairs2[0].gamma *= 2.0;
    const SpectralData S2(-1, -1, pairs2);
    CHECK(rho_alpha(S1, S2, 0.25, 12).value == doctest::Approx(1.0));
    CHECK(rho_alpha(S1, S2, 0.25, 64).n_used == 12); // truncated by stored size

    // completed data sharing heads: contribution only from the stored part
    const SpectralData C1 = complete_finite_data({{1.1, kPi / 2}}, -1, -1);
    const SpectralData C2 = complete_finite_data({{1.2, kPi / 2}}, -1, -1);
    const double r16 = rho_alpha(C1, C2, 0.25, 16).value;
    const double r64 = rho_alpha(C1, C2, 0.25, 64).value;
    CHECK(r64 == doctest::Approx(r16)); // identical tails cancel

    const SpectralData other(0, 0, pairs);
    CHECK_THROWS_AS(rho_alpha(S1, other, 0.25, 8), IndexMismatchError);
}

TEST_CASE("membership in P_{Q,delta}") {
    const Problem dirichlet{MeanZeroFunction(512), RationalHN::infinity(), RationalHN::infinity()};
    CHECK(in_P_Qdelta(dirichlet, 0.25, 2.0, 0.5).ok); // lambda_1 = 1 >= 1

    const Problem neumann{MeanZeroFunction(512), RationalHN::constant(0.0), RationalHN::constant(0.0)};
    const Membership m = in_P_Qdelta(neumann, 0.25, 2.0, 0.5);
    CHECK_FALSE(m.ok); // lambda_1 = 0
    CHECK(m.reason.find("lambda_1") != std::string::npos);

    const Problem big_sigma{MeanZeroFunction::sample([](double x) { return 5.0 * std::cos(x); }, 512),
                            RationalHN::infinity(), RationalHN::infinity()};
    CHECK_FALSE(in_P_Qdelta(big_sigma, 0.25, 2.0, 0.5).ok);
}

TEST_CASE("membership in B_{R,eps}") {
    std::vector<SpectralPair> pairs;
    for (int n = 1; n <= 10; ++n) pairs.push_back({static_cast<double>(n * n), kPi / (2.0 * n * n)});
    const SpectralData S(-1, -1, pairs);
    CHECK(in_B_Reps(S, 0.25, 1.0, 0.9).ok); // gaps exactly 1, beta = 0

    std::vector<SpectralPair> low = pairs;
    low[0].lambda = 0.5;
    CHECK_FALSE(in_B_Reps(SpectralData(-1, -1, low), 0.25, 1.0, 0.5).ok);

    std::vector<SpectralPair> tiny_gamma = pairs;
    tiny_gamma[2].gamma *= 0.01; // 1 + beta_3 close to -1 + small
    CHECK_FALSE(in_B_Reps(SpectralData(-1, -1, tiny_gamma), 0.25, 1.0, 0.5).ok);
}

TEST_CASE("sampler produces members and the experiment is reproducible") {
    SamplerConfig cfg;
    cfg.alpha = 0.25;
    cfg.Q = 2.0;
    cfg.delta = 0.5;
    cfg.M = 0;
    cfg.N = 0;
    cfg.grid_size = 512;
    const ProblemSampler sampler(cfg);
    std::mt19937_64 rng(42);
    for (int i = 0; i < 3; ++i) {
        const Problem P = sampler.draw(rng);
        CHECK(in_P_Qdelta(P, cfg.alpha, cfg.Q, cfg.delta).ok);
    }

    const RatioTable t1 = lipschitz_experiment(cfg, 4, 0.25, 8, 1234);
    const RatioTable t2 = lipschitz_experiment(cfg, 4, 0.25, 8, 1234);
    REQUIRE(t1.rows.size() == t2.rows.size());
    for (std::size_t i = 0; i < t1.rows.size(); ++i) {
        CHECK(t1.rows[i].ratio == t2.rows[i].ratio);
        CHECK(t1.rows[i].seed == t2.rows[i].seed);
    }
    CHECK(t1.max_ratio > 0.0);
    for (const RatioRow& row : t1.rows) CHECK(std::isfinite(row.ratio));
}

TEST_CASE("sigma perturbation family has stable direct-map ratios") {
    // Dirichlet problems with sigma_t = t cos x, t in {0.1, 0.2}: the ratio
    // rho/d is finite and of the same order across t.
    const auto mk = [](double t) {
        return Problem{MeanZeroFunction::sample([t](double x) { return t * std::cos(x); }, 1024),
                       RationalHN::infinity(), RationalHN::infinity()};
    };
    const Problem base = mk(0.0);
    double r_prev = -1.0;
    for (double t : {0.1, 0.2}) {
        const Problem P = mk(t);
        const double d = d_alpha(base, P, 0.25);
        const double rho = rho_alpha(spectral_data(base, 10), spectral_data(P, 10), 0.25, 10).value;
        const double ratio = rho / d;
        CHECK(std::isfinite(ratio));
        CHECK(ratio > 0.0);
        if (r_prev > 0.0) CHECK(std::abs(ratio - r_prev) < 0.5 * std::max(ratio, r_prev));
        r_prev = ratio;
    }
}
