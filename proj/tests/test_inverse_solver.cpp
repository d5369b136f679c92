#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "slpencil/errors.hpp"
#include "slpencil/inverse_solver.hpp"
#include "slpencil/stability_metrics.hpp"

using namespace slp;

namespace {

constexpr double kPi = std::numbers::pi;

InverseConfig quick_cfg() {
    InverseConfig cfg;
    cfg.n_data = 10;
    cfg.base_K = 4;
    cfg.grid_size = 1024;
    cfg.base_tol = 1e-6;
    return cfg;
}

} // namespace

TEST_CASE("level bookkeeping formulas") {
    CHECK(inverse_pop_levels(-1, -1) == 0);
    CHECK(inverse_pop_levels(0, 0) == 1);
    CHECK(inverse_pop_levels(1, 1) == 2);
    CHECK(inverse_pop_levels(0, 2) == 2);
    CHECK(inverse_pop_levels(-1, 1) == 1);
    CHECK(inverse_swap_levels(0, 0) == 0);
    CHECK(inverse_swap_levels(0, 2) == 1);
    CHECK(inverse_swap_levels(-1, 1) == 1);
    CHECK(inverse_swap_levels(-1, 3) == 2);
}

TEST_CASE("dirichlet base case: exact zero data") {
    const SpectralData S = complete_finite_data({}, -1, -1);
    const InverseResult res = dirichlet_inverse(S, quick_cfg());
    CHECK(res.problem.sigma.max_abs() <= 1e-6);
    CHECK(res.problem.f.is_infinity());
    CHECK(res.problem.F.is_infinity());
    CHECK(res.base_residual < 1e-6);
}

TEST_CASE("dirichlet base case: recover 0.3 cos x") {
    const Problem P{MeanZeroFunction::sample([](double x) { return 0.3 * std::cos(x); }, 1024),
                    RationalHN::infinity(), RationalHN::infinity()};
    InverseConfig cfg = quick_cfg();
    cfg.n_data = 12;
    cfg.base_K = 6;
    const SpectralData S = spectral_data(P, cfg.n_data);
    const InverseResult res = dirichlet_inverse(S, cfg);
    CHECK(res.base_iterations <= 50);
    CHECK(res.base_residual < cfg.base_tol);
    // recovered first cosine coefficient ~ 0.3, the rest small
    const MeanZeroFunction diff = res.problem.sigma - P.sigma;
    CHECK(diff.sobolev_norm(0.0) <= 1e-3);
}

TEST_CASE("dirichlet base case: ill-posed configuration is rejected") {
    InverseConfig cfg = quick_cfg();
    cfg.n_data = 5;
    cfg.base_K = 4;
    const SpectralData S = complete_finite_data({}, -1, -1);
    CHECK_THROWS_AS(dirichlet_inverse(S, cfg), IllPosedError);
}

TEST_CASE("inverse: exact Dirichlet data gives the zero problem") {
    const SpectralData S = complete_finite_data({}, -1, -1);
    const InverseResult res = inverse(S, quick_cfg());
    CHECK(res.t_plus_levels == 0);
    CHECK(res.swap_levels == 0);
    CHECK(res.problem.sigma.sobolev_norm(0.0) <= 1e-4);
    CHECK(res.problem.f.is_infinity());
    CHECK(res.problem.F.is_infinity());
}

TEST_CASE("inverse: Neumann data reduces through one T- level") {
    std::vector<SpectralPair> pairs{{0.0, kPi}};
    for (int n = 1; n <= 14; ++n) pairs.push_back({static_cast<double>(n * n), kPi / 2});
    const SpectralData S(0, 0, pairs, true);
    const InverseResult res = inverse(S, quick_cfg());
    CHECK(res.t_plus_levels == 1);
    CHECK(res.swap_levels == 0);
    CHECK(res.problem.f.index() == 0);
    CHECK(res.problem.F.index() == 0);
    CHECK(std::abs(res.problem.f.h()) <= 1e-4);
    CHECK(std::abs(res.problem.F.h()) <= 1e-4);
    CHECK(res.problem.sigma.sobolev_norm(0.0) <= 1e-4);
}

TEST_CASE("inverse round-trips across index classes") {
    InverseConfig cfg = quick_cfg();
    cfg.n_data = 14;
    cfg.base_K = 8;
    // reduced problems are not exactly inside the sigma model span; the
    // round-trip distance is the arbiter
    cfg.accept_stagnation = true;
    cfg.base_tol = 1e-7;
    cfg.max_iter = 80;

    // (M, N) = (1, 1)
    {
        const Problem P{MeanZeroFunction::sample([](double x) { return 0.2 * std::cos(x); }, 1024),
                        RationalHN::linear(0.8, 0.4), RationalHN::linear(1.1, -0.2)};
        const SpectralData S = spectral_data(P, cfg.n_data + inverse_pop_levels(1, 1));
        REQUIRE(S.M() == 1);
        REQUIRE(S.N() == 1);
        const InverseResult res = inverse(S, cfg);
        CHECK(res.t_plus_levels == 2);
        CHECK(res.swap_levels == 0);
        CHECK(d_alpha(P, res.problem, 0.0) <= 1e-3);
    }
    // (M, N) = (-1, 1)
    {
        const Problem P{MeanZeroFunction::sample([](double x) { return 0.15 * std::cos(2 * x); }, 1024),
                        RationalHN::infinity(), RationalHN::linear(0.9, 0.3)};
        const SpectralData S = spectral_data(P, cfg.n_data + 2);
        const InverseResult res = inverse(S, cfg);
        CHECK(res.t_plus_levels == 1);
        CHECK(res.swap_levels == 1);
        CHECK(d_alpha(P, res.problem, 0.0) <= 1e-3);
    }
}

TEST_CASE("inverse rejects odd parity and bad data") {
    const SpectralData odd(0, -1, {{1.0, 1.0}, {4.0, 1.0}});
    CHECK_THROWS_AS(inverse(odd, quick_cfg()), OddParityError);

    std::vector<SpectralPair> bad{{1.0, 1.0}, {0.5, 1.0}};
    CHECK_THROWS_AS(inverse(SpectralData(-1, -1, bad, true), quick_cfg()),
                    CharacterizationViolationError);
}

TEST_CASE("finite data inverse: m = 0 Dirichlet completion is the zero problem") {
    const InverseResult res = finite_data_inverse({}, -1, -1, quick_cfg());
    CHECK(res.problem.sigma.sobolev_norm(0.0) <= 1e-4);
}

TEST_CASE("finite data inverse improves with m") {
    const Problem P{MeanZeroFunction::sample([](double x) { return 0.3 * std::cos(x); }, 1024),
                    RationalHN::infinity(), RationalHN::infinity()};
    InverseConfig cfg = quick_cfg();
    cfg.base_K = 5;
    cfg.accept_stagnation = true;
    cfg.base_tol = 1e-7;
    const SpectralData S = spectral_data(P, 16);

    double previous = 1e9;
    for (int m : {4, 8, 16}) {
        InverseConfig c = cfg;
        c.n_data = std::max(cfg.n_data, m + 2);
        const InverseResult res = finite_data_inverse(
            std::vector<SpectralPair>(S.pairs().begin(), S.pairs().begin() + m), -1, -1, c);
        const double d = d_alpha(P, res.problem, 0.1);
        CHECK(d < previous);
        previous = d;
    }
}
