#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "slpencil/direct_solver.hpp"

namespace slp {

struct MetricConfig {
    double alpha = 0.25;
    int n_max = 64; // truncation for rho_alpha
    double Q = 2.0;
    double delta = 0.5;
    double R = 2.0;
    double eps = 0.1;
};

// d_alpha(P1, P2) = ||sigma_1 - sigma_2||_alpha + ||c(f_1) - c(f_2)|| +
// ||c(F_1) - c(F_2)||; both boundary indices must match.
double d_alpha(const Problem& P1, const Problem& P2, double alpha);

struct RhoResult {
    double value = 0.0;
    int n_used = 0; // truncation actually applied
};

// rho_alpha(S1, S2) = ||kappa_1 - kappa_2||_alpha + ||beta_1 - beta_2||_alpha
// over n <= n_max (further truncated to the stored pairs when there is no
// asymptotic tail to draw from).
RhoResult rho_alpha(const SpectralData& S1, const SpectralData& S2, double alpha, int n_max = 64);

struct Membership {
    bool ok = false;
    std::string reason; // first violated condition, empty when ok

    explicit operator bool() const { return ok; }
};

// P_{Q,delta}: ||sigma||_alpha <= Q, f in R_{M,Q,delta}, F in R_{N,Q,delta},
// lambda_1(P) >= 1 (one direct solve).
Membership in_P_Qdelta(const Problem& P, double alpha, double Q, double delta);

// B_{R,eps}: lambda_1 >= 1, sqrt(lambda_{n+1}) - sqrt(lambda_n) >= eps,
// ||kappa||_alpha <= R, 1 + beta_n >= eps, ||beta||_alpha <= R over stored n.
Membership in_B_Reps(const SpectralData& S, double alpha, double R, double eps);

struct SamplerConfig {
    double alpha = 0.25;
    double Q = 2.0;
    double delta = 0.5;
    int M = 0;
    int N = 0;
    int grid_size = 512;
    int max_tries = 4000;
};

/// Rejection sampler over P_{Q,delta}^{alpha,M,N}. Draws sigma from a
/// low-order cosine series scaled under 0.8*Q and boundary functions from
/// uniform draws inside the R_{M,Q,delta} box, biased toward strongly
/// repulsive constants so the lambda_1 >= 1 slice is hit often enough.
class ProblemSampler {
public:
    explicit ProblemSampler(SamplerConfig cfg);

    const SamplerConfig& config() const { return cfg_; }
    Problem draw(std::mt19937_64& rng) const;

private:
    RationalHN draw_hn(int index, std::mt19937_64& rng) const;
    MeanZeroFunction draw_sigma(std::mt19937_64& rng) const;

    SamplerConfig cfg_;
};

struct RatioRow {
    int pair_id = 0;
    double d_alpha = 0.0;
    double rho_alpha = 0.0;
    double ratio = 0.0;
    std::uint64_t seed = 0;
};

struct RatioTable {
    std::vector<RatioRow> rows;
    double max_ratio = 0.0;
    double median_ratio = 0.0;
    int skipped_degenerate = 0;
    bool uniform_ok = false; // max <= 10 * median
};

// Samples pair_count problem pairs, maps them through the direct solver and
// tabulates rho_alpha/d_alpha (or the reciprocal for the inverse direction).
// Pairs with d_alpha below 1e-10 are skipped as degenerate. Seeds are derived
// per pair, so the table is reproducible regardless of evaluation order.
RatioTable lipschitz_experiment(const SamplerConfig& cfg, int pair_count, double alpha, int n_eigen,
                                std::uint64_t seed, bool inverse_direction = false);

} // namespace slp
