#include "slpencil/stability_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "slpencil/errors.hpp"

namespace slp {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

double d_alpha(const Problem& P1, const Problem& P2, double alpha) {
    if (P1.f.index() != P2.f.index() || P1.F.index() != P2.F.index())
        throw IndexMismatchError("d_alpha: problems have different boundary indices");
    double out = (P1.sigma - P2.sigma).sobolev_norm(alpha);
    out += coeff_distance(P1.f.coeff_vector(), P2.f.coeff_vector());
    out += coeff_distance(P1.F.coeff_vector(), P2.F.coeff_vector());
    return out;
}

RhoResult rho_alpha(const SpectralData& S1, const SpectralData& S2, double alpha, int n_max) {
    if (S1.M() != S2.M() || S1.N() != S2.N())
        throw IndexMismatchError("rho_alpha: data sets have different (M, N)");
    int n_used = n_max;
    if (!S1.has_asymptotic_tail()) n_used = std::min(n_used, S1.size());
    if (!S2.has_asymptotic_tail()) n_used = std::min(n_used, S2.size());
    if (n_used < 1) throw DomainViolationError("rho_alpha: no overlapping entries");
    std::vector<double> dk(static_cast<std::size_t>(n_used));
    std::vector<double> db(static_cast<std::size_t>(n_used));
    for (int n = 1; n <= n_used; ++n) {
        dk[static_cast<std::size_t>(n - 1)] = S1.kappa_n(n) - S2.kappa_n(n);
        db[static_cast<std::size_t>(n - 1)] = S1.beta_n(n) - S2.beta_n(n);
    }
    return RhoResult{l2_alpha_norm(dk, alpha) + l2_alpha_norm(db, alpha), n_used};
}

Membership in_P_Qdelta(const Problem& P, double alpha, double Q, double delta) {
    std::ostringstream why;
    const double snorm = P.sigma.sobolev_norm(alpha);
    if (!(snorm <= Q)) {
        why << "||sigma||_alpha = " << snorm << " > Q = " << Q;
        return {false, why.str()};
    }
    if (!P.f.in_R(P.f.index(), Q, delta)) return {false, "f outside R_{M,Q,delta}"};
    if (!P.F.in_R(P.F.index(), Q, delta)) return {false, "F outside R_{N,Q,delta}"};
    const double l1 = eigenvalues(P, 1).front();
    // boundary cases (the zero Dirichlet problem has lambda_1 = 1 exactly)
    // must not fail on root-refinement noise
    if (!(l1 >= 1.0 - 1e-9 * (1.0 + std::abs(l1)))) {
        why << "lambda_1 = " << l1 << " < 1";
        return {false, why.str()};
    }
    return {true, ""};
}

Membership in_B_Reps(const SpectralData& S, double alpha, double R, double eps) {
    std::ostringstream why;
    if (S.size() < 1) return {false, "empty data"};
    if (!(S.lambda_n(1) >= 1.0)) {
        why << "lambda_1 = " << S.lambda_n(1) << " < 1";
        return {false, why.str()};
    }
    for (int n = 1; n < S.size(); ++n) {
        const double gap = sqrt_signed(S.lambda_n(n + 1)) - sqrt_signed(S.lambda_n(n));
        if (!(gap >= eps)) {
            why << "sqrt-gap at n = " << n << " is " << gap << " < eps";
            return {false, why.str()};
        }
    }
    for (int n = 1; n <= S.size(); ++n) {
        if (!(1.0 + S.beta_n(n) >= eps)) {
            why << "1 + beta_" << n << " < eps";
            return {false, why.str()};
        }
    }
    const double kn = l2_alpha_norm(S.kappas(S.size()), alpha);
    if (!(kn <= R)) {
        why << "||kappa||_alpha = " << kn << " > R";
        return {false, why.str()};
    }
    const double bn = l2_alpha_norm(S.betas(S.size()), alpha);
    if (!(bn <= R)) {
        why << "||beta||_alpha = " << bn << " > R";
        return {false, why.str()};
    }
    return {true, ""};
}

ProblemSampler::ProblemSampler(SamplerConfig cfg) : cfg_(std::move(cfg)) {
    if ((cfg_.M + cfg_.N) % 2 != 0)
        throw OddParityError("ProblemSampler: M + N must be even for the stability experiments");
}

MeanZeroFunction ProblemSampler::draw_sigma(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    // First harmonic biased negative: it raises lambda_1, which the
    // lambda_1 >= 1 constraint needs at moderate Q.
    std::vector<double> c(3);
    c[0] = -(0.3 + 0.7 * u01(rng));
    c[1] = -0.25 + 0.5 * u01(rng);
    c[2] = -0.15 + 0.3 * u01(rng);
    MeanZeroFunction shape = MeanZeroFunction::sample(
        [&c](double x) {
            double v = 0.0;
            for (std::size_t k = 0; k < c.size(); ++k) v += c[k] * std::cos((k + 1) * x);
            return v;
        },
        cfg_.grid_size);
    const double norm = shape.sobolev_norm(cfg_.alpha);
    const double target = 0.8 * cfg_.Q * (0.55 + 0.45 * u01(rng));
    return (target / norm) * shape;
}

RationalHN ProblemSampler::draw_hn(int index, std::mt19937_64& rng) const {
    if (index == -1) return RationalHN::infinity();
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double Q = cfg_.Q;
    const double delta = cfg_.delta;
    // Repulsive constant term: lambda_1 >= 1 is unreachable otherwise.
    const double h = -Q * (0.55 + 0.4 * u01(rng));
    const int d = index / 2;
    const double h0 = (index % 2 != 0) ? 1.2 * delta + (0.8 * Q - 1.2 * delta) * u01(rng) : 0.0;
    std::vector<Pole> poles;
    double lo = 1.0 + 0.2 * u01(rng);
    for (int j = 0; j < d; ++j) {
        const double room = (0.95 * Q - lo) / (d - j);
        if (room <= 1.2 * delta)
            throw DomainViolationError("ProblemSampler: Q too small for the requested pole count");
        const double hj = lo + (room - 1.2 * delta) * u01(rng);
        poles.push_back({hj, 1.2 * delta + (0.8 * Q - 1.2 * delta) * u01(rng)});
        lo = hj + 1.2 * delta;
    }
    return RationalHN(h0, h, std::move(poles));
}

Problem ProblemSampler::draw(std::mt19937_64& rng) const {
    for (int attempt = 0; attempt < cfg_.max_tries; ++attempt) {
        Problem P{draw_sigma(rng), draw_hn(cfg_.M, rng), draw_hn(cfg_.N, rng)};
        if (in_P_Qdelta(P, cfg_.alpha, cfg_.Q, cfg_.delta).ok) return P;
    }
    throw ConvergenceError("ProblemSampler: rejection sampling exhausted max_tries");
}

RatioTable lipschitz_experiment(const SamplerConfig& cfg, int pair_count, double alpha, int n_eigen,
                                std::uint64_t seed, bool inverse_direction) {
    const ProblemSampler sampler(cfg);
    RatioTable table;
    for (int id = 0; id < pair_count; ++id) {
        const std::uint64_t pair_seed = splitmix64(seed ^ (0x5851f42d4c957f2dULL * (id + 1)));
        std::mt19937_64 rng(pair_seed);
        const Problem P1 = sampler.draw(rng);
        const Problem P2 = sampler.draw(rng);
        const double d = d_alpha(P1, P2, alpha);
        if (d < 1e-10) {
            ++table.skipped_degenerate;
            continue;
        }
        const SpectralData S1 = spectral_data(P1, n_eigen);
        const SpectralData S2 = spectral_data(P2, n_eigen);
        const double rho = rho_alpha(S1, S2, alpha, n_eigen).value;
        const double ratio = inverse_direction ? d / rho : rho / d;
        table.rows.push_back({id, d, rho, ratio, pair_seed});
    }
    if (!table.rows.empty()) {
        std::vector<double> ratios;
        ratios.reserve(table.rows.size());
        for (const RatioRow& row : table.rows) ratios.push_back(row.ratio);
        std::sort(ratios.begin(), ratios.end());
        table.max_ratio = ratios.back();
        table.median_ratio = ratios[ratios.size() / 2];
        table.uniform_ok = table.max_ratio <= 10.0 * table.median_ratio;
    }
    return table;
}

} // namespace slp
