#include "slpencil/inverse_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "slpencil/errors.hpp"

namespace slp {

namespace {

constexpr double kPi = std::numbers::pi;

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// sigma model: base_K cosine modes plus, when enabled, the two mean-zero
// polynomial modes that carry the endpoint slopes.
MeanZeroFunction sigma_model(const std::vector<double>& c, const InverseConfig& cfg) {
    const int K = cfg.base_K;
    return MeanZeroFunction::sample(
        [&c, &cfg, K](double x) {
            double v = 0.0;
            for (int k = 0; k < K; ++k) v += c[static_cast<std::size_t>(k)] * std::cos((k + 1) * x);
            // Legendre polynomials of s = 2x/pi - 1: mean-zero on [0, pi] for
            // j >= 1 and much better conditioned than raw powers.
            const double s = 2.0 * x / kPi - 1.0;
            double pm = 1.0;
            double pc = s;
            for (int j = 1; j <= cfg.base_poly_modes; ++j) {
                v += c[static_cast<std::size_t>(K + j - 1)] * pc;
                const double pn = ((2 * j + 1) * s * pc - j * pm) / (j + 1);
                pm = pc;
                pc = pn;
            }
            return v;
        },
        cfg.grid_size);
}

int model_size(const InverseConfig& cfg) { return cfg.base_K + cfg.base_poly_modes; }

// One forward evaluation of the weighted base-case residual. `guesses` holds
// the previous iterate's eigenvalues and is updated in place.
std::vector<double> base_residual(const std::vector<double>& c, const InverseConfig& cfg,
                                  const std::vector<double>& target_sqrt,
                                  const std::vector<double>& target_gamma,
                                  std::vector<double>& guesses) {
    const int n_data = static_cast<int>(target_sqrt.size());
    Problem P{sigma_model(c, cfg), RationalHN::infinity(), RationalHN::infinity()};
    const SpectralData S = spectral_data_near(P, guesses);
    std::vector<double> r(static_cast<std::size_t>(2 * n_data));
    for (int n = 1; n <= n_data; ++n) {
        const std::size_t i = static_cast<std::size_t>(n - 1);
        r[2 * i] = n * (sqrt_signed(S.lambda_n(n)) - target_sqrt[i]);
        r[2 * i + 1] = n * (S.gamma_n(n) / target_gamma[i] - 1.0);
        guesses[i] = S.lambda_n(n);
    }
    return r;
}

void check_remainder_bounds(const SpectralData& S) {
    for (int n = 1; n <= S.size(); ++n) {
        const double kap = S.kappa_n(n);
        const double bet = S.beta_n(n);
        if (!(std::abs(kap) <= 50.0) || !(std::abs(bet) <= 1e6)) {
            std::ostringstream msg;
            msg << "spectral data: remainder at n = " << n << " is unbounded (kappa = " << kap
                << ", beta = " << bet << ")";
            throw CharacterizationViolationError(msg.str());
        }
    }
}

InverseResult inverse_level(const SpectralData& S, const InverseConfig& cfg, int& pops, int& swaps) {
    S.validate();
    if (S.M() == -1 && S.N() == -1) return dirichlet_inverse(S, cfg);
    if (S.M() >= 0 && S.N() >= 0) {
        const SpectralPair first = S.pairs().front();
        InverseResult res = inverse_level(data_t_minus(S), cfg, pops, swaps);
        ++pops;
        res.problem = t_plus_at(first.lambda, first.gamma, res.problem);
        ++res.t_plus_levels;
        return res;
    }
    if (S.M() == -1) {
        const double l1 = S.pairs().front().lambda;
        InverseResult res = inverse_level(data_t_plus_minus(S), cfg, pops, swaps);
        ++swaps;
        res.problem = t_minus_plus_at(res.problem, l1);
        ++res.swap_levels;
        return res;
    }
    // N == -1
    const double l1 = S.pairs().front().lambda;
    InverseResult res = inverse_level(data_t_minus_plus(S), cfg, pops, swaps);
    ++swaps;
    res.problem = t_plus_minus_at(res.problem, l1);
    ++res.swap_levels;
    return res;
}

} // namespace

int inverse_pop_levels(int M, int N) { return (M + N) / 2 + 1; }

int inverse_swap_levels(int M, int N) { return std::abs(M - N) / 2; }

InverseResult dirichlet_inverse(const SpectralData& S0, const InverseConfig& cfg) {
    if (S0.M() != -1 || S0.N() != -1)
        throw DomainViolationError("dirichlet_inverse: requires M = N = -1");
    if (cfg.n_data < cfg.base_K + 2)
        throw IllPosedError("dirichlet_inverse: n_data must be at least base_K + 2");
    if (2 * cfg.n_data < model_size(cfg) + 2)
        throw IllPosedError("dirichlet_inverse: too few data pairs for the sigma model");
    const SpectralData S = S0.extended(cfg.n_data);

    std::vector<double> target_sqrt(static_cast<std::size_t>(cfg.n_data));
    std::vector<double> target_gamma(static_cast<std::size_t>(cfg.n_data));
    std::vector<double> guesses(static_cast<std::size_t>(cfg.n_data));
    for (int n = 1; n <= cfg.n_data; ++n) {
        target_sqrt[static_cast<std::size_t>(n - 1)] = sqrt_signed(S.lambda_n(n));
        target_gamma[static_cast<std::size_t>(n - 1)] = S.gamma_n(n);
        guesses[static_cast<std::size_t>(n - 1)] = S.lambda_n(n);
    }

    const int K = model_size(cfg);
    std::vector<double> c(static_cast<std::size_t>(K), 0.0);
    std::vector<double> r = base_residual(c, cfg, target_sqrt, target_gamma, guesses);
    double rn = norm2(r);
    double lm = 0.0; // Levenberg damping, raised when the plain step stalls
    int it = 0;
    for (; it < cfg.max_iter && rn >= cfg.base_tol; ++it) {
        Eigen::MatrixXd J(2 * cfg.n_data, K);
        for (int k = 0; k < K; ++k) {
            std::vector<double> cp = c;
            std::vector<double> cm = c;
            cp[static_cast<std::size_t>(k)] += cfg.fd_step;
            cm[static_cast<std::size_t>(k)] -= cfg.fd_step;
            std::vector<double> gp = guesses;
            std::vector<double> gm = guesses;
            const std::vector<double> rp = base_residual(cp, cfg, target_sqrt, target_gamma, gp);
            const std::vector<double> rm = base_residual(cm, cfg, target_sqrt, target_gamma, gm);
            for (int i = 0; i < 2 * cfg.n_data; ++i)
                J(i, k) = (rp[static_cast<std::size_t>(i)] - rm[static_cast<std::size_t>(i)]) /
                          (2.0 * cfg.fd_step);
        }
        Eigen::VectorXd rv(2 * cfg.n_data);
        for (int i = 0; i < 2 * cfg.n_data; ++i) rv(i) = r[static_cast<std::size_t>(i)];
        const Eigen::MatrixXd JtJ = J.transpose() * J;
        const Eigen::VectorXd g = -J.transpose() * rv;
        const double scale = JtJ.trace() / K + 1e-30;

        bool improved = false;
        for (int trial = 0; trial < 9 && !improved; ++trial) {
            Eigen::MatrixXd A = JtJ;
            A.diagonal().array() += (lm + 1e-12) * scale;
            const Eigen::VectorXd step = A.ldlt().solve(g);
            double t = 1.0;
            for (int ls = 0; ls < 4 && !improved; ++ls, t *= 0.5) {
                std::vector<double> ct = c;
                for (int k = 0; k < K; ++k) ct[static_cast<std::size_t>(k)] += t * step(k);
                std::vector<double> gt = guesses;
                std::vector<double> rt = base_residual(ct, cfg, target_sqrt, target_gamma, gt);
                const double rtn = norm2(rt);
                if (rtn < rn) {
                    c = std::move(ct);
                    r = std::move(rt);
                    guesses = std::move(gt);
                    rn = rtn;
                    improved = true;
                }
            }
            if (improved) {
                lm = lm > 3e-5 ? lm / 3.0 : 0.0;
            } else {
                lm = lm == 0.0 ? 1e-4 : lm * 10.0;
            }
        }
        if (!improved) break; // stagnated
    }

    if (rn >= cfg.base_tol && !cfg.accept_stagnation) {
        std::ostringstream msg;
        msg << "dirichlet_inverse: residual " << rn << " did not reach " << cfg.base_tol << " after "
            << it << " iterations";
        throw BaseCaseNoConvergenceError(msg.str());
    }

    InverseResult res;
    res.problem = Problem{sigma_model(c, cfg), RationalHN::infinity(), RationalHN::infinity()};
    res.base_residual = rn;
    res.base_iterations = it;
    return res;
}

InverseResult inverse(const SpectralData& S0, const InverseConfig& cfg) {
    if ((S0.M() + S0.N()) % 2 != 0)
        throw OddParityError("inverse: M + N must be even; the reduction chains preserve parity");
    const int pops_expected = inverse_pop_levels(S0.M(), S0.N());
    const int swaps_expected = inverse_swap_levels(S0.M(), S0.N());
    const SpectralData S = S0.extended(std::max(S0.size(), cfg.n_data + pops_expected));
    S.validate();
    check_remainder_bounds(S);

    int pops = 0;
    int swaps = 0;
    InverseResult res = inverse_level(S, cfg, pops, swaps);
    if (pops != pops_expected || swaps != swaps_expected) {
        std::ostringstream msg;
        msg << "inverse: reduction depth bookkeeping failed: " << pops << " pops / " << swaps
            << " swaps, expected " << pops_expected << " / " << swaps_expected;
        throw ConvergenceError(msg.str());
    }
    return res;
}

InverseResult finite_data_inverse(std::vector<SpectralPair> head, int M, int N,
                                  const InverseConfig& cfg) {
    return inverse(complete_finite_data(std::move(head), M, N), cfg);
}

InverseResult noisy_finite_data_inverse(std::vector<SpectralPair> perturbed_head, int M, int N,
                                        const InverseConfig& cfg) {
    return finite_data_inverse(std::move(perturbed_head), M, N, cfg);
}

} // namespace slp
