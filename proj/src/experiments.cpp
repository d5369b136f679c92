#include "slpencil/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "slpencil/errors.hpp"
#include "slpencil/stability_metrics.hpp"

namespace slp {

namespace {

std::vector<SpectralPair> perturbed_head(const SpectralData& S, int m, double eps, std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(m)));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<SpectralPair> head;
    head.reserve(static_cast<std::size_t>(m));
    for (int n = 1; n <= m; ++n) {
        const double ul = u(rng);
        const double ug = u(rng);
        double lam = S.lambda_n(n) + eps * ul;
        double gam = S.gamma_n(n) + eps * ug;
        // Keep the perturbed head admissible: gamma must stay positive.
        gam = std::max(gam, 0.05 * S.gamma_n(n));
        head.push_back({lam, gam});
    }
    return head;
}

} // namespace

FiniteStudyResult finite_study(const Problem& P, const std::vector<int>& m_list, double alpha1,
                               double alpha2, const std::vector<double>& eps_list, std::uint64_t seed,
                               InverseConfig base_cfg) {
    if (!(alpha1 < alpha2 && alpha2 < 0.5 && alpha1 > 0.0))
        throw DomainViolationError("finite_study: need 0 < alpha1 < alpha2 < 1/2");
    if (m_list.empty()) throw DomainViolationError("finite_study: empty m list");
    std::vector<double> eps_all = eps_list;
    if (eps_all.empty()) eps_all.push_back(0.0);

    const int M = P.f.index();
    const int N = P.F.index();
    const int pops = inverse_pop_levels(M, N);
    const int m_max = *std::max_element(m_list.begin(), m_list.end());
    const int n_ref = std::max(base_cfg.n_data, m_max) + pops + 2;
    const SpectralData S_ref = spectral_data(P, n_ref);

    FiniteStudyResult result;
    result.theory_slope = alpha1 - alpha2;
    base_cfg.grid_size = P.sigma.grid_size();

    for (int m : m_list) {
        InverseConfig cfg = base_cfg;
        cfg.n_data = std::max(base_cfg.n_data, m + 2);
        for (double eps : eps_all) {
            std::vector<SpectralPair> head =
                eps > 0.0 ? perturbed_head(S_ref, m, eps, seed)
                          : std::vector<SpectralPair>(S_ref.pairs().begin(), S_ref.pairs().begin() + m);
            const InverseResult inv = finite_data_inverse(std::move(head), M, N, cfg);
            FiniteStudyRow row;
            row.m = m;
            row.eps = eps;
            row.seed = seed;
            row.d_alpha1 = d_alpha(P, inv.problem, alpha1);
            row.base_residual = inv.base_residual;
            row.base_iterations = inv.base_iterations;
            result.rows.push_back(row);
        }
    }

    // log-log slope of d vs m over the exact rows
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (const FiniteStudyRow& row : result.rows) {
        if (row.eps != 0.0 || !(row.d_alpha1 > 0.0)) continue;
        const double lx = std::log(static_cast<double>(row.m));
        const double ly = std::log(row.d_alpha1);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++count;
    }
    if (count >= 2) result.loglog_slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    return result;
}

std::vector<ChainStep> parse_chain(const std::string& text) {
    std::vector<ChainStep> steps;
    std::size_t i = 0;
    const auto skip_ws = [&] {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == ',')) ++i;
    };
    skip_ws();
    while (i < text.size()) {
        if (text[i] != 'T') throw DomainViolationError("parse_chain: expected a step starting with 'T'");
        ++i;
        ChainStep step;
        if (i < text.size() && text[i] == '-') {
            ++i;
            if (i < text.size() && text[i] == '+') {
                ++i;
                step.kind = ChainStep::Kind::TMinusPlus;
            } else {
                step.kind = ChainStep::Kind::TMinus;
            }
        } else if (i < text.size() && text[i] == '+') {
            ++i;
            if (i < text.size() && text[i] == '-') {
                ++i;
                step.kind = ChainStep::Kind::TPlusMinus;
            } else {
                step.kind = ChainStep::Kind::TPlus;
                if (i >= text.size() || text[i] != '(')
                    throw DomainViolationError("parse_chain: T+ needs (mu,nu) or (auto)");
                const std::size_t close = text.find(')', i);
                if (close == std::string::npos)
                    throw DomainViolationError("parse_chain: unclosed T+ argument list");
                const std::string args = text.substr(i + 1, close - i - 1);
                i = close + 1;
                if (args == "auto") {
                    step.auto_args = true;
                } else {
                    const std::size_t comma = args.find(',');
                    if (comma == std::string::npos)
                        throw DomainViolationError("parse_chain: T+ needs two arguments");
                    try {
                        step.mu = std::stod(args.substr(0, comma));
                        step.nu = std::stod(args.substr(comma + 1));
                    } catch (const std::exception&) {
                        throw DomainViolationError("parse_chain: bad numeric T+ arguments");
                    }
                }
            }
        } else {
            throw DomainViolationError("parse_chain: unknown step");
        }
        steps.push_back(step);
        skip_ws();
    }
    if (steps.empty()) throw DomainViolationError("parse_chain: empty chain");
    return steps;
}

ChainResult apply_chain(const Problem& P0, const std::vector<ChainStep>& steps, bool cross_check,
                        int check_pairs) {
    ChainResult result{P0, false, 0.0};
    const int extra = static_cast<int>(steps.size());
    SpectralData data = cross_check ? spectral_data(P0, check_pairs + extra + 1)
                                    : SpectralData(P0.f.index(), P0.F.index(), {});

    bool have_removed = false;
    SpectralPair removed{};
    int step_index = 0;
    for (const ChainStep& step : steps) {
        ++step_index;
        try {
            switch (step.kind) {
            case ChainStep::Kind::TMinus: {
                const double l1 = eigenvalues(result.problem, 1).front();
                removed = {l1, norming_constant(result.problem, l1)};
                have_removed = true;
                result.problem = t_minus_at(result.problem, l1);
                if (cross_check) data = data_t_minus(data);
                break;
            }
            case ChainStep::Kind::TMinusPlus:
                result.problem = t_minus_plus(result.problem);
                if (cross_check) data = data_t_minus_plus(data);
                break;
            case ChainStep::Kind::TPlusMinus:
                result.problem = t_plus_minus(result.problem);
                if (cross_check) data = data_t_plus_minus(data);
                break;
            case ChainStep::Kind::TPlus: {
                double mu = step.mu;
                double nu = step.nu;
                if (step.auto_args) {
                    if (!have_removed)
                        throw DomainViolationError("T+(auto) without a preceding T- in the chain");
                    mu = removed.lambda;
                    nu = removed.gamma;
                }
                result.problem = t_plus(mu, nu, result.problem);
                if (cross_check) data = data_t_plus(mu, nu, data);
                break;
            }
            }
        } catch (const DomainError& e) {
            std::ostringstream msg;
            msg << "chain step " << step_index << ": " << e.what();
            throw DomainViolationError(msg.str());
        }
    }

    if (cross_check) {
        result.checked = true;
        const int n_check = std::min(check_pairs, data.size());
        std::vector<double> guesses;
        for (int n = 1; n <= n_check; ++n) guesses.push_back(data.lambda_n(n));
        const SpectralData direct = spectral_data_near(result.problem, guesses);
        for (int n = 1; n <= n_check; ++n) {
            const double dl = std::abs(direct.lambda_n(n) - data.lambda_n(n)) /
                              (1.0 + std::abs(data.lambda_n(n)));
            const double dg =
                std::abs(direct.gamma_n(n) - data.gamma_n(n)) / (1.0 + std::abs(data.gamma_n(n)));
            result.max_rel_mismatch = std::max({result.max_rel_mismatch, dl, dg});
        }
    }
    return result;
}

} // namespace slp
