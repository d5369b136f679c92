#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slpencil/inverse_solver.hpp"

namespace slp {

struct FiniteStudyRow {
    int m = 0;
    double eps = 0.0;
    std::uint64_t seed = 0;
    double d_alpha1 = 0.0;
    double base_residual = 0.0;
    int base_iterations = 0;
};

struct FiniteStudyResult {
    std::vector<FiniteStudyRow> rows;
    double loglog_slope = 0.0; // fitted on the eps = 0 rows
    double theory_slope = 0.0; // alpha1 - alpha2
};

/// Thm 5/6-style convergence study: generate spectral data from P, keep the
/// first m pairs (optionally perturbed by seeded uniform noise within +-eps),
/// complete by the unperturbed asymptotics, invert, and report
/// d_{alpha1}(P, P_m). The noise draws depend on (seed, m) only, so the same
/// realization is scaled across the eps list.
FiniteStudyResult finite_study(const Problem& P, const std::vector<int>& m_list, double alpha1,
                               double alpha2, const std::vector<double>& eps_list, std::uint64_t seed,
                               InverseConfig base_cfg = {});

struct ChainStep {
    enum class Kind { TMinus, TMinusPlus, TPlusMinus, TPlus } kind = Kind::TMinus;
    bool auto_args = false; // T+(auto): reuse the pair removed by the last T-
    double mu = 0.0;
    double nu = 0.0;
};

// Parses chains like "T- T+(1.0,2.5) T-+ T+- T+(auto)".
std::vector<ChainStep> parse_chain(const std::string& text);

struct ChainResult {
    Problem problem;
    // Cross-check of the data-side chain, filled when requested: relative
    // mismatch between spectral_data(T(P)) and the arithmetic map.
    bool checked = false;
    double max_rel_mismatch = 0.0;
};

ChainResult apply_chain(const Problem& P, const std::vector<ChainStep>& steps, bool cross_check,
                        int check_pairs = 10);

} // namespace slp
