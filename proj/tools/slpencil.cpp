#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slpencil/errors.hpp"
#include "slpencil/experiments.hpp"
#include "slpencil/inverse_solver.hpp"
#include "slpencil/problem_io.hpp"
#include "slpencil/stability_metrics.hpp"

namespace {

void emit(const std::string& path, const std::string& text) {
    if (path.empty())
        std::cout << text;
    else
        slp::write_text_file(path, text);
}

int run(int argc, char** argv) {
    CLI::App app{"slpencil: direct and inverse spectral solver for Sturm-Liouville pencils with "
                 "rational Herglotz-Nevanlinna boundary conditions"};
    app.require_subcommand(1);

    std::string input;
    std::string output;
    int n_max = 0;
    int grid_size = 0;
    double alpha = 0.25;
    std::uint64_t seed = 1;

    // direct
    auto* direct = app.add_subcommand("direct", "solve for spectral data, emit JSON");
    direct->add_option("--input", input, "problem TOML file")->required();
    direct->add_option("--output", output, "output JSON path (stdout if omitted)");
    direct->add_option("--n-max", n_max, "number of spectral pairs");
    direct->add_option("--grid-size", grid_size, "override the sigma grid size");

    // inverse
    auto* inverse_cmd = app.add_subcommand("inverse", "reconstruct (sigma, f, F) from data JSON");
    int n_data = 16;
    int base_K = 6;
    double base_tol = 1e-6;
    int max_iter = 60;
    bool finite = false;
    std::string report_path;
    inverse_cmd->add_option("--input", input, "spectral data JSON file")->required();
    inverse_cmd->add_option("--output", output, "output problem TOML path (stdout if omitted)");
    inverse_cmd->add_option("--grid-size", grid_size, "grid size of the reconstructed sigma");
    inverse_cmd->add_option("--n-data", n_data, "pairs fitted at the base level");
    inverse_cmd->add_option("--base-k", base_K, "cosine coefficients of sigma");
    inverse_cmd->add_option("--base-tol", base_tol, "base-case residual tolerance");
    inverse_cmd->add_option("--max-iter", max_iter, "base-case iteration cap");
    inverse_cmd->add_flag("--finite", finite, "complete the given pairs by the asymptotics first");
    inverse_cmd->add_option("--report", report_path, "write the residual report JSON here");

    // transform
    auto* transform = app.add_subcommand("transform", "apply a Darboux transform chain");
    std::string chain;
    bool with_data = false;
    transform->add_option("--input", input, "problem TOML file")->required();
    transform->add_option("--chain", chain, "e.g. \"T- T+(1.0,2.5) T-+ T+- T+(auto)\"")->required();
    transform->add_option("--output", output, "output problem TOML path (stdout if omitted)");
    transform->add_option("--grid-size", grid_size, "override the sigma grid size");
    transform->add_flag("--data", with_data, "also run the data-side chain and cross-check");

    // finite-study
    auto* study = app.add_subcommand("finite-study", "finite/noisy data convergence study, emit CSV");
    std::vector<int> m_list;
    std::vector<double> eps_list;
    double alpha1 = 0.1;
    double alpha2 = 0.4;
    study->add_option("--input", input, "problem TOML file")->required();
    study->add_option("--output", output, "output CSV path (stdout if omitted)");
    study->add_option("--m-list", m_list, "data sizes, e.g. 4 8 16 32")->delimiter(',');
    study->add_option("--eps-list", eps_list, "noise levels (default exact)")->delimiter(',');
    study->add_option("--alpha1", alpha1, "metric exponent for d");
    study->add_option("--alpha2", alpha2, "regularity exponent of the corpus");
    study->add_option("--seed", seed, "noise seed");
    study->add_option("--n-data", n_data, "base-level pairs (grows with m automatically)");
    study->add_option("--base-k", base_K, "cosine coefficients of sigma");
    study->add_option("--grid-size", grid_size, "override the sigma grid size");

    // stability
    auto* stability = app.add_subcommand("stability", "Lipschitz-ratio sampling experiment, emit CSV");
    int pair_count = 100;
    int n_eigen = 16;
    double Q = 2.0;
    double delta = 0.5;
    int M = 0;
    int N = 0;
    bool inverse_dir = false;
    stability->add_option("--output", output, "output CSV path (stdout if omitted)");
    stability->add_option("--pair-count", pair_count, "number of sampled pairs");
    stability->add_option("--alpha", alpha, "metric exponent");
    stability->add_option("--n-max", n_eigen, "spectral pairs per problem for rho");
    stability->add_option("--q", Q, "set bound Q");
    stability->add_option("--delta", delta, "set margin delta");
    stability->add_option("--m-index", M, "index of f");
    stability->add_option("--n-index", N, "index of F");
    stability->add_option("--seed", seed, "sampling seed");
    stability->add_flag("--inverse", inverse_dir, "tabulate d/rho instead of rho/d");
    stability->add_option("--grid-size", grid_size, "sampler grid size");

    CLI11_PARSE(app, argc, argv);

    if (direct->parsed()) {
        const slp::ProblemFile file = slp::load_problem_file(input);
        const slp::Problem P = slp::build_problem(file, grid_size);
        const int n = n_max > 0 ? n_max : file.solver.n_max;
        const slp::SpectralData S = slp::spectral_data(P, n);
        emit(output, slp::format_spectral_json(S));
        return 0;
    }

    if (inverse_cmd->parsed()) {
        slp::SpectralData S = slp::load_spectral_json(input);
        if ((S.M() + S.N()) % 2 != 0)
            throw slp::OddParityError("inverse: M + N is odd; the reduction chains preserve parity, "
                                      "so no inversion scheme is available");
        if (finite) S = slp::complete_finite_data(S.pairs(), S.M(), S.N());
        slp::InverseConfig cfg;
        cfg.n_data = n_data;
        cfg.base_K = base_K;
        cfg.base_tol = base_tol;
        cfg.max_iter = max_iter;
        if (grid_size > 0) cfg.grid_size = grid_size;
        if (!S.has_asymptotic_tail()) {
            // exact data: fit only what the file provides
            const int available = S.size() - slp::inverse_pop_levels(S.M(), S.N());
            if (available < cfg.n_data) {
                if (available < cfg.base_K + 2)
                    throw slp::IllPosedError(
                        "inverse: too few pairs for the requested base_K; pass --finite to complete "
                        "the data by the asymptotics, or provide more pairs");
                std::cerr << "note: fitting n_data = " << available << " pairs (file provides "
                          << S.size() << ")\n";
                cfg.n_data = available;
            }
        }
        const slp::InverseResult res = slp::inverse(S, cfg);

        // verification report: reproduce the first n_data input pairs
        const int n_check = std::min(cfg.n_data, S.size());
        std::vector<double> guesses;
        for (int n = 1; n <= n_check; ++n) guesses.push_back(S.lambda_n(n));
        const slp::SpectralData back = slp::spectral_data_near(res.problem, guesses);
        double max_rel = 0.0;
        for (int n = 1; n <= n_check; ++n) {
            max_rel = std::max(max_rel, std::abs(back.lambda_n(n) - S.lambda_n(n)) /
                                            (1.0 + std::abs(S.lambda_n(n))));
            max_rel = std::max(max_rel, std::abs(back.gamma_n(n) - S.gamma_n(n)) /
                                            (1.0 + std::abs(S.gamma_n(n))));
        }
        std::ostringstream report;
        report << "{\n  \"base_residual\": " << slp::csv_number(res.base_residual)
               << ",\n  \"base_iterations\": " << res.base_iterations
               << ",\n  \"t_plus_levels\": " << res.t_plus_levels
               << ",\n  \"swap_levels\": " << res.swap_levels
               << ",\n  \"max_rel_data_mismatch\": " << slp::csv_number(max_rel) << "\n}\n";
        emit(output, slp::format_problem(res.problem));
        if (!report_path.empty())
            slp::write_text_file(report_path, report.str());
        else
            std::cerr << report.str();
        return 0;
    }

    if (transform->parsed()) {
        const slp::ProblemFile file = slp::load_problem_file(input);
        const slp::Problem P = slp::build_problem(file, grid_size);
        const std::vector<slp::ChainStep> steps = slp::parse_chain(chain);
        const slp::ChainResult res = slp::apply_chain(P, steps, with_data);
        emit(output, slp::format_problem(res.problem));
        if (res.checked)
            std::cerr << "data-side cross-check: max relative mismatch = "
                      << slp::csv_number(res.max_rel_mismatch) << "\n";
        return 0;
    }

    if (study->parsed()) {
        const slp::ProblemFile file = slp::load_problem_file(input);
        const slp::Problem P = slp::build_problem(file, grid_size);
        std::vector<int> ms = m_list;
        std::vector<double> eps = eps_list;
        double a1 = alpha1;
        double a2 = alpha2;
        std::uint64_t sd = seed;
        if (ms.empty() && file.experiment.present) {
            ms = file.experiment.m_list;
            eps = file.experiment.eps_list;
            a1 = file.experiment.alpha1;
            a2 = file.experiment.alpha2;
            sd = file.experiment.seed;
        }
        if (ms.empty()) throw slp::DomainViolationError("finite-study: no m list given");
        slp::InverseConfig cfg;
        cfg.n_data = n_data;
        cfg.base_K = base_K;
        cfg.accept_stagnation = true;
        cfg.base_tol = 1e-7;
        cfg.max_iter = 80;
        const slp::FiniteStudyResult res = slp::finite_study(P, ms, a1, a2, eps, sd, cfg);
        std::vector<std::vector<std::string>> rows;
        for (const slp::FiniteStudyRow& row : res.rows) {
            rows.push_back({std::to_string(row.m), slp::csv_number(row.eps), std::to_string(row.seed),
                            slp::csv_number(row.d_alpha1), slp::csv_number(row.base_residual),
                            std::to_string(row.base_iterations)});
        }
        emit(output, slp::format_csv({"m", "eps", "seed", "d_alpha1", "base_residual", "iterations"},
                                     rows));
        std::cerr << "loglog_slope = " << slp::csv_number(res.loglog_slope)
                  << " (theory alpha1 - alpha2 = " << slp::csv_number(res.theory_slope) << ")\n";
        return 0;
    }

    if (stability->parsed()) {
        slp::SamplerConfig cfg;
        cfg.alpha = alpha;
        cfg.Q = Q;
        cfg.delta = delta;
        cfg.M = M;
        cfg.N = N;
        if (grid_size > 0) cfg.grid_size = grid_size;
        const slp::RatioTable table =
            slp::lipschitz_experiment(cfg, pair_count, alpha, n_eigen, seed, inverse_dir);
        std::vector<std::vector<std::string>> rows;
        for (const slp::RatioRow& row : table.rows) {
            rows.push_back({std::to_string(row.pair_id), slp::csv_number(row.d_alpha),
                            slp::csv_number(row.rho_alpha), slp::csv_number(row.ratio),
                            std::to_string(row.seed)});
        }
        emit(output, slp::format_csv({"pair_id", "d_alpha", "rho_alpha", "ratio", "seed"}, rows));
        std::cerr << "max_ratio = " << slp::csv_number(table.max_ratio)
                  << ", median_ratio = " << slp::csv_number(table.median_ratio)
                  << ", skipped = " << table.skipped_degenerate
                  << ", uniform_ok = " << (table.uniform_ok ? "yes" : "no") << "\n";
        return 0;
    }

    return 1;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const slp::ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const slp::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
