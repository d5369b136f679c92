#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "slpencil/direct_solver.hpp"
#include "slpencil/errors.hpp"

namespace slp {

// Parse/format errors from files; a DomainError so the CLI exits with 2.
class ParseError : public DomainError {
public:
    using DomainError::DomainError;
};

struct SolverSpec {
    int grid_size = kDefaultGridSize;
    int n_max = 20;
};

struct ExperimentSpec {
    bool present = false;
    std::vector<int> m_list;
    double alpha1 = 0.1;
    double alpha2 = 0.4;
    std::vector<double> eps_list;
    std::uint64_t seed = 1;
};

/// A problem file: sigma as a closed-form expression (whitelisted terms
/// c*cos(k*x), c*sin(k*x), c*x^p, constants; mean-zero-projected) or as grid
/// values, the two boundary functions, solver settings, and an optional
/// experiment block. Unknown keys are rejected.
struct ProblemFile {
    std::string sigma_expression; // empty when values are given
    std::vector<double> sigma_values;
    RationalHN f = RationalHN::infinity();
    RationalHN F = RationalHN::infinity();
    SolverSpec solver;
    ExperimentSpec experiment;
};

ProblemFile parse_problem_text(const std::string& text);
ProblemFile load_problem_file(const std::string& path);

// Builds the Problem at the file's grid size (or an override). Expression
// sigma is resampled at the target grid; grid-value sigma is linearly
// interpolated when the grid changes.
Problem build_problem(const ProblemFile& file, int grid_size_override = 0);

// Whitelisted sigma expressions, e.g. "0.3*cos(x) - 0.1*sin(2*x) + 0.5*x^2".
std::function<double(double)> parse_sigma_expression(const std::string& text);

// TOML problem emission (sigma as grid values; 17 significant digits).
std::string format_problem(const Problem& P, const SolverSpec& solver = {});
void write_problem_file(const std::string& path, const Problem& P, const SolverSpec& solver = {});

// Spectral data JSON: {"M":..,"N":..,"pairs":[{"n":..,"lambda":..,"gamma":..,
// "kappa":..,"beta":..}]}. Writer emits 17 significant digits; reader accepts
// pairs with or without the remainder fields.
std::string format_spectral_json(const SpectralData& S);
void write_spectral_json(const std::string& path, const SpectralData& S);
SpectralData parse_spectral_json(const std::string& text);
SpectralData load_spectral_json(const std::string& path);

// Deterministic CSV: fixed header, "%.17g" numbers, caller-ordered rows.
std::string format_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows);
std::string csv_number(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace slp
