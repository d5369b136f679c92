#pragma once

#include <vector>

#include "slpencil/function_space.hpp"
#include "slpencil/hn_rational.hpp"

namespace slp {

/// The boundary value problem L(sigma, f, F): the quasi-derivative equation
///   -(y^[1])' - sigma*y^[1] - sigma^2*y = lambda*y,  y^[1] = y' - sigma*y,
/// on (0, pi) with y^[1](0)/y(0) = -f(lambda) and y^[1](pi)/y(pi) = F(lambda).
struct Problem {
    MeanZeroFunction sigma;
    RationalHN f = RationalHN::infinity();
    RationalHN F = RationalHN::infinity();
};

/// One solution of the equation at a fixed lambda, sampled on the sigma grid:
/// y, its quasi-derivative w = y' - sigma*y, and the running integral of y^2
/// (from 0 when integrated forward, from pi when integrated backward).
struct SolutionTrace {
    double lambda = 0.0;
    bool forward = true;
    std::vector<double> y;
    std::vector<double> w;
    std::vector<double> y_sq_integral;

    double y0() const { return y.front(); }
    double w0() const { return w.front(); }
    double y_end() const { return y.back(); }
    double w_end() const { return w.back(); }
    // int_0^pi y^2 dx
    double total_integral() const { return forward ? y_sq_integral.back() : y_sq_integral.front(); }
};

// Classical fixed-step RK4 over the sigma grid (sigma piecewise linear
// between nodes). Cells are subdivided so the local oscillation phase
// sqrt(|lambda|)*h stays below a fixed budget; see eigensolver notes.
// x0 must be 0 (forward) or pi (backward); (a, b) are y(x0), y^[1](x0).
SolutionTrace integrate(const MeanZeroFunction& sigma, double lam, double x0, double a, double b);

// phi: the solution with y(0) = f_down(lambda), y^[1](0) = -f_up(lambda).
SolutionTrace phi(const Problem& P, double lam);
// psi: the solution with y(pi) = F_down(lambda), y^[1](pi) = F_up(lambda).
SolutionTrace psi(const Problem& P, double lam);
// z: the solution with y(0) = 1, y^[1](0) = -rho.
SolutionTrace z_solution(const MeanZeroFunction& sigma, double lam, double rho);

// Characteristic function chi(lambda) = F_up*phi(pi) - F_down*phi^[1](pi),
// entire in lambda; its zeros are the eigenvalues.
double char_fn(const Problem& P, double lam);

// The first n_max eigenvalues, strictly increasing, found by sign-change
// scanning (in sqrt-lambda coordinates above 1, in lambda below) plus
// bisection/secant refinement. MissedEigenvalueError when the root count
// disagrees with the asymptotic prediction after one automatic rescan.
std::vector<double> eigenvalues(const Problem& P, int n_max);

// Refines one eigenvalue near each guess; falls back to the full scan when
// bracketing fails or the refined roots collide.
std::vector<double> eigenvalues_near(const Problem& P, const std::vector<double>& guesses);

// gamma_n = int phi^2 + f'(lambda_n) phi^2(0) + F'(lambda_n) phi^2(pi);
// the boundary terms are evaluated as up'*down - up*down', which stays
// finite at poles and vanishes for the infinity symbol.
double norming_constant(const Problem& P, double lam_n);

struct SpectralPair {
    double lambda = 0.0;
    double gamma = 0.0;
};

/// Spectral data {(lambda_n, gamma_n)} of a problem with boundary indices
/// (M, N), plus the remainders of the asymptotics
///   sqrt(lambda_n) = n - (M+N)/2 - 1 + kappa_n,
///   gamma_n        = (pi/2) n^{2M} (1 + beta_n).
/// Entries beyond the stored pairs follow the unperturbed asymptotic values
/// when the data was built by completion (asymptotic_tail).
class SpectralData {
public:
    SpectralData(int M, int N, std::vector<SpectralPair> pairs, bool asymptotic_tail = false);

    int M() const { return M_; }
    int N() const { return N_; }
    int size() const { return static_cast<int>(pairs_.size()); }
    bool has_asymptotic_tail() const { return asymptotic_tail_; }
    const std::vector<SpectralPair>& pairs() const { return pairs_; }

    // 1-based accessors; indices beyond the stored pairs are served from the
    // completion rule when asymptotic_tail is set.
    double lambda_n(int n) const;
    double gamma_n(int n) const;
    double kappa_n(int n) const;
    double beta_n(int n) const;

    std::vector<double> kappas(int n_max) const;
    std::vector<double> betas(int n_max) const;

    // A copy with at least n stored pairs (materialized from the tail rule).
    SpectralData extended(int n) const;
    // First m pairs, tail flag cleared.
    SpectralData head(int m) const;

    // Strict monotonicity of lambda and positivity of gamma;
    // CharacterizationViolationError with the failing condition otherwise.
    void validate() const;

    static double asymptotic_lambda(int n, int M, int N);
    static double asymptotic_gamma(int n, int M);

private:
    int M_ = -1;
    int N_ = -1;
    std::vector<SpectralPair> pairs_;
    bool asymptotic_tail_ = false;
};

SpectralData spectral_data(const Problem& P, int n_max);
// As above but with eigenvalues located near the supplied guesses.
SpectralData spectral_data_near(const Problem& P, const std::vector<double>& guesses);

// Extends finitely many measured pairs by the unperturbed asymptotic values.
SpectralData complete_finite_data(std::vector<SpectralPair> head, int M, int N);

// sign(x) * sqrt(|x|); the convention used for remainders of (slightly
// perturbed) data whose lowest eigenvalue dips below zero.
double sqrt_signed(double x);

} // namespace slp
