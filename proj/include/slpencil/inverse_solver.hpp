#pragma once

#include "slpencil/darboux.hpp"
#include "slpencil/direct_solver.hpp"

namespace slp {

struct InverseConfig {
    int n_data = 16;      // spectral pairs fitted at the base level
    int base_K = 6;       // cosine coefficients of the reconstructed sigma
    double base_tol = 1e-6;
    int max_iter = 60;
    int grid_size = kDefaultGridSize;
    double fd_step = 1e-5;          // central-difference step for the Jacobian
    bool accept_stagnation = false; // keep the best iterate instead of failing
    // Extra polynomial modes (Legendre in 2x/pi - 1, degrees 1..count, all
    // mean-zero) that absorb endpoint odd-order derivatives of sigma. The Darboux-reduced
    // potentials have nonvanishing end slopes, which a pure cosine series only
    // captures with 1/k^2 tails; each absorbed odd derivative steepens the
    // cosine tail by k^-2, so desk-scale K suffices.
    int base_poly_modes = 6;
};

struct InverseResult {
    Problem problem;
    int t_plus_levels = 0;
    int swap_levels = 0;
    double base_residual = 0.0;
    int base_iterations = 0;
};

/// Reconstruction of (sigma, f, F) from spectral data by inductive reduction:
/// pop (lambda_1, gamma_1) and descend through the data-side T- while both
/// indices are nonnegative, swap one unit of index through T+-/T-+ when one
/// index is -1, solve the Dirichlet base case, then climb back through the
/// parameter-side transforms. Requires even M + N.
InverseResult inverse(const SpectralData& S, const InverseConfig& cfg = {});

// Base case M = N = -1: sigma = sum_k c_k cos(kx) fitted by damped
// Gauss-Newton against the forward solver, residuals
// n*(sqrt(lambda_n) - sqrt(lambda_n*)) and n*(gamma_n/gamma_n* - 1).
InverseResult dirichlet_inverse(const SpectralData& S, const InverseConfig& cfg = {});

// Completion of m measured pairs by the unperturbed asymptotics, then inverse.
InverseResult finite_data_inverse(std::vector<SpectralPair> head, int M, int N,
                                  const InverseConfig& cfg = {});
// Same chain applied to data measured with bounded error; the perturbation is
// the caller's (see the finite-study experiment for the seeded noise model).
InverseResult noisy_finite_data_inverse(std::vector<SpectralPair> perturbed_head, int M, int N,
                                        const InverseConfig& cfg = {});

// Levels the reduction will take from (M, N): (M+N)/2 + 1 descents that pop a
// pair, |M-N|/2 parity swaps.
int inverse_pop_levels(int M, int N);
int inverse_swap_levels(int M, int N);

} // namespace slp
