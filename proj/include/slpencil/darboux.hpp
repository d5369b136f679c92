#pragma once

#include "slpencil/direct_solver.hpp"

namespace slp {

/// The Darboux-type transform built from a nonvanishing solution v at level
/// Lambda:
///   sigma_hat = -sigma - 2 w/v + (2/pi) ln(v(pi)/v(0)),   w = v^[1],
///   f_hat = Theta(Lambda, -w(0)/v(0), -w(0)/v(0) + (2/pi) ln(v(pi)/v(0)), f),
///   F_hat = Theta(Lambda,  w(pi)/v(pi),  w(pi)/v(pi) - (2/pi) ln(v(pi)/v(0)), F).
/// The Theta case at each end is chosen by the caller; the four named
/// specializations below pick them per the index bookkeeping.
Problem darboux(const Problem& P, double Lambda, const SolutionTrace& v, ThetaCase f_case,
                ThetaCase F_case);

// T-: removes lambda_1, lowers both indices; needs f != inf and F != inf.
Problem t_minus(const Problem& P);
// T-+: isospectral, moves one unit of index from f to F; needs f != inf.
Problem t_minus_plus(const Problem& P);
// T+-: isospectral, moves one unit of index from F to f; needs F != inf.
Problem t_plus_minus(const Problem& P);
// T+: adds the eigenvalue mu with norming constant nu, raises both indices;
// needs mu < lambda_1(P) and nu > 0.
Problem t_plus(double mu, double nu, const Problem& P);

// Variants taking the problem's first eigenvalue as an argument, for callers
// that already know it (the inverse recursion knows it from the data).
// t_plus_at skips the mu < lambda_1 domain check; the nonvanishing check on
// the transform solution still guards it.
Problem t_minus_at(const Problem& P, double lambda1);
Problem t_minus_plus_at(const Problem& P, double lambda1);
Problem t_plus_minus_at(const Problem& P, double lambda1);
Problem t_plus_at(double mu, double nu, const Problem& P);

// Exact arithmetic counterparts on the spectral data side.
SpectralData data_t_minus(const SpectralData& S);
SpectralData data_t_minus_plus(const SpectralData& S);
SpectralData data_t_plus_minus(const SpectralData& S);
SpectralData data_t_plus(double mu, double nu, const SpectralData& S);

} // namespace slp
