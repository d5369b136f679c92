#pragma once

#include <vector>

namespace slp::poly {

// Dense real polynomials as coefficient vectors in ascending degree.
// An empty vector is the zero polynomial. Degrees stay small here (the
// rational boundary functions in scope have d <= 6), so everything is
// plain O(n^2) arithmetic.

double eval(const std::vector<double>& p, double x);
double eval_derivative(const std::vector<double>& p, double x);

double max_abs(const std::vector<double>& p);

// Index of the highest coefficient with |c| > rel_tol * max_abs(p); -1 for
// the zero polynomial. rel_tol = 0 drops exact zeros only.
int degree(const std::vector<double>& p, double rel_tol = 0.0);

std::vector<double> trimmed(std::vector<double> p, double rel_tol = 0.0);

std::vector<double> add(const std::vector<double>& a, const std::vector<double>& b);
std::vector<double> scaled(const std::vector<double>& p, double s);
std::vector<double> multiply(const std::vector<double>& a, const std::vector<double>& b);

// Synthetic division of p by (x - mu). Quotient is returned, the remainder
// p(mu) is stored through `remainder`.
std::vector<double> divide_linear(const std::vector<double>& p, double mu, double* remainder);

// All roots of p via the companion matrix, required to be real: any root
// with |Im| > imag_tol * (1 + |Re|) throws InvalidCoefficientsError.
// Returned sorted ascending.
std::vector<double> real_roots(const std::vector<double>& p, double imag_tol = 1e-8);

} // namespace slp::poly
