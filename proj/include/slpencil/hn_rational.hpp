#pragma once

#include <vector>

#include "slpencil/poly.hpp"

namespace slp {

// A simple pole h_j with residue -delta_j, i.e. the term delta_j / (h_j - lambda).
struct Pole {
    double h = 0.0;
    double delta = 0.0;
};

// The two polynomials of the fraction representation f = up / down
// (ascending coefficients). The Dirichlet symbol uses up = {-1}, down = {0}.
struct PolyFraction {
    std::vector<double> up;
    std::vector<double> down;

    double value(double lam) const { return poly::eval(up, lam) / poly::eval(down, lam); }
};

// Coefficient-vector view c(f): (a_0..a_{d-1}, b_0..b_d) for index 2d and
// (a_0..a_d, b_0..b_d) for index 2d+1; empty for the Dirichlet symbol.
struct CoeffVector {
    int index = -1;
    std::vector<double> entries;

    double norm() const;
};

// Euclidean distance of two coefficient vectors of equal index.
// Throws IndexMismatchError otherwise.
double coeff_distance(const CoeffVector& a, const CoeffVector& b);

/// A rational Herglotz-Nevanlinna boundary function
///   f(lambda) = h0*lambda + h + sum_j delta_j / (h_j - lambda),
/// with h0 >= 0, delta_j > 0 and strictly increasing real poles h_j,
/// or the symbol "infinity" standing for the Dirichlet condition.
/// Values are immutable after construction.
class RationalHN {
public:
    static RationalHN infinity();
    static RationalHN constant(double h);
    static RationalHN linear(double h0, double h);
    RationalHN(double h0, double h, std::vector<Pole> poles);

    bool is_infinity() const { return infinite_; }
    double h0() const { return h0_; }
    double h() const { return h_; }
    const std::vector<Pole>& poles() const { return poles_; }

    // 2d+1 if h0 > 0, 2d if h0 = 0, -1 for infinity.
    int index() const;

    double evaluate(double lam) const;
    double derivative_value(double lam) const;

    // First pole h_1 when index >= 2, +inf otherwise.
    double first_pole() const;

    PolyFraction to_fraction() const;
    CoeffVector coeff_vector() const;

    static RationalHN from_coeff_vector(const CoeffVector& c);
    static RationalHN from_coeff_vector(int index, const std::vector<double>& entries);

    // Recover pole/residue form from a fraction of known index. The fraction
    // is renormalized to the leading-coefficient convention; InvalidCoefficients
    // on wrong degrees or non-real/multiple roots, NotHerglotz on bad signs.
    static RationalHN from_fraction(const PolyFraction& fr, int expected_index);

    // Membership in R_{M,Q,delta}: index equals M and the box constraints
    // |h| <= Q, delta <= delta_j <= Q, h_1 >= 1, h_j + delta <= h_{j+1},
    // h_d <= Q, plus delta <= h0 <= Q for odd M and h0 = 0 for even M.
    // For M = -1 membership means being the infinity symbol.
    bool in_R(int M, double Q, double delta) const;

private:
    RationalHN() = default;

    bool infinite_ = false;
    double h0_ = 0.0;
    double h_ = 0.0;
    std::vector<Pole> poles_;
};

bool operator==(const RationalHN& a, const RationalHN& b);

enum class ThetaCase {
    Auto,       // classify by comparing tau with f(mu)
    LowerIndex, // tau = f(mu): index drops by one, exact division by (lambda - mu)
    RaiseIndex, // tau > f(mu): index rises by one
};

/// The transform f -> (mu - lambda)/(f(lambda) - tau) + rho on rational
/// Herglotz-Nevanlinna functions. Requires mu below the first pole of f.
RationalHN theta_transform(double mu, double tau, double rho, const RationalHN& f,
                           ThetaCase tcase = ThetaCase::Auto);

} // namespace slp
