#pragma once

#include <functional>
#include <vector>

namespace slp {

inline constexpr int kDefaultGridSize = 2048; // intervals of the uniform grid on [0, pi]
inline constexpr int kDefaultSineCount = 256; // sine coefficients used for Sobolev norms

/// A real function on [0, pi] with zero quadrature mean, stored as values on
/// the uniform grid x_i = i*pi/G, i = 0..G. Sine Fourier coefficients and the
/// W_2^alpha norms are derived from the grid by composite Simpson quadrature.
/// Immutable after construction.
class MeanZeroFunction {
public:
    // The zero function.
    explicit MeanZeroFunction(int grid_size = kDefaultGridSize);

    // Subtracts the quadrature mean of the given grid values (size G+1, G even).
    static MeanZeroFunction project(std::vector<double> values);

    // Samples fn on the grid and projects.
    static MeanZeroFunction sample(const std::function<double(double)>& fn, int grid_size = kDefaultGridSize);

    int grid_size() const { return grid_size_; }
    const std::vector<double>& values() const { return values_; }
    double value(int i) const { return values_[static_cast<std::size_t>(i)]; }
    double x(int i) const;

    double mean() const; // trapezoid mean, 0 to rounding by construction
    double max_abs() const;

    // First `count` sine coefficients u_k = (2/pi) * int u(x) sin(kx) dx.
    // Requires count <= G/4 (AliasRiskError beyond that).
    std::vector<double> sine_coefficients(int count) const;

    // (sum_k k^{2 alpha} u_k^2)^{1/2} over k <= min(kDefaultSineCount, G/4),
    // for alpha in [0, 1/2).
    double sobolev_norm(double alpha) const;

private:
    int grid_size_ = 0;
    std::vector<double> values_;
};

MeanZeroFunction operator-(const MeanZeroFunction& a, const MeanZeroFunction& b);
MeanZeroFunction operator+(const MeanZeroFunction& a, const MeanZeroFunction& b);
MeanZeroFunction operator*(double s, const MeanZeroFunction& a);

// Composite Simpson integral of grid values over [0, pi]; size must be odd.
double simpson_integral(const std::vector<double>& values);

// Trapezoid integral over [0, pi]: exact for the piecewise-linear reading of
// the grid that the ODE integrator uses, hence the rule behind mean().
double trapezoid_integral(const std::vector<double>& values);

// l_2^alpha norm (sum_n n^{2 alpha} v_n^2)^{1/2} of a finite sequence
// v_1..v_n (entries beyond the stored ones are zero).
double l2_alpha_norm(const std::vector<double>& v, double alpha);

struct WeightedSequence {
    std::vector<double> entries;
    double alpha = 0.0;

    double norm() const { return l2_alpha_norm(entries, alpha); }
};

} // namespace slp
