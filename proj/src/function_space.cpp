#include "slpencil/function_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "slpencil/errors.hpp"

namespace slp {

namespace {

constexpr double kPi = std::numbers::pi;

void check_grid(int grid_size) {
    if (grid_size < 8 || grid_size % 2 != 0)
        throw DomainViolationError("MeanZeroFunction: grid size must be even and at least 8");
}

} // namespace

double simpson_integral(const std::vector<double>& values) {
    if (values.size() < 3 || values.size() % 2 == 0)
        throw DomainViolationError("simpson_integral: need an odd number of nodes");
    const std::size_t n = values.size() - 1;
    double s = values.front() + values.back();
    for (std::size_t i = 1; i < n; ++i) s += values[i] * (i % 2 == 1 ? 4.0 : 2.0);
    return s * (kPi / static_cast<double>(n)) / 3.0;
}

double trapezoid_integral(const std::vector<double>& values) {
    if (values.size() < 2) throw DomainViolationError("trapezoid_integral: need at least two nodes");
    const std::size_t n = values.size() - 1;
    double s = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i < n; ++i) s += values[i];
    return s * (kPi / static_cast<double>(n));
}

MeanZeroFunction::MeanZeroFunction(int grid_size) : grid_size_(grid_size) {
    check_grid(grid_size);
    values_.assign(static_cast<std::size_t>(grid_size) + 1, 0.0);
}

MeanZeroFunction MeanZeroFunction::project(std::vector<double> values) {
    const int G = static_cast<int>(values.size()) - 1;
    check_grid(G);
    for (double v : values) {
        if (!std::isfinite(v)) throw DomainViolationError("MeanZeroFunction: values must be finite");
    }
    const double mean = trapezoid_integral(values) / kPi;
    for (double& v : values) v -= mean;
    MeanZeroFunction out(G);
    out.values_ = std::move(values);
    return out;
}

MeanZeroFunction MeanZeroFunction::sample(const std::function<double(double)>& fn, int grid_size) {
    check_grid(grid_size);
    std::vector<double> values(static_cast<std::size_t>(grid_size) + 1);
    for (int i = 0; i <= grid_size; ++i) values[static_cast<std::size_t>(i)] = fn(kPi * i / grid_size);
    return project(std::move(values));
}

double MeanZeroFunction::x(int i) const { return kPi * i / grid_size_; }

double MeanZeroFunction::mean() const { return trapezoid_integral(values_) / kPi; }

double MeanZeroFunction::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

std::vector<double> MeanZeroFunction::sine_coefficients(int count) const {
    if (count < 1) throw DomainViolationError("sine_coefficients: count must be positive");
    if (count > grid_size_ / 4)
        throw AliasRiskError("sine_coefficients: requested modes are too close to the grid Nyquist limit");
    std::vector<double> coeffs(static_cast<std::size_t>(count));
    std::vector<double> integrand(values_.size());
    for (int k = 1; k <= count; ++k) {
        for (int i = 0; i <= grid_size_; ++i)
            integrand[static_cast<std::size_t>(i)] = values_[static_cast<std::size_t>(i)] * std::sin(k * x(i));
        coeffs[static_cast<std::size_t>(k - 1)] = (2.0 / kPi) * simpson_integral(integrand);
    }
    return coeffs;
}

double MeanZeroFunction::sobolev_norm(double alpha) const {
    if (!(alpha >= 0.0 && alpha < 0.5))
        throw DomainViolationError("sobolev_norm: alpha must lie in [0, 1/2)");
    const int count = std::min(kDefaultSineCount, grid_size_ / 4);
    return l2_alpha_norm(sine_coefficients(count), alpha);
}

MeanZeroFunction operator-(const MeanZeroFunction& a, const MeanZeroFunction& b) {
    if (a.grid_size() != b.grid_size())
        throw DomainViolationError("MeanZeroFunction: operands live on different grids");
    std::vector<double> values(a.values());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] -= b.values()[i];
    return MeanZeroFunction::project(std::move(values));
}

MeanZeroFunction operator+(const MeanZeroFunction& a, const MeanZeroFunction& b) {
    if (a.grid_size() != b.grid_size())
        throw DomainViolationError("MeanZeroFunction: operands live on different grids");
    std::vector<double> values(a.values());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += b.values()[i];
    return MeanZeroFunction::project(std::move(values));
}

MeanZeroFunction operator*(double s, const MeanZeroFunction& a) {
    std::vector<double> values(a.values());
    for (double& v : values) v *= s;
    return MeanZeroFunction::project(std::move(values));
}

double l2_alpha_norm(const std::vector<double>& v, double alpha) {
    double s = 0.0;
    for (std::size_t n = 0; n < v.size(); ++n)
        s += std::pow(static_cast<double>(n + 1), 2.0 * alpha) * v[n] * v[n];
    return std::sqrt(s);
}

} // namespace slp
