#include "slpencil/poly.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "slpencil/errors.hpp"

namespace slp::poly {

double eval(const std::vector<double>& p, double x) {
    double acc = 0.0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
    return acc;
}

double eval_derivative(const std::vector<double>& p, double x) {
    double acc = 0.0;
    for (std::size_t i = p.size(); i-- > 1;) acc = acc * x + static_cast<double>(i) * p[i];
    return acc;
}

double max_abs(const std::vector<double>& p) {
    double m = 0.0;
    for (double c : p) m = std::max(m, std::abs(c));
    return m;
}

int degree(const std::vector<double>& p, double rel_tol) {
    const double cut = rel_tol * max_abs(p);
    for (std::size_t i = p.size(); i-- > 0;) {
        if (std::abs(p[i]) > cut) return static_cast<int>(i);
    }
    return -1;
}

std::vector<double> trimmed(std::vector<double> p, double rel_tol) {
    p.resize(static_cast<std::size_t>(degree(p, rel_tol) + 1));
    return p;
}

std::vector<double> add(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
    return out;
}

std::vector<double> scaled(const std::vector<double>& p, double s) {
    std::vector<double> out = p;
    for (double& c : out) c *= s;
    return out;
}

std::vector<double> multiply(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

std::vector<double> divide_linear(const std::vector<double>& p, double mu, double* remainder) {
    if (p.empty()) {
        if (remainder) *remainder = 0.0;
        return {};
    }
    std::vector<double> q(p.size() > 1 ? p.size() - 1 : 0, 0.0);
    double carry = p.back();
    for (std::size_t i = p.size() - 1; i-- > 0;) {
        q[i] = carry;
        carry = p[i] + mu * carry;
    }
    if (remainder) *remainder = carry;
    return q;
}

std::vector<double> real_roots(const std::vector<double>& p, double imag_tol) {
    const std::vector<double> q = trimmed(p, 0.0);
    const int n = degree(q);
    if (n <= 0) return {};
    if (n == 1) return {-q[0] / q[1]};

    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -q[static_cast<std::size_t>(i)] / q[static_cast<std::size_t>(n)];

    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    std::vector<double> roots;
    roots.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::complex<double> z = solver.eigenvalues()(i);
        if (std::abs(z.imag()) > imag_tol * (1.0 + std::abs(z.real())))
            throw InvalidCoefficientsError("polynomial has a non-real root");
        roots.push_back(z.real());
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

} // namespace slp::poly
