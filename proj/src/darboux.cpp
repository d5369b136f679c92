#include "slpencil/darboux.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "slpencil/errors.hpp"

namespace slp {

namespace {

constexpr double kPi = std::numbers::pi;

} // namespace

Problem darboux(const Problem& P, double Lambda, const SolutionTrace& v, ThetaCase f_case,
                ThetaCase F_case) {
    if (static_cast<int>(v.y.size()) != P.sigma.grid_size() + 1)
        throw DomainViolationError("darboux: trace does not live on the problem grid");

    double vmax = 0.0;
    double vmin = std::numeric_limits<double>::infinity();
    for (double val : v.y) {
        vmax = std::max(vmax, std::abs(val));
        vmin = std::min(vmin, std::abs(val));
    }
    if (!(vmin > 1e-10 * vmax))
        throw VanishingEigenfunctionError("darboux: transform solution vanishes on [0, pi]");
    const double ratio = v.y.back() / v.y.front();
    if (!(ratio > 0.0))
        throw SignInconsistencyError("darboux: v(pi)/v(0) is not positive");
    const double log_term = (2.0 / kPi) * std::log(ratio);

    const int G = P.sigma.grid_size();
    std::vector<double> sig_hat(static_cast<std::size_t>(G) + 1);
    std::vector<double> wv(static_cast<std::size_t>(G) + 1);
    for (int i = 0; i <= G; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        wv[k] = v.w[k] / v.y[k];
        sig_hat[k] = -P.sigma.value(i) - 2.0 * wv[k] + log_term;
    }
    // The transform preserves the zero mean identically: int w/v equals
    // ln(v(pi)/v(0)) and int sigma is zero. Each piece gets the quadrature
    // that is exact for it (sigma is piecewise linear, w/v is smooth), so a
    // residual beyond integrator noise signals a broken trace.
    const double mean_integral = -2.0 * (simpson_integral(wv) - std::log(ratio));
    double smax = 0.0;
    for (double s : sig_hat) smax = std::max(smax, std::abs(s));
    if (std::abs(mean_integral) > 1e-6 * (1.0 + smax)) {
        std::ostringstream msg;
        msg << "darboux: transformed sigma has mean integral " << mean_integral;
        throw SignInconsistencyError(msg.str());
    }

    const double tau_f = -v.w0() / v.y0();
    const double tau_F = v.w_end() / v.y_end();
    Problem out{MeanZeroFunction::project(std::move(sig_hat)),
                theta_transform(Lambda, tau_f, tau_f + log_term, P.f, f_case),
                theta_transform(Lambda, tau_F, tau_F - log_term, P.F, F_case)};
    return out;
}

Problem t_minus(const Problem& P) {
    if (P.f.index() < 0 || P.F.index() < 0)
        throw DomainViolationError("T-: domain requires f != infinity and F != infinity");
    return t_minus_at(P, eigenvalues(P, 1).front());
}

Problem t_minus_at(const Problem& P, double lambda1) {
    if (P.f.index() < 0 || P.F.index() < 0)
        throw DomainViolationError("T-: domain requires f != infinity and F != infinity");
    return darboux(P, lambda1, phi(P, lambda1), ThetaCase::LowerIndex, ThetaCase::LowerIndex);
}

Problem t_minus_plus(const Problem& P) {
    if (P.f.index() < 0) throw DomainViolationError("T-+: domain requires f != infinity");
    return t_minus_plus_at(P, eigenvalues(P, 1).front());
}

Problem t_minus_plus_at(const Problem& P, double lambda1) {
    if (P.f.index() < 0) throw DomainViolationError("T-+: domain requires f != infinity");
    const double level = lambda1 - 2.0;
    return darboux(P, level, phi(P, level), ThetaCase::LowerIndex, ThetaCase::RaiseIndex);
}

Problem t_plus_minus(const Problem& P) {
    if (P.F.index() < 0) throw DomainViolationError("T+-: domain requires F != infinity");
    return t_plus_minus_at(P, eigenvalues(P, 1).front());
}

Problem t_plus_minus_at(const Problem& P, double lambda1) {
    if (P.F.index() < 0) throw DomainViolationError("T+-: domain requires F != infinity");
    const double level = lambda1 - 2.0;
    return darboux(P, level, psi(P, level), ThetaCase::RaiseIndex, ThetaCase::LowerIndex);
}

Problem t_plus(double mu, double nu, const Problem& P) {
    const double lambda1 = eigenvalues(P, 1).front();
    if (!(mu < lambda1)) throw DomainViolationError("T+: mu must lie below lambda_1(P)");
    return t_plus_at(mu, nu, P);
}

Problem t_plus_at(double mu, double nu, const Problem& P) {
    if (!(nu > 0.0)) throw DomainViolationError("T+: nu must be positive");
    const SolutionTrace psi_mu = psi(P, mu);
    double pmax = 0.0;
    for (double val : psi_mu.y) pmax = std::max(pmax, std::abs(val));
    if (!(std::abs(psi_mu.y0()) > 1e-12 * pmax))
        throw DomainViolationError("T+: psi(0, mu) vanishes; mu is not below the spectrum of the "
                                   "Dirichlet-at-0 companion problem");
    const double kappa = -psi_mu.w0() / psi_mu.y0();

    const PolyFraction ff = P.f.to_fraction();
    const double f_up = poly::eval(ff.up, mu);
    const double f_down = poly::eval(ff.down, mu);
    const double cross = kappa * f_down - f_up;
    const double den = nu + f_down * cross;
    if (std::abs(den) <= 1e-12 * (std::abs(nu) + std::abs(f_down * cross) + 1.0))
        throw ZeroDenominatorError("T+: denominator of rho vanishes for the given (mu, nu)");
    const double rho = (nu * kappa + f_up * cross) / den;

    const SolutionTrace u = z_solution(P.sigma, mu, rho);
    return darboux(P, mu, u, ThetaCase::RaiseIndex, ThetaCase::RaiseIndex);
}

SpectralData data_t_minus(const SpectralData& S) {
    if (S.M() < 0 || S.N() < 0)
        throw DomainViolationError("data T-: domain requires M >= 0 and N >= 0");
    if (S.size() < 2) throw DomainViolationError("data T-: need at least two stored pairs");
    const double l1 = S.pairs().front().lambda;
    std::vector<SpectralPair> out;
    out.reserve(static_cast<std::size_t>(S.size() - 1));
    for (int n = 2; n <= S.size(); ++n)
        out.push_back({S.lambda_n(n), S.gamma_n(n) / (S.lambda_n(n) - l1)});
    return SpectralData(S.M() - 1, S.N() - 1, std::move(out));
}

SpectralData data_t_minus_plus(const SpectralData& S) {
    if (S.M() < 0) throw DomainViolationError("data T-+: domain requires M >= 0");
    if (S.size() < 1) throw DomainViolationError("data T-+: empty data");
    const double l1 = S.pairs().front().lambda;
    std::vector<SpectralPair> out;
    out.reserve(static_cast<std::size_t>(S.size()));
    for (int n = 1; n <= S.size(); ++n)
        out.push_back({S.lambda_n(n), S.gamma_n(n) / (S.lambda_n(n) - l1 + 2.0)});
    return SpectralData(S.M() - 1, S.N() + 1, std::move(out));
}

SpectralData data_t_plus_minus(const SpectralData& S) {
    if (S.N() < 0) throw DomainViolationError("data T+-: domain requires N >= 0");
    if (S.size() < 1) throw DomainViolationError("data T+-: empty data");
    const double l1 = S.pairs().front().lambda;
    std::vector<SpectralPair> out;
    out.reserve(static_cast<std::size_t>(S.size()));
    for (int n = 1; n <= S.size(); ++n)
        out.push_back({S.lambda_n(n), S.gamma_n(n) * (S.lambda_n(n) - l1 + 2.0)});
    return SpectralData(S.M() + 1, S.N() - 1, std::move(out));
}

SpectralData data_t_plus(double mu, double nu, const SpectralData& S) {
    if (S.size() < 1) throw DomainViolationError("data T+: empty data");
    if (!(mu < S.pairs().front().lambda))
        throw DomainViolationError("data T+: mu must lie below lambda_1");
    if (!(nu > 0.0)) throw DomainViolationError("data T+: nu must be positive");
    std::vector<SpectralPair> out;
    out.reserve(static_cast<std::size_t>(S.size() + 1));
    out.push_back({mu, nu});
    for (int n = 1; n <= S.size(); ++n)
        out.push_back({S.lambda_n(n), S.gamma_n(n) * (S.lambda_n(n) - mu)});
    return SpectralData(S.M() + 1, S.N() + 1, std::move(out));
}

} // namespace slp
