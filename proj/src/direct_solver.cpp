#include "slpencil/direct_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <cstdio>
#include <cstdlib>

#include "slpencil/errors.hpp"

namespace slp {

namespace {

constexpr double kPi = std::numbers::pi;

// Max oscillation phase sqrt(|lambda|)*h per RK substep. Keeps the RK4
// dispersion error on lambda_n below ~1e-9 up to n ~ 20 on the default grid.
constexpr double kPhaseStep = 0.003;

// Offsets keep scan nodes off the exact closed-form eigenvalues (lambda = n^2
// and friends sit exactly on round grids otherwise).
constexpr double kScanOffsetS = 0.0171;
constexpr double kScanOffsetLambda = 0.0137;

struct State3 {
    double y, w, q;
};

inline State3 deriv(double sig, double lam, const State3& s, double qsign) {
    return State3{sig * s.y + s.w, -(sig * sig + lam) * s.y - sig * s.w, qsign * s.y * s.y};
}

inline State3 rk4_step(const State3& s, double h, double sig0, double sigm, double sig1, double lam,
                       double qsign) {
    const State3 k1 = deriv(sig0, lam, s, qsign);
    const State3 s2{s.y + 0.5 * h * k1.y, s.w + 0.5 * h * k1.w, s.q + 0.5 * h * k1.q};
    const State3 k2 = deriv(sigm, lam, s2, qsign);
    const State3 s3{s.y + 0.5 * h * k2.y, s.w + 0.5 * h * k2.w, s.q + 0.5 * h * k2.q};
    const State3 k3 = deriv(sigm, lam, s3, qsign);
    const State3 s4{s.y + h * k3.y, s.w + h * k3.w, s.q + h * k3.q};
    const State3 k4 = deriv(sig1, lam, s4, qsign);
    return State3{s.y + h / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
                  s.w + h / 6.0 * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w),
                  s.q + h / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q)};
}

inline int substep_count(double lam, double h) {
    const double phase = std::sqrt(std::max(std::abs(lam), 1.0)) * h;
    return std::clamp(static_cast<int>(std::ceil(phase / kPhaseStep)), 1, 8192);
}

// Advance across one sigma cell; sigma is linear from sig_from to sig_to,
// h_cell is signed.
inline State3 advance_cell(State3 s, double h_cell, double sig_from, double sig_to, double lam, int sub,
                           double qsign) {
    const double hs = h_cell / sub;
    for (int k = 0; k < sub; ++k) {
        const double t0 = static_cast<double>(k) / sub;
        const double tm = (static_cast<double>(k) + 0.5) / sub;
        const double t1 = static_cast<double>(k + 1) / sub;
        s = rk4_step(s, hs, sig_from + (sig_to - sig_from) * t0, sig_from + (sig_to - sig_from) * tm,
                     sig_from + (sig_to - sig_from) * t1, lam, qsign);
    }
    return s;
}

void check_finite(const State3& s, double lam) {
    if (!std::isfinite(s.y) || !std::isfinite(s.w)) {
        std::ostringstream msg;
        msg << "integrate: state is not finite at lambda = " << lam;
        throw NonFiniteStateError(msg.str());
    }
}

struct Endpoint {
    double y, w;
};

Endpoint integrate_endpoint(const MeanZeroFunction& sigma, double lam, double a, double b) {
    const int G = sigma.grid_size();
    const double h = kPi / G;
    const int sub = substep_count(lam, h);
    const std::vector<double>& sv = sigma.values();
    State3 s{a, b, 0.0};
    for (int i = 0; i < G; ++i) {
        s = advance_cell(s, h, sv[static_cast<std::size_t>(i)], sv[static_cast<std::size_t>(i + 1)], lam,
                         sub, 1.0);
        if (std::abs(s.y) > 1e200 || std::abs(s.w) > 1e200) check_finite(s, lam);
    }
    check_finite(s, lam);
    return Endpoint{s.y, s.w};
}

double boundary_term(const PolyFraction& fr, double lam) {
    // f'(lambda) * f_down(lambda)^2, written pole-free; zero for infinity.
    return poly::eval_derivative(fr.up, lam) * poly::eval(fr.down, lam) -
           poly::eval(fr.up, lam) * poly::eval_derivative(fr.down, lam);
}

// At an eigenvalue, (phi(pi), phi^[1](pi)) is proportional to (F_down, F_up);
// the factor theta enters the right boundary term of the norming constant as
// F'(lambda_n) phi^2(pi) = theta^2 (F_up' F_down - F_up F_down'). The
// projection form stays finite when lambda_n sits on a pole of F.
double right_end_factor(const PolyFraction& FF, double lam, double y_pi, double w_pi) {
    const double up = poly::eval(FF.up, lam);
    const double down = poly::eval(FF.down, lam);
    return (y_pi * down + w_pi * up) / (up * up + down * down);
}

class CharFn {
public:
    explicit CharFn(const Problem& P) : P_(&P), ff_(P.f.to_fraction()), FF_(P.F.to_fraction()) {}

    double operator()(double lam) const {
        const Endpoint e = integrate_endpoint(P_->sigma, lam, poly::eval(ff_.down, lam),
                                              -poly::eval(ff_.up, lam));
        return poly::eval(FF_.up, lam) * e.y - poly::eval(FF_.down, lam) * e.w;
    }

    const PolyFraction& ff() const { return ff_; }
    const PolyFraction& FF() const { return FF_; }

private:
    const Problem* P_;
    PolyFraction ff_;
    PolyFraction FF_;
};

double bc_probe(const RationalHN& f) {
    if (f.is_infinity()) return 0.0;
    const double fp = f.first_pole();
    const double p = (std::isfinite(fp) ? std::min(0.0, fp - 1.0) : 0.0) - 1.0;
    return std::max(0.0, f.evaluate(p));
}

double lambda_floor(const Problem& P) {
    const double c = P.sigma.max_abs() + bc_probe(P.f) + bc_probe(P.F);
    return -(c * c + c) - 10.0 - kScanOffsetLambda;
}

template <class Fn>
double refine_root(const Fn& fn, double a, double b, double fa, double fb) {
    for (int it = 0; it < 140; ++it) {
        const double width = b - a;
        if (width <= 1e-12 * (1.0 + std::max(std::abs(a), std::abs(b)))) break;
        double c;
        bool use_secant = false;
        if (fb != fa) {
            c = b - fb * (b - a) / (fb - fa);
            if (c > a + 0.01 * width && c < b - 0.01 * width) use_secant = true;
        }
        if (!use_secant || it % 3 == 2) c = 0.5 * (a + b);
        const double fc = fn(c);
        if (fc == 0.0) return c;
        if ((fc < 0.0) == (fa < 0.0)) {
            a = c;
            fa = fc;
        } else {
            b = c;
            fb = fc;
        }
    }
    return 0.5 * (a + b);
}

struct ScanParams {
    double step_lambda = 0.1;
    double step_s = 0.05;
};

std::vector<double> scan_and_refine(const CharFn& chi, const Problem& P, int n_max, const ScanParams& sp) {
    std::vector<double> roots;
    const auto sweep = [&](double lo, auto next, double hi) {
        double x0 = lo;
        double f0 = chi(x0);
        for (double x1 = next(x0); x0 < hi; x0 = x1, x1 = next(x1)) {
            const double f1 = chi(x1);
            if ((f0 < 0.0) != (f1 < 0.0)) roots.push_back(refine_root(chi, x0, x1, f0, f1));
            f0 = f1;
        }
    };

    // Small and negative eigenvalues: plain lambda sweep up to 1.
    sweep(lambda_floor(P), [&](double x) { return x + sp.step_lambda; }, 1.0);
    // Everything else in s = sqrt(lambda) coordinates.
    const double s_max = n_max - 0.5 * (P.f.index() + P.F.index()) + 2.0;
    {
        double s0 = kScanOffsetS;
        double f0 = chi(s0 * s0);
        for (double s1 = s0 + sp.step_s; s0 < s_max; s0 = s1, s1 += sp.step_s) {
            const double f1 = chi(s1 * s1);
            if ((f0 < 0.0) != (f1 < 0.0)) roots.push_back(refine_root(chi, s0 * s0, s1 * s1, f0, f1));
            f0 = f1;
        }
    }

    std::sort(roots.begin(), roots.end());
    std::vector<double> unique;
    for (double r : roots) {
        if (unique.empty() || r - unique.back() > 1e-7 * (1.0 + std::abs(r))) unique.push_back(r);
    }
    return unique;
}

// A missed (or spurious) root shifts every later remainder by one whole unit,
// while genuine remainders decay and drift slowly. Check the asymptotic
// window for both a bounded tail and bounded increments.
bool asymptotics_consistent(const std::vector<double>& roots, const Problem& P, int n_max) {
    if (static_cast<int>(roots.size()) < n_max) return false;
    const double shift = 0.5 * (P.f.index() + P.F.index()) + 1.0;
    const int count = static_cast<int>(roots.size());
    double prev_kap = 0.0;
    bool have_prev = false;
    for (int n = 1; n <= count; ++n) {
        const double lam = roots[static_cast<std::size_t>(n - 1)];
        if (lam < 4.0) continue;
        const double kap = std::sqrt(lam) - (n - shift);
        if (n > count - 5 && std::abs(kap) > 0.75) return false;
        if (have_prev && std::abs(kap - prev_kap) > 0.5) return false;
        prev_kap = kap;
        have_prev = true;
    }
    return true;
}

SpectralData assemble_spectral_data(const Problem& P, const std::vector<double>& lams) {
    const PolyFraction ff = P.f.to_fraction();
    const PolyFraction FF = P.F.to_fraction();
    std::vector<SpectralPair> pairs;
    pairs.reserve(lams.size());
    for (double lam : lams) {
        const SolutionTrace tr = phi(P, lam);
        const double theta = right_end_factor(FF, lam, tr.y_end(), tr.w_end());
        const double gamma =
            tr.total_integral() + boundary_term(ff, lam) + theta * theta * boundary_term(FF, lam);
        if (!(gamma > 0.0)) {
            std::ostringstream msg;
            msg << "spectral_data: nonpositive norming constant " << gamma << " at lambda = " << lam;
            throw NonPositiveError(msg.str());
        }
        pairs.push_back({lam, gamma});
    }
    return SpectralData(P.f.index(), P.F.index(), std::move(pairs));
}

} // namespace

SolutionTrace integrate(const MeanZeroFunction& sigma, double lam, double x0, double a, double b) {
    const bool fwd = x0 == 0.0;
    if (!fwd && std::abs(x0 - kPi) > 1e-12)
        throw DomainViolationError("integrate: x0 must be 0 or pi");
    if (a == 0.0 && b == 0.0) throw DomainViolationError("integrate: trivial initial data (a, b) = (0, 0)");

    const int G = sigma.grid_size();
    const double h = kPi / G;
    const int sub = substep_count(lam, h);
    const std::vector<double>& sv = sigma.values();

    SolutionTrace tr;
    tr.lambda = lam;
    tr.forward = fwd;
    tr.y.resize(static_cast<std::size_t>(G) + 1);
    tr.w.resize(static_cast<std::size_t>(G) + 1);
    tr.y_sq_integral.resize(static_cast<std::size_t>(G) + 1);

    State3 s{a, b, 0.0};
    if (fwd) {
        tr.y[0] = s.y;
        tr.w[0] = s.w;
        tr.y_sq_integral[0] = 0.0;
        for (int i = 0; i < G; ++i) {
            s = advance_cell(s, h, sv[static_cast<std::size_t>(i)], sv[static_cast<std::size_t>(i + 1)],
                             lam, sub, 1.0);
            check_finite(s, lam);
            tr.y[static_cast<std::size_t>(i + 1)] = s.y;
            tr.w[static_cast<std::size_t>(i + 1)] = s.w;
            tr.y_sq_integral[static_cast<std::size_t>(i + 1)] = s.q;
        }
    } else {
        tr.y[static_cast<std::size_t>(G)] = s.y;
        tr.w[static_cast<std::size_t>(G)] = s.w;
        tr.y_sq_integral[static_cast<std::size_t>(G)] = 0.0;
        for (int i = G; i-- > 0;) {
            s = advance_cell(s, -h, sv[static_cast<std::size_t>(i + 1)], sv[static_cast<std::size_t>(i)],
                             lam, sub, -1.0);
            check_finite(s, lam);
            tr.y[static_cast<std::size_t>(i)] = s.y;
            tr.w[static_cast<std::size_t>(i)] = s.w;
            tr.y_sq_integral[static_cast<std::size_t>(i)] = s.q;
        }
    }
    return tr;
}

SolutionTrace phi(const Problem& P, double lam) {
    const PolyFraction ff = P.f.to_fraction();
    return integrate(P.sigma, lam, 0.0, poly::eval(ff.down, lam), -poly::eval(ff.up, lam));
}

SolutionTrace psi(const Problem& P, double lam) {
    const PolyFraction FF = P.F.to_fraction();
    return integrate(P.sigma, lam, kPi, poly::eval(FF.down, lam), poly::eval(FF.up, lam));
}

SolutionTrace z_solution(const MeanZeroFunction& sigma, double lam, double rho) {
    return integrate(sigma, lam, 0.0, 1.0, -rho);
}

double char_fn(const Problem& P, double lam) { return CharFn(P)(lam); }

std::vector<double> eigenvalues(const Problem& P, int n_max) {
    if (n_max < 1) throw DomainViolationError("eigenvalues: n_max must be at least 1");
    const CharFn chi(P);
    for (int attempt = 0; attempt < 2; ++attempt) {
        ScanParams sp;
        if (attempt == 1) {
            sp.step_lambda *= 0.4;
            sp.step_s *= 0.4;
        }
        std::vector<double> roots = scan_and_refine(chi, P, n_max, sp);
        if (std::getenv("SLP_DEBUG_EIG")) {
            std::fprintf(stderr, "[eig] attempt %d n_max %d roots:", attempt, n_max);
            for (double r : roots) std::fprintf(stderr, " %.10g", r);
            std::fprintf(stderr, "\n");
        }
        if (asymptotics_consistent(roots, P, n_max)) {
            roots.resize(static_cast<std::size_t>(n_max));
            return roots;
        }
    }
    std::ostringstream msg;
    msg << "eigenvalues: root count disagrees with the asymptotic prediction for n_max = " << n_max;
    throw MissedEigenvalueError(msg.str());
}

std::vector<double> eigenvalues_near(const Problem& P, const std::vector<double>& guesses) {
    const CharFn chi(P);
    std::vector<double> roots;
    roots.reserve(guesses.size());
    bool ok = true;
    for (double g : guesses) {
        std::optional<double> found;
        if (g > 0.25) {
            const double s0 = std::sqrt(g);
            for (double w : {0.015, 0.05, 0.15, 0.4}) {
                const double a = (s0 - w) * (s0 - w);
                const double b = (s0 + w) * (s0 + w);
                const double fa = chi(a);
                const double fb = chi(b);
                if ((fa < 0.0) != (fb < 0.0)) {
                    found = refine_root(chi, a, b, fa, fb);
                    break;
                }
            }
        } else {
            for (double w : {0.02, 0.08, 0.3, 0.8}) {
                const double a = g - w;
                const double b = g + w;
                const double fa = chi(a);
                const double fb = chi(b);
                if ((fa < 0.0) != (fb < 0.0)) {
                    found = refine_root(chi, a, b, fa, fb);
                    break;
                }
            }
        }
        if (!found) {
            ok = false;
            break;
        }
        roots.push_back(*found);
    }
    if (ok) {
        for (std::size_t i = 0; i + 1 < roots.size(); ++i) {
            if (!(roots[i + 1] - roots[i] > 1e-6 * (1.0 + std::abs(roots[i])))) {
                ok = false;
                break;
            }
        }
    }
    if (!ok) return eigenvalues(P, static_cast<int>(guesses.size()));
    return roots;
}

double norming_constant(const Problem& P, double lam_n) {
    const CharFn chi(P);
    const double delta = 1e-6 * (1.0 + std::abs(lam_n));
    const double slope = (chi(lam_n + delta) - chi(lam_n - delta)) / (2.0 * delta);
    const double residual = std::abs(chi(lam_n));
    if (residual > 1e-6 * std::max(1.0, std::abs(slope) * (1.0 + std::abs(lam_n))))
        throw NotAnEigenvalueError("norming_constant: chi(lambda) is not small at the given point");
    const SolutionTrace tr = phi(P, lam_n);
    const double theta = right_end_factor(chi.FF(), lam_n, tr.y_end(), tr.w_end());
    const double gamma = tr.total_integral() + boundary_term(chi.ff(), lam_n) +
                         theta * theta * boundary_term(chi.FF(), lam_n);
    if (!(gamma > 0.0)) throw NonPositiveError("norming_constant: nonpositive value");
    return gamma;
}

double sqrt_signed(double x) { return x >= 0.0 ? std::sqrt(x) : -std::sqrt(-x); }

SpectralData::SpectralData(int M, int N, std::vector<SpectralPair> pairs, bool asymptotic_tail)
    : M_(M), N_(N), pairs_(std::move(pairs)), asymptotic_tail_(asymptotic_tail) {
    if (M_ < -1 || N_ < -1) throw DomainViolationError("SpectralData: indices must be >= -1");
}

double SpectralData::asymptotic_lambda(int n, int M, int N) {
    const double s = n - 0.5 * (M + N) - 1.0;
    return s * s;
}

double SpectralData::asymptotic_gamma(int n, int M) {
    return 0.5 * kPi * std::pow(static_cast<double>(n), 2.0 * M);
}

double SpectralData::lambda_n(int n) const {
    if (n < 1) throw DomainViolationError("SpectralData: index must be >= 1");
    if (n <= size()) return pairs_[static_cast<std::size_t>(n - 1)].lambda;
    if (!asymptotic_tail_)
        throw DomainViolationError("SpectralData: index beyond stored pairs and no asymptotic tail");
    return asymptotic_lambda(n, M_, N_);
}

double SpectralData::gamma_n(int n) const {
    if (n < 1) throw DomainViolationError("SpectralData: index must be >= 1");
    if (n <= size()) return pairs_[static_cast<std::size_t>(n - 1)].gamma;
    if (!asymptotic_tail_)
        throw DomainViolationError("SpectralData: index beyond stored pairs and no asymptotic tail");
    return asymptotic_gamma(n, M_);
}

double SpectralData::kappa_n(int n) const {
    return sqrt_signed(lambda_n(n)) - (n - 0.5 * (M_ + N_) - 1.0);
}

double SpectralData::beta_n(int n) const {
    return 2.0 * gamma_n(n) / (kPi * std::pow(static_cast<double>(n), 2.0 * M_)) - 1.0;
}

std::vector<double> SpectralData::kappas(int n_max) const {
    std::vector<double> out(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) out[static_cast<std::size_t>(n - 1)] = kappa_n(n);
    return out;
}

std::vector<double> SpectralData::betas(int n_max) const {
    std::vector<double> out(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) out[static_cast<std::size_t>(n - 1)] = beta_n(n);
    return out;
}

SpectralData SpectralData::extended(int n) const {
    if (n <= size()) return *this;
    if (!asymptotic_tail_)
        throw DomainViolationError("SpectralData::extended: no asymptotic tail to extend from");
    std::vector<SpectralPair> pairs = pairs_;
    for (int k = size() + 1; k <= n; ++k)
        pairs.push_back({asymptotic_lambda(k, M_, N_), asymptotic_gamma(k, M_)});
    SpectralData out(M_, N_, std::move(pairs), true);
    out.validate();
    return out;
}

SpectralData SpectralData::head(int m) const {
    if (m > size()) throw DomainViolationError("SpectralData::head: not enough stored pairs");
    return SpectralData(M_, N_,
                        std::vector<SpectralPair>(pairs_.begin(), pairs_.begin() + m), false);
}

void SpectralData::validate() const {
    for (int n = 1; n <= size(); ++n) {
        const SpectralPair& p = pairs_[static_cast<std::size_t>(n - 1)];
        if (!std::isfinite(p.lambda) || !std::isfinite(p.gamma))
            throw CharacterizationViolationError("spectral data: non-finite entry");
        if (!(p.gamma > 0.0)) {
            std::ostringstream msg;
            msg << "spectral data: gamma_" << n << " = " << p.gamma << " is not positive";
            throw CharacterizationViolationError(msg.str());
        }
        if (n > 1 && !(pairs_[static_cast<std::size_t>(n - 2)].lambda < p.lambda)) {
            std::ostringstream msg;
            msg << "spectral data: lambda_" << n - 1 << " >= lambda_" << n;
            throw CharacterizationViolationError(msg.str());
        }
    }
}

SpectralData spectral_data(const Problem& P, int n_max) {
    return assemble_spectral_data(P, eigenvalues(P, n_max));
}

SpectralData spectral_data_near(const Problem& P, const std::vector<double>& guesses) {
    return assemble_spectral_data(P, eigenvalues_near(P, guesses));
}

SpectralData complete_finite_data(std::vector<SpectralPair> head, int M, int N) {
    SpectralData out(M, N, std::move(head), true);
    out.validate();
    return out;
}

} // namespace slp
