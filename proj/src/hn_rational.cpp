#include "slpencil/hn_rational.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "slpencil/errors.hpp"

namespace slp {

namespace {

constexpr double kPoleTol = 1e-12;

double sign_of_parity(int d) { return (d % 2 == 0) ? 1.0 : -1.0; }

} // namespace

double CoeffVector::norm() const {
    double s = 0.0;
    for (double e : entries) s += e * e;
    return std::sqrt(s);
}

double coeff_distance(const CoeffVector& a, const CoeffVector& b) {
    if (a.index != b.index) throw IndexMismatchError("coeff_distance: vectors have different indices");
    double s = 0.0;
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        const double d = a.entries[i] - b.entries[i];
        s += d * d;
    }
    return std::sqrt(s);
}

RationalHN RationalHN::infinity() {
    RationalHN f;
    f.infinite_ = true;
    return f;
}

RationalHN RationalHN::constant(double h) { return RationalHN(0.0, h, {}); }

RationalHN RationalHN::linear(double h0, double h) { return RationalHN(h0, h, {}); }

RationalHN::RationalHN(double h0, double h, std::vector<Pole> poles)
    : infinite_(false), h0_(h0), h_(h), poles_(std::move(poles)) {
    if (!(h0_ >= 0.0)) throw NotHerglotzError("RationalHN: h0 must be nonnegative");
    for (std::size_t j = 0; j < poles_.size(); ++j) {
        if (!(poles_[j].delta > 0.0)) throw NotHerglotzError("RationalHN: residues delta_j must be positive");
        if (j > 0 && !(poles_[j - 1].h < poles_[j].h))
            throw NotHerglotzError("RationalHN: poles must be strictly increasing");
    }
}

int RationalHN::index() const {
    if (infinite_) return -1;
    const int d = static_cast<int>(poles_.size());
    return h0_ > 0.0 ? 2 * d + 1 : 2 * d;
}

double RationalHN::evaluate(double lam) const {
    if (infinite_) throw InfinityEvaluationError("evaluate: f is the infinity symbol");
    double v = h0_ * lam + h_;
    for (const Pole& p : poles_) {
        if (std::abs(lam - p.h) <= kPoleTol * (1.0 + std::abs(p.h)))
            throw PoleEvaluationError("evaluate: lambda coincides with a pole");
        v += p.delta / (p.h - lam);
    }
    return v;
}

double RationalHN::derivative_value(double lam) const {
    if (infinite_) throw InfinityEvaluationError("derivative_value: f is the infinity symbol");
    double v = h0_;
    for (const Pole& p : poles_) {
        if (std::abs(lam - p.h) <= kPoleTol * (1.0 + std::abs(p.h)))
            throw PoleEvaluationError("derivative_value: lambda coincides with a pole");
        const double r = p.h - lam;
        v += p.delta / (r * r);
    }
    return v;
}

double RationalHN::first_pole() const {
    if (index() >= 2) return poles_.front().h;
    return std::numeric_limits<double>::infinity();
}

PolyFraction RationalHN::to_fraction() const {
    if (infinite_) return PolyFraction{{-1.0}, {0.0}};
    const double h0p = h0_ > 0.0 ? 1.0 / h0_ : 1.0;
    std::vector<double> down{h0p};
    for (const Pole& p : poles_) down = poly::multiply(down, {p.h, -1.0});
    // up = (h0*lam + h) * down + sum_j delta_j * h0p * prod_{i != j} (h_i - lam)
    std::vector<double> up = poly::multiply(down, {h_, h0_});
    for (std::size_t j = 0; j < poles_.size(); ++j) {
        std::vector<double> term{poles_[j].delta * h0p};
        for (std::size_t i = 0; i < poles_.size(); ++i) {
            if (i == j) continue;
            term = poly::multiply(term, {poles_[i].h, -1.0});
        }
        up = poly::add(up, term);
    }
    up = poly::trimmed(up, 0.0);
    if (up.empty()) up = {0.0};
    return PolyFraction{up, down};
}

CoeffVector RationalHN::coeff_vector() const {
    CoeffVector c;
    c.index = index();
    if (infinite_) return c;
    const PolyFraction fr = to_fraction();
    const int d = static_cast<int>(poles_.size());
    std::vector<double> up = fr.up;
    if (h0_ > 0.0) {
        // odd index: free coefficients a_0..a_d and b_0..b_d (b_{d+1} is fixed)
        up.resize(static_cast<std::size_t>(d + 2), 0.0);
        c.entries.assign(fr.down.begin(), fr.down.end());
        c.entries.insert(c.entries.end(), up.begin(), up.begin() + d + 1);
    } else {
        // even index: free coefficients a_0..a_{d-1} (a_d is fixed) and b_0..b_d
        up.resize(static_cast<std::size_t>(d + 1), 0.0);
        c.entries.assign(fr.down.begin(), fr.down.end() - 1);
        c.entries.insert(c.entries.end(), up.begin(), up.end());
    }
    return c;
}

RationalHN RationalHN::from_coeff_vector(const CoeffVector& c) { return from_coeff_vector(c.index, c.entries); }

RationalHN RationalHN::from_coeff_vector(int index, const std::vector<double>& entries) {
    if (index == -1) {
        if (!entries.empty()) throw InvalidCoefficientsError("from_coeff_vector: index -1 takes an empty vector");
        return infinity();
    }
    if (index < -1 || static_cast<int>(entries.size()) != index + 1)
        throw InvalidCoefficientsError("from_coeff_vector: entry count must equal index + 1");
    PolyFraction fr;
    if (index % 2 == 0) {
        const int d = index / 2;
        fr.down.assign(entries.begin(), entries.begin() + d);
        fr.down.push_back(sign_of_parity(d));
        fr.up.assign(entries.begin() + d, entries.end());
    } else {
        const int d = (index - 1) / 2;
        fr.down.assign(entries.begin(), entries.begin() + d + 1);
        fr.up.assign(entries.begin() + d + 1, entries.end());
        fr.up.push_back(sign_of_parity(d));
    }
    try {
        return from_fraction(fr, index);
    } catch (const NotHerglotzError& e) {
        throw InvalidCoefficientsError(e.what());
    }
}

RationalHN RationalHN::from_fraction(const PolyFraction& fr, int expected_index) {
    const double scale = std::max(poly::max_abs(fr.up), poly::max_abs(fr.down));
    if (scale == 0.0) throw InvalidCoefficientsError("from_fraction: zero fraction");
    std::vector<double> up = fr.up;
    std::vector<double> down = fr.down;
    for (double& c : up)
        if (std::abs(c) <= 1e-11 * scale) c = 0.0;
    for (double& c : down)
        if (std::abs(c) <= 1e-11 * scale) c = 0.0;
    up = poly::trimmed(up, 0.0);
    down = poly::trimmed(down, 0.0);

    if (expected_index == -1) {
        if (!down.empty())
            throw InvalidCoefficientsError("from_fraction: nonzero denominator for index -1");
        if (poly::degree(up) != 0 || up[0] >= 0.0)
            throw InvalidCoefficientsError("from_fraction: index -1 requires a negative constant numerator");
        return infinity();
    }
    if (expected_index < -1) throw InvalidCoefficientsError("from_fraction: invalid index");

    const bool odd = expected_index % 2 != 0;
    const int d = odd ? (expected_index - 1) / 2 : expected_index / 2;
    if (poly::degree(down) != d)
        throw InvalidCoefficientsError("from_fraction: denominator degree does not match the index");
    if (odd) {
        if (poly::degree(up) != d + 1)
            throw InvalidCoefficientsError("from_fraction: numerator degree does not match an odd index");
        const double s = sign_of_parity(d) / up[static_cast<std::size_t>(d + 1)];
        up = poly::scaled(up, s);
        down = poly::scaled(down, s);
    } else {
        if (poly::degree(up) > d)
            throw InvalidCoefficientsError("from_fraction: numerator degree exceeds an even index");
        const double s = sign_of_parity(d) / down[static_cast<std::size_t>(d)];
        up = poly::scaled(up, s);
        down = poly::scaled(down, s);
    }

    std::vector<Pole> poles;
    if (d > 0) {
        const std::vector<double> roots = poly::real_roots(down);
        for (std::size_t j = 0; j + 1 < roots.size(); ++j) {
            if (!(roots[j + 1] - roots[j] > 1e-8 * (1.0 + std::abs(roots[j]))))
                throw InvalidCoefficientsError("from_fraction: denominator has a multiple root");
        }
        for (double r : roots) {
            const double delta = -poly::eval(up, r) / poly::eval_derivative(down, r);
            if (!(delta > 0.0)) throw NotHerglotzError("from_fraction: recovered residue is not positive");
            poles.push_back({r, delta});
        }
    }

    double h0 = 0.0;
    if (odd) {
        h0 = sign_of_parity(d) / down[static_cast<std::size_t>(d)];
        if (!(h0 > 0.0)) throw NotHerglotzError("from_fraction: recovered h0 is not positive");
    }

    const double probe = poles.empty() ? 0.0 : poles.front().h - 1.0;
    double hval = poly::eval(up, probe) / poly::eval(down, probe) - h0 * probe;
    for (const Pole& p : poles) hval -= p.delta / (p.h - probe);

    RationalHN f(h0, hval, std::move(poles));

    // Cross-check at a second point; catches degree mistrims.
    const double probe2 = f.first_pole() == std::numeric_limits<double>::infinity()
                              ? probe - 2.6180339887
                              : f.poles().front().h - 2.6180339887;
    const double direct = poly::eval(up, probe2) / poly::eval(down, probe2);
    const double recon = f.evaluate(probe2);
    if (std::abs(direct - recon) > 1e-6 * (1.0 + std::abs(direct)))
        throw InvalidCoefficientsError("from_fraction: recovered parameters do not reproduce the fraction");
    return f;
}

bool RationalHN::in_R(int M, double Q, double delta) const {
    if (index() != M) return false;
    if (M == -1) return true;
    if (!(std::abs(h_) <= Q)) return false;
    const int d = static_cast<int>(poles_.size());
    for (int j = 0; j < d; ++j) {
        if (!(poles_[static_cast<std::size_t>(j)].delta >= delta &&
              poles_[static_cast<std::size_t>(j)].delta <= Q))
            return false;
    }
    if (d > 0) {
        if (!(poles_.front().h >= 1.0)) return false;
        if (!(poles_.back().h <= Q)) return false;
        for (int j = 0; j + 1 < d; ++j) {
            if (!(poles_[static_cast<std::size_t>(j)].h + delta <= poles_[static_cast<std::size_t>(j + 1)].h))
                return false;
        }
    }
    if (M % 2 != 0) {
        if (!(h0_ >= delta && h0_ <= Q)) return false;
    } else {
        if (h0_ != 0.0) return false;
    }
    return true;
}

bool operator==(const RationalHN& a, const RationalHN& b) {
    if (a.is_infinity() != b.is_infinity()) return false;
    if (a.is_infinity()) return true;
    if (a.h0() != b.h0() || a.h() != b.h() || a.poles().size() != b.poles().size()) return false;
    for (std::size_t j = 0; j < a.poles().size(); ++j) {
        if (a.poles()[j].h != b.poles()[j].h || a.poles()[j].delta != b.poles()[j].delta) return false;
    }
    return true;
}

RationalHN theta_transform(double mu, double tau, double rho, const RationalHN& f, ThetaCase tcase) {
    if (!(mu < f.first_pole()))
        throw DomainViolationError("theta_transform: mu must lie below the first pole of f");

    if (f.is_infinity()) {
        if (tcase == ThetaCase::LowerIndex)
            throw DomainViolationError("theta_transform: cannot lower the index of the infinity symbol");
        tcase = ThetaCase::RaiseIndex;
    } else if (tcase == ThetaCase::Auto) {
        const double fv = f.evaluate(mu);
        if (std::abs(tau - fv) <= 1e-10 * (1.0 + std::abs(tau))) {
            tcase = ThetaCase::LowerIndex;
        } else if (tau > fv) {
            tcase = ThetaCase::RaiseIndex;
        } else {
            throw DomainViolationError("theta_transform: tau < f(mu) is outside the admissible range");
        }
    }

    const PolyFraction fr = f.to_fraction();
    const std::vector<double> shift{tau * rho - mu, 1.0}; // lambda - mu + tau*rho

    if (tcase == ThetaCase::RaiseIndex) {
        PolyFraction out;
        out.up = poly::add(poly::scaled(fr.up, -rho), poly::multiply(shift, fr.down));
        out.down = poly::add(poly::scaled(fr.up, -1.0), poly::scaled(fr.down, tau));
        return RationalHN::from_fraction(out, f.index() + 1);
    }

    // LowerIndex: both numerators vanish at mu, divide exactly by (lambda - mu).
    const std::vector<double> num_up =
        poly::add(poly::scaled(fr.up, rho), poly::scaled(poly::multiply(shift, fr.down), -1.0));
    const std::vector<double> num_down = poly::add(fr.up, poly::scaled(fr.down, -tau));

    double rem_up = 0.0;
    double rem_down = 0.0;
    PolyFraction out;
    out.up = poly::divide_linear(num_up, mu, &rem_up);
    out.down = poly::divide_linear(num_down, mu, &rem_down);
    // Scale floor of 1: when tau = f(mu) to machine precision the numerators
    // can cancel to arbitrarily small polynomials, and the remainder is then
    // upstream noise rather than evidence of misuse.
    const double tol_up = 1e-8 * std::max(poly::max_abs(num_up), 1.0);
    const double tol_down = 1e-8 * std::max(poly::max_abs(num_down), 1.0);
    if (std::abs(rem_up) > tol_up || std::abs(rem_down) > tol_down) {
        std::ostringstream msg;
        msg << "theta_transform: synthetic division by (lambda - mu) left remainders " << rem_up << ", "
            << rem_down << "; tau does not equal f(mu)";
        throw DivisionRemainderError(msg.str());
    }
    return RationalHN::from_fraction(out, f.index() - 1);
}

} // namespace slp
