#pragma once

// Rational functions in T = q^{-s}.
//
// A QRat is kept in factored form
//     c * T^k * prod_i (1 - z_i T) / prod_j (1 - w_j T)
// with the T-power exact. Products, quotients, shifts and the substitution
// T -> 1/(qT) act on the factor lists directly, so they never need a root
// finder; only addition expands and re-factors.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lfunc/errors.hpp"

namespace lfunc {

using cplx = std::complex<double>;

inline constexpr double kCancelTol = 1e-8;
// Coefficients below this fraction of the largest one are treated as zero
// when a polynomial produced by cancellation-prone sums is re-factored.
inline constexpr double kCoeffFloor = 1e-13;

inline bool same_base(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }

struct QPoly {
    double q = 1;
    std::vector<cplx> c{cplx(0)};

    QPoly() = default;
    QPoly(double base, std::vector<cplx> coeffs) : q(base), c(std::move(coeffs)) { trim(); }

    void trim() {
        while (c.size() > 1 && c.back() == cplx(0)) c.pop_back();
        if (c.empty()) c.push_back(0);
    }
    int degree() const { return is_zero() ? -1 : static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.size() == 1 && c[0] == cplx(0); }
    cplx eval(cplx T) const {
        cplx r = 0;
        for (std::size_t i = c.size(); i-- > 0;) r = r * T + c[i];
        return r;
    }
    double norm() const {
        double m = 0;
        for (auto x : c) m = std::max(m, std::abs(x));
        return m;
    }
};

inline std::vector<cplx> poly_mul_c(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<cplx> r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

/// prod (1 - z_i T), low to high.
inline std::vector<cplx> expand_factors(const std::vector<cplx>& zs) {
    std::vector<cplx> r{1.0};
    for (auto z : zs) {
        r.push_back(0);
        for (std::size_t i = r.size() - 1; i > 0; --i) r[i] -= z * r[i - 1];
    }
    return r;
}

/// All complex roots of a nonconstant polynomial: eigenvalues of the companion
/// matrix followed by one Newton step each.
inline std::vector<cplx> qr_roots(const QPoly& p, double tol = 1e-8) {
    QPoly a = p;
    a.trim();
    const int n = a.degree();
    require(n >= 1, ErrorKind::PreconditionFailed, "qr_roots needs a nonconstant polynomial");
    const cplx lead = a.c[n];
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) C(i, n - 1) = -a.c[i] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    require(es.info() == Eigen::Success, ErrorKind::DidNotConverge, "companion eigenvalue solver failed");

    std::vector<cplx> d(n);
    for (int i = 1; i <= n; ++i) d[i - 1] = a.c[i] * static_cast<double>(i);
    QPoly deriv(a.q, d);

    std::vector<cplx> roots(n);
    double worst = 0;
    for (int i = 0; i < n; ++i) {
        cplx r = es.eigenvalues()[i];
        const cplx dp = deriv.eval(r);
        if (std::abs(dp) > 0) {
            const cplx r2 = r - a.eval(r) / dp;
            if (std::isfinite(r2.real()) && std::isfinite(r2.imag()) && std::abs(a.eval(r2)) <= std::abs(a.eval(r)))
                r = r2;
        }
        // backward error: |p(r)| relative to sum |c_i| |r|^i
        double scale = 0, pw = 1;
        for (int k = 0; k <= n; ++k) {
            scale += std::abs(a.c[k]) * pw;
            pw *= std::abs(r);
        }
        const double res = scale > 0 ? std::abs(a.eval(r)) / scale : 0;
        worst = std::max(worst, res);
        roots[i] = r;
    }
    require(worst < tol, ErrorKind::DidNotConverge, "root residual " + std::to_string(worst) + " above tolerance");
    std::sort(roots.begin(), roots.end(), [](cplx x, cplx y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    return roots;
}

class QRat {
public:
    QRat() = default;
    explicit QRat(double q, cplx c = 1.0, int tpow = 0) : q_(q), c_(c), tpow_(c == cplx(0) ? 0 : tpow) {}

    static QRat zero(double q) { return QRat(q, 0.0); }
    static QRat one(double q) { return QRat(q, 1.0); }
    static QRat monomial(double q, cplx c, int k) { return QRat(q, c, k); }

    /// c T^k prod(1 - z T) / prod(1 - w T)
    static QRat factored(double q, cplx c, int k, std::vector<cplx> zeros, std::vector<cplx> poles) {
        QRat r(q, c, k);
        if (c == cplx(0)) return r;
        r.zeros_ = std::move(zeros);
        r.poles_ = std::move(poles);
        r.cancel();
        return r;
    }

    /// 1 / (1 - alpha T^d)
    static QRat euler(double q, cplx alpha, int d) {
        require(d >= 1, ErrorKind::PreconditionFailed, "euler factor degree must be >= 1");
        require(alpha != cplx(0), ErrorKind::PreconditionFailed, "euler factor with zero parameter");
        const double rad = std::pow(std::abs(alpha), 1.0 / d);
        const double arg = std::arg(alpha) / d;
        std::vector<cplx> ps;
        for (int j = 0; j < d; ++j) ps.push_back(std::polar(rad, arg + 2 * std::numbers::pi * j / d));
        return factored(q, 1.0, 0, {}, std::move(ps));
    }

    /// num(T) / den(T) for arbitrary polynomials, re-factored through qr_roots.
    static QRat from_polys(const QPoly& num, const QPoly& den) {
        require(!den.is_zero(), ErrorKind::DivByZeroFunction, "zero denominator");
        require(same_base(num.q, den.q), ErrorKind::BaseMismatch, "numerator and denominator bases differ");
        if (num.is_zero()) return zero(num.q);
        auto [cn, kn, zn] = split(num);
        auto [cd, kd, zd] = split(den);
        if (cn == cplx(0)) return zero(num.q);
        return factored(num.q, cn / cd, kn - kd, std::move(zn), std::move(zd));
    }

    double q() const { return q_; }
    cplx coeff() const { return c_; }
    int tpow() const { return tpow_; }
    const std::vector<cplx>& zeros() const { return zeros_; }
    const std::vector<cplx>& poles() const { return poles_; }
    bool is_zero() const { return c_ == cplx(0); }

    /// Numerator polynomial including c and any positive T-power.
    QPoly num() const {
        std::vector<cplx> r(std::max(tpow_, 0), 0);
        for (auto x : expand_factors(zeros_)) r.push_back(c_ * x);
        return QPoly(q_, r);
    }
    /// Denominator polynomial, equal to 1 at T = 0 unless T divides it.
    QPoly den() const {
        std::vector<cplx> r(std::max(-tpow_, 0), 0);
        for (auto x : expand_factors(poles_)) r.push_back(x);
        return QPoly(q_, r);
    }

    cplx eval(cplx T) const {
        cplx r = c_ * std::pow(T, tpow_);
        for (auto z : zeros_) r *= (1.0 - z * T);
        for (auto w : poles_) r /= (1.0 - w * T);
        return r;
    }

    /// Coefficients of the Taylor expansion at T = 0 up to T^D; needs tpow >= 0.
    std::vector<cplx> series(int D) const {
        require(tpow_ >= 0, ErrorKind::PreconditionFailed, "series expansion needs a non-negative T-power");
        std::vector<cplx> r(D + 1, 0);
        if (is_zero()) return r;
        if (tpow_ <= D) r[tpow_] = c_;
        auto mul_lin = [&](cplx z) { // times (1 - zT)
            for (int i = D; i > 0; --i) r[i] -= z * r[i - 1];
        };
        auto div_lin = [&](cplx w) { // times 1/(1 - wT)
            for (int i = 1; i <= D; ++i) r[i] += w * r[i - 1];
        };
        for (auto z : zeros_) mul_lin(z);
        for (auto w : poles_) div_lin(w);
        return r;
    }

    friend QRat qr_mul(const QRat& a, const QRat& b);
    friend QRat qr_inv(const QRat& a);
    friend QRat qr_shift(const QRat& f, cplx s0);
    friend QRat qr_dual(const QRat& f);
    friend QRat qr_add(const QRat& a, const QRat& b);

private:
    struct Split {
        cplx c;
        int k;
        std::vector<cplx> z;
    };
    // p(T) = c T^k prod(1 - z T)
    static Split split(const QPoly& p) {
        const double m = p.norm();
        std::vector<cplx> c = p.c;
        while (c.size() > 1 && std::abs(c.back()) <= kCoeffFloor * m) c.pop_back();
        int k = 0;
        while (k < static_cast<int>(c.size()) - 1 && std::abs(c[k]) <= kCoeffFloor * m) ++k;
        std::vector<cplx> rest(c.begin() + k, c.end());
        const cplx c0 = rest[0];
        std::vector<cplx> zs;
        if (rest.size() > 1)
            for (auto r : qr_roots(QPoly(p.q, rest), 1e-6)) zs.push_back(1.0 / r);
        return {c0, k, zs};
    }

    static bool before(cplx x, cplx y) { return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag(); }

    void cancel() {
        if (c_ == cplx(0)) {
            zeros_.clear();
            poles_.clear();
            tpow_ = 0;
            return;
        }
        std::erase_if(zeros_, [](cplx z) { return z == cplx(0); });
        std::erase_if(poles_, [](cplx z) { return z == cplx(0); });
        struct Cand {
            double d;
            std::size_t i, j;
        };
        std::vector<Cand> cands;
        for (std::size_t i = 0; i < zeros_.size(); ++i)
            for (std::size_t j = 0; j < poles_.size(); ++j) {
                const double d = std::abs(zeros_[i] - poles_[j]);
                if (d <= kCancelTol * std::max(1.0, std::abs(zeros_[i]))) cands.push_back({d, i, j});
            }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) { return a.d < b.d; });
        std::vector<bool> zu(zeros_.size(), false), pu(poles_.size(), false);
        for (const auto& cd : cands) {
            if (zu[cd.i] || pu[cd.j]) continue;
            zu[cd.i] = pu[cd.j] = true;
        }
        std::vector<cplx> z2, p2;
        for (std::size_t i = 0; i < zeros_.size(); ++i)
            if (!zu[i]) z2.push_back(zeros_[i]);
        for (std::size_t j = 0; j < poles_.size(); ++j)
            if (!pu[j]) p2.push_back(poles_[j]);
        std::sort(z2.begin(), z2.end(), before);
        std::sort(p2.begin(), p2.end(), before);
        zeros_ = std::move(z2);
        poles_ = std::move(p2);
    }

    double q_ = 1;
    cplx c_ = 1.0;
    int tpow_ = 0;
    std::vector<cplx> zeros_, poles_;
};

inline void check_base(const QRat& a, const QRat& b) {
    require(same_base(a.q(), b.q()), ErrorKind::BaseMismatch,
            "bases " + std::to_string(a.q()) + " and " + std::to_string(b.q()) + " differ");
}

inline QRat qr_mul(const QRat& a, const QRat& b) {
    check_base(a, b);
    if (a.is_zero() || b.is_zero()) return QRat::zero(a.q_);
    std::vector<cplx> z = a.zeros_, p = a.poles_;
    z.insert(z.end(), b.zeros_.begin(), b.zeros_.end());
    p.insert(p.end(), b.poles_.begin(), b.poles_.end());
    return QRat::factored(a.q_, a.c_ * b.c_, a.tpow_ + b.tpow_, std::move(z), std::move(p));
}

inline QRat qr_inv(const QRat& a) {
    require(!a.is_zero(), ErrorKind::DivByZeroFunction, "inverse of the zero function");
    return QRat::factored(a.q_, 1.0 / a.c_, -a.tpow_, a.poles_, a.zeros_);
}

inline QRat qr_div(const QRat& a, const QRat& b) {
    check_base(a, b);
    return qr_mul(a, qr_inv(b));
}

inline QRat qr_pow(const QRat& a, int e) {
    QRat r = QRat::one(a.q());
    const QRat b = e < 0 ? qr_inv(a) : a;
    for (int i = 0; i < std::abs(e); ++i) r = qr_mul(r, b);
    return r;
}

inline QRat qr_scale(const QRat& a, cplx s) { return qr_mul(a, QRat(a.q(), s)); }

/// T -> q^{-s0} T
inline QRat qr_shift(const QRat& f, cplx s0) {
    if (f.is_zero()) return f;
    const cplx w = std::exp(-s0 * std::log(f.q_));
    std::vector<cplx> z, p;
    for (auto x : f.zeros_) z.push_back(x * w);
    for (auto x : f.poles_) p.push_back(x * w);
    return QRat::factored(f.q_, f.c_ * std::pow(w, f.tpow_), f.tpow_, std::move(z), std::move(p));
}

/// T -> 1/(qT)
inline QRat qr_dual(const QRat& f) {
    if (f.is_zero()) return f;
    const double q = f.q_;
    cplx c = f.c_ * std::pow(q, -f.tpow_);
    std::vector<cplx> z, p;
    for (auto x : f.zeros_) {
        c *= -x / q;
        z.push_back(q / x);
    }
    for (auto x : f.poles_) {
        c /= -x / q;
        p.push_back(q / x);
    }
    const int k = -f.tpow_ - static_cast<int>(f.zeros_.size()) + static_cast<int>(f.poles_.size());
    return QRat::factored(q, c, k, std::move(z), std::move(p));
}

inline QRat qr_add(const QRat& a, const QRat& b) {
    check_base(a, b);
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    // common denominator: poles of a joined with the unmatched poles of b
    std::vector<bool> used(a.poles_.size(), false);
    std::vector<cplx> extra_b, extra_a;
    for (auto w : b.poles_) {
        std::size_t best = a.poles_.size();
        double bd = 0;
        for (std::size_t i = 0; i < a.poles_.size(); ++i) {
            if (used[i]) continue;
            const double d = std::abs(a.poles_[i] - w);
            if (d <= kCancelTol * std::max(1.0, std::abs(w)) && (best == a.poles_.size() || d < bd)) {
                best = i;
                bd = d;
            }
        }
        if (best < a.poles_.size())
            used[best] = true;
        else
            extra_b.push_back(w);
    }
    for (std::size_t i = 0; i < a.poles_.size(); ++i)
        if (!used[i]) extra_a.push_back(a.poles_[i]);

    const int kmin = std::min(a.tpow_, b.tpow_);
    auto part = [&](const QRat& x, const std::vector<cplx>& extra) {
        std::vector<cplx> v(x.tpow_ - kmin, 0);
        std::vector<cplx> zs = x.zeros_;
        zs.insert(zs.end(), extra.begin(), extra.end());
        for (auto e : expand_factors(zs)) v.push_back(x.c_ * e);
        return v;
    };
    std::vector<cplx> na = part(a, extra_b), nb = part(b, extra_a);
    std::vector<cplx> sum(std::max(na.size(), nb.size()), 0);
    for (std::size_t i = 0; i < na.size(); ++i) sum[i] += na[i];
    for (std::size_t i = 0; i < nb.size(); ++i) sum[i] += nb[i];

    double scale = 0;
    for (auto x : na) scale = std::max(scale, std::abs(x));
    for (auto x : nb) scale = std::max(scale, std::abs(x));
    double m = 0;
    for (auto x : sum) m = std::max(m, std::abs(x));
    if (m <= 1e-14 * scale) return QRat::zero(a.q_);

    std::vector<cplx> den = a.poles_;
    den.insert(den.end(), extra_b.begin(), extra_b.end());
    QRat n = QRat::from_polys(QPoly(a.q_, sum), QPoly(a.q_, {1.0}));
    return qr_mul(qr_mul(n, QRat::monomial(a.q_, 1.0, kmin)), QRat::factored(a.q_, 1.0, 0, {}, std::move(den)));
}

inline QRat qr_sub(const QRat& a, const QRat& b) { return qr_add(a, qr_scale(b, -1.0)); }

struct MonomialInfo {
    bool is_monomial = false;
    cplx coeff = 0;
    int exponent = 0;
};

inline MonomialInfo is_monomial(const QRat& f, double tol = 1e-9) {
    MonomialInfo m;
    for (auto z : f.zeros())
        if (std::abs(z) > tol) return m;
    for (auto w : f.poles())
        if (std::abs(w) > tol) return m;
    m.is_monomial = true;
    m.coeff = f.coeff();
    m.exponent = f.tpow();
    return m;
}

/// max |a/b - 1| over more sample points on a circle than the degree of
/// a * den_b - b * den_a, so a zero residual means equality. The ratio is
/// taken from the factored forms in log space; expanding high-degree products
/// loses too much precision.
inline double qr_residual(const QRat& a, const QRat& b) {
    check_base(a, b);
    if (a.is_zero() || b.is_zero()) return (a.is_zero() && b.is_zero()) ? 0.0 : 1.0;
    std::vector<cplx> up = a.zeros(), down = a.poles();
    up.insert(up.end(), b.poles().begin(), b.poles().end());
    down.insert(down.end(), b.zeros().begin(), b.zeros().end());
    const int k = a.tpow() - b.tpow();
    const std::size_t deg = up.size() + down.size() + static_cast<std::size_t>(std::abs(k));
    const std::size_t m = std::max<std::size_t>(16, deg + 2);
    const double rho = 0.7071067811865476 / std::pow(a.q(), 0.25);
    const cplx lc = std::log(a.coeff() / b.coeff());
    double res = 0;
    for (std::size_t i = 0; i < m; ++i) {
        cplx T = std::polar(rho, 2 * std::numbers::pi * (static_cast<double>(i) + 0.3183098861837907) / static_cast<double>(m));
        // keep away from zeros and poles of either side
        for (int tries = 0; tries < 8; ++tries) {
            double closest = 1;
            for (auto z : up) closest = std::min(closest, std::abs(1.0 - z * T));
            for (auto w : down) closest = std::min(closest, std::abs(1.0 - w * T));
            if (closest > 1e-4) break;
            T *= std::polar(1.0, 0.37 / static_cast<double>(m));
        }
        cplx L = lc + static_cast<double>(k) * std::log(T);
        for (auto z : up) L += std::log(1.0 - z * T);
        for (auto w : down) L -= std::log(1.0 - w * T);
        res = std::max(res, std::abs(std::exp(L) - 1.0));
    }
    return res;
}

inline bool qr_equal(const QRat& a, const QRat& b, double tol = 1e-9) { return qr_residual(a, b) <= tol; }

// --- JSON --------------------------------------------------------------------

inline nlohmann::json cplx_to_json(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

inline cplx cplx_from_json(const nlohmann::json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(), ErrorKind::SchemaError,
            "complex number must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

/// {"q","tpow","num","den"}: num and den exclude the T-power, den(0) = 1.
inline nlohmann::json to_json(const QRat& f) {
    nlohmann::json j;
    j["q"] = f.q();
    j["tpow"] = f.tpow();
    nlohmann::json num = nlohmann::json::array(), den = nlohmann::json::array();
    if (f.is_zero()) {
        num.push_back(cplx_to_json(0));
    } else {
        for (auto x : expand_factors(f.zeros())) num.push_back(cplx_to_json(f.coeff() * x));
    }
    for (auto x : expand_factors(f.poles())) den.push_back(cplx_to_json(x));
    j["num"] = num;
    j["den"] = den;
    return j;
}

inline QRat qrat_from_json(const nlohmann::json& j) {
    require(j.is_object() && j.contains("q") && j.contains("num") && j.contains("den"), ErrorKind::SchemaError,
            "QRat needs q, num and den");
    const double q = j.at("q").get<double>();
    const int k = j.value("tpow", 0);
    std::vector<cplx> n, d;
    for (const auto& x : j.at("num")) n.push_back(cplx_from_json(x));
    for (const auto& x : j.at("den")) d.push_back(cplx_from_json(x));
    require(!n.empty() && !d.empty(), ErrorKind::SchemaError, "empty coefficient list");
    QRat r = QRat::from_polys(QPoly(q, n), QPoly(q, d));
    return qr_mul(r, QRat::monomial(q, 1.0, k));
}

} // namespace lfunc
