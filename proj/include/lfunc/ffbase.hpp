#pragma once

// Finite fields F_q, polynomials over F_q and the places of F_q(t).
//
// Field elements are integers in [0, q): the base-p digits of the integer are
// the coefficients (low to high) of the element in the polynomial basis
// F_p[x]/(m), where m is the lexicographically least monic irreducible of
// degree f over F_p.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "lfunc/errors.hpp"

namespace lfunc {

using Elem = std::uint32_t;

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

inline std::uint64_t ipow(std::uint64_t b, unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

namespace detail {

// Polynomials over the prime field F_p as plain digit vectors, low to high.
using PrimePoly = std::vector<int>;

inline void trim(PrimePoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int inv_mod_p(int a, int p) {
    int r = 1, e = p - 2, b = a % p;
    while (e > 0) {
        if (e & 1) r = static_cast<int>(static_cast<long long>(r) * b % p);
        b = static_cast<int>(static_cast<long long>(b) * b % p);
        e >>= 1;
    }
    return r;
}

inline PrimePoly prime_mod(PrimePoly a, const PrimePoly& m, int p) {
    trim(a);
    const int dm = static_cast<int>(m.size()) - 1;
    const int linv = inv_mod_p(m.back(), p);
    while (static_cast<int>(a.size()) - 1 >= dm && !a.empty()) {
        const int shift = static_cast<int>(a.size()) - 1 - dm;
        const int c = a.back() * linv % p;
        for (int i = 0; i <= dm; ++i)
            a[i + shift] = ((a[i + shift] - c * m[i]) % p + p) % p;
        trim(a);
    }
    return a;
}

inline PrimePoly prime_mul(const PrimePoly& a, const PrimePoly& b, int p) {
    if (a.empty() || b.empty()) return {};
    PrimePoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    trim(r);
    return r;
}

// Trial division by every monic polynomial of degree <= deg/2.
inline bool prime_is_irreducible(const PrimePoly& m, int p) {
    const int d = static_cast<int>(m.size()) - 1;
    for (int e = 1; e <= d / 2; ++e) {
        const std::uint64_t count = ipow(p, e);
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            PrimePoly g(e + 1, 0);
            std::uint64_t t = idx;
            for (int i = 0; i < e; ++i) {
                g[i] = static_cast<int>(t % p);
                t /= p;
            }
            g[e] = 1;
            if (prime_mod(m, g, p).empty()) return false;
        }
    }
    return true;
}

} // namespace detail

class FiniteField {
public:
    int p() const noexcept { return p_; }
    int f() const noexcept { return f_; }
    std::uint32_t q() const noexcept { return q_; }
    const std::vector<int>& modulus() const noexcept { return modulus_; }
    Elem generator() const noexcept { return gen_; }

    Elem add(Elem a, Elem b) const noexcept {
        if (f_ == 1) return (a + b) % p_;
        if (p_ == 2) return a ^ b;
        if (!add_.empty()) return add_[a * q_ + b];
        Elem r = 0, scale = 1;
        for (int i = 0; i < f_; ++i) {
            r += ((a % p_ + b % p_) % p_) * scale;
            a /= p_;
            b /= p_;
            scale *= p_;
        }
        return r;
    }
    Elem neg(Elem a) const noexcept {
        if (f_ == 1) return (p_ - a % p_) % p_;
        if (p_ == 2) return a;
        Elem r = 0, scale = 1;
        for (int i = 0; i < f_; ++i) {
            r += ((p_ - a % p_) % p_) * scale;
            a /= p_;
            scale *= p_;
        }
        return r;
    }
    Elem sub(Elem a, Elem b) const noexcept { return add(a, neg(b)); }
    Elem mul(Elem a, Elem b) const noexcept {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }
    Elem inv(Elem a) const {
        require(a != 0, ErrorKind::PreconditionFailed, "inverse of zero field element");
        return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
    }
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    Elem pow(Elem a, std::uint64_t e) const noexcept {
        if (e == 0) return 1;
        if (a == 0) return 0;
        return exp_[static_cast<std::uint64_t>(log_[a]) * (e % (q_ - 1)) % (q_ - 1)];
    }
    /// Discrete logarithm to the cached generator; a != 0.
    std::uint32_t log(Elem a) const noexcept { return log_[a]; }
    Elem exp(std::uint64_t k) const noexcept { return exp_[k % (q_ - 1)]; }
    /// Image of an integer under Z -> F_p -> F_q.
    Elem from_int(long long n) const noexcept {
        return static_cast<Elem>(((n % p_) + p_) % p_);
    }
    /// Absolute trace F_q -> F_p, returned as an integer in [0, p).
    int trace(Elem a) const noexcept { return trace_[a]; }

    friend std::shared_ptr<const FiniteField> make_field(int p, int f);

private:
    FiniteField() = default;

    Elem slow_mul(Elem a, Elem b) const {
        detail::PrimePoly x = digits(a), y = digits(b);
        return from_digits(detail::prime_mod(detail::prime_mul(x, y, p_), modulus_, p_));
    }
    detail::PrimePoly digits(Elem a) const {
        detail::PrimePoly d(f_, 0);
        for (int i = 0; i < f_; ++i) {
            d[i] = static_cast<int>(a % p_);
            a /= p_;
        }
        detail::trim(d);
        return d;
    }
    Elem from_digits(const detail::PrimePoly& d) const {
        Elem r = 0;
        for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) r = r * p_ + d[i];
        return r;
    }

    int p_ = 0, f_ = 0;
    std::uint32_t q_ = 0;
    std::vector<int> modulus_;
    Elem gen_ = 0;
    std::vector<Elem> exp_;
    std::vector<std::uint32_t> log_;
    std::vector<int> trace_;
    std::vector<Elem> add_; // full addition table for small odd-characteristic extensions
};

using FieldPtr = std::shared_ptr<const FiniteField>;

inline constexpr std::uint32_t kMaxFieldOrder = 1u << 16;

inline FieldPtr make_field(int p, int f) {
    require(p >= 2 && is_prime(static_cast<std::uint64_t>(p)), ErrorKind::NotPrime,
            std::to_string(p) + " is not prime");
    require(f >= 1, ErrorKind::PreconditionFailed, "extension degree must be >= 1");
    const std::uint64_t q = ipow(p, f);
    require(q <= kMaxFieldOrder, ErrorKind::SizeError, "field order exceeds 2^16");

    std::shared_ptr<FiniteField> F(new FiniteField());
    F->p_ = p;
    F->f_ = f;
    F->q_ = static_cast<std::uint32_t>(q);

    if (f == 1) {
        F->modulus_ = {0, 1};
    } else {
        bool found = false;
        const std::uint64_t count = ipow(p, f);
        for (std::uint64_t idx = 0; idx < count && !found; ++idx) {
            detail::PrimePoly m(f + 1, 0);
            std::uint64_t t = idx;
            for (int i = 0; i < f; ++i) {
                m[i] = static_cast<int>(t % p);
                t /= p;
            }
            m[f] = 1;
            if (m[0] != 0 && detail::prime_is_irreducible(m, p)) {
                F->modulus_ = m;
                found = true;
            }
        }
        require(found, ErrorKind::NoIrreducibleFound, "no irreducible of degree " + std::to_string(f));
    }

    // Smallest generator of the cyclic group F_q^x.
    const std::uint64_t order = q - 1;
    const auto factors = prime_factors(order);
    auto slow_pow = [&](Elem a, std::uint64_t e) {
        Elem r = 1;
        while (e > 0) {
            if (e & 1) r = F->slow_mul(r, a);
            a = F->slow_mul(a, a);
            e >>= 1;
        }
        return r;
    };
    Elem gen = 0;
    if (q == 2) {
        gen = 1;
    } else {
        for (Elem g = 2; g < q && gen == 0; ++g) {
            bool primitive = true;
            for (auto r : factors)
                if (slow_pow(g, order / r) == 1) primitive = false;
            if (primitive) gen = g;
        }
    }
    require(gen != 0, ErrorKind::InternalError, "no generator found");
    F->gen_ = gen;

    F->exp_.assign(2 * order, 0);
    F->log_.assign(q, 0);
    Elem x = 1;
    for (std::uint64_t k = 0; k < order; ++k) {
        F->exp_[k] = x;
        F->exp_[k + order] = x;
        F->log_[x] = static_cast<std::uint32_t>(k);
        x = F->slow_mul(x, gen);
    }
    require(x == 1, ErrorKind::InternalError, "generator verification failed");

    if (p != 2 && f > 1 && q <= 256) {
        std::vector<Elem> table(q * q);
        for (Elem a = 0; a < q; ++a)
            for (Elem b = 0; b < q; ++b) table[a * q + b] = F->add(a, b);
        F->add_ = std::move(table);
    }

    F->trace_.assign(q, 0);
    for (Elem a = 0; a < q; ++a) {
        Elem t = 0, y = a;
        for (int j = 0; j < f; ++j) {
            t = F->add(t, y);
            y = F->pow(y, p);
        }
        F->trace_[a] = static_cast<int>(t);
    }
    return F;
}

// ---------------------------------------------------------------------------
// Polynomials over F_q.

struct FqPoly {
    std::vector<Elem> c; // low to high, no leading zeros

    FqPoly() = default;
    explicit FqPoly(std::vector<Elem> coeffs) : c(std::move(coeffs)) { trim(); }

    static FqPoly constant(Elem a) { return FqPoly({a}); }
    static FqPoly monomial(int deg, Elem a = 1) {
        std::vector<Elem> v(deg + 1, 0);
        v[deg] = a;
        return FqPoly(std::move(v));
    }

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool is_zero() const noexcept { return c.empty(); }
    int degree() const noexcept { return static_cast<int>(c.size()) - 1; }
    Elem lead() const noexcept { return c.empty() ? 0 : c.back(); }
    bool is_monic() const noexcept { return !c.empty() && c.back() == 1; }
    Elem coeff(int i) const noexcept { return i >= 0 && i < static_cast<int>(c.size()) ? c[i] : 0; }

    friend bool operator==(const FqPoly&, const FqPoly&) = default;
    friend auto operator<=>(const FqPoly& a, const FqPoly& b) {
        if (a.c.size() != b.c.size()) return a.c.size() <=> b.c.size();
        for (std::size_t i = a.c.size(); i-- > 0;)
            if (a.c[i] != b.c[i]) return a.c[i] <=> b.c[i];
        return std::strong_ordering::equal;
    }
};

inline FqPoly poly_add(const FiniteField& F, const FqPoly& a, const FqPoly& b) {
    std::vector<Elem> r(std::max(a.c.size(), b.c.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.add(a.coeff(int(i)), b.coeff(int(i)));
    return FqPoly(std::move(r));
}

inline FqPoly poly_neg(const FiniteField& F, const FqPoly& a) {
    std::vector<Elem> r(a.c.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.neg(a.c[i]);
    return FqPoly(std::move(r));
}

inline FqPoly poly_sub(const FiniteField& F, const FqPoly& a, const FqPoly& b) {
    return poly_add(F, a, poly_neg(F, b));
}

inline FqPoly poly_scale(const FiniteField& F, const FqPoly& a, Elem s) {
    std::vector<Elem> r(a.c.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.mul(a.c[i], s);
    return FqPoly(std::move(r));
}

inline FqPoly poly_mul(const FiniteField& F, const FqPoly& a, const FqPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Elem> r(a.c.size() + b.c.size() - 1, 0);
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a.c[i], b.c[j]));
    }
    return FqPoly(std::move(r));
}

inline std::pair<FqPoly, FqPoly> poly_divmod(const FiniteField& F, const FqPoly& a, const FqPoly& b) {
    require(!b.is_zero(), ErrorKind::PreconditionFailed, "polynomial division by zero");
    FqPoly r = a;
    if (r.degree() < b.degree()) return {FqPoly{}, r};
    std::vector<Elem> quot(r.degree() - b.degree() + 1, 0);
    const Elem linv = F.inv(b.lead());
    while (!r.is_zero() && r.degree() >= b.degree()) {
        const int shift = r.degree() - b.degree();
        const Elem c = F.mul(r.lead(), linv);
        quot[shift] = c;
        for (int i = 0; i <= b.degree(); ++i) r.c[i + shift] = F.sub(r.c[i + shift], F.mul(c, b.c[i]));
        r.trim();
    }
    return {FqPoly(std::move(quot)), r};
}

inline FqPoly poly_mod(const FiniteField& F, const FqPoly& a, const FqPoly& m) {
    return poly_divmod(F, a, m).second;
}

inline FqPoly poly_monic(const FiniteField& F, const FqPoly& a) {
    if (a.is_zero()) return a;
    return poly_scale(F, a, F.inv(a.lead()));
}

inline FqPoly poly_gcd(const FiniteField& F, FqPoly a, FqPoly b) {
    while (!b.is_zero()) {
        FqPoly r = poly_mod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return poly_monic(F, a);
}

inline FqPoly poly_mulmod(const FiniteField& F, const FqPoly& a, const FqPoly& b, const FqPoly& m) {
    return poly_mod(F, poly_mul(F, a, b), m);
}

inline FqPoly poly_powmod(const FiniteField& F, FqPoly base, std::uint64_t e, const FqPoly& m) {
    FqPoly r = poly_mod(F, FqPoly::constant(1), m);
    base = poly_mod(F, base, m);
    while (e > 0) {
        if (e & 1) r = poly_mulmod(F, r, base, m);
        e >>= 1;
        if (e) base = poly_mulmod(F, base, base, m);
    }
    return r;
}

/// Inverse of a modulo m; fails if gcd(a, m) != 1.
inline FqPoly poly_invmod(const FiniteField& F, const FqPoly& a, const FqPoly& m) {
    FqPoly r0 = m, r1 = poly_mod(F, a, m);
    FqPoly s0{}, s1 = FqPoly::constant(1);
    while (!r1.is_zero()) {
        auto [qt, r2] = poly_divmod(F, r0, r1);
        FqPoly s2 = poly_sub(F, s0, poly_mul(F, qt, s1));
        r0 = std::move(r1);
        r1 = std::move(r2);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    require(r0.degree() == 0, ErrorKind::PreconditionFailed, "element is not invertible modulo m");
    return poly_mod(F, poly_scale(F, s0, F.inv(r0.lead())), m);
}

inline Elem poly_eval(const FiniteField& F, const FqPoly& a, Elem x) {
    Elem r = 0;
    for (std::size_t i = a.c.size(); i-- > 0;) r = F.add(F.mul(r, x), a.c[i]);
    return r;
}

inline FqPoly poly_pow(const FiniteField& F, const FqPoly& a, int e) {
    FqPoly r = FqPoly::constant(1);
    for (int i = 0; i < e; ++i) r = poly_mul(F, r, a);
    return r;
}

/// Ben-Or test: f of degree d is irreducible iff gcd(t^{q^i} - t, f) = 1 for i <= d/2.
inline bool poly_is_irreducible(const FiniteField& F, const FqPoly& f) {
    const int d = f.degree();
    if (d <= 0) return false;
    if (d == 1) return true;
    const FqPoly t = FqPoly::monomial(1);
    FqPoly h = poly_mod(F, t, f);
    for (int i = 1; i <= d / 2; ++i) {
        h = poly_powmod(F, h, F.q(), f);
        if (poly_gcd(F, poly_sub(F, h, t), f).degree() > 0) return false;
    }
    return true;
}

/// Monic polynomial of degree d whose lower coefficients are the base-q digits of idx.
inline FqPoly monic_from_index(std::uint64_t idx, int d, std::uint32_t q) {
    std::vector<Elem> v(d + 1, 0);
    for (int i = 0; i < d; ++i) {
        v[i] = static_cast<Elem>(idx % q);
        idx /= q;
    }
    v[d] = 1;
    return FqPoly(std::move(v));
}

inline std::uint64_t monic_index(const FqPoly& f, std::uint32_t q) {
    std::uint64_t idx = 0;
    for (int i = f.degree() - 1; i >= 0; --i) idx = idx * q + f.c[i];
    return idx;
}

inline constexpr int kMaxPlaceDegree = 12;
inline constexpr std::uint64_t kMaxEnumeration = 1ull << 24;

/// All monic irreducibles of degree <= d_max, ordered by degree and then by
/// coefficient list compared from the highest non-leading coefficient down.
/// Degree-d irreducibles are sieved by marking all products of lower-degree ones.
inline std::vector<FqPoly> monic_irreducibles(const FiniteField& F, int d_max) {
    require(d_max >= 1, ErrorKind::PreconditionFailed, "d_max must be >= 1");
    require(d_max <= kMaxPlaceDegree, ErrorKind::SizeError, "d_max exceeds 12");
    const std::uint32_t q = F.q();
    long double total = 1;
    for (int i = 0; i < d_max; ++i) total *= q;
    require(total <= static_cast<long double>(kMaxEnumeration), ErrorKind::SizeError,
            "q^d_max exceeds the enumeration budget of 2^24");

    std::vector<std::vector<FqPoly>> by_deg(d_max + 1);
    for (Elem a = 0; a < q; ++a) by_deg[1].push_back(FqPoly({a, 1}));

    for (int d = 2; d <= d_max; ++d) {
        const std::uint64_t count = ipow(q, d);
        std::vector<bool> reducible(count, false);
        for (int e = 1; e <= d / 2; ++e) {
            const std::uint64_t gcount = ipow(q, d - e);
            for (const auto& f : by_deg[e]) {
                std::vector<Elem> g(d - e + 1, 0);
                g[d - e] = 1;
                for (std::uint64_t gi = 0; gi < gcount; ++gi) {
                    // product f*g, only the lower d coefficients matter for the index
                    std::uint64_t idx = 0;
                    for (int k = d - 1; k >= 0; --k) {
                        Elem s = 0;
                        const int lo = std::max(0, k - (d - e));
                        const int hi = std::min(e, k);
                        for (int i = lo; i <= hi; ++i) s = F.add(s, F.mul(f.c[i], g[k - i]));
                        idx = idx * q + s;
                    }
                    reducible[idx] = true;
                    for (int k = 0; k < d - e; ++k) { // odometer over the lower coeffs of g
                        if (++g[k] < q) break;
                        g[k] = 0;
                    }
                }
            }
        }
        for (std::uint64_t idx = 0; idx < count; ++idx)
            if (!reducible[idx]) by_deg[d].push_back(monic_from_index(idx, d, q));
    }

    std::vector<FqPoly> out;
    for (int d = 1; d <= d_max; ++d)
        for (auto& f : by_deg[d]) out.push_back(std::move(f));
    return out;
}

/// Factorization into monic irreducibles with multiplicity, plus the leading coefficient.
struct Factorization {
    Elem unit = 1;
    std::vector<std::pair<FqPoly, int>> factors;
};

inline Factorization factor(const FiniteField& F, const FqPoly& a) {
    require(!a.is_zero(), ErrorKind::PreconditionFailed, "cannot factor the zero polynomial");
    Factorization out;
    out.unit = a.lead();
    FqPoly rest = poly_monic(F, a);
    if (rest.degree() == 0) return out;
    if (poly_is_irreducible(F, rest)) {
        out.factors.push_back({rest, 1});
        return out;
    }
    const auto irr = monic_irreducibles(F, std::max(1, rest.degree() / 2));
    for (const auto& P : irr) {
        if (2 * P.degree() > rest.degree()) break;
        int mult = 0;
        while (true) {
            auto [qt, r] = poly_divmod(F, rest, P);
            if (!r.is_zero()) break;
            rest = qt;
            ++mult;
        }
        if (mult > 0) out.factors.push_back({P, mult});
    }
    if (rest.degree() > 0) out.factors.push_back({rest, 1});
    return out;
}

// ---------------------------------------------------------------------------
// Places of F_q(t).

struct Place {
    enum class Kind { Finite, Infinite };

    Kind kind = Kind::Infinite;
    FieldPtr field;
    FqPoly poly; // monic irreducible; empty for the infinite place
    int deg = 1;

    static Place infinite(FieldPtr F) {
        Place v;
        v.kind = Kind::Infinite;
        v.field = std::move(F);
        v.deg = 1;
        return v;
    }
    static Place finite(FieldPtr F, FqPoly P) {
        require(P.is_monic(), ErrorKind::PreconditionFailed, "place polynomial must be monic");
        require(poly_is_irreducible(*F, P), ErrorKind::PreconditionFailed,
                "place polynomial must be irreducible");
        Place v;
        v.kind = Kind::Finite;
        v.deg = P.degree();
        v.poly = std::move(P);
        v.field = std::move(F);
        return v;
    }

    bool is_infinite() const noexcept { return kind == Kind::Infinite; }
    std::uint64_t qv() const noexcept { return ipow(field->q(), deg); }
    double q() const noexcept { return static_cast<double>(field->q()); }

    /// Polynomial playing the role of the uniformizer in the local ring
    /// computations: P itself, or u = 1/t at infinity.
    FqPoly local_poly() const { return is_infinite() ? FqPoly({0, 1}) : poly; }

    std::string name() const {
        if (is_infinite()) return "inf";
        std::string s = "[";
        for (std::size_t i = 0; i < poly.c.size(); ++i) s += (i ? "," : "") + std::to_string(poly.c[i]);
        return s + "]";
    }

    friend bool operator==(const Place& a, const Place& b) {
        return a.kind == b.kind && a.poly == b.poly && a.field->q() == b.field->q() &&
               a.field->p() == b.field->p();
    }
    friend bool operator<(const Place& a, const Place& b) {
        if (a.deg != b.deg) return a.deg < b.deg;
        if (a.kind != b.kind) return a.kind == Place::Kind::Infinite;
        return a.poly < b.poly;
    }
};

/// The infinite place followed by every finite place of degree <= d_max.
inline std::vector<Place> places(const FieldPtr& F, int d_max) {
    std::vector<Place> out;
    out.push_back(Place::infinite(F));
    for (auto& P : monic_irreducibles(*F, d_max)) {
        Place v;
        v.kind = Place::Kind::Finite;
        v.deg = P.degree();
        v.poly = std::move(P);
        v.field = F;
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace lfunc
