#pragma once

// Unit groups (O_v / p_v^A)^x and their characters.
//
// (O_v/P^A)^x = k_v^x x (1 + P)/(1 + P^A). The first factor is reached through
// Teichmueller lifts x -> x^{q_v^j}. The second is a product of cyclic groups
// generated by g_{n,i} = 1 - w_i P^n for n < A prime to p, where w_i runs
// through the F_p-basis x^j t^l of k_v; g_{n,i} has order p^{e_n} with
// e_n = #{k : n p^k < A}. Decomposition peels one P-adic digit at a time
// using (1 - w P^n)^{p^k} = 1 - w^{p^k} P^{n p^k}.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "lfunc/errors.hpp"
#include "lfunc/ffbase.hpp"
#include "lfunc/qseries.hpp"

namespace lfunc {

inline constexpr std::uint64_t kMaxUnitRing = 1000000;

class UnitGroup {
public:
    struct WildGen {
        int n = 0; // level
        int i = 0; // basis index
        int e = 0; // order is p^e
        std::uint64_t order = 1;
        FqPoly w;  // basis element of k_v
    };
    struct Decomp {
        std::uint64_t tame = 0;
        std::vector<std::uint64_t> wild;
    };

    static std::shared_ptr<const UnitGroup> get(const Place& v, int A);

    const Place& place() const { return place_; }
    int level() const { return level_; }
    std::uint64_t qv() const { return qv_; }
    std::uint64_t tame_order() const { return qv_ - 1; }
    const std::vector<WildGen>& wild_gens() const { return gens_; }
    const FqPoly& modulus() const { return mod_; }
    const FqPoly& local_poly() const { return P_; }
    std::uint64_t unit_count() const {
        std::uint64_t c = qv_ - 1;
        for (const auto& g : gens_) c *= g.order;
        return c;
    }
    /// Lowest common period of all phases: (q_v - 1) * p^{max e}.
    std::uint64_t phase_den() const { return phase_den_; }

    FqPoly reduce(const FqPoly& x) const { return poly_mod(F(), x, mod_); }
    bool is_unit(const FqPoly& x) const { return !poly_mod(F(), x, P_).is_zero(); }

    Decomp decompose(const FqPoly& x) const {
        const FiniteField& K = F();
        FqPoly u = reduce(x);
        require(is_unit(u), ErrorKind::PreconditionFailed, "decompose needs a unit");
        Decomp out;
        out.wild.assign(gens_.size(), 0);
        out.tame = residue_log(poly_mod(K, u, P_));
        if (level_ <= 1) return out;

        // 1-unit part y = x / teich(x)
        const FqPoly teich = poly_powmod(K, u, teich_exp_, mod_);
        FqPoly cur = poly_mulmod(K, u, poly_invmod(K, teich, mod_), mod_);
        const FqPoly one = FqPoly::constant(1);
        FqPoly Pm = P_;
        for (int m = 1; m < level_; ++m) {
            FqPoly diff = poly_sub(K, cur, one);
            auto [quot, rem] = poly_divmod(K, diff, Pm);
            require(rem.is_zero(), ErrorKind::InternalError, "unit decomposition lost divisibility");
            const FqPoly c = poly_mod(K, quot, P_);
            if (!c.is_zero()) {
                int k = 0, n = m;
                while (n % K.p() == 0) {
                    n /= K.p();
                    ++k;
                }
                const auto x = solve_digit(poly_neg(K, c), k);
                FqPoly h = one;
                std::uint64_t pk = ipow(K.p(), k);
                for (std::size_t i = 0; i < x.size(); ++i) {
                    if (x[i] == 0) continue;
                    const std::size_t gi = gen_index(n, static_cast<int>(i));
                    out.wild[gi] = (out.wild[gi] + x[i] * pk) % gens_[gi].order;
                    // (1 - w^{p^k} P^m)^{x_i}
                    const FqPoly base = poly_sub(K, one, poly_mul(K, wfull_[k][i], Pm));
                    h = poly_mulmod(K, h, poly_powmod(K, base, x[i], mod_), mod_);
                }
                cur = poly_mulmod(K, cur, poly_invmod(K, h, mod_), mod_);
            }
            Pm = poly_mul(K, Pm, P_);
        }
        require(poly_sub(K, cur, one).is_zero(), ErrorKind::InternalError, "unit decomposition incomplete");
        return out;
    }

    /// Every unit of O_v/P^A as a reduced polynomial.
    std::vector<FqPoly> units() const {
        const std::uint32_t q = F().q();
        const int D = mod_.degree();
        const std::uint64_t total = ipow(q, D);
        std::vector<FqPoly> out;
        out.reserve(unit_count());
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            std::vector<Elem> c(D);
            std::uint64_t t = idx;
            for (int i = 0; i < D; ++i) {
                c[i] = static_cast<Elem>(t % q);
                t /= q;
            }
            FqPoly x(std::move(c));
            if (is_unit(x)) out.push_back(std::move(x));
        }
        return out;
    }

    struct UnitEntry {
        FqPoly x;
        Decomp d;
    };
    /// units() together with their decompositions, computed once per group.
    const std::vector<UnitEntry>& unit_table() const {
        std::call_once(table_once_, [this] {
            for (auto& x : units()) {
                Decomp d = decompose(x);
                table_.push_back({std::move(x), std::move(d)});
            }
        });
        return table_;
    }

    /// Teichmueller lift of a residue-field generator raised to k, times the wild part.
    FqPoly compose(const Decomp& d) const {
        const FiniteField& K = F();
        FqPoly r = poly_powmod(K, teich_gen_, d.tame, mod_);
        for (std::size_t gi = 0; gi < gens_.size(); ++gi) {
            if (d.wild[gi] == 0) continue;
            const FqPoly g = poly_sub(K, FqPoly::constant(1), poly_mul(K, gens_[gi].w, poly_pow(K, P_, gens_[gi].n)));
            r = poly_mulmod(K, r, poly_powmod(K, g, d.wild[gi], mod_), mod_);
        }
        return r;
    }

private:
    UnitGroup(const Place& v, int A);

    mutable std::once_flag table_once_;
    mutable std::vector<UnitEntry> table_;

    const FiniteField& F() const { return *place_.field; }

    std::uint64_t residue_index(const FqPoly& r) const {
        std::uint64_t idx = 0;
        for (int i = place_.deg - 1; i >= 0; --i) idx = idx * F().q() + r.coeff(i);
        return idx;
    }
    std::uint64_t residue_log(const FqPoly& r) const {
        const auto l = log_[residue_index(r)];
        require(l >= 0, ErrorKind::InternalError, "log of zero residue");
        return static_cast<std::uint64_t>(l);
    }
    std::vector<int> coords(const FqPoly& c) const {
        const FiniteField& K = F();
        std::vector<int> v(dim_, 0);
        for (int l = 0; l < place_.deg; ++l) {
            Elem e = c.coeff(l);
            for (int j = 0; j < K.f(); ++j) {
                v[l * K.f() + j] = static_cast<int>(e % K.p());
                e /= K.p();
            }
        }
        return v;
    }
    std::vector<std::uint64_t> solve_digit(const FqPoly& c, int k) const {
        const int p = F().p();
        const auto b = coords(c);
        std::vector<std::uint64_t> x(dim_, 0);
        for (int r = 0; r < dim_; ++r) {
            long long s = 0;
            for (int j = 0; j < dim_; ++j) s += static_cast<long long>(minv_[k][r][j]) * b[j];
            x[r] = static_cast<std::uint64_t>(s % p);
        }
        return x;
    }
    std::size_t gen_index(int n, int i) const { return gen_pos_.at(n) + static_cast<std::size_t>(i); }

    Place place_;
    int level_ = 0;
    std::uint64_t qv_ = 0;
    FqPoly P_, mod_;
    int dim_ = 0; // [k_v : F_p]
    std::vector<long long> log_;
    FqPoly teich_gen_;
    std::uint64_t teich_exp_ = 1;
    std::vector<WildGen> gens_;
    std::map<int, std::size_t> gen_pos_;
    std::vector<std::vector<FqPoly>> wfull_;               // wfull_[k][i] = w_i^{p^k} mod P^A
    std::vector<std::vector<std::vector<int>>> minv_;      // inverse of the coordinate matrix of wfull_[k] mod P
    std::uint64_t phase_den_ = 1;
};

namespace detail {

inline std::vector<std::vector<int>> invert_mod_p(std::vector<std::vector<int>> M, int p) {
    const int n = static_cast<int>(M.size());
    std::vector<std::vector<int>> I(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) I[i][i] = 1;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (M[r][col] % p != 0) {
                piv = r;
                break;
            }
        require(piv >= 0, ErrorKind::InternalError, "singular basis matrix");
        std::swap(M[piv], M[col]);
        std::swap(I[piv], I[col]);
        const int inv = inv_mod_p(M[col][col], p);
        for (int j = 0; j < n; ++j) {
            M[col][j] = M[col][j] * inv % p;
            I[col][j] = I[col][j] * inv % p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || M[r][col] == 0) continue;
            const int f = M[r][col];
            for (int j = 0; j < n; ++j) {
                M[r][j] = ((M[r][j] - f * M[col][j]) % p + p) % p;
                I[r][j] = ((I[r][j] - f * I[col][j]) % p + p) % p;
            }
        }
    }
    return I;
}

} // namespace detail

inline UnitGroup::UnitGroup(const Place& v, int A) : place_(v), level_(A) {
    const FiniteField& K = *v.field;
    qv_ = v.qv();
    P_ = v.local_poly();
    mod_ = poly_pow(K, P_, A);
    dim_ = K.f() * v.deg;

    // residue field log table
    log_.assign(qv_, -1);
    const auto factors = prime_factors(qv_ - 1);
    auto residue_of = [&](std::uint64_t idx) {
        std::vector<Elem> c(v.deg);
        for (int i = 0; i < v.deg; ++i) {
            c[i] = static_cast<Elem>(idx % K.q());
            idx /= K.q();
        }
        return FqPoly(std::move(c));
    };
    FqPoly gen;
    if (qv_ == 2) {
        gen = FqPoly::constant(1);
    } else {
        for (std::uint64_t idx = 2; idx < qv_; ++idx) {
            FqPoly g = residue_of(idx);
            bool ok = true;
            for (auto r : factors)
                if (poly_powmod(K, g, (qv_ - 1) / r, P_) == FqPoly::constant(1)) ok = false;
            if (ok) {
                gen = g;
                break;
            }
        }
    }
    require(!gen.is_zero(), ErrorKind::InternalError, "no residue field generator");
    FqPoly x = FqPoly::constant(1);
    for (std::uint64_t k = 0; k + 1 < qv_; ++k) {
        log_[residue_index(x)] = static_cast<long long>(k);
        x = poly_mulmod(K, x, gen, P_);
    }

    teich_exp_ = qv_;
    while (teich_exp_ < static_cast<std::uint64_t>(A)) teich_exp_ *= qv_;
    teich_gen_ = poly_powmod(K, gen, teich_exp_, mod_);

    const int p = K.p();
    int emax = 0;
    for (int n = 1; n < A; ++n) {
        if (n % p == 0) continue;
        int e = 0;
        for (long long m = n; m < A; m *= p) ++e;
        emax = std::max(emax, e);
        gen_pos_[n] = gens_.size();
        for (int i = 0; i < dim_; ++i) {
            WildGen g;
            g.n = n;
            g.i = i;
            g.e = e;
            g.order = ipow(p, e);
            const int l = i / K.f(), j = i % K.f();
            g.w = FqPoly::monomial(l, static_cast<Elem>(ipow(p, j)));
            gens_.push_back(std::move(g));
        }
    }
    phase_den_ = (qv_ - 1) * ipow(p, emax);

    for (std::uint64_t pk = 1, k = 0; pk < static_cast<std::uint64_t>(std::max(A, 2)); pk *= p, ++k) {
        std::vector<FqPoly> row;
        std::vector<std::vector<int>> M(dim_, std::vector<int>(dim_, 0));
        for (int i = 0; i < dim_; ++i) {
            const int l = i / K.f(), j = i % K.f();
            FqPoly w = poly_powmod(K, FqPoly::monomial(l, static_cast<Elem>(ipow(p, j))), pk, mod_);
            const auto c = coords(poly_mod(K, w, P_));
            for (int r = 0; r < dim_; ++r) M[r][i] = c[r];
            row.push_back(std::move(w));
        }
        wfull_.push_back(std::move(row));
        minv_.push_back(detail::invert_mod_p(std::move(M), p));
    }
}

inline std::shared_ptr<const UnitGroup> UnitGroup::get(const Place& v, int A) {
    require(A >= 1, ErrorKind::PreconditionFailed, "unit group level must be >= 1");
    long double size = 1;
    for (int i = 0; i < A; ++i) size *= static_cast<long double>(v.qv());
    require(size <= static_cast<long double>(kMaxUnitRing), ErrorKind::SizeError,
            "q_v^a exceeds the supported bound 10^6");
    static std::mutex mu;
    static std::map<std::string, std::shared_ptr<const UnitGroup>> cache;
    const std::string key = std::to_string(v.field->p()) + "^" + std::to_string(v.field->f()) + ":" + v.name() +
                            ":" + std::to_string(A);
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto g = std::shared_ptr<const UnitGroup>(new UnitGroup(v, A));
    cache.emplace(key, g);
    return g;
}

/// Character of (O_v/P^A)^x, stored as exponents on the generators above.
/// Level 0 denotes the trivial character with no group attached.
class UnitCharacter {
public:
    UnitCharacter() = default;

    static UnitCharacter trivial() { return {}; }

    static UnitCharacter make(std::shared_ptr<const UnitGroup> G, std::uint64_t tame, std::vector<std::uint64_t> wild) {
        require(G != nullptr, ErrorKind::InvalidCharacter, "missing unit group");
        require(wild.size() == G->wild_gens().size(), ErrorKind::InvalidCharacter, "wrong number of wild exponents");
        UnitCharacter c;
        c.group_ = std::move(G);
        c.tame_ = tame % c.group_->tame_order();
        for (std::size_t i = 0; i < wild.size(); ++i) wild[i] %= c.group_->wild_gens()[i].order;
        c.wild_ = std::move(wild);
        return c;
    }

    /// Character of k_v^x = (O_v/P)^x sending the residue generator to e(k/(q_v - 1)).
    static UnitCharacter tame_only(const Place& v, std::uint64_t k) {
        auto G = UnitGroup::get(v, 1);
        return make(G, k, {});
    }

    static UnitCharacter random(const Place& v, int A, std::mt19937_64& rng) {
        auto G = UnitGroup::get(v, A);
        std::uniform_int_distribution<std::uint64_t> dt(0, G->tame_order() - 1);
        const std::uint64_t t = dt(rng);
        std::vector<std::uint64_t> w;
        for (const auto& g : G->wild_gens()) w.push_back(std::uniform_int_distribution<std::uint64_t>(0, g.order - 1)(rng));
        return make(G, t, w);
    }

    /// All characters of (O_v/P^A)^x (primitive or not), in mixed-radix order.
    static std::vector<UnitCharacter> all(const Place& v, int A) {
        auto G = UnitGroup::get(v, A);
        std::vector<UnitCharacter> out;
        const std::uint64_t total = G->unit_count();
        out.reserve(total);
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            std::uint64_t t = idx;
            const std::uint64_t tame = t % G->tame_order();
            t /= G->tame_order();
            std::vector<std::uint64_t> w;
            for (const auto& g : G->wild_gens()) {
                w.push_back(t % g.order);
                t /= g.order;
            }
            out.push_back(make(G, tame, w));
        }
        return out;
    }

    int level() const { return group_ ? group_->level() : 0; }
    const std::shared_ptr<const UnitGroup>& group() const { return group_; }
    std::uint64_t tame() const { return tame_; }
    const std::vector<std::uint64_t>& wild() const { return wild_; }

    bool is_trivial() const {
        if (!group_) return true;
        if (tame_ != 0) return false;
        for (auto w : wild_)
            if (w != 0) return false;
        return true;
    }

    /// Smallest a such that the character is trivial on 1 + P^a (0 if trivial).
    int conductor() const {
        if (is_trivial()) return 0;
        const int p = group_->place().field->p();
        int top = 0;
        const auto& gens = group_->wild_gens();
        for (std::size_t i = 0; i < gens.size(); ++i) {
            std::uint64_t w = wild_[i];
            long long m = gens[i].n;
            while (w % gens[i].order != 0) { // w p^k not yet divisible by the order
                top = std::max<long long>(top, m);
                w = w * p % gens[i].order;
                m *= p;
            }
        }
        return 1 + top;
    }

    /// Same character viewed on (O_v/P^B)^x. Lowering needs B >= conductor.
    UnitCharacter at_level(int B) const {
        if (B == level()) return *this;
        if (B == 0) {
            require(is_trivial(), ErrorKind::InvalidCharacter, "cannot lower a nontrivial character to level 0");
            return {};
        }
        require(B >= conductor(), ErrorKind::InvalidCharacter, "level below the conductor");
        if (!group_) {
            require(false, ErrorKind::InvalidCharacter, "trivial character needs a place to be raised");
        }
        auto H = UnitGroup::get(group_->place(), B);
        std::vector<std::uint64_t> w(H->wild_gens().size(), 0);
        const auto& src = group_->wild_gens();
        for (std::size_t j = 0; j < H->wild_gens().size(); ++j) {
            const auto& g = H->wild_gens()[j];
            for (std::size_t i = 0; i < src.size(); ++i) {
                if (src[i].n != g.n || src[i].i != g.i) continue;
                if (g.e >= src[i].e)
                    w[j] = wild_[i] * ipow(group_->place().field->p(), g.e - src[i].e);
                else
                    w[j] = wild_[i] / ipow(group_->place().field->p(), src[i].e - g.e);
            }
        }
        return make(H, tame_, w);
    }

    static UnitCharacter trivial_at(const Place& v, int A) {
        if (A == 0) return {};
        auto G = UnitGroup::get(v, A);
        return make(G, 0, std::vector<std::uint64_t>(G->wild_gens().size(), 0));
    }

    /// Restriction to the conductor level.
    UnitCharacter normalized() const {
        if (!group_) return {};
        return at_level(conductor());
    }

    /// Phase numerator of chi(x) over group()->phase_den().
    std::uint64_t phase(const FqPoly& x) const {
        if (!group_) return 0;
        return phase(group_->decompose(x));
    }

    /// Same, from a decomposition in group().
    std::uint64_t phase(const UnitGroup::Decomp& d) const {
        if (!group_) return 0;
        const std::uint64_t den = group_->phase_den();
        unsigned __int128 acc = static_cast<unsigned __int128>(tame_) * d.tame % den * (den / group_->tame_order());
        const auto& gens = group_->wild_gens();
        for (std::size_t i = 0; i < gens.size(); ++i)
            acc += static_cast<unsigned __int128>(wild_[i]) * d.wild[i] % gens[i].order * (den / gens[i].order);
        return static_cast<std::uint64_t>(acc % den);
    }

    cplx value(const FqPoly& x) const {
        if (!group_) return 1.0;
        return phase_value(phase(x));
    }

    cplx value(const UnitGroup::Decomp& d) const {
        if (!group_) return 1.0;
        return phase_value(phase(d));
    }

    cplx phase_value(std::uint64_t ph) const {
        return std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(ph) / static_cast<double>(group_->phase_den()));
    }

    friend UnitCharacter operator*(const UnitCharacter& a, const UnitCharacter& b) {
        if (!a.group_) return b;
        if (!b.group_) return a;
        require(a.group_->place() == b.group_->place(), ErrorKind::PlaceMismatch, "characters at different places");
        const int L = std::max(a.level(), b.level());
        const UnitCharacter x = a.at_level(L), y = b.at_level(L);
        std::vector<std::uint64_t> w(x.wild_.size());
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = x.wild_[i] + y.wild_[i];
        return make(x.group_, x.tame_ + y.tame_, w);
    }

    UnitCharacter inverse() const {
        if (!group_) return {};
        std::vector<std::uint64_t> w(wild_.size());
        const auto& gens = group_->wild_gens();
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = (gens[i].order - wild_[i]) % gens[i].order;
        return make(group_, (group_->tame_order() - tame_) % group_->tame_order(), w);
    }

    UnitCharacter pow(long long k) const {
        UnitCharacter base = k < 0 ? inverse() : *this;
        UnitCharacter r = trivial();
        for (long long i = 0; i < std::llabs(k); ++i) r = r * base;
        return r;
    }

    friend bool operator==(const UnitCharacter& a, const UnitCharacter& b) {
        const UnitCharacter x = a.normalized(), y = b.normalized();
        if (!x.group_ || !y.group_) return !x.group_ && !y.group_;
        return x.group_->place() == y.group_->place() && x.level() == y.level() && x.tame_ == y.tame_ &&
               x.wild_ == y.wild_;
    }

private:
    std::shared_ptr<const UnitGroup> group_;
    std::uint64_t tame_ = 0;
    std::vector<std::uint64_t> wild_;
};

} // namespace lfunc
