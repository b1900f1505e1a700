#pragma once

// Characters of k_v^x and k_v, and the rank-one L, epsilon and gamma factors.
//
// All factors live over the base q of the constant field, so a place of
// degree d contributes in T^d. Uniformizer is P (or 1/t at infinity).

#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <string>

#include "lfunc/errors.hpp"
#include "lfunc/ffbase.hpp"
#include "lfunc/local_units.hpp"
#include "lfunc/qseries.hpp"

namespace lfunc {

inline constexpr double kUnitaryTol = 1e-12;

class MultChar {
public:
    MultChar() = default;

    static MultChar unramified(const Place& v, cplx alpha) { return make(v, alpha, UnitCharacter::trivial()); }

    static MultChar make(const Place& v, cplx alpha, const UnitCharacter& unit) {
        require(alpha != cplx(0), ErrorKind::InvalidCharacter, "chi(uniformizer) must be nonzero");
        if (unit.group())
            require(unit.group()->place() == v, ErrorKind::PlaceMismatch, "unit character lives at another place");
        MultChar c;
        c.place_ = v;
        c.alpha_ = alpha;
        c.unit_ = unit.normalized();
        return c;
    }

    const Place& place() const { return place_; }
    cplx alpha() const { return alpha_; }
    const UnitCharacter& unit() const { return unit_; }
    int cond() const { return unit_.conductor(); }
    bool ramified() const { return cond() > 0; }
    bool unitary() const { return std::abs(std::abs(alpha_) - 1.0) < kUnitaryTol; }

    /// chi on a unit of O_v
    cplx on_unit(const FqPoly& x) const { return unit_.value(x); }

    /// chi(u P^k) for a unit u
    cplx value(const FqPoly& u, int k) const { return std::pow(alpha_, k) * on_unit(u); }

    MultChar inverse() const { return make(place_, 1.0 / alpha_, unit_.inverse()); }

    /// chi |.|^{s0}
    MultChar twist(cplx s0) const {
        return make(place_, alpha_ * std::exp(-s0 * std::log(static_cast<double>(place_.qv()))), unit_);
    }

    /// Unitary part and the real exponent r with chi = chi_0 |.|^r.
    std::pair<MultChar, double> unitary_split() const {
        const double r = -std::log(std::abs(alpha_)) / std::log(static_cast<double>(place_.qv()));
        return {make(place_, alpha_ / std::abs(alpha_), unit_), r};
    }

    friend MultChar operator*(const MultChar& a, const MultChar& b) {
        require(a.place_ == b.place_, ErrorKind::PlaceMismatch, "characters at different places");
        return make(a.place_, a.alpha_ * b.alpha_, a.unit_ * b.unit_);
    }

    bool approx_equal(const MultChar& o, double tol = 1e-10) const {
        return place_ == o.place_ && std::abs(alpha_ - o.alpha_) <= tol * std::max(1.0, std::abs(alpha_)) &&
               unit_ == o.unit_;
    }

private:
    Place place_;
    cplx alpha_ = 1.0;
    UnitCharacter unit_;
};

/// psi^a for a = twist * P^val, with psi the standard character of level 0.
struct AddChar {
    Place place;
    FqPoly twist = FqPoly::constant(1);
    int val = 0;

    int level() const { return val; }

    AddChar twisted(const FqPoly& unit, int k) const {
        const FiniteField& F = *place.field;
        require(!poly_mod(F, unit, place.local_poly()).is_zero(), ErrorKind::PreconditionFailed,
                "additive twist needs a unit");
        return {place, poly_mul(F, twist, unit), val + k};
    }
    /// psi-bar = psi^{-1}
    AddChar conj() const { return {place, poly_neg(*place.field, twist), val}; }
};

inline AddChar std_psi(const Place& v) { return {v, FqPoly::constant(1), 0}; }

/// Standard character on y * P^{-k}, y in O_v: e(Tr [t^{kd-1}](y mod P^k) / p).
inline cplx std_psi_value(const Place& v, const FqPoly& y, int k) {
    if (k <= 0) return 1.0;
    const FiniteField& F = *v.field;
    const FqPoly r = poly_mod(F, y, poly_pow(F, v.local_poly(), k));
    const int tr = F.trace(r.coeff(k * v.deg - 1));
    return std::polar(1.0, 2 * std::numbers::pi * tr / F.p());
}

/// psi(y * P^{-k})
inline cplx psi_value(const AddChar& psi, const FqPoly& y, int k) {
    return std_psi_value(psi.place, poly_mul(*psi.place.field, psi.twist, y), k - psi.val);
}

/// psi_std(x P^{-a}) over unit_table(), computed once per group.
inline const std::vector<cplx>& std_psi_table(const std::shared_ptr<const UnitGroup>& G) {
    static std::mutex mu;
    static std::map<const UnitGroup*, std::vector<cplx>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(G.get());
    if (it != cache.end()) return it->second;
    std::vector<cplx> vals;
    for (const auto& e : G->unit_table()) vals.push_back(std_psi_value(G->place(), e.x, G->level()));
    return cache.emplace(G.get(), std::move(vals)).first->second;
}

/// sum over x in (O/P^a)^x of chi^{-1}(x) psi(x P^{-a-n(psi)})
inline cplx gauss_sum(const MultChar& chi, const AddChar& psi) {
    require(chi.place() == psi.place, ErrorKind::PlaceMismatch, "gauss_sum: character places differ");
    const int a = chi.cond();
    require(a >= 1, ErrorKind::PreconditionFailed, "gauss_sum needs a ramified character");
    const auto G = UnitGroup::get(chi.place(), a);
    const FiniteField& F = *chi.place().field;
    const FqPoly u = poly_mod(F, psi.twist, G->modulus());
    const UnitCharacter c = chi.unit().at_level(a);
    require(c.group() == G, ErrorKind::InternalError, "gauss_sum: unit group mismatch");
    const auto& table = G->unit_table();
    cplx s = 0;
    if (G->is_unit(u)) {
        // substituting x -> x / u pulls out chi(u)
        const auto& ps = std_psi_table(G);
        for (std::size_t i = 0; i < table.size(); ++i) s += std::conj(c.value(table[i].d)) * ps[i];
        return c.value(u) * s;
    }
    for (const auto& e : table) s += std::conj(c.value(e.d)) * std_psi_value(chi.place(), poly_mul(F, u, e.x), a);
    return s;
}

inline double base_q(const Place& v) { return static_cast<double>(v.field->q()); }

inline QRat tate_L(const MultChar& chi) {
    if (chi.ramified()) return QRat::one(base_q(chi.place()));
    return QRat::euler(base_q(chi.place()), chi.alpha(), chi.place().deg);
}

/// alpha^{a+m} q_v^{m/2} G T^{(a+m) deg v}, with G = 1 when unramified.
inline QRat tate_eps(const MultChar& chi, const AddChar& psi) {
    require(chi.place() == psi.place, ErrorKind::PlaceMismatch, "tate_eps: places differ");
    const int a = chi.cond(), m = psi.level();
    const double qv = static_cast<double>(chi.place().qv());
    cplx c = std::pow(chi.alpha(), a + m) * std::pow(qv, m / 2.0);
    if (a > 0) c *= gauss_sum(chi, psi);
    return QRat::monomial(base_q(chi.place()), c, (a + m) * chi.place().deg);
}

inline QRat tate_gamma(const MultChar& chi, const AddChar& psi) {
    const QRat L = tate_L(chi);
    const QRat Ld = qr_dual(tate_L(chi.inverse()));
    return qr_mul(tate_eps(chi, psi), qr_div(Ld, L));
}

struct AbelianTriple {
    QRat L, eps, gamma;
};

inline AbelianTriple tate_factors(const MultChar& chi, const AddChar& psi) {
    return {tate_L(chi), tate_eps(chi, psi), tate_gamma(chi, psi)};
}

/// Random character of conductor <= max_cond with unitary or arbitrary alpha.
inline MultChar random_char(const Place& v, int max_cond, std::mt19937_64& rng, bool unitary = true) {
    std::uniform_int_distribution<int> dc(0, max_cond);
    const int a = dc(rng);
    std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
    std::uniform_real_distribution<double> rad(0.5, 2.0);
    const cplx alpha = std::polar(unitary ? 1.0 : rad(rng), ang(rng));
    if (a == 0) return MultChar::unramified(v, alpha);
    return MultChar::make(v, alpha, UnitCharacter::random(v, a, rng));
}

// --- JSON --------------------------------------------------------------------

inline nlohmann::json place_to_json(const Place& v) {
    if (v.is_infinite()) return {{"kind", "infinite"}};
    nlohmann::json c = nlohmann::json::array();
    for (auto x : v.poly.c) c.push_back(x);
    return {{"kind", "finite"}, {"poly", c}};
}

inline Place place_from_json(const nlohmann::json& j, const FieldPtr& F) {
    if (j.is_string() && j.get<std::string>() == "inf") return Place::infinite(F);
    require(j.is_object() && j.contains("kind"), ErrorKind::SchemaError, "place needs a kind");
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "infinite") return Place::infinite(F);
    require(kind == "finite" && j.contains("poly") && j.at("poly").is_array(), ErrorKind::SchemaError,
            "finite place needs a coefficient list");
    std::vector<Elem> c;
    for (const auto& x : j.at("poly")) {
        require(x.is_number_integer() && x.get<long long>() >= 0 && x.get<long long>() < F->q(),
                ErrorKind::SchemaError, "coefficient outside [0, q)");
        c.push_back(x.get<Elem>());
    }
    return Place::finite(F, FqPoly(std::move(c)));
}

inline nlohmann::json unit_char_to_json(const UnitCharacter& u) {
    nlohmann::json j;
    j["level"] = u.level();
    j["gen_order"] = u.group() ? u.group()->tame_order() : 1;
    j["gen_image_root_of_unity"] = u.tame();
    j["wild"] = u.wild();
    return j;
}

inline UnitCharacter unit_char_from_json(const nlohmann::json& j, const Place& v) {
    require(j.is_object(), ErrorKind::SchemaError, "unit_char must be an object");
    const int level = j.value("level", j.value("gen_image_root_of_unity", 0) ? 1 : 0);
    if (level == 0) return UnitCharacter::trivial();
    auto G = UnitGroup::get(v, level);
    if (j.contains("gen_order"))
        require(j.at("gen_order").get<std::uint64_t>() == G->tame_order(), ErrorKind::SchemaError,
                "gen_order does not match q_v - 1");
    std::vector<std::uint64_t> w = j.value("wild", std::vector<std::uint64_t>(G->wild_gens().size(), 0));
    require(w.size() == G->wild_gens().size(), ErrorKind::SchemaError, "wrong number of wild exponents");
    return UnitCharacter::make(G, j.value("gen_image_root_of_unity", std::uint64_t{0}), w);
}

inline nlohmann::json to_json(const MultChar& c) {
    return {{"place", place_to_json(c.place())},
            {"alpha", cplx_to_json(c.alpha())},
            {"cond", c.cond()},
            {"unit_char", unit_char_to_json(c.unit())}};
}

inline MultChar multchar_from_json(const nlohmann::json& j, const FieldPtr& F) {
    require(j.is_object() && j.contains("place") && j.contains("alpha"), ErrorKind::SchemaError,
            "character needs place and alpha");
    const Place v = place_from_json(j.at("place"), F);
    const UnitCharacter u = j.contains("unit_char") ? unit_char_from_json(j.at("unit_char"), v) : UnitCharacter{};
    MultChar c = MultChar::make(v, cplx_from_json(j.at("alpha")), u);
    if (j.contains("cond"))
        require(j.at("cond").get<int>() == c.cond(), ErrorKind::SchemaError, "declared cond differs from conductor");
    return c;
}

inline nlohmann::json to_json(const AddChar& a) {
    nlohmann::json tw = nlohmann::json::array();
    for (auto x : a.twist.c) tw.push_back(x);
    return {{"place", place_to_json(a.place)}, {"twist", tw}, {"val", a.val}};
}

inline AddChar addchar_from_json(const nlohmann::json& j, const FieldPtr& F) {
    require(j.is_object() && j.contains("place"), ErrorKind::SchemaError, "additive character needs a place");
    AddChar a = std_psi(place_from_json(j.at("place"), F));
    std::vector<Elem> tw = j.value("twist", std::vector<Elem>{1});
    return a.twisted(FqPoly(tw), j.value("val", 0));
}

} // namespace lfunc
