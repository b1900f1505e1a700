#pragma once

// Dirichlet-type characters of F_q(t), global pairs and their L-functions.
//
// A GrossenChar is a character chi_M of (F_q[t]/M)^x, stored as one unit
// character per prime power dividing M, together with the value beta at the
// infinite place: chi((Q)) = chi_M(Q) beta^{deg Q} on monic irreducibles Q
// prime to M. When chi_M is nontrivial on the constants F_q^x the character
// is ramified (tamely) at infinity.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "lfunc/checks.hpp"
#include "lfunc/errors.hpp"
#include "lfunc/factors.hpp"
#include "lfunc/ffbase.hpp"
#include "lfunc/local_units.hpp"
#include "lfunc/qseries.hpp"
#include "lfunc/repsys.hpp"
#include "lfunc/satake.hpp"
#include "lfunc/tate.hpp"

namespace lfunc {

class GrossenChar {
public:
    struct Comp {
        Place place;
        UnitCharacter unit; // primitive, level = conductor
    };

    GrossenChar() = default;

    static GrossenChar trivial(FieldPtr F, cplx beta = 1.0) { return from_components(std::move(F), {}, beta); }

    static GrossenChar from_components(FieldPtr F, std::vector<Comp> comps, cplx beta = 1.0) {
        require(beta != cplx(0), ErrorKind::InvalidCharacter, "value at infinity must be nonzero");
        GrossenChar g;
        g.F_ = std::move(F);
        g.beta_ = beta;
        std::vector<Comp> merged;
        for (auto& c : comps) {
            require(!c.place.is_infinite(), ErrorKind::InvalidCharacter, "components live at finite places");
            auto it = std::find_if(merged.begin(), merged.end(), [&](const Comp& m) { return m.place == c.place; });
            if (it == merged.end())
                merged.push_back(c);
            else
                it->unit = it->unit * c.unit;
        }
        FqPoly M = FqPoly::constant(1);
        for (auto& c : merged) {
            c.unit = c.unit.normalized();
            if (c.unit.is_trivial()) continue;
            M = poly_mul(*g.F_, M, poly_pow(*g.F_, c.place.poly, c.unit.conductor()));
            g.comps_.push_back(c);
        }
        std::sort(g.comps_.begin(), g.comps_.end(), [](const Comp& a, const Comp& b) { return a.place < b.place; });
        g.modulus_ = M;
        return g;
    }

    /// Product of Legendre symbols (f mod P | P) over the prime factors of a
    /// squarefree monic M; q odd.
    static GrossenChar quadratic(FieldPtr F, const FqPoly& M, cplx beta = 1.0) {
        require(F->p() != 2, ErrorKind::PreconditionFailed, "quadratic characters need odd q");
        require(M.is_monic(), ErrorKind::PreconditionFailed, "modulus must be monic");
        std::vector<Comp> comps;
        if (M.degree() > 0) {
            const auto fac = factor(*F, M);
            for (const auto& [P, e] : fac.factors) {
                require(e == 1, ErrorKind::PreconditionFailed, "modulus must be squarefree");
                const Place v = Place::finite(F, P);
                comps.push_back({v, UnitCharacter::tame_only(v, (v.qv() - 1) / 2)});
            }
        }
        return from_components(std::move(F), std::move(comps), beta);
    }

    const FieldPtr& field() const { return F_; }
    const FqPoly& modulus() const { return modulus_; }
    const std::vector<Comp>& comps() const { return comps_; }
    cplx beta() const { return beta_; }
    double q() const { return static_cast<double>(F_->q()); }

    /// chi_M(f); zero when f shares a factor with M
    cplx chi_M(const FqPoly& f) const {
        cplx r = 1.0;
        for (const auto& c : comps_) {
            if (poly_mod(*F_, f, c.place.poly).is_zero()) return 0.0;
            r *= c.unit.value(f);
        }
        return r;
    }

    bool finite_trivial() const { return comps_.empty(); }

    /// chi_M trivial on the constants
    bool even() const {
        return std::abs(chi_M(FqPoly::constant(F_->generator())) - 1.0) < 1e-9;
    }

    bool ramified_at(const Place& v) const {
        if (v.is_infinite()) return !even();
        for (const auto& c : comps_)
            if (c.place == v) return true;
        return false;
    }

    std::vector<Place> ramified_places() const {
        std::vector<Place> out;
        if (!even()) out.push_back(Place::infinite(F_));
        for (const auto& c : comps_) out.push_back(c.place);
        return out;
    }

    /// Local component chi_v of the idele class character.
    MultChar local(const Place& v) const {
        if (v.is_infinite()) {
            if (even()) return MultChar::unramified(v, beta_);
            auto G = UnitGroup::get(v, 1);
            const FqPoly g = FqPoly::constant(F_->generator());
            const cplx target = chi_M(g);
            for (std::uint64_t k = 0; k < G->tame_order(); ++k) {
                const UnitCharacter u = UnitCharacter::make(G, k, {});
                if (std::abs(u.value(g) - target) < 1e-9) return MultChar::make(v, beta_, u);
            }
            fail(ErrorKind::InternalError, "no tame character at infinity matches chi_M on constants");
        }
        for (const auto& c : comps_) {
            if (!(c.place == v)) continue;
            cplx alpha = std::pow(beta_, v.deg);
            for (const auto& o : comps_)
                if (!(o.place == v)) alpha *= o.unit.value(v.poly);
            return MultChar::make(v, alpha, c.unit.inverse());
        }
        return MultChar::unramified(v, chi_M(v.poly) * std::pow(beta_, v.deg));
    }

    GrossenChar inverse() const {
        std::vector<Comp> c;
        for (const auto& x : comps_) c.push_back({x.place, x.unit.inverse()});
        return from_components(F_, c, 1.0 / beta_);
    }

    friend GrossenChar operator*(const GrossenChar& a, const GrossenChar& b) {
        require(a.F_->q() == b.F_->q() && a.F_->p() == b.F_->p(), ErrorKind::BaseMismatch, "characters over different fields");
        std::vector<Comp> c = a.comps_;
        c.insert(c.end(), b.comps_.begin(), b.comps_.end());
        return from_components(a.F_, c, a.beta_ * b.beta_);
    }

    bool self_dual() const {
        const GrossenChar s = (*this) * (*this);
        return s.finite_trivial() && std::abs(s.beta_ - 1.0) < 1e-9;
    }

    bool approx_equal(const GrossenChar& o) const {
        if (comps_.size() != o.comps_.size() || std::abs(beta_ - o.beta_) > 1e-9) return false;
        for (std::size_t i = 0; i < comps_.size(); ++i)
            if (!(comps_[i].place == o.comps_[i].place) || !(comps_[i].unit == o.comps_[i].unit)) return false;
        return true;
    }

    std::string describe() const {
        std::ostringstream s;
        s << "mod[";
        for (std::size_t i = 0; i < modulus_.c.size(); ++i) s << (i ? "," : "") << modulus_.c[i];
        s << "]";
        if (std::abs(beta_ - 1.0) > 1e-12) s << " beta=" << beta_.real() << (beta_.imag() < 0 ? "" : "+") << beta_.imag() << "i";
        return s.str();
    }

private:
    FieldPtr F_;
    FqPoly modulus_ = FqPoly::constant(1);
    std::vector<Comp> comps_;
    cplx beta_ = 1.0;
};

/// Completed L-function of a primitive character.
inline QRat char_L_complete(const GrossenChar& chi) {
    const double q = chi.q();
    const cplx b = chi.beta();
    if (chi.finite_trivial()) return QRat::factored(q, 1.0, 0, {}, {b, q * b});
    const FiniteField& F = *chi.field();
    const int n = chi.modulus().degree();
    std::vector<cplx> coeffs(n, 0);
    for (int d = 0; d < n; ++d) {
        const std::uint64_t count = ipow(F.q(), d);
        cplx s = 0;
        for (std::uint64_t idx = 0; idx < count; ++idx) s += chi.chi_M(monic_from_index(idx, d, F.q()));
        coeffs[d] = s * std::pow(b, d);
    }
    QRat L = QRat::from_polys(QPoly(q, coeffs), QPoly(q, {1.0}));
    if (chi.even()) L = qr_mul(L, QRat::euler(q, b, 1));
    return L;
}

/// The global additive character: residues of x dt, trivial on F_q(t).
inline AddChar global_psi(const Place& v) {
    if (!v.is_infinite()) return std_psi(v);
    return std_psi(v).twisted(FqPoly::constant(v.field->neg(1)), -2);
}

struct IsobaricLift {
    std::vector<GrossenChar> constituents;
    GroupTag group;
};

enum class SelfDualType { Orthogonal, Symplectic };

inline std::string to_string(SelfDualType t) { return t == SelfDualType::Orthogonal ? "orthogonal" : "symplectic"; }

/// Euler coefficients of prod over finite v not in S, deg v <= D, of
/// prod 1/(1 - e T^{deg v}) for e in eigs(v).
template <class Eigs>
inline std::vector<cplx> euler_series(const FieldPtr& F, int D, Eigs&& eigs) {
    std::vector<cplx> s(D + 1, 0);
    s[0] = 1;
    const auto pl = places(F, D);
    for (const auto& v : pl) {
        if (v.is_infinite()) continue;
        std::vector<cplx> e;
        if (!eigs(v, e)) continue;
        for (auto a : e) {
            const int d = v.deg;
            for (int i = d; i <= D; ++i) s[i] += a * s[i - d]; // times 1/(1 - a T^d)
        }
    }
    return s;
}

/// Pole at s = 1 of the partial Sym^2 L-function, detected from the growth of
/// its Euler coefficients against those of the zeta function.
inline SelfDualType selfdual_type(const GrossenChar& chi, int D = 6) {
    require(chi.self_dual(), ErrorKind::NotSelfDual, "character " + chi.describe() + " is not self-dual");
    const GrossenChar sq = chi * chi;
    const auto ram = chi.ramified_places();
    auto eig = [&](const Place& v, std::vector<cplx>& e) {
        for (const auto& r : ram)
            if (r == v) return false;
        e = {sq.local(v).alpha()};
        return true;
    };
    const auto s = euler_series(chi.field(), D, eig);
    const double q = chi.q();
    const double ratio = std::abs(s[D]) / std::max(std::abs(s[D - 1]), 1e-300);
    // 1/(1 - qT) dominates: coefficient ratio tends to q
    return std::abs(ratio - q) < 0.25 * q ? SelfDualType::Orthogonal : SelfDualType::Symplectic;
}

inline bool needs_orthogonal(const GroupTag& t) {
    return t.family == GroupTag::Family::Sp || t.family == GroupTag::Family::SOEven;
}

inline IsobaricLift isobaric_sum(const std::vector<GrossenChar>& cs, GroupTag group) {
    require(static_cast<int>(cs.size()) == group.dual_dim(), ErrorKind::SizeMismatch,
            std::to_string(cs.size()) + " constituents for a group of dual dimension " + std::to_string(group.dual_dim()));
    for (const auto& c : cs) require(c.self_dual(), ErrorKind::NotSelfDual, "constituent " + c.describe() + " is not self-dual");
    for (std::size_t i = 0; i < cs.size(); ++i)
        for (std::size_t j = i + 1; j < cs.size(); ++j)
            require(!cs[i].approx_equal(cs[j]), ErrorKind::DuplicateConstituent, "constituent " + cs[i].describe() + " repeated");
    if (group.is_classical()) {
        for (const auto& c : cs) {
            const SelfDualType t = selfdual_type(c);
            const SelfDualType want = needs_orthogonal(group) ? SelfDualType::Orthogonal : SelfDualType::Symplectic;
            require(t == want, ErrorKind::TypeMismatch,
                    "constituent " + c.describe() + " is " + to_string(t) + ", " + group.name() + " needs " + to_string(want));
        }
        GrossenChar det = GrossenChar::trivial(cs.front().field());
        for (const auto& c : cs) det = det * c;
        require(det.finite_trivial() && std::abs(det.beta() - 1.0) < 1e-9, ErrorKind::DeterminantMismatch,
                "product of the constituents must be trivial for " + group.name());
    }
    return {cs, group};
}

using GlobalSide = std::variant<GrossenChar, IsobaricLift>;

inline std::vector<GrossenChar> constituents(const GlobalSide& s) {
    if (const auto* c = std::get_if<GrossenChar>(&s)) return {*c};
    return std::get<IsobaricLift>(s).constituents;
}

inline GroupTag side_tag(const GlobalSide& s) {
    if (std::holds_alternative<GrossenChar>(s)) return GroupTag::gl(1);
    return std::get<IsobaricLift>(s).group;
}

inline GlobalSide side_contragredient(const GlobalSide& s) {
    if (const auto* c = std::get_if<GrossenChar>(&s)) return c->inverse();
    IsobaricLift L = std::get<IsobaricLift>(s);
    for (auto& c : L.constituents) c = c.inverse();
    return L;
}

/// Local representation of a side at v.
inline Rep side_local(const GlobalSide& s, const Place& v) {
    if (const auto* c = std::get_if<GrossenChar>(&s)) return make_char(c->local(v));
    const auto& L = std::get<IsobaricLift>(s);
    bool unram = true;
    std::vector<cplx> eigs;
    std::vector<GlPart> parts;
    for (const auto& c : L.constituents) {
        const MultChar m = c.local(v);
        unram = unram && !m.ramified();
        eigs.push_back(m.alpha());
        parts.push_back({make_char(m), 0.0});
    }
    if (unram) return make_satake(SatakeClass(L.group, v, eigs));
    Rep lift = make_induced(GroupTag::gl(static_cast<int>(parts.size())), parts);
    if (L.group.is_gl()) return lift;
    auto d = std::make_shared<FormalData>();
    d->tag = L.group;
    d->place = v;
    d->name = "isobaric";
    d->central = central_character(lift);
    d->lift = lift;
    d->self_dual = true;
    for (const auto& c : L.constituents) d->self_dual = d->self_dual && c.self_dual();
    return make_formal(d);
}

inline bool side_ramified_at(const GlobalSide& s, const Place& v) {
    for (const auto& c : constituents(s))
        if (c.ramified_at(v)) return true;
    return false;
}

struct GlobalPair {
    FieldPtr field;
    GlobalSide tau, pi;

    /// ramified places of either side together with infinity
    std::vector<Place> S() const {
        std::vector<Place> out{Place::infinite(field)};
        for (const auto* side : {&tau, &pi})
            for (const auto& c : constituents(*side))
                for (const auto& v : c.ramified_places())
                    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
        std::sort(out.begin(), out.end());
        return out;
    }

    GlobalPair contragredient() const { return {field, side_contragredient(tau), side_contragredient(pi)}; }
};

inline QRat global_L(const GlobalPair& P) {
    QRat L = QRat::one(static_cast<double>(P.field->q()));
    for (const auto& a : constituents(P.tau))
        for (const auto& b : constituents(P.pi)) L = qr_mul(L, char_L_complete(a * b));
    return L;
}

inline QRat global_eps(const GlobalPair& P) {
    QRat e = QRat::one(static_cast<double>(P.field->q()));
    for (const auto& v : P.S()) e = qr_mul(e, eps_general(side_local(P.tau, v), side_local(P.pi, v), global_psi(v)));
    return e;
}

/// prod over v in S of the local L-factors
inline QRat ramified_L(const GlobalPair& P) {
    QRat L = QRat::one(static_cast<double>(P.field->q()));
    for (const auto& v : P.S()) L = qr_mul(L, L_general(side_local(P.tau, v), side_local(P.pi, v)));
    return L;
}

/// Euler coefficients of L^S up to T^D.
inline std::vector<cplx> partial_L(const GlobalPair& P, int D) {
    require(D >= 1, ErrorKind::PreconditionFailed, "degree bound must be >= 1");
    const auto S = P.S();
    auto eig = [&](const Place& v, std::vector<cplx>& e) {
        if (std::find(S.begin(), S.end(), v) != S.end()) return false;
        e.clear();
        for (const auto& a : constituents(P.tau))
            for (const auto& b : constituents(P.pi)) e.push_back(a.local(v).alpha() * b.local(v).alpha());
        return true;
    };
    return euler_series(P.field, D, eig);
}

/// Exact Euler coefficients of the zeta function over the finite places of
/// degree <= D: prod_d (1 - T^d)^{-N_d}.
inline std::vector<std::int64_t> zeta_euler_coeffs(const FieldPtr& F, int D) {
    std::vector<std::int64_t> N(D + 1, 0);
    for (const auto& P : monic_irreducibles(*F, D)) ++N[P.degree()];
    std::vector<std::int64_t> s(D + 1, 0);
    s[0] = 1;
    for (int d = 1; d <= D; ++d)
        for (std::int64_t k = 0; k < N[d]; ++k)
            for (int i = d; i <= D; ++i) s[i] += s[i - d];
    return s;
}

struct FeReport {
    bool pass = false;
    double residual = 0;         // completed form
    double partial_residual = 0; // L^S form
    std::string form = "complete";
    QRat L, eps;
};

inline FeReport verify_fe(const GlobalPair& P, double tol = 1e-9, const QRat* eps_override = nullptr) {
    FeReport r;
    r.L = global_L(P);
    r.eps = eps_override ? *eps_override : global_eps(P);
    const GlobalPair D = P.contragredient();
    const QRat Ld = global_L(D);
    r.residual = qr_residual(r.L, qr_mul(r.eps, qr_dual(Ld)));

    // L^S(s) = prod_{v in S} gamma_v L^S(1-s) with dual data
    const QRat LS = qr_div(r.L, ramified_L(P));
    const QRat LSd = qr_div(Ld, ramified_L(D));
    QRat g = QRat::one(LS.q());
    for (const auto& v : P.S()) g = qr_mul(g, gamma(side_local(P.tau, v), side_local(P.pi, v), global_psi(v)));
    r.partial_residual = qr_residual(LS, qr_mul(g, qr_dual(LSd)));
    r.pass = r.residual <= tol && r.partial_residual <= tol;
    for (const auto* side : {&P.tau, &P.pi})
        if (const auto* L = std::get_if<IsobaricLift>(side); L && L->group.is_classical())
            for (const auto& v : P.S())
                if (side_ramified_at(*side, v)) r.form = "complete+partial";
    return r;
}

/// L^S against the Taylor expansion of L divided by the factors at S.
inline CheckReport check_rationality(const GlobalPair& P, int D, double tol = 1e-9) {
    const auto euler = partial_L(P, D);
    const auto taylor = qr_div(global_L(P), ramified_L(P)).series(D);
    double res = 0;
    for (int i = 0; i <= D; ++i) res = std::max(res, std::abs(euler[i] - taylor[i]) / std::max(1.0, std::abs(taylor[i])));
    auto r = make_report("rationality", res, tol);
    r.details["degree_bound"] = D;
    return r;
}

/// Degree of the numerator of char_L_complete for primitive nontrivial chi:
/// deg M - 2 when chi is even, deg M - 1 when it is ramified at infinity.
inline int expected_numerator_degree(const GrossenChar& chi) {
    require(!chi.finite_trivial(), ErrorKind::PreconditionFailed, "trivial character has no numerator degree rule");
    return chi.modulus().degree() - (chi.even() ? 2 : 1);
}

struct RhZero {
    cplx s;
    double absT = 0;
    double deviation = 0;
};

struct RhReport {
    bool pass = true;
    double max_deviation = 0;
    std::vector<RhZero> zeros;
};

/// Zeros of the numerator of L against the circle |T| = q^{-1/2}.
inline RhReport verify_rh(const QRat& L, double tol = 1e-8) {
    RhReport r;
    const QPoly num = L.num();
    if (num.degree() <= 0) return r;
    const double q = L.q();
    const double target = 1.0 / std::sqrt(q);
    for (auto T : qr_roots(num)) {
        if (std::abs(T) == 0) continue; // T-power, not a zero in s
        RhZero z;
        z.absT = std::abs(T);
        z.s = cplx(-std::log(z.absT), -std::arg(T)) / std::log(q);
        z.deviation = std::abs(z.absT - target);
        r.max_deviation = std::max(r.max_deviation, z.deviation);
        r.zeros.push_back(z);
    }
    r.pass = r.max_deviation < tol;
    return r;
}

/// Synthetic L with a conjugate pair of roots at |T| = 1/(1.2 sqrt(q)), off
/// the critical circle; verify_rh must reject it.
inline QRat rh_negative_control(double q) {
    const cplx a = std::polar(1.2 * std::sqrt(q), 0.7);
    return QRat::factored(q, 1.0, 0, {a, std::conj(a)}, {});
}

inline std::string rh_tsv(const RhReport& r) {
    std::ostringstream s;
    s.precision(12);
    s << "re_s\tim_s\tabs_T\tdeviation\n";
    for (const auto& z : r.zeros) s << z.s.real() << "\t" << z.s.imag() << "\t" << z.absT << "\t" << z.deviation << "\n";
    return s.str();
}

/// Every squarefree monic modulus of degree <= dmax with its quadratic character.
inline std::vector<GrossenChar> quadratic_characters(const FieldPtr& F, int dmax) {
    std::vector<GrossenChar> out{GrossenChar::trivial(F)};
    for (int d = 1; d <= dmax; ++d) {
        const std::uint64_t count = ipow(F->q(), d);
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            const FqPoly M = monic_from_index(idx, d, F->q());
            const auto fac = factor(*F, M);
            bool sqfree = true;
            for (const auto& [P, e] : fac.factors) sqfree = sqfree && e == 1;
            if (sqfree) out.push_back(GrossenChar::quadratic(F, M));
        }
    }
    return out;
}

/// GL_1 x GL_1 pairs of quadratic characters whose moduli have total degree <= dmax.
inline std::vector<GlobalPair> quadratic_pair_corpus(const FieldPtr& F, int dmax) {
    const auto chars = quadratic_characters(F, dmax);
    std::vector<GlobalPair> out;
    for (const auto& a : chars)
        for (const auto& b : chars)
            if (a.modulus().degree() + b.modulus().degree() <= dmax) out.push_back({F, a, b});
    return out;
}

/// tau = chi on GL_1 against pi on Sp_2 lifting to chi1 + chi2 + chi1 chi2.
inline GlobalPair isobaric_instance(const FieldPtr& F) {
    const auto a = GrossenChar::quadratic(F, FqPoly({0, 1}));
    const auto b = GrossenChar::quadratic(F, FqPoly({1, 1}));
    const auto chi = GrossenChar::quadratic(F, FqPoly({2, 1}));
    return {F, chi, isobaric_sum({a, b, a * b}, GroupTag::sp(1))};
}

// --- JSON --------------------------------------------------------------------

inline nlohmann::json field_to_json(const FieldPtr& F) { return {{"p", F->p()}, {"f", F->f()}}; }

inline FieldPtr field_from_json(const nlohmann::json& j) {
    require(j.is_object() && j.contains("p"), ErrorKind::SchemaError, "field needs p");
    return make_field(j.at("p").get<int>(), j.value("f", 1));
}

inline nlohmann::json to_json(const GrossenChar& c) {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& x : c.comps())
        comps.push_back({{"place", place_to_json(x.place)}, {"unit_char", unit_char_to_json(x.unit)}});
    return {{"modulus", c.modulus().c}, {"components", comps}, {"inf_twist", cplx_to_json(c.beta())}};
}

inline GrossenChar grossen_from_json(const nlohmann::json& j, const FieldPtr& F) {
    require(j.is_object(), ErrorKind::SchemaError, "character must be an object");
    const cplx beta = j.contains("inf_twist") ? cplx_from_json(j.at("inf_twist")) : cplx(1.0);
    if (j.contains("quadratic")) {
        std::vector<Elem> m = j.at("quadratic").get<std::vector<Elem>>();
        return GrossenChar::quadratic(F, FqPoly(m), beta);
    }
    std::vector<GrossenChar::Comp> comps;
    if (j.contains("components"))
        for (const auto& x : j.at("components")) {
            require(x.contains("place") && x.contains("unit_char"), ErrorKind::SchemaError, "component needs place and unit_char");
            const Place v = place_from_json(x.at("place"), F);
            comps.push_back({v, unit_char_from_json(x.at("unit_char"), v)});
        }
    return GrossenChar::from_components(F, comps, beta);
}

inline nlohmann::json side_to_json(const GlobalSide& s) {
    if (const auto* c = std::get_if<GrossenChar>(&s)) return {{"kind", "grossen"}, {"chi", to_json(*c)}};
    const auto& L = std::get<IsobaricLift>(s);
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : L.constituents) cs.push_back(to_json(c));
    return {{"kind", "isobaric"}, {"group", tag_to_json(L.group)}, {"constituents", cs}};
}

inline GlobalSide side_from_json(const nlohmann::json& j, const FieldPtr& F) {
    require(j.is_object() && j.contains("kind"), ErrorKind::SchemaError, "side needs a kind");
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "grossen") {
        require(j.contains("chi"), ErrorKind::SchemaError, "grossen side needs chi");
        return grossen_from_json(j.at("chi"), F);
    }
    require(kind == "isobaric" && j.contains("group") && j.contains("constituents"), ErrorKind::SchemaError,
            "isobaric side needs group and constituents");
    std::vector<GrossenChar> cs;
    for (const auto& c : j.at("constituents")) cs.push_back(grossen_from_json(c, F));
    return isobaric_sum(cs, tag_from_json(j.at("group")));
}

inline nlohmann::json to_json(const GlobalPair& P) {
    nlohmann::json S = nlohmann::json::array();
    for (const auto& v : P.S()) S.push_back(place_to_json(v));
    return {{"field", field_to_json(P.field)}, {"tau", side_to_json(P.tau)}, {"psi", "residue"}, {"pi", side_to_json(P.pi)}, {"S", S}};
}

inline GlobalPair pair_from_json(const nlohmann::json& j) {
    require(j.is_object() && j.contains("field") && j.contains("tau") && j.contains("pi"), ErrorKind::SchemaError,
            "pair needs field, tau and pi");
    const FieldPtr F = field_from_json(j.at("field"));
    return {F, side_from_json(j.at("tau"), F), side_from_json(j.at("pi"), F)};
}

} // namespace lfunc
