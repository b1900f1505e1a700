#pragma once

// gamma through multiplicativity, tempered and general L and epsilon.

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "lfunc/errors.hpp"
#include "lfunc/qseries.hpp"
#include "lfunc/repsys.hpp"
#include "lfunc/tate.hpp"

namespace lfunc {

namespace detail {

inline bool expandable(const Rep& r) { return r->is_induced() || r->is_satake(); }

/// One level of unfolding: gamma(r x Y) = prod gamma(piece x Y) shifted by r_piece.
inline std::vector<GlPart> unfold(const Rep& r) {
    std::vector<GlPart> out;
    if (r->is_satake()) {
        for (auto a : r->cls().eigs()) out.push_back({make_char(MultChar::unramified(r->place, a)), 0.0});
        return out;
    }
    if (r->is_formal()) return {{local_lift(r), 0.0}};
    const auto& I = r->induced();
    if (r->tag.is_gl()) return I.parts;
    for (const auto& p : I.parts) out.push_back(p);
    for (const auto& p : I.parts) out.push_back({contragredient(p.rep), -p.r});
    if (I.anchor)
        out.push_back({I.anchor, 0.0});
    else if (r->tag.family == GroupTag::Family::Sp)
        out.push_back({trivial_char(r->place), 0.0});
    return out;
}

inline const FactorTriple* lookup(const Rep& formal, const Rep& partner) {
    if (!formal->is_formal()) return nullptr;
    const auto& t = formal->formal().table();
    auto it = t.find(canonical_key(partner));
    return it == t.end() ? nullptr : &it->second;
}

} // namespace detail

inline QRat gamma(const Rep& tau, const Rep& pi, const AddChar& psi);

/// h: the dimension of the dual-group embedding.
inline int psi_exponent(const GroupTag& t) { return t.dual_dim(); }

/// omega_tau(a)^h omega_pi(a)^l |a|^{hl(s-1/2)} for psi = psi_std^a.
inline QRat psi_change(const Rep& tau, const Rep& pi, const AddChar& psi) {
    const int h = psi_exponent(tau->tag), l = psi_exponent(pi->tag);
    const int j = psi.val;
    const cplx wt = central_character(tau).value(psi.twist, j);
    const cplx wp = central_character(pi).value(psi.twist, j);
    const double qv = static_cast<double>(psi.place.qv());
    const cplx c = std::pow(wt, l) * std::pow(wp, h) * std::pow(qv, 0.5 * j * h * l);
    return QRat::monomial(base_q(psi.place), c, j * h * l * psi.place.deg);
}

/// prod over pieces of the expanded side of shift(gamma(piece x other), r)
inline QRat gamma_unfolded(const Rep& side, const Rep& other, const AddChar& psi) {
    QRat g = QRat::one(base_q(psi.place));
    for (const auto& p : detail::unfold(side)) {
        if (!p.rep) continue;
        g = qr_mul(g, qr_shift(gamma(p.rep, other, psi), p.r));
    }
    return g;
}

inline QRat gamma(const Rep& tau_in, const Rep& pi_in, const AddChar& psi) {
    require(tau_in->place == pi_in->place, ErrorKind::PlaceMismatch, "gamma: representations at different places");
    require(psi.place == tau_in->place, ErrorKind::PlaceMismatch, "gamma: additive character at another place");
    Rep tau = tau_in, pi = pi_in;
    if (canonical_key(pi) < canonical_key(tau)) std::swap(tau, pi);

    const FactorTriple* f = detail::lookup(tau, pi);
    if (!f) f = detail::lookup(pi, tau);
    if (f) {
        // tables are stated for the standard character
        return qr_mul(f->gamma, psi_change(tau, pi, psi));
    }

    if (detail::expandable(tau)) return gamma_unfolded(tau, pi, psi);
    if (detail::expandable(pi)) return gamma_unfolded(pi, tau, psi);
    if (tau->is_formal() && tau->formal().data->lift) return gamma_unfolded(tau, pi, psi);
    if (pi->is_formal() && pi->formal().data->lift) return gamma_unfolded(pi, tau, psi);
    if (tau->is_char() && pi->is_char()) return tate_gamma(tau->chi() * pi->chi(), psi);
    const std::string who = tau->is_formal() ? tau->formal().data->name : pi->formal().data->name;
    fail(ErrorKind::MissingFormalPairing, "formal leaf " + who + " has no factors against its partner and no lift");
}

inline AddChar psi_for(const Rep& r) { return std_psi(r->place); }

inline QRat L_tempered(const Rep& tau, const Rep& pi) {
    require(is_tempered(tau) && is_tempered(pi), ErrorKind::NotTempered, "L_tempered needs tempered representations");
    if (const auto* f = detail::lookup(tau, pi)) return f->L;
    if (const auto* f = detail::lookup(pi, tau)) return f->L;
    const QRat g = gamma(tau, pi, psi_for(tau));
    return QRat::factored(g.q(), 1.0, 0, {}, g.zeros());
}

inline QRat eps_tempered(const Rep& tau, const Rep& pi, const AddChar& psi) {
    const QRat g = gamma(tau, pi, psi);
    const QRat L = L_tempered(tau, pi);
    const QRat Ld = qr_dual(L_tempered(contragredient(tau), contragredient(pi)));
    const QRat e = qr_div(qr_mul(g, L), Ld);
    const auto m = is_monomial(e);
    require(m.is_monomial, ErrorKind::EpsNotMonomial,
            "epsilon is not a monomial (" + std::to_string(e.zeros().size()) + " zeros, " +
                std::to_string(e.poles().size()) + " poles left)");
    return QRat::monomial(e.q(), m.coeff, m.exponent);
}

/// Langlands data: tempered pieces with their exponents. Non-unitary
/// characters and non-tempered Satake classes are split into unitary data
/// plus a real shift.
inline std::vector<GlPart> langlands_pieces(const Rep& r) {
    std::vector<GlPart> out;
    if (r->is_char()) {
        auto [c0, s] = r->chi().unitary_split();
        out.push_back({make_char(c0), s});
        return out;
    }
    if (r->is_formal()) return {{r, 0.0}};
    if (r->is_satake()) {
        const auto& C = r->cls();
        const double lq = std::log(static_cast<double>(r->place.qv()));
        if (C.tempered()) return {{r, 0.0}};
        if (r->tag.is_gl()) {
            for (auto a : C.eigs()) out.push_back({make_char(MultChar::unramified(r->place, a / std::abs(a))), -std::log(std::abs(a)) / lq});
            return out;
        }
        std::vector<cplx> rest;
        for (auto m : C.mus()) {
            if (std::abs(std::abs(m) - 1.0) <= 1e-9) {
                rest.push_back(m);
                continue;
            }
            const double s = -std::log(std::abs(m)) / lq;
            const Rep c = make_char(MultChar::unramified(r->place, m / std::abs(m)));
            out.push_back({c, s});
            out.push_back({contragredient(c), -s});
        }
        const GroupTag t{r->tag.family, static_cast<int>(rest.size())};
        if (t.dual_dim() > 0) out.push_back({make_satake(satake_from_mus(t, r->place, rest)), 0.0});
        return out;
    }
    const auto& I = r->induced();
    auto add_shifted = [&](const Rep& x, double s) {
        for (const auto& p : langlands_pieces(x)) out.push_back({p.rep, p.r + s});
    };
    for (const auto& p : I.parts) add_shifted(p.rep, p.r);
    if (r->tag.is_gl()) return out;
    for (const auto& p : I.parts) add_shifted(contragredient(p.rep), -p.r);
    if (I.anchor)
        add_shifted(I.anchor, 0.0);
    else if (r->tag.family == GroupTag::Family::Sp)
        out.push_back({trivial_char(r->place), 0.0});
    return out;
}

inline QRat L_general(const Rep& tau, const Rep& pi) {
    require(tau->place == pi->place, ErrorKind::PlaceMismatch, "L: representations at different places");
    QRat L = QRat::one(base_q(tau->place));
    for (const auto& a : langlands_pieces(tau))
        for (const auto& b : langlands_pieces(pi)) L = qr_mul(L, qr_shift(L_tempered(a.rep, b.rep), a.r + b.r));
    return L;
}

inline QRat eps_general(const Rep& tau, const Rep& pi, const AddChar& psi) {
    require(tau->place == pi->place, ErrorKind::PlaceMismatch, "eps: representations at different places");
    QRat e = QRat::one(base_q(tau->place));
    for (const auto& a : langlands_pieces(tau))
        for (const auto& b : langlands_pieces(pi)) e = qr_mul(e, qr_shift(eps_tempered(a.rep, b.rep, psi), a.r + b.r));
    return e;
}

struct LocalFactors {
    QRat gamma, L, eps;
    bool eps_monomial = true;
};

inline LocalFactors local_factors(const Rep& tau, const Rep& pi, const AddChar& psi) {
    LocalFactors f{gamma(tau, pi, psi), L_general(tau, pi), eps_general(tau, pi, psi)};
    f.eps_monomial = is_monomial(f.eps).is_monomial;
    return f;
}

} // namespace lfunc
