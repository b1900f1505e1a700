#pragma once

// Property checks on local factors. Each returns a report instead of throwing
// when the property fails; preconditions still throw.

#include <string>

#include <json.hpp>

#include "lfunc/factors.hpp"
#include "lfunc/repsys.hpp"
#include "lfunc/satake.hpp"

namespace lfunc {

struct CheckReport {
    std::string name;
    bool pass = false;
    double residual = 0;
    nlohmann::json details = nlohmann::json::object();
};

inline nlohmann::json to_json(const CheckReport& r) {
    return {{"check", r.name}, {"pass", r.pass}, {"residual", r.residual}, {"details", r.details}};
}

inline CheckReport make_report(std::string name, double res, double tol) {
    CheckReport r;
    r.name = std::move(name);
    r.residual = res;
    r.pass = res <= tol;
    r.details["tol"] = tol;
    return r;
}

/// gamma(s, tau x pi, psi) gamma(1 - s, tilde tau x tilde pi, psi-bar) = 1
inline CheckReport check_local_fe(const Rep& tau, const Rep& pi, const AddChar& psi, double tol = 1e-10) {
    const QRat g = gamma(tau, pi, psi);
    const QRat gd = qr_dual(gamma(contragredient(tau), contragredient(pi), psi.conj()));
    return make_report("local_fe", qr_residual(qr_mul(g, gd), QRat::one(g.q())), tol);
}

/// gamma(psi^a) = omega_tau(a)^h omega_pi(a)^l |a|^{hl(s-1/2)} gamma(psi) for a = u P^j
inline CheckReport check_psi_dependence(const Rep& tau, const Rep& pi, const AddChar& psi, const FqPoly& u, int j,
                                        double tol = 1e-10) {
    const AddChar psi_a = psi.twisted(u, j);
    const QRat lhs = gamma(tau, pi, psi_a);
    // the factor relating psi^a to psi is the same monomial as psi_std^a to psi_std
    AddChar rel = std_psi(psi.place).twisted(u, j);
    const QRat rhs = qr_mul(gamma(tau, pi, psi), psi_change(tau, pi, rel));
    auto r = make_report("psi_dependence", qr_residual(lhs, rhs), tol);
    r.details["h"] = psi_exponent(tau->tag);
    r.details["l"] = psi_exponent(pi->tag);
    r.details["val"] = j;
    return r;
}

/// gamma(tau |det|^{s0} x pi) computed on twisted leaves against the shift of gamma(tau x pi)
inline CheckReport check_unram_twist(const Rep& tau, const Rep& pi, const AddChar& psi, double s0, double tol = 1e-10) {
    const QRat lhs = gamma(twist_gl(tau, s0), pi, psi);
    const QRat rhs = qr_shift(gamma(tau, pi, psi), s0);
    auto r = make_report("unram_twist", qr_residual(lhs, rhs), tol);
    r.details["s0"] = s0;
    return r;
}

inline CheckReport check_commutativity(const Rep& tau, const Rep& pi, const AddChar& psi, double tol = 1e-10) {
    return make_report("commutativity", qr_residual(gamma(tau, pi, psi), gamma(pi, tau, psi)), tol);
}

/// gamma(chi1 x chi2) against the abelian gamma of chi1 chi2 and, when both are
/// unramified, against the GL_1 x GL_1 Satake tensor.
inline CheckReport check_cft(const MultChar& c1, const MultChar& c2, const AddChar& psi, double tol = 1e-10) {
    const QRat g = gamma(make_char(c1), make_char(c2), psi);
    double res = qr_residual(g, tate_gamma(c1 * c2, psi));
    if (!c1.ramified() && !c2.ramified() && psi.level() == 0) {
        const SatakeClass A(GroupTag::gl(1), c1.place(), {c1.alpha()}), B(GroupTag::gl(1), c2.place(), {c2.alpha()});
        res = std::max(res, qr_residual(g, unramified_gamma(A, B, psi)));
    }
    return make_report("cft", res, tol);
}

/// gamma(eta x pi1) = gamma(eta x pi2) for highly ramified eta and principal
/// series pi1, pi2 with equal central characters.
inline CheckReport check_stability_ps(const MultChar& eta, const Rep& pi1, const Rep& pi2, const AddChar& psi,
                                      int threshold = 3, double tol = 1e-10) {
    require(eta.cond() >= threshold, ErrorKind::PreconditionFailed,
            "eta has conductor " + std::to_string(eta.cond()) + " below the threshold " + std::to_string(threshold));
    require(pi1->tag == pi2->tag, ErrorKind::PreconditionFailed, "pi1 and pi2 must have the same group");
    require(central_character(pi1).approx_equal(central_character(pi2)), ErrorKind::PreconditionFailed,
            "pi1 and pi2 must have the same central character");
    const Rep e = make_char(eta);
    auto r = make_report("stability", qr_residual(gamma(e, pi1, psi), gamma(e, pi2, psi)), tol);
    r.details["threshold"] = threshold;
    r.details["cond_eta"] = eta.cond();
    return r;
}

/// epsilon from gamma and L is a monomial
inline CheckReport check_eps_monomial(const Rep& tau, const Rep& pi, const AddChar& psi) {
    CheckReport r;
    r.name = "eps_monomial";
    try {
        const QRat e = eps_general(tau, pi, psi);
        r.pass = is_monomial(e).is_monomial;
        r.details["tpow"] = e.tpow();
    } catch (const Error& err) {
        if (err.kind() != ErrorKind::EpsNotMonomial) throw;
        r.pass = false;
        r.details["error"] = err.what();
    }
    r.residual = r.pass ? 0.0 : 1.0;
    return r;
}

/// gamma = eps dual(L(tilde)) / L for the general constructors
inline CheckReport check_gamma_shape(const Rep& tau, const Rep& pi, const AddChar& psi, double tol = 1e-9) {
    const QRat g = gamma(tau, pi, psi);
    const QRat rhs = qr_div(qr_mul(eps_general(tau, pi, psi), qr_dual(L_general(contragredient(tau), contragredient(pi)))),
                            L_general(tau, pi));
    return make_report("gamma_shape", qr_residual(g, rhs), tol);
}

/// gamma(tau x rho) = gamma(lift(tau) x rho)
inline CheckReport check_lift(const Rep& tau, const Rep& rho, const AddChar& psi, double tol = 1e-10) {
    const Rep T = local_lift(tau);
    const QRat lhs = gamma(tau, rho, psi);
    const QRat rhs = T ? gamma(T, rho, psi) : QRat::one(lhs.q());
    return make_report("lift", qr_residual(lhs, rhs), tol);
}

/// recursion on Satake leaves against the tensor-determinant formula
inline CheckReport check_two_path(const SatakeClass& A, const SatakeClass& B, const AddChar& psi, double tol = 1e-9) {
    const QRat rec = gamma(make_satake(A), make_satake(B), psi);
    const QRat det = qr_div(qr_dual(unramified_L(A.inverse(), B.inverse())), unramified_L(A, B));
    return make_report("two_path", qr_residual(rec, det), tol);
}

/// direct recursion against one manual level of unfolding on either side
inline CheckReport check_unfolding(const Rep& tau, const Rep& pi, const AddChar& psi, double tol = 1e-9) {
    const QRat direct = gamma(tau, pi, psi);
    double res = 0;
    if (detail::expandable(tau)) res = std::max(res, qr_residual(direct, gamma_unfolded(tau, pi, psi)));
    if (detail::expandable(pi)) res = std::max(res, qr_residual(direct, gamma_unfolded(pi, tau, psi)));
    return make_report("unfolding", res, tol);
}

} // namespace lfunc
