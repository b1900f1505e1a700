#pragma once

// Group tags, Satake classes as eigenvalue multisets, and unramified factors.

#include <algorithm>
#include <complex>
#include <string>
#include <vector>

#include "lfunc/errors.hpp"
#include "lfunc/qseries.hpp"
#include "lfunc/tate.hpp"

namespace lfunc {

struct GroupTag {
    enum class Family { SOOdd, SOEven, Sp, GL };

    Family family = Family::GL;
    int rank = 1;

    static GroupTag gl(int n) { return {Family::GL, n}; }
    static GroupTag so_odd(int n) { return {Family::SOOdd, n}; }
    static GroupTag so_even(int n) { return {Family::SOEven, n}; }
    static GroupTag sp(int n) { return {Family::Sp, n}; }

    bool is_gl() const { return family == Family::GL; }
    bool is_classical() const { return !is_gl(); }

    /// size of the dual-group embedding: SO_{2n+1} -> Sp_{2n}, SO_{2n} -> SO_{2n}, Sp_{2n} -> SO_{2n+1}
    int dual_dim() const {
        switch (family) {
        case Family::SOOdd: return 2 * rank;
        case Family::SOEven: return 2 * rank;
        case Family::Sp: return 2 * rank + 1;
        case Family::GL: return rank;
        }
        return 0;
    }

    std::string family_name() const {
        switch (family) {
        case Family::SOOdd: return "SO_odd";
        case Family::SOEven: return "SO_even";
        case Family::Sp: return "Sp";
        case Family::GL: return "GL";
        }
        return "?";
    }
    std::string name() const { return family_name() + "(" + std::to_string(rank) + ")"; }

    friend bool operator==(const GroupTag&, const GroupTag&) = default;
};

inline GroupTag tag_from_json(const nlohmann::json& j) {
    require(j.is_object() && j.contains("family") && j.contains("rank"), ErrorKind::SchemaError,
            "group tag needs family and rank");
    const auto f = j.at("family").get<std::string>();
    const int n = j.at("rank").get<int>();
    GroupTag t;
    if (f == "SO_odd") t = GroupTag::so_odd(n);
    else if (f == "SO_even") t = GroupTag::so_even(n);
    else if (f == "Sp") t = GroupTag::sp(n);
    else if (f == "GL") t = GroupTag::gl(n);
    else fail(ErrorKind::SchemaError, "unknown family " + f);
    require(n >= (t.is_gl() ? 1 : 0), ErrorKind::SchemaError, "rank out of range");
    return t;
}

inline bool close(cplx a, cplx b, double tol = 1e-9) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(a)); }

class SatakeClass {
public:
    SatakeClass() = default;

    SatakeClass(GroupTag tag, Place v, std::vector<cplx> eigs) : tag_(tag), place_(std::move(v)), eigs_(std::move(eigs)) {
        require(static_cast<int>(eigs_.size()) == tag_.dual_dim(), ErrorKind::InvalidSatake,
                tag_.name() + " needs " + std::to_string(tag_.dual_dim()) + " eigenvalues");
        for (auto a : eigs_) require(a != cplx(0), ErrorKind::InvalidSatake, "zero eigenvalue");
        if (tag_.is_classical()) pairs_ = pair_up();
    }

    const GroupTag& tag() const { return tag_; }
    const Place& place() const { return place_; }
    const std::vector<cplx>& eigs() const { return eigs_; }

    /// One member of each inversion pair; the forced 1 of the Sp case is left out.
    const std::vector<cplx>& mus() const {
        require(tag_.is_classical(), ErrorKind::WrongTag, "pairing is defined for classical tags");
        return pairs_;
    }

    SatakeClass inverse() const {
        std::vector<cplx> e;
        for (auto a : eigs_) e.push_back(1.0 / a);
        return SatakeClass(tag_, place_, e);
    }

    bool tempered(double tol = 1e-9) const {
        for (auto a : eigs_)
            if (std::abs(std::abs(a) - 1.0) > tol) return false;
        return true;
    }

private:
    std::vector<cplx> pair_up() const {
        std::vector<bool> used(eigs_.size(), false);
        std::vector<cplx> mu;
        int ones = 0, minus = 0;
        for (std::size_t i = 0; i < eigs_.size(); ++i) {
            if (close(eigs_[i], 1.0)) {
                ++ones;
                used[i] = true;
            } else if (close(eigs_[i], -1.0)) {
                ++minus;
                used[i] = true;
            }
        }
        for (std::size_t i = 0; i < eigs_.size(); ++i) {
            if (used[i]) continue;
            used[i] = true;
            const cplx inv = 1.0 / eigs_[i];
            std::size_t best = eigs_.size();
            for (std::size_t j = 0; j < eigs_.size(); ++j) {
                if (used[j] || !close(eigs_[j], inv)) continue;
                if (best == eigs_.size() || std::abs(eigs_[j] - inv) < std::abs(eigs_[best] - inv)) best = j;
            }
            require(best < eigs_.size(), ErrorKind::InvalidSatake, "eigenvalues not closed under inversion");
            used[best] = true;
            mu.push_back(eigs_[i]);
        }
        const bool sp = tag_.family == GroupTag::Family::Sp;
        require(minus % 2 == 0, ErrorKind::InvalidSatake, "eigenvalue -1 must occur an even number of times");
        require(sp ? ones % 2 == 1 : ones % 2 == 0, ErrorKind::InvalidSatake,
                sp ? "Sp class needs eigenvalue 1 with odd multiplicity" : "eigenvalue 1 must occur an even number of times");
        for (int i = 0; i < ones / 2; ++i) mu.push_back(1.0);
        for (int i = 0; i < minus / 2; ++i) mu.push_back(-1.0);
        return mu;
    }

    GroupTag tag_;
    Place place_;
    std::vector<cplx> eigs_;
    std::vector<cplx> pairs_;
};

/// Classical class with given mu_i: {mu_i, mu_i^{-1}} plus 1 for Sp.
inline SatakeClass satake_from_mus(GroupTag tag, const Place& v, const std::vector<cplx>& mus) {
    require(static_cast<int>(mus.size()) == tag.rank, ErrorKind::RankMismatch, "need one parameter per rank");
    std::vector<cplx> e;
    if (tag.is_gl()) {
        e = mus;
    } else {
        for (auto m : mus) {
            e.push_back(m);
            e.push_back(1.0 / m);
        }
        if (tag.family == GroupTag::Family::Sp) e.push_back(1.0);
    }
    return SatakeClass(tag, v, e);
}

inline SatakeClass satake_from_principal_series(GroupTag tag, const std::vector<MultChar>& chars) {
    require(static_cast<int>(chars.size()) == tag.rank, ErrorKind::RankMismatch,
            tag.name() + " needs " + std::to_string(tag.rank) + " characters");
    require(!chars.empty() || tag.is_classical(), ErrorKind::RankMismatch, "GL needs at least one character");
    std::vector<cplx> mus;
    for (const auto& c : chars) {
        require(!c.ramified(), ErrorKind::RamifiedInput, "principal series character is ramified");
        require(c.place() == chars.front().place(), ErrorKind::PlaceMismatch, "characters at different places");
        mus.push_back(c.alpha());
    }
    require(!chars.empty(), ErrorKind::PreconditionFailed, "rank-0 class needs a place; use satake_from_mus");
    return satake_from_mus(tag, chars.front().place(), mus);
}

inline QRat unramified_L(const SatakeClass& A, const SatakeClass& B) {
    require(A.place() == B.place(), ErrorKind::PlaceMismatch, "Satake classes at different places");
    const Place& v = A.place();
    QRat r = QRat::one(base_q(v));
    for (auto a : A.eigs())
        for (auto b : B.eigs()) r = qr_mul(r, QRat::euler(base_q(v), a * b, v.deg));
    return r;
}

/// Product of abelian gamma factors over the eigenvalue pairs; cross-checked
/// against dual-L over L.
inline QRat unramified_gamma(const SatakeClass& A, const SatakeClass& B, const AddChar& psi) {
    require(A.place() == B.place(), ErrorKind::PlaceMismatch, "Satake classes at different places");
    require(psi.place == A.place(), ErrorKind::PlaceMismatch, "additive character at another place");
    require(psi.level() == 0, ErrorKind::PreconditionFailed, "unramified gamma needs psi of level 0");
    QRat g = QRat::one(base_q(A.place()));
    for (auto a : A.eigs())
        for (auto b : B.eigs()) g = qr_mul(g, tate_gamma(MultChar::unramified(A.place(), a * b), psi));
    const QRat direct = qr_div(qr_dual(unramified_L(A.inverse(), B.inverse())), unramified_L(A, B));
    const double res = qr_residual(g, direct);
    require(res <= 1e-10, ErrorKind::InternalError, "unramified gamma disagrees with dual-L/L: " + std::to_string(res));
    return g;
}

enum class SquareKind { Sym2, Ext2 };

inline QRat unramified_r_L(const SatakeClass& A, SquareKind r) {
    require(A.tag().is_gl(), ErrorKind::WrongTag, "symmetric and exterior squares need a GL class");
    const Place& v = A.place();
    const auto& e = A.eigs();
    QRat out = QRat::one(base_q(v));
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = (r == SquareKind::Sym2 ? i : i + 1); j < e.size(); ++j)
            out = qr_mul(out, QRat::euler(base_q(v), e[i] * e[j], v.deg));
    return out;
}

inline SatakeClass local_lift_unramified(const SatakeClass& A) {
    require(A.tag().is_classical(), ErrorKind::WrongTag, "lift is defined for classical tags");
    require(A.tag().dual_dim() >= 1, ErrorKind::WrongTag, "rank-0 class has an empty lift");
    return SatakeClass(GroupTag::gl(A.tag().dual_dim()), A.place(), A.eigs());
}

inline nlohmann::json to_json(const SatakeClass& A) {
    nlohmann::json e = nlohmann::json::array();
    for (auto a : A.eigs()) e.push_back(cplx_to_json(a));
    return {{"family", A.tag().family_name()}, {"rank", A.tag().rank}, {"place", place_to_json(A.place())}, {"eigs", e}};
}

inline SatakeClass satake_from_json(const nlohmann::json& j, const Place& v) {
    const GroupTag t = tag_from_json(j);
    require(j.contains("eigs") && j.at("eigs").is_array(), ErrorKind::SchemaError, "Satake class needs eigs");
    std::vector<cplx> e;
    for (const auto& x : j.at("eigs")) e.push_back(cplx_from_json(x));
    return SatakeClass(t, v, e);
}

} // namespace lfunc
