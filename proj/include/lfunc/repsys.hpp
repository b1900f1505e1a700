#pragma once

// Representation trees: characters, unramified Satake data, formal leaves with
// supplied factor tables, and parabolic induction in Langlands form.

#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lfunc/errors.hpp"
#include "lfunc/qseries.hpp"
#include "lfunc/satake.hpp"
#include "lfunc/tate.hpp"

namespace lfunc {

struct RepTree;
using Rep = std::shared_ptr<const RepTree>;

struct FactorTriple {
    QRat gamma, L, eps;
};

/// Data shared by a formal leaf and its contragredient.
struct FormalData {
    GroupTag tag;
    Place place;
    std::string name;
    std::map<std::string, FactorTriple> table;      // partner key -> factors
    std::map<std::string, FactorTriple> dual_table; // same for the contragredient
    MultChar central;
    Rep lift; // GL lift, may be null
    bool self_dual = false;
};

struct CharLeaf {
    MultChar chi;
};
struct SatakeLeaf {
    SatakeClass cls;
};
struct FormalLeaf {
    std::shared_ptr<const FormalData> data;
    bool dualized = false;

    const std::map<std::string, FactorTriple>& table() const { return dualized ? data->dual_table : data->table; }
};
struct GlPart {
    Rep rep;
    double r = 0;
};
struct Induced {
    std::vector<GlPart> parts;
    Rep anchor; // classical tags only, may be null (rank-0 anchor)
};

struct RepTree {
    GroupTag tag;
    Place place;
    std::variant<CharLeaf, SatakeLeaf, FormalLeaf, Induced> node;

    bool is_char() const { return std::holds_alternative<CharLeaf>(node); }
    bool is_satake() const { return std::holds_alternative<SatakeLeaf>(node); }
    bool is_formal() const { return std::holds_alternative<FormalLeaf>(node); }
    bool is_induced() const { return std::holds_alternative<Induced>(node); }
    const MultChar& chi() const { return std::get<CharLeaf>(node).chi; }
    const SatakeClass& cls() const { return std::get<SatakeLeaf>(node).cls; }
    const FormalLeaf& formal() const { return std::get<FormalLeaf>(node); }
    const Induced& induced() const { return std::get<Induced>(node); }
};

inline constexpr double kExpTol = 1e-12;

inline Rep make_char(const MultChar& chi) {
    return std::make_shared<const RepTree>(RepTree{GroupTag::gl(1), chi.place(), CharLeaf{chi}});
}

inline Rep make_satake(const SatakeClass& c) {
    return std::make_shared<const RepTree>(RepTree{c.tag(), c.place(), SatakeLeaf{c}});
}

inline Rep make_formal(std::shared_ptr<const FormalData> d, bool dualized = false) {
    require(d->tag.is_classical(), ErrorKind::InvalidTree, "formal leaves model classical groups");
    require(d->central.place() == d->place, ErrorKind::PlaceMismatch, "central character at another place");
    if (d->lift) {
        require(d->lift->tag.is_gl() && d->lift->tag.rank == d->tag.dual_dim(), ErrorKind::InvalidTree,
                "formal lift must be a GL_N representation of the dual dimension");
        require(d->lift->place == d->place, ErrorKind::PlaceMismatch, "formal lift at another place");
    }
    const GroupTag t = d->tag;
    const Place v = d->place;
    return std::make_shared<const RepTree>(RepTree{t, v, FormalLeaf{std::move(d), dualized}});
}

inline Rep make_induced(GroupTag tag, std::vector<GlPart> parts, Rep anchor = nullptr) {
    require(!parts.empty() || anchor, ErrorKind::InvalidTree, "induced representation needs data");
    const Place v = parts.empty() ? anchor->place : parts.front().rep->place;
    int total = 0;
    for (const auto& p : parts) {
        require(p.rep != nullptr, ErrorKind::InvalidTree, "null induction part");
        require(p.rep->tag.is_gl(), ErrorKind::InvalidTree, "induction parts must be GL representations");
        require(p.rep->place == v, ErrorKind::PlaceMismatch, "induction data at different places");
        total += p.rep->tag.rank;
    }
    if (tag.is_gl()) {
        require(!anchor, ErrorKind::InvalidTree, "GL induction has no anchor");
        for (std::size_t i = 1; i < parts.size(); ++i)
            require(parts[i].r <= parts[i - 1].r + kExpTol, ErrorKind::InvalidTree, "GL exponents must be nonincreasing");
    } else {
        if (anchor) {
            require(anchor->tag.family == tag.family, ErrorKind::InvalidTree, "anchor must be of the same family");
            require(anchor->place == v, ErrorKind::PlaceMismatch, "anchor at another place");
            total += anchor->tag.rank;
        }
        bool all_zero = true;
        for (const auto& p : parts) all_zero = all_zero && std::abs(p.r) <= kExpTol;
        if (!all_zero) {
            const std::size_t d = parts.size();
            for (std::size_t i = 0; i < d; ++i) {
                const double r = parts[i].r;
                const bool last = i + 1 == d;
                if (last && tag.family == GroupTag::Family::SOEven && r < 0) {
                    require(d >= 2 ? -r < parts[i - 1].r - kExpTol : true, ErrorKind::InvalidTree,
                            "exponents must satisfy 0 < |r_d| < r_{d-1}");
                    require(-r > kExpTol, ErrorKind::InvalidTree, "exponents must be nonzero");
                    continue;
                }
                require(r > kExpTol, ErrorKind::InvalidTree, "classical exponents must be positive");
                if (i > 0) require(r < parts[i - 1].r - kExpTol, ErrorKind::InvalidTree, "exponents must be strictly decreasing");
            }
        }
    }
    require(total == tag.rank, ErrorKind::RankMismatch,
            "ranks of the induction data add to " + std::to_string(total) + ", expected " + std::to_string(tag.rank));
    return std::make_shared<const RepTree>(RepTree{tag, v, Induced{std::move(parts), std::move(anchor)}});
}

inline Rep trivial_char(const Place& v) { return make_char(MultChar::unramified(v, 1.0)); }

inline bool is_tempered(const Rep& r) {
    if (r->is_char()) return r->chi().unitary();
    if (r->is_satake()) return r->cls().tempered();
    if (r->is_formal()) return true;
    const auto& I = r->induced();
    for (const auto& p : I.parts)
        if (std::abs(p.r) > kExpTol || !is_tempered(p.rep)) return false;
    return !I.anchor || is_tempered(I.anchor);
}

// --- contragredient, central character, lift ---------------------------------

inline Rep contragredient(const Rep& r) {
    if (r->is_char()) return make_char(r->chi().inverse());
    if (r->is_satake()) return make_satake(r->cls().inverse());
    if (r->is_formal()) {
        const auto& f = r->formal();
        if (f.data->self_dual) return r;
        require(!f.data->dual_table.empty() || f.data->lift, ErrorKind::MissingDualData,
                "formal leaf " + f.data->name + " has no contragredient data");
        return make_formal(f.data, !f.dualized);
    }
    const auto& I = r->induced();
    std::vector<GlPart> parts;
    if (r->tag.is_gl()) {
        for (auto it = I.parts.rbegin(); it != I.parts.rend(); ++it) parts.push_back({contragredient(it->rep), -it->r});
        return make_induced(r->tag, std::move(parts));
    }
    // Weyl conjugation brings tilde(tau_i)|.|^{-r_i} back to tau_i|.|^{r_i}
    return make_induced(r->tag, I.parts, I.anchor ? contragredient(I.anchor) : nullptr);
}

inline MultChar central_character(const Rep& r) {
    const Place& v = r->place;
    if (r->is_char()) return r->chi();
    if (r->is_satake()) {
        cplx prod = 1.0;
        for (auto a : r->cls().eigs()) prod *= a;
        if (r->tag.is_classical()) prod = std::abs(prod - 1.0) < 1e-9 ? 1.0 : prod;
        return MultChar::unramified(v, prod);
    }
    if (r->is_formal()) {
        const auto& f = r->formal();
        return f.dualized ? f.data->central.inverse() : f.data->central;
    }
    const auto& I = r->induced();
    if (r->tag.is_classical())
        return I.anchor ? central_character(I.anchor) : MultChar::unramified(v, 1.0);
    MultChar w = MultChar::unramified(v, 1.0);
    for (const auto& p : I.parts) w = w * central_character(p.rep).twist(p.r * p.rep->tag.rank);
    return w;
}

/// GL_N representation with the same factors against GL partners. Returns null
/// for the rank-0 orthogonal anchor, whose lift is empty.
inline Rep local_lift(const Rep& r) {
    require(r->tag.is_classical(), ErrorKind::WrongTag, "local lift needs a classical representation");
    const Place& v = r->place;
    if (r->is_satake()) {
        if (r->tag.dual_dim() == 0) return nullptr;
        return make_satake(local_lift_unramified(r->cls()));
    }
    if (r->is_formal()) {
        const auto& f = r->formal();
        require(f.data->lift != nullptr, ErrorKind::MissingLiftData, "formal leaf " + f.data->name + " has no lift");
        return f.dualized ? contragredient(f.data->lift) : f.data->lift;
    }
    require(r->is_induced(), ErrorKind::InvalidTree, "unexpected leaf in a classical tree");
    const auto& I = r->induced();
    std::vector<GlPart> parts = I.parts;
    Rep T0 = I.anchor ? local_lift(I.anchor) : nullptr;
    if (!I.anchor && r->tag.family == GroupTag::Family::Sp) T0 = trivial_char(v);
    if (T0) parts.push_back({T0, 0.0});
    for (auto it = I.parts.rbegin(); it != I.parts.rend(); ++it) parts.push_back({contragredient(it->rep), -it->r});
    return make_induced(GroupTag::gl(r->tag.dual_dim()), std::move(parts));
}

/// chi |det|^{s0} applied leaf by leaf.
inline Rep twist_gl(const Rep& r, double s0) {
    require(r->tag.is_gl(), ErrorKind::WrongTag, "determinant twist needs a GL representation");
    if (r->is_char()) return make_char(r->chi().twist(s0));
    if (r->is_satake()) {
        const double f = std::pow(static_cast<double>(r->place.qv()), -s0);
        std::vector<cplx> e;
        for (auto a : r->cls().eigs()) e.push_back(a * f);
        return make_satake(SatakeClass(r->tag, r->place, e));
    }
    require(r->is_induced(), ErrorKind::InvalidTree, "unexpected GL leaf");
    std::vector<GlPart> parts;
    for (const auto& p : r->induced().parts) parts.push_back({twist_gl(p.rep, s0), p.r});
    return make_induced(r->tag, std::move(parts));
}

// --- JSON --------------------------------------------------------------------

inline nlohmann::json tag_to_json(const GroupTag& t) { return {{"family", t.family_name()}, {"rank", t.rank}}; }

inline nlohmann::json to_json(const Rep& r) {
    if (r->is_char()) return {{"kind", "char"}, {"chi", to_json(r->chi())}};
    if (r->is_satake()) return {{"kind", "satake"}, {"class", to_json(r->cls())}};
    if (r->is_formal()) {
        const auto& f = r->formal();
        return {{"kind", "formal"}, {"name", f.data->name}, {"dual", f.dualized && !f.data->self_dual},
                {"family", r->tag.family_name()}, {"rank", r->tag.rank}, {"place", place_to_json(r->place)}};
    }
    const auto& I = r->induced();
    nlohmann::json parts = nlohmann::json::array();
    for (const auto& p : I.parts) parts.push_back({{"rep", to_json(p.rep)}, {"r", p.r}});
    nlohmann::json j = {{"kind", "induced"}, {"family", r->tag.family_name()}, {"rank", r->tag.rank}, {"parts", parts}};
    j["anchor"] = I.anchor ? to_json(I.anchor) : nlohmann::json(nullptr);
    return j;
}

/// Canonical serialization; formal leaves are keyed by name, not by table.
inline std::string canonical_key(const Rep& r) { return to_json(r).dump(); }

inline Rep rep_from_json(const nlohmann::json& j, const FieldPtr& F);

inline std::map<std::string, FactorTriple> table_from_json(const nlohmann::json& arr, const FieldPtr& F) {
    std::map<std::string, FactorTriple> out;
    require(arr.is_array(), ErrorKind::SchemaError, "factor table must be an array");
    for (const auto& e : arr) {
        require(e.contains("partner") && e.contains("gamma") && e.contains("L") && e.contains("eps"),
                ErrorKind::SchemaError, "table entry needs partner, gamma, L and eps");
        out[canonical_key(rep_from_json(e.at("partner"), F))] =
            FactorTriple{qrat_from_json(e.at("gamma")), qrat_from_json(e.at("L")), qrat_from_json(e.at("eps"))};
    }
    return out;
}

inline void validate_table(const std::map<std::string, FactorTriple>& t, const std::string& name) {
    for (const auto& [k, f] : t) {
        require(is_monomial(f.eps).is_monomial, ErrorKind::EpsNotMonomial, "formal leaf " + name + ": eps is not a monomial");
        const QPoly den = f.L.den();
        require(f.L.zeros().empty() && f.L.tpow() == 0 && std::abs(f.L.coeff() - 1.0) < 1e-9 &&
                    std::abs(den.c[0] - 1.0) < 1e-9,
                ErrorKind::InvalidTree, "formal leaf " + name + ": L must be 1/P with P(0) = 1");
    }
}

inline Rep rep_from_json(const nlohmann::json& j, const FieldPtr& F) {
    require(j.is_object() && j.contains("kind"), ErrorKind::SchemaError, "representation needs a kind");
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "char") {
        require(j.contains("chi"), ErrorKind::SchemaError, "char leaf needs chi");
        return make_char(multchar_from_json(j.at("chi"), F));
    }
    if (kind == "satake") {
        require(j.contains("class"), ErrorKind::SchemaError, "satake leaf needs class");
        const auto& c = j.at("class");
        require(c.contains("place"), ErrorKind::SchemaError, "Satake class needs a place");
        return make_satake(satake_from_json(c, place_from_json(c.at("place"), F)));
    }
    if (kind == "formal") {
        auto d = std::make_shared<FormalData>();
        d->tag = tag_from_json(j);
        require(j.contains("place") && j.contains("name"), ErrorKind::SchemaError, "formal leaf needs place and name");
        d->place = place_from_json(j.at("place"), F);
        d->name = j.at("name").get<std::string>();
        d->central = j.contains("central") ? multchar_from_json(j.at("central"), F) : MultChar::unramified(d->place, 1.0);
        d->self_dual = j.value("self_dual", false);
        if (j.contains("table")) d->table = table_from_json(j.at("table"), F);
        if (j.contains("dual_table")) d->dual_table = table_from_json(j.at("dual_table"), F);
        if (j.contains("lift") && !j.at("lift").is_null()) d->lift = rep_from_json(j.at("lift"), F);
        validate_table(d->table, d->name);
        validate_table(d->dual_table, d->name);
        return make_formal(d, j.value("dual", false));
    }
    if (kind == "induced") {
        const GroupTag t = tag_from_json(j);
        require(j.contains("parts") && j.at("parts").is_array(), ErrorKind::SchemaError, "induced needs parts");
        std::vector<GlPart> parts;
        for (const auto& p : j.at("parts")) {
            require(p.contains("rep"), ErrorKind::SchemaError, "part needs rep");
            parts.push_back({rep_from_json(p.at("rep"), F), p.value("r", 0.0)});
        }
        Rep anchor = (j.contains("anchor") && !j.at("anchor").is_null()) ? rep_from_json(j.at("anchor"), F) : nullptr;
        return make_induced(t, std::move(parts), std::move(anchor));
    }
    fail(ErrorKind::SchemaError, "unknown representation kind " + kind);
}

} // namespace lfunc
