#pragma once

// Seeded property suite over random local instances. Each property draws its
// own stream from the seed so that case lists do not depend on which other
// properties ran.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "lfunc/cases.hpp"
#include "lfunc/checks.hpp"

namespace lfunc {

struct PropertyResult {
    std::string name;
    int cases = 0;
    int failures = 0;
    double max_residual = 0;
    std::vector<nlohmann::json> failed; // first few failing cases
};

inline nlohmann::json to_json(const PropertyResult& r) {
    nlohmann::json f = r.failed;
    return {{"check", r.name}, {"pass", r.failures == 0}, {"cases", r.cases}, {"failures", r.failures},
            {"residual", r.max_residual}, {"failed_cases", f}};
}

namespace detail {

inline std::uint64_t stream_seed(std::uint64_t seed, const std::string& name) {
    std::uint64_t h = 1469598103934665603ull; // FNV-1a
    for (unsigned char c : name) h = (h ^ c) * 1099511628211ull;
    return seed ^ h;
}

inline AddChar random_psi(CaseGen& G, const Place& v) {
    if (G.coin(0.5)) return std_psi(v);
    return std_psi(v).twisted(G.unit(v), G.uniform(-1, 1));
}

/// Pair of trees whose combined dual dimension stays small.
inline std::pair<Rep, Rep> random_pair(CaseGen& G, const Place& v, bool tempered, int max_dim = 4) {
    const GroupTag a = G.tag(max_dim), b = G.tag(max_dim);
    return {G.tree(a, v, tempered), G.tree(b, v, tempered)};
}

inline Rep principal_series(const Place& v, const std::vector<MultChar>& cs) {
    std::vector<GlPart> parts;
    for (const auto& c : cs) parts.push_back({make_char(c), 0.0});
    return make_induced(GroupTag::gl(static_cast<int>(cs.size())), parts);
}

/// One case of the named property; the report carries the residual.
inline CheckReport run_case(const std::string& name, CaseGen& G) {
    const Place v = G.place();
    if (name == "local_fe") {
        auto [a, b] = random_pair(G, v, G.coin());
        return check_local_fe(a, b, random_psi(G, v));
    }
    if (name == "psi_dependence") {
        auto [a, b] = random_pair(G, v, G.coin());
        return check_psi_dependence(a, b, random_psi(G, v), G.unit(v), G.uniform(-1, 2));
    }
    if (name == "unram_twist") {
        const Rep a = G.gl_tree(v, G.uniform(1, 3), G.coin());
        const Rep b = G.tree(G.tag(4), v, G.coin());
        return check_unram_twist(a, b, random_psi(G, v), G.real(-1.0, 1.0));
    }
    if (name == "commutativity") {
        auto [a, b] = random_pair(G, v, G.coin());
        return check_commutativity(a, b, random_psi(G, v));
    }
    if (name == "cft") {
        const bool unitary = G.coin();
        const MultChar c1 = G.character(v, 2, unitary), c2 = G.character(v, 2, unitary);
        return check_cft(c1, c2, random_psi(G, v));
    }
    if (name == "stability") {
        MultChar eta = G.character(v, 3);
        while (eta.cond() < 3) eta = G.character(v, 3);
        const int n = G.uniform(2, 3);
        std::vector<MultChar> c1, c2;
        for (int i = 0; i < n; ++i) c1.push_back(G.character(v, 1));
        for (int i = 0; i + 1 < n; ++i) c2.push_back(G.character(v, 1));
        // last character of the second series fixes the central character
        MultChar last = c1.front();
        for (int i = 1; i < n; ++i) last = last * c1[i];
        for (const auto& c : c2) last = last * c.inverse();
        c2.push_back(last);
        return check_stability_ps(eta, principal_series(v, c1), principal_series(v, c2), random_psi(G, v));
    }
    if (name == "eps_monomial") {
        auto [a, b] = random_pair(G, v, true);
        return check_eps_monomial(a, b, random_psi(G, v));
    }
    if (name == "two_path") {
        GroupTag a = G.tag(6), b = G.tag(6);
        while (a.dual_dim() * b.dual_dim() > 36) b = G.tag(6);
        const bool tempered = G.coin();
        const SatakeClass A = G.satake(a, v, tempered), B = G.satake(b, v, tempered);
        const AddChar psi = std_psi(v);
        auto r = check_two_path(A, B, psi);
        // the abelian product path asserts internally against the same formula
        const double res = qr_residual(unramified_gamma(A, B, psi), gamma(make_satake(A), make_satake(B), psi));
        r.residual = std::max(r.residual, res);
        r.pass = r.pass && res <= 1e-9;
        r.details["MN"] = a.dual_dim() * b.dual_dim();
        return r;
    }
    if (name == "unfolding") {
        // total rank at most 6 with at least one induced side
        for (;;) {
            const GroupTag a = G.tag(6), b = G.tag(6);
            if (a.rank + b.rank > 6) continue;
            const bool tempered = G.coin();
            const Rep x = G.tree(a, v, tempered), y = G.tree(b, v, tempered);
            if (!x->is_induced() && !y->is_induced()) continue;
            return check_unfolding(x, y, random_psi(G, v));
        }
    }
    if (name == "lift") {
        GroupTag t = G.tag(5);
        while (!t.is_classical()) t = G.tag(5);
        const Rep tau = make_satake(G.satake(t, v, G.coin()));
        const Rep rho = make_satake(G.satake(GroupTag::gl(G.uniform(1, 3)), v, G.coin()));
        return check_lift(tau, rho, random_psi(G, v));
    }
    fail(ErrorKind::PreconditionFailed, "unknown property " + name);
}

} // namespace detail

/// Properties of the local factor system, in report order.
inline const std::vector<std::string>& property_names() {
    static const std::vector<std::string> names = {"local_fe", "psi_dependence", "unram_twist", "commutativity", "cft",
                                                   "stability", "eps_monomial", "two_path",     "unfolding",     "lift"};
    return names;
}

inline PropertyResult run_property(const std::string& name, std::uint64_t seed, int cases) {
    CaseGen G(detail::stream_seed(seed, name));
    PropertyResult out;
    out.name = name;
    for (int i = 0; i < cases; ++i) {
        ++out.cases;
        try {
            const CheckReport r = detail::run_case(name, G);
            out.max_residual = std::max(out.max_residual, r.residual);
            if (!r.pass) {
                ++out.failures;
                if (out.failed.size() < 5) out.failed.push_back({{"case", i}, {"residual", r.residual}, {"details", r.details}});
            }
        } catch (const Error& e) {
            ++out.failures;
            if (out.failed.size() < 5) out.failed.push_back({{"case", i}, {"error", std::string(to_string(e.kind()))}, {"message", e.what()}});
        }
    }
    return out;
}

} // namespace lfunc
