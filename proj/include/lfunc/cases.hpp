#pragma once

// Seeded random instances for the property suite.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "lfunc/repsys.hpp"
#include "lfunc/satake.hpp"
#include "lfunc/tate.hpp"

namespace lfunc {

class CaseGen {
public:
    explicit CaseGen(std::uint64_t seed) : rng_(seed) {}

    std::mt19937_64& rng() { return rng_; }

    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

    FieldPtr field() {
        static const std::pair<int, int> pf[] = {{2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {3, 2}};
        const auto [p, f] = pf[uniform(0, 5)];
        return make_field(p, f);
    }

    Place place(const FieldPtr& F, int dmax = 2) {
        if (coin(0.2)) return Place::infinite(F);
        const int d = uniform(1, dmax);
        const auto irr = monic_irreducibles(*F, d);
        std::vector<FqPoly> deg_d;
        for (const auto& P : irr)
            if (P.degree() == d) deg_d.push_back(P);
        return Place::finite(F, deg_d[uniform(0, static_cast<int>(deg_d.size()) - 1)]);
    }

    Place place() {
        auto F = field();
        return place(F, F->q() > 4 ? 1 : 2);
    }

    cplx unit_circle() { return std::polar(1.0, real(0, 2 * std::numbers::pi)); }
    cplx nonzero(double lo = 0.5, double hi = 2.0) { return std::polar(real(lo, hi), real(0, 2 * std::numbers::pi)); }

    MultChar character(const Place& v, int max_cond, bool unitary = true) {
        return random_char(v, max_cond, rng_, unitary);
    }

    GroupTag tag(int max_dim) {
        for (;;) {
            const int fam = uniform(0, 3);
            const int rank = uniform(fam == 3 ? 1 : 0, 3);
            GroupTag t{static_cast<GroupTag::Family>(fam), rank};
            if (t.dual_dim() >= 1 && t.dual_dim() <= max_dim) return t;
        }
    }

    SatakeClass satake(GroupTag t, const Place& v, bool tempered) {
        std::vector<cplx> mus;
        for (int i = 0; i < t.rank; ++i) mus.push_back(tempered ? unit_circle() : nonzero());
        return satake_from_mus(t, v, mus);
    }

    /// GL_n tree: characters, Satake leaves or induction from smaller GL trees.
    Rep gl_tree(const Place& v, int n, bool tempered, int depth = 2) {
        if (n == 1 && coin(0.6)) return make_char(character(v, 2, true));
        if (depth == 0 || n == 1 || coin(0.4)) return make_satake(satake(GroupTag::gl(n), v, true));
        std::vector<GlPart> parts;
        int left = n;
        while (left > 0) {
            const int m = uniform(1, left);
            parts.push_back({gl_tree(v, m, true, depth - 1), tempered ? 0.0 : real(-0.45, 0.45)});
            left -= m;
        }
        std::sort(parts.begin(), parts.end(), [](const GlPart& a, const GlPart& b) { return a.r > b.r; });
        return make_induced(GroupTag::gl(n), std::move(parts));
    }

    /// Classical tree in Langlands form of the given family and rank.
    Rep classical_tree(GroupTag t, const Place& v, bool tempered) {
        if (t.rank == 0 || coin(0.3)) return make_satake(satake(t, v, true));
        std::vector<GlPart> parts;
        int left = t.rank;
        const int nparts = uniform(1, std::min(2, left));
        for (int i = 0; i < nparts && left > 0; ++i) {
            const int m = uniform(1, left);
            parts.push_back({gl_tree(v, m, true, 1), 0.0});
            left -= m;
        }
        if (!tempered) {
            double r = real(0.05, 0.45);
            for (auto& p : parts) {
                p.r = r;
                r *= real(0.3, 0.8);
            }
        }
        Rep anchor;
        if (left > 0 || coin(0.5)) anchor = make_satake(satake({t.family, left}, v, true));
        return make_induced(t, std::move(parts), anchor);
    }

    Rep tree(GroupTag t, const Place& v, bool tempered) {
        return t.is_gl() ? gl_tree(v, t.rank, tempered) : classical_tree(t, v, tempered);
    }

    /// A unit of O_v given as a small polynomial.
    FqPoly unit(const Place& v) {
        const FiniteField& F = *v.field;
        for (;;) {
            std::vector<Elem> c;
            const int deg = uniform(0, 2);
            for (int i = 0; i <= deg; ++i) c.push_back(static_cast<Elem>(uniform(0, static_cast<int>(F.q()) - 1)));
            FqPoly u(c);
            if (!u.is_zero() && !poly_mod(F, u, v.local_poly()).is_zero()) return u;
        }
    }

private:
    std::mt19937_64 rng_;
};

} // namespace lfunc
