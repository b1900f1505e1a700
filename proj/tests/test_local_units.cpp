#include <gtest/gtest.h>

#include <random>

#include "lfunc/local_units.hpp"

using namespace lfunc;

namespace {

std::vector<Place> small_places() {
    std::vector<Place> out;
    for (auto [p, f] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
        auto F = make_field(p, f);
        out.push_back(Place::infinite(F));
        for (const auto& v : places(F, 2))
            if (!v.is_infinite() && v.qv() <= 25) {
                out.push_back(v);
                break;
            }
    }
    auto F = make_field(2, 1);
    out.push_back(Place::finite(F, FqPoly({1, 1, 1}))); // degree 2 over F_2
    return out;
}

} // namespace

TEST(UnitGroup, OrderMatchesRingCount) {
    for (const auto& v : small_places())
        for (int A = 1; A <= 3; ++A) {
            auto G = UnitGroup::get(v, A);
            const std::uint64_t want = (v.qv() - 1) * ipow(v.qv(), A - 1);
            EXPECT_EQ(G->unit_count(), want) << v.name() << " A=" << A;
            EXPECT_EQ(G->units().size(), want);
        }
}

TEST(UnitGroup, DecomposeComposeIdentity) {
    for (const auto& v : small_places())
        for (int A = 1; A <= 3; ++A) {
            auto G = UnitGroup::get(v, A);
            for (const auto& x : G->units()) EXPECT_EQ(G->compose(G->decompose(x)), G->reduce(x)) << v.name() << " A=" << A;
        }
}

TEST(UnitGroup, RejectsHugeRings) {
    auto F = make_field(7, 1);
    EXPECT_THROW(UnitGroup::get(Place::infinite(F), 8), Error);
}

TEST(UnitCharacter, Homomorphism) {
    std::mt19937_64 rng(3);
    for (const auto& v : small_places())
        for (int A = 1; A <= 3; ++A) {
            auto G = UnitGroup::get(v, A);
            const auto us = G->units();
            std::uniform_int_distribution<std::size_t> pick(0, us.size() - 1);
            for (int it = 0; it < 10; ++it) {
                const UnitCharacter chi = UnitCharacter::random(v, A, rng);
                const FqPoly x = us[pick(rng)], y = us[pick(rng)];
                const cplx lhs = chi.value(poly_mul(*v.field, x, y));
                EXPECT_NEAR(std::abs(lhs - chi.value(x) * chi.value(y)), 0, 1e-12);
            }
        }
}

TEST(UnitCharacter, OrthogonalityAndDistinctness) {
    // characters of level A are pairwise distinct: their sums over the group vanish off the diagonal
    for (const auto& v : small_places()) {
        const int A = v.qv() <= 4 ? 3 : 2;
        if (ipow(v.qv(), A) > 200) continue;
        const auto chars = UnitCharacter::all(v, A);
        const auto us = UnitGroup::get(v, A)->units();
        for (std::size_t i = 0; i < chars.size(); i += 3) {
            cplx s = 0;
            for (const auto& x : us) s += chars[i].value(x);
            EXPECT_NEAR(std::abs(s), chars[i].is_trivial() ? static_cast<double>(us.size()) : 0.0, 1e-9);
        }
    }
}

TEST(UnitCharacter, PrimitiveCountsFrozen) {
    // number of characters with conductor exactly a is (q-1)^2 q^{a-2} for a >= 2
    for (const auto& v : small_places()) {
        const auto chars = UnitCharacter::all(v, 2);
        std::vector<std::uint64_t> by(3, 0);
        for (const auto& c : chars) ++by[c.conductor()];
        const std::uint64_t q = v.qv();
        EXPECT_EQ(by[0], 1u);
        EXPECT_EQ(by[1], q - 2);
        EXPECT_EQ(by[2], (q - 1) * (q - 1));
    }
}

TEST(UnitCharacter, ConductorMeansTrivialOnHigherUnits) {
    for (const auto& v : small_places()) {
        const auto chars = UnitCharacter::all(v, 2);
        auto G = UnitGroup::get(v, 2);
        for (const auto& c : chars) {
            const int a = c.conductor();
            // trivial on 1 + P^a
            for (Elem b = 0; b < v.field->q(); ++b) {
                FqPoly x = poly_add(*v.field, FqPoly::constant(1), poly_scale(*v.field, poly_pow(*v.field, v.local_poly(), std::max(a, 1)), b));
                if (a >= 1) EXPECT_NEAR(std::abs(c.value(x) - 1.0), 0, 1e-12);
            }
            EXPECT_EQ(c.normalized().conductor(), a);
        }
    }
}

TEST(UnitCharacter, GroupOperations) {
    std::mt19937_64 rng(11);
    auto F = make_field(3, 1);
    const Place v = Place::finite(F, FqPoly({1, 1}));
    const auto a = UnitCharacter::random(v, 3, rng), b = UnitCharacter::random(v, 3, rng);
    const FqPoly x({2, 1, 1});
    EXPECT_NEAR(std::abs((a * b).value(x) - a.value(x) * b.value(x)), 0, 1e-12);
    EXPECT_TRUE((a * a.inverse()).is_trivial());
    EXPECT_NEAR(std::abs(a.pow(3).value(x) - std::pow(a.value(x), 3)), 0, 1e-12);
    EXPECT_NEAR(std::abs(a.at_level(5).value(x) - a.value(x)), 0, 1e-12);
}

TEST(UnitCharacter, QuadraticTameCharacterIsLegendre) {
    auto F = make_field(5, 1);
    const Place v = Place::finite(F, FqPoly({0, 1}));
    const auto chi = UnitCharacter::tame_only(v, 2); // order 2
    const double legendre[] = {0, 1, -1, -1, 1};
    for (Elem a = 1; a < 5; ++a) EXPECT_NEAR(chi.value(FqPoly::constant(a)).real(), legendre[a], 1e-12);
}
