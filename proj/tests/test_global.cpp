#include <gtest/gtest.h>

#include <chrono>

#include "lfunc/global.hpp"

using namespace lfunc;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InternalError;
}

/// Legendre symbol (f | M) for irreducible M by Euler's criterion.
int legendre(const FiniteField& F, const FqPoly& f, const FqPoly& M) {
    const FqPoly r = poly_mod(F, f, M);
    if (r.is_zero()) return 0;
    const FqPoly e = poly_powmod(F, r, (ipow(F.q(), M.degree()) - 1) / 2, M);
    return e == FqPoly::constant(1) ? 1 : -1;
}

FqPoly reversed(const FqPoly& f, int n) {
    std::vector<Elem> c(n + 1, 0);
    for (int i = 0; i <= f.degree(); ++i) c[n - i] = f.coeff(i);
    return FqPoly(c);
}

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

TEST(Zeta, EulerCoefficientsFrozen) {
    EXPECT_EQ(zeta_euler_coeffs(make_field(2, 1), 6), (std::vector<std::int64_t>{1, 2, 4, 8, 16, 32, 64}));
    EXPECT_EQ(zeta_euler_coeffs(make_field(3, 1), 4), (std::vector<std::int64_t>{1, 3, 9, 27, 81}));
}

TEST(Zeta, CompletedMatchesClosedForm) {
    for (auto [p, f] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
        auto F = make_field(p, f);
        const auto s = char_L_complete(GrossenChar::trivial(F)).series(8);
        const auto e = zeta_euler_coeffs(F, 8);
        std::int64_t run = 0;
        for (int d = 0; d <= 8; ++d) {
            run += e[d];
            EXPECT_NEAR(s[d].real(), static_cast<double>(run), 1e-6 * run);
        }
    }
}

TEST(GrossenChar, QuadraticMatchesLegendre) {
    auto F = make_field(3, 1);
    const FqPoly M1({1, 0, 1}), M2({0, 1});
    const auto chi = GrossenChar::quadratic(F, poly_mul(*F, M1, M2));
    for (int d = 0; d <= 3; ++d)
        for (std::uint64_t i = 0; i < ipow(3, d); ++i) {
            const FqPoly f = monic_from_index(i, d, 3);
            EXPECT_NEAR(chi.chi_M(f).real(), legendre(*F, f, M1) * legendre(*F, f, M2), 1e-12);
        }
    EXPECT_THROW(GrossenChar::quadratic(F, FqPoly({0, 0, 1})), Error); // not squarefree
    EXPECT_THROW(GrossenChar::quadratic(make_field(2, 1), FqPoly({0, 1})), Error);
}

TEST(GrossenChar, ParityAtInfinity) {
    auto F = make_field(3, 1);
    // chi(c) = c^{(q^d - 1)/2}: odd exactly when the modulus has odd degree
    EXPECT_FALSE(GrossenChar::quadratic(F, FqPoly({0, 1})).even());
    EXPECT_TRUE(GrossenChar::quadratic(F, FqPoly({1, 0, 1})).even());
    EXPECT_TRUE(GrossenChar::quadratic(F, FqPoly({0, 1})).ramified_at(Place::infinite(F)));
    auto G = make_field(5, 1);
    EXPECT_TRUE(GrossenChar::quadratic(G, FqPoly({0, 1})).even() == false);
}

TEST(GrossenChar, LocalComponentsMultiply) {
    // the product over all places of chi_v(x) is 1 for x = t + c in F_q(t)^x
    auto F = make_field(5, 1);
    const auto chi = GrossenChar::quadratic(F, poly_mul(*F, FqPoly({1, 1}), FqPoly({2, 0, 1})), std::polar(1.0, 0.3));
    for (Elem c = 0; c < 5; ++c) {
        const FqPoly x({c, 1});
        cplx prod = 1;
        for (const auto& v : places(F, 2)) {
            const MultChar m = chi.local(v);
            if (v.is_infinite()) {
                // t + c = u^{-1} (1 + c u)
                prod *= m.value(FqPoly({1, c}), -1);
            } else if (poly_mod(*F, x, v.poly).is_zero()) {
                prod *= m.value(FqPoly::constant(1), 1);
            } else {
                prod *= m.value(x, 0);
            }
        }
        EXPECT_NEAR(std::abs(prod - 1.0), 0, 1e-12) << "c=" << c;
    }
}

TEST(GlobalPsi, TrivialOnRationalFunctions) {
    // residue theorem: prod_v psi_v(g / P) = 1
    for (auto [p, f] : std::vector<std::pair<int, int>>{{3, 1}, {2, 2}, {5, 1}}) {
        auto F = make_field(p, f);
        const Place inf = Place::infinite(F);
        for (const auto& v : places(F, 2)) {
            if (v.is_infinite()) continue;
            for (Elem a = 1; a < F->q(); ++a) {
                const FqPoly g = v.deg == 2 ? FqPoly({1, a}) : FqPoly::constant(a);
                const cplx fin = psi_value(global_psi(v), g, 1);
                // at infinity g/P = u^m ghat/Phat
                const int m = v.deg - g.degree();
                const FqPoly um = FqPoly::monomial(4);
                const FqPoly y = poly_mod(*F, poly_mul(*F, reversed(g, g.degree()), poly_invmod(*F, reversed(v.poly, v.deg), um)), um);
                const cplx at_inf = psi_value(global_psi(inf), y, -m);
                EXPECT_NEAR(std::abs(fin * at_inf - 1.0), 0, 1e-12) << v.name() << " a=" << a;
            }
        }
    }
}

TEST(CharL, FrozenDegreeThreeModulus) {
    auto F = make_field(3, 1);
    const FqPoly M({1, 2, 0, 1}); // t^3 + 2t + 1, irreducible
    ASSERT_TRUE(poly_is_irreducible(*F, M));
    const auto chi = GrossenChar::quadratic(F, M);
    std::vector<cplx> want(3, 0);
    for (int d = 0; d < 3; ++d)
        for (std::uint64_t i = 0; i < ipow(3, d); ++i) want[d] += legendre(*F, monic_from_index(i, d, 3), M);
    const QPoly num = char_L_complete(chi).num();
    ASSERT_EQ(num.degree(), 2);
    for (int d = 0; d < 3; ++d) EXPECT_NEAR(std::abs(num.c[d] - want[d]), 0, 1e-10);
    EXPECT_NEAR(std::abs(num.c[2]), 3.0, 1e-10); // |leading| = q for a genus-one numerator
}

TEST(CharL, EvenQuadraticOfIrreducibleQuadraticIsOne) {
    auto F = make_field(3, 1);
    const auto L = char_L_complete(GrossenChar::quadratic(F, FqPoly({1, 0, 1})));
    EXPECT_EQ(L.num().degree(), 0);
    EXPECT_LT(qr_residual(L, QRat::one(3)), 1e-12);
    EXPECT_TRUE(verify_rh(L).pass); // no zeros
}

TEST(CharL, NumeratorDegreeRule) {
    for (int p : {3, 5}) {
        auto F = make_field(p, 1);
        for (const auto& c : quadratic_characters(F, 3)) {
            if (c.finite_trivial()) continue;
            EXPECT_EQ(char_L_complete(c).num().degree(), expected_numerator_degree(c)) << c.describe();
        }
    }
}

TEST(PartialL, RationalityOnCorpus) {
    auto F = make_field(3, 1);
    double worst = 0;
    for (const auto& P : quadratic_pair_corpus(F, 3)) worst = std::max(worst, check_rationality(P, 6).residual);
    EXPECT_LT(worst, 1e-9);
    EXPECT_LT(check_rationality(isobaric_instance(F), 6).residual, 1e-9);
}

TEST(PartialL, GL1PairEqualsProductCharacter) {
    auto F = make_field(5, 1);
    const auto a = GrossenChar::quadratic(F, FqPoly({1, 1})), b = GrossenChar::quadratic(F, FqPoly({2, 0, 1}));
    const auto x = partial_L({F, a, b}, 5), y = partial_L({F, a * b, GrossenChar::trivial(F)}, 5);
    for (int i = 0; i <= 5; ++i) EXPECT_NEAR(std::abs(x[i] - y[i]), 0, 1e-9);
}

TEST(SelfDual, Types) {
    auto F = make_field(3, 1);
    EXPECT_EQ(selfdual_type(GrossenChar::trivial(F)), SelfDualType::Orthogonal);
    EXPECT_EQ(selfdual_type(GrossenChar::quadratic(F, FqPoly({0, 1}))), SelfDualType::Orthogonal);
    EXPECT_EQ(kind_of([&] { selfdual_type(GrossenChar::trivial(F, cplx(0, 1))); }), ErrorKind::NotSelfDual);
}

TEST(Isobaric, Validation) {
    auto F = make_field(3, 1);
    const auto a = GrossenChar::quadratic(F, FqPoly({0, 1})), b = GrossenChar::quadratic(F, FqPoly({1, 1}));
    const auto c = GrossenChar::quadratic(F, FqPoly({2, 1}));
    EXPECT_NO_THROW(isobaric_sum({a, b, a * b}, GroupTag::sp(1)));
    EXPECT_EQ(kind_of([&] { isobaric_sum({a, b, a * b}, GroupTag::so_odd(2)); }), ErrorKind::SizeMismatch);
    EXPECT_EQ(kind_of([&] { isobaric_sum({a, a, b}, GroupTag::sp(1)); }), ErrorKind::DuplicateConstituent);
    EXPECT_EQ(kind_of([&] { isobaric_sum({a, b}, GroupTag::so_odd(1)); }), ErrorKind::TypeMismatch);
    EXPECT_EQ(kind_of([&] { isobaric_sum({a, b, c}, GroupTag::sp(1)); }), ErrorKind::DeterminantMismatch);
    EXPECT_EQ(kind_of([&] { isobaric_sum({a, GrossenChar::trivial(F, cplx(0, 1))}, GroupTag::gl(2)); }),
              ErrorKind::NotSelfDual);
}

TEST(GlobalFE, QuadraticCorpusF3F5) {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t n = 0;
    for (int p : {3, 5}) {
        auto F = make_field(p, 1);
        for (const auto& P : quadratic_pair_corpus(F, 3)) {
            const FeReport r = verify_fe(P);
            EXPECT_TRUE(r.pass) << to_json(P).dump();
            EXPECT_LT(std::max(r.residual, r.partial_residual), 1e-9);
            ++n;
        }
    }
    EXPECT_EQ(n, 100u + 476u);
    EXPECT_LT(elapsed(t0), 30.0);
}

TEST(GlobalFE, IsobaricInstance) {
    auto F = make_field(3, 1);
    const GlobalPair P = isobaric_instance(F);
    const FeReport r = verify_fe(P);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.form, "complete+partial");
    EXPECT_EQ(P.S().size(), 4u);
}

TEST(GlobalFE, TwistedAtInfinity) {
    auto F = make_field(5, 1);
    const auto a = GrossenChar::quadratic(F, FqPoly({1, 1}), std::polar(1.0, 0.7));
    const auto b = GrossenChar::quadratic(F, FqPoly({3, 0, 1}), std::polar(1.3, -0.2));
    EXPECT_TRUE(verify_fe({F, a, b}).pass);
}

TEST(GlobalFE, WrongEpsilonFails) {
    auto F = make_field(3, 1);
    const GlobalPair P{F, GrossenChar::quadratic(F, FqPoly({1, 2, 0, 1})), GrossenChar::trivial(F)};
    const QRat bad = qr_mul(global_eps(P), QRat::monomial(3, 1.0, 1));
    EXPECT_FALSE(verify_fe(P, 1e-9, &bad).pass);
}

TEST(RH, CorpusOnCircle) {
    const auto t0 = std::chrono::steady_clock::now();
    std::size_t zeros = 0;
    for (int p : {3, 5}) {
        auto F = make_field(p, 1);
        for (const auto& P : quadratic_pair_corpus(F, 3)) {
            const RhReport r = verify_rh(global_L(P));
            EXPECT_TRUE(r.pass);
            zeros += r.zeros.size();
        }
    }
    EXPECT_GT(zeros, 0u);
    const RhReport neg = verify_rh(rh_negative_control(3));
    EXPECT_FALSE(neg.pass);
    EXPECT_NEAR(neg.max_deviation, 1 / std::sqrt(3.0) - 1 / (1.2 * std::sqrt(3.0)), 1e-10);
    EXPECT_LT(elapsed(t0), 10.0);
}

TEST(RH, TsvColumns) {
    auto F = make_field(3, 1);
    const RhReport r = verify_rh(char_L_complete(GrossenChar::quadratic(F, FqPoly({1, 2, 0, 1}))));
    const std::string t = rh_tsv(r);
    EXPECT_EQ(t.substr(0, t.find('\n')), "re_s\tim_s\tabs_T\tdeviation");
    for (const auto& z : r.zeros) EXPECT_NEAR(z.s.real(), 0.5, 1e-10);
}

TEST(Json, PairRoundTrip) {
    auto F = make_field(3, 1);
    const GlobalPair P = isobaric_instance(F);
    const GlobalPair Q = pair_from_json(to_json(P));
    EXPECT_EQ(to_json(Q).dump(), to_json(P).dump());
    EXPECT_LT(qr_residual(global_L(Q), global_L(P)), 1e-12);
    const nlohmann::json j = {{"field", {{"p", 3}}}, {"tau", {{"kind", "grossen"}, {"chi", {{"quadratic", {1, 0, 1}}}}}},
                              {"pi", {{"kind", "grossen"}, {"chi", nlohmann::json::object()}}}};
    EXPECT_TRUE(verify_fe(pair_from_json(j)).pass);
    EXPECT_EQ(kind_of([] { pair_from_json(nlohmann::json{{"tau", 1}}); }), ErrorKind::SchemaError);
}
