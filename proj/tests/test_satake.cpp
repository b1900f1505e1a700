#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "lfunc/satake.hpp"

using namespace lfunc;

namespace {

Place place_t(int p = 5) { return Place::finite(make_field(p, 1), FqPoly({0, 1})); }

cplx rnd(std::mt19937_64& rng, bool tempered) {
    std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi), rad(0.5, 2.0);
    return std::polar(tempered ? 1.0 : rad(rng), ang(rng));
}

} // namespace

TEST(GroupTag, DualDimensions) {
    EXPECT_EQ(GroupTag::so_odd(1).dual_dim(), 2);
    EXPECT_EQ(GroupTag::sp(1).dual_dim(), 3);
    EXPECT_EQ(GroupTag::so_even(2).dual_dim(), 4);
    EXPECT_EQ(GroupTag::gl(3).dual_dim(), 3);
    EXPECT_EQ(GroupTag::sp(2).name(), "Sp(2)");
    EXPECT_EQ(tag_from_json(nlohmann::json{{"family", "SO_odd"}, {"rank", 2}}), GroupTag::so_odd(2));
    EXPECT_THROW(tag_from_json(nlohmann::json{{"family", "U"}, {"rank", 2}}), Error);
}

TEST(SatakeClass, Validation) {
    const Place v = place_t();
    EXPECT_THROW(SatakeClass(GroupTag::gl(2), v, {1.0}), Error);
    EXPECT_THROW(SatakeClass(GroupTag::gl(1), v, {0.0}), Error);
    EXPECT_THROW(SatakeClass(GroupTag::so_odd(1), v, {2.0, 2.0}), Error); // not inversion-closed
    EXPECT_NO_THROW(SatakeClass(GroupTag::so_odd(1), v, {2.0, 0.5}));
    EXPECT_THROW(SatakeClass(GroupTag::sp(1), v, {2.0, 0.5, -1.0}), Error); // SO_3 needs the eigenvalue 1
    try {
        SatakeClass(GroupTag::gl(2), v, {1.0});
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::InvalidSatake);
    }
}

TEST(SatakeClass, FromPrincipalSeries) {
    const Place v = place_t();
    const cplx a(0.6, 0.8), b(2.0, 0.0);
    const auto A = satake_from_principal_series(GroupTag::so_odd(1), {MultChar::unramified(v, a)});
    ASSERT_EQ(A.eigs().size(), 2u);
    EXPECT_TRUE(close(A.eigs()[0], a) && close(A.eigs()[1], 1.0 / a));
    const auto B = satake_from_principal_series(GroupTag::sp(1), {MultChar::unramified(v, b)});
    std::vector<cplx> e = B.eigs();
    std::sort(e.begin(), e.end(), [](cplx x, cplx y) { return std::abs(x) < std::abs(y); });
    EXPECT_TRUE(close(e[0], 0.5) && close(e[1], 1.0) && close(e[2], 2.0));
    EXPECT_FALSE(B.tempered());
    try {
        satake_from_principal_series(GroupTag::sp(2), {MultChar::unramified(v, b)});
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.kind(), ErrorKind::RankMismatch);
    }
    const MultChar ram = MultChar::make(v, 1.0, UnitCharacter::tame_only(v, 1));
    try {
        satake_from_principal_series(GroupTag::gl(1), {ram});
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.kind(), ErrorKind::RamifiedInput);
    }
}

TEST(UnramifiedL, SixFactorProduct) {
    const Place v = place_t(3);
    const cplx a(0.3, 0.7), b(-0.9, 0.2);
    const auto A = satake_from_mus(GroupTag::so_odd(1), v, {a});
    const auto B = satake_from_mus(GroupTag::sp(1), v, {b});
    std::vector<cplx> poles;
    for (auto x : {a, 1.0 / a})
        for (auto y : {b, cplx(1.0), 1.0 / b}) poles.push_back(x * y);
    EXPECT_LT(qr_residual(unramified_L(A, B), QRat::factored(3, 1.0, 0, {}, poles)), 1e-13);
}

TEST(UnramifiedL, TensorDeterminant) {
    // 1/L = det(1 - (A (x) B) T) computed as a matrix determinant at sample points
    std::mt19937_64 rng(4);
    const Place v = place_t();
    for (int it = 0; it < 10; ++it) {
        const auto A = satake_from_mus(GroupTag::so_odd(2), v, {rnd(rng, false), rnd(rng, false)});
        const auto B = satake_from_mus(GroupTag::gl(3), v, {rnd(rng, true), rnd(rng, false), rnd(rng, true)});
        Eigen::MatrixXcd Ma = Eigen::MatrixXcd::Zero(4, 4), Mb = Eigen::MatrixXcd::Zero(3, 3);
        for (int i = 0; i < 4; ++i) Ma(i, i) = A.eigs()[i];
        for (int i = 0; i < 3; ++i) Mb(i, i) = B.eigs()[i];
        // conjugate by random invertible matrices so the determinant is not trivially diagonal
        Eigen::MatrixXcd P = Eigen::MatrixXcd::Random(4, 4), Q = Eigen::MatrixXcd::Random(3, 3);
        Ma = P * Ma * P.inverse();
        Mb = Q * Mb * Q.inverse();
        Eigen::MatrixXcd K(12, 12);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) K.block(3 * i, 3 * j, 3, 3) = Ma(i, j) * Mb;
        const QRat L = unramified_L(A, B);
        for (cplx T : {cplx(0.1, 0.05), cplx(-0.07, 0.12)}) {
            const cplx det = (Eigen::MatrixXcd::Identity(12, 12) - K * T).determinant();
            EXPECT_NEAR(std::abs(L.eval(T) * det - 1.0), 0, 1e-9);
        }
    }
}

TEST(UnramifiedGamma, AgreesWithDualLOverL) {
    std::mt19937_64 rng(8);
    const Place v = Place::finite(make_field(2, 1), FqPoly({1, 1, 1}));
    for (int it = 0; it < 20; ++it) {
        const auto A = satake_from_mus(GroupTag::sp(1), v, {rnd(rng, it % 2)});
        const auto B = satake_from_mus(GroupTag::gl(2), v, {rnd(rng, it % 2), rnd(rng, true)});
        const QRat g = unramified_gamma(A, B, std_psi(v));
        const QRat d = qr_div(qr_dual(unramified_L(A.inverse(), B.inverse())), unramified_L(A, B));
        EXPECT_LT(qr_residual(g, d), 1e-10);
    }
    const auto A = satake_from_mus(GroupTag::gl(1), v, {2.0});
    EXPECT_THROW(unramified_gamma(A, A, std_psi(v).twisted(FqPoly::constant(1), 1)), Error);
}

TEST(UnramifiedRL, SymTimesExtIsTensorSquare) {
    std::mt19937_64 rng(12);
    const Place v = place_t();
    for (int n = 1; n <= 5; ++n) {
        std::vector<cplx> e;
        for (int i = 0; i < n; ++i) e.push_back(rnd(rng, false));
        const SatakeClass A(GroupTag::gl(n), v, e);
        EXPECT_LT(qr_residual(unramified_L(A, A),
                              qr_mul(unramified_r_L(A, SquareKind::Sym2), unramified_r_L(A, SquareKind::Ext2))),
                  1e-11);
    }
    const SatakeClass B(GroupTag::gl(2), v, {2.0, 3.0});
    EXPECT_LT(qr_residual(unramified_r_L(B, SquareKind::Sym2), QRat::factored(5, 1.0, 0, {}, {4.0, 6.0, 9.0})), 1e-13);
    try {
        unramified_r_L(satake_from_mus(GroupTag::so_odd(1), v, {2.0}), SquareKind::Sym2);
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.kind(), ErrorKind::WrongTag);
    }
}

TEST(LocalLift, KeepsEigenvalues) {
    const Place v = place_t();
    const auto A = satake_from_mus(GroupTag::sp(1), v, {cplx(0, 2)});
    const auto L = local_lift_unramified(A);
    EXPECT_EQ(L.tag(), GroupTag::gl(3));
    EXPECT_EQ(L.eigs(), A.eigs());
    EXPECT_EQ(local_lift_unramified(satake_from_mus(GroupTag::so_odd(1), v, {3.0})).tag(), GroupTag::gl(2));
}

TEST(SatakeClass, JsonRoundTrip) {
    const Place v = place_t();
    const auto A = satake_from_mus(GroupTag::so_even(2), v, {2.0, cplx(0, 1)});
    const auto B = satake_from_json(to_json(A), v);
    EXPECT_EQ(B.tag(), A.tag());
    for (std::size_t i = 0; i < A.eigs().size(); ++i) EXPECT_TRUE(close(A.eigs()[i], B.eigs()[i]));
}
