#include "dlatom/algebra.hpp"

#include "oracle.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace dlatom;
using test_support::to_eigen;

namespace {

const cplx i1{0.0, 1.0};

Matrix4 only(std::initializer_list<std::tuple<int, int, cplx>> entries) {
    Matrix4 m = Matrix4::Zero();
    for (const auto& [r, c, v] : entries) m(r - 1, c - 1) = v;
    return m;
}

}  // namespace

TEST(Pauli, MatchesPrintedEntries) {
    Matrix2 sx, sy, sz;
    sx << 0, 1, 1, 0;
    sy << 0, -i1, i1, 0;
    sz << 1, 0, 0, -1;
    EXPECT_EQ(pauli(Axis::x), sx);
    EXPECT_EQ(pauli(Axis::y), sy);
    EXPECT_EQ(pauli(Axis::z), sz);
}

TEST(Alpha, PrintedEntries) {
    EXPECT_EQ(alpha(Axis::x), only({{1, 4, 1.0}, {2, 3, 1.0}, {3, 2, 1.0}, {4, 1, 1.0}}));
    EXPECT_EQ(alpha(Axis::z), only({{1, 3, 1.0}, {2, 4, -1.0}, {3, 1, 1.0}, {4, 2, -1.0}}));
    EXPECT_EQ(alpha(Axis::y), to_eigen(oracle::alpha_y()));
}

TEST(Alpha, SquaresToIdentity) {
    for (Axis a : kAxes) EXPECT_TRUE(approx_equal(alpha(a) * alpha(a), identity4())) << axis_name(a);
}

TEST(Beta, DiagonalAndTraceless) {
    EXPECT_EQ(beta(), to_eigen(oracle::diag(1, 1, -1, -1)));
    EXPECT_TRUE(approx_equal(beta() * beta(), identity4()));
    EXPECT_EQ(beta().trace(), cplx(0.0));
}

TEST(Beta1, EntriesAndSquare) {
    EXPECT_EQ(beta1(), to_eigen(oracle::diag(1, 0, -1, 0)));
    EXPECT_EQ(beta1() * beta1(), to_eigen(oracle::diag(1, 0, 1, 0)));
    EXPECT_EQ(commutator(beta(), beta1()), Matrix4::Zero());
}

TEST(SigmaBig, PrintedEntries) {
    EXPECT_EQ(sigma_big(Axis::z), to_eigen(oracle::diag(1, -1, 1, -1)));
    EXPECT_EQ(sigma_big(Axis::x), only({{1, 2, 1.0}, {2, 1, 1.0}, {3, 4, 1.0}, {4, 3, 1.0}}));
    EXPECT_TRUE(approx_equal(sigma_big(Axis::y) * sigma_big(Axis::y), identity4()));
    EXPECT_EQ(sigma_big(Axis::y), to_eigen(oracle::sigma_y()));
}

TEST(Anticommutator, DiracExamples) {
    EXPECT_TRUE(approx_equal(anticommutator(alpha(Axis::x), alpha(Axis::y)), Matrix4::Zero()));
    EXPECT_TRUE(approx_equal(anticommutator(alpha(Axis::x), alpha(Axis::x)), 2.0 * identity4()));
    EXPECT_TRUE(approx_equal(anticommutator(alpha(Axis::z), beta()), Matrix4::Zero()));
}

TEST(Commutator, Examples) {
    EXPECT_EQ(commutator(beta(), beta1()), Matrix4::Zero());
    EXPECT_EQ(commutator(identity4(), alpha(Axis::x)), Matrix4::Zero());
}

// [alpha_z, beta1] from the naive oracle: (1,3) = -2, (3,1) = +2, rest 0.
TEST(Commutator, AlphaZBeta1AgainstOracle) {
    const oracle::M4 az = oracle::alpha_z();
    const oracle::M4 b1 = oracle::beta1();
    const Matrix4 expected = to_eigen(oracle::add(oracle::mul(az, b1), oracle::mul(b1, az), -1.0));
    EXPECT_EQ(expected, only({{1, 3, -2.0}, {3, 1, 2.0}}));
    EXPECT_TRUE(approx_equal(commutator(alpha(Axis::z), beta1()), expected));
}

TEST(ParityConjugate, Examples) {
    EXPECT_TRUE(approx_equal(parity_conjugate(alpha(Axis::x)), -alpha(Axis::x)));
    EXPECT_TRUE(approx_equal(parity_conjugate(sigma_big(Axis::x)), sigma_big(Axis::x)));
    EXPECT_TRUE(approx_equal(parity_conjugate(beta()), beta()));
}

TEST(Properties, CliffordRelationsAllAxisPairs) {
    for (Axis i : kAxes) {
        for (Axis j : kAxes) {
            const Matrix4 expect = i == j ? Matrix4(2.0 * identity4()) : Matrix4(Matrix4::Zero());
            EXPECT_LE(max_abs_diff(anticommutator(alpha(i), alpha(j)), expect), 1e-12);
        }
        EXPECT_LE(max_abs(anticommutator(alpha(i), beta())), 1e-12);
    }
}

TEST(Properties, AllGeneratorsHermitian) {
    for (Axis a : kAxes) {
        EXPECT_TRUE(is_hermitian(alpha(a)));
        EXPECT_TRUE(is_hermitian(sigma_big(a)));
    }
    EXPECT_TRUE(is_hermitian(beta()));
    EXPECT_TRUE(is_hermitian(beta1()));
}

TEST(Properties, ParitySignsPerAxis) {
    for (Axis a : kAxes) {
        EXPECT_LE(max_abs_diff(parity_conjugate(alpha(a)), -alpha(a)), 1e-12);
        EXPECT_LE(max_abs_diff(parity_conjugate(sigma_big(a)), sigma_big(a)), 1e-12);
    }
}

TEST(Properties, Beta1IsNotADiracGenerator) {
    EXPECT_LE(max_abs(commutator(beta1(), beta1())), 1e-12);
    for (Axis a : kAxes) EXPECT_GT(max_abs(commutator(alpha(a), beta1())), 0.5) << axis_name(a);
}

TEST(Properties, BlockLayoutMatchesOracle) {
    const std::array<oracle::M4, 3> alphas{oracle::alpha_x(), oracle::alpha_y(), oracle::alpha_z()};
    const std::array<oracle::M4, 3> sigmas{oracle::sigma_x(), oracle::sigma_y(), oracle::sigma_z()};
    for (Axis a : kAxes) {
        EXPECT_EQ(alpha(a), to_eigen(alphas[static_cast<std::size_t>(index_of(a))]));
        EXPECT_EQ(sigma_big(a), to_eigen(sigmas[static_cast<std::size_t>(index_of(a))]));
        EXPECT_EQ(Matrix2(alpha(a).topRightCorner(2, 2)), pauli(a));
        EXPECT_EQ(Matrix2(sigma_big(a).topLeftCorner(2, 2)), pauli(a));
    }
}

TEST(AlgebraIdentities, EveryRowPasses) {
    const auto rows = algebra_identities();
    ASSERT_FALSE(rows.empty());
    for (const auto& r : rows) EXPECT_TRUE(r.pass) << r.name << " deviation " << r.deviation;
}

TEST(AlgebraIdentities, ContainsParityAndBeta1Rows) {
    const auto rows = algebra_identities();
    auto has = [&](std::string_view name) {
        return std::any_of(rows.begin(), rows.end(), [&](const auto& r) { return r.name == name; });
    };
    EXPECT_TRUE(has("beta1 not Dirac: [alpha_z, beta1] != 0"));
    EXPECT_TRUE(has("parity: beta Sigma_x beta = Sigma_x"));
    EXPECT_TRUE(has("parity: beta alpha_x beta = -alpha_x"));
}

TEST(Axis, ParseRoundTrip) {
    for (Axis a : kAxes) EXPECT_EQ(parse_axis(axis_name(a)), a);
    EXPECT_THROW(parse_axis("w"), std::invalid_argument);
}
