#include "ncia/error.hpp"
#include "ncia/numerics.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace ncia;
using namespace ncia::num;

namespace {

double dist(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).frobenius_norm();
}

ComplexMatrix reconstruct(const SvdResult& r, std::size_t m, std::size_t n) {
    ComplexMatrix sigma(m, n);
    for (std::size_t i = 0; i < r.s.size(); ++i) {
        sigma(i, i) = r.s[i];
    }
    return oracle::matmul(oracle::matmul(r.u, sigma), r.v.adjoint());
}

} // namespace

TEST(ComplexMatrix, RejectsEmptyAndMismatchedShapes) {
    EXPECT_THROW(ComplexMatrix(0, 3), DimensionError);
    EXPECT_THROW(ComplexMatrix(2, 2, std::vector<Complex>(3)), DimensionError);
    EXPECT_THROW((ComplexMatrix{{1.0, 2.0}, {3.0}}), DimensionError);
}

TEST(ComplexMatrix, ProductMatchesLoopOracle) {
    Rng rng(3);
    const auto a = oracle::random_matrix(rng, 3, 5);
    const auto b = oracle::random_matrix(rng, 5, 2);
    EXPECT_LT(dist(a * b, oracle::matmul(a, b)), 1e-13);
    EXPECT_THROW(a * a, DimensionError);
}

TEST(Hadamard, OrderTwoBaseCase) {
    const double r = 1.0 / std::sqrt(2.0);
    const ComplexMatrix expected{{r, r}, {r, -r}};
    EXPECT_LT(dist(hadamard_trunk(2, 2), expected), 1e-15);
}

TEST(Hadamard, FourByThreeIsLeadingColumnsOfH4) {
    const ComplexMatrix h4{{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}};
    const auto m = hadamard_trunk(4, 3);
    EXPECT_LT(dist(m, 0.5 * h4.leading_columns(3)), 1e-15);
    EXPECT_LT(dist(m.adjoint() * m, ComplexMatrix::identity(3)), 1e-12);
}

TEST(Hadamard, OrthonormalColumnsForAllOrders) {
    for (std::size_t k : {2u, 4u, 8u, 16u}) {
        for (std::size_t n = 1; n <= k; ++n) {
            const auto m = hadamard_trunk(k, n);
            ASSERT_EQ(m.rows(), k);
            ASSERT_EQ(m.cols(), n);
            EXPECT_LT(dist(oracle::matmul(m.adjoint(), m), ComplexMatrix::identity(n)), 1e-12)
                << k << "x" << n;
        }
    }
}

TEST(Hadamard, RejectsBadOrders) {
    EXPECT_THROW(hadamard_trunk(6, 2), InvalidArgument);
    EXPECT_THROW(hadamard_trunk(4, 0), InvalidArgument);
    EXPECT_THROW(hadamard_trunk(4, 5), InvalidArgument);
}

TEST(Svd, Identity) {
    const auto r = svd(ComplexMatrix::identity(3));
    for (double s : r.s) {
        EXPECT_NEAR(s, 1.0, 1e-15);
    }
}

TEST(Svd, DiagonalHasUnitModulusDiagonalFactors) {
    const auto r = svd(ComplexMatrix{{3.0, 0.0}, {0.0, 2.0}});
    EXPECT_NEAR(r.s[0], 3.0, 1e-14);
    EXPECT_NEAR(r.s[1], 2.0, 1e-14);
    for (const auto* f : {&r.u, &r.v}) {
        EXPECT_NEAR(std::abs((*f)(0, 1)), 0.0, 1e-14);
        EXPECT_NEAR(std::abs((*f)(1, 0)), 0.0, 1e-14);
        EXPECT_NEAR(std::abs((*f)(0, 0)), 1.0, 1e-14);
        EXPECT_NEAR(std::abs((*f)(1, 1)), 1.0, 1e-14);
    }
}

TEST(Svd, RandomFourByThreeReconstructs) {
    Rng rng(11);
    const auto a = oracle::random_matrix(rng, 4, 3);
    const auto r = svd(a);
    EXPECT_LE(dist(reconstruct(r, 4, 3), a), 1e-10 * a.frobenius_norm());
}

TEST(Svd, PropertiesOnRandomShapes) {
    Rng rng(12);
    std::uniform_int_distribution<std::size_t> dim(1, 16);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t m = dim(rng);
        const std::size_t n = dim(rng);
        const auto a = oracle::random_matrix(rng, m, n);
        const auto r = svd(a);
        ASSERT_EQ(r.u.rows(), m);
        ASSERT_EQ(r.u.cols(), m);
        ASSERT_EQ(r.v.rows(), n);
        ASSERT_EQ(r.v.cols(), n);
        ASSERT_EQ(r.s.size(), std::min(m, n));
        EXPECT_LE(dist(reconstruct(r, m, n), a), 1e-10 * a.frobenius_norm());
        EXPECT_LE(dist(oracle::matmul(r.u.adjoint(), r.u), ComplexMatrix::identity(m)), 1e-10);
        EXPECT_LE(dist(oracle::matmul(r.v.adjoint(), r.v), ComplexMatrix::identity(n)), 1e-10);
        for (std::size_t i = 0; i < r.s.size(); ++i) {
            EXPECT_GE(r.s[i], 0.0);
            if (i > 0) {
                EXPECT_LE(r.s[i], r.s[i - 1]);
            }
        }
        // singular values agree with an independent SVD and with svd(A^H)
        const Eigen::VectorXd ref = Eigen::JacobiSVD<Eigen::MatrixXcd>(oracle::to_eigen(a)).singularValues();
        const auto rh = svd(a.adjoint());
        for (std::size_t i = 0; i < r.s.size(); ++i) {
            EXPECT_NEAR(r.s[i], ref(static_cast<Eigen::Index>(i)), 1e-10 * ref(0));
            EXPECT_NEAR(r.s[i], rh.s[i], 1e-10 * ref(0));
        }
    }
}

TEST(Svd, PhaseConventionLargestEntryRealPositive) {
    Rng rng(13);
    const auto r = svd(oracle::random_matrix(rng, 5, 3));
    for (std::size_t c = 0; c < r.u.cols(); ++c) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < r.u.rows(); ++i) {
            if (std::abs(r.u(i, c)) > std::abs(r.u(best, c)) + 1e-12) {
                best = i;
            }
        }
        EXPECT_GT(r.u(best, c).real(), 0.0);
        EXPECT_NEAR(r.u(best, c).imag(), 0.0, 1e-14);
    }
}

TEST(Svd, IsDeterministic) {
    Rng rng(14);
    const auto a = oracle::random_matrix(rng, 4, 3);
    const auto r1 = svd(a);
    const auto r2 = svd(a);
    EXPECT_EQ(r1.u, r2.u);
    EXPECT_EQ(r1.v, r2.v);
    EXPECT_EQ(r1.s, r2.s);
}

TEST(Svd, RankDeficientStillCompletesU) {
    const ComplexMatrix a{{1.0, 1.0}, {1.0, 1.0}, {0.0, 0.0}, {0.0, 0.0}};
    const auto r = svd(a);
    EXPECT_NEAR(r.s[0], 2.0, 1e-13);
    EXPECT_NEAR(r.s[1], 0.0, 1e-13);
    EXPECT_LE(dist(r.u.adjoint() * r.u, ComplexMatrix::identity(4)), 1e-10);
}

TEST(Svd, RejectsNonFinite) {
    ComplexMatrix a = ComplexMatrix::identity(2);
    a(0, 1) = Complex(NAN, 0.0);
    EXPECT_THROW(svd(a), InvalidArgument);
}

TEST(Invert, IdentityAndDiagonal) {
    EXPECT_LT(dist(invert(ComplexMatrix::identity(4)), ComplexMatrix::identity(4)), 1e-15);
    const ComplexMatrix expected{{0.5, 0.0}, {0.0, 0.25}};
    EXPECT_LT(dist(invert(ComplexMatrix{{2.0, 0.0}, {0.0, 4.0}}), expected), 1e-15);
}

TEST(Invert, RandomWellConditionedThreeByThree) {
    Rng rng(21);
    const auto a = oracle::random_matrix(rng, 3, 3);
    EXPECT_LE(dist(oracle::matmul(a, invert(a)), ComplexMatrix::identity(3)), 1e-10);
}

TEST(Invert, ResidualForConditionUpToOneMillion) {
    Rng rng(22);
    std::uniform_int_distribution<std::size_t> dim(1, 8);
    std::uniform_real_distribution<double> logc(0.0, 6.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = dim(rng);
        // A = U diag(s) V^H with condition 10^logc
        const auto q1 = svd(oracle::random_matrix(rng, n, n)).u;
        const auto q2 = svd(oracle::random_matrix(rng, n, n)).u;
        const double c = std::pow(10.0, logc(rng));
        CVector d(n);
        for (std::size_t i = 0; i < n; ++i) {
            d[i] = n == 1 ? 1.0 : std::pow(c, -static_cast<double>(i) / static_cast<double>(n - 1));
        }
        const auto a = oracle::matmul(oracle::matmul(q1, ComplexMatrix::diagonal(d)), q2.adjoint());
        EXPECT_LE(dist(oracle::matmul(a, invert(a)), ComplexMatrix::identity(n)), 1e-9);
    }
}

TEST(Invert, SingularAndNonSquare) {
    EXPECT_THROW(invert(ComplexMatrix{{1.0, 2.0}, {2.0, 4.0}}), SingularMatrix);
    EXPECT_THROW(invert(ComplexMatrix(2, 3)), DimensionError);
}

TEST(Condition, Examples) {
    EXPECT_NEAR(condition_estimate(ComplexMatrix::identity(3)), 1.0, 1e-14);
    EXPECT_NEAR(condition_estimate(ComplexMatrix{{10.0, 0.0}, {0.0, 0.1}}), 100.0, 1e-10);
    EXPECT_EQ(condition_estimate(ComplexMatrix{{1.0, 1.0}, {2.0, 2.0}}), kConditionSentinel);
}

TEST(Condition, MatchesIndependentSvd) {
    Rng rng(23);
    for (int i = 0; i < 50; ++i) {
        const auto a = oracle::random_matrix(rng, 3, 3);
        EXPECT_NEAR(condition_estimate(a), oracle::condition(oracle::to_eigen(a)),
                    1e-8 * oracle::condition(oracle::to_eigen(a)));
    }
}
