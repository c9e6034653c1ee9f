#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "blockspec/dependence.hpp"
#include "blockspec/esd.hpp"
#include "blockspec/philox.hpp"

using namespace blockspec;

namespace {

BlockCovariance random_blocks(int p, int q, int n, uint64_t seed) {
    return gram_blocks(sample(Dims::checked(n, p, q), seed, 0));
}

} // namespace

TEST_CASE("bures_sq: identical, commuting diagonal, rank-1 cases") {
    CHECK(std::abs(bures_sq(SymMatrix::identity(3), SymMatrix::identity(3))) <= 1e-10);
    for (int p : {2, 5}) {
        const SymMatrix four(Matrix::Identity(p, p) * 4.0);
        CHECK(bures_sq(four, SymMatrix::identity(p)) == doctest::Approx((double)p).epsilon(1e-10));
    }
    Matrix ones(2, 2);
    ones << 1.0, 1.0, 1.0, 1.0;
    CHECK(bures_sq(SymMatrix(ones), SymMatrix::identity(2)) ==
          doctest::Approx(4.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("bures_sq is symmetric and nonnegative on random PSD pairs") {
    for (uint64_t seed : {11, 12, 13}) {
        const BlockCovariance bc = random_blocks(4, 4, 20, seed);
        const SymMatrix a(bc.S1);
        const SymMatrix b(bc.S2);
        const double ab = bures_sq(a, b);
        const double ba = bures_sq(b, a);
        CHECK(std::abs(ab - ba) <= 1e-8 * (1.0 + std::abs(ab)));
        CHECK(ab >= -1e-8);
    }
}

TEST_CASE("dep_coefficient: independent blocks give zero") {
    const StandardizedMatrix sm = StandardizedMatrix::from_upsilon(Matrix::Zero(3, 2));
    CHECK(dep_coefficient(sm) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(dep_coefficient(sm, DepDenominator::doubled) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("dep_coefficient: full correlation at p = q = 1") {
    Matrix ups(1, 1);
    ups << 1.0;
    const StandardizedMatrix sm = StandardizedMatrix::from_upsilon(ups);
    CHECK(dep_coefficient(sm, DepDenominator::standard) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(dep_coefficient(sm, DepDenominator::doubled) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("dep_coefficient: doubled mode is exactly half of standard mode") {
    for (uint64_t seed : {21, 22}) {
        const BlockCovariance bc = random_blocks(3, 4, 25, seed);
        const StandardizedMatrix sm = StandardizedMatrix::from_blocks(bc);
        const double standard = dep_coefficient(sm, DepDenominator::standard);
        const double doubled = dep_coefficient(sm, DepDenominator::doubled);
        CHECK(doubled == doctest::Approx(standard / 2.0).epsilon(1e-14));
    }
}

TEST_CASE("adjusted_rv: zero, identity cross block, two-route equality") {
    CHECK(adjusted_rv(StandardizedMatrix::from_upsilon(Matrix::Zero(3, 2))) == 0.0);
    CHECK(adjusted_rv(StandardizedMatrix::from_upsilon(Matrix::Identity(4, 4))) ==
          doctest::Approx(1.0).epsilon(1e-14));

    for (uint64_t seed = 0; seed < 100; ++seed) {
        const BlockCovariance bc = random_blocks(3, 3, 16, 1000 + seed);
        const StandardizedMatrix sm = StandardizedMatrix::from_blocks(bc);
        // Independent route that never forms Upsilon: (1/p) tr(Psi S2^-1 Psi' S1^-1).
        const double direct =
            (bc.Psi * bc.S2.inverse() * bc.Psi.transpose() * bc.S1.inverse()).trace() / bc.p();
        CHECK(std::abs(adjusted_rv(sm) - direct) <= 1e-8);
    }
}

TEST_CASE("adjusted_rv equals the scaled mean eigenvalue of Upsilon'Upsilon") {
    const BlockCovariance bc = random_blocks(3, 5, 30, 77);
    const StandardizedMatrix sm = StandardizedMatrix::from_blocks(bc);
    Matrix utu = sm.upsilon.transpose() * sm.upsilon;
    const Vector evals = sym_eigvalues_ascending(SymMatrix(((utu + utu.transpose()) / 2.0).eval()));
    const double mean_eig = evals.sum() / evals.size();
    CHECK(adjusted_rv(sm) == doctest::Approx((double)bc.q() / bc.p() * mean_eig).epsilon(1e-7));
}

TEST_CASE("moment bridge: adjusted_rv equals (1/p) tr(B1 B2)") {
    for (uint64_t seed : {31, 32}) {
        const BlockCovariance bc = random_blocks(4, 3, 24, seed);
        const StandardizedMatrix sm = StandardizedMatrix::from_blocks(bc);
        const Matrix c = offdiag_C(bc);
        const Matrix b1 = c.topRightCorner(bc.p(), bc.q());
        const Matrix b2 = c.bottomLeftCorner(bc.q(), bc.p());
        const double bridge = (b1 * b2).trace() / bc.p();
        CHECK(std::abs(adjusted_rv(sm) - bridge) <= 1e-8);
    }
}

TEST_CASE("StandardizedMatrix invariants: identity diagonal blocks, contraction") {
    const BlockCovariance bc = random_blocks(3, 4, 40, 55);
    const StandardizedMatrix sm = StandardizedMatrix::from_blocks(bc);
    CHECK((sm.R.mat().topLeftCorner(3, 3) - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((sm.R.mat().bottomRightCorner(4, 4) - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() <=
          1e-8);
    const Eigen::JacobiSVD<Matrix> svd(sm.upsilon);
    CHECK(svd.singularValues()(0) <= 1.0 + 1e-8);

    Matrix too_big(1, 1);
    too_big << 1.5;
    CHECK_THROWS_AS(StandardizedMatrix::from_upsilon(too_big), Error);
}
