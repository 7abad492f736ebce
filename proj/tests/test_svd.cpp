#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "semspace/svd.hpp"

using namespace semspace;

namespace {

RealSparse sparse_from_dense(const RealMatrix& dense) {
    RealSparse out = dense.sparseView();
    out.makeCompressed();
    return out;
}

double orthonormality_error(const RealMatrix& q) {
    return (q.transpose() * q - RealMatrix::Identity(q.cols(), q.cols())).norm();
}

void check_invariants(const TruncatedSvd<Real>& svd) {
    CHECK(orthonormality_error(svd.u) <= 1e-8);
    CHECK(orthonormality_error(svd.v) <= 1e-8);
    for (Index i = 0; i + 1 < svd.sigma.size(); ++i) {
        CHECK(svd.sigma[i] >= svd.sigma[i + 1]);
    }
    if (svd.sigma.size() > 0) {
        CHECK(svd.sigma[svd.sigma.size() - 1] >= 0.0);
    }
    CHECK(svd.k <= std::min(svd.u.rows(), svd.v.rows()));
}

RealMatrix designated_example() {
    RealMatrix m(2, 2);
    m << 3, 0, 4, 5;
    return m;
}

}  // namespace

TEST_CASE("analytic spectrum of the 2x2 example") {
    const RealMatrix m = designated_example();
    const double s1 = std::sqrt(45.0);
    const double s2 = std::sqrt(5.0);

    SUBCASE("dense oracle") {
        auto svd = dense_svd_oracle(m, 2);
        REQUIRE(svd.k == 2);
        CHECK(std::abs(svd.sigma[0] - s1) <= 1e-10);
        CHECK(std::abs(svd.sigma[1] - s2) <= 1e-10);
        check_invariants(svd);
    }
    SUBCASE("lanczos") {
        SvdConfig cfg;
        cfg.k = 2;
        auto svd = lanczos_svd<Real>(sparse_from_dense(m), cfg);
        REQUIRE(svd.k == 2);
        CHECK(std::abs(svd.sigma[0] - s1) <= 1e-10);
        CHECK(std::abs(svd.sigma[1] - s2) <= 1e-10);
        check_invariants(svd);
    }
}

TEST_CASE("identity matrix has a flat unit spectrum") {
    SvdConfig cfg;
    cfg.k = 3;
    auto svd = lanczos_svd<Real>(sparse_from_dense(RealMatrix::Identity(3, 3)), cfg);
    REQUIRE(svd.k == 3);
    for (Index i = 0; i < 3; ++i) {
        CHECK(svd.sigma[i] == doctest::Approx(1.0).epsilon(1e-12));
    }
    // For A = I the left and right vectors coincide pairwise.
    CHECK((svd.u * svd.v.transpose() - RealMatrix::Identity(3, 3)).norm() <= 1e-10);
    check_invariants(svd);
}

TEST_CASE("lanczos matches the dense oracle on a random sparse matrix") {
    const RealSparse a = testutil::random_sparse(50, 80, 0.15, 42);
    SvdConfig cfg;
    cfg.k = 10;
    auto fast = lanczos_svd<Real>(a, cfg);
    auto exact = dense_svd_oracle(RealMatrix(a), 10);
    REQUIRE(fast.k == exact.k);
    const double scale = exact.sigma[0];
    for (Index i = 0; i < fast.k; ++i) {
        CHECK(std::abs(fast.sigma[i] - exact.sigma[i]) <= 1e-8 * scale);
    }
    check_invariants(fast);
}

TEST_CASE("lanczos satisfies its own residual contract") {
    const RealSparse a = testutil::random_sparse(60, 45, 0.1, 7);
    SvdConfig cfg;
    cfg.k = 6;
    cfg.tol = 1e-10;
    auto svd = lanczos_svd<Real>(a, cfg);
    for (Index i = 0; i < svd.k; ++i) {
        const RealVector av = a * svd.v.col(i) - svd.sigma[i] * svd.u.col(i);
        const RealVector atu = a.transpose() * svd.u.col(i) - svd.sigma[i] * svd.v.col(i);
        CHECK(av.norm() <= cfg.tol * svd.sigma[0] * 10);
        CHECK(atu.norm() <= cfg.tol * svd.sigma[0] * 10);
    }
}

TEST_CASE("oracle handles the 1x1 and zero matrices") {
    RealMatrix one(1, 1);
    one << 7;
    auto svd = dense_svd_oracle(one, 1);
    CHECK(svd.sigma[0] == doctest::Approx(7.0));
    CHECK(svd.u(0, 0) == doctest::Approx(1.0));
    CHECK(svd.v(0, 0) == doctest::Approx(1.0));

    CHECK_THROWS_AS(dense_svd_oracle(RealMatrix::Zero(2, 2), 1), ZeroMatrix);
    RealSparse empty(3, 3);
    SvdConfig cfg;
    cfg.k = 1;
    CHECK_THROWS_AS(lanczos_svd<Real>(empty, cfg), ZeroMatrix);
}

TEST_CASE("oracle guards its size limit") {
    CHECK_THROWS_AS(dense_svd_oracle(RealMatrix::Identity(600, 600), 3), TooLarge);
}

TEST_CASE("argument validation") {
    const RealSparse a = sparse_from_dense(designated_example());
    SvdConfig cfg;
    cfg.k = 3;  // exceeds min(n, p) = 2
    CHECK_THROWS_AS(lanczos_svd<Real>(a, cfg), UsageError);
    cfg.k = 0;
    CHECK_THROWS_AS(lanczos_svd<Real>(a, cfg), UsageError);
    cfg.k = 2;
    cfg.tol = 0.0;
    CHECK_THROWS_AS(lanczos_svd<Real>(a, cfg), UsageError);
    cfg.tol = 1e-10;
    cfg.max_iter = 1;
    CHECK_THROWS_AS(lanczos_svd<Real>(a, cfg), UsageError);
}

TEST_CASE("reconstruct round trips and truncates with Eckart-Young error") {
    const RealMatrix m = designated_example();

    SUBCASE("full rank round trip") {
        auto svd = dense_svd_oracle(m, 2);
        CHECK((reconstruct(svd) - m).norm() <= 1e-10);
    }
    SUBCASE("k=1 truncation error equals sigma_2") {
        auto svd = dense_svd_oracle(m, 1);
        const double err = (reconstruct(svd) - m).norm();
        CHECK(err == doctest::Approx(std::sqrt(5.0)).epsilon(1e-10));
    }
    SUBCASE("rank-1 matrix is exactly recovered at k=1") {
        RealVector x(4), y(3);
        x << 1, -2, 0.5, 3;
        y << 2, 1, -1;
        const RealMatrix r1 = x * y.transpose();
        SvdConfig cfg;
        cfg.k = 1;
        auto svd = lanczos_svd<Real>(sparse_from_dense(r1), cfg);
        CHECK((reconstruct(svd) - r1).norm() <= 1e-10 * r1.norm());
    }
    SUBCASE("size guard") {
        TruncatedSvd<Real> fake;
        fake.u = RealMatrix::Zero(4000, 1);
        fake.v = RealMatrix::Zero(4000, 1);
        fake.sigma = RealVector::Ones(1);
        fake.k = 1;
        CHECK_THROWS_AS(reconstruct(fake), TooLarge);
    }
}

TEST_CASE("rank deficiency reports the achievable count") {
    RealVector x(5), y(4);
    x << 1, 2, 3, 4, 5;
    y << 1, 0, -1, 2;
    const RealMatrix r1 = x * y.transpose();

    SvdConfig cfg;
    cfg.k = 3;
    auto svd = lanczos_svd<Real>(sparse_from_dense(r1), cfg);
    CHECK(svd.k == 1);
    CHECK(svd.rank_deficient);
    CHECK(svd.sigma[0] == doctest::Approx(x.norm() * y.norm()).epsilon(1e-12));

    auto oracle = dense_svd_oracle(r1, 3);
    CHECK(oracle.k == 1);
    CHECK(oracle.rank_deficient);
}

TEST_CASE("sign convention: dominant component of each right vector is positive") {
    const RealSparse a = testutil::random_sparse(30, 20, 0.3, 99);
    SvdConfig cfg;
    cfg.k = 5;
    auto svd = lanczos_svd<Real>(a, cfg);
    for (Index i = 0; i < svd.k; ++i) {
        Index arg = 0;
        svd.v.col(i).cwiseAbs().maxCoeff(&arg);
        CHECK(svd.v(arg, i) > 0.0);
    }
    auto oracle = dense_svd_oracle(RealMatrix(a), 5);
    for (Index i = 0; i < oracle.k; ++i) {
        Index arg = 0;
        oracle.v.col(i).cwiseAbs().maxCoeff(&arg);
        CHECK(oracle.v(arg, i) > 0.0);
    }
}

TEST_CASE("fixed seed gives bit-identical results") {
    const RealSparse a = testutil::random_sparse(40, 60, 0.1, 5);
    SvdConfig cfg;
    cfg.k = 8;
    cfg.seed = 123;
    auto first = lanczos_svd<Real>(a, cfg);
    auto second = lanczos_svd<Real>(a, cfg);
    REQUIRE(first.k == second.k);
    CHECK(first.sigma == second.sigma);
    CHECK(first.u == second.u);
    CHECK(first.v == second.v);

    cfg.seed = 124;
    auto third = lanczos_svd<Real>(a, cfg);
    // Different seed, same subspace: singular values still agree.
    for (Index i = 0; i < first.k; ++i) {
        CHECK(third.sigma[i] == doctest::Approx(first.sigma[i]).epsilon(1e-9));
    }
}

TEST_CASE("repeated singular values match through projectors") {
    // Build a matrix with sigma = (3, 3, 1) from fixed rotations.
    RealMatrix q1 = testutil::random_dense(6, 3, 11);
    RealMatrix q2 = testutil::random_dense(5, 3, 12);
    const Eigen::HouseholderQR<RealMatrix> qr1(q1);
    const Eigen::HouseholderQR<RealMatrix> qr2(q2);
    q1 = qr1.householderQ() * RealMatrix::Identity(6, 3);
    q2 = qr2.householderQ() * RealMatrix::Identity(5, 3);
    RealVector d(3);
    d << 3, 3, 1;
    const RealMatrix a = q1 * d.asDiagonal() * q2.transpose();

    SvdConfig cfg;
    cfg.k = 3;
    auto fast = lanczos_svd<Real>(sparse_from_dense(a), cfg);
    auto exact = dense_svd_oracle(a, 3);
    REQUIRE(fast.k == 3);
    REQUIRE(exact.k == 3);

    // Degenerate pair: compare invariant-subspace projectors, not vectors.
    const RealMatrix p_fast = fast.v.leftCols(2) * fast.v.leftCols(2).transpose();
    const RealMatrix p_exact = exact.v.leftCols(2) * exact.v.leftCols(2).transpose();
    CHECK((p_fast - p_exact).norm() <= 1e-6);
    // Isolated value: vectors agree directly under the sign convention.
    CHECK((fast.v.col(2) - exact.v.col(2)).norm() <= 1e-6);
}

TEST_CASE("symmetric embedding eigenvalues come in +/- sigma pairs") {
    const RealMatrix a = testutil::random_dense(7, 4, 31);
    auto svd = dense_svd_oracle(a, 4);

    RealMatrix embedding = RealMatrix::Zero(11, 11);
    embedding.topRightCorner(7, 4) = a;
    embedding.bottomLeftCorner(4, 7) = a.transpose();
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(embedding);

    // Largest four eigenvalues are +sigma, smallest four are -sigma.
    for (Index i = 0; i < 4; ++i) {
        CHECK(eig.eigenvalues()[10 - i] == doctest::Approx(svd.sigma[i]).epsilon(1e-10));
        CHECK(eig.eigenvalues()[i] == doctest::Approx(-svd.sigma[i]).epsilon(1e-10));
    }
    // The remaining n + p - 2r eigenvalues vanish.
    for (Index i = 4; i < 7; ++i) {
        CHECK(std::abs(eig.eigenvalues()[i]) <= 1e-10);
    }
}

TEST_CASE("thick restarts converge to oracle accuracy") {
    // k = 24 forces a 64-vector basis limit, so the solver must restart.
    const RealSparse a = testutil::random_sparse(300, 200, 0.05, 1);
    SvdConfig cfg;
    cfg.k = 24;
    cfg.tol = 1e-13;
    cfg.max_iter = 5000;
    auto fast = lanczos_svd<Real>(a, cfg);
    CHECK(fast.iterations > 64);  // proof the restart path ran

    auto exact = dense_svd_oracle(RealMatrix(a), 24);
    REQUIRE(fast.k == exact.k);
    for (Index i = 0; i < fast.k; ++i) {
        CHECK(std::abs(fast.sigma[i] - exact.sigma[i]) <= 1e-10 * exact.sigma[0]);
    }
    check_invariants(fast);
}

TEST_CASE("clustered spectra exhaust the iteration budget") {
    std::vector<Eigen::Triplet<double>> triplets;
    for (int i = 0; i < 400; ++i) {
        triplets.emplace_back(i, i, 1.0 + i * 1e-10);
    }
    RealSparse a(400, 400);
    a.setFromTriplets(triplets.begin(), triplets.end());

    SvdConfig cfg;
    cfg.k = 5;
    cfg.tol = 1e-12;
    cfg.max_iter = 70;
    CHECK_THROWS_AS(lanczos_svd<Real>(a, cfg), NoConvergence);
}
