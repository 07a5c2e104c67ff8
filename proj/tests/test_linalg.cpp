// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "spectree/linalg.hpp"
#include "spectree/rng.hpp"

using namespace spectree;

namespace {

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = 2.0 * rng.next_double() - 1.0;
    return m;
}

Tensor3 random_tensor(Eigen::Index d0, Eigen::Index d1, Eigen::Index d2, std::uint64_t seed) {
    SplitMix64 rng(seed);
    Tensor3 t(d0, d1, d2);
    for (Eigen::Index i = 0; i < d0; ++i)
        for (Eigen::Index j = 0; j < d1; ++j)
            for (Eigen::Index k = 0; k < d2; ++k) t(i, j, k) = 2.0 * rng.next_double() - 1.0;
    return t;
}

// Brute-force contraction over all index triples.
Tensor3 contract3_oracle(const Tensor3& m, const Matrix& v1, const Matrix& v2, const Matrix& v3) {
    Tensor3 out(v1.cols(), v2.cols(), v3.cols());
    for (Eigen::Index a = 0; a < v1.cols(); ++a)
        for (Eigen::Index b = 0; b < v2.cols(); ++b)
            for (Eigen::Index c = 0; c < v3.cols(); ++c) {
                double acc = 0.0;
                for (Eigen::Index i = 0; i < m.dim(0); ++i)
                    for (Eigen::Index j = 0; j < m.dim(1); ++j)
                        for (Eigen::Index k = 0; k < m.dim(2); ++k)
                            acc += m(i, j, k) * v1(i, a) * v2(j, b) * v3(k, c);
                out(a, b, c) = acc;
            }
    return out;
}

double max_diff(const Tensor3& a, const Tensor3& b) {
    REQUIRE(a.dim(0) == b.dim(0));
    REQUIRE(a.dim(1) == b.dim(1));
    REQUIRE(a.dim(2) == b.dim(2));
    double mx = 0.0;
    for (Eigen::Index i = 0; i < a.dim(0); ++i)
        for (Eigen::Index j = 0; j < a.dim(1); ++j)
            for (Eigen::Index k = 0; k < a.dim(2); ++k)
                mx = std::max(mx, std::abs(a(i, j, k) - b(i, j, k)));
    return mx;
}

}  // namespace

TEST_SUITE_BEGIN("linalg");

TEST_CASE("contract3 with identity matrices is the identity map") {
    const Tensor3 m = random_tensor(2, 2, 2, 11);
    const Matrix id = Matrix::Identity(2, 2);
    const Tensor3 out = contract3(m, id, id, id);
    CHECK(max_diff(out, m) == 0.0);
}

TEST_CASE("contract3 selects a basis entry with one-hot vectors") {
    Tensor3 m(3, 3, 3);
    m(0, 0, 0) = 1.0;
    Matrix e1 = Matrix::Zero(3, 1);
    e1(0, 0) = 1.0;
    const Tensor3 out = contract3(m, e1, e1, e1);
    CHECK(out.dim(0) == 1);
    CHECK(out(0, 0, 0) == doctest::Approx(1.0));
}

TEST_CASE("contract3 matches the triple-loop oracle on random input") {
    const Tensor3 m = random_tensor(2, 3, 2, 42);
    const Matrix v1 = random_matrix(2, 4, 1);
    const Matrix v2 = random_matrix(3, 2, 2);
    const Matrix v3 = random_matrix(2, 3, 3);
    CHECK(max_diff(contract3(m, v1, v2, v3), contract3_oracle(m, v1, v2, v3)) < 1e-13);
}

TEST_CASE("contract3 rejects dimension mismatches") {
    const Tensor3 m = random_tensor(2, 3, 2, 7);
    const Matrix bad = random_matrix(4, 2, 8);
    CHECK_THROWS_AS(contract3(m, bad, bad, bad), std::invalid_argument);
}

TEST_CASE("contract2 equals V1' M V2") {
    const Matrix id = Matrix::Identity(2, 2);
    CHECK(contract2(id, id, id).isApprox(id));

    Matrix m(2, 2);
    m << 1, 2, 3, 4;
    CHECK(contract2(m, id, id).isApprox(m));

    const Matrix a = random_matrix(3, 3, 5);
    const Matrix v1 = random_matrix(3, 2, 6);
    const Matrix v2 = random_matrix(3, 4, 7);
    const Matrix got = contract2(a, v1, v2);
    Matrix want = Matrix::Zero(2, 4);
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 4; ++q)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) want(p, q) += a(i, j) * v1(i, p) * v2(j, q);
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("kron basics") {
    const Matrix id2 = Matrix::Identity(2, 2);
    CHECK(kron(id2, id2).isApprox(Matrix::Identity(4, 4)));

    Matrix a(2, 1), b(2, 1);
    a << 1, 0;
    b << 0, 1;
    Matrix want(4, 1);
    want << 0, 1, 0, 0;
    CHECK(kron(a, b).isApprox(want));
}

TEST_CASE("kron matches the entrywise definition on random input") {
    const Matrix a = random_matrix(2, 2, 21);
    const Matrix b = random_matrix(3, 2, 22);
    const Matrix got = kron(a, b);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 3; ++k)
                for (int l = 0; l < 2; ++l)
                    CHECK(got(i * 3 + k, j * 2 + l) == doctest::Approx(a(i, j) * b(k, l)));
}

TEST_CASE("kron index convention verified by one-hot probes") {
    // Row (i_a, i_b) must map to i_a*rows(b) + i_b for every basis pair.
    for (int ra = 1; ra <= 3; ++ra)
        for (int rb = 1; rb <= 3; ++rb)
            for (int ia = 0; ia < ra; ++ia)
                for (int ib = 0; ib < rb; ++ib) {
                    Matrix ea = Matrix::Zero(ra, 1), eb = Matrix::Zero(rb, 1);
                    ea(ia, 0) = 1.0;
                    eb(ib, 0) = 1.0;
                    const Matrix k = kron(ea, eb);
                    for (int r = 0; r < ra * rb; ++r)
                        CHECK(k(r, 0) == (r == ia * rb + ib ? 1.0 : 0.0));
                }
}

TEST_CASE("truncated_svd on a diagonal matrix") {
    Matrix a = Matrix::Zero(3, 3);
    a(0, 0) = 3.0;
    a(1, 1) = 2.0;
    a(2, 2) = 1.0;
    const SvdResult svd = truncated_svd(a, 2);
    CHECK(svd.singular_values[0] == doctest::Approx(3.0));
    CHECK(svd.singular_values[1] == doctest::Approx(2.0));
    // Left vectors span e1, e2.
    CHECK(std::abs(svd.left(0, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(svd.left(1, 1)) == doctest::Approx(1.0));
}

TEST_CASE("truncated_svd of the identity has unit singular values") {
    const SvdResult svd = truncated_svd(Matrix::Identity(4, 4), 4);
    for (int i = 0; i < 4; ++i) CHECK(svd.singular_values[i] == doctest::Approx(1.0));
}

TEST_CASE("truncated_svd reconstructs a full-rank matrix") {
    const Matrix a = random_matrix(6, 4, 99);
    const SvdResult svd = truncated_svd(a, 4);
    const Matrix rec = svd.left * svd.singular_values.asDiagonal() * svd.right.transpose();
    CHECK((rec - a).cwiseAbs().maxCoeff() < 1e-10);
    // Orthonormal columns.
    CHECK((svd.left.transpose() * svd.left - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);
    // Deterministic sign: largest-magnitude entry of each left vector positive.
    for (int j = 0; j < 4; ++j) {
        Eigen::Index imax = 0;
        svd.left.col(j).cwiseAbs().maxCoeff(&imax);
        CHECK(svd.left(imax, j) > 0.0);
    }
}

TEST_CASE("truncated_svd rejects k out of range") {
    CHECK_THROWS_AS(truncated_svd(Matrix::Identity(3, 3), 4), std::invalid_argument);
    CHECK_THROWS_AS(truncated_svd(Matrix::Identity(3, 3), 0), std::invalid_argument);
}

TEST_CASE("pinv basics") {
    CHECK(pinv(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3)));

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 2.0;
    const Matrix p = pinv(d);
    CHECK(p(0, 0) == doctest::Approx(0.5));
    CHECK(p(1, 1) == doctest::Approx(0.0));
}

TEST_CASE("pinv of a full-rank matrix is the inverse") {
    Matrix a = random_matrix(4, 4, 31);
    a += 4.0 * Matrix::Identity(4, 4);  // keep it comfortably invertible
    const Matrix p = pinv(a);
    CHECK((a * p - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("pinv satisfies the Penrose identities on random matrices") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const Matrix a = random_matrix(5, 3, 100 + seed);
        const Matrix p = pinv(a);
        CHECK((a * p * a - a).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((p * a * p - p).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((a * p - (a * p).transpose()).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((p * a - (p * a).transpose()).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("simplex projection") {
    Vector p(3);
    p << 0.2, 0.5, 0.3;
    CHECK((simplex_project(p) - p).cwiseAbs().maxCoeff() < 1e-15);

    Vector v(2);
    v << 1.1, -0.1;
    const Vector q = simplex_project(v);
    CHECK(q[0] == doctest::Approx(1.0));
    CHECK(q[1] == doctest::Approx(0.0));

    // Always lands on the simplex.
    SplitMix64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        Vector x(5);
        for (int i = 0; i < 5; ++i) x[i] = 4.0 * rng.next_double() - 2.0;
        const Vector y = simplex_project(x);
        CHECK(y.minCoeff() >= 0.0);
        CHECK(y.sum() == doctest::Approx(1.0));
    }
}

TEST_CASE("tensor power-map contractions match explicit loops") {
    const Tensor3 g = random_tensor(3, 3, 3, 55);
    SplitMix64 rng(56);
    Vector v(3);
    for (int i = 0; i < 3; ++i) v[i] = rng.next_gaussian();

    const Vector got = g.contract_last_two(v);
    Vector want = Vector::Zero(3);
    double want_scalar = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
                want[i] += g(i, j, k) * v[j] * v[k];
                want_scalar += g(i, j, k) * v[i] * v[j] * v[k];
            }
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(g.apply(v, v, v) == doctest::Approx(want_scalar));
}

TEST_CASE("tensor allocation census tracks live elements") {
    const std::int64_t before = tensor_alloc::live_elements();
    {
        Tensor3 t(4, 5, 6);
        CHECK(tensor_alloc::live_elements() == before + 120);
        Tensor3 copy = t;
        CHECK(tensor_alloc::live_elements() == before + 240);
        Tensor3 moved = std::move(copy);
        CHECK(tensor_alloc::live_elements() == before + 240);
    }
    CHECK(tensor_alloc::live_elements() == before);
}

TEST_SUITE_END();
