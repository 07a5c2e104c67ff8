// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "spectree/learner.hpp"
#include "spectree/moments.hpp"
#include "spectree/simulate.hpp"
#include "support/test_models.hpp"

using namespace spectree;
using namespace testsupport;

namespace {

SequenceBatch single_long(const std::vector<std::int32_t>& symbols, int n) {
    SequenceBatch b = SequenceBatch::zeros(BatchMode::LongSequence, 1, n, 1, symbols.size());
    for (std::size_t t = 0; t < symbols.size(); ++t) b.at(0, 0, t) = symbols[t];
    b.node_labels = {"n0"};
    return b;
}

double tensor_max_diff(const Tensor3& a, const Tensor3& b) {
    double mx = 0.0;
    for (Eigen::Index i = 0; i < a.dim(0); ++i)
        for (Eigen::Index j = 0; j < a.dim(1); ++j)
            for (Eigen::Index k = 0; k < a.dim(2); ++k)
                mx = std::max(mx, std::abs(a(i, j, k) - b(i, j, k)));
    return mx;
}

}  // namespace

TEST_SUITE_BEGIN("moments");

TEST_CASE("raw_pair counts a single co-occurrence") {
    const SequenceBatch b = single_long({0, 1}, 2);
    EmpiricalMoments source(b);
    const Matrix p = source.raw_pair(0, 0, 1, 2);
    CHECK(p(0, 1) == doctest::Approx(1.0));
    CHECK(p.sum() == doctest::Approx(1.0));
}

TEST_CASE("raw_pair averages over all pair windows of a long sequence") {
    const SequenceBatch b = single_long({0, 1, 0, 1, 0}, 2);
    EmpiricalMoments source(b);
    const Matrix p = source.raw_pair(0, 0, 1, 2);
    CHECK(p(0, 1) == doctest::Approx(0.5));  // 4 windows: (0,1),(1,0),(0,1),(1,0)
    CHECK(p(1, 0) == doctest::Approx(0.5));
    CHECK(p(0, 0) == doctest::Approx(0.0));
}

TEST_CASE("raw_pair transpose symmetry holds exactly") {
    const TreeStructure tree = star_tree(2);
    const ThsHmmParams p = random_params(tree, 2, 4, 3);
    const auto [batch, trace] = sample_triples(p, tree, 500, 11);
    EmpiricalMoments source(batch);
    const Matrix a = source.raw_pair(1, 2, 1, 2);
    const Matrix b = source.raw_pair(2, 1, 2, 1);
    CHECK((a - b.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("raw moments are nonnegative and sum to one") {
    const TreeStructure tree = star_tree(2);
    const ThsHmmParams p = random_params(tree, 2, 4, 19);
    const auto [batch, trace] = sample_long(p, tree, 400, 50, 7);
    EmpiricalMoments source(batch);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            const Matrix pair = source.raw_pair(a, b, 1, 2);
            CHECK(pair.minCoeff() >= 0.0);
            CHECK(pair.sum() == doctest::Approx(1.0).epsilon(1e-9));
        }
}

TEST_CASE("disjoint windows step by three") {
    const SequenceBatch b = single_long({0, 1, 0, 1, 0, 1, 0}, 2);
    EmpiricalMoments overlap(b, WindowMode::Overlap);
    EmpiricalMoments disjoint(b, WindowMode::Disjoint);
    CHECK(overlap.sample_count() == doctest::Approx(5.0));   // T-2 triples
    CHECK(disjoint.sample_count() == doctest::Approx(2.0));  // starts 0 and 3
}

TEST_CASE("projected_pair on single nodes equals U' raw_pair U") {
    const TreeStructure tree = make_tree({-1});
    const ThsHmmParams p = random_params(tree, 2, 4, 29);
    const auto [batch, trace] = sample_triples(p, tree, 300, 3);
    EmpiricalMoments source(batch);
    const ProjectionBasis basis = estimate_ranges(source, tree, 2);

    const Matrix direct = projected_pair(source, basis, {0}, {0}, 1, 2);
    const Matrix sandwich = basis.u[0].transpose() * source.raw_pair(0, 0, 1, 2) * basis.u[0];
    CHECK((direct - sandwich).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("product projections equal the dense meta-space computation") {
    const TreeStructure tree = star_tree(2);
    const ThsHmmParams p = random_params(tree, 2, 3, 37);
    const auto [batch, trace] = sample_triples(p, tree, 50, 5);
    EmpiricalMoments source(batch);
    const ProjectionBasis basis = estimate_ranges(source, tree, 2);

    const std::vector<int> path = {0, 1};
    const Matrix u_meta = kron_list({basis.u[0], basis.u[1]});

    SUBCASE("pairs") {
        for (const auto [la, lb] : std::vector<std::pair<int, int>>{{1, 3}, {1, 2}, {2, 3}}) {
            const Matrix dense = dense_meta_pair(batch, path, path, la, lb);
            const Matrix want = u_meta.transpose() * dense * u_meta;
            const Matrix got = projected_pair(source, basis, path, path, la, lb);
            CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    SUBCASE("mixed meta and single-node groups") {
        const Matrix dense = dense_meta_pair(batch, {1}, path, 2, 3);
        const Matrix want = basis.u[1].transpose() * dense * u_meta;
        const Matrix got = projected_pair(source, basis, {1}, path, 2, 3);
        CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("triples") {
        const Tensor3 dense = dense_meta_triple(batch, path, 1);
        const Tensor3 want = contract3(dense, u_meta, basis.u[1], u_meta);
        const Tensor3 got = projected_triple(source, basis, path, 1);
        CHECK(tensor_max_diff(got, want) < 1e-12);
    }
}

TEST_CASE("identity projections reproduce the raw meta matrix") {
    const TreeStructure tree = star_tree(2);
    const ThsHmmParams p = random_params(tree, 3, 3, 41);  // m = n
    const auto [batch, trace] = sample_triples(p, tree, 40, 9);
    EmpiricalMoments source(batch);

    const Matrix id = Matrix::Identity(3, 3);
    ProjGroup a{{0, 1}, {&id, &id}, 1};
    ProjGroup b{{0, 1}, {&id, &id}, 3};
    const Matrix got = source.projected_pair(a, b);
    const Matrix dense = dense_meta_pair(batch, {0, 1}, {0, 1}, 1, 3);
    CHECK((got - dense).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("projected_triple of a single sequence is one outer product") {
    const TreeStructure tree = make_tree({-1});
    const ThsHmmParams p = random_params(tree, 2, 4, 43);
    const auto [batch, trace] = sample_triples(p, tree, 1, 13);
    EmpiricalMoments source(batch);
    const ProjectionBasis basis = estimate_ranges(source, tree, 2);

    const Tensor3 got = projected_triple(source, basis, {0}, 0);
    const Vector a = basis.u[0].row(batch.at(0, 0, 0)).transpose();
    const Vector b = basis.u[0].row(batch.at(0, 0, 1)).transpose();
    const Vector c = basis.u[0].row(batch.at(0, 0, 2)).transpose();
    Tensor3 want(2, 2, 2);
    want.add_outer(a, b, c);
    CHECK(tensor_max_diff(got, want) < 1e-15);
}

TEST_CASE("permuting sequence order leaves projected moments unchanged") {
    const TreeStructure tree = star_tree(2);
    const ThsHmmParams p = random_params(tree, 2, 3, 47);
    const auto [batch, trace] = sample_triples(p, tree, 60, 21);
    SequenceBatch reversed = batch;
    for (std::size_t s = 0; s < batch.sequences; ++s)
        for (int u = 0; u < batch.node_count; ++u)
            for (std::size_t t = 0; t < batch.length; ++t)
                reversed.at(batch.sequences - 1 - s, u, t) = batch.at(s, u, t);

    EmpiricalMoments s1(batch), s2(reversed);
    const ProjectionBasis basis = estimate_ranges(s1, tree, 2);
    const Tensor3 t1 = projected_triple(s1, basis, {0, 1}, 1);
    const Tensor3 t2 = projected_triple(s2, basis, {0, 1}, 1);
    CHECK(tensor_max_diff(t1, t2) < 1e-14);
}

TEST_CASE("fused path moments equal the granular composition") {
    const TreeStructure tree = star_tree(2);
    const ThsHmmParams p = random_params(tree, 2, 4, 53);
    const auto [batch, trace] = sample_triples(p, tree, 200, 17);
    EmpiricalMoments source(batch);
    const ProjectionBasis basis = estimate_ranges(source, tree, 2);

    const NodeProjectedMoments fused = source.path_moments(tree, basis, 1);
    const NodeProjectedMoments composed = source.MomentSource::path_moments(tree, basis, 1);
    CHECK((fused.p23 - composed.p23).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((fused.p13 - composed.p13).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((fused.p21 - composed.p21).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((fused.p12 - composed.p12).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(tensor_max_diff(fused.t123, composed.t123) < 1e-15);
    CHECK(fused.samples == composed.samples);
    // Transpose identities hold by construction.
    CHECK((fused.p31 - fused.p13.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((fused.p12 - fused.p21.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("results are identical for any thread count") {
    const TreeStructure tree = star_tree(2);
    const ThsHmmParams p = random_params(tree, 2, 3, 59);
    const auto [batch, trace] = sample_triples(p, tree, 40000, 23);  // several blocks
    EmpiricalMoments serial(batch, WindowMode::Overlap, 1);
    EmpiricalMoments parallel(batch, WindowMode::Overlap, 4);
    const ProjectionBasis basis = estimate_ranges(serial, tree, 2);

    const NodeProjectedMoments a = serial.path_moments(tree, basis, 2);
    const NodeProjectedMoments b = parallel.path_moments(tree, basis, 2);
    CHECK((a.p13 - b.p13).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.p23 - b.p23).cwiseAbs().maxCoeff() == 0.0);
    CHECK(tensor_max_diff(a.t123, b.t123) == 0.0);
}

TEST_CASE("population moments: single-node hand computation") {
    const TreeStructure tree = make_tree({-1});
    ThsHmmParams p;
    p.m = 2;
    p.n = 2;
    p.obs.assign(1, Matrix::Identity(2, 2));
    p.trans_root.resize(2, 2);
    p.trans_root << 0.7, 0.4, 0.3, 0.6;
    p.init_root.resize(2);
    p.init_root << 0.3, 0.7;
    p.init.resize(1);
    p.trans.resize(1);

    PopulationMoments pop(p, tree);
    const Matrix p12 = pop.raw_pair(0, 0, 1, 2);
    // P(x1=i, x2=j) = W_i T(j,i) with O = I.
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(p12(i, j) == doctest::Approx(p.init_root[i] * p.trans_root(j, i)));
}

TEST_CASE("population moments: uniform model gives flat moments") {
    const TreeStructure tree = star_tree(1);
    ThsHmmParams p;
    p.m = 2;
    p.n = 3;
    p.obs.assign(2, Matrix::Constant(3, 2, 1.0 / 3));
    p.trans_root = Matrix::Constant(2, 2, 0.5);
    p.init_root = Vector::Constant(2, 0.5);
    p.init.assign(2, Matrix::Constant(2, 2, 0.5));
    Tensor3 t(2, 2, 2);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) t(a, b, c) = 0.5;
    p.trans.assign(2, t);

    PopulationMoments pop(p, tree);
    const Matrix pair = pop.raw_pair(0, 1, 1, 2);
    CHECK((pair.array() - 1.0 / 9).abs().maxCoeff() < 1e-15);

    ProjGroup a{{0}, {nullptr}, 1}, b{{1}, {nullptr}, 2}, c{{1}, {nullptr}, 3};
    const Tensor3 triple = pop.projected_triple(a, b, c);
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 3; ++j)
            for (Eigen::Index k = 0; k < 3; ++k)
                CHECK(triple(i, j, k) == doctest::Approx(1.0 / 27));
}

TEST_CASE("population moments match the independent full-tree enumeration") {
    const TreeStructure tree = star_tree(2);
    const ThsHmmParams p = random_params(tree, 2, 3, 61);
    PopulationMoments pop(p, tree);

    SUBCASE("raw pairs at every lag combination") {
        for (int la = 1; la <= 3; ++la)
            for (int lb = 1; lb <= 3; ++lb) {
                const Matrix got = pop.raw_pair(1, 0, la, lb);
                const Matrix want = oracle_dense_pair(p, tree, {1}, la, {0}, lb);
                CHECK((got - want).cwiseAbs().maxCoeff() < 1e-14);
            }
    }
    SUBCASE("meta pairs along a path") {
        const std::vector<int> path = {0, 2};
        ProjGroup a{path, {nullptr, nullptr}, 1};
        ProjGroup b{path, {nullptr, nullptr}, 3};
        const Matrix got = pop.projected_pair(a, b);
        const Matrix want = oracle_dense_pair(p, tree, path, 1, path, 3);
        CHECK((got - want).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("same-time pairs across nodes") {
        const Matrix got = pop.raw_pair(1, 0, 1, 1);
        const Matrix want = oracle_dense_pair(p, tree, {1}, 1, {0}, 1);
        CHECK((got - want).cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("triples with repeated lags") {
        ProjGroup a{{1}, {nullptr}, 2}, b{{0}, {nullptr}, 2}, c{{1}, {nullptr}, 1};
        const Tensor3 got = pop.projected_triple(a, b, c);
        // Oracle: enumerate everything.
        Tensor3 want(3, 3, 3);
        enumerate_joint3(p, tree, [&](const std::vector<std::vector<int>>& z, double pr) {
            want.add_outer(p.obs[1].col(z[1][1]), p.obs[0].col(z[1][0]), p.obs[1].col(z[0][1]), pr);
        });
        CHECK(tensor_max_diff(got, want) < 1e-14);
    }
}

TEST_CASE("empirical raw_pair converges to the population value") {
    const TreeStructure tree = make_tree({-1});
    const ThsHmmParams p = random_params(tree, 2, 3, 67);
    PopulationMoments pop(p, tree);
    const Matrix want = pop.raw_pair(0, 0, 1, 2);

    const std::size_t n_seq = 1000000;
    const auto [batch, trace] = sample_triples(p, tree, n_seq, 71);
    EmpiricalMoments source(batch);
    const Matrix got = source.raw_pair(0, 0, 1, 2);
    CHECK((got - want).norm() < 15.0 / std::sqrt(static_cast<double>(n_seq)));
}

TEST_CASE("empirical-to-population error shrinks along an N ladder") {
    const TreeStructure tree = make_tree({-1});
    const ThsHmmParams p = random_params(tree, 2, 3, 73);
    PopulationMoments pop(p, tree);
    const Matrix want = pop.raw_pair(0, 0, 1, 2);

    std::vector<double> errors;
    for (const std::size_t n_seq : {100UL, 1000UL, 10000UL, 100000UL}) {
        const auto [batch, trace] = sample_triples(p, tree, n_seq, 77);
        EmpiricalMoments source(batch);
        errors.push_back((source.raw_pair(0, 0, 1, 2) - want).norm());
    }
    int inversions = 0;
    for (std::size_t i = 1; i < errors.size(); ++i)
        if (errors[i] > errors[i - 1]) ++inversions;
    CHECK(inversions <= 1);
    CHECK(errors.back() < errors.front());
}

TEST_CASE("path chain joints match the independent enumeration") {
    const TreeStructure tree = star_tree(2);
    const ThsHmmParams p = random_params(tree, 2, 4, 79);
    const std::vector<int> path = {0, 1};
    const PathChain chain = build_path_chain(p, tree, path, 4096);

    Matrix joint12_want = Matrix::Zero(4, 4);
    enumerate_joint3(p, tree, [&](const std::vector<std::vector<int>>& z, double pr) {
        const int s1 = z[0][0] * 2 + z[0][1];
        const int s2 = z[1][0] * 2 + z[1][1];
        joint12_want(s1, s2) += pr;
    });
    const Matrix joint12 = chain.rho.asDiagonal() * chain.trans.transpose();
    CHECK((joint12 - joint12_want).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("meta cap is enforced") {
    const TreeStructure tree = chain_tree(3);
    const ThsHmmParams p = random_params(tree, 4, 4, 83);
    CHECK_THROWS_AS(build_path_chain(p, tree, {0, 1, 2}, 16), DataError);
    PopulationMoments pop(p, tree, 16);
    ProjGroup g{{2}, {nullptr}, 1};
    CHECK_THROWS_AS(pop.projected_single(g), DataError);
}

TEST_CASE("empty batches and bad lags are rejected") {
    SequenceBatch empty = SequenceBatch::zeros(BatchMode::Triples, 1, 2, 0, 3);
    EmpiricalMoments source(empty);
    CHECK_THROWS_AS(source.raw_pair(0, 0, 1, 2), DataError);

    const SequenceBatch b = single_long({0, 1, 0}, 2);
    EmpiricalMoments s2(b);
    CHECK_THROWS_AS(s2.raw_pair(0, 0, 1, 4), DataError);
    CHECK_THROWS_AS(s2.raw_pair(0, 1, 1, 2), DataError);  // node out of range
}

TEST_SUITE_END();
