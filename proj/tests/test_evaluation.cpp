// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "spectree/evaluation.hpp"
#include "support/test_models.hpp"

using namespace spectree;
using namespace testsupport;

namespace {

double assignment_cost(const Matrix& cost, const std::vector<int>& col_for_row) {
    double total = 0.0;
    for (std::size_t i = 0; i < col_for_row.size(); ++i)
        total += cost(static_cast<Eigen::Index>(i), col_for_row[i]);
    return total;
}

double brute_force_min_cost(const Matrix& cost) {
    std::vector<int> perm(static_cast<size_t>(cost.rows()));
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    double best = std::numeric_limits<double>::infinity();
    do {
        best = std::min(best, assignment_cost(cost, perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace

TEST_SUITE_BEGIN("evaluation");

TEST_CASE("assignment solves a case where greedy matching fails") {
    Matrix cost(3, 3);
    cost << 1.0, 2.0, 9.0,
            1.1, 9.0, 9.0,
            9.0, 2.1, 9.0;
    // Greedy on rows would take (0,0) then force (1,?) and (2,?) into 9s;
    // the optimum is (0,2),(1,0),(2,1) at cost 9 + 1.1 + 2.1... the exact
    // optimum is whatever the exhaustive search says.
    const std::vector<int> got = min_cost_assignment(cost);
    CHECK(assignment_cost(cost, got) == doctest::Approx(brute_force_min_cost(cost)));
}

TEST_CASE("assignment matches exhaustive search on random costs") {
    SplitMix64 rng(3);
    for (int trial = 0; trial < 25; ++trial) {
        const int m = 2 + static_cast<int>(trial % 4);
        Matrix cost(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) cost(i, j) = rng.next_double();
        const std::vector<int> got = min_cost_assignment(cost);
        // A valid permutation...
        std::vector<int> seen(static_cast<size_t>(m), 0);
        for (const int j : got) seen[static_cast<size_t>(j)]++;
        for (const int c : seen) CHECK(c == 1);
        // ...achieving the optimum.
        CHECK(assignment_cost(cost, got) == doctest::Approx(brute_force_min_cost(cost)));
    }
}

TEST_CASE("align recovers column reversals with zero error") {
    SplitMix64 rng(7);
    const Matrix o = random_stochastic(5, 3, rng);
    Matrix reversed(5, 3);
    for (int j = 0; j < 3; ++j) reversed.col(j) = o.col(2 - j);
    const AlignmentResult r = align(o, reversed);
    CHECK(r.frobenius_error < 1e-12);
    CHECK(r.operator_error < 1e-12);
    CHECK(r.learned_for_true == std::vector<int>{2, 1, 0});
    CHECK(r.true_for_learned() == std::vector<int>{2, 1, 0});
}

TEST_CASE("align on identical matrices returns the identity permutation") {
    SplitMix64 rng(11);
    const Matrix o = random_stochastic(4, 3, rng);
    const AlignmentResult r = align(o, o);
    CHECK(r.frobenius_error == doctest::Approx(0.0));
    CHECK(r.learned_for_true == std::vector<int>{0, 1, 2});
}

TEST_CASE("align error is zero exactly for column permutations") {
    SplitMix64 rng(13);
    const Matrix o = random_stochastic(6, 4, rng);
    Matrix permuted(6, 4);
    const std::vector<int> perm = {2, 0, 3, 1};
    for (int j = 0; j < 4; ++j) permuted.col(perm[static_cast<size_t>(j)]) = o.col(j);
    CHECK(align(o, permuted).frobenius_error < 1e-12);

    Matrix noisy = permuted;
    noisy(0, 0) += 1e-3;
    CHECK(align(o, noisy).frobenius_error > 1e-4);
}

TEST_CASE("align reports both operator and Frobenius norms") {
    Matrix o = Matrix::Identity(3, 3);
    Matrix o_hat = o;
    o_hat(0, 0) = 0.8;
    o_hat(1, 0) = 0.2;
    const AlignmentResult r = align(o, o_hat);
    const Matrix diff = o - o_hat;
    CHECK(r.frobenius_error == doctest::Approx(diff.norm()));
    CHECK(r.operator_error <= r.frobenius_error + 1e-15);
    CHECK(r.operator_error > 0.0);
}

TEST_CASE("align rejects shape mismatches") {
    CHECK_THROWS_AS(align(Matrix::Identity(3, 3), Matrix::Identity(4, 4)), DataError);
}

TEST_CASE("f1 scores") {
    const std::vector<std::int32_t> truth = {1, 1, 0, 0, 1, 0};

    SUBCASE("perfect prediction") {
        const F1Entry e = f1_score(truth, truth, 1);
        CHECK(e.f1 == doctest::Approx(1.0));
        CHECK(e.precision == doctest::Approx(1.0));
        CHECK(e.recall == doctest::Approx(1.0));
    }
    SUBCASE("no predicted positives") {
        const std::vector<std::int32_t> pred = {0, 0, 0, 0, 0, 0};
        const F1Entry e = f1_score(pred, truth, 1);
        CHECK(e.f1 == doctest::Approx(0.0));
        CHECK(e.precision == doctest::Approx(0.0));
        CHECK(e.recall == doctest::Approx(0.0));
    }
    SUBCASE("tp=2 fp=2 fn=2") {
        const std::vector<std::int32_t> pred2 = {1, 1, 1, 1, 0, 0};
        const std::vector<std::int32_t> truth2 = {1, 1, 0, 0, 1, 1};
        const F1Entry e = f1_score(pred2, truth2, 1);
        CHECK(e.tp == 2);
        CHECK(e.fp == 2);
        CHECK(e.fn == 2);
        CHECK(e.precision == doctest::Approx(0.5));
        CHECK(e.recall == doctest::Approx(0.5));
        CHECK(e.f1 == doctest::Approx(0.5));
    }
}

TEST_CASE("f1 is invariant under simultaneous relabeling") {
    const std::vector<std::int32_t> pred = {0, 1, 1, 0, 1, 0, 0};
    const std::vector<std::int32_t> truth = {0, 1, 0, 0, 1, 1, 0};
    const F1Entry direct = f1_score(pred, truth, 1);

    std::vector<std::int32_t> pred_swapped, truth_swapped;
    for (const auto z : pred) pred_swapped.push_back(1 - z);
    for (const auto z : truth) truth_swapped.push_back(1 - z);
    const F1Entry swapped = f1_score(pred_swapped, truth_swapped, 0);
    CHECK(direct.f1 == doctest::Approx(swapped.f1));
    CHECK(direct.precision == doctest::Approx(swapped.precision));
    CHECK(direct.recall == doctest::Approx(swapped.recall));
}

TEST_CASE("consistency curve is deterministic in the master seed") {
    const TreeStructure tree = make_tree({-1});
    const ThsHmmParams p = random_params(tree, 2, 4, 17);
    LearnerConfig cfg;
    const std::vector<std::size_t> ladder = {200, 800};
    const ConsistencyTable a = consistency_curve(p, tree, ladder, 2, 99, cfg);
    const ConsistencyTable b = consistency_curve(p, tree, ladder, 2, 99, cfg);
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        CHECK(a.cells[i].frobenius == b.cells[i].frobenius);
        CHECK(a.cells[i].op == b.cells[i].op);
    }
}

TEST_CASE("consistency curve error shrinks with sample size") {
    const TreeStructure tree = make_tree({-1});
    const ThsHmmParams p = random_params(tree, 2, 4, 19);
    LearnerConfig cfg;
    const std::vector<std::size_t> ladder = {300, 30000};
    const ConsistencyTable table = consistency_curve(p, tree, ladder, 3, 7, cfg);
    CHECK(table.max_node_median(30000) < table.max_node_median(300));
}

TEST_CASE("deterministic models are recovered exactly at any sample size") {
    // One-hot emissions and a deterministic switching chain: sampling noise
    // moves the moment values but never their support, so the recovered
    // observation columns snap to the exact one-hots.
    const TreeStructure tree = make_tree({-1});
    ThsHmmParams p;
    p.m = 2;
    p.n = 2;
    p.obs.assign(1, Matrix::Identity(2, 2));
    p.trans_root.resize(2, 2);
    p.trans_root << 0, 1, 1, 0;
    p.init_root = Vector::Constant(2, 0.5);
    p.init.resize(1);
    p.trans.resize(1);

    LearnerConfig cfg;
    const ConsistencyTable table = consistency_curve(p, tree, {1000, 2000}, 1, 21, cfg);
    for (const auto& cell : table.cells) {
        CHECK(!cell.failed);
        CHECK(cell.frobenius < 1e-6);
    }
}

TEST_CASE("consistency table writes a versioned TSV") {
    const TreeStructure tree = make_tree({-1});
    const ThsHmmParams p = random_params(tree, 2, 4, 23);
    LearnerConfig cfg;
    const ConsistencyTable table = consistency_curve(p, tree, {200}, 1, 3, cfg);
    std::ostringstream out;
    write_consistency_tsv(out, table, tree);
    CHECK(out.str().rfind("spectree-format v1\n", 0) == 0);
    CHECK(out.str().find("frobenius_error") != std::string::npos);
}

TEST_SUITE_END();
