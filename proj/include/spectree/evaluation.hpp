// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "spectree/learner.hpp"
#include "spectree/model.hpp"

namespace spectree {

// Exact minimum-cost assignment (Hungarian method with potentials) on a
// square cost matrix; returns col_for_row.
std::vector<int> min_cost_assignment(const Matrix& cost);

struct AlignmentResult {
    // learned_for_true[i] = column of O-hat matched to column i of O.
    std::vector<int> learned_for_true;
    double frobenius_error = 0.0;
    double operator_error = 0.0;

    std::vector<int> true_for_learned() const;
};

// Minimum-cost perfect matching on column-pair Euclidean distances.
AlignmentResult align(const Matrix& o_true, const Matrix& o_hat);

struct F1Entry {
    std::size_t tp = 0, fp = 0, fn = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0;
};

// Standard precision/recall/F1 for one positive state; F1 = 0 when
// precision + recall = 0.
F1Entry f1_score(std::span<const std::int32_t> pred, std::span<const std::int32_t> truth,
                 int positive);

struct ConsistencyCell {
    std::size_t n = 0;
    int trial = 0;
    int node = 0;
    double frobenius = 0.0;
    double op = 0.0;
    bool failed = false;
};

struct ConsistencyTable {
    std::vector<std::size_t> ladder;
    int trials = 0;
    std::vector<ConsistencyCell> cells;

    // Median aligned Frobenius error over trials for (n, node); NaN if every
    // trial failed.
    double median_error(std::size_t n, int node) const;
    double max_node_median(std::size_t n) const;
};

// For each N in the ladder: simulate iid triples, learn observations, align
// against the truth, record per-node errors. Deterministic via per-cell
// derived seeds.
ConsistencyTable consistency_curve(const ThsHmmParams& params, const TreeStructure& tree,
                                   const std::vector<std::size_t>& ladder, int trials,
                                   std::uint64_t seed, const LearnerConfig& config);

void write_consistency_tsv(std::ostream& out, const ConsistencyTable& table,
                           const TreeStructure& tree);

}  // namespace spectree
