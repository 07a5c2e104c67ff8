// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spectree/batch.hpp"
#include "spectree/model.hpp"
#include "spectree/moments.hpp"

namespace spectree {

struct DecoderConfig {
    std::size_t meta_cap = 4096;
    bool log_space = false;  // default: per-step scaled recursions
};

struct PosteriorTrace {
    int num_states = 0;
    // posterior[node][seq] is an m x T matrix of smoothed marginals.
    std::vector<std::vector<Matrix>> posterior;
    // labels[node][seq][t] = argmax state
    std::vector<std::vector<std::vector<std::int32_t>>> labels;
    std::vector<std::string> warnings;
};

// Forward-backward on the coalesced meta-state chain of each root-to-leaf
// path; each node's marginal is taken from the deepest path containing it
// (ties resolved toward the smallest leaf index).
PosteriorTrace posterior_decode(const ThsHmmParams& params, const TreeStructure& tree,
                                const SequenceBatch& batch, const DecoderConfig& config = {});

// Fraction of positions where perm[argmax] equals the ground truth, per node.
// perm[u][predicted_state] = aligned true state.
std::vector<double> label_accuracy(const PosteriorTrace& trace, const StateTrace& truth,
                                   const std::vector<std::vector<int>>& perm);

}  // namespace spectree
