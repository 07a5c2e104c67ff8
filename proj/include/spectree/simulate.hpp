// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>

#include "spectree/batch.hpp"
#include "spectree/model.hpp"
#include "spectree/tree.hpp"

namespace spectree {

// N iid sequences of three consecutive observations, sampled top-down per
// time step (root state, then children conditioned on own previous state and
// parent's current state). One independent RNG stream per sequence, so
// output is identical regardless of generation order.
std::pair<SequenceBatch, StateTrace> sample_triples(const ThsHmmParams& params,
                                                    const TreeStructure& tree, std::size_t n,
                                                    std::uint64_t seed);

// One chain of length `length` after discarding `burn_in` steps.
std::pair<SequenceBatch, StateTrace> sample_long(const ThsHmmParams& params,
                                                 const TreeStructure& tree, std::size_t length,
                                                 std::size_t burn_in, std::uint64_t seed);

constexpr std::size_t kDefaultBurnIn = 1000;

}  // namespace spectree
