// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spectree/errors.hpp"

namespace spectree {

enum class BatchMode { Triples, LongSequence };

// Observed symbol sequences, one symbol per (node, time). Flat storage:
// symbol(s, u, t) at ((s * nodes + u) * len + t).
struct SequenceBatch {
    BatchMode mode = BatchMode::Triples;
    int node_count = 0;
    int alphabet = 0;  // n
    std::size_t sequences = 0;
    std::size_t length = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> node_labels;
    std::vector<std::int32_t> data;

    std::int32_t at(std::size_t s, int u, std::size_t t) const {
        return data[(s * static_cast<std::size_t>(node_count) + static_cast<std::size_t>(u)) * length + t];
    }
    std::int32_t& at(std::size_t s, int u, std::size_t t) {
        return data[(s * static_cast<std::size_t>(node_count) + static_cast<std::size_t>(u)) * length + t];
    }
    bool empty() const { return sequences == 0 || length == 0; }

    static SequenceBatch zeros(BatchMode mode, int nodes, int alphabet, std::size_t sequences,
                               std::size_t length);
};

// Hidden-state arrays aligned with a SequenceBatch.
struct StateTrace {
    int node_count = 0;
    int num_states = 0;  // m
    std::size_t sequences = 0;
    std::size_t length = 0;
    std::vector<std::string> node_labels;
    std::vector<std::int32_t> data;

    std::int32_t at(std::size_t s, int u, std::size_t t) const {
        return data[(s * static_cast<std::size_t>(node_count) + static_cast<std::size_t>(u)) * length + t];
    }
    std::int32_t& at(std::size_t s, int u, std::size_t t) {
        return data[(s * static_cast<std::size_t>(node_count) + static_cast<std::size_t>(u)) * length + t];
    }
};

// New batch containing only the given node columns, in the given order.
SequenceBatch restrict_nodes(const SequenceBatch& batch, const std::vector<int>& nodes);

}  // namespace spectree
