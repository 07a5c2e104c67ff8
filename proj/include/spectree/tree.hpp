// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace spectree {

// Rooted directed tree over node indices 0..D-1. parent[root] == -1.
// Labels are unique and stable; they also key per-node RNG streams so that
// restricting a problem to a sub-path does not change any node's stream.
struct TreeStructure {
    int root = 0;
    std::vector<int> parent;
    std::vector<std::string> labels;

    int node_count() const { return static_cast<int>(parent.size()); }
    bool is_root(int u) const { return u == root; }

    // Root-first path ending at u.
    std::vector<int> path_to(int u) const;
    int depth_of(int u) const;  // path length in nodes
    int depth() const;          // max over nodes
    std::vector<int> children(int u) const;
    std::vector<int> leaves() const;
    // Parents before children; within a depth level, ascending index.
    std::vector<int> topological_order() const;
    int index_of(const std::string& label) const;  // -1 if absent
};

// Validates and builds a tree; labels default to "n0", "n1", ...
TreeStructure make_tree(std::vector<int> parent, std::vector<std::string> labels = {});

// Induced tree on `keep` (must be closed under parents). Returns the new tree
// plus old-index -> new-index map (-1 for dropped nodes).
std::pair<TreeStructure, std::vector<int>> subtree(const TreeStructure& tree,
                                                   const std::vector<int>& keep);

}  // namespace spectree
