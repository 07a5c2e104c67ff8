// SPDX-License-Identifier: Apache-2.0
#include "spectree/tree.hpp"

#include <algorithm>
#include <set>

#include "spectree/errors.hpp"

namespace spectree {

std::vector<int> TreeStructure::path_to(int u) const {
    if (u < 0 || u >= node_count()) throw DataError("path_to: unknown node id " + std::to_string(u));
    std::vector<int> path;
    for (int v = u; v != -1; v = parent[static_cast<size_t>(v)]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;
}

int TreeStructure::depth_of(int u) const { return static_cast<int>(path_to(u).size()); }

int TreeStructure::depth() const {
    int d = 0;
    for (int u = 0; u < node_count(); ++u) d = std::max(d, depth_of(u));
    return d;
}

std::vector<int> TreeStructure::children(int u) const {
    std::vector<int> out;
    for (int v = 0; v < node_count(); ++v)
        if (v != root && parent[static_cast<size_t>(v)] == u) out.push_back(v);
    return out;
}

std::vector<int> TreeStructure::leaves() const {
    std::vector<int> out;
    for (int v = 0; v < node_count(); ++v)
        if (children(v).empty()) out.push_back(v);
    return out;
}

std::vector<int> TreeStructure::topological_order() const {
    std::vector<int> order(static_cast<size_t>(node_count()));
    for (int v = 0; v < node_count(); ++v) order[static_cast<size_t>(v)] = v;
    std::stable_sort(order.begin(), order.end(),
                     [this](int a, int b) { return depth_of(a) < depth_of(b); });
    return order;
}

int TreeStructure::index_of(const std::string& label) const {
    for (int v = 0; v < node_count(); ++v)
        if (labels[static_cast<size_t>(v)] == label) return v;
    return -1;
}

TreeStructure make_tree(std::vector<int> parent, std::vector<std::string> labels) {
    const int d = static_cast<int>(parent.size());
    if (d < 1) throw DataError("tree must have at least one node");
    if (labels.empty()) {
        labels.reserve(static_cast<size_t>(d));
        for (int v = 0; v < d; ++v) labels.push_back("n" + std::to_string(v));
    }
    if (static_cast<int>(labels.size()) != d) throw DataError("tree: label count does not match node count");
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (l.empty()) throw DataError("tree: empty node label");
        if (!seen.insert(l).second) throw DataError("tree: duplicate node label '" + l + "'");
    }

    TreeStructure tree;
    tree.parent = std::move(parent);
    tree.labels = std::move(labels);
    int root = -1;
    for (int v = 0; v < d; ++v) {
        const int p = tree.parent[static_cast<size_t>(v)];
        if (p == -1) {
            if (root != -1) throw DataError("tree: more than one root");
            root = v;
        } else if (p < 0 || p >= d) {
            throw DataError("tree: parent index out of range for node " + std::to_string(v));
        }
    }
    if (root == -1) throw DataError("tree: no root (exactly one node must have parent -1)");
    tree.root = root;

    // Every node must reach the root without cycles.
    for (int v = 0; v < d; ++v) {
        int steps = 0;
        int cur = v;
        while (cur != root) {
            cur = tree.parent[static_cast<size_t>(cur)];
            if (++steps > d) throw DataError("tree: cycle detected at node " + std::to_string(v));
        }
    }
    return tree;
}

std::pair<TreeStructure, std::vector<int>> subtree(const TreeStructure& tree,
                                                   const std::vector<int>& keep) {
    std::vector<int> remap(static_cast<size_t>(tree.node_count()), -1);
    std::vector<int> kept = keep;
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    for (size_t i = 0; i < kept.size(); ++i) remap[static_cast<size_t>(kept[i])] = static_cast<int>(i);

    std::vector<int> parent(kept.size());
    std::vector<std::string> labels(kept.size());
    for (size_t i = 0; i < kept.size(); ++i) {
        const int old = kept[i];
        labels[i] = tree.labels[static_cast<size_t>(old)];
        const int p = tree.parent[static_cast<size_t>(old)];
        if (p == -1) {
            parent[i] = -1;
        } else {
            if (remap[static_cast<size_t>(p)] == -1)
                throw DataError("subtree: kept set not closed under parents (node " +
                                tree.labels[static_cast<size_t>(old)] + ")");
            parent[i] = remap[static_cast<size_t>(p)];
        }
    }
    return {make_tree(std::move(parent), std::move(labels)), remap};
}

}  // namespace spectree
