// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "spectree/tensor.hpp"
#include "spectree/tree.hpp"

namespace spectree {

// THS-HMM parameters. Conventions, fixed once to avoid silent transpositions:
//   obs[u]        n x m, column z is P(x | z), column-stochastic
//   trans_root    m x m, entry (next, prev) = P(z_{t+1} | z_t)
//   trans[u]      m x m x m, entry (next, prev, parent_next)
//                 = P(z_{t+1}^u | z_t^u, z_{t+1}^{parent})
//   init_root     m, P(z_1)
//   init[u]       m x m, entry (child, parent) = P(z_1^u | z_1^{parent})
// Root slots of trans[] / init[] are unused.
struct ThsHmmParams {
    int m = 0;
    int n = 0;
    std::vector<Matrix> obs;
    Matrix trans_root;
    std::vector<Tensor3> trans;
    Vector init_root;
    std::vector<Matrix> init;
};

struct Violation {
    int node;
    std::string what;
};

// Shape and stochasticity check. Violations are data, not failures.
std::vector<Violation> validate(const ThsHmmParams& params, const TreeStructure& tree,
                                double tol = 1e-9);

struct RankCheckConfig {
    double threshold = 1e-8;      // absolute pass threshold on singular values
    std::size_t meta_cap = 4096;  // refuse when m^{|H_u|} exceeds this
};

struct RankReport {
    struct NodeEntry {
        int node;
        double sigma_obs;       // sigma_m(O^u)
        double sigma_pair;      // sigma_m(P_{2,1}^{u,u})
        double sigma_path;      // sigma_{m^{|H_u|}}(P_{1,2}^{H_u,H_u})
        std::size_t path_dim;   // m^{|H_u|}
        bool node_pass;
        bool path_pass;
    };
    std::vector<NodeEntry> entries;
    double threshold;
    bool all_pass() const;
};

// Evaluates the node-wise and path-wise rank conditions on exact population
// moments. P_{1,2}^{H,H} singular values are obtained from per-node QR
// factors of O^u, so nothing of size n^{|H|} is ever formed.
RankReport check_rank_conditions(const ThsHmmParams& params, const TreeStructure& tree,
                                 const RankCheckConfig& config = {});

}  // namespace spectree
