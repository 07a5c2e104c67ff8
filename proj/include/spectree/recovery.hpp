// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "spectree/learner.hpp"
#include "spectree/moments.hpp"

namespace spectree {

struct RootRecovery {
    Vector w;  // initial distribution estimate
    Matrix q;  // joint P(z_2, z_1) estimate before normalization
    Matrix t;  // column-stochastic (next, prev)
    std::vector<std::string> warnings;
};

struct NodeRecovery {
    Matrix w;   // (child, parent) initial estimate, column-stochastic
    Tensor3 q;  // joint (own-next, parent-next, own-prev) estimate
    Tensor3 t;  // model convention (next, prev, parent_next)
    std::vector<std::string> warnings;
};

// W-hat = O^dagger P_1; Q-hat = O^dagger P_{2,1} O^dagger'; T-hat from
// normalizing Q over the next-state coordinate, then simplex rounding.
// Zero-sum slices are replaced by uniform distributions with a warning.
RootRecovery recover_root(const MomentSource& source, int root, const Matrix& obs_root,
                          double pinv_rel_threshold = 1e-12);

// W-hat = O_u^dagger P_{1,1}^{u,parent} O_parent^dagger', column-normalized;
// Q-hat = P_{2,2,1}^{u,parent,u} contracted with the transposed
// pseudoinverses on every mode; T-hat normalizes Q over the own-next
// coordinate and permutes axes to the model convention (next, prev, parent).
NodeRecovery recover_nonroot(const MomentSource& source, int u, int parent, const Matrix& obs_u,
                             const Matrix& obs_parent, double pinv_rel_threshold = 1e-12);

struct LearnedTransitions {
    Vector init_root;
    Matrix trans_root;
    Matrix q_root;
    std::vector<Matrix> init;    // per node, root slot unused
    std::vector<Tensor3> trans;  // per node, root slot unused
    std::vector<Tensor3> q;      // per node, root slot unused
    std::vector<std::string> warnings;
};

LearnedTransitions recover_transitions(const MomentSource& source, const TreeStructure& tree,
                                       const LearnedObservations& observations,
                                       double pinv_rel_threshold = 1e-12);

}  // namespace spectree
