// SPDX-License-Identifier: Apache-2.0
#include "spectree/recovery.hpp"

#include <cmath>

#include "spectree/errors.hpp"
#include "spectree/linalg.hpp"

namespace spectree {

namespace {

void check_full_rank(const Matrix& obs, const std::string& what) {
    // Columns of a learned observation matrix are probability vectors, so an
    // absolute threshold is meaningful here.
    if (min_singular_value(obs) < 1e-10)
        throw NumericalError("recovery: " + what + " observation matrix is rank deficient");
}

// Normalize to a probability vector, then simplex-round. Zero-sum slices
// become uniform.
Vector normalize_slice(const Vector& v, bool& zero_sum) {
    const double sum = v.sum();
    if (std::abs(sum) < 1e-300) {
        zero_sum = true;
        return Vector::Constant(v.size(), 1.0 / static_cast<double>(v.size()));
    }
    return simplex_project(v / sum);
}

}  // namespace

RootRecovery recover_root(const MomentSource& source, int root, const Matrix& obs_root,
                          double pinv_rel_threshold) {
    check_full_rank(obs_root, "root");
    const Matrix proj = pinv(obs_root, pinv_rel_threshold).transpose();  // n x m
    const int m = static_cast<int>(obs_root.cols());

    RootRecovery out;
    bool zero_sum = false;
    const Vector w_raw = source.projected_single(ProjGroup{{root}, {&proj}, 1});
    out.w = normalize_slice(w_raw, zero_sum);

    out.q = source.projected_pair(ProjGroup{{root}, {&proj}, 2}, ProjGroup{{root}, {&proj}, 1});
    out.t.resize(m, m);
    for (int prev = 0; prev < m; ++prev)
        out.t.col(prev) = normalize_slice(out.q.col(prev), zero_sum);
    if (zero_sum)
        out.warnings.push_back("root: zero-sum column replaced by uniform distribution");
    return out;
}

NodeRecovery recover_nonroot(const MomentSource& source, int u, int parent, const Matrix& obs_u,
                             const Matrix& obs_parent, double pinv_rel_threshold) {
    check_full_rank(obs_u, "node");
    check_full_rank(obs_parent, "parent");
    const Matrix proj_u = pinv(obs_u, pinv_rel_threshold).transpose();
    const Matrix proj_p = pinv(obs_parent, pinv_rel_threshold).transpose();
    const int m = static_cast<int>(obs_u.cols());

    NodeRecovery out;
    bool zero_sum = false;

    const Matrix w_joint = source.projected_pair(ProjGroup{{u}, {&proj_u}, 1},
                                                 ProjGroup{{parent}, {&proj_p}, 1});
    out.w.resize(m, m);
    for (int par = 0; par < m; ++par) out.w.col(par) = normalize_slice(w_joint.col(par), zero_sum);

    // Joint estimate over (own-next, parent-next, own-prev).
    out.q = source.projected_triple(ProjGroup{{u}, {&proj_u}, 2}, ProjGroup{{parent}, {&proj_p}, 2},
                                    ProjGroup{{u}, {&proj_u}, 1});

    // Model axis order is (next, prev, parent_next).
    out.t = Tensor3(m, m, m);
    Vector slice(m);
    for (int prev = 0; prev < m; ++prev)
        for (int par = 0; par < m; ++par) {
            for (int nxt = 0; nxt < m; ++nxt) slice[nxt] = out.q(nxt, par, prev);
            const Vector norm = normalize_slice(slice, zero_sum);
            for (int nxt = 0; nxt < m; ++nxt) out.t(nxt, prev, par) = norm[nxt];
        }
    if (zero_sum)
        out.warnings.push_back("node " + std::to_string(u) +
                               ": zero-sum slice replaced by uniform distribution");
    return out;
}

LearnedTransitions recover_transitions(const MomentSource& source, const TreeStructure& tree,
                                       const LearnedObservations& observations,
                                       double pinv_rel_threshold) {
    const int d = tree.node_count();
    LearnedTransitions out;
    out.init.resize(static_cast<size_t>(d));
    out.trans.resize(static_cast<size_t>(d));
    out.q.resize(static_cast<size_t>(d));

    for (int u = 0; u < d; ++u) {
        const Matrix& obs_u = observations.obs[static_cast<size_t>(u)];
        if (obs_u.size() == 0)
            throw NumericalError("recovery: missing observation estimate for node " +
                                 tree.labels[static_cast<size_t>(u)]);
        if (tree.is_root(u)) {
            RootRecovery root = recover_root(source, u, obs_u, pinv_rel_threshold);
            out.init_root = std::move(root.w);
            out.trans_root = std::move(root.t);
            out.q_root = std::move(root.q);
            for (auto& w : root.warnings) out.warnings.push_back(std::move(w));
        } else {
            const int parent = tree.parent[static_cast<size_t>(u)];
            NodeRecovery rec = recover_nonroot(source, u, parent, obs_u,
                                               observations.obs[static_cast<size_t>(parent)],
                                               pinv_rel_threshold);
            out.init[static_cast<size_t>(u)] = std::move(rec.w);
            out.trans[static_cast<size_t>(u)] = std::move(rec.t);
            out.q[static_cast<size_t>(u)] = std::move(rec.q);
            for (auto& w : rec.warnings) out.warnings.push_back(std::move(w));
        }
    }
    return out;
}

}  // namespace spectree
