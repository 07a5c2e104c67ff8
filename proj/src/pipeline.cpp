// SPDX-License-Identifier: Apache-2.0
#include "spectree/pipeline.hpp"

#include "spectree/errors.hpp"

namespace spectree {

namespace {

ThsHmmParams uniform_params(const TreeStructure& tree, int m, int n) {
    ThsHmmParams p;
    p.m = m;
    p.n = n;
    const int d = tree.node_count();
    p.obs.assign(static_cast<size_t>(d), Matrix::Constant(n, m, 1.0 / n));
    p.trans_root = Matrix::Constant(m, m, 1.0 / m);
    p.init_root = Vector::Constant(m, 1.0 / m);
    p.init.assign(static_cast<size_t>(d), Matrix::Constant(m, m, 1.0 / m));
    Tensor3 t(m, m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
            for (int c = 0; c < m; ++c) t(a, b, c) = 1.0 / m;
    p.trans.assign(static_cast<size_t>(d), t);
    return p;
}

}  // namespace

PipelineResult learn_model(const MomentSource& source, const TreeStructure& tree, int m,
                           const LearnerConfig& config, bool allow_partial) {
    PipelineResult result;
    result.learn = learn_observations(source, tree, m, config);
    for (const auto& w : result.learn.basis.warnings) result.warnings.push_back(w);

    if (!result.learn.failures.empty() && !allow_partial) {
        std::string msg = "learning failed for node(s):";
        for (const auto& [node, why] : result.learn.failures)
            msg += " " + tree.labels[static_cast<size_t>(node)] + " (" + why + ")";
        throw NumericalError(msg);
    }

    // Failed nodes get uniform placeholders so the assembled model stays
    // valid; the failure map records them.
    result.params = uniform_params(tree, m, source.alphabet());
    LearnedObservations filled = result.learn.observations;
    for (int u = 0; u < tree.node_count(); ++u) {
        auto& slot = filled.obs[static_cast<size_t>(u)];
        if (slot.size() == 0) slot = result.params.obs[static_cast<size_t>(u)];
        result.params.obs[static_cast<size_t>(u)] = slot;
    }

    try {
        LearnedTransitions trans =
            recover_transitions(source, tree, filled, config.pinv_rel_threshold);
        result.params.init_root = std::move(trans.init_root);
        result.params.trans_root = std::move(trans.trans_root);
        for (int u = 0; u < tree.node_count(); ++u) {
            if (tree.is_root(u)) continue;
            result.params.init[static_cast<size_t>(u)] = std::move(trans.init[static_cast<size_t>(u)]);
            result.params.trans[static_cast<size_t>(u)] = std::move(trans.trans[static_cast<size_t>(u)]);
        }
        for (auto& w : trans.warnings) result.warnings.push_back(std::move(w));
    } catch (const std::exception& e) {
        if (!allow_partial) throw;
        result.warnings.push_back(std::string("transition recovery failed: ") + e.what());
    }
    return result;
}

}  // namespace spectree
