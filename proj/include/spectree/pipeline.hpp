// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "spectree/recovery.hpp"

namespace spectree {

struct PipelineResult {
    ThsHmmParams params;
    LearnResult learn;
    std::vector<std::string> warnings;
};

// Observation recovery followed by transition/initial recovery, assembled
// into a full parameter set. Throws NumericalError if any node failed and
// allow_partial is false; otherwise failed nodes carry uniform placeholders
// and are listed in learn.failures.
PipelineResult learn_model(const MomentSource& source, const TreeStructure& tree, int m,
                           const LearnerConfig& config, bool allow_partial = false);

}  // namespace spectree
