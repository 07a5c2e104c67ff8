// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

namespace spectree {

// Error taxonomy mirrored by the CLI exit codes: usage 1, data 2, numerical 3.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace spectree
