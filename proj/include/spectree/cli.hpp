// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace spectree {

// Entry point for the spectree command-line tool. Exit codes: 0 success,
// 1 usage error, 2 data/validation error, 3 numerical failure.
int run_cli(int argc, const char* const* argv);

}  // namespace spectree
