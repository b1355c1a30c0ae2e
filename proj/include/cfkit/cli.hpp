// SPDX-License-Identifier: Apache-2.0
//
// The `cf` command line. Exit codes: 0 success (whatever the verdict),
// 2 usage or parse error, 3 degenerate fraction.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cfkit {

inline constexpr const char* kVersion = "0.1.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDegenerate = 3;

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cfkit
