// Copyright 2026 The acmpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ACMPC_TOOLS_CLI_HPP_
#define ACMPC_TOOLS_CLI_HPP_

#include <ostream>

namespace acmpc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitRuntime = 2;

// Entry point of the acmpc tool. Usage errors and bad configs return 1,
// failures during a run return 2.
int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace acmpc::cli

#endif  // ACMPC_TOOLS_CLI_HPP_
