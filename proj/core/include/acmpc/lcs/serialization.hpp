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

#ifndef ACMPC_LCS_SERIALIZATION_HPP_
#define ACMPC_LCS_SERIALIZATION_HPP_

#include <string>

#include <Eigen/Core>

#include "acmpc/lcs/lcs.hpp"

namespace acmpc::lcs {

// JSON text. Matrices are {"rows", "cols", "data"} with data row-major, and
// the top level carries explicit dims {"n_x", "n_u", "n_lambda"}.
std::string ToJson(const LcsParams& theta, int indent = 2);
LcsParams LcsParamsFromJson(const std::string& text);

std::string ToJson(const Residual& r, int indent = 2);
Residual ResidualFromJson(const std::string& text);

}  // namespace acmpc::lcs

#endif  // ACMPC_LCS_SERIALIZATION_HPP_
