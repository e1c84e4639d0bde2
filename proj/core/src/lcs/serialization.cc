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

#include "acmpc/lcs/serialization.hpp"

#include <stdexcept>

#include "json.hpp"

namespace acmpc::lcs {
namespace {

using nlohmann::json;

json MatrixToJson(const Eigen::MatrixXd& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Eigen::MatrixXd MatrixFromJson(const json& j, const std::string& name) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("data")) {
    throw std::invalid_argument(name + ": expected {rows, cols, data}");
  }
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (rows < 0 || cols < 0 || !data.is_array() ||
      static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw std::invalid_argument(name + ": data length does not match " +
                                std::to_string(rows) + "x" +
                                std::to_string(cols));
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j2 = 0; j2 < cols; ++j2) {
      m(i, j2) = data.at(i * cols + j2).get<double>();
    }
  }
  return m;
}

Eigen::VectorXd VectorFromJson(const json& j, const std::string& name) {
  if (!j.is_array()) throw std::invalid_argument(name + ": expected an array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = j.at(i).get<double>();
  return v;
}

json VectorToJson(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json Parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

std::string ToJson(const LcsParams& theta, int indent) {
  json j;
  j["dims"] = {{"n_x", theta.num_states()},
               {"n_u", theta.num_inputs()},
               {"n_lambda", theta.num_contacts()}};
  j["A"] = MatrixToJson(theta.A);
  j["B"] = MatrixToJson(theta.B);
  j["D"] = MatrixToJson(theta.D);
  j["d"] = VectorToJson(theta.d);
  j["E"] = MatrixToJson(theta.E);
  j["F"] = MatrixToJson(theta.F);
  j["H"] = MatrixToJson(theta.H);
  j["c"] = VectorToJson(theta.c);
  return j.dump(indent);
}

LcsParams LcsParamsFromJson(const std::string& text) {
  const json j = Parse(text);
  try {
    LcsParams p;
    p.A = MatrixFromJson(j.at("A"), "A");
    p.B = MatrixFromJson(j.at("B"), "B");
    p.D = MatrixFromJson(j.at("D"), "D");
    p.d = VectorFromJson(j.at("d"), "d");
    p.E = MatrixFromJson(j.at("E"), "E");
    p.F = MatrixFromJson(j.at("F"), "F");
    p.H = MatrixFromJson(j.at("H"), "H");
    p.c = VectorFromJson(j.at("c"), "c");
    const auto& dims = j.at("dims");
    if (dims.at("n_x").get<int>() != p.num_states() ||
        dims.at("n_u").get<int>() != p.num_inputs() ||
        dims.at("n_lambda").get<int>() != p.num_contacts()) {
      throw std::invalid_argument("dims do not match matrix shapes");
    }
    p.Validate();
    return p;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("LcsParams JSON: ") + e.what());
  }
}

std::string ToJson(const Residual& r, int indent) {
  json j;
  j["r_comp"] = VectorToJson(r.r_comp);
  return j.dump(indent);
}

Residual ResidualFromJson(const std::string& text) {
  const json j = Parse(text);
  try {
    Residual r{VectorFromJson(j.at("r_comp"), "r_comp")};
    if (!r.r_comp.allFinite()) {
      throw std::invalid_argument("r_comp has non-finite entries");
    }
    return r;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("Residual JSON: ") + e.what());
  }
}

}  // namespace acmpc::lcs
