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

#include "acmpc/harness/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace acmpc::harness {
namespace {

using nlohmann::json;

// Typed view of one JSON object that remembers which keys were read, so
// leftovers can be reported as unknown.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool Has(const std::string& key) const { return j_.contains(key); }

  template <typename T>
  void Get(const std::string& key, T* out) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    try {
      *out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(Name(key) + ": wrong type");
    }
  }

  void GetVector(const std::string& key, Eigen::VectorXd* out) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    const json& v = j_.at(key);
    if (!v.is_array()) throw ConfigError(Name(key) + ": expected an array");
    Eigen::VectorXd r(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError(Name(key) + ": expected numbers");
      r(static_cast<Eigen::Index>(i)) = v[i].get<double>();
    }
    *out = r;
  }

  void GetVector2(const std::string& key, Eigen::Vector2d* out) {
    if (!j_.contains(key)) return;
    Eigen::VectorXd v;
    GetVector(key, &v);
    if (v.size() != 2) throw ConfigError(Name(key) + ": expected 2 entries");
    *out = v;
  }

  // Square diagonal matrix from an array.
  void GetDiagonal(const std::string& key, Eigen::MatrixXd* out) {
    if (!j_.contains(key)) return;
    Eigen::VectorXd v;
    GetVector(key, &v);
    *out = v.asDiagonal();
  }

  Reader Child(const std::string& key) {
    seen_.insert(key);
    return Reader(j_.at(key), Name(key));
  }

  const json& Raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string Name(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void Finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError("unknown key " + Name(it.key()));
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

json Vec(const Eigen::VectorXd& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json Diag(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return json::array();
  return Vec(m.diagonal());
}

bool IsDiagonal(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) return false;
  Eigen::MatrixXd off = m;
  off.diagonal().setZero();
  return off.isZero(0.0);
}

ExperimentId ParseExperiment(const std::string& s) {
  if (s == "cartpole_walls") return ExperimentId::kCartpoleWalls;
  if (s == "pusher_ball") return ExperimentId::kPusherBall;
  throw ConfigError("experiment: unknown id '" + s +
                    "' (expected cartpole_walls or pusher_ball)");
}

RunMode ParseMode(const std::string& s) {
  if (s == "deterministic") return RunMode::kDeterministic;
  if (s == "realtime") return RunMode::kRealtime;
  throw ConfigError("mode: unknown value '" + s +
                    "' (expected deterministic or realtime)");
}

void ParseModel(Reader& m, ExperimentConfig& cfg) {
  if (cfg.experiment == ExperimentId::kCartpoleWalls) {
    auto& p = cfg.cartpole;
    m.Get("cart_mass", &p.cart_mass);
    m.Get("pole_mass", &p.pole_mass);
    m.Get("pole_length", &p.pole_length);
    m.Get("wall_stiffness", &p.wall_stiffness);
    m.GetVector2("wall_offsets", &p.wall_offsets);
    m.Get("gravity", &p.gravity);
    m.Get("dt", &p.dt);
  } else {
    auto& p = cfg.pusher;
    m.Get("finger_mass", &p.finger_mass);
    m.Get("ball_mass", &p.ball_mass);
    m.Get("ball_damping", &p.ball_damping);
    m.Get("finger_damping", &p.finger_damping);
    m.Get("friction", &p.friction);
    m.Get("num_edges", &p.num_edges);
    m.Get("dt", &p.dt);
  }
  m.Finish();
}

void ParseLearn(Reader& r, adapt::LearnConfig& l) {
  r.Get("eps", &l.eps);
  r.Get("gamma", &l.gamma);
  r.Get("xi", &l.xi);
  r.Get("n_b", &l.n_b);
  r.GetDiagonal("q_d", &l.Q_d);
  r.Get("beta1", &l.beta1);
  r.Get("beta2", &l.beta2);
  r.Get("adam_eps", &l.adam_eps);
  r.Get("qp_tol", &l.qp_tol);
  r.Finish();
}

void ParseMpc(Reader& r, ExperimentConfig& cfg) {
  auto& m = cfg.mpc;
  r.Get("horizon", &m.horizon);
  r.GetDiagonal("q", &m.Q);
  r.GetDiagonal("r", &m.R);
  if (r.Has("q_n")) {
    const json& qn = r.Raw("q_n");
    if (qn.is_string()) {
      if (qn.get<std::string>() != "dare") {
        throw ConfigError("mpc.q_n: expected \"dare\" or an array");
      }
      cfg.terminal_from_dare = true;
    } else {
      cfg.terminal_from_dare = false;
      const json wrapped = {{"q_n", qn}};
      Reader tmp(wrapped, "mpc");
      tmp.GetDiagonal("q_n", &m.Q_N);
    }
  }
  r.GetVector("x_ref", &m.x_ref);
  r.Get("rho", &m.rho);
  r.Get("rho_growth", &m.rho_growth);
  r.Get("admm_iterations", &m.admm_iterations);
  r.GetVector("metric", &m.metric);
  r.GetVector("u_min", &m.u_min);
  r.GetVector("u_max", &m.u_max);
  r.Get("mode_cap", &m.mode_cap);
  r.Get("warm_start", &m.warm_start);
  r.Finish();
}

}  // namespace

std::string ToString(ExperimentId id) {
  return id == ExperimentId::kCartpoleWalls ? "cartpole_walls" : "pusher_ball";
}

std::string ToString(RunMode mode) {
  return mode == RunMode::kDeterministic ? "deterministic" : "realtime";
}

int ExperimentConfig::num_states() const {
  return experiment == ExperimentId::kCartpoleWalls ? 4 : 8;
}

int ExperimentConfig::num_inputs() const {
  return experiment == ExperimentId::kCartpoleWalls ? 1 : 2;
}

int ExperimentConfig::num_lambda() const {
  return experiment == ExperimentId::kCartpoleWalls ? 2 : pusher.num_edges;
}

double ExperimentConfig::dt() const {
  return experiment == ExperimentId::kCartpoleWalls ? cartpole.dt : pusher.dt;
}

int ExperimentConfig::steps() const {
  return static_cast<int>(std::lround(duration_s * control_hz));
}

int ExperimentConfig::adapt_every() const {
  // Guard against 100 / 25 landing a hair above 4.
  return static_cast<int>(std::ceil(control_hz / adapt_hz - 1e-9));
}

void ExperimentConfig::Validate() const {
  try {
    if (experiment == ExperimentId::kCartpoleWalls) {
      cartpole.Validate();
    } else {
      pusher.Validate();
      if (pusher.num_edges != 2) {
        throw ConfigError("model.num_edges: the planar pusher-ball has 2 edges");
      }
    }
    learn.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const int nx = num_states();
  const int nu = num_inputs();
  const int nl = num_lambda();
  if (learn.Q_d.size() != 0 && (learn.Q_d.rows() != nx || learn.Q_d.cols() != nx)) {
    throw ConfigError("learn.q_d: expected " + std::to_string(nx) + " entries");
  }
  c3::MpcConfig m = mpc;
  if (terminal_from_dare) m.Q_N = m.Q;
  try {
    m.Validate(nx, nu, nl);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("mpc: ") + e.what());
  }
  if (!(control_hz > 0.0) || !(adapt_hz > 0.0)) {
    throw ConfigError("rates: control_hz and adapt_hz must be > 0");
  }
  if (adapt_hz > control_hz) {
    throw ConfigError("rates: adapt_hz must not exceed control_hz");
  }
  if (std::abs(control_hz * dt() - 1.0) > 1e-9) {
    throw ConfigError("rates: control_hz must equal 1 / model.dt (" +
                      std::to_string(1.0 / dt()) + ")");
  }
  if (!(duration_s > 0.0) || steps() < 1) {
    throw ConfigError("duration_s must cover at least one control period");
  }
  if (noise_std.size() != 0 &&
      (noise_std.size() != nx || (noise_std.array() < 0.0).any() ||
       !noise_std.allFinite())) {
    throw ConfigError("noise_std: expected " + std::to_string(nx) +
                      " finite entries >= 0");
  }
  if (x0.size() != nx || !x0.allFinite()) {
    throw ConfigError("x0: expected " + std::to_string(nx) + " finite entries");
  }
  if (disturbances.enabled()) {
    if (disturbances.state_index < 0 || disturbances.state_index >= nx) {
      throw ConfigError("disturbances.state_index out of range");
    }
    if (!(disturbances.period_s > 0.0) || disturbances.start_s < 0.0) {
      throw ConfigError("disturbances: period_s must be > 0 and start_s >= 0");
    }
  }
  if (experiment == ExperimentId::kPusherBall) {
    if (!(task.path_length > 0.0) || !(task.path_speed > 0.0) ||
        !(task.corridor > 0.0) || task.push_depth < 0.0) {
      throw ConfigError("task: path_length, path_speed, corridor must be > 0 "
                        "and push_depth >= 0");
    }
  }
  const auto& s = success;
  if (!(s.state_tol > 0.0) || s.hold_steps < 1 || !(s.residual_tol > 0.0) ||
      s.hold_updates < 1 || !(s.path_fraction > 0.0) ||
      !(s.residual_rel_tol > 0.0) || !(s.residual_window > 0.0) ||
      s.residual_window > 1.0) {
    throw ConfigError("success: thresholds must be positive (residual_window in (0, 1])");
  }
}

ExperimentConfig ParseConfig(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  Reader r(root, "");
  ExperimentConfig cfg;
  if (!r.Has("experiment")) throw ConfigError("missing key experiment");
  std::string id;
  r.Get("experiment", &id);
  cfg.experiment = ParseExperiment(id);
  const bool cartpole = cfg.experiment == ExperimentId::kCartpoleWalls;

  if (r.Has("model")) {
    Reader m = r.Child("model");
    ParseModel(m, cfg);
  }
  if (r.Has("plant")) {
    Reader p = r.Child("plant");
    if (cartpole) {
      p.GetVector2("delta_phi", &cfg.cartpole.delta_phi);
    } else {
      p.Get("radius", &cfg.pusher.radius_true);
    }
    p.Finish();
  }
  if (r.Has("prior")) {
    Reader p = r.Child("prior");
    if (!cartpole) p.Get("radius", &cfg.pusher.radius_prior);
    p.Finish();
  }
  if (r.Has("learn")) {
    Reader l = r.Child("learn");
    ParseLearn(l, cfg.learn);
  }
  if (r.Has("mpc")) {
    Reader m = r.Child("mpc");
    ParseMpc(m, cfg);
  }
  if (r.Has("rates")) {
    Reader rt = r.Child("rates");
    rt.Get("control_hz", &cfg.control_hz);
    rt.Get("adapt_hz", &cfg.adapt_hz);
    rt.Finish();
  }
  r.Get("duration_s", &cfg.duration_s);
  r.GetVector("noise_std", &cfg.noise_std);
  r.Get("seed", &cfg.seed);
  r.Get("adapt", &cfg.adapt);
  if (r.Has("mode")) {
    std::string mode;
    r.Get("mode", &mode);
    cfg.mode = ParseMode(mode);
  }
  if (r.Has("output")) {
    Reader o = r.Child("output");
    o.Get("dir", &cfg.output_dir);
    o.Get("record_timing", &cfg.record_timing);
    o.Finish();
  }
  r.GetVector("x0", &cfg.x0);
  if (r.Has("disturbances")) {
    Reader d = r.Child("disturbances");
    auto& dist = cfg.disturbances;
    d.Get("state_index", &dist.state_index);
    d.Get("amplitude", &dist.amplitude);
    d.Get("start_s", &dist.start_s);
    d.Get("period_s", &dist.period_s);
    d.Get("stop_s", &dist.stop_s);
    d.Get("alternate", &dist.alternate);
    d.Finish();
  }
  if (r.Has("task")) {
    Reader t = r.Child("task");
    t.Get("path_length", &cfg.task.path_length);
    t.Get("path_speed", &cfg.task.path_speed);
    t.Get("heading", &cfg.task.heading);
    t.Get("push_depth", &cfg.task.push_depth);
    t.Get("corridor", &cfg.task.corridor);
    t.Finish();
  }
  if (r.Has("success")) {
    Reader s = r.Child("success");
    auto& sc = cfg.success;
    s.Get("state_tol", &sc.state_tol);
    s.Get("hold_steps", &sc.hold_steps);
    s.Get("residual_tol", &sc.residual_tol);
    s.Get("hold_updates", &sc.hold_updates);
    s.Get("path_fraction", &sc.path_fraction);
    s.Get("residual_rel_tol", &sc.residual_rel_tol);
    s.Get("residual_window", &sc.residual_window);
    s.Finish();
  }
  r.Finish();
  cfg.Validate();
  return cfg;
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseConfig(ss.str());
}

std::string ToJson(const ExperimentConfig& cfg, int indent) {
  json j;
  j["experiment"] = ToString(cfg.experiment);
  if (cfg.experiment == ExperimentId::kCartpoleWalls) {
    const auto& p = cfg.cartpole;
    j["model"] = {{"cart_mass", p.cart_mass},
                  {"pole_mass", p.pole_mass},
                  {"pole_length", p.pole_length},
                  {"wall_stiffness", p.wall_stiffness},
                  {"wall_offsets", Vec(p.wall_offsets)},
                  {"gravity", p.gravity},
                  {"dt", p.dt}};
    j["plant"] = {{"delta_phi", Vec(p.delta_phi)}};
    j["prior"] = json::object();
  } else {
    const auto& p = cfg.pusher;
    j["model"] = {{"finger_mass", p.finger_mass},
                  {"ball_mass", p.ball_mass},
                  {"ball_damping", p.ball_damping},
                  {"finger_damping", p.finger_damping},
                  {"friction", p.friction},
                  {"num_edges", p.num_edges},
                  {"dt", p.dt}};
    j["plant"] = {{"radius", p.radius_true}};
    j["prior"] = {{"radius", p.radius_prior}};
  }
  const auto& l = cfg.learn;
  j["learn"] = {{"eps", l.eps},       {"gamma", l.gamma}, {"xi", l.xi},
                {"n_b", l.n_b},       {"beta1", l.beta1}, {"beta2", l.beta2},
                {"adam_eps", l.adam_eps}, {"qp_tol", l.qp_tol}};
  if (l.Q_d.size() != 0) {
    if (!IsDiagonal(l.Q_d)) throw ConfigError("learn.q_d: only diagonal weights serialize");
    j["learn"]["q_d"] = Diag(l.Q_d);
  }
  const auto& m = cfg.mpc;
  json mj = {{"horizon", m.horizon},
             {"q", Diag(m.Q)},
             {"r", Diag(m.R)},
             {"rho", m.rho},
             {"rho_growth", m.rho_growth},
             {"admm_iterations", m.admm_iterations},
             {"mode_cap", m.mode_cap},
             {"warm_start", m.warm_start}};
  if (cfg.terminal_from_dare) {
    mj["q_n"] = "dare";
  } else {
    mj["q_n"] = Diag(m.Q_N);
  }
  if (m.x_ref.size()) mj["x_ref"] = Vec(m.x_ref);
  if (m.metric.size()) mj["metric"] = Vec(m.metric);
  if (m.u_min.size()) mj["u_min"] = Vec(m.u_min);
  if (m.u_max.size()) mj["u_max"] = Vec(m.u_max);
  j["mpc"] = mj;
  j["rates"] = {{"control_hz", cfg.control_hz}, {"adapt_hz", cfg.adapt_hz}};
  j["duration_s"] = cfg.duration_s;
  if (cfg.noise_std.size()) j["noise_std"] = Vec(cfg.noise_std);
  j["seed"] = cfg.seed;
  j["adapt"] = cfg.adapt;
  j["mode"] = ToString(cfg.mode);
  j["output"] = {{"dir", cfg.output_dir}, {"record_timing", cfg.record_timing}};
  j["x0"] = Vec(cfg.x0);
  const auto& d = cfg.disturbances;
  j["disturbances"] = {{"state_index", d.state_index}, {"amplitude", d.amplitude},
                       {"start_s", d.start_s},         {"period_s", d.period_s},
                       {"stop_s", d.stop_s},           {"alternate", d.alternate}};
  const auto& t = cfg.task;
  j["task"] = {{"path_length", t.path_length}, {"path_speed", t.path_speed},
               {"heading", t.heading},         {"push_depth", t.push_depth},
               {"corridor", t.corridor}};
  const auto& s = cfg.success;
  j["success"] = {{"state_tol", s.state_tol},
                  {"hold_steps", s.hold_steps},
                  {"residual_tol", s.residual_tol},
                  {"hold_updates", s.hold_updates},
                  {"path_fraction", s.path_fraction},
                  {"residual_rel_tol", s.residual_rel_tol},
                  {"residual_window", s.residual_window}};
  return j.dump(indent);
}

std::string ResolveOutputDir(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("ACMPC_OUT_DIR"); env && *env) return env;
  return cfg.output_dir;
}

}  // namespace acmpc::harness
