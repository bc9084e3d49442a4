// Copyright 2026 The compsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"  // nlohmann/json, vendored

#include "compsim/kinematics.hpp"
#include "compsim/metrics.hpp"
#include "compsim/motion.hpp"
#include "compsim/simulation.hpp"
#include "compsim/types.hpp"

// File formats: JSON model/config/report/manifest files and CSV traces and
// logs. Every reader rejects malformed input with an InputError naming the
// file and, where one exists, the offending line. docs/formats.md is the
// byte-level reference.

namespace compsim {

#ifndef COMPSIM_VERSION
#define COMPSIM_VERSION "1.0.0"
#endif

inline constexpr std::string_view kToolVersion = COMPSIM_VERSION;
inline constexpr int kFormatVersion = 1;

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Text helpers

/// Shortest decimal text that parses back to exactly `x`.
inline std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, r.ptr);
}

/// Parses a whole field as a finite double; false on any leftover text.
inline bool parse_double(std::string_view s, double& out) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size() && std::isfinite(out);
}

inline std::vector<std::string_view> split_fields(std::string_view line, char sep = ',') {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(path.string() + ": cannot open file for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw InputError(path.string() + ": write failed");
}

/// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
inline std::string fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) s[static_cast<std::size_t>(i)] = kHex[h & 0xf];
  return s;
}

// ---------------------------------------------------------------------------
// JSON documents

namespace detail {

/// 1-based line of the first `"key":` in `text`, or 0 if absent.
inline std::size_t line_of_key(std::string_view text, std::string_view key) {
  const std::string needle = "\"" + std::string(key) + "\"";
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string_view::npos) {
    std::size_t after = pos + needle.size();
    while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after])))
      ++after;
    if (after < text.size() && text[after] == ':') {
      std::size_t line = 1;
      for (std::size_t i = 0; i < pos; ++i) line += text[i] == '\n' ? 1 : 0;
      return line;
    }
    pos = after;
  }
  return 0;
}

/// Reads one JSON document and reports schema problems with the key path
/// and, when it can be located, the source line.
class JsonReader {
 public:
  JsonReader(std::string source, std::string text)
      : source_(std::move(source)), text_(std::move(text)) {
    try {
      root_ = Json::parse(text_);
    } catch (const Json::parse_error& e) {
      std::size_t line = 1;
      for (std::size_t i = 0; i < e.byte && i < text_.size(); ++i)
        line += text_[i] == '\n' ? 1 : 0;
      throw InputError(source_ + ":" + std::to_string(line) + ": invalid JSON");
    }
    if (!root_.is_object()) fail("", "top level must be an object");
  }

  const Json& root() const { return root_; }
  const std::string& source() const { return source_; }

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    const std::size_t slash = path.find_last_of('/');
    std::string key = slash == std::string::npos ? path : path.substr(slash + 1);
    // Array indices cannot be located; fall back to the enclosing key.
    std::string p = path;
    while (!key.empty() && std::isdigit(static_cast<unsigned char>(key.front()))) {
      p = p.substr(0, p.find_last_of('/'));
      const std::size_t s = p.find_last_of('/');
      key = s == std::string::npos ? p : p.substr(s + 1);
    }
    const std::size_t line = key.empty() ? 0 : line_of_key(text_, key);
    std::string where = source_;
    if (line > 0) where += ":" + std::to_string(line);
    throw InputError(where + ": " + (path.empty() ? std::string("document") : path) +
                     ": " + what);
  }

  void check_keys(const Json& obj, const std::string& path,
                  std::initializer_list<std::string_view> allowed) const {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [k, v] : obj.items()) {
      bool ok = false;
      for (std::string_view a : allowed) ok = ok || k == a;
      if (!ok) fail(path + "/" + k, "unknown key");
    }
  }

  void check_header(std::string_view format) const {
    if (!root_.contains("format") || root_["format"] != format)
      fail("/format", "expected \"" + std::string(format) + "\"");
    if (!root_.contains("version") || !root_["version"].is_number_integer() ||
        root_["version"].get<int>() != kFormatVersion)
      fail("/version", "unsupported version (expected " +
                           std::to_string(kFormatVersion) + ")");
  }

  double number(const Json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path, "expected a finite number");
    return x;
  }

  std::string string(const Json& v, const std::string& path) const {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }

  bool boolean(const Json& v, const std::string& path) const {
    if (!v.is_boolean()) fail(path, "expected true or false");
    return v.get<bool>();
  }

  template <int N>
  Eigen::Matrix<double, N, 1> vector(const Json& v, const std::string& path) const {
    if (!v.is_array() || v.size() != static_cast<std::size_t>(N))
      fail(path, "expected an array of " + std::to_string(N) + " numbers");
    Eigen::Matrix<double, N, 1> out;
    for (int i = 0; i < N; ++i)
      out[i] = number(v[static_cast<std::size_t>(i)], path + "/" + std::to_string(i));
    return out;
  }

  /// Unit quaternion written as [w, x, y, z]; normalized if within 1e-6.
  UnitQuaternion quaternion(const Json& v, const std::string& path) const {
    const Eigen::Vector4d q = vector<4>(v, path);
    if (std::abs(q.norm() - 1.0) > 1e-6) fail(path, "quaternion must have unit norm");
    return UnitQuaternion(q[0], q[1], q[2], q[3]).normalized();
  }

 private:
  std::string source_;
  std::string text_;
  Json root_;
};

template <typename Derived>
Json to_json_array(const Eigen::MatrixBase<Derived>& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline Json to_json_array(const UnitQuaternion& q) {
  return Json::array({q.w(), q.x(), q.y(), q.z()});
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Arm model

inline Json model_to_json(const ArmModel& m) {
  Json joints = Json::array();
  for (const JointSpec& j : m.joints)
    joints.push_back({{"origin", detail::to_json_array(j.origin)},
                      {"rotation", detail::to_json_array(j.rotation)},
                      {"axis", detail::to_json_array(j.axis)}});
  return {{"name", m.name},
          {"joints", joints},
          {"ee_offset",
           {{"position", detail::to_json_array(m.ee_offset.position)},
            {"rotation", detail::to_json_array(m.ee_offset.orientation)}}},
          {"limits",
           {{"position_min", detail::to_json_array(m.pos_min)},
            {"position_max", detail::to_json_array(m.pos_max)},
            {"velocity_min", detail::to_json_array(m.vel_min)},
            {"velocity_max", detail::to_json_array(m.vel_max)}}}};
}

namespace detail {

inline ArmModel model_from_json(const JsonReader& r, const Json& j, const std::string& path) {
  r.check_keys(j, path, {"name", "joints", "ee_offset", "limits"});
  ArmModel m;
  if (j.contains("name")) m.name = r.string(j["name"], path + "/name");
  if (!j.contains("joints") || !j["joints"].is_array() || j["joints"].size() != 6)
    r.fail(path + "/joints", "expected an array of 6 joints");
  for (std::size_t i = 0; i < 6; ++i) {
    const std::string jp = path + "/joints/" + std::to_string(i);
    const Json& js = j["joints"][i];
    r.check_keys(js, jp, {"origin", "rotation", "axis"});
    JointSpec spec;
    if (!js.contains("origin") || !js.contains("axis"))
      r.fail(jp, "joint needs \"origin\" and \"axis\"");
    spec.origin = r.vector<3>(js["origin"], jp + "/origin");
    spec.axis = r.vector<3>(js["axis"], jp + "/axis");
    if (js.contains("rotation")) spec.rotation = r.quaternion(js["rotation"], jp + "/rotation");
    m.joints[i] = spec;
  }
  if (j.contains("ee_offset")) {
    const Json& e = j["ee_offset"];
    r.check_keys(e, path + "/ee_offset", {"position", "rotation"});
    if (e.contains("position"))
      m.ee_offset.position = r.vector<3>(e["position"], path + "/ee_offset/position");
    if (e.contains("rotation"))
      m.ee_offset.orientation = r.quaternion(e["rotation"], path + "/ee_offset/rotation");
  }
  if (j.contains("limits")) {
    const Json& l = j["limits"];
    const std::string lp = path + "/limits";
    r.check_keys(l, lp, {"position_min", "position_max", "velocity_min", "velocity_max"});
    if (l.contains("position_min")) m.pos_min = r.vector<6>(l["position_min"], lp + "/position_min");
    if (l.contains("position_max")) m.pos_max = r.vector<6>(l["position_max"], lp + "/position_max");
    if (l.contains("velocity_min")) m.vel_min = r.vector<6>(l["velocity_min"], lp + "/velocity_min");
    if (l.contains("velocity_max")) m.vel_max = r.vector<6>(l["velocity_max"], lp + "/velocity_max");
  }
  try {
    validate(m);
  } catch (const InputError& e) {
    r.fail(path, e.what());
  }
  return m;
}

}  // namespace detail

/// Standalone model document: {"format": "compsim-model", "version": 1, "model": {...}}.
inline std::string model_document(const ArmModel& m) {
  Json doc = {{"format", "compsim-model"}, {"version", kFormatVersion}, {"model", model_to_json(m)}};
  return doc.dump(2) + "\n";
}

inline ArmModel parse_model(const std::string& text, const std::string& source = "<model>") {
  const detail::JsonReader r(source, text);
  r.check_keys(r.root(), "", {"format", "version", "model"});
  r.check_header("compsim-model");
  if (!r.root().contains("model")) r.fail("/model", "missing");
  return detail::model_from_json(r, r.root()["model"], "/model");
}

inline ArmModel load_model(const std::filesystem::path& path) {
  return parse_model(read_text_file(path), path.string());
}

// ---------------------------------------------------------------------------
// Run configuration

/// Everything that pins a reproducible run apart from the motion itself.
struct RunConfig {
  SimConfig sim;
  double baseline_window = kDefaultBaselineWindow;  // s
  std::string model_path;  // empty when the model is inline or built in
};

/// Canonical JSON of a configuration, model always inline.
inline Json config_to_json(const RunConfig& c) {
  const SimConfig& s = c.sim;
  return {{"format", "compsim-config"},
          {"version", kFormatVersion},
          {"model", model_to_json(s.model)},
          {"planner",
           {{"method", std::string(to_string(s.method))},
            {"gains",
             {{"position", detail::to_json_array(s.gains.position)},
              {"orientation", detail::to_json_array(s.gains.orientation)}}},
            {"svf", {{"sigma0", s.svf.sigma0}, {"upsilon", s.svf.upsilon}}},
            {"released_axis", std::string(to_string(s.released))},
            {"activation", std::string(to_string(s.activation))}}},
          {"simulation",
           {{"rate", s.rate},
            {"initial_theta", detail::to_json_array(s.initial_theta)},
            {"mount_offset", detail::to_json_array(s.mount_offset)},
            {"quiescence_speed", s.quiescence_speed},
            {"p1_angular_speed", s.p1_angular_speed},
            {"noise_stddev", s.noise_stddev},
            {"noise_seed", s.noise_seed}}},
          {"evaluation", {{"baseline_window", c.baseline_window}}}};
}

/// Parses a config document. `base_dir` resolves a model given as a path.
inline RunConfig parse_config(const std::string& text, const std::string& source = "<config>",
                              const std::filesystem::path& base_dir = {}) {
  const detail::JsonReader r(source, text);
  const Json& root = r.root();
  r.check_keys(root, "", {"format", "version", "model", "planner", "simulation", "evaluation"});
  r.check_header("compsim-config");
  RunConfig c;
  SimConfig& s = c.sim;

  if (root.contains("model")) {
    const Json& m = root["model"];
    if (m.is_string()) {
      std::filesystem::path p = m.get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      c.model_path = p.string();
      s.model = load_model(p);
    } else {
      s.model = detail::model_from_json(r, m, "/model");
    }
  }
  if (root.contains("planner")) {
    const Json& p = root["planner"];
    r.check_keys(p, "/planner", {"method", "gains", "svf", "released_axis", "activation"});
    try {
      if (p.contains("method")) s.method = parse_method(r.string(p["method"], "/planner/method"));
      if (p.contains("released_axis"))
        s.released = parse_axis(r.string(p["released_axis"], "/planner/released_axis"));
      if (p.contains("activation"))
        s.activation =
            parse_activation_mode(r.string(p["activation"], "/planner/activation"));
    } catch (const InputError& e) {
      if (std::string_view(e.what()).starts_with(source)) throw;
      r.fail("/planner", e.what());
    }
    if (p.contains("gains")) {
      const Json& g = p["gains"];
      r.check_keys(g, "/planner/gains", {"position", "orientation"});
      if (g.contains("position"))
        s.gains.position = r.vector<3>(g["position"], "/planner/gains/position");
      if (g.contains("orientation"))
        s.gains.orientation = r.vector<3>(g["orientation"], "/planner/gains/orientation");
    }
    if (p.contains("svf")) {
      const Json& f = p["svf"];
      r.check_keys(f, "/planner/svf", {"sigma0", "upsilon"});
      if (f.contains("sigma0")) s.svf.sigma0 = r.number(f["sigma0"], "/planner/svf/sigma0");
      if (f.contains("upsilon")) s.svf.upsilon = r.number(f["upsilon"], "/planner/svf/upsilon");
    }
  }
  if (root.contains("simulation")) {
    const Json& m = root["simulation"];
    const std::string sp = "/simulation";
    r.check_keys(m, sp, {"rate", "initial_theta", "mount_offset", "quiescence_speed",
                         "p1_angular_speed", "noise_stddev", "noise_seed"});
    if (m.contains("rate")) s.rate = r.number(m["rate"], sp + "/rate");
    if (m.contains("initial_theta"))
      s.initial_theta = r.vector<6>(m["initial_theta"], sp + "/initial_theta");
    if (m.contains("mount_offset"))
      s.mount_offset = r.vector<3>(m["mount_offset"], sp + "/mount_offset");
    if (m.contains("quiescence_speed"))
      s.quiescence_speed = r.number(m["quiescence_speed"], sp + "/quiescence_speed");
    if (m.contains("p1_angular_speed"))
      s.p1_angular_speed = r.number(m["p1_angular_speed"], sp + "/p1_angular_speed");
    if (m.contains("noise_stddev"))
      s.noise_stddev = r.number(m["noise_stddev"], sp + "/noise_stddev");
    if (m.contains("noise_seed")) {
      if (!m["noise_seed"].is_number_unsigned())
        r.fail(sp + "/noise_seed", "expected a non-negative integer");
      s.noise_seed = m["noise_seed"].get<std::uint64_t>();
    }
  }
  if (root.contains("evaluation")) {
    const Json& e = root["evaluation"];
    r.check_keys(e, "/evaluation", {"baseline_window"});
    if (e.contains("baseline_window"))
      c.baseline_window = r.number(e["baseline_window"], "/evaluation/baseline_window");
  }
  if (!(c.baseline_window >= 0.0)) r.fail("/evaluation/baseline_window", "must be >= 0");
  try {
    validate(s);
  } catch (const InputError& e) {
    r.fail("", e.what());
  }
  return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_text_file(path), path.string(), path.parent_path());
}

/// Hash of the canonical configuration; identical for any two documents
/// that parse to the same values.
inline std::string config_hash(const RunConfig& c) {
  return fnv1a64(config_to_json(c).dump());
}

// ---------------------------------------------------------------------------
// Trace CSV: t,px,py,pz,qw,qx,qy,qz[,vx,vy,vz]

inline constexpr std::string_view kTraceHeader = "t,px,py,pz,qw,qx,qy,qz,vx,vy,vz";
inline constexpr std::string_view kTraceHeaderNoVelocity = "t,px,py,pz,qw,qx,qy,qz";

inline std::vector<HumanSample> parse_trace(const std::string& text,
                                            const std::string& source = "<trace>") {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  int columns = 0;
  std::vector<HumanSample> out;
  auto fail = [&](const std::string& what) -> void {
    throw InputError(source + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    if (columns == 0) {
      if (line == kTraceHeader) columns = 11;
      else if (line == kTraceHeaderNoVelocity) columns = 8;
      else fail("expected header '" + std::string(kTraceHeader) + "' (velocity columns optional)");
      continue;
    }
    const auto fields = split_fields(line);
    if (static_cast<int>(fields.size()) != columns)
      fail("expected " + std::to_string(columns) + " fields, got " +
           std::to_string(fields.size()));
    double v[11];
    for (int i = 0; i < columns; ++i)
      if (!parse_double(fields[static_cast<std::size_t>(i)], v[i]))
        fail("field " + std::to_string(i + 1) + " is not a finite number");
    HumanSample s;
    s.t = v[0];
    s.position = Vec3(v[1], v[2], v[3]);
    const UnitQuaternion q(v[4], v[5], v[6], v[7]);
    if (std::abs(q.norm() - 1.0) > 1e-6) fail("orientation quaternion must have unit norm");
    s.orientation = q.normalized();
    if (columns == 11) s.velocity = Vec3(v[8], v[9], v[10]);
    if (!out.empty() && !(s.t > out.back().t))
      fail("timestamps must be strictly increasing");
    out.push_back(s);
  }
  if (columns == 0) throw InputError(source + ": missing header line");
  if (out.empty()) throw InputError(source + ": trace has no samples");
  if (columns == 8) fill_velocities(out);
  return out;
}

inline std::vector<HumanSample> load_trace(const std::filesystem::path& path) {
  return parse_trace(read_text_file(path), path.string());
}

inline std::string trace_to_csv(const std::vector<HumanSample>& trace) {
  std::string s(kTraceHeader);
  s += '\n';
  for (const HumanSample& h : trace) {
    const double v[11] = {h.t, h.position.x(), h.position.y(), h.position.z(),
                          h.orientation.w(), h.orientation.x(), h.orientation.y(),
                          h.orientation.z(), h.velocity.x(), h.velocity.y(), h.velocity.z()};
    for (int i = 0; i < 11; ++i) {
      if (i) s += ',';
      s += format_double(v[i]);
    }
    s += '\n';
  }
  return s;
}

inline void write_trace(const std::vector<HumanSample>& trace, const std::filesystem::path& path) {
  write_text_file(path, trace_to_csv(trace));
}

// ---------------------------------------------------------------------------
// TraceLog CSV

inline const std::vector<std::string>& log_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c = {"t",     "h_px",  "h_py",  "h_pz",  "h_qw",  "h_qx",
                                  "h_qy",  "h_qz",  "h_vx",  "h_vy",  "h_vz",  "vb_x",
                                  "vb_y",  "vb_z",  "dp_x",  "dp_y",  "dp_z",  "deta",
                                  "deps_x", "deps_y", "deps_z"};
    for (const char* g : {"theta_", "cmd_", "thetadot_"})
      for (int i = 1; i <= 6; ++i) c.push_back(g + std::to_string(i));
    for (const char* n : {"ee_px", "ee_py", "ee_pz", "ee_qw", "ee_qx", "ee_qy", "ee_qz",
                          "rho_x", "rho_y", "rho_z", "sigma_min", "saturated", "p1_violation"})
      c.push_back(n);
    return c;
  }();
  return cols;
}

namespace detail {

inline std::vector<double> log_row(const LogEntry& e) {
  std::vector<double> r;
  r.reserve(log_columns().size());
  const auto push3 = [&](const Vec3& v) { r.insert(r.end(), {v.x(), v.y(), v.z()}); };
  const auto pushq = [&](const UnitQuaternion& q) {
    r.insert(r.end(), {q.w(), q.x(), q.y(), q.z()});
  };
  const auto push6 = [&](const JointVector& v) {
    for (int i = 0; i < 6; ++i) r.push_back(v[i]);
  };
  r.push_back(e.t);
  push3(e.human.position);
  pushq(e.human.orientation);
  push3(e.human.velocity);
  push3(e.v_base);
  push3(e.delta_p);
  r.push_back(e.orientation_error.delta_eta);
  push3(e.orientation_error.delta_eps);
  push6(e.theta);
  push6(e.command);
  push6(e.theta_dot);
  push3(e.ee_base.position);
  pushq(e.ee_base.orientation);
  push3(e.ee_world);
  r.push_back(e.sigma_min);
  r.push_back(e.saturated ? 1.0 : 0.0);
  r.push_back(e.p1_violation ? 1.0 : 0.0);
  return r;
}

inline LogEntry log_entry(const std::vector<double>& r) {
  std::size_t i = 0;
  const auto get3 = [&] { Vec3 v(r[i], r[i + 1], r[i + 2]); i += 3; return v; };
  const auto getq = [&] {
    UnitQuaternion q(r[i], r[i + 1], r[i + 2], r[i + 3]);
    i += 4;
    return q;
  };
  const auto get6 = [&] {
    JointVector v;
    for (int k = 0; k < 6; ++k) v[k] = r[i++];
    return v;
  };
  LogEntry e;
  e.t = r[i++];
  e.human.t = e.t;
  e.human.position = get3();
  e.human.orientation = getq();
  e.human.velocity = get3();
  e.v_base = get3();
  e.delta_p = get3();
  e.orientation_error.delta_eta = r[i++];
  e.orientation_error.delta_eps = get3();
  e.theta = get6();
  e.command = get6();
  e.theta_dot = get6();
  e.ee_base.position = get3();
  e.ee_base.orientation = getq();
  e.ee_world = get3();
  e.sigma_min = r[i++];
  e.saturated = r[i++] != 0.0;
  e.p1_violation = r[i++] != 0.0;
  return e;
}

}  // namespace detail

/// Log CSV: "#"-prefixed metadata lines, one header row, one row per tick.
/// Values are written in shortest round-trip form, so a reload is exact.
inline std::string log_to_csv(const TraceLog& log) {
  std::string s = "# compsim-log " + std::to_string(kFormatVersion) + "\n";
  s += "# method: " + std::string(to_string(log.method)) + "\n";
  s += "# scenario: " + log.scenario + "\n";
  s += "# rate: " + format_double(log.rate) + "\n";
  s += "# units: s, m, m/s, rad, rad/s; quaternions w,x,y,z; see docs/formats.md\n";
  const auto& cols = log_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) s += ',';
    s += cols[i];
  }
  s += '\n';
  for (const LogEntry& e : log.entries) {
    const std::vector<double> row = detail::log_row(e);
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) s += ',';
      s += format_double(row[i]);
    }
    s += '\n';
  }
  return s;
}

inline void write_log(const TraceLog& log, const std::filesystem::path& path) {
  write_text_file(path, log_to_csv(log));
}

inline TraceLog parse_log(const std::string& text, const std::string& source = "<log>") {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  TraceLog log;
  bool have_version = false, have_method = false, have_scenario = false, have_rate = false;
  bool have_header = false;
  const auto& cols = log_columns();
  auto fail = [&](const std::string& what) -> void {
    throw InputError(source + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (have_header) continue;
      std::string_view body = line.substr(1);
      while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
      if (body.starts_with("compsim-log ")) {
        if (body.substr(12) != std::to_string(kFormatVersion))
          fail("unsupported log version '" + std::string(body.substr(12)) + "'");
        have_version = true;
      } else if (body.starts_with("method: ")) {
        try {
          log.method = parse_method(body.substr(8));
        } catch (const InputError& e) {
          fail(e.what());
        }
        have_method = true;
      } else if (body.starts_with("scenario: ")) {
        log.scenario = std::string(body.substr(10));
        have_scenario = true;
      } else if (body.starts_with("rate: ")) {
        if (!parse_double(body.substr(6), log.rate) || !(log.rate > 0.0))
          fail("rate must be a positive number");
        have_rate = true;
      }
      continue;
    }
    if (!have_header) {
      if (!have_version) fail("not a compsim log (missing '# compsim-log 1' line)");
      if (!have_method || !have_scenario || !have_rate)
        fail("missing metadata (method, scenario and rate are required)");
      const auto fields = split_fields(line);
      if (fields.size() != cols.size()) fail("unexpected column header");
      for (std::size_t i = 0; i < cols.size(); ++i)
        if (fields[i] != cols[i]) fail("unexpected column '" + std::string(fields[i]) + "'");
      have_header = true;
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != cols.size())
      fail("expected " + std::to_string(cols.size()) + " fields, got " +
           std::to_string(fields.size()));
    std::vector<double> row(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (!parse_double(fields[i], row[i]))
        fail("field '" + cols[i] + "' is not a finite number");
    if (!log.entries.empty() && !(row[0] > log.entries.back().t))
      fail("timestamps must be strictly increasing");
    log.entries.push_back(detail::log_entry(row));
  }
  if (!have_header) throw InputError(source + ": missing column header");
  if (log.entries.empty()) throw InputError(source + ": log has no rows");
  return log;
}

inline TraceLog load_log(const std::filesystem::path& path) {
  return parse_log(read_text_file(path), path.string());
}

// ---------------------------------------------------------------------------
// Reports

namespace detail {

inline Json axis_json(const AxisStats& a) {
  return {{"mean", a.mean},
          {"std", a.std},
          {"mean_error", a.mean_error},
          {"baseline_mean", a.baseline_mean},
          {"max_deviation", a.max_deviation}};
}

inline AxisStats axis_from_json(const JsonReader& r, const Json& j, const std::string& p) {
  r.check_keys(j, p, {"mean", "std", "mean_error", "baseline_mean", "max_deviation"});
  for (const char* k : {"mean", "std", "mean_error", "baseline_mean", "max_deviation"})
    if (!j.contains(k)) r.fail(p + "/" + k, "missing");
  return {r.number(j["mean"], p + "/mean"), r.number(j["std"], p + "/std"),
          r.number(j["mean_error"], p + "/mean_error"),
          r.number(j["baseline_mean"], p + "/baseline_mean"),
          r.number(j["max_deviation"], p + "/max_deviation")};
}

inline Json axes_json(const std::array<AxisStats, 3>& axes) {
  return {{"x", axis_json(axes[0])}, {"y", axis_json(axes[1])}, {"z", axis_json(axes[2])}};
}

inline Json report_body(const EvalReport& r) {
  return {{"scenario", r.scenario},
          {"method", r.method},
          {"axes", axes_json(r.axes)},
          {"distance_index", r.distance_index}};
}

inline EvalReport report_from_json(const JsonReader& r, const Json& j, const std::string& p,
                                   std::initializer_list<std::string_view> extra_keys) {
  std::vector<std::string_view> allowed = {"scenario", "method", "axes", "distance_index"};
  allowed.insert(allowed.end(), extra_keys);
  if (!j.is_object()) r.fail(p, "expected an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (std::string_view a : allowed) ok = ok || k == a;
    if (!ok) r.fail(p + "/" + k, "unknown key");
  }
  for (const char* k : {"scenario", "method", "axes", "distance_index"})
    if (!j.contains(k)) r.fail(p + "/" + k, "missing");
  EvalReport out;
  out.scenario = r.string(j["scenario"], p + "/scenario");
  out.method = r.string(j["method"], p + "/method");
  const Json& axes = j["axes"];
  r.check_keys(axes, p + "/axes", {"x", "y", "z"});
  const char* names[3] = {"x", "y", "z"};
  for (std::size_t a = 0; a < 3; ++a) {
    if (!axes.contains(names[a])) r.fail(p + "/axes/" + names[a], "missing");
    out.axes[a] = axis_from_json(r, axes[names[a]], p + "/axes/" + names[a]);
  }
  out.distance_index = r.number(j["distance_index"], p + "/distance_index");
  return out;
}

}  // namespace detail

inline std::string report_to_json(const EvalReport& r) {
  Json doc = {{"format", "compsim-report"}, {"version", kFormatVersion}};
  doc.update(detail::report_body(r));
  return doc.dump(2) + "\n";
}

inline EvalReport parse_report(const std::string& text, const std::string& source = "<report>") {
  const detail::JsonReader r(source, text);
  r.check_header("compsim-report");
  return detail::report_from_json(r, r.root(), "", {"format", "version"});
}

inline void write_report(const EvalReport& r, const std::filesystem::path& path) {
  write_text_file(path, report_to_json(r));
}

inline EvalReport load_report(const std::filesystem::path& path) {
  return parse_report(read_text_file(path), path.string());
}

inline std::string comparison_to_json(const Comparison& c) {
  Json doc = {{"format", "compsim-comparison"},
              {"version", kFormatVersion},
              {"a", detail::report_body(c.a)},
              {"b", detail::report_body(c.b)},
              {"delta",
               {{"axes", detail::axes_json(c.delta)},
                {"distance_index", c.distance_index_delta}}}};
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Run manifest

/// Resolved description of one `simulate` run. Re-running the manifest
/// reproduces the log byte for byte, which `output_hash` records.
struct RunManifest {
  std::string tool_version = std::string(kToolVersion);
  RunConfig config;
  std::string config_hash;
  std::string scenario = "custom";
  bool use_trace = false;
  MotionSpec motion;
  std::string trace_path;
  bool compensate = true;
  bool unfiltered = false;
  std::string log_path;
  std::string output_hash;
};

inline std::string manifest_to_json(const RunManifest& m) {
  const MotionSpec& s = m.motion;
  Json source;
  if (m.use_trace) {
    source = {{"trace", m.trace_path}};
  } else {
    source = {{"motion",
               {{"kind", std::string(to_string(s.kind))},
                {"amplitude", s.amplitude},
                {"period", s.period},
                {"duration", s.duration},
                {"seed", s.seed},
                {"cross_coupling", s.cross_coupling},
                {"hold", s.hold},
                {"rate", s.rate},
                {"origin", detail::to_json_array(s.origin)},
                {"orientation", detail::to_json_array(s.orientation)}}}};
  }
  Json doc = {{"format", "compsim-manifest"},
              {"version", kFormatVersion},
              {"tool_version", m.tool_version},
              {"config_hash", m.config_hash},
              {"model_path", m.config.model_path},
              {"config", config_to_json(m.config)},
              {"scenario",
               {{"name", m.scenario},
                {"source", source},
                {"compensate", m.compensate},
                {"unfiltered", m.unfiltered}}},
              {"outputs", {{"log", m.log_path}, {"log_hash", m.output_hash}}}};
  return doc.dump(2) + "\n";
}

inline RunManifest parse_manifest(const std::string& text,
                                  const std::string& source = "<manifest>") {
  const detail::JsonReader r(source, text);
  const Json& root = r.root();
  r.check_keys(root, "", {"format", "version", "tool_version", "config_hash", "model_path",
                          "config", "scenario", "outputs"});
  r.check_header("compsim-manifest");
  for (const char* k : {"config", "scenario", "outputs"})
    if (!root.contains(k)) r.fail(std::string("/") + k, "missing");
  RunManifest m;
  if (root.contains("tool_version"))
    m.tool_version = r.string(root["tool_version"], "/tool_version");
  m.config = parse_config(root["config"].dump(), source + " (config)");
  if (root.contains("model_path")) m.config.model_path = r.string(root["model_path"], "/model_path");
  m.config_hash = config_hash(m.config);
  if (root.contains("config_hash") && r.string(root["config_hash"], "/config_hash") != m.config_hash)
    r.fail("/config_hash", "does not match the embedded config");

  const Json& sc = root["scenario"];
  r.check_keys(sc, "/scenario", {"name", "source", "compensate", "unfiltered"});
  if (sc.contains("name")) m.scenario = r.string(sc["name"], "/scenario/name");
  if (sc.contains("compensate")) m.compensate = r.boolean(sc["compensate"], "/scenario/compensate");
  if (sc.contains("unfiltered")) m.unfiltered = r.boolean(sc["unfiltered"], "/scenario/unfiltered");
  if (!sc.contains("source")) r.fail("/scenario/source", "missing");
  const Json& src = sc["source"];
  r.check_keys(src, "/scenario/source", {"trace", "motion"});
  if (src.contains("trace")) {
    m.use_trace = true;
    m.trace_path = r.string(src["trace"], "/scenario/source/trace");
  } else if (src.contains("motion")) {
    const Json& mo = src["motion"];
    const std::string p = "/scenario/source/motion";
    r.check_keys(mo, p, {"kind", "amplitude", "period", "duration", "seed", "cross_coupling",
                         "hold", "rate", "origin", "orientation"});
    MotionSpec& s = m.motion;
    try {
      if (mo.contains("kind")) s.kind = parse_motion_kind(r.string(mo["kind"], p + "/kind"));
    } catch (const InputError& e) {
      if (std::string_view(e.what()).starts_with(source)) throw;
      r.fail(p + "/kind", e.what());
    }
    if (mo.contains("amplitude")) s.amplitude = r.number(mo["amplitude"], p + "/amplitude");
    if (mo.contains("period")) s.period = r.number(mo["period"], p + "/period");
    if (mo.contains("duration")) s.duration = r.number(mo["duration"], p + "/duration");
    if (mo.contains("seed")) {
      if (!mo["seed"].is_number_unsigned()) r.fail(p + "/seed", "expected a non-negative integer");
      s.seed = mo["seed"].get<std::uint64_t>();
    }
    if (mo.contains("cross_coupling"))
      s.cross_coupling = r.number(mo["cross_coupling"], p + "/cross_coupling");
    if (mo.contains("hold")) s.hold = r.number(mo["hold"], p + "/hold");
    if (mo.contains("rate")) s.rate = r.number(mo["rate"], p + "/rate");
    if (mo.contains("origin")) s.origin = r.vector<3>(mo["origin"], p + "/origin");
    if (mo.contains("orientation")) s.orientation = r.quaternion(mo["orientation"], p + "/orientation");
    try {
      validate(s);
    } catch (const InputError& e) {
      r.fail(p, e.what());
    }
  } else {
    r.fail("/scenario/source", "expected \"trace\" or \"motion\"");
  }

  const Json& out = root["outputs"];
  r.check_keys(out, "/outputs", {"log", "log_hash"});
  if (out.contains("log")) m.log_path = r.string(out["log"], "/outputs/log");
  if (out.contains("log_hash")) m.output_hash = r.string(out["log_hash"], "/outputs/log_hash");
  return m;
}

inline RunManifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_text_file(path), path.string());
}

/// Random3D seed override from the COMPSIM_SEED environment variable.
/// Returns false when unset; throws InputError when set but malformed.
inline bool seed_from_env(std::uint64_t& seed) {
  const char* v = std::getenv("COMPSIM_SEED");
  if (v == nullptr || *v == '\0') return false;
  const std::string_view s(v);
  std::uint64_t out = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), out);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw InputError("COMPSIM_SEED must be a non-negative integer, got '" + std::string(s) + "'");
  seed = out;
  return true;
}

}  // namespace compsim
