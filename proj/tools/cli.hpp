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

// Command-line front end. run_cli() is the whole program minus main(), so
// the tests can drive it in-process.
//
//   compsim fk        --theta=a,b,c,d,e,f [--config F | --model F]
//   compsim plan      --theta=... [--method nbm|rjm] [--v-base=x,y,z]
//                     [--delta-p=x,y,z] [--delta-eps=x,y,z] [--unfiltered]
//   compsim simulate  (--motion ud|lr|fb|random3d [shape flags] | --trace F |
//                      --from-manifest F) --out LOG [--manifest F] ...
//   compsim evaluate  LOG [--baseline-window S] [--out REPORT]
//   compsim compare   LOG_A LOG_B [--baseline-window S] [--out FILE]
//
// Exit codes: 0 success, 1 input error, 2 numerical failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "compsim/compsim.hpp"

namespace compsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNumerical = 2;

namespace detail {

template <int N>
Eigen::Matrix<double, N, 1> fixed_vector(const std::vector<double>& v, const char* what) {
  if (v.size() != static_cast<std::size_t>(N))
    throw InputError(std::string(what) + ": expected " + std::to_string(N) + " " +
                     (N == 6 ? "joint values" : "values") + ", got " +
                     std::to_string(v.size()));
  Eigen::Matrix<double, N, 1> out;
  for (int i = 0; i < N; ++i) {
    out[i] = v[static_cast<std::size_t>(i)];
    if (!std::isfinite(out[i])) throw InputError(std::string(what) + ": non-finite value");
  }
  return out;
}

inline std::string pose_json(const Pose& p) {
  Json j = {{"position", compsim::detail::to_json_array(p.position)},
            {"orientation", compsim::detail::to_json_array(p.orientation)}};
  return j.dump(2) + "\n";
}

/// Model/config resolution shared by fk and plan.
struct ModelSource {
  std::string config_path;
  std::string model_path;

  RunConfig resolve() const {
    if (!config_path.empty() && !model_path.empty())
      throw InputError("--config and --model are mutually exclusive");
    RunConfig c;
    if (!config_path.empty()) c = load_config(config_path);
    if (!model_path.empty()) {
      c.sim.model = load_model(model_path);
      c.model_path = model_path;
    }
    return c;
  }
};

struct SimulateOptions {
  std::string config_path;
  std::string from_manifest;
  std::string method;
  std::string motion;
  std::string trace;
  std::optional<double> amplitude, period, duration, coupling, hold, rate, noise;
  std::optional<std::uint64_t> seed, noise_seed;
  std::string scenario;
  bool no_compensation = false;
  bool unfiltered = false;
  std::string out;
  std::string manifest_out;
};

inline RunManifest manifest_from_options(const SimulateOptions& o) {
  RunManifest m;
  if (!o.from_manifest.empty()) {
    m = load_manifest(o.from_manifest);
    if (m.use_trace && std::filesystem::path(m.trace_path).is_relative())
      m.trace_path = (std::filesystem::path(o.from_manifest).parent_path() / m.trace_path).string();
    m.log_path = o.out;
    return m;
  }
  if (!o.config_path.empty()) m.config = load_config(o.config_path);
  SimConfig& s = m.config.sim;
  if (!o.method.empty()) s.method = parse_method(o.method);
  if (o.rate) s.rate = *o.rate;
  if (o.noise) s.noise_stddev = *o.noise;
  if (o.noise_seed) s.noise_seed = *o.noise_seed;
  m.compensate = !o.no_compensation;
  m.unfiltered = o.unfiltered;

  if (o.motion.empty() == o.trace.empty())
    throw InputError("simulate: give exactly one of --motion, --trace or --from-manifest");
  if (!o.trace.empty()) {
    m.use_trace = true;
    m.trace_path = o.trace;
    m.scenario = o.scenario.empty() ? std::filesystem::path(o.trace).stem().string() : o.scenario;
  } else {
    MotionSpec& ms = m.motion;
    ms.kind = parse_motion_kind(o.motion);
    if (o.amplitude) ms.amplitude = *o.amplitude;
    if (o.period) ms.period = *o.period;
    if (o.duration) ms.duration = *o.duration;
    if (o.coupling) ms.cross_coupling = *o.coupling;
    if (o.hold) ms.hold = *o.hold;
    ms.rate = s.rate;
    // Precedence for the Random3D seed: --seed, then COMPSIM_SEED, then default.
    std::uint64_t env_seed = 0;
    if (o.seed) ms.seed = *o.seed;
    else if (seed_from_env(env_seed)) ms.seed = env_seed;
    validate(ms);
    m.scenario = o.scenario.empty() ? std::string(to_string(ms.kind)) : o.scenario;
  }
  validate(s);
  m.config_hash = config_hash(m.config);
  m.log_path = o.out;
  return m;
}

/// Runs a manifest and returns the log text.
inline std::string execute(RunManifest& m) {
  SimConfig s = m.config.sim;
  s.scenario = m.scenario;
  s.compensate = m.compensate;
  s.inversion = m.unfiltered ? Inversion::Plain : Inversion::Svf;
  const std::vector<HumanSample> trace =
      m.use_trace ? load_trace(m.trace_path) : generate_motion(m.motion);
  const std::string text = log_to_csv(run_compensation(s, trace));
  m.output_hash = fnv1a64(text);
  return text;
}

inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") out << text;
  else write_text_file(path, text);
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Human-motion compensation kinematics for a shoulder-mounted 6-DoF arm",
               "compsim"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  // fk
  detail::ModelSource fk_src;
  std::vector<double> fk_theta;
  auto* fk = app.add_subcommand("fk", "Print the EE pose (arm base frame) for a joint vector");
  fk->add_option("--config", fk_src.config_path, "Run configuration (JSON)")->check(CLI::ExistingFile);
  fk->add_option("--model", fk_src.model_path, "Arm model file (JSON)")->check(CLI::ExistingFile);
  fk->add_option("--theta", fk_theta, "Joint angles, rad (6 comma-separated values)")
      ->delimiter(',')->required()->allow_extra_args(false);

  // plan
  detail::ModelSource plan_src;
  std::vector<double> plan_theta, plan_vb{0, 0, 0}, plan_dp{0, 0, 0}, plan_de{0, 0, 0};
  std::string plan_method;
  bool plan_unfiltered = false;
  auto* plan = app.add_subcommand("plan", "One planner step from explicit inputs");
  plan->add_option("--config", plan_src.config_path, "Run configuration (JSON)")->check(CLI::ExistingFile);
  plan->add_option("--model", plan_src.model_path, "Arm model file (JSON)")->check(CLI::ExistingFile);
  plan->add_option("--method", plan_method, "nbm or rjm (default: config, else rjm)");
  plan->add_option("--theta", plan_theta, "Joint angles, rad (6 values)")
      ->delimiter(',')->required()->allow_extra_args(false);
  plan->add_option("--v-base", plan_vb, "Base velocity in the home frame, m/s (3 values)")
      ->delimiter(',')->allow_extra_args(false);
  plan->add_option("--delta-p", plan_dp, "EE position correction, m (3 values; rjm)")
      ->delimiter(',')->allow_extra_args(false);
  plan->add_option("--delta-eps", plan_de, "Orientation error vector part (3 values)")
      ->delimiter(',')->allow_extra_args(false);
  plan->add_flag("--unfiltered", plan_unfiltered, "Use the plain pseudo-inverse (testing only)");

  // simulate
  detail::SimulateOptions so;
  auto* sim = app.add_subcommand("simulate", "Run the compensation loop and write a log CSV");
  sim->add_option("--config", so.config_path, "Run configuration (JSON)")->check(CLI::ExistingFile);
  sim->add_option("--from-manifest", so.from_manifest, "Replay a run manifest")->check(CLI::ExistingFile);
  sim->add_option("--method", so.method, "nbm or rjm (default: config, else rjm)");
  sim->add_option("--motion", so.motion, "Synthetic motion: ud, lr, fb or random3d");
  sim->add_option("--trace", so.trace, "Torso trace CSV instead of a synthetic motion")->check(CLI::ExistingFile);
  sim->add_option("--amplitude", so.amplitude, "Motion amplitude, m (default 0.15)");
  sim->add_option("--period", so.period, "Stroke period / random knot spacing, s (default 5)");
  sim->add_option("--duration", so.duration, "Motion duration after the hold, s (default 30)");
  sim->add_option("--seed", so.seed, "Random3D seed (default 1, or COMPSIM_SEED)");
  sim->add_option("--coupling", so.coupling, "Cross-coupling fraction in [0, 0.3] (default 0.1)");
  sim->add_option("--hold", so.hold, "Rest time before the motion, s (default 3)");
  sim->add_option("--rate", so.rate, "Loop rate, Hz (default: config, else 60)");
  sim->add_option("--noise", so.noise, "Torso position noise std dev, m (default 0)");
  sim->add_option("--noise-seed", so.noise_seed, "Noise seed");
  sim->add_option("--scenario", so.scenario, "Scenario tag written to the log");
  sim->add_flag("--no-compensation", so.no_compensation, "Hold the joints still");
  sim->add_flag("--unfiltered", so.unfiltered, "Use the plain pseudo-inverse (testing only)");
  sim->add_option("--out", so.out, "Log CSV path")->required();
  sim->add_option("--manifest", so.manifest_out, "Also write the run manifest (JSON)");

  // evaluate
  std::string eval_log, eval_out;
  double eval_window = kDefaultBaselineWindow;
  auto* eval = app.add_subcommand("evaluate", "Stabilization report (JSON) for a log");
  eval->add_option("log", eval_log, "Log CSV")->required()->check(CLI::ExistingFile);
  eval->add_option("--baseline-window", eval_window, "Baseline window, s (default 3)");
  eval->add_option("--out", eval_out, "Report path (default: stdout)");

  // compare
  std::string cmp_a, cmp_b, cmp_out;
  double cmp_window = kDefaultBaselineWindow;
  auto* cmp = app.add_subcommand("compare", "Compare two logs of the same scenario");
  cmp->add_option("log_a", cmp_a, "First log CSV")->required()->check(CLI::ExistingFile);
  cmp->add_option("log_b", cmp_b, "Second log CSV")->required()->check(CLI::ExistingFile);
  cmp->add_option("--baseline-window", cmp_window, "Baseline window, s (default 3)");
  cmp->add_option("--out", cmp_out, "Comparison path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*fk) {
      const RunConfig c = fk_src.resolve();
      const JointVector theta = detail::fixed_vector<6>(fk_theta, "--theta");
      out << detail::pose_json(forward_kinematics(c.sim.model, theta));
    } else if (*plan) {
      const RunConfig c = plan_src.resolve();
      const SimConfig& s = c.sim;
      const Method method = plan_method.empty() ? s.method : parse_method(plan_method);
      const JointVector theta = detail::fixed_vector<6>(plan_theta, "--theta");
      const Vec3 vb = detail::fixed_vector<3>(plan_vb, "--v-base");
      const Vec3 dp = detail::fixed_vector<3>(plan_dp, "--delta-p");
      const Vec3 de = detail::fixed_vector<3>(plan_de, "--delta-eps");
      const Inversion inv = plan_unfiltered ? Inversion::Plain : Inversion::Svf;
      const Jacobian jac = geometric_jacobian(s.model, theta);
      const PlannerCommand cmd =
          method == Method::Nbm
              ? nbm_step(linear_rows(jac), angular_rows(jac), vb, de, s.gains, s.svf, inv)
              : rjm_step(reconstruct_jacobian(linear_rows(jac), angular_rows(jac), s.released),
                         vb, dp, kept_components(de, s.released), s.gains, s.svf, s.released,
                         inv);
      if (!cmd.theta_dot.allFinite()) throw NumericalError("plan: non-finite planner output");
      const JointLimits limits = limits_from(s.model);
      PlannerCommand checked = cmd;
      mark_saturation(checked, limits);
      const JointVector clamped = clamp_velocity(cmd.theta_dot, limits);
      Json j = {{"method", std::string(to_string(method))},
                {"theta_dot", compsim::detail::to_json_array(cmd.theta_dot)},
                {"theta_dot_clamped", compsim::detail::to_json_array(clamped)},
                {"min_singular_value", cmd.min_singular_value},
                {"saturated", checked.saturated}};
      out << j.dump(2) << "\n";
    } else if (*sim) {
      RunManifest m = detail::manifest_from_options(so);
      const std::string text = detail::execute(m);
      write_text_file(so.out, text);
      if (!so.manifest_out.empty()) write_text_file(so.manifest_out, manifest_to_json(m));
      err << "compsim: wrote " << so.out << " (" << m.scenario << ", "
          << to_string(m.config.sim.method) << ", log hash " << m.output_hash << ")\n";
    } else if (*eval) {
      const EvalReport r = evaluate(load_log(eval_log), eval_window);
      detail::emit(report_to_json(r), eval_out, out);
    } else if (*cmp) {
      const Comparison c = compare_report(load_log(cmp_a), load_log(cmp_b), cmp_window);
      detail::emit(comparison_to_json(c), cmp_out, out);
    }
  } catch (const InputError& e) {
    err << "compsim: error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "compsim: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "compsim: error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}

}  // namespace compsim::cli
