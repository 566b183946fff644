#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jointmeas/distance.hpp"
#include "jointmeas/errors.hpp"
#include "jointmeas/feasibility.hpp"
#include "jointmeas/io.hpp"
#include "jointmeas/selftest.hpp"
#include "jointmeas/smearing.hpp"
#include "jointmeas/tradeoff.hpp"

namespace jointmeas::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RejectedInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadOptions {
  bool lenient = false;
  double psd_tol = kPsdTolerance;
  double completeness_tol = kCompletenessTolerance;

  void add_to(CLI::App* cmd) {
    cmd->add_flag("--lenient", lenient, "Warn about invalid POVMs instead of rejecting them");
    cmd->add_option("--psd-tol", psd_tol, "Tolerance on negative eigenvalues")->capture_default_str();
    cmd->add_option("--completeness-tol", completeness_tol, "Tolerance on ||sum_a A_a - I||")
        ->capture_default_str();
  }
};

Povm load_checked(const std::string& path, const LoadOptions& opts, std::ostream& err) {
  Povm p = io::load_povm(path);
  const ValidationReport report = validate_povm(p, opts.psd_tol, opts.completeness_tol);
  if (report.ok()) return p;
  for (const Violation& v : report.violations) {
    err << path << ": " << (opts.lenient ? "warning: " : "error: ") << v.describe() << "\n";
  }
  if (!opts.lenient) throw RejectedInput(path + ": not a valid POVM");
  return p;
}

void emit(std::ostream& out, const io::OrderedJson& doc) { out << doc.dump(2) << "\n"; }

OutcomeMap load_map(const std::string& path, const Povm& joint, const Povm& target) {
  return OutcomeMap::from_pairs(joint.outcomes(), target.outcomes(), io::load_outcome_map(path));
}

// When no map files are given the joint observable must be labeled by the
// product outcomes "a|b".
std::pair<OutcomeMap, OutcomeMap> infer_maps(const Povm& joint, const Povm& a, const Povm& b) {
  const CoordinateMaps maps = coordinate_maps(a.outcomes(), b.outcomes());
  const std::set<std::string> expected(maps.product.begin(), maps.product.end());
  const std::set<std::string> found(joint.outcomes().begin(), joint.outcomes().end());
  if (expected != found) {
    throw UsageError("--map-a/--map-b are required unless the joint outcomes are exactly the product labels 'a" +
                     std::string(1, kProductSeparator) + "b'");
  }
  std::vector<std::pair<std::string, std::string>> to_a;
  std::vector<std::pair<std::string, std::string>> to_b;
  for (const std::string& label : joint.outcomes()) {
    const auto pos = std::find(maps.product.begin(), maps.product.end(), label) - maps.product.begin();
    to_a.emplace_back(label, a.outcomes()[maps.to_a(static_cast<std::size_t>(pos))]);
    to_b.emplace_back(label, b.outcomes()[maps.to_b(static_cast<std::size_t>(pos))]);
  }
  return {OutcomeMap::from_pairs(joint.outcomes(), a.outcomes(), to_a),
          OutcomeMap::from_pairs(joint.outcomes(), b.outcomes(), to_b)};
}

struct FeasibilityFlags {
  FeasibilityOptions options;

  void add_to(CLI::App* cmd, bool sweep) {
    cmd->add_option("--max-iter", options.max_iter, "Iteration cap per feasibility solve")->capture_default_str();
    cmd->add_option("--tol", options.tol, "Residual accepted as feasible")->capture_default_str();
    cmd->add_option("--stagnation-window", options.stagnation_window, "Iterations per progress check")
        ->capture_default_str();
    if (sweep) {
      cmd->add_option("--resolution", options.bisection_resolution, "Bisection resolution on Y")
          ->capture_default_str();
      cmd->add_option("--threads", options.threads, "Worker threads")->capture_default_str()->check(
          CLI::PositiveNumber);
    }
  }
};

int cmd_validate(const std::string& path, const LoadOptions& opts, std::ostream& out, std::ostream& err) {
  const Povm p = io::load_povm(path);
  const ValidationReport report = validate_povm(p, opts.psd_tol, opts.completeness_tol);
  io::OrderedJson doc = io::to_json(report);
  doc["file"] = path;
  doc["dim"] = p.dim();
  doc["outcomes"] = p.outcomes();
  doc["pvm"] = report.ok() && is_pvm(p);
  emit(out, doc);
  if (report.ok()) return kExitOk;
  for (const Violation& v : report.violations) {
    err << path << ": " << (opts.lenient ? "warning: " : "error: ") << v.describe() << "\n";
  }
  return opts.lenient ? kExitOk : kExitInvalid;
}

int cmd_distance(const std::string& metric, const std::string& a_path, const std::string& b_path,
                 const std::string& state_out, const LoadOptions& opts, std::ostream& out, std::ostream& err) {
  const Povm a = load_checked(a_path, opts, err);
  const Povm b = load_checked(b_path, opts, err);
  const DistanceValue d = metric == "inf" ? distance_inf(a, b) : distance_l1(a, b);
  io::OrderedJson doc = io::to_json(d, metric);
  if (d.witness_state && !state_out.empty()) {
    io::write_file(state_out, io::serialize_state(*d.witness_state));
    doc["witness_state_file"] = state_out;
  }
  emit(out, doc);
  return kExitOk;
}

int cmd_bounds(const std::string& which, const std::string& a_path, const std::string& b_path,
               const std::string& joint_path, const std::string& map_a_path, const std::string& map_b_path,
               const LoadOptions& opts, std::ostream& out, std::ostream& err) {
  const Povm a = load_checked(a_path, opts, err);
  const Povm b = load_checked(b_path, opts, err);
  if (which == "cor-joint") {
    if (!joint_path.empty()) err << "note: --joint is ignored for cor-joint\n";
    emit(out, io::to_json(check_corollary_joint(a, b)));
    return kExitOk;
  }
  if (joint_path.empty()) throw UsageError("--inequality " + which + " requires --joint");
  if (map_a_path.empty() != map_b_path.empty()) throw UsageError("--map-a and --map-b must be given together");
  const Povm joint = load_checked(joint_path, opts, err);
  auto [f_a, f_b] = map_a_path.empty()
                        ? infer_maps(joint, a, b)
                        : std::pair{load_map(map_a_path, joint, a), load_map(map_b_path, joint, b)};
  TradeoffReport report;
  if (which == "theorem1") {
    report = check_theorem1(a, b, joint, f_a, f_b);
  } else if (which == "theorem2") {
    report = check_theorem2(a, b, joint, f_a, f_b);
  } else if (which == "cor-pvm-inf") {
    report = check_corollary_pvm_inf(a, b, joint, f_a, f_b);
  } else if (which == "cor-pvm-l1") {
    report = check_corollary_pvm_l1(a, b, joint, f_a, f_b);
  } else {
    report = check_corollary_pvm_instrument(a, b, joint, f_a, f_b);
  }
  emit(out, io::to_json(report));
  return kExitOk;
}

int cmd_check_joint(const std::string& a_path, const std::string& b_path, const std::string& witness_out,
                    const FeasibilityOptions& options, const LoadOptions& opts, std::ostream& out,
                    std::ostream& err) {
  const Povm a = load_checked(a_path, opts, err);
  const Povm b = load_checked(b_path, opts, err);
  const FeasibilityResult result = check_joint_measurability(a, b, options);
  io::OrderedJson doc = io::to_json(result);
  if (result.witness && !witness_out.empty()) {
    io::write_file(witness_out, io::serialize_povm(*result.witness));
    doc["witness_file"] = witness_out;
  }
  emit(out, doc);
  return kExitOk;
}

int cmd_frontier(const std::string& a_path, const std::string& b_path, std::size_t grid,
                 const std::string& csv_path, std::optional<double> x_max, const FeasibilityOptions& options,
                 const LoadOptions& opts, std::ostream& out, std::ostream& err) {
  const Povm a = load_checked(a_path, opts, err);
  const Povm b = load_checked(b_path, opts, err);
  const std::vector<FrontierPoint> points = frontier_sweep(a, b, grid, options, x_max);
  io::write_file(csv_path, io::frontier_csv(points));
  out << "wrote " << points.size() << " frontier points to " << csv_path << "\n";
  return kExitOk;
}

int cmd_qubit_demo(double theta, std::size_t grid, const std::string& csv_path, std::ostream& out) {
  if (!(theta >= 0.0 && theta <= M_PI / 2)) throw UsageError("--theta must lie in [0, pi/2]");
  const Povm a(std::vector<std::string>{"+", "-"},
               {qubit_projector({0.0, 0.0, 1.0}), qubit_projector({0.0, 0.0, -1.0})});
  const BlochVector n = bloch_xz(theta);
  const Povm b(std::vector<std::string>{"+", "-"},
               {qubit_projector(n), qubit_projector({-n[0], -n[1], -n[2]})});
  const AdmissibleCurves curves = admissible_region_curves(theta, grid, 0.5);
  io::write_file(csv_path, io::curves_csv(curves));
  out << "commutator norm " << io::format_number(max_commutator_norm(a, b)) << ", heinosaari bound "
      << io::format_number(heinosaari_lower_bound(theta)) << "\n"
      << "wrote " << grid << " rows to " << csv_path << "\n";
  return kExitOk;
}

int cmd_selftest(const SelftestOptions& options, std::ostream& out) {
  std::size_t violations = 0;
  for (const SuiteOutcome& s : run_selftest(options)) {
    out << s.name << ": " << s.trials << " trials, " << s.violations << " violations, worst margin "
        << io::format_number(s.worst_margin) << "\n";
    if (s.violations > 0) out << "  first failure: " << s.first_failure << "\n";
    violations += s.violations;
  }
  return violations == 0 ? kExitOk : kExitInvalid;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Approximate joint measurement of POVMs: distances, tradeoff bounds, feasibility"};
  app.name("jointmeas");
  app.require_subcommand(1);

  std::string a_path, b_path, path, out_path;
  LoadOptions load;
  FeasibilityFlags feas;

  auto* validate = app.add_subcommand("validate", "Validate a POVM file");
  validate->add_option("povm", path, "POVM file")->required();
  load.add_to(validate);

  std::string metric = "inf";
  std::string state_out = "witness_state.json";
  auto* distance = app.add_subcommand("distance", "Distance between two POVMs with a witness state");
  distance->add_option("--metric", metric, "inf or l1")->check(CLI::IsMember({"inf", "l1"}))->capture_default_str();
  distance->add_option("A", a_path)->required();
  distance->add_option("B", b_path)->required();
  distance->add_option("--state-out", state_out, "Witness state file ('' to skip)")->capture_default_str();
  load.add_to(distance);

  std::string inequality;
  std::string joint_path, map_a_path, map_b_path;
  auto* bounds = app.add_subcommand("bounds", "Evaluate a tradeoff inequality");
  bounds->add_option("--inequality", inequality)
      ->required()
      ->check(CLI::IsMember({"theorem1", "theorem2", "cor-joint", "cor-pvm-instrument", "cor-pvm-inf", "cor-pvm-l1"}));
  bounds->add_option("A", a_path)->required();
  bounds->add_option("B", b_path)->required();
  bounds->add_option("--joint", joint_path, "Joint observable F");
  bounds->add_option("--map-a", map_a_path, "Outcome map from F onto A");
  bounds->add_option("--map-b", map_b_path, "Outcome map from F onto B");
  load.add_to(bounds);

  std::string witness_out = "joint_witness.json";
  auto* check_joint = app.add_subcommand("check-joint", "Decide joint measurability");
  check_joint->add_option("A", a_path)->required();
  check_joint->add_option("B", b_path)->required();
  check_joint->add_option("--witness-out", witness_out, "Witness POVM file ('' to skip)")->capture_default_str();
  feas.add_to(check_joint, false);
  load.add_to(check_joint);

  std::size_t grid = 0;
  std::optional<double> x_max;
  auto* frontier = app.add_subcommand("frontier", "Sweep the achievable (X, Y) frontier");
  frontier->add_option("A", a_path)->required();
  frontier->add_option("B", b_path)->required();
  frontier->add_option("--grid", grid)->required()->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
  frontier->add_option("--out", out_path)->required();
  frontier->add_option("--x-max", x_max, "Largest X target");
  feas.add_to(frontier, true);
  load.add_to(frontier);

  double theta = 0.0;
  auto* qubit_demo = app.add_subcommand("qubit-demo", "Admissible-region curves for two qubit PVMs");
  qubit_demo->add_option("--theta", theta, "Angle between Bloch vectors (radians)")->required();
  qubit_demo->add_option("--grid", grid)->required()->check(CLI::Range(std::size_t{2}, std::size_t{1000000}));
  qubit_demo->add_option("--out", out_path)->required();

  SelftestOptions self;
  auto* selftest = app.add_subcommand("selftest", "Run the randomized property suites");
  selftest->add_option("--trials", self.trials)->capture_default_str()->check(CLI::PositiveNumber);
  selftest->add_option("--seed", self.seed)->capture_default_str();
  selftest->add_option("--threads", self.threads)->capture_default_str()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitIoOrUsage;
  }

  try {
    if (*validate) return cmd_validate(path, load, out, err);
    if (*distance) return cmd_distance(metric, a_path, b_path, state_out, load, out, err);
    if (*bounds) return cmd_bounds(inequality, a_path, b_path, joint_path, map_a_path, map_b_path, load, out, err);
    if (*check_joint) return cmd_check_joint(a_path, b_path, witness_out, feas.options, load, out, err);
    if (*frontier) return cmd_frontier(a_path, b_path, grid, out_path, x_max, feas.options, load, out, err);
    if (*qubit_demo) return cmd_qubit_demo(theta, grid, out_path, out);
    if (*selftest) return cmd_selftest(self, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitIoOrUsage;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIoOrUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitIoOrUsage;
  } catch (const RejectedInput& e) {
    err << e.what() << "\n";
    return kExitInvalid;
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const CapacityError& e) {
    err << "capacity: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitIoOrUsage;
}

}  // namespace jointmeas::cli
