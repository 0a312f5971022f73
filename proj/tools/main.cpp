// Command-line front end: evaluate the Burkholder function, run the grid and
// matrix verification suites, and exercise the inequalities on exact dyadic
// martingale models.
//
// Exit codes: 0 success, 2 usage/config error, 3 verification failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <bellman/bellman.hpp>
#include <bellman/martingale.hpp>
#include <bellman/report_io.hpp>
#include <bellman/verifier.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitFailed = 3;

struct CommonOpts {
  std::vector<double> c_values{1.5, 2.0, 4.0, 10.0};
  int grid = 21;
  long target_points = 0;
  double tol = 0.0;  // 0: per-check defaults
  std::uint64_t seed = 1;
  int workers = 0;
  std::string out_dir;
  std::string format = "json";
  bool exact_rational = false;
};

std::string canonical_config(const nlohmann::ordered_json& j) { return j.dump(); }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot write " + path.string());
  }
  os << text;
}

bellman::GridSpec grid_from(const CommonOpts& opts) {
  bellman::GridSpec grid;
  grid.c_values = opts.c_values;
  grid.points_per_axis = opts.grid;
  grid.target_points = opts.target_points;
  grid.workers = opts.workers;
  return grid;
}

int cmd_eval(double c, double x, double y, double w, double v) {
  const bellman::DomainParams params(c);
  const bellman::BellmanPoint p{x, y, w, v};
  const bellman::BellmanEval eval = bellman::eval_B(p, params);
  nlohmann::ordered_json j = bellman::to_json(eval);
  j["c"] = c;
  j["G"] = bellman::eval_G(p, params);
  j["majorization_gap"] = bellman::majorization_gap(p, params);
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_verify(const CommonOpts& opts, std::vector<std::string> suites) {
  for (const auto& name : suites) {
    if (!bellman::is_known_suite(name)) {
      std::cerr << "error: unknown suite '" << name << "'; known:";
      for (const auto& s : bellman::known_suites()) std::cerr << ' ' << s;
      std::cerr << " all\n";
      return kExitConfig;
    }
  }
  const bellman::GridSpec grid = grid_from(opts);
  const std::optional<double> tol =
      opts.tol > 0.0 ? std::optional<double>(opts.tol) : std::nullopt;

  nlohmann::ordered_json config{
      {"command", "verify"},       {"suites", suites},
      {"c", opts.c_values},        {"grid", opts.grid},
      {"target_points", opts.target_points}, {"tol", opts.tol},
      {"exact_rational", opts.exact_rational},
  };
  const std::string hash = bellman::config_hash_hex(canonical_config(config));

  bool all_pass = true;
  nlohmann::ordered_json out{{"tool", bellman::kToolName},
                             {"version", bellman::kToolVersion},
                             {"config_hash", hash},
                             {"config", config},
                             {"reports", nlohmann::ordered_json::array()}};
  for (const auto& name : suites) {
    const auto reports = bellman::run_suite(name, grid, tol, opts.exact_rational);
    for (const auto& rep : reports) {
      all_pass = all_pass && rep.pass;
      nlohmann::ordered_json j = bellman::to_json(rep);
      if (!opts.exact_rational && j.contains("note") &&
          rep.check.find("certificates") != std::string::npos) {
        j.erase("note");  // certificate listing only on request
      }
      out["reports"].push_back(j);
      std::cerr << (rep.pass ? "PASS" : "FAIL") << "  " << rep.check;
      if (rep.c > 0) std::cerr << " [c=" << rep.c << "]";
      std::cerr << "  worst=" << rep.worst_violation << " tol=" << rep.tolerance << "  ("
                << rep.total_points << " pts, " << rep.wall_ms << " ms)\n";
    }
  }
  out["pass"] = all_pass;
  std::cout << out.dump(2) << "\n";

  if (!opts.out_dir.empty()) {
    const std::filesystem::path dir(opts.out_dir);
    std::filesystem::create_directories(dir);
    write_text_file(dir / "verify_report.json", out.dump(2) + "\n");
    if (opts.format == "csv") {
      for (const auto& name : suites) {
        const auto checks = bellman::point_checks_for_suite(name, grid);
        for (const auto& check : checks) {
          std::string file = check.name;
          for (auto& ch : file) {
            if (ch == '/') ch = '_';
          }
          std::ostringstream os;
          bellman::dump_point_check_csv(check, os, hash);
          write_text_file(dir / (file + "_c" + std::to_string(check.c) + ".csv"), os.str());
        }
      }
    }
  }
  return all_pass ? kExitOk : kExitFailed;
}

int cmd_simulate(const CommonOpts& opts, long trees, int depth, double c_target,
                 const std::string& h_law, const std::string& weight_law, double h_value,
                 const std::vector<double>& sweep_chars, int dump_trees) {
  if (depth < 1 || depth > bellman::DyadicTree::kMaxDepth) {
    std::cerr << "error: depth must be in [1, " << bellman::DyadicTree::kMaxDepth
              << "] (exact enumeration cap)\n";
    return kExitConfig;
  }
  if (trees < 0) {
    std::cerr << "error: --trees must be >= 0\n";
    return kExitConfig;
  }
  bellman::SimConfig config;
  config.depth = depth;
  config.seed = opts.seed;
  config.c_target = c_target;
  config.num_trees = trees;
  config.h_value = h_value;
  config.workers = opts.workers;
  try {
    config.h_law = bellman::h_law_from_string(h_law);
    config.weight_law = bellman::weight_law_from_string(weight_law);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (opts.tol > 0.0) config.tolerance = opts.tol;

  nlohmann::ordered_json cfg{
      {"command", "simulate"}, {"trees", trees},         {"depth", depth},
      {"char", c_target},      {"seed", opts.seed},      {"h_law", h_law},
      {"h_value", h_value},    {"weight_law", weight_law}};
  const std::string hash = bellman::config_hash_hex(canonical_config(cfg));

  nlohmann::ordered_json out{{"tool", bellman::kToolName},
                             {"version", bellman::kToolVersion},
                             {"config_hash", hash},
                             {"config", cfg}};

  bool pass = true;
  if (sweep_chars.empty()) {
    const bellman::EnsembleSummary summary = bellman::run_ensemble(config);
    pass = summary.pass;
    out["ensemble"] = bellman::to_json(summary);
  } else {
    out["sweep"] = nlohmann::ordered_json::array();
    for (const auto& row : bellman::sweep_characteristic(config, sweep_chars)) {
      out["sweep"].push_back(bellman::to_json(row));
    }
  }
  out["pass"] = pass;
  std::cout << out.dump(2) << "\n";

  if (!opts.out_dir.empty()) {
    const std::filesystem::path dir(opts.out_dir);
    std::filesystem::create_directories(dir);
    write_text_file(dir / "simulate_report.json", out.dump(2) + "\n");
    if (opts.format == "csv" && dump_trees > 0) {
      for (long k = 0; k < std::min<long>(trees, dump_trees); ++k) {
        const bellman::DyadicTree tree = bellman::make_tree(config, static_cast<std::uint64_t>(k));
        std::ostringstream os;
        bellman::write_tree_csv(tree, os, std::string(bellman::kToolName) + " " +
                                              bellman::kToolVersion + " config=" + hash);
        write_text_file(dir / ("tree_" + std::to_string(k) + ".csv"), os.str());
      }
    }
  }
  return pass ? kExitOk : kExitFailed;
}

int cmd_report(const std::vector<std::string>& files) {
  bool all_pass = true;
  long shown = 0;
  for (const auto& file : files) {
    std::ifstream is(file);
    if (!is) {
      std::cerr << "error: cannot read " << file << "\n";
      return kExitConfig;
    }
    nlohmann::json j;
    try {
      is >> j;
    } catch (const std::exception& e) {
      std::cerr << "error: " << file << ": " << e.what() << "\n";
      return kExitConfig;
    }
    const bool pass = j.value("pass", false);
    all_pass = all_pass && pass;
    std::cout << (pass ? "PASS" : "FAIL") << "  " << file << "\n";
    if (j.contains("reports")) {
      for (const auto& rep : j["reports"]) {
        std::cout << "  " << (rep.value("pass", false) ? "pass" : "FAIL") << "  "
                  << rep.value("check", "?") << " [c=" << rep.value("c", 0.0)
                  << "] worst=" << rep.value("worst_violation", 0.0) << "\n";
        ++shown;
      }
    }
    if (j.contains("ensemble")) {
      const auto& e = j["ensemble"];
      std::cout << "  trees=" << e.value("trees", 0)
                << " max_l2_ratio=" << e.value("max_l2_ratio", 0.0)
                << " max_one_sided=" << e.value("max_one_sided_ratio", 0.0)
                << " max_two_sided=" << e.value("max_two_sided_ratio", 0.0) << "\n";
      ++shown;
    }
  }
  std::cout << (all_pass ? "ALL PASS" : "FAILURES PRESENT") << " (" << shown << " records)\n";
  return all_pass ? kExitOk : kExitFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explicit Burkholder function for the weighted L2 martingale-transform "
               "bound: evaluation, certification and exact dyadic simulation"};
  app.set_config("--config", "", "plain key=value config file (flags win)");
  app.require_subcommand(1);

  CommonOpts opts;

  auto add_common = [&](CLI::App* cmd, bool with_grid) {
    cmd->add_option("--seed", opts.seed, "master RNG seed");
    cmd->add_option("--workers", opts.workers,
                    "worker threads (0: $BELLMAN_VERIFY_WORKERS or hardware)");
    cmd->add_option("--out", opts.out_dir, "output directory for reports");
    cmd->add_option("--format", opts.format, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--tol", opts.tol, "tolerance override (0: per-check defaults)");
    if (with_grid) {
      cmd->add_option("--c", opts.c_values, "characteristic bounds c > 1")->delimiter(',');
      cmd->add_option("--grid", opts.grid, "grid points per axis");
      cmd->add_option("--points", opts.target_points, "approximate total points per check");
    }
  };

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate B at one point");
  double c = 2.0, x = 0.0, y = 0.0, w = 1.0, v = 1.0;
  eval->add_option("--c", c, "characteristic bound")->required();
  eval->add_option("--x", x)->required();
  eval->add_option("--y", y)->required();
  eval->add_option("--w", w)->required();
  eval->add_option("--v", v)->required();

  // verify
  auto* verify = app.add_subcommand("verify", "run verification suites");
  std::vector<std::string> suites{"all"};
  verify->add_option("--suite", suites, "comma-separated suite names")->delimiter(',');
  verify->add_flag("--exact-rational", opts.exact_rational,
                   "list exact Sylvester certificates in the report");
  add_common(verify, true);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "exact dyadic martingale ensembles");
  long trees = 100;
  int depth = 8;
  double c_target = 4.0, h_value = 1.0;
  std::string h_law = "greedy", weight_law = "two-point";
  std::vector<double> sweep_chars;
  int dump_trees = 0;
  simulate->add_option("--trees", trees, "ensemble size");
  simulate->add_option("--depth", depth, "tree depth (<= 20)");
  simulate->add_option("--char", c_target, "target A2 characteristic");
  simulate->add_option("--h-law", h_law, "constant | alternating | greedy");
  simulate->add_option("--h-value", h_value, "multiplier for --h-law constant");
  simulate->add_option("--weight-law", weight_law, "two-point | power");
  simulate->add_option("--sweep", sweep_chars, "characteristic sweep grid")->delimiter(',');
  simulate->add_option("--dump-trees", dump_trees, "with --format csv --out: dump N trees");
  add_common(simulate, false);

  // report
  auto* report = app.add_subcommand("report", "summarize saved JSON reports");
  std::vector<std::string> files;
  report->add_option("files", files, "report files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (app.got_subcommand(eval)) {
      return cmd_eval(c, x, y, w, v);
    }
    if (app.got_subcommand(verify)) {
      return cmd_verify(opts, suites);
    }
    if (app.got_subcommand(simulate)) {
      return cmd_simulate(opts, trees, depth, c_target, h_law, weight_law, h_value,
                          sweep_chars, dump_trees);
    }
    if (app.got_subcommand(report)) {
      return cmd_report(files);
    }
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitConfig;
}
