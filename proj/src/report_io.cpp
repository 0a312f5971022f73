#include <bellman/report_io.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace bellman {

namespace {

// JSON cannot carry infinities; clamp the (already diagnostic) extremes.
double finite(double v) {
  if (std::isnan(v)) return 0.0;
  return std::clamp(v, -1e300, 1e300);
}

}  // namespace

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char ch : data) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash_hex(std::string_view canonical_config) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(canonical_config)));
  return buf;
}

nlohmann::ordered_json to_json(const Witness& witness) {
  return nlohmann::ordered_json{
      {"x", witness.point.x},
      {"y", witness.point.y},
      {"w", witness.point.w},
      {"v", witness.point.v},
      {"region", to_string(witness.region)},
      {"direction",
       {{"d", witness.dir.d}, {"e", witness.dir.e}, {"r", witness.dir.r}, {"s", witness.dir.s}}},
      {"raw_value", finite(witness.raw_value)},
  };
}

nlohmann::ordered_json to_json(const VerificationReport& report) {
  nlohmann::ordered_json j{
      {"check", report.check},
      {"c", report.c},
      {"points", report.total_points},
      {"skipped", report.skipped},
      {"violations", report.violations},
      {"pass", report.pass},
      {"worst_violation", finite(report.worst_violation)},
      {"tolerance", report.tolerance},
      {"witness", to_json(report.worst_witness)},
  };
  if (!report.note.empty()) {
    j["note"] = report.note;
  }
  return j;
}

nlohmann::ordered_json to_json(const EnsembleSummary& summary) {
  return nlohmann::ordered_json{
      {"trees", summary.trees},
      {"depth", summary.depth},
      {"c_target", summary.c_target},
      {"max_characteristic", summary.max_characteristic},
      {"max_l2_ratio", summary.max_l2_ratio},
      {"max_one_sided_ratio", summary.max_one_sided_ratio},
      {"max_two_sided_ratio", summary.max_two_sided_ratio},
      {"max_raw_ratio", summary.max_raw_ratio},
      {"supermartingale",
       {{"eligible", summary.sm_eligible},
        {"skipped", summary.sm_skipped},
        {"violations", summary.sm_violations},
        {"worst", finite(summary.sm_worst)}}},
      {"pass", summary.pass},
  };
}

nlohmann::ordered_json to_json(const SweepRow& row) {
  return nlohmann::ordered_json{
      {"target_characteristic", row.target_characteristic},
      {"max_characteristic", row.max_characteristic},
      {"best_raw_ratio", row.best_raw_ratio},
      {"trees", row.trees},
  };
}

nlohmann::ordered_json to_json(const BellmanEval& eval) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(eval.hessian, Eigen::EigenvaluesOnly);
  nlohmann::ordered_json j{
      {"value", eval.value},
      {"region", to_string(eval.region)},
      {"gradient", {eval.gradient(0), eval.gradient(1), eval.gradient(2), eval.gradient(3)}},
      {"hessian_eigenvalues",
       {es.eigenvalues()(0), es.eigenvalues()(1), es.eigenvalues()(2), es.eigenvalues()(3)}},
      {"on_piece_boundary", eval.on_piece_boundary},
      {"degenerate_hessian", eval.degenerate_hessian},
  };
  return j;
}

void write_csv_header(std::ostream& os, const std::string& config_hash,
                      const std::string& columns) {
  os << "# " << kToolName << " " << kToolVersion << " config=" << config_hash << "\n"
     << columns << "\n";
}

void dump_point_check_csv(const PointCheck& check, std::ostream& os,
                          const std::string& config_hash) {
  write_csv_header(os, config_hash, "index,x,y,w,v,region,value");
  os.precision(17);
  Witness wit;
  for (long i = 0; i < check.total; ++i) {
    const double viol = check.eval(i, wit);
    os << i << ',' << wit.point.x << ',' << wit.point.y << ',' << wit.point.w << ','
       << wit.point.v << ',' << to_string(wit.region) << ',' << viol << '\n';
  }
}

}  // namespace bellman
