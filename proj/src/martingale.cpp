#include <bellman/martingale.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace bellman {

namespace {

// splitmix64: deterministic across platforms, one independent stream per tree.
struct SplitMix64 {
  std::uint64_t state;

  std::uint64_t next() noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
};

void allocate(DyadicTree& tree, int depth) {
  if (depth < 1 || depth > DyadicTree::kMaxDepth) {
    throw std::invalid_argument("tree depth must be in [1, " +
                                std::to_string(DyadicTree::kMaxDepth) + "]");
  }
  tree.depth = depth;
  const long n = tree.node_count() + 1;  // index 0 unused
  tree.X.assign(n, 0.0);
  tree.Y.assign(n, 0.0);
  tree.W.assign(n, 1.0);
  tree.V.assign(n, 1.0);
  tree.Ystar.assign(n, 0.0);
  tree.Yabsstar.assign(n, 0.0);
  tree.H.assign(n, 0.0);
}

// Exact average of u^alpha over [a, b]; the leaf values of a power weight are
// interval averages of a fixed density, so refining the tree never lowers the
// characteristic.
double power_interval_average(double a, double b, double alpha) {
  return (std::pow(b, alpha + 1.0) - std::pow(a, alpha + 1.0)) / ((alpha + 1.0) * (b - a));
}

std::vector<double> two_point_leaves(const std::vector<char>& pattern, double theta) {
  std::vector<double> leaves(pattern.size());
  for (size_t i = 0; i < pattern.size(); ++i) {
    leaves[i] = pattern[i] ? theta : 1.0 / theta;
  }
  return leaves;
}

std::vector<double> power_leaves(long count, double alpha) {
  std::vector<double> leaves(count);
  for (long k = 0; k < count; ++k) {
    const double a = static_cast<double>(k) / count;
    const double b = static_cast<double>(k + 1) / count;
    leaves[k] = power_interval_average(a, b, alpha);
  }
  return leaves;
}

// Rescales the family parameter by bisection until the characteristic is
// within 1% of target. The map is continuous with char(lo) = 1, so a crossing
// exists whenever the bracket reaches the target.
template <typename LeavesOf>
double target_characteristic(DyadicTree& tree, double target, LeavesOf&& leaves_of,
                             double lo, double hi_start, double hi_cap) {
  double char_lo = build_weight(tree, leaves_of(lo));
  if (target <= char_lo * 1.01) {
    return char_lo;
  }
  double hi = hi_start;
  double char_hi = build_weight(tree, leaves_of(hi));
  while (char_hi < target && hi < hi_cap) {
    hi = std::min(hi * 2.0, hi_cap);
    char_hi = build_weight(tree, leaves_of(hi));
  }
  if (char_hi < target) {
    return char_hi;  // family exhausted; keep the closest achievable weight
  }
  double mid_char = char_hi;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    mid_char = build_weight(tree, leaves_of(mid));
    if (std::abs(mid_char - target) <= 0.01 * target) {
      return mid_char;
    }
    (mid_char < target ? lo : hi) = mid;
  }
  return build_weight(tree, leaves_of(hi));
}

}  // namespace

const char* to_string(WeightLaw law) noexcept {
  switch (law) {
    case WeightLaw::kTwoPoint: return "two-point";
    case WeightLaw::kPowerType: return "power";
    case WeightLaw::kUserLeaves: return "user";
  }
  return "?";
}

const char* to_string(HLaw law) noexcept {
  switch (law) {
    case HLaw::kConstant: return "constant";
    case HLaw::kAlternating: return "alternating";
    case HLaw::kAdversarialGreedy: return "greedy";
  }
  return "?";
}

WeightLaw weight_law_from_string(const std::string& s) {
  if (s == "two-point") return WeightLaw::kTwoPoint;
  if (s == "power") return WeightLaw::kPowerType;
  if (s == "user") return WeightLaw::kUserLeaves;
  throw std::invalid_argument("unknown weight law: " + s);
}

HLaw h_law_from_string(const std::string& s) {
  if (s == "constant") return HLaw::kConstant;
  if (s == "alternating") return HLaw::kAlternating;
  if (s == "greedy") return HLaw::kAdversarialGreedy;
  throw std::invalid_argument("unknown H law: " + s);
}

double build_weight(DyadicTree& tree, const std::vector<double>& leaf_weights) {
  const long leaves = tree.leaf_count();
  if (static_cast<long>(leaf_weights.size()) != leaves) {
    throw std::invalid_argument("expected " + std::to_string(leaves) + " leaf weights");
  }
  for (const double w : leaf_weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("leaf weights must be positive and finite");
    }
  }
  const long fl = tree.first_leaf();
  for (long k = 0; k < leaves; ++k) {
    tree.W[fl + k] = leaf_weights[k];
    tree.V[fl + k] = 1.0 / leaf_weights[k];
  }
  for (long i = fl - 1; i >= 1; --i) {
    tree.W[i] = 0.5 * (tree.W[2 * i] + tree.W[2 * i + 1]);
    tree.V[i] = 0.5 * (tree.V[2 * i] + tree.V[2 * i + 1]);
  }
  return characteristic(tree);
}

double characteristic(const DyadicTree& tree) {
  double worst = 1.0;
  for (long i = 1; i <= tree.node_count(); ++i) {
    worst = std::max(worst, tree.W[i] * tree.V[i]);
  }
  return worst;
}

void build_transform(DyadicTree& tree) {
  if (std::abs(tree.h0) > 1.0) {
    throw std::invalid_argument("|h0| must be <= 1");
  }
  tree.Y[1] = tree.h0 * tree.X[1];
  tree.Ystar[1] = tree.Y[1];
  tree.Yabsstar[1] = std::abs(tree.Y[1]);
  for (long i = 1; i < tree.first_leaf(); ++i) {
    if (std::abs(tree.H[i]) > 1.0) {
      throw std::invalid_argument("|H| must be <= 1 at every internal node");
    }
    for (const long child : {2 * i, 2 * i + 1}) {
      tree.Y[child] = tree.Y[i] + tree.H[i] * (tree.X[child] - tree.X[i]);
      tree.Ystar[child] = std::max(tree.Ystar[i], tree.Y[child]);
      tree.Yabsstar[child] = std::max(tree.Yabsstar[i], std::abs(tree.Y[child]));
    }
  }
}

DyadicTree make_tree(const SimConfig& config, std::uint64_t tree_index) {
  DyadicTree tree;
  allocate(tree, config.depth);
  SplitMix64 rng{config.seed ^ (0xD1342543DE82EF95ULL * (tree_index + 1))};

  // X: symmetric +-delta increments, exact martingale by construction.
  tree.X[1] = rng.uniform(-1.0, 1.0);
  for (long i = 1; i < tree.first_leaf(); ++i) {
    const double delta = rng.uniform(0.25, 1.0);
    tree.X[2 * i] = tree.X[i] + delta;
    tree.X[2 * i + 1] = tree.X[i] - delta;
  }

  switch (config.weight_law) {
    case WeightLaw::kTwoPoint: {
      std::vector<char> pattern(tree.leaf_count());
      bool mixed = false;
      for (auto& b : pattern) {
        b = static_cast<char>(rng.next() & 1u);
        mixed = mixed || b != pattern[0];
      }
      if (!mixed) {
        pattern[0] = static_cast<char>(!pattern[0]);  // a constant weight pins char = 1
      }
      target_characteristic(
          tree, config.c_target,
          [&](double theta) { return two_point_leaves(pattern, theta); }, 1.0, 2.0, 1e12);
      break;
    }
    case WeightLaw::kPowerType: {
      const long leaves = tree.leaf_count();
      target_characteristic(
          tree, config.c_target, [&](double alpha) { return power_leaves(leaves, alpha); },
          0.0, 1.0, 1e6);
      break;
    }
    case WeightLaw::kUserLeaves:
      build_weight(tree, config.user_leaves);
      break;
  }

  switch (config.h_law) {
    case HLaw::kConstant: {
      if (std::abs(config.h_value) > 1.0) {
        throw std::invalid_argument("|h_value| must be <= 1");
      }
      tree.h0 = config.h_value;
      for (long i = 1; i < tree.first_leaf(); ++i) tree.H[i] = config.h_value;
      build_transform(tree);
      break;
    }
    case HLaw::kAlternating: {
      tree.h0 = 1.0;
      for (long i = 1; i < tree.first_leaf(); ++i) {
        const int level = static_cast<int>(std::floor(std::log2(static_cast<double>(i))));
        tree.H[i] = (level % 2 == 0) ? 1.0 : -1.0;
      }
      build_transform(tree);
      break;
    }
    case HLaw::kAdversarialGreedy: {
      // Sign chosen at each node to maximize the one-step-ahead E[Y^2 W]:
      // the H-dependent part of E[(Y + H dX)^2 W | node] is H Y dX (W_L - W_R).
      tree.h0 = 1.0;
      tree.Y[1] = tree.h0 * tree.X[1];
      tree.Ystar[1] = tree.Y[1];
      tree.Yabsstar[1] = std::abs(tree.Y[1]);
      for (long i = 1; i < tree.first_leaf(); ++i) {
        const double dx = tree.X[2 * i] - tree.X[i];
        const double lever = tree.Y[i] * dx * (tree.W[2 * i] - tree.W[2 * i + 1]);
        tree.H[i] = lever >= 0.0 ? 1.0 : -1.0;
        for (const long child : {2 * i, 2 * i + 1}) {
          tree.Y[child] = tree.Y[i] + tree.H[i] * (tree.X[child] - tree.X[i]);
          tree.Ystar[child] = std::max(tree.Ystar[i], tree.Y[child]);
          tree.Yabsstar[child] = std::max(tree.Yabsstar[i], std::abs(tree.Y[child]));
        }
      }
      break;
    }
  }
  return tree;
}

VerificationReport check_node_supermartingale(const DyadicTree& tree,
                                              const DomainParams& params, double tol) {
  VerificationReport rep;
  rep.check = "supermartingale";
  rep.c = params.c;
  rep.tolerance = tol;
  const double slack = 1e-12 * params.c;
  bool have_worst = false;

  for (long i = 1; i < tree.first_leaf(); ++i) {
    const long a = 2 * i, b = 2 * i + 1;
    // The child-to-child segment must stay inside 1 <= w v <= c. Its weight
    // product is quadratic in the segment parameter; check the endpoints and
    // the interior extremum.
    const double dw = tree.W[b] - tree.W[a];
    const double dv = tree.V[b] - tree.V[a];
    double qmin = std::min(tree.W[a] * tree.V[a], tree.W[b] * tree.V[b]);
    double qmax = std::max(tree.W[a] * tree.V[a], tree.W[b] * tree.V[b]);
    if (dw * dv != 0.0) {
      const double theta = -(tree.W[a] * dv + tree.V[a] * dw) / (2.0 * dw * dv);
      if (theta > 0.0 && theta < 1.0) {
        const double q = (tree.W[a] + theta * dw) * (tree.V[a] + theta * dv);
        qmin = std::min(qmin, q);
        qmax = std::max(qmax, q);
      }
    }
    ++rep.total_points;
    if (qmin < 1.0 - slack || qmax > params.c + slack) {
      ++rep.skipped;
      continue;
    }
    const BellmanPoint parent{tree.X[i], tree.Y[i], tree.W[i], tree.V[i]};
    const BellmanPoint left{tree.X[a], tree.Y[a], tree.W[a], tree.V[a]};
    const BellmanPoint right{tree.X[b], tree.Y[b], tree.W[b], tree.V[b]};
    const double drop = 0.5 * (eval_B(left, params).value + eval_B(right, params).value) -
                        eval_B(parent, params).value;
    const double viol = drop / form_tolerance_scale(parent, params);
    if (!have_worst || viol > rep.worst_violation) {
      rep.worst_violation = viol;
      rep.worst_witness = {parent, {}, drop, classify_region(parent, params)};
      have_worst = true;
    }
    if (viol > tol) {
      ++rep.violations;
    }
  }
  if (!have_worst) {
    rep.worst_violation = 0.0;
  }
  rep.pass = rep.violations == 0;
  return rep;
}

L2Ratios check_weighted_l2(const DyadicTree& tree) {
  const double char_sq = characteristic(tree) * characteristic(tree);
  const long fl = tree.first_leaf();
  double exw = 0.0, eyw = 0.0;
  for (long k = 0; k < tree.leaf_count(); ++k) {
    exw += tree.X[fl + k] * tree.X[fl + k] * tree.W[fl + k];
    eyw += tree.Y[fl + k] * tree.Y[fl + k] * tree.W[fl + k];
  }
  exw /= static_cast<double>(tree.leaf_count());
  eyw /= static_cast<double>(tree.leaf_count());

  L2Ratios out;
  if (exw == 0.0) {
    if (eyw > 0.0) {
      throw std::logic_error("E[X^2 W] = 0 with E[Y^2 W] > 0 violates subordination");
    }
    out.degenerate = true;
    return out;
  }
  out.normalized = eyw / (DomainParams::kMajorantCSquared * char_sq * exw);
  out.raw = std::sqrt(eyw / exw);
  return out;
}

MaximalRatios check_maximal(const DyadicTree& tree) {
  const double char_sq = characteristic(tree) * characteristic(tree);
  const long fl = tree.first_leaf();
  double exw = 0.0, egap = 0.0, eabs = 0.0;
  for (long k = 0; k < tree.leaf_count(); ++k) {
    const double gap = tree.Ystar[fl + k] - tree.Y[fl + k];
    exw += tree.X[fl + k] * tree.X[fl + k] * tree.W[fl + k];
    egap += gap * gap * tree.W[fl + k];
    eabs += tree.Yabsstar[fl + k] * tree.Yabsstar[fl + k] * tree.W[fl + k];
  }
  exw /= static_cast<double>(tree.leaf_count());
  egap /= static_cast<double>(tree.leaf_count());
  eabs /= static_cast<double>(tree.leaf_count());

  MaximalRatios out;
  if (exw == 0.0) {
    if (egap > 0.0 || eabs > 0.0) {
      throw std::logic_error("E[X^2 W] = 0 with a nonzero maximal norm violates subordination");
    }
    out.degenerate = true;
    return out;
  }
  const double denom = DomainParams::kMajorantCSquared * char_sq * exw;
  out.one_sided = egap / denom;
  out.two_sided = eabs / (16.0 * denom);
  return out;
}

TreeCheck check_tree(const DyadicTree& tree, double tol) {
  TreeCheck out;
  out.characteristic = characteristic(tree);
  out.l2 = check_weighted_l2(tree);
  out.maximal = check_maximal(tree);
  const DomainParams params(std::max(out.characteristic, 1.0) * (1.0 + 1e-9));
  const VerificationReport sm = check_node_supermartingale(tree, params, tol);
  out.sm_eligible = sm.total_points - sm.skipped;
  out.sm_skipped = sm.skipped;
  out.sm_violations = sm.violations;
  out.sm_worst = sm.worst_violation;
  return out;
}

EnsembleSummary run_ensemble(const SimConfig& config) {
  EnsembleSummary sum;
  sum.trees = config.num_trees;
  sum.depth = config.depth;
  sum.c_target = config.c_target;

  // Trees are independent, with per-tree seed streams; chunk results merge by
  // max/sum, so the outcome does not depend on the worker count.
  auto merge = [](EnsembleSummary& acc, const EnsembleSummary& part) {
    acc.max_characteristic = std::max(acc.max_characteristic, part.max_characteristic);
    acc.max_l2_ratio = std::max(acc.max_l2_ratio, part.max_l2_ratio);
    acc.max_raw_ratio = std::max(acc.max_raw_ratio, part.max_raw_ratio);
    acc.max_one_sided_ratio = std::max(acc.max_one_sided_ratio, part.max_one_sided_ratio);
    acc.max_two_sided_ratio = std::max(acc.max_two_sided_ratio, part.max_two_sided_ratio);
    acc.sm_eligible += part.sm_eligible;
    acc.sm_skipped += part.sm_skipped;
    acc.sm_violations += part.sm_violations;
    acc.sm_worst = std::max(acc.sm_worst, part.sm_worst);
  };
  auto scan = [&config](long lo, long hi) {
    EnsembleSummary part;
    for (long k = lo; k < hi; ++k) {
      const DyadicTree tree = make_tree(config, static_cast<std::uint64_t>(k));
      const TreeCheck tc = check_tree(tree, config.tolerance);
      part.max_characteristic = std::max(part.max_characteristic, tc.characteristic);
      part.max_l2_ratio = std::max(part.max_l2_ratio, tc.l2.normalized);
      part.max_raw_ratio = std::max(part.max_raw_ratio, tc.l2.raw);
      part.max_one_sided_ratio = std::max(part.max_one_sided_ratio, tc.maximal.one_sided);
      part.max_two_sided_ratio = std::max(part.max_two_sided_ratio, tc.maximal.two_sided);
      part.sm_eligible += tc.sm_eligible;
      part.sm_skipped += tc.sm_skipped;
      part.sm_violations += tc.sm_violations;
      part.sm_worst = std::max(part.sm_worst, tc.sm_worst);
    }
    return part;
  };

  const long n = config.num_trees;
  const int used = static_cast<int>(
      std::min<long>(resolve_workers(config.workers), std::max<long>(1, n / 8)));
  if (used <= 1) {
    merge(sum, scan(0, n));
  } else {
    std::vector<EnsembleSummary> parts(used);
    std::vector<std::thread> threads;
    threads.reserve(used);
    const long chunk = (n + used - 1) / used;
    for (int k = 0; k < used; ++k) {
      const long lo = k * chunk;
      const long hi = std::min(n, lo + chunk);
      threads.emplace_back([&parts, &scan, k, lo, hi] { parts[k] = scan(lo, hi); });
    }
    for (auto& th : threads) th.join();
    for (const auto& part : parts) merge(sum, part);
  }

  sum.pass = sum.max_l2_ratio <= 1.0 && sum.max_one_sided_ratio <= 1.0 &&
             sum.max_two_sided_ratio <= 1.0 && sum.sm_violations == 0;
  return sum;
}

std::vector<SweepRow> sweep_characteristic(const SimConfig& config,
                                           const std::vector<double>& char_grid) {
  std::vector<SweepRow> rows;
  for (const double target : char_grid) {
    SimConfig cfg = config;
    cfg.c_target = target;
    SweepRow row;
    row.target_characteristic = target;
    row.trees = config.num_trees;
    for (long k = 0; k < config.num_trees; ++k) {
      const DyadicTree tree = make_tree(cfg, static_cast<std::uint64_t>(k));
      row.max_characteristic = std::max(row.max_characteristic, characteristic(tree));
      row.best_raw_ratio = std::max(row.best_raw_ratio, check_weighted_l2(tree).raw);
    }
    rows.push_back(row);
  }
  return rows;
}

void write_tree_csv(const DyadicTree& tree, std::ostream& os, const std::string& header_comment) {
  if (!header_comment.empty()) {
    os << "# " << header_comment << "\n";
  }
  os << "# depth=" << tree.depth << " h0=" << tree.h0 << "\n";
  os << "node,X,Y,W,V,Ystar,H\n";
  os.precision(17);
  for (long i = 1; i <= tree.node_count(); ++i) {
    os << i << ',' << tree.X[i] << ',' << tree.Y[i] << ',' << tree.W[i] << ',' << tree.V[i]
       << ',' << tree.Ystar[i] << ',' << tree.H[i] << '\n';
  }
}

}  // namespace bellman
