#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <bellman/bellman.hpp>
#include <bellman/verifier.hpp>

namespace bellman {

/// Finite dyadic martingale model on a binary tree of the given depth.
/// Nodes are heap-indexed from 1 (children of i are 2i and 2i+1); each split
/// has probability 1/2 per child, so every level-k node has mass 2^-k.
///
/// X, W, V are martingales (parent = mean of children). V is the conjugate
/// weight E(W_leaf^-1 | node), built bottom-up from the leaf weights, so
/// W*V = 1 holds at every leaf and max_node W*V is the A2 characteristic.
/// Y is the martingale transform of X: Y_root = h0 * X_root and
/// dY = H * dX edgewise, with the multiplier H chosen at the parent
/// (predictable) and |H| <= 1. Ystar/Yabsstar are the running one-sided and
/// two-sided maxima of Y along root-to-node paths.
struct DyadicTree {
  int depth = 0;
  double h0 = 1.0;
  std::vector<double> X, Y, W, V, Ystar, Yabsstar;
  std::vector<double> H;  // split multiplier at internal nodes; 0 at leaves

  long node_count() const noexcept { return (1L << (depth + 1)) - 1; }
  long first_leaf() const noexcept { return 1L << depth; }
  long leaf_count() const noexcept { return 1L << depth; }
  bool is_leaf(long i) const noexcept { return i >= first_leaf(); }

  static constexpr int kMaxDepth = 20;  // exact enumeration cap: 2^20 leaves
};

enum class WeightLaw { kTwoPoint, kPowerType, kUserLeaves };
enum class HLaw { kConstant, kAlternating, kAdversarialGreedy };

const char* to_string(WeightLaw law) noexcept;
const char* to_string(HLaw law) noexcept;
WeightLaw weight_law_from_string(const std::string& s);
HLaw h_law_from_string(const std::string& s);

struct SimConfig {
  int depth = 8;
  std::uint64_t seed = 1;
  double c_target = 4.0;
  WeightLaw weight_law = WeightLaw::kTwoPoint;
  std::vector<double> user_leaves;  // for WeightLaw::kUserLeaves
  HLaw h_law = HLaw::kConstant;
  double h_value = 1.0;  // multiplier for HLaw::kConstant, |h| <= 1
  long num_trees = 100;
  double tolerance = 1e-9;
  int workers = 0;  // 0: $BELLMAN_VERIFY_WORKERS or hardware
};

/// Fills W and V from the leaf weights (size 2^depth, all positive) and
/// returns the characteristic max_node W*V.
double build_weight(DyadicTree& tree, const std::vector<double>& leaf_weights);

/// Fills Y, Ystar, Yabsstar from X and the multipliers H/h0 already present.
/// Throws if any |H| > 1 or |h0| > 1.
void build_transform(DyadicTree& tree);

double characteristic(const DyadicTree& tree);

/// Deterministic tree generation; tree_index selects an independent stream
/// from the master seed. Leaf weights are rescaled within their family by
/// bisection until the characteristic lands within 1% of c_target (or the
/// family is exhausted).
DyadicTree make_tree(const SimConfig& config, std::uint64_t tree_index);

/// Discrete supermartingale property of B: at every internal node,
/// B(parent) >= mean of B(children), provided the child-to-child segment
/// stays inside the weight domain of the chosen parameters. Nodes whose
/// segment exits the domain are skipped and counted, not judged.
VerificationReport check_node_supermartingale(const DyadicTree& tree,
                                              const DomainParams& params, double tol = 1e-9);

struct L2Ratios {
  double normalized = 0.0;  // E[Y^2 W] / (C^2 char^2 E[X^2 W]), must be <= 1
  double raw = 0.0;         // sqrt(E[Y^2 W] / E[X^2 W])
  bool degenerate = false;  // E[X^2 W] = 0 (then both sides vanish)
};

struct MaximalRatios {
  double one_sided = 0.0;  // E[(Y*-Y)^2 W] / (C^2 char^2 E[X^2 W])
  double two_sided = 0.0;  // E[(|Y|*)^2 W]  / (16 C^2 char^2 E[X^2 W])
  bool degenerate = false;
};

/// Exact leaf-level expectations. Throws std::logic_error in the impossible
/// configuration E[X^2 W] = 0 with E[Y^2 W] > 0 (violates subordination).
L2Ratios check_weighted_l2(const DyadicTree& tree);
MaximalRatios check_maximal(const DyadicTree& tree);

struct TreeCheck {
  double characteristic = 1.0;
  L2Ratios l2;
  MaximalRatios maximal;
  long sm_eligible = 0;
  long sm_skipped = 0;
  long sm_violations = 0;
  double sm_worst = 0.0;  // scale-normalized
};

TreeCheck check_tree(const DyadicTree& tree, double tol = 1e-9);

struct EnsembleSummary {
  long trees = 0;
  int depth = 0;
  double c_target = 0.0;
  double max_characteristic = 0.0;
  double max_l2_ratio = 0.0;
  double max_one_sided_ratio = 0.0;
  double max_two_sided_ratio = 0.0;
  double max_raw_ratio = 0.0;
  long sm_eligible = 0;
  long sm_skipped = 0;
  long sm_violations = 0;
  double sm_worst = 0.0;
  bool pass = false;  // all ratios <= 1 and no supermartingale violations
};

EnsembleSummary run_ensemble(const SimConfig& config);

struct SweepRow {
  double target_characteristic = 0.0;
  double max_characteristic = 0.0;
  double best_raw_ratio = 0.0;
  long trees = 0;
};

/// Observed norm-ratio growth against the characteristic; reporting only, no
/// assertion on the slope.
std::vector<SweepRow> sweep_characteristic(const SimConfig& config,
                                           const std::vector<double>& char_grid);

/// Flat binary-heap CSV: node,X,Y,W,V,Ystar,H (leaves carry H = 0).
void write_tree_csv(const DyadicTree& tree, std::ostream& os,
                    const std::string& header_comment = {});

}  // namespace bellman
