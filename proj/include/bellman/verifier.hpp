#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <bellman/bellman.hpp>
#include <bellman/matrices.hpp>

namespace bellman {

/// Grid geometry for the verification scans. Region grids use three axes:
/// an angular coordinate inside the region (linear), t = w*v in [1, c]
/// (logarithmic) and w in [w_min, w_max] (logarithmic); v = t/w. Radial
/// directions are redundant by homogeneity, so |(x, y)| is kept near 1 and
/// signs are cycled deterministically with the point index.
struct GridSpec {
  std::vector<double> c_values{1.5, 2.0, 4.0, 10.0};
  int points_per_axis = 21;
  long target_points = 0;  // when > 0, per-axis counts are derived from this
  double w_min = 0.5;
  double w_max = 2.0;
  bool log_scale = true;
  double angle_margin = 1e-2;  // keeps angular samples strictly inside a region
  int lambda_samples = 41;
  int workers = 0;  // 0: $BELLMAN_VERIFY_WORKERS, else hardware concurrency
};

struct Witness {
  BellmanPoint point{};
  Direction dir{};
  double raw_value = 0.0;
  Region region = Region::Origin;
};

struct VerificationReport {
  std::string check;
  double c = 0.0;  // 0 for parameter-free checks (exact certificates)
  long total_points = 0;
  long skipped = 0;
  long violations = 0;  // points with violation > tolerance
  bool pass = false;
  double worst_violation = 0.0;  // scale-normalized; pass iff <= tolerance
  Witness worst_witness{};
  double tolerance = 0.0;
  double wall_ms = 0.0;  // console diagnostics only, not serialized
  std::string note;
};

/// A pointwise check over an indexed grid: eval returns the scale-normalized
/// violation for one point (NaN to skip) and fills the witness.
struct PointCheck {
  std::string name;
  double c = 0.0;
  long total = 0;
  double tolerance = 1e-9;
  std::function<double(long, Witness&)> eval;
};

/// Tolerance scales. Values are compared against (1 + x^2 + y^2) w; Hessian
/// forms additionally carry max(1, c^2/v) since the form coefficients reach
/// 3.2e5 * c^2 / v.
double value_tolerance_scale(const BellmanPoint& p);
double form_tolerance_scale(const BellmanPoint& p, const DomainParams& params);

/// Matrices of the quadratic-form lemmas, in the direction variables
/// (e, r, s) for A and B (blocks in y, w, v) and (d, r, s) for C (x, w, v):
///   A = Hess b1 - 80 c w E11
///   B = Hess b1 with (1,1) -> 2 w phi - 4 w and (1,2) -> 0
///   C = Hess b6 - (1/16) c v^-3 x^2 E33   (psihat form)
/// A and B are negative semidefinite, C is positive semidefinite.
SymMat build_matrix_A(double y, double w, double v, const DomainParams& params);
SymMat build_matrix_B(double y, double w, double v, const DomainParams& params);
SymMat build_matrix_C(double x, double w, double v, const DomainParams& params);

/// Maximum of <H u, u> over unit directions u = (d, e, r, s) with e = lambda d,
/// lambda sampled uniformly in [-1, 1] (endpoints included, count made odd so
/// 0 is sampled). Returns the maximizing direction, which satisfies
/// |e| <= |d| by construction.
std::pair<double, Direction> constrained_max_of(const Eigen::Matrix4d& hess,
                                                int lambda_samples);

/// Same, for the Hessian of the piece of B in force at p.
std::pair<double, Direction> constrained_max_form(const BellmanPoint& p,
                                                  const DomainParams& params,
                                                  int lambda_samples);

std::vector<VerificationReport> verify_lemma33(char part, const GridSpec& grid,
                                               double tol = 1e-9);
std::vector<VerificationReport> verify_domain1(const GridSpec& grid, double tol = 1e-9);
std::vector<VerificationReport> verify_domain2(const GridSpec& grid, double tol = 1e-9,
                                               bool exact_rational = true);
std::vector<VerificationReport> verify_domain3(const GridSpec& grid, double tol = 1e-9,
                                               bool exact_rational = true);

/// Constrained concavity of B itself (one report per region per c).
std::vector<VerificationReport> verify_concavity(const GridSpec& grid, double tol = 1e-9);

enum class GlobalCheck { kInitial, kMajorization, kOrdering, kContinuity, kNeumann };

/// Default tolerance: 1e-10 for initial/majorization, 1e-9 otherwise.
std::vector<VerificationReport> verify_global(GlobalCheck check, const GridSpec& grid,
                                              std::optional<double> tol = std::nullopt);

std::vector<ExactCertificate> domain2_exact_certificates();
std::vector<ExactCertificate> domain3_exact_certificates();

/// Suite names: initial, majorization, ordering, continuity, neumann,
/// lemma33a, lemma33b, lemma33c, domain1, domain2, domain3, concavity, all.
/// Throws std::invalid_argument for unknown names.
std::vector<VerificationReport> run_suite(std::string_view suite, const GridSpec& grid,
                                          std::optional<double> tol = std::nullopt,
                                          bool exact_rational = false);
bool is_known_suite(std::string_view suite);
std::vector<std::string> known_suites();

/// The pointwise parts of a suite, for per-point CSV dumps.
std::vector<PointCheck> point_checks_for_suite(std::string_view suite, const GridSpec& grid);

VerificationReport run_point_check(const PointCheck& check, int workers);

int resolve_workers(int requested);

}  // namespace bellman
