#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

#include <bellman/verifier.hpp>

using namespace bellman;

namespace {

GridSpec small_grid(std::vector<double> cs, int n = 9) {
  GridSpec g;
  g.c_values = std::move(cs);
  g.points_per_axis = n;
  return g;
}

bool all_pass(const std::vector<VerificationReport>& reports) {
  for (const auto& r : reports) {
    if (!r.pass) {
      MESSAGE("failed: ", r.check, " c=", r.c, " worst=", r.worst_violation,
              " tol=", r.tolerance, " note=", r.note);
      return false;
    }
  }
  return true;
}

double form_of(const SymMat& m, const Eigen::Vector3d& u) {
  return u.dot(m.dense() * u);
}

}  // namespace

TEST_CASE("matrix A: entries, forms, degenerate slice") {
  const DomainParams c2(2.0);
  const SymMat A = build_matrix_A(1.0, 1.0, 1.0, c2);
  CHECK(A(0, 0) == doctest::Approx(2.0 - 160.0).epsilon(1e-15));
  CHECK(A(0, 1) == doctest::Approx(3.5).epsilon(1e-15));  // 2 phi(1) + 2 phi'(1) * 2... = 2 + 1.5
  CHECK(A(0, 2) == doctest::Approx(1.5).epsilon(1e-15));

  // <A (e,r,s), (e,r,s)> = xi''_{b1} - 80 c w e^2
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<> U(-1.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double y = 2.0 * U(rng), w = 1.0 + 0.5 * U(rng);
    const double t = 1.5 + 0.4 * U(rng);
    const BellmanPoint p{0.3, y, w, t / w};
    const SymMat m = build_matrix_A(y, w, p.v, c2);
    const Eigen::Vector3d u(U(rng), U(rng), U(rng));
    const BTerm b1 = eval_b_term(1, p, c2);
    const Eigen::Vector4d dir(0.0, u(0), u(1), u(2));
    const double want = dir.dot(b1.hess * dir) - 80.0 * c2.c * w * u(0) * u(0);
    CHECK(std::abs(form_of(m, u) - want) <= 1e-9 * std::max(1.0, std::abs(want)));
  }

  // y = 0 leaves only the (0,0) entry; NSD by eigenvalue fallback.
  const SymMat A0 = build_matrix_A(0.0, 1.0, 1.2, c2);
  CHECK(A0(0, 0) < 0.0);
  CHECK(A0(1, 1) == 0.0);
  CHECK(A0(2, 2) == 0.0);
  const auto rep = check_semidefinite(A0, Definiteness::kNegativeSemi, 1e-12);
  CHECK(rep.pass());
  CHECK(rep.used_eig_fallback);
}

TEST_CASE("matrix B: cross-term reconstruction of xi''_b1") {
  const DomainParams c2(2.0);
  const SymMat B = build_matrix_B(1.0, 1.0, 1.0, c2);
  CHECK(B(0, 0) == doctest::Approx(2.0 * 1.0 - 4.0).epsilon(1e-15));  // 2 w phi(1) - 4 w
  CHECK(B(0, 1) == 0.0);

  std::mt19937_64 rng(43);
  std::uniform_real_distribution<> U(-1.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double y = 2.0 * U(rng), w = 1.0 + 0.5 * U(rng);
    const double t = 1.5 + 0.45 * U(rng);
    const BellmanPoint p{0.0, y, w, t / w};
    const KernelValue kv = eval_psi_family(p.t(), c2);
    const SymMat m = build_matrix_B(y, w, p.v, c2);
    const Eigen::Vector3d u(U(rng), U(rng), U(rng));
    const BTerm b1 = eval_b_term(1, p, c2);
    const Eigen::Vector4d dir(0.0, u(0), u(1), u(2));
    const double form_b1 = dir.dot(b1.hess * dir);
    const double reconstructed = form_of(m, u) + 4.0 * w * u(0) * u(0) +
                                 2.0 * (2.0 * y * kv.phi + 2.0 * y * kv.t * kv.phi_d1) *
                                     u(0) * u(1);
    CHECK(std::abs(form_b1 - reconstructed) <= 1e-9 * std::max(1.0, std::abs(form_b1)));
  }
}

TEST_CASE("matrix C: psihat form, x = 0 slice, shift identity") {
  const DomainParams c2(2.0);

  // At x = 0 only the (0,0) entry survives: 2 c^2 psihat / v > 0.
  const SymMat C0 = build_matrix_C(0.0, 1.0, 1.3, c2);
  CHECK(C0(0, 0) > 0.0);
  CHECK(C0(1, 1) == 0.0);
  CHECK(C0(2, 2) == 0.0);
  CHECK(C0(0, 1) == 0.0);
  CHECK(check_semidefinite(C0, Definiteness::kPositiveSemi, 1e-12).pass());

  // <C (d,r,s), (d,r,s)> = xi''_{b6}((d,*,r,s)) - (1/16) c v^-3 x^2 s^2
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<> U(-1.0, 1.0);
  for (int k = 0; k < 1000; ++k) {
    const double x = 2.0 * U(rng), w = 1.0 + 0.5 * U(rng);
    const double t = 1.5 + 0.45 * U(rng);
    const BellmanPoint p{x, 0.0, w, t / w};
    const SymMat m = build_matrix_C(x, w, p.v, c2);
    const Eigen::Vector3d u(U(rng), U(rng), U(rng));
    const BTerm b6 = eval_b_term(6, p, c2);
    const Eigen::Vector4d dir(u(0), 0.77, u(1), u(2));  // e-slot is inert for b6
    const double want = dir.dot(b6.hess * dir) -
                        (1.0 / 16.0) * c2.c * x * x / (p.v * p.v * p.v) * u(2) * u(2);
    CHECK(std::abs(form_of(m, u) - want) <= 1e-9 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("constrained_max_form basics") {
  const DomainParams c2(2.0);
  const BellmanPoint p{1.0, 5.0, 1.0, 1.0};  // D3
  const auto [val, dir] = constrained_max_form(p, c2, 41);
  CHECK(val <= 0.0);
  CHECK(dir.subordinate(1e-12));

  // Sampling-resolution stability: doubling the lambda count barely moves it.
  const auto [val2, dir2] = constrained_max_form(p, c2, 82);
  const double scale = form_tolerance_scale(p, c2);
  CHECK(std::abs(val - val2) <= 1e-9 * scale);

  // Thin weighted domain, near-unweighted slice.
  const DomainParams c101(1.01);
  const auto r3 = constrained_max_form({0.0, 1.0, 1.0, 1.0}, c101, 41);
  CHECK(r3.first <= 0.0);
}

TEST_CASE("pinned direction slices") {
  const DomainParams c2(2.0);

  // xi''_{b1} along pure e at (y=1, w=1, v=1) is 2 phi(1) = 2 <= 4 w.
  const BTerm b1 = eval_b_term(1, {0.0, 1.0, 1.0, 1.0}, c2);
  CHECK(b1.hess(1, 1) == 2.0);

  // b1 - b2 - 160 b3 along (d=1, e=1): 2 phi(1) - 1 - 320 c^2 = -1279.
  const std::pair<int, double> combo[] = {{1, 1.0}, {2, -1.0}, {3, -160.0}};
  const BTerm term = eval_combo(combo, {0.0, 1.0, 1.0, 1.0}, c2);
  const Eigen::Vector4d dir(1.0, 1.0, 0.0, 0.0);
  CHECK(dir.dot(term.hess * dir) == doctest::Approx(-1279.0).epsilon(1e-14));

  // Pure-s slice of the same combo at x = 0 is phi''(1) - 1 < 0.
  const Eigen::Vector4d s_dir(0.0, 0.0, 0.0, 1.0);
  CHECK(s_dir.dot(term.hess * s_dir) == doctest::Approx(-2.75).epsilon(1e-14));

  // Majorization is tight on the y-axis at t = 1.
  CHECK(majorization_gap({0.0, 1.0, 1.0, 1.0}, c2) == 0.0);
}

TEST_CASE("lemma33 grid verification") {
  const GridSpec g = small_grid({1.5, 2.0, 10.0});
  CHECK(all_pass(verify_lemma33('a', g)));
  CHECK(all_pass(verify_lemma33('b', g)));
  CHECK(all_pass(verify_lemma33('c', g)));
  CHECK_THROWS_AS(verify_lemma33('d', g), std::invalid_argument);
}

TEST_CASE("domain lemma verification") {
  const GridSpec g = small_grid({1.5, 2.0, 10.0});
  CHECK(all_pass(verify_domain1(g)));
  CHECK(all_pass(verify_domain2(g)));
  CHECK(all_pass(verify_domain3(g)));
}

TEST_CASE("exact certificates") {
  for (const auto& cert : domain2_exact_certificates()) {
    CHECK(cert.negative_semidefinite);
    CHECK(cert.leading_minors.size() == 3);
  }
  for (const auto& cert : domain3_exact_certificates()) {
    CHECK(cert.negative_semidefinite);
  }
}

TEST_CASE("global checks") {
  const GridSpec g = small_grid({1.5, 2.0, 100.0}, 11);
  CHECK(all_pass(verify_global(GlobalCheck::kInitial, g)));
  CHECK(all_pass(verify_global(GlobalCheck::kMajorization, g)));
  CHECK(all_pass(verify_global(GlobalCheck::kOrdering, g)));
  CHECK(all_pass(verify_global(GlobalCheck::kContinuity, g)));
  CHECK(all_pass(verify_global(GlobalCheck::kNeumann, g)));
}

TEST_CASE("concavity of B on all regions") {
  const GridSpec g = small_grid({1.5, 4.0}, 7);
  CHECK(all_pass(verify_concavity(g)));
}

TEST_CASE("linear-scale grids") {
  GridSpec g = small_grid({2.0}, 9);
  g.log_scale = false;
  CHECK(all_pass(verify_global(GlobalCheck::kMajorization, g)));
  CHECK(all_pass(verify_lemma33('a', g)));
}

TEST_CASE("suite dispatch") {
  CHECK(is_known_suite("initial"));
  CHECK(is_known_suite("all"));
  CHECK_FALSE(is_known_suite("bogus"));
  const GridSpec g = small_grid({2.0}, 5);
  CHECK_THROWS_AS(run_suite("bogus", g), std::invalid_argument);
  CHECK(all_pass(run_suite("neumann", g)));
  CHECK_THROWS_AS(point_checks_for_suite("bogus", g), std::invalid_argument);
  CHECK_FALSE(point_checks_for_suite("concavity", g).empty());
}

TEST_CASE("scan results do not depend on the worker count") {
  GridSpec g = small_grid({2.0}, 13);
  const auto checks = point_checks_for_suite("majorization", g);
  REQUIRE(checks.size() == 1);
  const VerificationReport r1 = run_point_check(checks[0], 1);
  const VerificationReport r4 = run_point_check(checks[0], 4);
  const VerificationReport r7 = run_point_check(checks[0], 7);
  CHECK(r1.worst_violation == r4.worst_violation);
  CHECK(r1.worst_violation == r7.worst_violation);
  CHECK(r1.worst_witness.point.x == r4.worst_witness.point.x);
  CHECK(r1.worst_witness.point.v == r7.worst_witness.point.v);
  CHECK(r1.violations == r4.violations);
}

TEST_CASE("workers resolution") {
  CHECK(resolve_workers(3) == 3);
  CHECK(resolve_workers(0) >= 1);
  setenv("BELLMAN_VERIFY_WORKERS", "2", 1);
  CHECK(resolve_workers(0) == 2);
  unsetenv("BELLMAN_VERIFY_WORKERS");
}
