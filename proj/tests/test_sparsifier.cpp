#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sparsekit/error.hpp"
#include "sparsekit/graphs.hpp"
#include "sparsekit/potential.hpp"
#include "sparsekit/sparsifier.hpp"
#include "sparsekit/vectorset.hpp"
#include "support.hpp"

using namespace sparsekit;

namespace {

RunOptions options(double eps, std::uint64_t seed, Mode mode = Mode::kExact) {
  RunOptions opt;
  opt.q = 10;
  opt.eps = eps;
  opt.seed = seed;
  opt.mode = mode;
  return opt;
}

bool same_result(const SparsifierResult& a, const SparsifierResult& b) {
  if (a.scalars != b.scalars || a.iterations != b.iterations ||
      a.total_samples != b.total_samples || a.final_u != b.final_u ||
      a.final_ell != b.final_ell || a.log.size() != b.log.size()) {
    return false;
  }
  for (std::size_t j = 0; j < a.log.size(); ++j) {
    const auto& x = a.log[j];
    const auto& y = b.log[j];
    if (x.N != y.N || x.draws != y.draws || x.u != y.u || x.ell != y.ell) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("names round-trip") {
  CHECK(parse_algorithm("almost-linear") == Algorithm::kAlmostLinear);
  CHECK(parse_algorithm("rbss") == Algorithm::kRandomizedBss);
  CHECK(parse_mode(to_string(Mode::kFast)) == Mode::kFast);
  CHECK_THROWS_AS(parse_mode("slow"), Error);
}

TEST_CASE("bounds") {
  CHECK(iteration_bound(100, 10, 0.1) == doctest::Approx(10 * 10 * std::pow(100.0, 0.3) / 0.01));
  CHECK(sample_bound(100, 10, 0.1) == doctest::Approx(10 * 10 * 100 / 0.01));
}

TEST_CASE("exact runs are bit-identical for equal seeds and differ across seeds") {
  const auto vs = from_graph(complete_graph(10));
  const auto a = run_almost_linear(vs, options(0.1, 3));
  const auto b = run_almost_linear(vs, options(0.1, 3));
  const auto c = run_almost_linear(vs, options(0.1, 4));
  CHECK(same_result(a, b));
  CHECK_FALSE(same_result(a, c));
}

TEST_CASE("fast runs are bit-identical for equal seeds") {
  const auto vs = from_graph(grid_graph(3, 3));
  const auto a = run_almost_linear(vs, options(0.1, 5, Mode::kFast));
  const auto b = run_almost_linear(vs, options(0.1, 5, Mode::kFast));
  CHECK(same_result(a, b));
  CHECK(a.taylor_degree >= 1);
  CHECK(a.eta > 0.0);
}

TEST_CASE("fast mode needs graph provenance") {
  const auto vs = make_vector_set({Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)});
  try {
    run_almost_linear(vs, options(0.1, 0, Mode::kFast));
    FAIL("expected Error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingProvenance);
  }
}

TEST_CASE("invalid parameters are rejected before sampling") {
  const auto vs = from_graph(complete_graph(5));
  RunOptions opt = options(0.1, 0);
  opt.q = 8;
  CHECK_THROWS_AS(run_almost_linear(vs, opt), Error);
  CHECK_THROWS_AS(run_almost_linear(vs, options(0.2, 0)), Error);
  const VectorSet bad(Eigen::MatrixXd::Identity(3, 3) * 2.0);
  CHECK_THROWS_AS(run_almost_linear(bad, options(0.1, 0)), Error);
}

TEST_CASE("property: barriers and A grow monotonically, every draw is admissible") {
  testing::Rng rng(81);
  for (int trial = 0; trial < 3; ++trial) {
    const auto g = testing::random_connected_graph(rng, testing::uniform_int(rng, 5, 12), 0.4);
    const auto vs = from_graph(g);
    RunOptions opt = options(0.1, static_cast<std::uint64_t>(trial));
    AlmostLinearSampler s(vs, opt);
    const Eigen::MatrixXd& V = s.reduced_vectors();
    const int n = static_cast<int>(V.rows());
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    const double bound = opt.eps / opt.q;
    int steps = 0;
    while (!s.done()) {
      const BarrierState before = s.state();
      const std::vector<double> s_before = s.scalars();
      const Eigen::MatrixXd up = testing::oracle_inverse(before.u * I - before.A);
      const Eigen::MatrixXd lo = testing::oracle_inverse(before.A - before.ell * I);
      s.step();
      CHECK(s.u() > before.u);
      CHECK(s.ell() > before.ell);
      CHECK(s.u() - s.ell() > before.u - before.ell);
      const Eigen::VectorXd lam = testing::oracle_eigenvalues(s.state().A - before.A);
      CHECK(lam.minCoeff() >= -1e-12);
      if (steps++ % 10 != 0) continue;
      for (std::size_t i = 0; i < s_before.size(); ++i) {
        const double inc = s.scalars()[i] - s_before[i];
        if (inc == 0.0) continue;
        const Eigen::VectorXd v = V.col(static_cast<Eigen::Index>(i));
        const double ru = v.dot(up * v);
        const double rl = v.dot(lo * v);
        const double per_draw = bound / (ru + rl);
        const double draws = inc / per_draw;
        CHECK(std::abs(draws - std::round(draws)) <= 1e-6 * draws);
        CHECK(per_draw * ru <= bound * (1 + 1e-9));
        CHECK(per_draw * rl <= bound * (1 + 1e-9));
      }
    }
  }
}

TEST_CASE("runs end past the gap target and record it") {
  const auto vs = from_graph(complete_graph(12));
  const auto r = run_almost_linear(vs, options(0.1, 9));
  const double u0 = initial_barrier(11, 10);
  CHECK_FALSE(r.aborted);
  CHECK(r.initial_u == doctest::Approx(u0));
  CHECK(r.final_u - r.final_ell >= 4.0 * u0);
  CHECK(r.rescale == doctest::Approx(2.0 / (r.final_u + r.final_ell)));
  CHECK(r.log.size() == static_cast<std::size_t>(r.iterations));
  std::int64_t draws = 0;
  for (const auto& rec : r.log) {
    CHECK(rec.draws == std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(rec.N))));
    draws += rec.draws;
  }
  CHECK(draws == r.total_samples);
  // the exact-mode potential never rises above its start by more than noise
  CHECK(r.log.front().phi_before == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spectral guarantee and bounds over seeds on a small complete graph") {
  const auto g = complete_graph(12);
  const auto vs = from_graph(g);
  const double eps = 0.1;
  int gap_ok = 0;
  int spec_ok = 0;
  int bounds_ok = 0;
  std::int64_t checked = 0;
  std::int64_t failed = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto r = run_almost_linear(vs, options(eps, seed));
    gap_ok += (r.final_u - r.final_ell) / r.final_u <= 8 * eps ? 1 : 0;
    const auto rep = verify_sparsifier(g, extract_sparsifier(g, r), 0, seed);
    spec_ok += rep.epsilon_achieved <= 6 * eps ? 1 : 0;
    CHECK(rep.lambda_lo > 0.0);
    bounds_ok += (r.total_samples <= sample_bound(11, 10, eps) &&
                  r.iterations <= iteration_bound(11, 10, eps))
                     ? 1
                     : 0;
    checked += r.half_barrier_checked;
    failed += r.half_barrier_failures;
  }
  CHECK(gap_ok >= 8);
  CHECK(spec_ok >= 8);
  CHECK(bounds_ok >= 8);
  CHECK(checked > 0);
  CHECK(failed <= checked / 10);
}

TEST_CASE("weighted spectrum matches the dense relative spectrum") {
  const auto g = grid_graph(3, 4);
  const auto vs = from_graph(g);
  const auto r = run_almost_linear(vs, options(0.1, 2));
  const Eigen::VectorXd lam = weighted_spectrum(vs, r.rescaled_scalars());
  const auto h = extract_sparsifier(g, r);
  const Eigen::VectorXd oracle =
      testing::oracle_relative_spectrum(testing::oracle_laplacian(g), testing::oracle_laplacian(h));
  CHECK(lam.minCoeff() == doctest::Approx(oracle.minCoeff()).epsilon(1e-9));
  CHECK(lam.maxCoeff() == doctest::Approx(oracle.maxCoeff()).epsilon(1e-9));
}

TEST_CASE("iteration caps abort instead of looping") {
  const auto vs = from_graph(complete_graph(10));
  RunOptions opt = options(0.1, 1);
  opt.caps.max_iterations = 5;
  const auto r = run_almost_linear(vs, opt);
  CHECK(r.aborted);
  CHECK(r.iterations == 5);
  CHECK_FALSE(r.abort_reason.empty());
  opt.caps.max_iterations = 0;
  opt.caps.max_samples = 30;
  const auto s = run_almost_linear(vs, opt);
  CHECK(s.aborted);
  CHECK(s.total_samples > 30);
}

TEST_CASE("stepping a finished run is an error") {
  const auto vs = from_graph(complete_graph(4));
  AlmostLinearSampler s(vs, options(0.1, 0));
  s.run();
  CHECK_THROWS_AS(s.step(), Error);
}

TEST_CASE("strict resampling keeps every accepted batch inside the half barrier") {
  const auto vs = from_graph(complete_graph(8));
  RunOptions opt = options(0.1, 6);
  opt.strict_resample = true;
  const auto r = run_almost_linear(vs, opt);
  for (const auto& rec : r.log) CHECK(rec.half_barrier == 1);
}

TEST_CASE("randomized BSS: first step from A = 0") {
  for (double eps : {0.05, 0.1}) {
    const auto vs = from_graph(complete_graph(9));
    const auto r = run_randomized_bss(vs, eps, 1);
    REQUIRE(!r.log.empty());
    const double gap0 = r.initial_u - r.initial_ell;
    const double gap1 = r.log.front().u - r.log.front().ell;
    CHECK(gap1 - gap0 == doctest::Approx(8 * eps / (1 - eps * eps)).epsilon(1e-12));
  }
  const auto vs = from_graph(complete_graph(9));
  const auto r = run_randomized_bss(vs, 0.1, 1);
  CHECK(r.log.front().u - r.log.front().ell - (r.initial_u - r.initial_ell) ==
        doctest::Approx(0.80808080808080808).epsilon(1e-12));
}

TEST_CASE("randomized BSS on K20: samples and condition number") {
  const auto g = complete_graph(20);
  const auto vs = from_graph(g);
  const double eps = 0.05;
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto r = run_randomized_bss(vs, eps, seed);
    CHECK_FALSE(r.aborted);
    CHECK(r.final_u - r.final_ell >= 2.0 * (r.initial_u - r.initial_ell));
    CHECK(r.q == 1);
    const Eigen::VectorXd lam = weighted_spectrum(vs, r.rescaled_scalars());
    const double kappa = lam.maxCoeff() / lam.minCoeff();
    ok += (r.total_samples <= 40.0 * 19 / (eps * eps) && kappa <= (1 + 10 * eps) / (1 - 10 * eps)) ? 1 : 0;
  }
  CHECK(ok >= 4);
}

TEST_CASE("randomized BSS is deterministic and rejects bad inputs") {
  const auto vs = from_graph(complete_graph(6));
  CHECK(same_result(run_randomized_bss(vs, 0.1, 2), run_randomized_bss(vs, 0.1, 2)));
  CHECK_THROWS_AS(run_randomized_bss(vs, 0.0, 2), Error);
  Limits caps;
  caps.max_samples = 3;
  const auto r = run_randomized_bss(vs, 0.1, 2, caps);
  CHECK(r.aborted);
  CHECK(r.total_samples == 3);
}
