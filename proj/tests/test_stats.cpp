#include <catch2/catch.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "circlaw/rng.hpp"
#include "circlaw/stats.hpp"
#include "circlaw/test_function.hpp"

using namespace circlaw;

TEST_CASE("linear statistic evaluates plain sums") {
  PointSample s;
  s.points = {Complex(1, 0), Complex(0, 1)};
  s.ensemble = EnsembleSpec(Family::iid_disk, 2);
  REQUIRE(linear_statistic(parse_test_function("1"), s) == Cplx(2.0));
  REQUIRE(linear_statistic(parse_test_function("z"), s) == Cplx(1.0, 1.0));
}

TEST_CASE("mc mean of the |z|^2 statistic matches the kernel trace") {
  const int n = 16;
  auto f = parse_test_function("z zbar");
  auto est = mc_mean(f, EnsembleSpec(Family::ginibre, n), 1500, 99);
  REQUIRE(std::abs(est.value.real() - (n + 1) / 2.0) < 3 * est.std_error);
  REQUIRE(std::abs(est.value.imag()) < 1e-9);
}

TEST_CASE("mc covariance of the trace statistic is one at every n") {
  auto z = parse_test_function("z");
  auto est = mc_covariance(z, z, EnsembleSpec(Family::ginibre, 16), 1200, 7);
  REQUIRE(std::abs(est.value.real() - 1.0) < 3 * est.std_error);
  REQUIRE(std::abs(est.value.imag()) < 3 * est.std_error);
}

TEST_CASE("covariance of a constant statistic vanishes exactly") {
  auto one = parse_test_function("1");
  auto est = mc_covariance(one, one, EnsembleSpec(Family::iid_disk, 8), 150, 3);
  REQUIRE(est.value == Cplx(0.0));
  REQUIRE(est.std_error == 0.0);
}

TEST_CASE("mc variance of Re z approaches one half") {
  auto f = parse_test_function("Re z");
  auto est = mc_covariance(f, f, EnsembleSpec(Family::ginibre, 24), 1500, 12);
  REQUIRE(std::abs(est.value.real() - 0.5) < 3 * est.std_error);
}

TEST_CASE("covariance estimates are conjugate symmetric on the same replicas") {
  auto f = parse_test_function("z");
  auto g = parse_test_function("z^2 + 0.3 zbar");
  EnsembleSpec ens(Family::iid_disk, 12);
  auto fg = mc_covariance(f, g, ens, 200, 77);
  auto gf = mc_covariance(g, f, ens, 200, 77);
  REQUIRE(fg.value == std::conj(gf.value));
  REQUIRE(fg.std_error == gf.std_error);
}

TEST_CASE("results are independent of the worker count") {
  auto f = parse_test_function("Re z");
  auto g = parse_test_function("z zbar");
  EnsembleSpec ens(Family::ginibre, 8);
  auto a = mc_covariance(f, g, ens, 300, 5, 1);
  auto b = mc_covariance(f, g, ens, 300, 5, 3);
  REQUIRE(a.value == b.value);
  REQUIRE(a.std_error == b.std_error);
}

TEST_CASE("k-statistics reproduce gaussian cumulants on synthetic data") {
  Rng rng(2024);
  const int n = 30000;
  const double mu = 0.7, sigma = 1.3;
  std::vector<double> x(n);
  for (auto& v : x) v = mu + sigma * rng.gaussian();
  auto ks = kstatistics_from_values(x, 4);
  REQUIRE(std::abs(ks[0].value.real() - mu) < 3 * ks[0].std_error);
  REQUIRE(std::abs(ks[1].value.real() - sigma * sigma) < 3 * ks[1].std_error);
  REQUIRE(std::abs(ks[2].value.real()) < 3 * ks[2].std_error);
  REQUIRE(std::abs(ks[3].value.real()) < 3 * ks[3].std_error);
}

TEST_CASE("degenerate constant data has exactly zero higher k-statistics") {
  std::vector<double> x(16, 1.5);  // representable, short mantissa
  auto ks = kstatistics_from_values(x, 4);
  REQUIRE(ks[0].value.real() == 1.5);
  REQUIRE(ks[1].value.real() == 0.0);
  REQUIRE(ks[2].value.real() == 0.0);
  REQUIRE(ks[3].value.real() == 0.0);
}

TEST_CASE("reported standard error shrinks like one over sqrt(replicas)") {
  Rng rng(5);
  std::vector<double> big(40000);
  for (auto& v : big) v = rng.gaussian();
  std::vector<Cplx> half(big.begin(), big.begin() + 20000);
  std::vector<Cplx> full(big.begin(), big.end());
  auto a = covariance_from_values(half, half);
  auto b = covariance_from_values(full, full);
  double ratio = a.std_error / b.std_error;
  REQUIRE(ratio > std::sqrt(2.0) * 0.9);
  REQUIRE(ratio < std::sqrt(2.0) * 1.1);
}

TEST_CASE("estimator preconditions are enforced") {
  auto f = parse_test_function("Re z");
  auto cplx_f = parse_test_function("z");
  EnsembleSpec ens(Family::iid_disk, 4);
  REQUIRE_THROWS_AS(mc_covariance(f, f, ens, 50, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(mc_kstatistics(cplx_f, ens, 400, 1, 4), std::invalid_argument);
  REQUIRE_THROWS_AS(mc_kstatistics(f, ens, 5, 1, 4), std::invalid_argument);
}

TEST_CASE("blackbox domain violations surface as replica failures") {
  // domain radius below the iid support: every replica throws domain_error,
  // which is not a tolerated sampler failure
  auto tiny = TestFunction::blackbox([](Cplx z) { return z; }, {}, {}, false, 0.05);
  REQUIRE_THROWS_AS(mc_covariance(tiny, tiny, EnsembleSpec(Family::iid_disk, 6), 120, 2),
                    std::runtime_error);
}

TEST_CASE("two-sample KS separates equal and shifted laws") {
  Rng rng(9);
  std::vector<double> a(4000), b(4000), c(4000);
  for (auto& v : a) v = rng.gaussian();
  for (auto& v : b) v = rng.gaussian();
  for (auto& v : c) v = rng.gaussian() + 0.25;
  REQUIRE(ks_two_sample_pvalue(a, b) > 0.01);
  REQUIRE(ks_two_sample_pvalue(a, c) < 0.01);
}
