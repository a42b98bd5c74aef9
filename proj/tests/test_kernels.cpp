#include <catch2/catch.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "circlaw/kernels.hpp"
#include "circlaw/matrix.hpp"
#include "circlaw/numeric.hpp"
#include "circlaw/quadrature.hpp"

using namespace circlaw;

TEST_CASE("radial moments: closed forms") {
  REQUIRE(log_radial_moment(Family::ginibre, 64, 0) == 0.0);
  // M(n,2) = 1/n
  REQUIRE(log_radial_moment(Family::ginibre, 64, 2) == Approx(-std::log(64.0)).epsilon(1e-14));
  // bergman M(2l) = 1/(l+1); oracle for l=3 by direct quadrature of r^6 * 2r
  double direct = integrate_auto([](double r) { return std::pow(r, 6.0) * 2.0 * r; }, 0.0, 1.0, 1e-12);
  REQUIRE(std::exp(log_radial_moment(Family::bergman, 5, 6)) == Approx(direct).epsilon(1e-10));
  REQUIRE(std::exp(log_radial_moment(Family::bergman, 5, 6)) == Approx(0.25).epsilon(1e-14));
  REQUIRE(log_radial_moment(Family::unitary, 9, 12) == 0.0);
  REQUIRE_THROWS_AS(log_radial_moment(Family::ginibre, 4, 3), std::invalid_argument);
  REQUIRE_THROWS_AS(log_radial_moment(Family::ginibre, 4, -2), std::invalid_argument);
}

TEST_CASE("log moments are convex in l for every family") {
  for (Family fam : {Family::ginibre, Family::bergman, Family::unitary}) {
    const int n = 24;
    auto table = RadialMomentTable::build(EnsembleSpec(fam, n), 4 * n);
    for (int l = 1; l + 1 <= 4 * n; ++l) {
      double lhs = table.log_values[l - 1] + table.log_values[l + 1];
      REQUIRE(lhs >= 2.0 * table.log_values[l] - 1e-11);
    }
  }
}

TEST_CASE("moment table matches direct log moments") {
  auto table = RadialMomentTable::build(EnsembleSpec(Family::ginibre, 40), 160);
  for (int l = 0; l <= 160; ++l)
    REQUIRE(table.log_values[l] ==
            Approx(log_radial_moment(Family::ginibre, 40, 2L * l)).margin(1e-9));
}

TEST_CASE("ginibre mean density: value at zero and unit mass") {
  for (int n : {16, 100, 400}) {
    EnsembleSpec ens(Family::ginibre, n);
    REQUIRE(kernel_diag_density(ens, 0.0) == Approx(1.0 / std::numbers::pi).epsilon(1e-14));
    double cutoff = 1.0 + 5.0 / std::sqrt(static_cast<double>(n));
    auto radial = [&](double r) {
      return kernel_diag_density(ens, Complex(r, 0.0)) * 2.0 * std::numbers::pi * r;
    };
    double inside = integrate_gl(radial, 0.0, cutoff, 256);
    double refined = integrate_gl(radial, 0.0, cutoff, 512);
    double tail = ginibre_expected_exceed(n, cutoff) / n;  // exact mass beyond cutoff
    REQUIRE(std::abs(inside + tail - 1.0) < 1e-10);
    REQUIRE(std::abs(refined - inside) < 1e-11);
  }
}

TEST_CASE("ginibre density at the unit circle carries about half the central mass") {
  EnsembleSpec ens(Family::ginibre, 400);
  double v = kernel_diag_density(ens, Complex(1.0, 0.0)) * std::numbers::pi;
  REQUIRE(v > 0.45);
  REQUIRE(v < 0.55);
  // same number from the Poisson central tail
  REQUIRE(v == Approx(poisson_cdf(399, 400.0)).epsilon(1e-9));
}

TEST_CASE("bergman density integrates to one and vanishes outside the disk") {
  EnsembleSpec ens(Family::bergman, 12);
  auto radial = [&](double r) {
    return kernel_diag_density(ens, Complex(0.0, r)) * 2.0 * std::numbers::pi * r;
  };
  REQUIRE(integrate_gl(radial, 0.0, 1.0, 256) == Approx(1.0).margin(1e-12));
  REQUIRE(kernel_diag_density(ens, Complex(1.2, 0.0)) == 0.0);
}

TEST_CASE("density rejects inputs without a planar reference density") {
  REQUIRE_THROWS_AS(kernel_diag_density(EnsembleSpec(Family::unitary, 8), 0.5),
                    UnsupportedEnsembleError);
  REQUIRE_THROWS_AS(
      kernel_diag_density(EnsembleSpec(Family::ginibre, 8),
                          Complex(std::numeric_limits<double>::quiet_NaN(), 0.0)),
      std::invalid_argument);
}

TEST_CASE("moment condition ratios match closed forms and tend to one") {
  std::vector<int> ns = {4, 16, 64, 256};
  auto gin = check_moment_condition(Family::ginibre, 1, ns);
  auto ber = check_moment_condition(Family::bergman, 1, ns);
  auto uni = check_moment_condition(Family::unitary, 3, ns);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    double n = ns[i];
    REQUIRE(gin[i] == Approx((n + 1.0) / n).epsilon(1e-14));
    REQUIRE(ber[i] == Approx((n + 1.0) / (n + 2.0)).epsilon(1e-14));
    REQUIRE(uni[i] == 1.0);
  }
  REQUIRE(std::abs(gin.back() - 1.0) < std::abs(gin.front() - 1.0));
  REQUIRE(std::abs(ber.back() - 1.0) < std::abs(ber.front() - 1.0));
  // m < 0 works while 2n+2m >= 0
  auto neg = check_moment_condition(Family::ginibre, -1, {8});
  REQUIRE(neg[0] == Approx(1.0).epsilon(1e-14));
  REQUIRE_THROWS_AS(check_moment_condition(Family::ginibre, -9, {8}), std::invalid_argument);
}

TEST_CASE("projection kernel refuses the iid baseline") {
  REQUIRE_THROWS_AS(ProjectionKernel(EnsembleSpec(Family::iid_disk, 4)),
                    UnsupportedEnsembleError);
  ProjectionKernel k(EnsembleSpec(Family::bergman, 4));
  // c_{n,l} = l+1 for the bergman kernel
  REQUIRE(std::exp(k.log_coefficient(3)) == Approx(4.0).epsilon(1e-12));
}
