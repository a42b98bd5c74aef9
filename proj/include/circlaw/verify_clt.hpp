#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "circlaw/cumulants.hpp"
#include "circlaw/limits.hpp"
#include "circlaw/stats.hpp"
#include "circlaw/test_function.hpp"

namespace circlaw {

// Exact finite-n variance E|X(f) - E X(f)|^2 of a polynomial statistic in
// the Ginibre ensemble, by bilinearity of the joint cumulant over monomials.
inline double exact_poly_variance_ginibre(const PolyZZbar& p, long n) {
  Cplx acc = 0.0;
  for (const auto& [ab_t, c_t] : p.terms()) {
    if (ab_t.first == 0 && ab_t.second == 0) continue;  // constants drop out
    for (const auto& [ab_u, c_u] : p.terms()) {
      if (ab_u.first == 0 && ab_u.second == 0) continue;
      std::vector<MonomialStat> pair_{{ab_t.first, ab_t.second}, {ab_u.second, ab_u.first}};
      acc += c_t * std::conj(c_u) * upsilon_k(pair_, n).get_d();
    }
  }
  return acc.real();
}

struct CltReport {
  MCEstimate mc_variance;
  double predicted_interior = 0.0;  // (1/pi) int |dbar f|^2; (1/4pi)|f|_{H^1}^2 for real f
  double predicted_boundary = 0.0;  // sum_{k>0} k |fhat|^2;  (1/2)|f|_{H^1/2}^2 for real f
  double predicted_total = 0.0;
  std::optional<double> exact_finite_n;
  double z_score = 0.0;
  std::vector<MCEstimate> kstats;  // C_1..C_4 for real f, empty otherwise
  std::vector<double> replica_values;
};

// Side-by-side verification of the limiting variance: Monte Carlo estimate,
// analytic prediction, and (for Ginibre polynomial statistics) the exact
// finite-n value.
inline CltReport verify_clt(const TestFunction& f, const EnsembleSpec& ens, int replicas,
                            std::uint64_t seed, int threads = 0, bool keep_replicas = false) {
  CltReport rep;
  if (f.real_valued()) {
    VariancePrediction pv = predict_variance(f);
    rep.predicted_interior = pv.h1_part;
    rep.predicted_boundary = pv.h_half_part;
    rep.predicted_total = pv.total;
  } else {
    Cplx cov = predict_covariance(f, f);
    double interior = integrate_disk(
                          [&](double r, double t) {
                            Cplx z = std::polar(r, t);
                            return std::norm(f.wirtinger_dzbar(z));
                          },
                          1e-9) /
                      std::numbers::pi;
    rep.predicted_interior = interior;
    rep.predicted_boundary = cov.real() - interior;
    rep.predicted_total = cov.real();
  }

  auto pairs = replica_statistics(f, f, ens, replicas, seed, threads);
  rep.mc_variance = covariance_from_values(pairs.x, pairs.x);
  if (f.is_poly() && ens.family == Family::ginibre)
    rep.exact_finite_n = exact_poly_variance_ginibre(f.as_poly(), ens.n);
  double diff = rep.mc_variance.value.real() - rep.predicted_total;
  rep.z_score = (rep.mc_variance.std_error > 0.0)
                    ? diff / rep.mc_variance.std_error
                    : (diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  if (f.real_valued() && static_cast<int>(pairs.x.size()) >= 40) {
    std::vector<double> xr(pairs.x.size());
    for (std::size_t i = 0; i < xr.size(); ++i) xr[i] = pairs.x[i].real();
    rep.kstats = kstatistics_from_values(xr, 4);
  }
  if (keep_replicas) {
    rep.replica_values.reserve(pairs.x.size());
    for (const auto& v : pairs.x) rep.replica_values.push_back(v.real());
  }
  return rep;
}

}  // namespace circlaw
