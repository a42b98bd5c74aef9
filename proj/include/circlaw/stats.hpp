#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "circlaw/eigensolver.hpp"
#include "circlaw/ensembles.hpp"
#include "circlaw/numeric.hpp"
#include "circlaw/rng.hpp"
#include "circlaw/test_function.hpp"

namespace circlaw {

struct MCEstimate {
  Cplx value;
  double std_error = 0.0;
  int replicas = 0;
};

inline Cplx linear_statistic(const TestFunction& f, const PointSample& s) {
  Cplx acc = 0.0;
  for (const auto& z : s.points) acc += f.eval(z);
  return acc;
}

namespace detail {

// Deterministic sum independent of accumulation chunking: fixed-order
// pairwise tree.
template <class T>
T pairwise_sum(const T* data, std::size_t n) {
  if (n == 0) return T{};
  if (n <= 8) {
    T s = data[0];
    for (std::size_t i = 1; i < n; ++i) s += data[i];
    return s;
  }
  std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

template <class T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(v.data(), v.size());
}

}  // namespace detail

// Runs fn(replica) for replica = 0..replicas-1 on up to `threads` workers and
// returns the results in replica order; the outcome is independent of the
// worker count because every replica derives its own seed.
template <class T, class Fn>
std::vector<T> run_replicas(int replicas, const Fn& fn, int threads = 0) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, replicas));
  std::vector<T> out(static_cast<std::size_t>(replicas));
  if (threads == 1) {
    for (int r = 0; r < replicas; ++r) out[static_cast<std::size_t>(r)] = fn(r);
    return out;
  }
  std::vector<std::string> errors(static_cast<std::size_t>(replicas));
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    for (;;) {
      int r = next.fetch_add(1);
      if (r >= replicas || failed.load()) return;
      try {
        out[static_cast<std::size_t>(r)] = fn(r);
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(r)] = e.what();
        failed.store(true);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failed.load()) {
    for (const auto& e : errors)
      if (!e.empty()) throw std::runtime_error("replica failure: " + e);
  }
  return out;
}

struct ReplicaPairs {
  std::vector<Cplx> x, y;
  int failures = 0;
};

// Evaluates the two statistics on shared samples, one derived seed per
// replica. Individual sampler failures are tolerated up to 1%.
inline ReplicaPairs replica_statistics(const TestFunction& f, const TestFunction& g,
                                       const EnsembleSpec& ens, int replicas,
                                       std::uint64_t seed, int threads = 0) {
  struct Row {
    Cplx x, y;
    bool ok = true;
  };
  auto rows = run_replicas<Row>(
      replicas,
      [&](int r) -> Row {
        try {
          PointSample s = sample_ensemble(ens, derive_stream(seed, static_cast<std::uint64_t>(r)));
          return {linear_statistic(f, s), linear_statistic(g, s), true};
        } catch (const EnvelopeFailureError&) {
          return {0.0, 0.0, false};
        } catch (const NonConvergenceError&) {
          return {0.0, 0.0, false};
        }
      },
      threads);
  ReplicaPairs out;
  out.x.reserve(static_cast<std::size_t>(replicas));
  out.y.reserve(static_cast<std::size_t>(replicas));
  for (const auto& row : rows) {
    if (!row.ok) {
      ++out.failures;
      continue;
    }
    out.x.push_back(row.x);
    out.y.push_back(row.y);
  }
  if (out.failures * 100 > replicas)
    throw std::runtime_error("more than 1% of replicas failed to sample");
  return out;
}

// mean with standard error
inline MCEstimate mean_from_values(std::span<const Cplx> x) {
  const int r = static_cast<int>(x.size());
  if (r < 2) throw std::invalid_argument("mean needs at least 2 values");
  Cplx mean = detail::pairwise_sum(x.data(), x.size()) / static_cast<double>(r);
  std::vector<double> dev2(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) dev2[i] = std::norm(x[i] - mean);
  double var = detail::pairwise_sum(dev2) / (r - 1.0);
  return {mean, std::sqrt(var / r), r};
}

// Unbiased sample covariance Cov(X, Y) = E[(X-EX) conj(Y-EY)] with a
// leave-one-out jackknife standard error.
inline MCEstimate covariance_from_values(std::span<const Cplx> xs, std::span<const Cplx> ys) {
  if (xs.size() != ys.size() || xs.size() < 3)
    throw std::invalid_argument("covariance needs matched samples of size >= 3");
  const double rd = static_cast<double>(xs.size());
  Cplx sx = detail::pairwise_sum(xs.data(), xs.size());
  Cplx sy = detail::pairwise_sum(ys.data(), ys.size());
  std::vector<Cplx> prod(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) prod[i] = xs[i] * std::conj(ys[i]);
  Cplx sxy = detail::pairwise_sum(prod);
  Cplx cov = (sxy - sx * std::conj(sy) / rd) / (rd - 1.0);

  Cplx theta_bar = 0.0;
  std::vector<Cplx> theta(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    Cplx sx_i = sx - xs[i];
    Cplx sy_i = sy - ys[i];
    Cplx sxy_i = sxy - prod[i];
    theta[i] = (sxy_i - sx_i * std::conj(sy_i) / (rd - 1.0)) / (rd - 2.0);
    theta_bar += theta[i];
  }
  theta_bar /= rd;
  double ss = 0.0;
  for (const auto& t : theta) ss += std::norm(t - theta_bar);
  return {cov, std::sqrt((rd - 1.0) / rd * ss), static_cast<int>(xs.size())};
}

namespace detail {

// Unbiased k-statistics through order 4 from power sums of the sample.
inline std::array<double, 5> kstats_from_power_sums(double n, double s1, double s2,
                                                    double s3, double s4, int max_order) {
  std::array<double, 5> k{};
  k[1] = s1 / n;
  if (max_order >= 2) k[2] = (n * s2 - s1 * s1) / (n * (n - 1));
  if (max_order >= 3)
    k[3] = (n * n * s3 - 3.0 * n * s2 * s1 + 2.0 * s1 * s1 * s1) / (n * (n - 1) * (n - 2));
  if (max_order >= 4)
    k[4] = (n * n * (n + 1) * s4 - 4.0 * n * (n + 1) * s3 * s1 - 3.0 * n * (n - 1) * s2 * s2 +
            12.0 * n * s2 * s1 * s1 - 6.0 * s1 * s1 * s1 * s1) /
           (n * (n - 1) * (n - 2) * (n - 3));
  return k;
}

}  // namespace detail

// Unbiased cumulant estimators C_1..C_max_order of real sample values, with
// leave-one-out jackknife standard errors.
inline std::vector<MCEstimate> kstatistics_from_values(std::span<const double> x, int max_order) {
  if (max_order < 1 || max_order > 4) throw std::invalid_argument("max_order must be 1..4");
  const int r = static_cast<int>(x.size());
  if (r < std::max(5, max_order + 2)) throw std::invalid_argument("too few values");
  const double rd = r;
  std::vector<double> p1(x.size()), p2(x.size()), p3(x.size()), p4(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    p1[i] = x[i];
    p2[i] = x[i] * x[i];
    p3[i] = p2[i] * x[i];
    p4[i] = p3[i] * x[i];
  }
  double s1 = detail::pairwise_sum(p1), s2 = detail::pairwise_sum(p2),
         s3 = detail::pairwise_sum(p3), s4 = detail::pairwise_sum(p4);
  auto k = detail::kstats_from_power_sums(rd, s1, s2, s3, s4, max_order);
  std::vector<std::array<double, 5>> loo(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    loo[i] = detail::kstats_from_power_sums(rd - 1.0, s1 - p1[i], s2 - p2[i], s3 - p3[i],
                                            s4 - p4[i], max_order);
  std::vector<MCEstimate> out;
  for (int order = 1; order <= max_order; ++order) {
    double mean_loo = 0.0;
    for (const auto& l : loo) mean_loo += l[static_cast<std::size_t>(order)];
    mean_loo /= rd;
    double ss = 0.0;
    for (const auto& l : loo) {
      double d = l[static_cast<std::size_t>(order)] - mean_loo;
      ss += d * d;
    }
    out.push_back({k[static_cast<std::size_t>(order)], std::sqrt((rd - 1.0) / rd * ss), r});
  }
  return out;
}

// ----- sampling front ends -----

inline MCEstimate mc_mean(const TestFunction& f, const EnsembleSpec& ens, int replicas,
                          std::uint64_t seed, int threads = 0) {
  if (replicas < 2) throw std::invalid_argument("mc_mean needs at least 2 replicas");
  auto pairs = replica_statistics(f, f, ens, replicas, seed, threads);
  return mean_from_values(pairs.x);
}

inline MCEstimate mc_covariance(const TestFunction& f, const TestFunction& g,
                                const EnsembleSpec& ens, int replicas, std::uint64_t seed,
                                int threads = 0) {
  if (replicas < 100) throw std::invalid_argument("mc_covariance needs >= 100 replicas");
  auto pairs = replica_statistics(f, g, ens, replicas, seed, threads);
  return covariance_from_values(pairs.x, pairs.y);
}

struct KStatistics {
  std::vector<MCEstimate> cumulants;  // C_1..C_max_order
  int failures = 0;
};

inline KStatistics mc_kstatistics(const TestFunction& f, const EnsembleSpec& ens, int replicas,
                                  std::uint64_t seed, int max_order = 4, int threads = 0) {
  if (replicas < 10 * max_order)
    throw std::invalid_argument("mc_kstatistics needs >= 10*max_order replicas");
  if (!f.real_valued() && max_order > 2)
    throw std::invalid_argument("k-statistics beyond order 2 need a real-valued f");
  auto pairs = replica_statistics(f, f, ens, replicas, seed, threads);
  std::vector<double> x(pairs.x.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = pairs.x[i].real();
  KStatistics out;
  out.failures = pairs.failures;
  out.cumulants = kstatistics_from_values(x, max_order);
  return out;
}

// Two-sample Kolmogorov-Smirnov test; returns the asymptotic p-value.
inline double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  double ne = std::sqrt(na * nb / (na + nb));
  return kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
}

}  // namespace circlaw
