#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace circlaw {

class ComplexityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// All surjections [k] ->> [m], encoded as k-vectors of block indices in
// 0..m-1. Generated as set partitions (restricted growth strings) times the
// m! block orderings; m! * S(k,m) maps in total. Cached per (k, m).
inline const std::vector<std::vector<std::uint8_t>>& surjections(int k, int m) {
  if (k < 1 || m < 1 || m > k || k > 12)
    throw std::invalid_argument("surjections: need 1 <= m <= k <= 12");
  static std::map<std::pair<int, int>, std::vector<std::vector<std::uint8_t>>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find({k, m});
  if (it != cache.end()) return it->second;

  std::vector<std::vector<std::uint8_t>> out;
  // restricted growth strings with exactly m blocks
  std::vector<std::uint8_t> rgs(static_cast<std::size_t>(k), 0);
  std::vector<std::uint8_t> perm(static_cast<std::size_t>(m));
  auto emit = [&]() {
    // all relabelings of the blocks
    for (int i = 0; i < m; ++i) perm[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
    do {
      std::vector<std::uint8_t> s(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) s[static_cast<std::size_t>(i)] = perm[rgs[static_cast<std::size_t>(i)]];
      out.push_back(std::move(s));
    } while (std::next_permutation(perm.begin(), perm.end()));
  };
  // depth-first over positions; max_used = highest block index used so far + 1
  auto rec = [&](auto&& self, int pos, int used) -> void {
    if (k - pos < m - used) return;  // cannot reach m blocks any more
    if (pos == k) {
      if (used == m) emit();
      return;
    }
    for (int b = 0; b < std::min(used + 1, m); ++b) {
      rgs[static_cast<std::size_t>(pos)] = static_cast<std::uint8_t>(b);
      self(self, pos + 1, std::max(used, b + 1));
    }
  };
  rec(rec, 0, 0);
  return cache.emplace(std::make_pair(k, m), std::move(out)).first->second;
}

}  // namespace circlaw
