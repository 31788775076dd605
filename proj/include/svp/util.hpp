#ifndef SVP_UTIL_HPP
#define SVP_UTIL_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

namespace svp {

// splitmix64; used both as a stand-alone generator and to derive
// per-trial streams from a base seed and a counter.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // uniform in [0,1), 53 bits of mantissa; bit-identical across platforms
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
  // uniform in [lo,hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t counter) {
  SplitMix64 g(seed ^ (0x6a09e667f3bcc909ULL + counter * 0x9e3779b97f4a7c15ULL));
  g.next();
  return g.next();
}

// Running log-sum-exp: represents log(sum of exp(v_i)) as shift + log(acc).
// Sequential adds are order-dependent by design; callers fix the order.
struct LogSumExp {
  double shift = -std::numeric_limits<double>::infinity();
  double acc = 0.0;

  void add(double v) {
    if (v == -std::numeric_limits<double>::infinity()) return;
    if (acc == 0.0) {
      shift = v;
      acc = 1.0;
      return;
    }
    if (v <= shift) {
      acc += std::exp(v - shift);
    } else {
      acc = acc * std::exp(shift - v) + 1.0;
      shift = v;
    }
  }

  void merge(const LogSumExp& o) {
    if (o.acc == 0.0) return;
    if (acc == 0.0) {
      *this = o;
      return;
    }
    if (o.shift <= shift) {
      acc += o.acc * std::exp(o.shift - shift);
    } else {
      acc = acc * std::exp(shift - o.shift) + o.acc;
      shift = o.shift;
    }
  }

  double value() const {
    if (acc == 0.0) return -std::numeric_limits<double>::infinity();
    return shift + std::log(acc);
  }
};

// Merge per-partition partials with a fixed pairwise tree so the result does
// not depend on how partitions were assigned to workers.
inline LogSumExp merge_pairwise(std::vector<LogSumExp> parts) {
  if (parts.empty()) return LogSumExp{};
  while (parts.size() > 1) {
    std::vector<LogSumExp> next;
    next.reserve((parts.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < parts.size(); i += 2) {
      LogSumExp m = parts[i];
      m.merge(parts[i + 1]);
      next.push_back(m);
    }
    if (parts.size() % 2 == 1) next.push_back(parts.back());
    parts = std::move(next);
  }
  return parts[0];
}

// Run job(i) for i in [0,count) on up to `threads` workers with a static
// cyclic assignment. Each job writes only its own slot, so results are
// identical for every thread count.
inline void parallel_for_static(std::size_t count, unsigned threads,
                                const std::function<void(std::size_t)>& job) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  unsigned n = std::min<std::size_t>(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned w = 0; w < n; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t i = w; i < count; i += n) job(i);
    });
  }
  for (auto& t : pool) t.join();
}

inline unsigned default_threads() {
  unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : h;
}

// Kosaraju strongly connected components over an edge predicate, iterative.
// Components are listed with members ascending, in a deterministic order.
std::vector<std::vector<int>> scc_components(int n, const std::function<bool(int, int)>& edge);

}  // namespace svp

#endif
