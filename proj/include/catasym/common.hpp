#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace catasym {

inline constexpr double kPi = 3.14159265358979323846;

/// Global tolerance for geometric equality unless an operation states
/// a tighter one.
inline constexpr double kGeomTol = 1e-9;

/// Thrown when arguments do not satisfy an operation's contract
/// (mismatched space/point variants, unsupported variants, bad ranges).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a sample or search would exceed its configured size cap.
class SizeLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a search exhausts its evaluation budget without a
/// conclusive answer.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what, std::string partial = {})
      : std::runtime_error(what), best_partial(std::move(partial)) {}
  std::string best_partial;
};

/// Thrown when the successive-approximation iteration stops contracting.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Deterministic, platform-independent pseudo-random stream (splitmix64).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(next_u64() % static_cast<std::uint64_t>(n));
  }

 private:
  std::uint64_t state_;
};

/// Worker count for pair scans, from CATASYM_WORKERS (default: hardware).
int worker_count();

namespace detail {
void run_chunked(std::size_t chunk_count,
                 const std::function<void(std::size_t)>& body);
}  // namespace detail

/// Splits [0, n) into fixed-size chunks, maps each chunk sequentially and
/// combines the chunk results in index order. The result is independent of
/// the worker count, which keeps report bytes reproducible.
template <class T, class MapChunk, class Combine>
T parallel_map_reduce(std::size_t n, T init, MapChunk map_chunk,
                      Combine combine, std::size_t chunk = 8192) {
  if (n == 0) return init;
  const std::size_t chunks = (n + chunk - 1) / chunk;
  std::vector<T> partial(chunks, init);
  detail::run_chunked(chunks, [&](std::size_t c) {
    const std::size_t lo = c * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    partial[c] = map_chunk(lo, hi);
  });
  T acc = init;
  for (const T& p : partial) acc = combine(acc, p);
  return acc;
}

}  // namespace catasym
