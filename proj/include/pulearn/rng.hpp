#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "pulearn/error.hpp"

// Deterministic randomness. std::mt19937_64 is fully specified by the
// standard, but the <random> distributions are not, so all conversions
// from raw 64-bit draws to uniforms/normals/shuffles are done by hand.
// Identical seeds therefore give identical results on every platform.

namespace pulearn {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives a decoupled stream seed from (seed, salt).
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  return splitmix64(seed ^ splitmix64(salt));
}

// FNV-1a, used to fold names into seed derivations.
constexpr std::uint64_t hash_str(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t u64() { return gen_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe to pass to log().
  double uniform_pos() {
    return static_cast<double>((u64() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform index in [0, n). Modulo bias is < 2^-53 for the n used here.
  std::size_t index(std::size_t n) {
    if (n == 0) fail(Errc::invalid_argument, "Rng::index on empty range");
    return static_cast<std::size_t>(u64() % n);
  }

  // Box-Muller; two uniforms per call, no cached spare, so the draw
  // sequence is a pure function of the call count.
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct values from {0, ..., n-1}, order of selection.
  std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                      std::size_t k) {
    if (k > n) fail(Errc::invalid_argument, "sample size exceeds population");
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    std::vector<std::size_t> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = i + index(n - i);
      std::swap(pool[i], pool[j]);
      out.push_back(pool[i]);
    }
    return out;
  }

  // Successive weighted draws without replacement: each draw picks index i
  // with probability w[i] / sum(remaining w), then removes it. If the
  // remaining weight mass hits zero the rest are drawn uniformly.
  std::vector<std::size_t> weighted_sample_without_replacement(
      const std::vector<double>& weights, std::size_t k) {
    const std::size_t n = weights.size();
    if (k > n) fail(Errc::invalid_argument, "sample size exceeds population");
    for (double w : weights)
      if (!(w >= 0.0))
        fail(Errc::invalid_argument, "negative or NaN sampling weight");
    std::vector<double> w = weights;
    std::vector<bool> taken(n, false);
    std::vector<std::size_t> out;
    out.reserve(k);
    double total = 0.0;
    for (double x : w) total += x;
    for (std::size_t draw = 0; draw < k; ++draw) {
      std::size_t pick = n;
      if (total > 0.0) {
        double u = uniform() * total;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (taken[i]) continue;
          acc += w[i];
          if (u < acc) {
            pick = i;
            break;
          }
        }
      }
      if (pick == n) {
        // zero mass left (or fp underrun): uniform among the remaining
        std::size_t remaining = n - draw;
        std::size_t target = index(remaining);
        for (std::size_t i = 0; i < n; ++i) {
          if (taken[i]) continue;
          if (target == 0) {
            pick = i;
            break;
          }
          --target;
        }
      }
      taken[pick] = true;
      total -= w[pick];
      out.push_back(pick);
    }
    return out;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace pulearn
