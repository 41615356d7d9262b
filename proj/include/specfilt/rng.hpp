#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace specfilt {

// splitmix64 finalizer, used to decorrelate derived seed streams.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent sub-stream seed from (master seed, stream tag, index).
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t index = 0) {
  return mix64(mix64(master ^ mix64(stream)) ^ index);
}

// Stream tags used across the project, kept in one place to avoid collisions.
namespace seed_stream {
inline constexpr std::uint64_t monte_carlo = 0x6d63ULL;    // density realizations
inline constexpr std::uint64_t trial_graph = 0x7472ULL;    // per-trial graphs
inline constexpr std::uint64_t initial_state = 0x7830ULL;  // simulation x0
}  // namespace seed_stream

/// All randomness flows through this wrapper. The mt19937_64 output sequence
/// is pinned by the standard, and the uniform/normal transforms below are our
/// own, so a given seed reproduces bit-identically on any platform (the
/// std::*_distribution classes make no such guarantee).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; the second deviate is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = (static_cast<double>(bits() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace specfilt
