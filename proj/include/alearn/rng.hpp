#pragma once

#include <cstdint>
#include <random>

namespace alearn {

/// What a derived stream is used for. The numeric values are part of the seed scheme.
enum class StreamKind : std::uint64_t {
  kActiveIteration = 1,
  kPassiveSample = 2,
  kGilbertVarshamov = 3,
  kEvaluation = 4,
  kAux = 5,
};

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based seed for (seed, run_id, iteration, kind). Adding runs never perturbs others.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t run_id, std::uint64_t iteration,
                                    StreamKind kind) {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ run_id);
  h = mix64(h ^ iteration);
  return mix64(h ^ static_cast<std::uint64_t>(kind));
}

/// A random stream. Draws are platform-independent: only raw 64-bit outputs are consumed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t run_id, std::uint64_t iteration, StreamKind kind)
      : engine_(derive_seed(seed, run_id, iteration, kind)) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// +1 with probability p, else -1.
  int rademacher(double p_plus) { return uniform() < p_plus ? 1 : -1; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace alearn
