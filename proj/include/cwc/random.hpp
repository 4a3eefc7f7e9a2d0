#ifndef CWC_RANDOM_HPP
#define CWC_RANDOM_HPP

#include <cstdint>
#include <random>

namespace cwc {

/// splitmix64 finalizer; used to decorrelate per-instance seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t instance_seed(std::uint64_t master_seed, std::uint64_t instance_index) {
  return master_seed ^ splitmix64(instance_index);
}

/// Deterministic generator: the engine sequence is fixed by the standard and
/// the conversion to reals is done here, so draws match across platforms.
class Prng {
 public:
  explicit Prng(std::uint64_t seed = 1) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Uniform in (0, 1] with 53 random bits.
  double uniform() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

  std::uint64_t bits() { return engine_(); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace cwc

#endif  // CWC_RANDOM_HPP
