#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace sharpe {

/// Seedable, splittable source of uniform random bits.
///
/// A stream is identified by a key path: the root seed followed by the
/// indices of every split taken to reach it. The engine state is a pure
/// function of that path (fed through std::seed_seq into mt19937_64, both of
/// which are fully specified by the standard), so substream i of seed s is the
/// same on every platform and independent of how work is scheduled.
///
/// Streams are values. Copying a stream copies its position; two copies then
/// produce identical sequences.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  /// Independent child stream keyed by `index`. Does not advance this stream.
  [[nodiscard]] RandomStream substream(std::uint64_t index) const;

  /// Raw 64 random bits.
  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in the open interval (0, 1), 53-bit resolution.
  double uniform_open();

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] const std::vector<std::uint64_t>& path() const { return path_; }

 private:
  RandomStream(std::uint64_t seed, std::vector<std::uint64_t> path);
  void reseed();

  std::uint64_t seed_;
  std::vector<std::uint64_t> path_;
  std::mt19937_64 engine_;
};

}  // namespace sharpe
