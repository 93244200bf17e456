#include "sharpe/random.hpp"

#include <utility>

namespace sharpe {

namespace {

// Domain separator so that a substream key can never collide with a root key
// of the same words.
constexpr std::uint32_t kSplitTag = 0x5348'5250u;

void push_u64(std::vector<std::uint32_t>& words, std::uint64_t v) {
  words.push_back(static_cast<std::uint32_t>(v & 0xffff'ffffu));
  words.push_back(static_cast<std::uint32_t>(v >> 32));
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed) { reseed(); }

RandomStream::RandomStream(std::uint64_t seed, std::vector<std::uint64_t> path)
    : seed_(seed), path_(std::move(path)) {
  reseed();
}

void RandomStream::reseed() {
  std::vector<std::uint32_t> words;
  words.reserve(3 + 3 * path_.size());
  push_u64(words, seed_);
  words.push_back(static_cast<std::uint32_t>(path_.size()));
  for (std::uint64_t index : path_) {
    words.push_back(kSplitTag);
    push_u64(words, index);
  }
  std::seed_seq seq(words.begin(), words.end());
  engine_.seed(seq);
}

RandomStream RandomStream::substream(std::uint64_t index) const {
  auto child = path_;
  child.push_back(index);
  return RandomStream(seed_, std::move(child));
}

double RandomStream::uniform_open() {
  // (k + 0.5) / 2^53 for k in [0, 2^53): never 0, never 1.
  const std::uint64_t k = engine_() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

}  // namespace sharpe
