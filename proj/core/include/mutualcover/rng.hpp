#pragma once

// Counter-based random streams. Philox4x32-10 maps (key, counter) to four
// 32-bit words with no hidden state, so draw k of stream s under a seed is a
// pure function of (seed, s, k) and any split of samples across workers sees
// the same numbers.

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace mutualcover {

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

inline PhiloxBlock philox4x32_10(PhiloxBlock ctr, PhiloxKey key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
           static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
           static_cast<std::uint32_t>(p0)};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

// Stream `stream` under `seed`: block b is philox(ctr = (b, 0, stream_lo,
// stream_hi), key = seed).
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  std::uint32_t next_u32() {
    if (used_ == 4) refill();
    return block_[used_++];
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    const std::uint64_t hi = next_u32() >> 5;  // 27 bits
    const std::uint64_t lo = next_u32() >> 6;  // 26 bits
    return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
  }

 private:
  void refill() {
    block_ = philox4x32_10({static_cast<std::uint32_t>(counter_),
                            static_cast<std::uint32_t>(counter_ >> 32),
                            static_cast<std::uint32_t>(stream_),
                            static_cast<std::uint32_t>(stream_ >> 32)},
                           key_);
    ++counter_;
    used_ = 0;
  }

  PhiloxKey key_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  PhiloxBlock block_{};
  int used_ = 4;
};

// Inverse-CDF draws from a finite pmf.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(std::span<const double> probs) {
    cumulative_.reserve(probs.size());
    double acc = 0.0;
    for (double p : probs) cumulative_.push_back(acc += p);
    last_ = probs.size();
    while (last_ > 0 && probs[last_ - 1] <= 0.0) --last_;
  }

  std::size_t draw(double u) const {
    const double target = u * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    const auto idx = static_cast<std::size_t>(it - cumulative_.begin());
    // Rounding at the top can land past the last positive mass.
    return std::min(idx, last_ - 1);
  }

 private:
  std::vector<double> cumulative_;
  std::size_t last_ = 0;
};

}  // namespace mutualcover
