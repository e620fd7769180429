#pragma once

#include <cstdint>
#include <string_view>

namespace mpcsim {

// Keyed counter RNG. Every stream is a pure function of (key, stream id,
// counter), so adding a party or a call site never shifts anybody else's
// randomness. The mixer is the splitmix64 finalizer applied to the
// concatenated words.
class RngStream {
 public:
  RngStream() : key_(0), stream_(0) {}
  RngStream(uint64_t key, uint64_t stream) : key_(key), stream_(stream) {}

  uint64_t next() { return mix3(key_, stream_, counter_++); }

  // Uniform in [0, bound). Rejection sampling keeps it exact.
  uint64_t next_below(uint64_t bound) {
    uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      uint64_t v = next();
      if (v >= threshold) return v % bound;
    }
  }

  uint64_t next_bit() { return next() & 1; }

  static uint64_t mix(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static uint64_t mix3(uint64_t a, uint64_t b, uint64_t c) {
    return mix(mix(mix(a) ^ b) ^ c);
  }

 private:
  uint64_t key_;
  uint64_t stream_;
  uint64_t counter_ = 0;
};

inline uint64_t hash_str(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (char c : s) {
    h ^= static_cast<uint8_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Named sub-stream of a root seed: derive(seed, "party", 3), etc.
inline RngStream derive_stream(uint64_t root, std::string_view domain,
                               uint64_t index) {
  return RngStream(RngStream::mix(root) ^ hash_str(domain), index);
}

}  // namespace mpcsim
