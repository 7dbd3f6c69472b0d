#pragma once

#include <cstdint>

namespace rcg {

// PCG32 (PCG-XSH-RR 64/32): 64-bit LCG state advanced by
//
//   state <- state * 6364136223846793005 + (stream << 1 | 1)
//
// with 32-bit output rotr32((state ^ (state >> 18)) >> 27, state >> 59)
// taken from the pre-advance state.  Seeding follows the reference
// implementation: state = 0, advance once, add the seed, advance again.
//
// The (seed, stream) pair fully determines the output sequence, so runs are
// reproducible across platforms and languages from two integers.  Reference
// vectors (asserted in tests/test_rng.cpp and listed in the README):
//
//   Pcg32(42, 54) first five u32 draws:
//     0xa15c02b7 0x7b47f409 0xba1d3330 0x83d2f293 0xbfa4784b
//
// uniform01() packs two u32 draws (first draw = high bits) into a 53-bit
// mantissa and returns (mantissa + 0.5) * 2^-53, which lies strictly inside
// (0, 1); quantile transforms never see an endpoint.
class Pcg32 {
 public:
  explicit Pcg32(std::uint64_t seed = 0x853c49e6748fea9bULL,
                 std::uint64_t stream = 0xda3e39cb94b95bdbULL) {
    reseed(seed, stream);
  }

  void reseed(std::uint64_t seed, std::uint64_t stream) {
    state_ = 0u;
    inc_ = (stream << 1u) | 1u;
    next_u32();
    state_ += seed;
    next_u32();
  }

  std::uint32_t next_u32() {
    std::uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    std::uint32_t xorshifted =
        static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  std::uint64_t next_u64() {
    std::uint64_t hi = next_u32();
    std::uint64_t lo = next_u32();
    return (hi << 32u) | lo;
  }

  // Strictly inside (0,1).
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11u) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

 private:
  std::uint64_t state_ = 0;
  std::uint64_t inc_ = 0;
};

}  // namespace rcg
