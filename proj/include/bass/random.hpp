#pragma once

#include "bass/errors.hpp"

#include <openssl/rand.h>

#include <array>
#include <concepts>
#include <cstdint>
#include <cstring>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace bass {

// 64-bit uniform random bit generator. All samplers are templates over this,
// and draw only through the helpers below so that a seeded std::mt19937_64
// gives the same output on every standard library.
template<typename G>
concept RandomSource = std::uniform_random_bit_generator<std::remove_reference_t<G>> &&
                       std::same_as<typename std::remove_reference_t<G>::result_type, std::uint64_t> &&
                       (std::remove_reference_t<G>::min() == 0) &&
                       (std::remove_reference_t<G>::max() == std::numeric_limits<std::uint64_t>::max());

// Uniform integer in [0, bound), by rejection (no modulo bias).
template<RandomSource G>
std::uint64_t
uniform_below(G& rng, std::uint64_t bound)
{
  if (bound == 0) {
    throw SamplingError("uniform_below: empty range");
  }
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - (std::numeric_limits<std::uint64_t>::max() % bound);
  for (;;) {
    const std::uint64_t x = rng();
    if (x < limit) {
      return x % bound;
    }
  }
}

// Fair coin.
template<RandomSource G>
bool
coin(G& rng)
{
  return (rng() >> 63) != 0;
}

// Fisher-Yates.
template<RandomSource G, typename T>
void
shuffle(G& rng, std::span<T> items)
{
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

// Either a seeded Mersenne Twister (reproducible runs, golden vectors) or the
// OpenSSL CSPRNG (key generation and signing in production).
class Rng
{
public:
  using result_type = std::uint64_t;

  static Rng seeded(std::uint64_t seed) { return Rng(seed); }
  static Rng system() { return Rng(); }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  bool is_seeded() const { return engine_.has_value(); }

  result_type operator()()
  {
    if (engine_) {
      return (*engine_)();
    }
    if (pos_ == buffer_.size()) {
      refill();
    }
    return buffer_[pos_++];
  }

  // Independent child stream; seeded parents give seeded children.
  Rng split()
  {
    if (engine_) {
      return Rng((*this)());
    }
    return Rng();
  }

private:
  explicit Rng(std::uint64_t seed)
    : engine_(std::in_place, seed)
  {}

  Rng()
    : pos_(buffer_.size())
  {}

  void refill()
  {
    if (RAND_bytes(reinterpret_cast<unsigned char*>(buffer_.data()), static_cast<int>(sizeof(buffer_))) != 1) {
      throw Error("OpenSSL RAND_bytes failed");
    }
    pos_ = 0;
  }

  std::optional<std::mt19937_64> engine_;
  std::array<result_type, 64> buffer_{};
  std::size_t pos_ = 0;
};

static_assert(RandomSource<Rng>);
static_assert(RandomSource<std::mt19937_64>);

} // namespace bass
