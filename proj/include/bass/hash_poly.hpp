#pragma once

#include "bass/errors.hpp"
#include "bass/polynomial.hpp"

#include <openssl/evp.h>

#include <array>
#include <bit>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>

namespace bass {

// SHA3-256 output; bit i is bit 7 - (i mod 8) of byte i / 8 (MSB first).
struct Digest256
{
  std::array<std::uint8_t, 32> bytes{};

  bool bit(unsigned i) const { return (bytes[i / 8] >> (7 - i % 8)) & 1U; }

  std::string hex() const
  {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(64);
    for (std::uint8_t b : bytes) {
      out += digits[b >> 4];
      out += digits[b & 0xF];
    }
    return out;
  }

  bool operator==(const Digest256&) const = default;
};

inline Digest256
hash_message(std::span<const std::uint8_t> message)
{
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  Digest256 d;
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha3_256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), message.data(), message.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), d.bytes.data(), &len) != 1 || len != d.bytes.size()) {
    throw Error("SHA3-256 digest failed");
  }
  return d;
}

inline Digest256
hash_message(std::string_view message)
{
  return hash_message(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(message.data()), message.size()));
}

namespace detail {

// Block k is byte k. Its top 5 bits give the coefficient [0, 1, -1][popcount mod 3];
// its low 3 bits sit at global positions 3k, 3k+1, 3k+2 of a 96-bit string
// labelled x_1..x_m repeatedly, so position j names x_{(j mod m) + 1}.
inline Polynomial
fold_digest(const Digest256& digest, unsigned nvars)
{
  static constexpr Coefficient by_residue[3] = { 0, 1, -1 };
  std::array<Term, 32> terms{};
  for (unsigned k = 0; k < 32; ++k) {
    const std::uint8_t byte = digest.bytes[k];
    const unsigned s = static_cast<unsigned>(std::popcount(static_cast<unsigned>(byte >> 3)));
    Monomial m;
    for (unsigned j = 0; j < 3; ++j) {
      if ((byte >> (2 - j)) & 1U) {
        m.bits |= std::uint64_t{ 1 } << ((3 * k + j) % nvars);
      }
    }
    terms[k] = { m, by_residue[s % 3] };
  }
  return Polynomial::from_terms(nvars, terms);
}

} // namespace detail

// Q in the 32 variables x_1..x_32.
inline Polynomial
digest_to_poly(const Digest256& digest)
{
  return detail::fold_digest(digest, 32);
}

// The same rule with the position labels cycling through x_1..x_nvars instead
// of x_1..x_32. Used by reduced parameter sets (n + 1 < 32) so that exhaustive
// counting stays feasible; for nvars = 32 it is digest_to_poly.
inline Polynomial
digest_to_poly_folded(const Digest256& digest, unsigned nvars)
{
  if (nvars < 3 || nvars > 32) {
    throw DimensionError("digest folding needs 3..32 variables, got " + std::to_string(nvars));
  }
  return detail::fold_digest(digest, nvars);
}

// Q for a message under a scheme with n private variables (Q lives in n+1).
inline Polynomial
message_polynomial(std::span<const std::uint8_t> message, unsigned n)
{
  const Digest256 d = hash_message(message);
  return n + 1 == 32 ? digest_to_poly(d) : digest_to_poly_folded(d, n + 1);
}

inline Polynomial
message_polynomial(std::string_view message, unsigned n)
{
  return message_polynomial(
    std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(message.data()), message.size()), n);
}

} // namespace bass
