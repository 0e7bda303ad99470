#pragma once

#include "bass/automorphism.hpp"
#include "bass/counting.hpp"
#include "bass/errors.hpp"
#include "bass/hash_poly.hpp"
#include "bass/params.hpp"
#include "bass/polynomial.hpp"
#include "bass/random.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bass {

struct PublicKey
{
  SchemeParams params;
  std::array<Polynomial, 3> p;     // sparse public polynomials P_1..P_3
  std::array<Polynomial, 3> phi_p; // phi(P_1)..phi(P_3)

  bool operator==(const PublicKey&) const = default;
};

struct PrivateKey
{
  SchemeParams params;
  Automorphism phi;

  bool operator==(const PrivateKey&) const = default;
};

struct KeyPair
{
  PrivateKey priv;
  PublicKey pub;
};

struct Signature
{
  Polynomial sig; // in n+1 variables

  bool operator==(const Signature&) const = default;
};

// Multilinear u(x, y, z, t) with coefficients in {-2, ..., 2}; x..t are x_1..x_4.
struct VerifierChallenge
{
  Polynomial u{ 4 };
};

// Uniform independent coefficients for all 16 monomials; the zero polynomial is redrawn.
template<RandomSource G>
VerifierChallenge
sample_challenge(G& rng)
{
  for (;;) {
    std::vector<Term> terms;
    for (std::uint64_t m = 0; m < 16; ++m) {
      const auto c = static_cast<Coefficient>(uniform_below(rng, 5)) - 2;
      terms.push_back({ Monomial{ m }, c });
    }
    Polynomial u = Polynomial::from_terms(4, terms);
    if (!u.is_zero()) {
      return { std::move(u) };
    }
  }
}

// u(f_1, f_2, f_3, f_4) kept unexpanded. Evaluation goes through the values
// f_i(t), which equals evaluating the expanded polynomial because evaluation
// at a cube vertex is a ring homomorphism out of B(K).
class ChallengeForm
{
public:
  ChallengeForm(Polynomial u, std::array<Polynomial, 4> parts)
    : u_(std::move(u))
    , parts_(std::move(parts))
  {
    if (u_.nvars() != 4) {
      throw DimensionError("challenge polynomial must have 4 variables");
    }
    for (const Polynomial& f : parts_) {
      if (f.nvars() != parts_[0].nvars()) {
        throw DimensionError("challenge components disagree on nvars");
      }
    }
  }

  unsigned nvars() const { return parts_[0].nvars(); }

  Coefficient evaluate_bits(std::uint64_t bits) const
  {
    std::array<Coefficient, 4> v{};
    for (std::size_t i = 0; i < 4; ++i) {
      v[i] = parts_[i].evaluate_bits(bits);
    }
    Coefficient sum = 0;
    for (const Term& term : u_.terms()) {
      Coefficient prod = term.coefficient;
      for (unsigned i = 0; i < 4; ++i) {
        if ((term.monomial.bits >> i) & 1U) {
          prod = detail::checked_mul(prod, v[i]);
        }
      }
      sum = detail::checked_add(sum, prod);
    }
    return sum;
  }

  Coefficient evaluate(BooleanTuple t) const
  {
    if (t.width != nvars()) {
      throw DimensionError("tuple width mismatch");
    }
    return evaluate_bits(t.bits);
  }

  // Fully expanded polynomial; only practical at small scale.
  Polynomial expand() const { return substitute(u_, parts_); }

private:
  Polynomial u_;
  std::array<Polynomial, 4> parts_;
};

template<RandomSource G>
KeyPair
keygen(const SchemeParams& params, G& rng)
{
  params.validate();
  PublicKey pub{ params, {}, {} };
  for (auto& p : pub.p) {
    p = sample_sparse(params, params.n, rng);
  }
  Automorphism phi = generate_private_automorphism(params.n, params, rng);
  for (std::size_t i = 0; i < 3; ++i) {
    pub.phi_p[i] = apply(phi, pub.p[i]);
  }
  return { PrivateKey{ params, std::move(phi) }, std::move(pub) };
}

// Signature for a chosen extension polynomial r (an indicator in x_1..x_n).
inline Signature
sign_with(const PrivateKey& priv, std::span<const std::uint8_t> message, const Polynomial& r_poly)
{
  const unsigned n = priv.phi.nvars();
  const Polynomial q = message_polynomial(message, n);
  const Automorphism extended = extend_for_signing(priv.phi, r_poly);
  return { apply(extended, q) };
}

// Draws a fresh r for every signature.
template<RandomSource G>
Signature
sign(const PrivateKey& priv, std::span<const std::uint8_t> message, G& rng)
{
  const unsigned n = priv.phi.nvars();
  const Polynomial r = sample_g(n + 1, std::uint64_t{ 1 } << n, priv.params, rng);
  return sign_with(priv, message, r);
}

template<RandomSource G>
Signature
sign(const PrivateKey& priv, std::string_view message, G& rng)
{
  return sign(priv, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(message.data()), message.size()), rng);
}

struct VerifyReport
{
  VerifierChallenge challenge;
  std::uint64_t trials = 0;
  std::uint64_t positive_r = 0;
  std::uint64_t positive_s = 0;
  double threshold = 0;
  bool accepted = false;

  double p_r() const { return static_cast<double>(positive_r) / static_cast<double>(trials); }
  double p_s() const { return static_cast<double>(positive_s) / static_cast<double>(trials); }
  double difference() const { return std::abs(p_r() - p_s()); }

  std::uint64_t count_difference() const
  {
    return positive_r > positive_s ? positive_r - positive_s : positive_s - positive_r;
  }

  // Decision for another threshold on the same samples.
  bool accepts_at(double eps) const
  {
    SchemeParams p;
    p.threshold = eps;
    return count_difference() <= p.allowed_count_difference(trials);
  }
};

namespace detail {

inline void
check_public_key(const PublicKey& pub, unsigned n)
{
  for (std::size_t i = 0; i < 3; ++i) {
    if (pub.p[i].nvars() != n || pub.phi_p[i].nvars() != n) {
      throw DimensionError("public key polynomials must have nvars " + std::to_string(n));
    }
  }
}

// R = u(P_1, P_2, P_3, Q) and S = u(phi P_1, phi P_2, phi P_3, sig), all in n+1 variables.
inline std::array<ChallengeForm, 2>
challenge_forms(const PublicKey& pub, const Polynomial& q, const Signature& sig, const VerifierChallenge& challenge)
{
  const unsigned wide = pub.params.n + 1;
  ChallengeForm r(challenge.u, { pub.p[0].widened(wide), pub.p[1].widened(wide), pub.p[2].widened(wide), q });
  ChallengeForm s(
    challenge.u, { pub.phi_p[0].widened(wide), pub.phi_p[1].widened(wide), pub.phi_p[2].widened(wide), sig.sig });
  return { std::move(r), std::move(s) };
}

} // namespace detail

// Monte Carlo verification. Only public data is read. R and S are estimated
// on independent tuple samples of size params.trials; the signature is
// accepted iff |count_R - count_S| <= floor(threshold * trials).
template<RandomSource G>
VerifyReport
verify(const PublicKey& pub,
       std::span<const std::uint8_t> message,
       const Signature& sig,
       const SchemeParams& params,
       G& rng,
       unsigned threads = 1)
{
  params.validate();
  const unsigned n = pub.params.n;
  if (params.n != n) {
    throw InvalidParams("verification parameters disagree with the public key on n");
  }
  if (sig.sig.nvars() != n + 1) {
    throw MalformedSignature("signature has nvars " + std::to_string(sig.sig.nvars()) + ", expected " +
                             std::to_string(n + 1));
  }
  detail::check_public_key(pub, n);

  const Polynomial q = message_polynomial(message, n);
  VerifyReport report;
  report.challenge = sample_challenge(rng);
  const auto forms = detail::challenge_forms(pub, q, sig, report.challenge);

  const auto tuples_r = sample_tuples(n + 1, params.trials, rng);
  const auto tuples_s = sample_tuples(n + 1, params.trials, rng);
  report.trials = params.trials;
  report.positive_r = count_positive(forms[0], tuples_r, threads);
  report.positive_s = count_positive(forms[1], tuples_s, threads);
  report.threshold = params.threshold;
  report.accepted = report.count_difference() <= params.allowed_count_difference(params.trials);
  return report;
}

template<RandomSource G>
VerifyReport
verify(const PublicKey& pub, std::string_view message, const Signature& sig, const SchemeParams& params, G& rng, unsigned threads = 1)
{
  return verify(pub, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(message.data()), message.size()), sig, params, rng, threads);
}

struct ExactChallengeCounts
{
  ValueCounts r;
  ValueCounts s;
};

// Exhaustive counterpart of verify() for small n: exact value counts of R and S.
inline ExactChallengeCounts
exact_challenge_counts(const PublicKey& pub,
                       std::span<const std::uint8_t> message,
                       const Signature& sig,
                       const VerifierChallenge& challenge)
{
  const unsigned n = pub.params.n;
  if (sig.sig.nvars() != n + 1) {
    throw MalformedSignature("signature has wrong nvars");
  }
  detail::check_public_key(pub, n);
  const auto forms = detail::challenge_forms(pub, message_polynomial(message, n), sig, challenge);
  return { exact_value_counts(forms[0]), exact_value_counts(forms[1]) };
}

// Key and signature files.
//
// Public key:  "bass-public-key", "params <...>", then six polynomial blocks
//              P_1..P_3, phi(P_1)..phi(P_3), blocks separated by blank lines.
// Private key: "bass-private-key", "params <...>", then the automorphism text.
// Signature:   one polynomial block.
namespace detail {

inline SchemeParams
parse_params_line(std::string_view line)
{
  constexpr std::string_view prefix = "params ";
  if (!line.starts_with(prefix)) {
    throw ParseError("expected 'params ...' line");
  }
  try {
    return parse_params(line.substr(prefix.size()));
  } catch (const InvalidParams& e) {
    throw ParseError(e.what());
  }
}

inline std::vector<std::vector<std::string_view>>
read_key_blocks(std::string_view text, std::string_view magic, SchemeParams& params)
{
  const auto lines = split_lines(text);
  auto blocks = split_blocks(lines);
  if (blocks.empty() || blocks.front().size() != 2 || blocks.front()[0] != magic) {
    throw ParseError("missing '" + std::string(magic) + "' header");
  }
  params = parse_params_line(blocks.front()[1]);
  blocks.erase(blocks.begin());
  return blocks;
}

} // namespace detail

inline std::string
to_text(const PublicKey& pub)
{
  std::string out = "bass-public-key\nparams " + to_string(pub.params) + "\n";
  for (const auto* group : { &pub.p, &pub.phi_p }) {
    for (const Polynomial& poly : *group) {
      out += '\n';
      out += to_text(poly);
    }
  }
  return out;
}

inline PublicKey
parse_public_key(std::string_view text)
{
  PublicKey pub;
  const auto blocks = detail::read_key_blocks(text, "bass-public-key", pub.params);
  if (blocks.size() != 6) {
    throw ParseError("public key needs 6 polynomial blocks, found " + std::to_string(blocks.size()));
  }
  for (std::size_t i = 0; i < 3; ++i) {
    pub.p[i] = detail::parse_polynomial_lines(blocks[i]);
    pub.phi_p[i] = detail::parse_polynomial_lines(blocks[i + 3]);
  }
  try {
    detail::check_public_key(pub, pub.params.n);
  } catch (const DimensionError& e) {
    throw ParseError(e.what());
  }
  return pub;
}

inline std::string
to_text(const PrivateKey& priv)
{
  return "bass-private-key\nparams " + to_string(priv.params) + "\n\n" + to_text(priv.phi);
}

inline PrivateKey
parse_private_key(std::string_view text)
{
  SchemeParams params;
  const auto blocks = detail::read_key_blocks(text, "bass-private-key", params);
  Automorphism phi = detail::parse_automorphism_blocks(blocks);
  if (phi.nvars() != params.n) {
    throw ParseError("private automorphism has " + std::to_string(phi.nvars()) + " variables, params say " +
                     std::to_string(params.n));
  }
  return { params, std::move(phi) };
}

inline std::string
to_text(const Signature& sig)
{
  return to_text(sig.sig);
}

inline Signature
parse_signature(std::string_view text)
{
  return { parse_polynomial(text) };
}

} // namespace bass
