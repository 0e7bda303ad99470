#pragma once

#include "bass/errors.hpp"
#include "bass/params.hpp"
#include "bass/polynomial.hpp"
#include "bass/random.hpp"

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bass {

// h is an indicator (0/1-valued on every Boolean tuple) iff h*h == h in B(K).
inline bool
is_indicator(const Polynomial& h)
{
  return mul(h, h) == h;
}

// Automorphism of B(K) given by the images of x_1..x_n.
//
// Instances come from identity(), elementary(), permutation(), triangular(),
// compose() and extend_for_signing(), which all preserve the Boolean cube and
// are invertible. from_images() exists for deserialization and only checks
// that every image is an indicator.
class Automorphism
{
public:
  static Automorphism identity(unsigned nvars)
  {
    std::vector<Polynomial> images;
    images.reserve(nvars);
    for (unsigned i = 1; i <= nvars; ++i) {
      images.push_back(Polynomial::variable(nvars, i));
    }
    return Automorphism(std::move(images));
  }

  static Automorphism from_images(std::vector<Polynomial> images)
  {
    const auto nvars = static_cast<unsigned>(images.size());
    detail::check_nvars(nvars);
    for (const Polynomial& img : images) {
      if (img.nvars() != nvars) {
        throw DimensionError("automorphism image has nvars " + std::to_string(img.nvars()) + ", expected " +
                             std::to_string(nvars));
      }
      if (!is_indicator(img)) {
        throw InvalidGenerator("automorphism image is not 0/1-valued on the cube");
      }
    }
    return Automorphism(std::move(images));
  }

  unsigned nvars() const { return static_cast<unsigned>(images_.size()); }
  std::span<const Polynomial> images() const { return images_; }

  // phi(x_index), 1-based.
  const Polynomial& image(unsigned index) const
  {
    detail::check_index(index, nvars());
    return images_[index - 1];
  }

  bool is_identity() const { return *this == identity(nvars()); }

  bool operator==(const Automorphism&) const = default;

private:
  explicit Automorphism(std::vector<Polynomial> images)
    : images_(std::move(images))
  {}

  friend Automorphism elementary(unsigned, unsigned, const Polynomial&);
  friend Automorphism permutation(std::span<const unsigned>);
  friend Automorphism compose(const Automorphism&, const Automorphism&);
  friend Automorphism extend_for_signing(const Automorphism&, const Polynomial&);

  std::vector<Polynomial> images_;
};

namespace detail {

// x + h - 2xh, i.e. XOR on Boolean values.
inline Polynomial
boolean_xor(const Polynomial& x, const Polynomial& h)
{
  return x + h - 2 * mul(x, h);
}

// Distinct variables drawn uniformly from `pool`, rejecting repeats.
template<RandomSource G>
Monomial
draw_monomial(G& rng, std::uint64_t pool, unsigned degree)
{
  std::vector<unsigned> candidates;
  for (std::uint64_t rest = pool; rest != 0; rest &= rest - 1) {
    candidates.push_back(static_cast<unsigned>(std::countr_zero(rest)) + 1);
  }
  Monomial m;
  while (m.degree() < degree) {
    const unsigned v = candidates[uniform_below(rng, candidates.size())];
    m.bits |= std::uint64_t{ 1 } << (v - 1);
  }
  return m;
}

} // namespace detail

// Random t-sparse polynomial: t distinct monomials, each with degree uniform in
// 1..b over distinct variables, coefficients uniform in {+1, -1}. A monomial
// that repeats an earlier one is redrawn.
template<RandomSource G>
Polynomial
sample_sparse(const SchemeParams& params, unsigned nvars, G& rng)
{
  detail::check_nvars(nvars);
  if (nvars < params.b || params.b < 1 || params.t < 1) {
    throw InvalidParams("sample_sparse needs 1 <= b <= nvars and t >= 1");
  }
  const std::uint64_t pool = detail::low_mask(nvars);
  std::vector<Term> terms;
  terms.reserve(params.t);
  unsigned redraws = 0;
  while (terms.size() < params.t) {
    const auto degree = static_cast<unsigned>(1 + uniform_below(rng, params.b));
    const Monomial m = detail::draw_monomial(rng, pool, degree);
    const bool repeated = std::any_of(terms.begin(), terms.end(), [&](const Term& t) { return t.monomial == m; });
    if (repeated) {
      if (++redraws > 10000) {
        throw SamplingError("sample_sparse: too few distinct monomials for t=" + std::to_string(params.t));
      }
      continue;
    }
    terms.push_back({ m, coin(rng) ? 1 : -1 });
  }
  return Polynomial::from_terms(nvars, terms);
}

// Random element of the indicator set built by the recursive closure rules
// (variables, P -> 1-P, products), using none of the variables in `excluded`.
//
// A seed monomial M of degree uniform in 1..d is drawn; then r rounds each
// replace the running product P by 1-P with probability 1/2 and multiply it by
// x_i or 1-x_i for a fresh variable x_i. Zero results are redrawn.
template<RandomSource G>
Polynomial
sample_g(unsigned nvars, std::uint64_t excluded, const SchemeParams& params, G& rng)
{
  detail::check_nvars(nvars);
  const std::uint64_t available = detail::low_mask(nvars) & ~excluded;
  if (available == 0) {
    throw SamplingError("sample_g: every variable is excluded");
  }
  const auto avail_count = static_cast<unsigned>(std::popcount(available));
  constexpr int kMaxAttempts = 64;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const auto degree = std::min<unsigned>(static_cast<unsigned>(1 + uniform_below(rng, params.d)), avail_count);
    const Monomial seed = detail::draw_monomial(rng, available, degree);
    Polynomial p = Polynomial::from_terms(nvars, { Term{ seed, 1 } });
    std::uint64_t used = seed.bits;
    for (unsigned round = 0; round < params.r; ++round) {
      if (coin(rng)) {
        p = complement(p);
      }
      std::uint64_t fresh = available & ~used;
      if (fresh == 0) {
        fresh = available;
      }
      const Monomial pick = detail::draw_monomial(rng, fresh, 1);
      used |= pick.bits;
      const Polynomial x = Polynomial::from_terms(nvars, { Term{ pick, 1 } });
      p = mul(p, coin(rng) ? x : complement(x));
    }
    if (!p.is_zero()) {
      return p;
    }
  }
  throw SamplingError("sample_g: only zero polynomials after retries");
}

// Excluded-set overload taking 1-based variable indices.
template<RandomSource G>
Polynomial
sample_g(unsigned nvars, std::span<const unsigned> excluded, const SchemeParams& params, G& rng)
{
  std::uint64_t mask = 0;
  for (unsigned i : excluded) {
    detail::check_index(i, nvars);
    mask |= std::uint64_t{ 1 } << (i - 1);
  }
  return sample_g(nvars, mask, params, rng);
}

// x_k -> x_k + h - 2 x_k h, all other variables fixed. On the cube this flips
// coordinate k wherever h = 1.
inline Automorphism
elementary(unsigned nvars, unsigned k, const Polynomial& h)
{
  detail::check_index(k, nvars);
  if (h.nvars() != nvars) {
    throw DimensionError("elementary: h has nvars " + std::to_string(h.nvars()));
  }
  if (h.depends_on(k)) {
    throw InvalidGenerator("elementary: h depends on x_" + std::to_string(k));
  }
  if (!is_indicator(h)) {
    throw InvalidGenerator("elementary: h is not an indicator polynomial");
  }
  Automorphism a = Automorphism::identity(nvars);
  a.images_[k - 1] = detail::boolean_xor(a.images_[k - 1], h);
  return a;
}

// perm[i-1] = j means x_i -> x_j.
inline Automorphism
permutation(std::span<const unsigned> perm)
{
  const auto nvars = static_cast<unsigned>(perm.size());
  detail::check_nvars(nvars);
  std::uint64_t seen = 0;
  for (unsigned j : perm) {
    if (j < 1 || j > nvars || ((seen >> (j - 1)) & 1U)) {
      throw InvalidPermutation("not a bijection on 1.." + std::to_string(nvars));
    }
    seen |= std::uint64_t{ 1 } << (j - 1);
  }
  std::vector<Polynomial> images;
  images.reserve(nvars);
  for (unsigned j : perm) {
    images.push_back(Polynomial::variable(nvars, j));
  }
  return Automorphism(std::move(images));
}

inline Automorphism
permutation(std::initializer_list<unsigned> perm)
{
  return permutation(std::span<const unsigned>(perm.begin(), perm.size()));
}

template<RandomSource G>
Automorphism
random_permutation(unsigned nvars, G& rng)
{
  std::vector<unsigned> perm(nvars);
  for (unsigned i = 0; i < nvars; ++i) {
    perm[i] = i + 1;
  }
  shuffle(rng, std::span<unsigned>(perm));
  return permutation(perm);
}

// Applying the result equals applying `inner` and then `outer`:
// apply(compose(g, f), P) == apply(g, apply(f, P)).
inline Automorphism
compose(const Automorphism& outer, const Automorphism& inner)
{
  if (outer.nvars() != inner.nvars()) {
    throw DimensionError("compose: nvars differ");
  }
  std::vector<Polynomial> images;
  images.reserve(inner.nvars());
  for (const Polynomial& img : inner.images()) {
    images.push_back(substitute(img, outer.images()));
  }
  return Automorphism(std::move(images));
}

inline Polynomial
apply(const Automorphism& phi, const Polynomial& p)
{
  if (p.nvars() != phi.nvars()) {
    throw DimensionError("apply: polynomial has nvars " + std::to_string(p.nvars()) + ", automorphism " +
                         std::to_string(phi.nvars()));
  }
  return substitute(p, phi.images());
}

enum class Direction
{
  up,   // h for x_k avoids x_1..x_k
  down, // h for x_k avoids x_k..x_n
};

// Triangular automorphism: for each k (ascending for `up`, descending for
// `down`) a fair coin either fixes x_k or sends it to x_k + h - 2 x_k h with h
// drawn by sample_g away from the excluded side. When no variable is left to
// draw from (k = n going up, k = 1 going down) the only non-trivial indicator
// is h = 1, which negates x_k.
template<RandomSource G>
Automorphism
triangular(Direction direction, unsigned nvars, const SchemeParams& params, G& rng)
{
  Automorphism result = Automorphism::identity(nvars);
  std::vector<Polynomial> images(result.images().begin(), result.images().end());
  const std::uint64_t all = detail::low_mask(nvars);
  for (unsigned step = 0; step < nvars; ++step) {
    const unsigned k = direction == Direction::up ? step + 1 : nvars - step;
    if (!coin(rng)) {
      continue;
    }
    const std::uint64_t excluded =
      direction == Direction::up ? detail::low_mask(k) : (all & ~detail::low_mask(k - 1));
    Polynomial h = (all & ~excluded) == 0 ? Polynomial::constant(nvars, 1) : sample_g(nvars, excluded, params, rng);
    images[k - 1] = detail::boolean_xor(images[k - 1], h);
  }
  return Automorphism::from_images(std::move(images));
}

template<RandomSource G>
Automorphism
triangular(Direction direction, const SchemeParams& params, G& rng)
{
  return triangular(direction, params.n, params, rng);
}

// Private key: alpha (upper) first, then beta (lower), then a uniform permutation pi.
template<RandomSource G>
Automorphism
generate_private_automorphism(unsigned nvars, const SchemeParams& params, G& rng)
{
  const Automorphism alpha = triangular(Direction::up, nvars, params, rng);
  const Automorphism beta = triangular(Direction::down, nvars, params, rng);
  const Automorphism pi = random_permutation(nvars, rng);
  return compose(pi, compose(beta, alpha));
}

// Extension to n+1 variables: x_1..x_n map as under phi, and
// x_{n+1} -> x_{n+1} + r - 2 x_{n+1} r.
inline Automorphism
extend_for_signing(const Automorphism& phi, const Polynomial& r_poly)
{
  const unsigned n = phi.nvars();
  const unsigned wide = n + 1;
  detail::check_nvars(wide);
  if (r_poly.nvars() != n && r_poly.nvars() != wide) {
    throw DimensionError("extend_for_signing: r has nvars " + std::to_string(r_poly.nvars()));
  }
  const Polynomial r = r_poly.widened(wide);
  if (r.depends_on(wide)) {
    throw InvalidGenerator("extend_for_signing: r depends on the new variable");
  }
  if (!is_indicator(r)) {
    throw InvalidGenerator("extend_for_signing: r is not an indicator polynomial");
  }
  std::vector<Polynomial> images;
  images.reserve(wide);
  for (const Polynomial& img : phi.images()) {
    images.push_back(img.widened(wide));
  }
  images.push_back(detail::boolean_xor(Polynomial::variable(wide, wide), r));
  return Automorphism(std::move(images));
}

// Image of a cube vertex, or nullopt if some image is not 0/1 there.
inline std::optional<BooleanTuple>
cube_image(const Automorphism& phi, BooleanTuple t)
{
  if (t.width != phi.nvars()) {
    throw DimensionError("cube_image: tuple width mismatch");
  }
  BooleanTuple out{ 0, t.width };
  unsigned i = 0;
  for (const Polynomial& img : phi.images()) {
    const Coefficient v = img.evaluate_bits(t.bits);
    if (v == 1) {
      out.bits |= std::uint64_t{ 1 } << i;
    } else if (v != 0) {
      return std::nullopt;
    }
    ++i;
  }
  return out;
}

namespace detail {

// Groups of consecutive non-empty lines.
inline std::vector<std::vector<std::string_view>>
split_blocks(std::span<const std::string_view> lines)
{
  std::vector<std::vector<std::string_view>> blocks;
  bool open = false;
  for (std::string_view line : lines) {
    if (line.empty()) {
      open = false;
      continue;
    }
    if (!open) {
      blocks.emplace_back();
      open = true;
    }
    blocks.back().push_back(line);
  }
  return blocks;
}

inline Automorphism
parse_automorphism_blocks(std::span<const std::vector<std::string_view>> blocks)
{
  if (blocks.empty() || blocks.front().size() != 1) {
    throw ParseError("automorphism must start with a lone 'nvars=<k>' header");
  }
  const unsigned nvars = parse_nvars_header(blocks.front().front());
  if (blocks.size() != std::size_t{ nvars } + 1) {
    throw ParseError("automorphism declares " + std::to_string(nvars) + " images but has " +
                     std::to_string(blocks.size() - 1));
  }
  std::vector<Polynomial> images;
  images.reserve(nvars);
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    images.push_back(parse_polynomial_lines(blocks[i]));
  }
  try {
    return Automorphism::from_images(std::move(images));
  } catch (const Error& e) {
    throw ParseError(std::string("invalid automorphism: ") + e.what());
  }
}

} // namespace detail

// Header `nvars=<k>`, then the k image polynomials in index order, each
// preceded by a blank line.
inline std::string
to_text(const Automorphism& phi)
{
  std::string out = "nvars=" + std::to_string(phi.nvars()) + "\n";
  for (const Polynomial& img : phi.images()) {
    out += '\n';
    out += to_text(img);
  }
  return out;
}

inline Automorphism
parse_automorphism(std::string_view text)
{
  const auto lines = detail::split_lines(text);
  const auto blocks = detail::split_blocks(lines);
  return detail::parse_automorphism_blocks(blocks);
}

} // namespace bass
