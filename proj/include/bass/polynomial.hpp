#pragma once

#include "bass/errors.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

// Sparse multilinear integer polynomials modulo the ideal (x_i^2 - x_i).
//
// Variables are 1-based (x_1 .. x_n). A monomial is the set of its variables,
// stored as a 64-bit mask with x_i at bit i-1, so the product of two monomials
// is the union of their masks. Terms are kept sorted by ascending mask with no
// zero coefficients, which makes equality a plain vector comparison and fixes
// the serialized order.
namespace bass {

inline constexpr unsigned kMaxVars = 64;

using Coefficient = std::int64_t;

namespace detail {

inline Coefficient
checked_add(Coefficient a, Coefficient b)
{
  Coefficient out;
  if (__builtin_add_overflow(a, b, &out)) {
    throw CoefficientOverflow("coefficient addition overflows 64 bits");
  }
  return out;
}

inline Coefficient
checked_mul(Coefficient a, Coefficient b)
{
  Coefficient out;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw CoefficientOverflow("coefficient multiplication overflows 64 bits");
  }
  return out;
}

// Mask with the low `nvars` bits set.
constexpr std::uint64_t
low_mask(unsigned nvars)
{
  return nvars >= 64 ? ~std::uint64_t{ 0 } : (std::uint64_t{ 1 } << nvars) - 1;
}

inline void
check_index(unsigned index, unsigned nvars)
{
  if (index < 1 || index > nvars) {
    throw DimensionError("variable index " + std::to_string(index) + " outside 1.." + std::to_string(nvars));
  }
}

inline void
check_nvars(unsigned nvars)
{
  if (nvars > kMaxVars) {
    throw DimensionError("at most 64 variables are supported, got " + std::to_string(nvars));
  }
}

} // namespace detail

// Square-free monomial; the empty set is the constant monomial 1.
struct Monomial
{
  std::uint64_t bits = 0;

  static constexpr Monomial one() { return {}; }

  static constexpr Monomial variable(unsigned index) { return { std::uint64_t{ 1 } << (index - 1) }; }

  static constexpr Monomial of(std::initializer_list<unsigned> indices)
  {
    Monomial m;
    for (unsigned i : indices) {
      m.bits |= std::uint64_t{ 1 } << (i - 1);
    }
    return m;
  }

  constexpr unsigned degree() const { return static_cast<unsigned>(std::popcount(bits)); }
  constexpr bool contains(unsigned index) const { return (bits >> (index - 1)) & 1U; }

  // x_i^2 = x_i, so the product is the union of variable sets.
  constexpr Monomial operator*(Monomial other) const { return { bits | other.bits }; }

  // Ascending variable indices.
  std::vector<unsigned> variables() const
  {
    std::vector<unsigned> out;
    out.reserve(degree());
    for (std::uint64_t rest = bits; rest != 0; rest &= rest - 1) {
      out.push_back(static_cast<unsigned>(std::countr_zero(rest)) + 1);
    }
    return out;
  }

  constexpr auto operator<=>(const Monomial&) const = default;
};

// A point of {0,1}^width; x_i is bit i-1.
struct BooleanTuple
{
  std::uint64_t bits = 0;
  unsigned width = 0;

  static BooleanTuple from_values(std::initializer_list<int> values)
  {
    BooleanTuple t{ 0, static_cast<unsigned>(values.size()) };
    unsigned i = 0;
    for (int v : values) {
      if (v != 0) {
        t.bits |= std::uint64_t{ 1 } << i;
      }
      ++i;
    }
    return t;
  }

  constexpr bool operator[](unsigned index) const { return (bits >> (index - 1)) & 1U; }
  constexpr bool operator==(const BooleanTuple&) const = default;
};

struct Term
{
  Monomial monomial;
  Coefficient coefficient = 0;

  constexpr bool operator==(const Term&) const = default;
};

class Polynomial
{
public:
  Polynomial()
    : Polynomial(0U)
  {}

  explicit Polynomial(unsigned nvars)
    : nvars_(nvars)
  {
    detail::check_nvars(nvars);
  }

  static Polynomial constant(unsigned nvars, Coefficient c)
  {
    Polynomial p(nvars);
    if (c != 0) {
      p.terms_.push_back({ Monomial::one(), c });
    }
    return p;
  }

  static Polynomial variable(unsigned nvars, unsigned index)
  {
    detail::check_index(index, nvars);
    Polynomial p(nvars);
    p.terms_.push_back({ Monomial::variable(index), 1 });
    return p;
  }

  // Combines repeated monomials, drops zero coefficients and sorts.
  static Polynomial from_terms(unsigned nvars, std::span<const Term> terms)
  {
    Polynomial p(nvars);
    const std::uint64_t allowed = detail::low_mask(nvars);
    std::vector<Term> sorted(terms.begin(), terms.end());
    std::sort(sorted.begin(), sorted.end(), [](const Term& a, const Term& b) { return a.monomial < b.monomial; });
    for (const Term& t : sorted) {
      if ((t.monomial.bits & ~allowed) != 0) {
        throw DimensionError("monomial uses a variable beyond x_" + std::to_string(nvars));
      }
      if (!p.terms_.empty() && p.terms_.back().monomial == t.monomial) {
        p.terms_.back().coefficient = detail::checked_add(p.terms_.back().coefficient, t.coefficient);
      } else {
        p.terms_.push_back(t);
      }
    }
    std::erase_if(p.terms_, [](const Term& t) { return t.coefficient == 0; });
    return p;
  }

  static Polynomial from_terms(unsigned nvars, std::initializer_list<Term> terms)
  {
    return from_terms(nvars, std::span<const Term>(terms.begin(), terms.size()));
  }

  unsigned nvars() const { return nvars_; }
  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  unsigned degree() const
  {
    unsigned d = 0;
    for (const Term& t : terms_) {
      d = std::max(d, t.monomial.degree());
    }
    return d;
  }

  // Union of all variables that occur.
  std::uint64_t support() const
  {
    std::uint64_t s = 0;
    for (const Term& t : terms_) {
      s |= t.monomial.bits;
    }
    return s;
  }

  bool depends_on(unsigned index) const { return index >= 1 && index <= kMaxVars && ((support() >> (index - 1)) & 1U); }

  Coefficient coefficient(Monomial m) const
  {
    auto it = std::lower_bound(
      terms_.begin(), terms_.end(), m, [](const Term& t, Monomial key) { return t.monomial < key; });
    return (it != terms_.end() && it->monomial == m) ? it->coefficient : 0;
  }

  // Same polynomial viewed in a larger ambient ring.
  Polynomial widened(unsigned nvars) const
  {
    if (nvars < nvars_) {
      throw DimensionError("cannot widen to fewer variables");
    }
    Polynomial p(nvars);
    p.terms_ = terms_;
    return p;
  }

  Coefficient evaluate(BooleanTuple t) const
  {
    if (t.width != nvars_) {
      throw DimensionError("tuple width " + std::to_string(t.width) + " does not match nvars " + std::to_string(nvars_));
    }
    return evaluate_bits(t.bits);
  }

  // Unchecked-width evaluation for hot loops; `bits` must fit in nvars().
  Coefficient evaluate_bits(std::uint64_t bits) const
  {
    Coefficient sum = 0;
    const std::uint64_t absent = ~bits;
    for (const Term& t : terms_) {
      if ((t.monomial.bits & absent) == 0) {
        sum = detail::checked_add(sum, t.coefficient);
      }
    }
    return sum;
  }

  Polynomial operator-() const
  {
    Polynomial p = *this;
    for (Term& t : p.terms_) {
      t.coefficient = detail::checked_mul(t.coefficient, -1);
    }
    return p;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
  friend class TermAccumulator;

  unsigned nvars_;
  std::vector<Term> terms_;
};

// Hash-map sink for building products; emits a canonical Polynomial.
class TermAccumulator
{
public:
  explicit TermAccumulator(unsigned nvars, std::size_t expected = 0)
    : nvars_(nvars)
  {
    acc_.reserve(expected);
  }

  void add(Monomial m, Coefficient c)
  {
    if (c == 0) {
      return;
    }
    auto [it, inserted] = acc_.try_emplace(m.bits, c);
    if (!inserted) {
      it->second = detail::checked_add(it->second, c);
    }
  }

  void add(const Polynomial& p, Coefficient scale = 1)
  {
    for (const Term& t : p.terms()) {
      add(t.monomial, detail::checked_mul(t.coefficient, scale));
    }
  }

  Polynomial finish() &&
  {
    Polynomial p(nvars_);
    p.terms_.reserve(acc_.size());
    for (const auto& [bits, c] : acc_) {
      if (c != 0) {
        p.terms_.push_back({ Monomial{ bits }, c });
      }
    }
    std::sort(p.terms_.begin(), p.terms_.end(), [](const Term& a, const Term& b) { return a.monomial < b.monomial; });
    return p;
  }

private:
  unsigned nvars_;
  std::unordered_map<std::uint64_t, Coefficient> acc_;
};

namespace detail {

inline void
check_same_nvars(const Polynomial& a, const Polynomial& b)
{
  if (a.nvars() != b.nvars()) {
    throw DimensionError("polynomials over " + std::to_string(a.nvars()) + " and " + std::to_string(b.nvars()) +
                         " variables");
  }
}

// Merge of two sorted term lists, b scaled by `sign`.
inline Polynomial
merge(const Polynomial& a, const Polynomial& b, Coefficient sign)
{
  check_same_nvars(a, b);
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  auto ia = a.terms().begin();
  auto ib = b.terms().begin();
  while (ia != a.terms().end() || ib != b.terms().end()) {
    if (ib == b.terms().end() || (ia != a.terms().end() && ia->monomial < ib->monomial)) {
      out.push_back(*ia++);
    } else if (ia == a.terms().end() || ib->monomial < ia->monomial) {
      out.push_back({ ib->monomial, checked_mul(ib->coefficient, sign) });
      ++ib;
    } else {
      out.push_back({ ia->monomial, checked_add(ia->coefficient, checked_mul(ib->coefficient, sign)) });
      ++ia;
      ++ib;
    }
  }
  return Polynomial::from_terms(a.nvars(), out);
}

} // namespace detail

inline Polynomial
add(const Polynomial& a, const Polynomial& b)
{
  return detail::merge(a, b, 1);
}

inline Polynomial
subtract(const Polynomial& a, const Polynomial& b)
{
  return detail::merge(a, b, -1);
}

inline Polynomial
mul(const Polynomial& a, const Polynomial& b)
{
  detail::check_same_nvars(a, b);
  if (a.is_zero() || b.is_zero()) {
    return Polynomial(a.nvars());
  }
  TermAccumulator acc(a.nvars(), a.size() * b.size());
  for (const Term& x : a.terms()) {
    for (const Term& y : b.terms()) {
      acc.add(x.monomial * y.monomial, detail::checked_mul(x.coefficient, y.coefficient));
    }
  }
  return std::move(acc).finish();
}

inline Coefficient
evaluate(const Polynomial& p, BooleanTuple t)
{
  return p.evaluate(t);
}

inline Polynomial
operator+(const Polynomial& a, const Polynomial& b)
{
  return add(a, b);
}

inline Polynomial
operator-(const Polynomial& a, const Polynomial& b)
{
  return subtract(a, b);
}

inline Polynomial
operator*(const Polynomial& a, const Polynomial& b)
{
  return mul(a, b);
}

inline Polynomial
operator*(Coefficient c, const Polynomial& p)
{
  TermAccumulator acc(p.nvars(), p.size());
  acc.add(p, c);
  return std::move(acc).finish();
}

// 1 - p
inline Polynomial
complement(const Polynomial& p)
{
  return Polynomial::constant(p.nvars(), 1) - p;
}

// Replaces x_i by images[i-1] in every monomial and reduces. All images must
// share one ambient variable count, which becomes the result's.
inline Polynomial
substitute(const Polynomial& p, std::span<const Polynomial> images)
{
  if (images.size() != p.nvars()) {
    throw DimensionError("substitute needs " + std::to_string(p.nvars()) + " images, got " +
                         std::to_string(images.size()));
  }
  const unsigned out_vars = images.empty() ? 0 : images.front().nvars();
  for (const Polynomial& img : images) {
    if (img.nvars() != out_vars) {
      throw DimensionError("substitution images disagree on nvars");
    }
  }

  TermAccumulator acc(out_vars);
  for (const Term& t : p.terms()) {
    if (t.monomial.bits == 0) {
      acc.add(Monomial::one(), t.coefficient);
      continue;
    }
    auto vars = t.monomial.variables();
    // Multiply smallest images first to keep intermediates small.
    std::sort(vars.begin(), vars.end(), [&](unsigned a, unsigned b) { return images[a - 1].size() < images[b - 1].size(); });
    Polynomial product = images[vars.front() - 1];
    for (std::size_t k = 1; k < vars.size() && !product.is_zero(); ++k) {
      product = mul(product, images[vars[k] - 1]);
    }
    acc.add(product, t.coefficient);
  }
  return std::move(acc).finish();
}

inline Polynomial
substitute(const Polynomial& p, std::initializer_list<Polynomial> images)
{
  return substitute(p, std::span<const Polynomial>(images.begin(), images.size()));
}

// Canonical text form:
//
//   nvars=<k>
//   <coefficient>:<i1>,<i2>,...
//
// one term per line in canonical order; the constant term has an empty index list.
inline std::string
to_text(const Polynomial& p)
{
  std::string out = "nvars=" + std::to_string(p.nvars()) + "\n";
  for (const Term& t : p.terms()) {
    out += std::to_string(t.coefficient);
    out += ':';
    bool first = true;
    for (unsigned v : t.monomial.variables()) {
      if (!first) {
        out += ',';
      }
      out += std::to_string(v);
      first = false;
    }
    out += '\n';
  }
  return out;
}

namespace detail {

template<typename Int>
Int
parse_int(std::string_view s, std::string_view what)
{
  Int value{};
  if (!s.empty() && s.front() == '+') {
    throw ParseError("unexpected '+' in " + std::string(what));
  }
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw ParseError("bad " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return value;
}

// Splits on '\n', dropping one trailing '\r' per line.
inline std::vector<std::string_view>
split_lines(std::string_view text)
{
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    lines.push_back(line);
    if (nl == std::string_view::npos) {
      break;
    }
    text.remove_prefix(nl + 1);
  }
  return lines;
}

inline unsigned
parse_nvars_header(std::string_view line)
{
  constexpr std::string_view prefix = "nvars=";
  if (!line.starts_with(prefix)) {
    throw ParseError("expected 'nvars=<k>' header, got '" + std::string(line) + "'");
  }
  auto k = parse_int<unsigned>(line.substr(prefix.size()), "nvars");
  if (k > kMaxVars) {
    throw ParseError("nvars exceeds 64");
  }
  return k;
}

// Parses a block of lines (header first). Input must already be canonical.
inline Polynomial
parse_polynomial_lines(std::span<const std::string_view> lines)
{
  if (lines.empty()) {
    throw ParseError("empty polynomial block");
  }
  const unsigned nvars = parse_nvars_header(lines.front());
  std::vector<Term> terms;
  terms.reserve(lines.size() - 1);
  for (std::string_view line : lines.subspan(1)) {
    auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError("term line without ':': '" + std::string(line) + "'");
    }
    Term t;
    t.coefficient = parse_int<Coefficient>(line.substr(0, colon), "coefficient");
    if (t.coefficient == 0) {
      throw ParseError("zero coefficient in canonical text");
    }
    std::string_view idx = line.substr(colon + 1);
    unsigned prev = 0;
    while (!idx.empty()) {
      auto comma = idx.find(',');
      auto v = parse_int<unsigned>(idx.substr(0, comma), "variable index");
      if (v < 1 || v > nvars || v <= prev) {
        throw ParseError("variable indices must be ascending within 1..nvars");
      }
      t.monomial.bits |= std::uint64_t{ 1 } << (v - 1);
      prev = v;
      if (comma == std::string_view::npos) {
        break;
      }
      idx.remove_prefix(comma + 1);
      if (idx.empty()) {
        throw ParseError("trailing ',' in index list");
      }
    }
    if (!terms.empty() && !(terms.back().monomial < t.monomial)) {
      throw ParseError("terms are not in canonical ascending order");
    }
    terms.push_back(t);
  }
  return Polynomial::from_terms(nvars, terms);
}

} // namespace detail

inline Polynomial
parse_polynomial(std::string_view text)
{
  auto lines = detail::split_lines(text);
  while (!lines.empty() && lines.back().empty()) {
    lines.pop_back();
  }
  return detail::parse_polynomial_lines(lines);
}

} // namespace bass
