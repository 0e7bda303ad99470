#pragma once

#include "bass/errors.hpp"
#include "bass/polynomial.hpp"
#include "bass/random.hpp"

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <thread>
#include <vector>

// Counting strictly positive values on Boolean tuples: a Monte Carlo
// estimator, an exhaustive oracle, and the trial-count bound
// N >= C * 4 log2(2/delta) / eps^2.
namespace bass {

// Anything evaluable at a cube vertex given as a bit mask.
template<typename F>
concept BooleanFunction = requires(const F& f, std::uint64_t bits) {
  { f.nvars() } -> std::convertible_to<unsigned>;
  { f.evaluate_bits(bits) } -> std::convertible_to<Coefficient>;
};

struct ProportionEstimate
{
  std::uint64_t positive = 0;
  std::uint64_t trials = 0;

  double proportion() const { return trials == 0 ? 0.0 : static_cast<double>(positive) / static_cast<double>(trials); }
};

struct ValueCounts
{
  std::uint64_t positive = 0;
  std::uint64_t zero = 0;
  std::uint64_t negative = 0;

  std::uint64_t total() const { return positive + zero + negative; }
  bool operator==(const ValueCounts&) const = default;
};

struct McConfig
{
  std::uint64_t trials = 3000;
  double epsilon = 0.03;
  double delta = 0x1p-33;
  double c_const = 0.02;

  void validate() const
  {
    if (trials < 1 || !(epsilon > 0 && epsilon < 1) || !(delta > 0 && delta < 1) || !(c_const > 0)) {
      throw InvalidParams("Monte Carlo config out of range");
    }
  }
};

// Uniform tuples with replacement; drawn sequentially so that the sample set
// does not depend on how evaluation is later partitioned.
template<RandomSource G>
std::vector<std::uint64_t>
sample_tuples(unsigned nvars, std::uint64_t count, G& rng)
{
  const std::uint64_t mask = detail::low_mask(nvars);
  std::vector<std::uint64_t> out(count);
  for (auto& t : out) {
    t = rng() & mask;
  }
  return out;
}

template<BooleanFunction F>
std::uint64_t
count_positive(const F& f, std::span<const std::uint64_t> tuples, unsigned threads = 1)
{
  auto count_range = [&f](std::span<const std::uint64_t> part) {
    std::uint64_t n = 0;
    for (std::uint64_t t : part) {
      n += f.evaluate_bits(t) > 0 ? 1 : 0;
    }
    return n;
  };
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(tuples.size() / 256 + 1)));
  if (threads == 1) {
    return count_range(tuples);
  }
  std::vector<std::uint64_t> partial(threads, 0);
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    const std::size_t chunk = (tuples.size() + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::size_t begin = std::min(tuples.size(), w * chunk);
      const std::size_t end = std::min(tuples.size(), begin + chunk);
      workers.emplace_back([&, w, begin, end] { partial[w] = count_range(tuples.subspan(begin, end - begin)); });
    }
  }
  std::uint64_t total = 0;
  for (std::uint64_t n : partial) {
    total += n;
  }
  return total;
}

template<BooleanFunction F, RandomSource G>
ProportionEstimate
estimate_positive_proportion(const F& f, std::uint64_t n_trials, G& rng, unsigned threads = 1)
{
  if (n_trials < 1) {
    throw InvalidParams("estimate_positive_proportion: need at least one trial");
  }
  const auto tuples = sample_tuples(f.nvars(), n_trials, rng);
  return { count_positive(f, tuples, threads), n_trials };
}

inline constexpr unsigned kMaxExactVars = 25;

// Exhaustive enumeration for arbitrary evaluable functions.
template<BooleanFunction F>
ValueCounts
exact_value_counts(const F& f)
{
  const unsigned nvars = f.nvars();
  if (nvars > kMaxExactVars) {
    throw CapacityError("exact counting limited to " + std::to_string(kMaxExactVars) + " variables, got " +
                        std::to_string(nvars));
  }
  ValueCounts c;
  const std::uint64_t end = std::uint64_t{ 1 } << nvars;
  for (std::uint64_t t = 0; t < end; ++t) {
    const Coefficient v = f.evaluate_bits(t);
    (v > 0 ? c.positive : v == 0 ? c.zero : c.negative) += 1;
  }
  return c;
}

// For polynomials up to 20 variables the value table is built in O(n 2^n) by
// summing coefficients over subsets; above that, plain enumeration.
inline ValueCounts
exact_value_counts(const Polynomial& p)
{
  const unsigned nvars = p.nvars();
  if (nvars > kMaxExactVars) {
    throw CapacityError("exact counting limited to " + std::to_string(kMaxExactVars) + " variables, got " +
                        std::to_string(nvars));
  }
  if (nvars > 20) {
    return exact_value_counts<Polynomial>(p);
  }
  const std::size_t size = std::size_t{ 1 } << nvars;
  std::vector<Coefficient> values(size, 0);
  for (const Term& t : p.terms()) {
    values[t.monomial.bits] = t.coefficient;
  }
  for (unsigned i = 0; i < nvars; ++i) {
    const std::size_t bit = std::size_t{ 1 } << i;
    for (std::size_t s = 0; s < size; ++s) {
      if (s & bit) {
        values[s] = detail::checked_add(values[s], values[s ^ bit]);
      }
    }
  }
  ValueCounts c;
  for (Coefficient v : values) {
    (v > 0 ? c.positive : v == 0 ? c.zero : c.negative) += 1;
  }
  return c;
}

template<typename F>
std::uint64_t
exact_positive_count(const F& f)
{
  return exact_value_counts(f).positive;
}

// ceil(C * 4 * log2(2 / delta) / eps^2)
inline std::uint64_t
required_trials(double epsilon, double delta, double c_const)
{
  if (!(epsilon > 0 && epsilon < 1) || !(delta > 0 && delta < 1) || !(c_const > 0)) {
    throw InvalidParams("required_trials: arguments out of range");
  }
  return static_cast<std::uint64_t>(std::ceil(c_const * 4.0 * std::log2(2.0 / delta) / (epsilon * epsilon)));
}

inline std::uint64_t
required_trials(const McConfig& cfg)
{
  cfg.validate();
  return required_trials(cfg.epsilon, cfg.delta, cfg.c_const);
}

} // namespace bass
