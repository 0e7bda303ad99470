#pragma once

#include "bass/polynomial.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace bass {

using BigInt = boost::multiprecision::cpp_int;

// Size under the "5 bits per variable occurrence, 3 bits per monomial" rule.
// Occurrences of x_32 are charged 5 bits as well.
struct SizeReport
{
  std::uint64_t variable_occurrences = 0;
  std::uint64_t monomial_count = 0;
  std::uint64_t bits = 0;
  double kilobytes = 0; // bits / 8 / 1024

  bool operator==(const SizeReport&) const = default;
};

inline SizeReport
measure(std::span<const Polynomial> polys)
{
  SizeReport r;
  for (const Polynomial& p : polys) {
    r.monomial_count += p.size();
    for (const Term& t : p.terms()) {
      r.variable_occurrences += t.monomial.degree();
    }
  }
  r.bits = r.variable_occurrences * 5 + r.monomial_count * 3;
  r.kilobytes = static_cast<double>(r.bits) / 8.0 / 1024.0;
  return r;
}

inline SizeReport
measure(std::initializer_list<Polynomial> polys)
{
  return measure(std::span<const Polynomial>(polys.begin(), polys.size()));
}

inline BigInt
binomial(unsigned n, unsigned k)
{
  if (k > n) {
    return 0;
  }
  k = std::min(k, n - k);
  BigInt out = 1;
  for (unsigned i = 1; i <= k; ++i) {
    out *= n - k + i;
    out /= i;
  }
  return out;
}

// Monomials of degree <= max_degree in nvars commuting variables, counted with
// repetition: C(nvars + max_degree, max_degree).
inline BigInt
attack_dimension(unsigned nvars, unsigned max_degree)
{
  return binomial(nvars + max_degree, max_degree);
}

// Both readings of the linearization dimension side by side. The homogeneous
// count C(nvars + max_degree - 1, max_degree) is the number of monomials of
// degree exactly max_degree; for (31, 27) it is C(57, 27) = C(57, 30).
struct AttackDimensionReport
{
  unsigned nvars = 0;
  unsigned max_degree = 0;
  BigInt degree_at_most;
  BigInt degree_exactly;

  bool readings_differ() const { return degree_at_most != degree_exactly; }
};

inline AttackDimensionReport
attack_dimension_report(unsigned nvars, unsigned max_degree)
{
  AttackDimensionReport r;
  r.nvars = nvars;
  r.max_degree = max_degree;
  r.degree_at_most = attack_dimension(nvars, max_degree);
  r.degree_exactly = nvars == 0 ? BigInt(max_degree == 0 ? 1 : 0) : binomial(nvars + max_degree - 1, max_degree);
  return r;
}

// floor(log2(x)) for x >= 1.
inline unsigned
floor_log2(const BigInt& x)
{
  return x <= 0 ? 0 : static_cast<unsigned>(boost::multiprecision::msb(x));
}

// Rendering: aligned "key   value" lines, or key=value records.
using ReportFields = std::vector<std::pair<std::string, std::string>>;

inline std::string
render_aligned(const ReportFields& fields)
{
  std::size_t width = 0;
  for (const auto& [k, v] : fields) {
    width = std::max(width, k.size());
  }
  std::ostringstream out;
  for (const auto& [k, v] : fields) {
    out << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
  }
  return out.str();
}

inline std::string
render_records(const ReportFields& fields)
{
  std::string out;
  for (const auto& [k, v] : fields) {
    out += k + "=" + v + "\n";
  }
  return out;
}

inline ReportFields
fields_of(const SizeReport& r, const std::string& prefix)
{
  std::ostringstream kb;
  kb << std::fixed << std::setprecision(3) << r.kilobytes;
  return { { prefix + "variable_occurrences", std::to_string(r.variable_occurrences) },
           { prefix + "monomials", std::to_string(r.monomial_count) },
           { prefix + "bits", std::to_string(r.bits) },
           { prefix + "kilobytes", kb.str() } };
}

inline ReportFields
fields_of(const AttackDimensionReport& r)
{
  return { { "attack_nvars", std::to_string(r.nvars) },
           { "attack_max_degree", std::to_string(r.max_degree) },
           { "attack_dim_degree_at_most", r.degree_at_most.str() },
           { "attack_dim_degree_at_most_log2", std::to_string(floor_log2(r.degree_at_most)) },
           { "attack_dim_degree_exactly", r.degree_exactly.str() },
           { "attack_dim_degree_exactly_log2", std::to_string(floor_log2(r.degree_exactly)) },
           { "attack_readings_differ", r.readings_differ() ? "yes" : "no" } };
}

} // namespace bass
