#pragma once

#include "bass/errors.hpp"
#include "bass/polynomial.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <system_error>

namespace bass {

struct SchemeParams
{
  unsigned n = 31;          // variables in the private algebra; signatures use n+1
  unsigned t = 3;           // terms per public polynomial
  unsigned b = 3;           // max monomial degree in public polynomials
  unsigned d = 2;           // max degree of the seed monomial in indicator sampling
  unsigned r = 1;           // multiplication rounds in indicator sampling
  std::uint64_t trials = 3000;
  double threshold = 0.03;  // accepted |p_R - p_S|

  // Suggested production parameters.
  static constexpr SchemeParams defaults() { return {}; }

  // Small enough for exhaustive counting over all 2^(n+1) tuples.
  static constexpr SchemeParams test_profile()
  {
    SchemeParams p;
    p.n = 8;
    return p;
  }

  void validate() const
  {
    auto fail = [](const std::string& why) { throw InvalidParams("invalid parameters: " + why); };
    if (n < 4) {
      fail("n must be at least 4");
    }
    if (n + 1 > kMaxVars) {
      fail("n must be at most 63");
    }
    if (b < 1 || b > n) {
      fail("b must lie in 1..n");
    }
    if (d < 1 || d > 2) {
      fail("d must be 1 or 2");
    }
    if (t < 1) {
      fail("t must be at least 1");
    }
    if (r < 1) {
      fail("r must be at least 1");
    }
    if (trials < 1) {
      fail("trials must be at least 1");
    }
    if (!(threshold > 0.0 && threshold < 1.0)) {
      fail("threshold must lie in (0, 1)");
    }
  }

  // Largest admissible |count_R - count_S| for `trial_count` samples: floor(threshold * N).
  // The 1e-9 slack absorbs binary rounding of products such as 0.03 * 3000.
  std::uint64_t allowed_count_difference(std::uint64_t trial_count) const
  {
    return static_cast<std::uint64_t>(std::floor(threshold * static_cast<double>(trial_count) + 1e-9));
  }

  bool operator==(const SchemeParams&) const = default;
};

// "n=31 t=3 b=3 d=2 r=1 trials=3000 threshold=0.03"
inline std::string
to_string(const SchemeParams& p)
{
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), p.threshold);
  return "n=" + std::to_string(p.n) + " t=" + std::to_string(p.t) + " b=" + std::to_string(p.b) +
         " d=" + std::to_string(p.d) + " r=" + std::to_string(p.r) + " trials=" + std::to_string(p.trials) +
         " threshold=" + std::string(buf.data(), res.ptr);
}

// Applies `key=value` overrides separated by spaces or commas onto `base`.
// A leading bare word selects a named profile: "default" or "test".
inline SchemeParams
parse_params(std::string_view text, SchemeParams base = SchemeParams::defaults())
{
  SchemeParams p = base;
  bool first = true;
  while (!text.empty()) {
    auto sep = text.find_first_of(" ,\t\n");
    std::string_view tok = text.substr(0, sep);
    text = sep == std::string_view::npos ? std::string_view{} : text.substr(sep + 1);
    if (tok.empty()) {
      continue;
    }
    auto eq = tok.find('=');
    if (eq == std::string_view::npos) {
      if (!first) {
        throw InvalidParams("profile name must come first: '" + std::string(tok) + "'");
      }
      if (tok == "default") {
        p = SchemeParams::defaults();
      } else if (tok == "test") {
        p = SchemeParams::test_profile();
      } else {
        throw InvalidParams("unknown profile '" + std::string(tok) + "'");
      }
      first = false;
      continue;
    }
    first = false;
    std::string_view key = tok.substr(0, eq);
    std::string_view value = tok.substr(eq + 1);
    auto as_unsigned = [&]() {
      try {
        return detail::parse_int<unsigned>(value, key);
      } catch (const ParseError& e) {
        throw InvalidParams(e.what());
      }
    };
    if (key == "n") {
      p.n = as_unsigned();
    } else if (key == "t") {
      p.t = as_unsigned();
    } else if (key == "b") {
      p.b = as_unsigned();
    } else if (key == "d") {
      p.d = as_unsigned();
    } else if (key == "r") {
      p.r = as_unsigned();
    } else if (key == "trials") {
      try {
        p.trials = detail::parse_int<std::uint64_t>(value, key);
      } catch (const ParseError& e) {
        throw InvalidParams(e.what());
      }
    } else if (key == "threshold") {
      double v = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw InvalidParams("bad threshold '" + std::string(value) + "'");
      }
      p.threshold = v;
    } else {
      throw InvalidParams("unknown parameter '" + std::string(key) + "'");
    }
  }
  p.validate();
  return p;
}

} // namespace bass
