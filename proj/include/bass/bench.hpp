#pragma once

#include "bass/analysis.hpp"
#include "bass/params.hpp"
#include "bass/random.hpp"
#include "bass/scheme.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <string>
#include <vector>

namespace bass {

inline SizeReport
measure(const PublicKey& pub)
{
  return measure({ pub.p[0], pub.p[1], pub.p[2], pub.phi_p[0], pub.phi_p[1], pub.phi_p[2] });
}

inline SizeReport
measure(const PrivateKey& priv)
{
  return measure(priv.phi.images());
}

inline SizeReport
measure(const Signature& sig)
{
  return measure({ sig.sig });
}

struct BenchRow
{
  unsigned t, b, d, r;
};

// Default (t, b, d, r) rows for the benchmark, in table order.
inline constexpr std::array<BenchRow, 6> kBenchRows{ {
  { 3, 3, 1, 1 },
  { 3, 3, 2, 1 },
  { 3, 4, 1, 1 },
  { 4, 3, 1, 1 },
  { 5, 3, 1, 1 },
  { 3, 3, 1, 2 },
} };

struct BenchRecord
{
  BenchRow row{};
  double verify_seconds = 0;  // median wall clock
  double signature_kb = 0;    // means over runs
  double public_key_kb = 0;
  double private_key_kb = 0;
  double peak_memory_mb = 0;  // process high-water mark, approximate
  unsigned runs = 0;
  unsigned accepted = 0;
};

// Peak resident set of this process in MB (Linux reports ru_maxrss in KB).
inline double
peak_memory_mb()
{
  rusage usage{};
  if (getrusage(RUSAGE_SELF, &usage) != 0) {
    return 0;
  }
  return static_cast<double>(usage.ru_maxrss) / 1024.0;
}

// keygen + sign + verify `runs` times on fresh keys and messages.
template<RandomSource G>
BenchRecord
run_bench_row(SchemeParams base, BenchRow row, unsigned runs, G& rng)
{
  base.t = row.t;
  base.b = row.b;
  base.d = row.d;
  base.r = row.r;
  base.validate();
  runs = std::max(1U, runs);

  BenchRecord rec;
  rec.row = row;
  rec.runs = runs;
  std::vector<double> times;
  for (unsigned i = 0; i < runs; ++i) {
    const KeyPair kp = keygen(base, rng);
    const std::string message = "bench message " + std::to_string(i);
    const Signature sig = sign(kp.priv, message, rng);

    const auto start = std::chrono::steady_clock::now();
    const VerifyReport report = verify(kp.pub, message, sig, base, rng);
    const auto stop = std::chrono::steady_clock::now();
    times.push_back(std::chrono::duration<double>(stop - start).count());

    rec.accepted += report.accepted ? 1 : 0;
    rec.signature_kb += measure(sig).kilobytes;
    rec.public_key_kb += measure(kp.pub).kilobytes;
    rec.private_key_kb += measure(kp.priv).kilobytes;
  }
  std::sort(times.begin(), times.end());
  rec.verify_seconds = times.size() % 2 == 1 ? times[times.size() / 2]
                                             : 0.5 * (times[times.size() / 2 - 1] + times[times.size() / 2]);
  rec.signature_kb /= runs;
  rec.public_key_kb /= runs;
  rec.private_key_kb /= runs;
  rec.peak_memory_mb = peak_memory_mb();
  return rec;
}

} // namespace bass
