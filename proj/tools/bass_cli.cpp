// bass: keygen / sign / verify / bench / analyze.
//
// Exit codes: 0 success (verify: accepted), 1 verify rejected, 2 any error.

#include "bass/bass.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

namespace {

constexpr int kExitReject = 1;
constexpr int kExitError = 2;

std::string
read_file(const std::string& path)
{
  if (path == "-") {
    return { std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>() };
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw bass::Error("cannot read '" + path + "'");
  }
  return { std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>() };
}

void
write_file(const std::string& path, const std::string& content)
{
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.close();
  if (!out) {
    throw bass::Error("cannot write '" + path + "'");
  }
}

bass::Rng
make_rng(const std::optional<std::uint64_t>& seed)
{
  return seed ? bass::Rng::seeded(*seed) : bass::Rng::system();
}

std::string
fixed(double v, int digits)
{
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::span<const std::uint8_t>
as_bytes(const std::string& s)
{
  return { reinterpret_cast<const std::uint8_t*>(s.data()), s.size() };
}

struct Options
{
  std::optional<std::uint64_t> seed;
  std::string params = "default";
  std::string output;

  std::string key, pub, priv, sig, message;
  std::optional<std::uint64_t> trials;
  std::optional<double> threshold;
  unsigned threads = 1;

  unsigned runs = 5;
  unsigned nvars = 31;
  unsigned degree = 27;
  std::string format = "text";
};

int
cmd_keygen(const Options& o)
{
  const bass::SchemeParams params = bass::parse_params(o.params);
  auto rng = make_rng(o.seed);
  const bass::KeyPair kp = bass::keygen(params, rng);
  write_file(o.output + ".pub", bass::to_text(kp.pub));
  write_file(o.output + ".priv", bass::to_text(kp.priv));
  std::cout << "params " << bass::to_string(params) << "\n"
            << "wrote " << o.output << ".pub " << o.output << ".priv\n";
  return 0;
}

int
cmd_sign(const Options& o)
{
  const bass::PrivateKey priv = bass::parse_private_key(read_file(o.key));
  const std::string message = read_file(o.message);
  auto rng = make_rng(o.seed);
  const bass::Signature sig = bass::sign(priv, as_bytes(message), rng);
  write_file(o.output.empty() ? "-" : o.output, bass::to_text(sig));
  return 0;
}

int
cmd_verify(const Options& o)
{
  const bass::PublicKey pub = bass::parse_public_key(read_file(o.pub));
  const bass::Signature sig = bass::parse_signature(read_file(o.sig));
  const std::string message = read_file(o.message);

  bass::SchemeParams params = pub.params;
  if (o.trials) {
    params.trials = *o.trials;
  }
  if (o.threshold) {
    params.threshold = *o.threshold;
  }
  auto rng = make_rng(o.seed);
  const bass::VerifyReport rep = bass::verify(pub, as_bytes(message), sig, params, rng, o.threads);

  std::cout << bass::render_aligned({
    { "p_R", fixed(rep.p_r(), 4) },
    { "p_S", fixed(rep.p_s(), 4) },
    { "difference", fixed(rep.difference(), 4) },
    { "threshold", fixed(rep.threshold, 4) },
    { "trials", std::to_string(rep.trials) },
    { "decision", rep.accepted ? "accept" : "reject" },
  });
  return rep.accepted ? 0 : kExitReject;
}

int
cmd_bench(const Options& o)
{
  const bass::SchemeParams base = bass::parse_params(o.params);
  auto rng = make_rng(o.seed);
  std::cout << "params " << bass::to_string(base) << "  runs " << o.runs << "\n";
  std::cout << " t  b  d  r  verify_s  sig_kb  pub_kb  priv_kb  peak_mb~  accepted\n";
  for (const bass::BenchRow& row : bass::kBenchRows) {
    const bass::BenchRecord rec = bass::run_bench_row(base, row, o.runs, rng);
    std::printf("%2u %2u %2u %2u  %8.4f %7.2f %7.2f %8.2f %9.1f  %u/%u\n",
                row.t, row.b, row.d, row.r, rec.verify_seconds, rec.signature_kb, rec.public_key_kb,
                rec.private_key_kb, rec.peak_memory_mb, rec.accepted, rec.runs);
    std::fflush(stdout);
  }
  return 0;
}

int
cmd_analyze(const Options& o)
{
  bass::ReportFields fields;
  if (!o.pub.empty()) {
    const auto f = bass::fields_of(bass::measure(bass::parse_public_key(read_file(o.pub))), "public_key_");
    fields.insert(fields.end(), f.begin(), f.end());
  }
  if (!o.priv.empty()) {
    const auto f = bass::fields_of(bass::measure(bass::parse_private_key(read_file(o.priv))), "private_key_");
    fields.insert(fields.end(), f.begin(), f.end());
  }
  if (!o.sig.empty()) {
    const auto f = bass::fields_of(bass::measure(bass::parse_signature(read_file(o.sig))), "signature_");
    fields.insert(fields.end(), f.begin(), f.end());
  }
  const auto f = bass::fields_of(bass::attack_dimension_report(o.nvars, o.degree));
  fields.insert(fields.end(), f.begin(), f.end());
  std::cout << (o.format == "kv" ? bass::render_records(fields) : bass::render_aligned(fields));
  return 0;
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "Sparse polynomial signatures over the Boolean cube" };
  app.require_subcommand(1);
  Options o;

  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Deterministic RNG seed (default: system entropy)");
  };
  auto add_params = [&](CLI::App* sub) {
    sub->add_option("--params", o.params, "Profile and overrides, e.g. \"test\" or \"n=8,trials=5000\"")
      ->capture_default_str();
  };

  auto* keygen = app.add_subcommand("keygen", "Generate a key pair into PREFIX.pub and PREFIX.priv");
  add_seed(keygen);
  add_params(keygen);
  keygen->add_option("-o,--output", o.output, "Output prefix")->required();

  auto* sign = app.add_subcommand("sign", "Sign a message");
  add_seed(sign);
  sign->add_option("--key", o.key, "Private key file")->required();
  sign->add_option("--message", o.message, "Message file, '-' for stdin")->required();
  sign->add_option("-o,--output", o.output, "Signature file (default stdout)");

  auto* verify = app.add_subcommand("verify", "Verify a signature; exit 0 accept, 1 reject, 2 error");
  add_seed(verify);
  verify->add_option("--pub", o.pub, "Public key file")->required();
  verify->add_option("--message", o.message, "Message file, '-' for stdin")->required();
  verify->add_option("--sig", o.sig, "Signature file")->required();
  verify->add_option("--trials", o.trials, "Monte Carlo trials (default from key)")->check(CLI::PositiveNumber);
  verify->add_option("--threshold", o.threshold, "Accepted |p_R - p_S| (default from key)")
    ->check(CLI::Range(0.0, 1.0));
  verify->add_option("--threads", o.threads, "Evaluation threads")->check(CLI::Range(1U, 256U));

  auto* bench = app.add_subcommand("bench", "Time keygen/sign/verify over the standard parameter rows");
  add_seed(bench);
  add_params(bench);
  bench->add_option("--runs", o.runs, "Runs per row (median timing)")->check(CLI::Range(5U, 100000U))->capture_default_str();

  auto* analyze = app.add_subcommand("analyze", "Size report of key/signature files and attack dimension");
  analyze->add_option("--pub", o.pub, "Public key file");
  analyze->add_option("--priv", o.priv, "Private key file");
  analyze->add_option("--sig", o.sig, "Signature file");
  analyze->add_option("--nvars", o.nvars, "Variables for the attack dimension")->capture_default_str();
  analyze->add_option("--degree", o.degree, "Degree bound for the attack dimension")->capture_default_str();
  analyze->add_option("--format", o.format, "text or kv")
    ->check(CLI::IsMember({ "text", "kv" }))
    ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (keygen->parsed()) {
      return cmd_keygen(o);
    }
    if (sign->parsed()) {
      return cmd_sign(o);
    }
    if (verify->parsed()) {
      return cmd_verify(o);
    }
    if (bench->parsed()) {
      return cmd_bench(o);
    }
    return cmd_analyze(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}
