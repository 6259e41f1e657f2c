// kllab: command-line front end for the KL / inverse KL / parabolic tables,
// the monotonicity scans and the identity suite.

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "kllab/error.hpp"
#include "kllab/io.hpp"
#include "kllab/verify.hpp"

namespace {

using namespace kllab;
using ordered_json = nlohmann::ordered_json;

constexpr int kUsage = 2;
constexpr int kFailure = 1;

// Bad flag values found after CLI11 parsing; mapped to status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string group;
  std::string parabolic;
  std::optional<int> cap;
  std::string flavor = "antispherical";
  std::string format = "text";
  std::string out;
  int threads = 1;
  std::string name;
  std::optional<bool> expect_violations;
  std::string element;
  bool mu = false;
  bool inverse = false;
};

// Everything validated from Options before computation starts.
struct Run {
  CoxeterMatrix matrix;
  std::optional<int> cap;
  io::Format format = io::Format::text;
  int threads = 1;
  std::size_t max_elements = 2'000'000;
};

template <typename F>
auto as_usage(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw UsageError(e.what());
  }
}

std::size_t max_elements_from_env() {
  const char* raw = std::getenv("KLLAB_MAX_ELEMENTS");
  if (raw == nullptr || *raw == '\0') return 2'000'000;
  const std::string text(raw);
  std::size_t used = 0;
  unsigned long long value = 0;
  try {
    value = std::stoull(text, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || value == 0) {
    throw UsageError("KLLAB_MAX_ELEMENTS must be a positive integer, got '" + text + "'");
  }
  return static_cast<std::size_t>(value);
}

Run prepare(const Options& opt) {
  Run run{as_usage([&] { return parse_coxeter_spec(opt.group); })};
  run.format = as_usage([&] { return io::parse_format(opt.format); });
  if (opt.cap && *opt.cap < 0) throw UsageError("--cap must be non-negative");
  if (!opt.cap && !run.matrix.is_finite()) {
    throw UsageError("--cap is required for the infinite group " + opt.group);
  }
  if (opt.threads < 1) throw UsageError("--threads must be at least 1");
  run.cap = opt.cap;
  run.threads = opt.threads;
  run.max_elements = max_elements_from_env();
  return run;
}

GroupTable enumerate(const Run& run) {
  return GroupTable::enumerate(run.matrix, run.cap, EnumerateOptions{run.max_elements});
}

// --element restricts output to one column x.
std::vector<ElementId> columns(const GroupTable& g, const std::string& element, std::vector<ElementId> all) {
  if (element.empty()) return all;
  const Word w = as_usage([&] { return parse_word(element); });
  for (Gen s : w) {
    if (s >= g.rank()) throw UsageError("element " + element + " uses a generator outside 1.." + std::to_string(g.rank()));
  }
  const ElementId x = g.find(w);
  for (ElementId y : all) {
    if (y == x) return {x};
  }
  throw UsageError("element " + element + " is not a minimal coset representative");
}

void emit(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream file(opt.out, std::ios::binary);
  if (!file) throw Error("cannot open output file " + opt.out);
  file << text;
  if (!file.flush()) throw Error("failed writing " + opt.out);
}

// ---------------------------------------------------------------------------
// Subcommands. Each returns the exit status.

int cmd_info(const Options& opt) {
  const Run run = prepare(opt);
  const GroupTable g = enumerate(run);
  std::vector<std::size_t> layers;
  for (int n = 0; n <= g.max_length(); ++n) layers.push_back(g.layer(n).size());
  std::ostringstream os;
  switch (run.format) {
    case io::Format::text:
      if (g.is_complete()) {
        os << "order " << g.size() << ", longest length " << g.max_length() << '\n';
      } else {
        os << "elements " << g.size() << " up to length " << g.max_length() << " (cap " << *g.cap() << ")\n";
      }
      break;
    case io::Format::csv:
      os << "length,elements\n";
      for (std::size_t n = 0; n < layers.size(); ++n) os << n << ',' << layers[n] << '\n';
      break;
    case io::Format::json: {
      ordered_json j;
      j["group"] = opt.group;
      j["rank"] = g.rank();
      j["cap"] = run.cap ? ordered_json(*run.cap) : ordered_json(nullptr);
      j["complete"] = g.is_complete();
      j["elements"] = g.size();
      j["longest_length"] = g.max_length();
      j["layer_sizes"] = layers;
      os << j.dump(2) << '\n';
      break;
    }
  }
  emit(opt, os.str());
  return 0;
}

int cmd_kl(const Options& opt, bool inverse) {
  const Run run = prepare(opt);
  const GroupTable g = enumerate(run);
  const KLTable kl(g, run.threads);
  io::TableInfo info{opt.mu ? "mu" : (inverse ? "invkl" : "kl"), opt.group, run.cap, std::nullopt, std::nullopt};
  std::vector<io::PolyRow> rows;
  for (ElementId x : columns(g, opt.element, g.all())) {
    for (ElementId y : g.lower_interval(x)) {
      if (opt.mu) {
        if (y == x) continue;
        const auto m = kl.mu(y, x);
        if (m != 0) rows.push_back({y, x, LaurentPoly(m)});
      } else {
        rows.push_back({y, x, inverse ? kl.inverse_kl_poly(y, x) : kl.kl_poly(y, x)});
      }
    }
  }
  emit(opt, io::render_poly_table(g, info, rows, run.format));
  return 0;
}

int cmd_parabolic(const Options& opt) {
  const Run run = prepare(opt);
  const GenSet I = as_usage([&] { return parse_generator_set(opt.parabolic, run.matrix.rank()); });
  const Flavor flavor = as_usage([&] { return parse_flavor(opt.flavor); });
  const GroupTable g = enumerate(run);
  const BarInvolution bar(g);
  const ParabolicContext ctx(g, I, flavor);
  const ParabolicKLTable table(ctx, bar, run.threads);
  io::TableInfo info{opt.inverse ? "parabolic_invkl" : "parabolic_kl", opt.group, run.cap, flavor, I};
  std::vector<io::PolyRow> rows;
  for (ElementId x : columns(g, opt.element, ctx.reps())) {
    for (ElementId y : ctx.lower_interval(x)) {
      rows.push_back({y, x, opt.inverse ? table.inverse_kl_poly(y, x) : table.kl_poly(y, x)});
    }
  }
  emit(opt, io::render_poly_table(g, info, rows, run.format));
  return 0;
}

int cmd_rouquier(const Options& opt) {
  const Run run = prepare(opt);
  const GroupTable g = enumerate(run);
  const KLTable kl(g, run.threads);
  std::vector<RouquierTable> tables;
  for (ElementId x : columns(g, opt.element, g.all())) tables.push_back(rouquier_multiplicities(kl, x));
  emit(opt, io::render_rouquier(g, opt.group, tables, run.format));
  return 0;
}

SuiteConfig suite_config(const Options& opt, const Run& run, std::vector<GenSet> parabolics) {
  SuiteConfig config;
  config.group = opt.group;
  config.parabolics = std::move(parabolics);
  config.cap = run.cap;
  config.threads = run.threads;
  config.max_elements = run.max_elements;
  return config;
}

int cmd_scan(const Options& opt) {
  const Run run = prepare(opt);
  const GenSet I = as_usage([&] { return parse_generator_set(opt.parabolic, run.matrix.rank()); });
  const bool expect = opt.expect_violations.value_or(opt.name == "spherical");
  SuiteReport report;
  report.checks.push_back(run_named_scan(suite_config(opt, run, {I}), opt.name, expect));
  emit(opt, io::render_report(report, run.format));
  return report.passed() ? 0 : kFailure;
}

// "" -> {∅} plus every singleton; "all" -> every subset; otherwise a
// ';'-separated list of comma-separated sets ("" inside the list is ∅).
std::vector<GenSet> suite_parabolics(const std::string& text, int rank) {
  std::vector<GenSet> out{0};
  if (text.empty()) {
    for (int s = 0; s < rank; ++s) out.push_back(GenSet{1} << s);
    return out;
  }
  if (text == "all") {
    if (rank > 16) throw UsageError("--parabolic all is limited to rank 16");
    out.clear();
    // Ordered by size, then by the sorted generator list.
    std::vector<GenSet> subsets;
    for (GenSet I = 0; I < (GenSet{1} << rank); ++I) subsets.push_back(I);
    std::stable_sort(subsets.begin(), subsets.end(), [](GenSet a, GenSet b) {
      if (std::popcount(a) != std::popcount(b)) return std::popcount(a) < std::popcount(b);
      return generator_list(a) < generator_list(b);
    });
    return subsets;
  }
  out.clear();
  std::size_t start = 0;
  while (true) {
    const std::size_t end = text.find(';', start);
    const std::string part = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
    const GenSet I = as_usage([&] { return parse_generator_set(part, rank); });
    if (std::find(out.begin(), out.end(), I) == out.end()) out.push_back(I);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return out;
}

int cmd_suite(const Options& opt) {
  const Run run = prepare(opt);
  SuiteConfig config = suite_config(opt, run, suite_parabolics(opt.parabolic, run.matrix.rank()));
  config.spherical_expect_violations = opt.expect_violations.value_or(true);
  const SuiteReport report = run_suite(config);
  emit(opt, io::render_report(report, run.format));
  return report.passed() ? 0 : kFailure;
}

void print_error(const std::string& kind, const std::string& message) {
  ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  std::cerr << j.dump() << '\n';
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const OverflowError*>(&e)) return "overflow";
  if (dynamic_cast<const OutOfRangeError*>(&e)) return "out_of_range";
  if (dynamic_cast<const ParseError*>(&e)) return "parse";
  if (dynamic_cast<const ResourceLimitError*>(&e)) return "resource_limit";
  if (dynamic_cast<const FlavorMismatchError*>(&e)) return "flavor_mismatch";
  if (dynamic_cast<const InternalError*>(&e)) return "internal";
  return "error";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kazhdan-Lusztig, inverse Kazhdan-Lusztig and parabolic polynomials for Coxeter groups"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--group", opt.group, "A3, B3, D4, F4, G2, H3, H4, I2(m), I2(inf), Aff-A1, Aff-A2 or file:PATH")
        ->required();
    sub->add_option("--cap", opt.cap, "Only elements of length <= cap (required for infinite groups)");
    sub->add_option("--format", opt.format, "text, csv or json")->capture_default_str();
    sub->add_option("--out", opt.out, "Write output to this file instead of stdout");
    sub->add_option("--threads", opt.threads, "Worker threads")->capture_default_str();
  };

  auto* info = app.add_subcommand("info", "Group order and longest length");
  common(info);

  auto* kl = app.add_subcommand("kl", "KL polynomials h_{y,x}");
  common(kl);
  kl->add_flag("--mu", opt.mu, "Nonzero mu(y,x) for y < x instead of polynomials");
  kl->add_option("--element", opt.element, "Only the column x (comma-separated word)");

  auto* invkl = app.add_subcommand("invkl", "Inverse KL polynomials h^{y,x}");
  common(invkl);
  invkl->add_option("--element", opt.element, "Only the column x (comma-separated word)");

  auto* parabolic = app.add_subcommand("parabolic", "Parabolic KL polynomials m/n (or m^/n^ with --inverse)");
  common(parabolic);
  parabolic->add_option("--parabolic", opt.parabolic, "I as comma-separated generator indices");
  parabolic->add_option("--flavor", opt.flavor, "spherical or antispherical")->capture_default_str();
  parabolic->add_flag("--inverse", opt.inverse, "Inverse polynomials m^{y,x} / n^{y,x}");
  parabolic->add_option("--element", opt.element, "Only the column x (comma-separated word)");

  auto* rouquier = app.add_subcommand("rouquier", "Graded multiplicities m^i_{y,Delta_x}");
  common(rouquier);
  rouquier->add_option("--element", opt.element, "Only Delta_x for this x");

  auto* scan = app.add_subcommand("scan", "Run one monotonicity scan");
  common(scan);
  scan->add_option("--name", opt.name, "inverse, classical, antispherical or spherical")
      ->required()
      ->check(CLI::IsMember({"inverse", "classical", "antispherical", "spherical"}));
  scan->add_option("--parabolic", opt.parabolic, "I for the parabolic scans");
  scan->add_flag("--expect-violations,!--no-expect-violations", opt.expect_violations,
                 "Violations are the expected outcome (default: on for spherical)");

  auto* suite = app.add_subcommand("suite", "Identity checks and every scan");
  common(suite);
  suite->add_option("--parabolic", opt.parabolic,
                    "';'-separated list of subsets, or 'all' (default: empty set and every singleton)");
  suite->add_flag("--expect-violations,!--no-expect-violations", opt.expect_violations,
                  "Spherical violations are expected (default on)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    // --help and friends
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return kUsage;
  }

  try {
    if (*info) return cmd_info(opt);
    if (*kl) return cmd_kl(opt, false);
    if (*invkl) return cmd_kl(opt, true);
    if (*parabolic) return cmd_parabolic(opt);
    if (*rouquier) return cmd_rouquier(opt);
    if (*scan) return cmd_scan(opt);
    if (*suite) return cmd_suite(opt);
  } catch (const UsageError& e) {
    print_error("usage", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    print_error(error_kind(e), e.what());
    return kFailure;
  }
  return kUsage;
}
