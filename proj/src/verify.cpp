#include "kllab/verify.hpp"

#include <functional>

#include "kllab/error.hpp"
#include "kllab/parallel.hpp"

namespace kllab {

namespace {

const LaurentPoly& lookup(const Expansion& e, ElementId key) {
  static const LaurentPoly zero;
  auto it = e.find(key);
  return it == e.end() ? zero : it->second;
}

using IntervalFn = std::function<std::vector<ElementId>(ElementId)>;
// (z, y, x) -> (lhs, rhs)
using SidesFn = std::function<std::pair<LaurentPoly, LaurentPoly>(ElementId, ElementId, ElementId)>;

// Walks every z <= y <= x with x over `tops`; workers own one x each and the
// per-x lists are concatenated in `tops` order.
ScanResult scan_triples(const std::vector<ElementId>& tops, const IntervalFn& interval, const SidesFn& sides,
                        int threads) {
  std::vector<std::vector<Violation>> per_x(tops.size());
  std::vector<std::uint64_t> counts(tops.size(), 0);
  parallel_for(tops.size(), threads, [&](std::size_t i) {
    const ElementId x = tops[i];
    for (ElementId y : interval(x)) {
      for (ElementId z : interval(y)) {
        ++counts[i];
        auto [lhs, rhs] = sides(z, y, x);
        if (auto neg = first_negative_exponent(rhs - lhs)) {
          per_x[i].push_back(Violation{z, y, x, std::move(lhs), std::move(rhs), *neg});
        }
      }
    }
  });
  ScanResult out;
  for (std::size_t i = 0; i < tops.size(); ++i) {
    out.triples_checked += counts[i];
    for (auto& v : per_x[i]) out.violations.push_back(std::move(v));
  }
  return out;
}

ScanResult scan_parabolic(const ParabolicKLTable& table, int threads) {
  const ParabolicContext& ctx = table.context();
  const GroupTable& group = ctx.group();
  return scan_triples(
      ctx.reps(), [&](ElementId x) { return ctx.lower_interval(x); },
      [&](ElementId z, ElementId y, ElementId x) {
        return std::make_pair(table.inverse_kl_poly(z, y),
                              table.inverse_kl_poly(z, x).shifted(group.length(y) - group.length(x)));
      },
      threads);
}

}  // namespace

ScanResult scan_monotonicity_inverse(const KLTable& table, int threads) {
  const GroupTable& group = table.group();
  return scan_triples(
      group.all(), [&](ElementId x) { return group.lower_interval(x); },
      [&](ElementId z, ElementId y, ElementId x) {
        return std::make_pair(lookup(table.inverse_column(y), z),
                              lookup(table.inverse_column(x), z).shifted(group.length(y) - group.length(x)));
      },
      threads);
}

ScanResult scan_monotonicity_classical(const KLTable& table, int threads) {
  const GroupTable& group = table.group();
  return scan_triples(
      group.all(), [&](ElementId x) { return group.lower_interval(x); },
      [&](ElementId z, ElementId y, ElementId x) {
        const Expansion& bx = table.kl_basis_element(x).terms();
        return std::make_pair(lookup(bx, y), lookup(bx, z).shifted(group.length(z) - group.length(y)));
      },
      threads);
}

ScanResult scan_monotonicity_antispherical(const ParabolicKLTable& table, int threads) {
  if (table.flavor() != Flavor::antispherical) {
    throw FlavorMismatchError("antispherical monotonicity scan given a spherical table");
  }
  return scan_parabolic(table, threads);
}

ScanResult scan_monotonicity_spherical(const ParabolicKLTable& table, int threads) {
  if (table.flavor() != Flavor::spherical) {
    throw FlavorMismatchError("spherical monotonicity scan given an antispherical table");
  }
  return scan_parabolic(table, threads);
}

std::optional<std::vector<std::array<ElementId, 3>>> mandated_spherical_failures(const ParabolicContext& ctx) {
  const GroupTable& group = ctx.group();
  const int n = group.rank();
  if (n < 2 || !group.matrix().is_type_a() || !group.is_complete()) return std::nullopt;
  const GenSet all = (GenSet{1} << n) - 1;
  const GenSet I = ctx.parabolic();
  if (I != (all & ~GenSet{1}) && I != (all & ~(GenSet{1} << (n - 1)))) return std::nullopt;
  const auto& reps = ctx.reps();
  for (std::size_t i = 0; i + 1 < reps.size(); ++i) {
    if (!group.bruhat_leq(reps[i], reps[i + 1])) {
      throw InternalError("^I W is expected to be a chain for W = A_n, W_I = A_{n-1}");
    }
  }
  std::vector<std::array<ElementId, 3>> out;
  for (std::size_t i = 0; i + 2 < reps.size(); ++i) out.push_back({reps[i], reps[i + 1], reps[i + 2]});
  return out;
}

// ---------------------------------------------------------------------------
// Rouquier shadow

RouquierTable rouquier_multiplicities(const KLTable& table, ElementId x) {
  RouquierTable rt{x, {}};
  for (const auto& [y, h] : table.inverse_column(x)) {
    for (const auto& t : h.terms()) rt.mult[{y, t.exponent}] = t.coeff;
  }
  if (!rouquier_support_ok(table.group(), rt)) {
    throw InternalError("Rouquier multiplicities violate parity support for x = " + table.group().render(x));
  }
  return rt;
}

bool rouquier_support_ok(const GroupTable& group, const RouquierTable& rt) {
  const int lx = group.length(rt.x);
  for (const auto& [key, m] : rt.mult) {
    const auto& [y, i] = key;
    if (m < 0) return false;
    if (m == 0) continue;
    if (((i - (lx - group.length(y))) & 1) != 0) return false;
    if (!group.bruhat_leq(y, rt.x)) return false;
  }
  return true;
}

HeckeElt rouquier_grothendieck_class(const KLTable& table, const RouquierTable& rt) {
  HeckeElt out;
  for (const auto& [key, m] : rt.mult) {
    const auto& [y, i] = key;
    out += LaurentPoly::monomial((i & 1) ? -m : m, i) * table.kl_basis_element(y);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Batch harness

bool SuiteReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

GroupTable build_group(const SuiteConfig& config) {
  const CoxeterMatrix matrix = parse_coxeter_spec(config.group);
  if (!config.cap && !matrix.is_finite()) {
    throw OutOfRangeError("group " + config.group + " is infinite; a length cap is required");
  }
  return GroupTable::enumerate(matrix, config.cap, EnumerateOptions{config.max_elements});
}

namespace {

Finding pair_finding(const GroupTable& g, ElementId y, ElementId x, std::string what) {
  return Finding{{{"y", g.render(y)}, {"x", g.render(x)}, {"detail", std::move(what)}}};
}

Finding violation_finding(const GroupTable& g, const Violation& v) {
  return Finding{{{"z", g.render(v.z)},
                  {"y", g.render(v.y)},
                  {"x", g.render(v.x)},
                  {"lhs", v.lhs.to_csv_string()},
                  {"rhs", v.rhs.to_csv_string()},
                  {"witness_exponent", std::to_string(v.witness_exponent)}}};
}

CheckResult base_result(const SuiteConfig& config, std::string name) {
  CheckResult r;
  r.check = std::move(name);
  r.group = config.group;
  r.cap = config.cap;
  return r;
}

// Runs `body` and converts any library error into a failed result.
template <typename Body>
CheckResult guarded(CheckResult r, Body&& body) {
  try {
    body(r);
    r.passed = r.missing.empty() && (r.expect_violations || r.violations.empty());
  } catch (const std::exception& e) {
    r.error = e.what();
    r.passed = false;
  }
  return r;
}

void fill_scan(CheckResult& r, const GroupTable& g, const ScanResult& scan) {
  r.pairs_checked = scan.triples_checked;
  for (const auto& v : scan.violations) r.violations.push_back(violation_finding(g, v));
}

void fill_spherical(CheckResult& r, const ParabolicContext& ctx, const ScanResult& scan) {
  const GroupTable& g = ctx.group();
  fill_scan(r, g, scan);
  if (!r.expect_violations) return;
  if (auto mandated = mandated_spherical_failures(ctx)) {
    for (const auto& [z, y, x] : *mandated) {
      bool found = false;
      for (const auto& v : scan.violations) found = found || (v.z == z && v.y == y && v.x == x);
      if (!found) r.missing.push_back(Finding{{{"z", g.render(z)}, {"y", g.render(y)}, {"x", g.render(x)}}});
    }
  }
}

std::vector<CheckResult> parabolic_identity_checks(const SuiteConfig& config, const KLTable& kl, GenSet I) {
  const GroupTable& g = kl.group();
  std::vector<CheckResult> out;
  for (Flavor flavor : {Flavor::spherical, Flavor::antispherical}) {
    const ParabolicContext ctx(g, I, flavor);
    std::optional<ParabolicKLTable> table;
    auto annotate = [&](CheckResult r) {
      r.parabolic = I;
      r.flavor = flavor;
      return r;
    };
    out.push_back(guarded(annotate(base_result(config, "parabolic_canonical_basis")), [&](CheckResult& r) {
      table.emplace(ctx, kl.bar(), config.threads);
      for (ElementId x : ctx.reps()) {
        ++r.pairs_checked;
        const ParabolicElt& c = table->canonical_basis(x);
        if (bar_parabolic(ctx, kl.bar(), c) != c) r.violations.push_back(pair_finding(g, x, x, "not bar-invariant"));
        for (const auto& [y, p] : c.terms()) {
          const bool ok = y == x ? p == LaurentPoly(1) : (p.in_v_poly_ring() && g.bruhat_leq(y, x));
          if (!ok) r.violations.push_back(pair_finding(g, y, x, "not unitriangular: " + p.to_csv_string()));
        }
      }
    }));
    out.push_back(guarded(annotate(base_result(config, "parabolic_inversion")), [&](CheckResult& r) {
      if (!table) throw InternalError("parabolic table unavailable");
      for (ElementId x : ctx.reps()) {
        for (ElementId y : ctx.lower_interval(x)) {
          ++r.pairs_checked;
          if (!table->check_inversion_identity(y, x)) r.violations.push_back(pair_finding(g, y, x, "sum != [y = x]"));
        }
      }
    }));
    if (flavor == Flavor::antispherical) {
      out.push_back(guarded(annotate(base_result(config, "soergel_identification")), [&](CheckResult& r) {
        if (!table) throw InternalError("parabolic table unavailable");
        const std::size_t n = ctx.reps().size();
        r.pairs_checked = n * (n + 1) / 2;
        for (const auto& m : check_soergel_identification(*table, kl)) {
          r.violations.push_back(Finding{{{"z", g.render(m.z)},
                                          {"x", g.render(m.x)},
                                          {"n_inverse", m.antispherical.to_csv_string()},
                                          {"h_inverse", m.classical.to_csv_string()}}});
        }
      }));
    }
  }
  return out;
}

}  // namespace

SuiteReport run_identity_suite(const SuiteConfig& config) {
  SuiteReport report;
  std::optional<GroupTable> group;
  std::optional<KLTable> kl;
  report.checks.push_back(guarded(base_result(config, "build"), [&](CheckResult& r) {
    group.emplace(build_group(config));
    kl.emplace(*group, config.threads);
    r.pairs_checked = group->size();
  }));
  if (!kl) return report;
  const GroupTable& g = *group;
  const std::vector<ElementId> elements = g.all();

  report.checks.push_back(guarded(base_result(config, "bar_invariance"), [&](CheckResult& r) {
    for (ElementId x : elements) {
      ++r.pairs_checked;
      const HeckeElt& b = kl->kl_basis_element(x);
      if (kl->bar()(b) != b) r.violations.push_back(pair_finding(g, x, x, "bar(b_x) != b_x"));
    }
  }));
  report.checks.push_back(guarded(base_result(config, "unitriangularity"), [&](CheckResult& r) {
    for (ElementId x : elements) {
      for (const auto& [y, p] : kl->kl_basis_element(x).terms()) {
        ++r.pairs_checked;
        const bool ok = y == x ? p == LaurentPoly(1) : (p.in_v_poly_ring() && g.bruhat_leq(y, x));
        if (!ok) r.violations.push_back(pair_finding(g, y, x, p.to_csv_string()));
      }
    }
  }));
  report.checks.push_back(guarded(base_result(config, "bar_solve_oracle"), [&](CheckResult& r) {
    std::vector<char> agree(elements.size(), 1);
    parallel_for(elements.size(), config.threads, [&](std::size_t i) {
      agree[i] = kl_basis_by_bar_solve(kl->bar(), elements[i]) == kl->kl_basis_element(elements[i]);
    });
    for (std::size_t i = 0; i < elements.size(); ++i) {
      ++r.pairs_checked;
      if (!agree[i]) r.violations.push_back(pair_finding(g, elements[i], elements[i], "recursion != bar solve"));
    }
  }));
  report.checks.push_back(guarded(base_result(config, "positivity"), [&](CheckResult& r) {
    for (ElementId x : elements) {
      for (ElementId y : g.lower_interval(x)) {
        ++r.pairs_checked;
        const LaurentPoly h = kl->kl_basis_element(x).coefficient(y);
        const LaurentPoly hinv = lookup(kl->inverse_column(x), y);
        if (!h.is_zero() && !h.in_nonnegative_poly_ring()) {
          r.violations.push_back(pair_finding(g, y, x, "h = " + h.to_csv_string()));
        }
        if (!hinv.is_zero() && !hinv.in_nonnegative_poly_ring()) {
          r.violations.push_back(pair_finding(g, y, x, "h^ = " + hinv.to_csv_string()));
        }
        if (h.coefficient(1) < 0) r.violations.push_back(pair_finding(g, y, x, "mu < 0"));
      }
    }
  }));
  report.checks.push_back(guarded(base_result(config, "parity"), [&](CheckResult& r) {
    for (ElementId x : elements) {
      for (ElementId y : g.lower_interval(x)) {
        ++r.pairs_checked;
        if (!kl->check_parity(y, x)) r.violations.push_back(pair_finding(g, y, x, kl->inverse_kl_poly(y, x).to_csv_string()));
      }
    }
  }));
  report.checks.push_back(guarded(base_result(config, "inversion"), [&](CheckResult& r) {
    for (ElementId x : elements) {
      for (ElementId y : g.lower_interval(x)) {
        ++r.pairs_checked;
        if (!kl->check_inversion_identity(y, x)) r.violations.push_back(pair_finding(g, y, x, "sum != [y = x]"));
      }
    }
  }));
  report.checks.push_back(guarded(base_result(config, "rouquier"), [&](CheckResult& r) {
    for (ElementId x : elements) {
      ++r.pairs_checked;
      const RouquierTable rt = rouquier_multiplicities(*kl, x);
      if (!rouquier_support_ok(g, rt)) r.violations.push_back(pair_finding(g, x, x, "parity support"));
      if (rouquier_grothendieck_class(*kl, rt) != HeckeElt::delta(x)) {
        r.violations.push_back(pair_finding(g, x, x, "class != delta_x"));
      }
    }
  }));
  for (GenSet I : config.parabolics) {
    for (auto& c : parabolic_identity_checks(config, *kl, I)) report.checks.push_back(std::move(c));
  }
  return report;
}

SuiteReport run_scans(const SuiteConfig& config) {
  SuiteReport report;
  std::optional<GroupTable> group;
  std::optional<KLTable> kl;
  try {
    group.emplace(build_group(config));
    kl.emplace(*group, config.threads);
  } catch (const std::exception& e) {
    CheckResult r = base_result(config, "build");
    r.error = e.what();
    report.checks.push_back(std::move(r));
    return report;
  }
  const GroupTable& g = *group;
  report.checks.push_back(guarded(base_result(config, "monotonicity_inverse"), [&](CheckResult& r) {
    fill_scan(r, g, scan_monotonicity_inverse(*kl, config.threads));
  }));
  report.checks.push_back(guarded(base_result(config, "monotonicity_classical"), [&](CheckResult& r) {
    fill_scan(r, g, scan_monotonicity_classical(*kl, config.threads));
  }));
  for (GenSet I : config.parabolics) {
    CheckResult anti = base_result(config, "monotonicity_antispherical");
    anti.parabolic = I;
    anti.flavor = Flavor::antispherical;
    report.checks.push_back(guarded(std::move(anti), [&](CheckResult& r) {
      const ParabolicContext ctx(g, I, Flavor::antispherical);
      fill_scan(r, g, scan_monotonicity_antispherical(ParabolicKLTable(ctx, kl->bar(), config.threads), config.threads));
    }));
    CheckResult sph = base_result(config, "monotonicity_spherical");
    sph.parabolic = I;
    sph.flavor = Flavor::spherical;
    sph.expect_violations = config.spherical_expect_violations;
    report.checks.push_back(guarded(std::move(sph), [&](CheckResult& r) {
      const ParabolicContext ctx(g, I, Flavor::spherical);
      fill_spherical(r, ctx, scan_monotonicity_spherical(ParabolicKLTable(ctx, kl->bar(), config.threads), config.threads));
    }));
  }
  return report;
}

SuiteReport run_suite(const SuiteConfig& config) {
  SuiteReport report = run_identity_suite(config);
  for (auto& c : run_scans(config).checks) report.checks.push_back(std::move(c));
  return report;
}

CheckResult run_named_scan(const SuiteConfig& config, const std::string& name, bool expect_violations) {
  const GenSet I = config.parabolics.empty() ? 0 : config.parabolics.front();
  CheckResult r = base_result(config, "monotonicity_" + name);
  r.expect_violations = expect_violations;
  if (name == "antispherical" || name == "spherical") {
    r.parabolic = I;
    r.flavor = parse_flavor(name);
  } else if (name != "inverse" && name != "classical") {
    throw ParseError("unknown scan name: " + name);
  }
  return guarded(std::move(r), [&](CheckResult& res) {
    const GroupTable g = build_group(config);
    if (name == "inverse" || name == "classical") {
      const KLTable kl(g, config.threads);
      fill_scan(res, g,
                name == "inverse" ? scan_monotonicity_inverse(kl, config.threads)
                                  : scan_monotonicity_classical(kl, config.threads));
      return;
    }
    const BarInvolution bar(g);
    const ParabolicContext ctx(g, I, *res.flavor);
    const ParabolicKLTable table(ctx, bar, config.threads);
    if (*res.flavor == Flavor::antispherical) {
      fill_scan(res, g, scan_monotonicity_antispherical(table, config.threads));
    } else {
      fill_spherical(res, ctx, scan_monotonicity_spherical(table, config.threads));
    }
  });
}

}  // namespace kllab
