#include "kllab/verify.hpp"

#include <functional>
#include <set>
#include <tuple>

#include <gtest/gtest.h>

#include "kllab/error.hpp"

namespace kllab {
namespace {

GroupTable full(const std::string& spec) { return GroupTable::enumerate(parse_coxeter_spec(spec), std::nullopt); }

Word w(std::initializer_list<int> one_based) {
  Word out;
  for (int s : one_based) out.push_back(s - 1);
  return out;
}

LaurentPoly v(int k = 1) { return LaurentPoly::v(k); }

using Triple = std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>;  // (x, y, z)

// Direct triple loop: f(z,y) ⪯ v^{shift(z,y,x)} f(z,x) over z <= y <= x in `elems`.
struct BruteScan {
  std::vector<Triple> violations;
  std::uint64_t checked = 0;
};

BruteScan brute_scan(const GroupTable& g, const std::vector<ElementId>& elems,
                     const std::function<LaurentPoly(ElementId, ElementId)>& f,
                     const std::function<int(ElementId, ElementId, ElementId)>& shift, bool classical = false) {
  BruteScan out;
  for (ElementId x : elems) {
    for (ElementId y : elems) {
      if (!g.bruhat_leq(y, x)) continue;
      for (ElementId z : elems) {
        if (!g.bruhat_leq(z, y)) continue;
        ++out.checked;
        const LaurentPoly lhs = classical ? f(y, x) : f(z, y);
        const LaurentPoly rhs = f(z, x).shifted(shift(z, y, x));
        if (!leq_coefficientwise(lhs, rhs)) out.violations.emplace_back(x.value, y.value, z.value);
      }
    }
  }
  return out;
}

std::vector<Triple> triples(const ScanResult& r) {
  std::vector<Triple> out;
  for (const Violation& v : r.violations) out.emplace_back(v.x.value, v.y.value, v.z.value);
  return out;
}

TEST(VerifyTest, LiteralShiftHasSmallCounterexample) {
  // z = y = e, x = s: h^{e,e} = 1 but v^{ℓ(x)-ℓ(y)} h^{e,s} = v^2.
  const GroupTable g = full("A1");
  const KLTable kl(g);
  const ElementId e = g.identity();
  const ElementId s = g.find(w({1}));
  EXPECT_EQ(kl.inverse_kl_poly(e, s), v());
  EXPECT_FALSE(leq_coefficientwise(kl.inverse_kl_poly(e, e), kl.inverse_kl_poly(e, s).shifted(1)));
  EXPECT_TRUE(leq_coefficientwise(kl.inverse_kl_poly(e, e), kl.inverse_kl_poly(e, s).shifted(-1)));
}

TEST(VerifyTest, InverseAndClassicalScansMatchDirectLoop) {
  for (const char* spec : {"A2", "B2", "G2", "A3", "B3"}) {
    const GroupTable g = full(spec);
    const KLTable kl(g);
    const auto inv = [&](ElementId a, ElementId b) { return kl.inverse_kl_poly(a, b); };
    const auto cls = [&](ElementId a, ElementId b) { return kl.kl_poly(a, b); };
    const auto inv_shift = [&](ElementId, ElementId y, ElementId x) { return g.length(y) - g.length(x); };
    const auto cls_shift = [&](ElementId z, ElementId y, ElementId) { return g.length(z) - g.length(y); };

    const ScanResult si = scan_monotonicity_inverse(kl);
    const BruteScan bi = brute_scan(g, g.all(), inv, inv_shift);
    EXPECT_EQ(si.triples_checked, bi.checked);
    EXPECT_EQ(triples(si), bi.violations);
    EXPECT_TRUE(si.violations.empty()) << spec;

    const ScanResult sc = scan_monotonicity_classical(kl);
    const BruteScan bc = brute_scan(g, g.all(), cls, cls_shift, true);
    EXPECT_EQ(sc.triples_checked, bc.checked);
    EXPECT_EQ(triples(sc), bc.violations);
    EXPECT_TRUE(sc.violations.empty()) << spec;
  }
}

TEST(VerifyTest, ScansEmptyOnLargerAndInfiniteGroups) {
  for (const auto& [spec, cap] : std::vector<std::pair<std::string, std::optional<int>>>{
           {"H3", std::nullopt}, {"D4", std::nullopt}, {"I2(inf)", 10}, {"Aff-A1", 10}, {"Aff-A2", 6}}) {
    const GroupTable g = GroupTable::enumerate(parse_coxeter_spec(spec), cap);
    const KLTable kl(g);
    EXPECT_TRUE(scan_monotonicity_inverse(kl).violations.empty()) << spec;
    EXPECT_TRUE(scan_monotonicity_classical(kl).violations.empty()) << spec;
  }
}

TEST(VerifyTest, AntisphericalScanMatchesDirectLoop) {
  for (const char* spec : {"A3", "B3", "H3"}) {
    const GroupTable g = full(spec);
    const KLTable kl(g);
    for (GenSet I = 0; I < (GenSet{1} << g.rank()); ++I) {
      const ParabolicContext ctx(g, I, Flavor::antispherical);
      const ParabolicKLTable t(ctx, kl.bar());
      const ScanResult r = scan_monotonicity_antispherical(t);
      const BruteScan b = brute_scan(
          g, ctx.reps(), [&](ElementId a, ElementId c) { return t.inverse_kl_poly(a, c); },
          [&](ElementId, ElementId y, ElementId x) { return g.length(y) - g.length(x); });
      EXPECT_EQ(r.triples_checked, b.checked);
      EXPECT_EQ(triples(r), b.violations);
      EXPECT_TRUE(r.violations.empty()) << spec << " I=" << render_generator_set(I);
    }
  }
}

TEST(VerifyTest, EmptyParabolicAntisphericalIsInverseScan) {
  const GroupTable g = full("B3");
  const KLTable kl(g);
  const ParabolicContext ctx(g, 0, Flavor::antispherical);
  const ParabolicKLTable t(ctx, kl.bar());
  const ScanResult a = scan_monotonicity_antispherical(t);
  const ScanResult i = scan_monotonicity_inverse(kl);
  EXPECT_EQ(a.triples_checked, i.triples_checked);
  EXPECT_EQ(triples(a), triples(i));
}

TEST(VerifyTest, SphericalCounterexampleA2) {
  const GroupTable g = full("A2");
  const KLTable kl(g);
  const ParabolicContext ctx(g, 0b01, Flavor::spherical);
  const ParabolicKLTable t(ctx, kl.bar());
  const ElementId e = g.identity();
  const ElementId s2 = g.find(w({2}));
  const ElementId s2s1 = g.find(w({2, 1}));
  const ScanResult r = scan_monotonicity_spherical(t);
  ASSERT_EQ(r.violations.size(), 2U);
  // m^{e,e} = 1 against v^{-2} m^{e,21} = 0.
  EXPECT_EQ(std::tie(r.violations[0].z, r.violations[0].y, r.violations[0].x), std::tie(e, e, s2s1));
  EXPECT_EQ(r.violations[0].lhs, LaurentPoly(1));
  EXPECT_TRUE(r.violations[0].rhs.is_zero());
  EXPECT_EQ(r.violations[0].witness_exponent, 0);
  // m^{e,2} = v against v^{-1} m^{e,21} = 0.
  EXPECT_EQ(std::tie(r.violations[1].z, r.violations[1].y, r.violations[1].x), std::tie(e, s2, s2s1));
  EXPECT_EQ(r.violations[1].lhs, v());
  EXPECT_EQ(r.violations[1].witness_exponent, 1);

  const auto mandated = mandated_spherical_failures(ctx);
  ASSERT_TRUE(mandated.has_value());
  ASSERT_EQ(mandated->size(), 1U);
  EXPECT_EQ(mandated->front(), (std::array<ElementId, 3>{e, s2, s2s1}));
}

TEST(VerifyTest, SphericalChainFailsEverywhereInTypeA) {
  for (int n : {2, 3, 4}) {
    const GroupTable g = full("A" + std::to_string(n));
    const KLTable kl(g);
    const GenSet all = (GenSet{1} << n) - 1;
    for (GenSet I : {all & ~GenSet{1}, all & ~(GenSet{1} << (n - 1))}) {
      const ParabolicContext ctx(g, I, Flavor::spherical);
      const ParabolicKLTable t(ctx, kl.bar());
      const ScanResult r = scan_monotonicity_spherical(t);
      const BruteScan b = brute_scan(
          g, ctx.reps(), [&](ElementId a, ElementId c) { return t.inverse_kl_poly(a, c); },
          [&](ElementId, ElementId y, ElementId x) { return g.length(y) - g.length(x); });
      EXPECT_EQ(triples(r), b.violations);
      const auto mandated = mandated_spherical_failures(ctx);
      ASSERT_TRUE(mandated.has_value());
      EXPECT_EQ(mandated->size(), static_cast<std::size_t>(n - 1));
      const std::set<Triple> seen(b.violations.begin(), b.violations.end());
      for (const auto& [z, y, x] : *mandated) {
        EXPECT_TRUE(seen.count({x.value, y.value, z.value})) << "A" << n << " I=" << render_generator_set(I);
        // m^{z,x} = 0 along the chain while m^{z,y} = v^{ℓ(y)-ℓ(z)}.
        EXPECT_TRUE(t.inverse_kl_poly(z, x).is_zero());
        EXPECT_EQ(t.inverse_kl_poly(z, y), v(g.length(y) - g.length(z)));
      }
    }
  }
}

TEST(VerifyTest, MandatedTriplesOnlyInTheirSetting) {
  const GroupTable a3 = full("A3");
  EXPECT_FALSE(mandated_spherical_failures(ParabolicContext(a3, 0b010, Flavor::spherical)).has_value());
  EXPECT_FALSE(mandated_spherical_failures(ParabolicContext(a3, 0b101, Flavor::spherical)).has_value());
  const GroupTable b3 = full("B3");
  EXPECT_FALSE(mandated_spherical_failures(ParabolicContext(b3, 0b011, Flavor::spherical)).has_value());
}

TEST(VerifyTest, FlavorMismatch) {
  const GroupTable g = full("A2");
  const KLTable kl(g);
  const ParabolicKLTable sph(ParabolicContext(g, 1, Flavor::spherical), kl.bar());
  EXPECT_THROW(scan_monotonicity_antispherical(sph), FlavorMismatchError);
}

TEST(VerifyTest, FlavorMismatchSpherical) {
  const GroupTable g = full("A2");
  const KLTable kl(g);
  const ParabolicContext ctx(g, 1, Flavor::antispherical);
  const ParabolicKLTable anti(ctx, kl.bar());
  EXPECT_THROW(scan_monotonicity_spherical(anti), FlavorMismatchError);
}

TEST(VerifyTest, RouquierExamples) {
  const GroupTable g = full("A2");
  const KLTable kl(g);
  const ElementId e = g.identity();
  const ElementId s = g.find(w({1}));
  const RouquierTable re = rouquier_multiplicities(kl, e);
  EXPECT_EQ(re.mult, (std::map<std::pair<ElementId, int>, std::int64_t>{{{e, 0}, 1}}));
  const RouquierTable rs = rouquier_multiplicities(kl, s);
  EXPECT_EQ(rs.mult, (std::map<std::pair<ElementId, int>, std::int64_t>{{{e, 1}, 1}, {{s, 0}, 1}}));
  // b_s - v b_e = δ_s.
  EXPECT_EQ(rouquier_grothendieck_class(kl, rs), HeckeElt::delta(s));

  RouquierTable bad = rs;
  bad.mult[{e, 2}] = 1;
  EXPECT_FALSE(rouquier_support_ok(g, bad));
  bad = rs;
  bad.mult[{g.find(w({2})), 1}] = 1;
  EXPECT_FALSE(rouquier_support_ok(g, bad));
}

TEST(VerifyTest, RouquierClassIsStandardObject) {
  for (const char* spec : {"A2", "B2", "A3"}) {
    const GroupTable g = full(spec);
    const KLTable kl(g);
    for (ElementId x : g.all()) {
      const RouquierTable rt = rouquier_multiplicities(kl, x);
      EXPECT_TRUE(rouquier_support_ok(g, rt));
      EXPECT_EQ(rouquier_grothendieck_class(kl, rt), HeckeElt::delta(x)) << spec << ' ' << g.render(x);
    }
  }
}

const CheckResult* find_check(const SuiteReport& r, const std::string& name, std::optional<GenSet> I = std::nullopt,
                              std::optional<Flavor> f = std::nullopt) {
  for (const CheckResult& c : r.checks) {
    if (c.check == name && (!I || c.parabolic == I) && (!f || c.flavor == f)) return &c;
  }
  return nullptr;
}

TEST(VerifyTest, SuitePassesOnFiniteGroups) {
  for (const char* spec : {"A2", "B2", "G2", "A3"}) {
    SuiteConfig config;
    config.group = spec;
    config.parabolics = {0, 0b01, 0b10};
    const SuiteReport report = run_suite(config);
    EXPECT_TRUE(report.passed()) << spec;
    for (const char* name : {"bar_invariance", "unitriangularity", "bar_solve_oracle", "positivity", "parity",
                             "inversion", "rouquier", "monotonicity_inverse", "monotonicity_classical"}) {
      const CheckResult* c = find_check(report, name);
      ASSERT_NE(c, nullptr) << name;
      EXPECT_TRUE(c->passed) << name;
      EXPECT_GT(c->pairs_checked, 0U) << name;
    }
    ASSERT_NE(find_check(report, "soergel_identification", GenSet{0b01}), nullptr);
    ASSERT_NE(find_check(report, "monotonicity_antispherical", GenSet{0b10}), nullptr);
  }
}

TEST(VerifyTest, SphericalSemantics) {
  SuiteConfig config;
  config.group = "A2";
  config.parabolics = {0b01};
  const CheckResult expected = run_named_scan(config, "spherical", true);
  EXPECT_TRUE(expected.passed);
  EXPECT_TRUE(expected.expect_violations);
  EXPECT_EQ(expected.violations.size(), 2U);
  EXPECT_TRUE(expected.missing.empty());
  EXPECT_EQ(expected.violations[1].fields.front(), (std::pair<std::string, std::string>{"z", "e"}));

  const CheckResult strict = run_named_scan(config, "spherical", false);
  EXPECT_FALSE(strict.passed);

  config.spherical_expect_violations = false;
  EXPECT_FALSE(run_scans(config).passed());
  config.spherical_expect_violations = true;
  EXPECT_TRUE(run_scans(config).passed());
}

TEST(VerifyTest, NamedScans) {
  SuiteConfig config;
  config.group = "B3";
  config.parabolics = {0b011};
  for (const char* name : {"inverse", "classical", "antispherical"}) {
    const CheckResult r = run_named_scan(config, name, false);
    EXPECT_TRUE(r.passed) << name;
    EXPECT_EQ(r.check, std::string("monotonicity_") + name);
    EXPECT_FALSE(r.error.has_value());
  }
  EXPECT_THROW(run_named_scan(config, "sideways", false), ParseError);
}

TEST(VerifyTest, ErrorsAreCapturedInReport) {
  SuiteConfig unknown;
  unknown.group = "Q7";
  const SuiteReport r1 = run_suite(unknown);
  EXPECT_FALSE(r1.passed());
  ASSERT_FALSE(r1.checks.empty());
  EXPECT_TRUE(r1.checks.front().error.has_value());

  SuiteConfig uncapped;
  uncapped.group = "Aff-A1";
  EXPECT_FALSE(run_suite(uncapped).passed());

  SuiteConfig limited;
  limited.group = "A3";
  limited.max_elements = 10;
  const SuiteReport r3 = run_identity_suite(limited);
  EXPECT_FALSE(r3.passed());
  EXPECT_TRUE(find_check(r3, "build")->error.has_value());
  EXPECT_THROW(build_group(limited), ResourceLimitError);
}

TEST(VerifyTest, CappedSuite) {
  SuiteConfig config;
  config.group = "Aff-A2";
  config.cap = 5;
  config.parabolics = {0, 0b001, 0b011};
  EXPECT_TRUE(run_suite(config).passed());
}

}  // namespace
}  // namespace kllab
