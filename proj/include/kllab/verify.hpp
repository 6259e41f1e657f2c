#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kllab/parabolic.hpp"

namespace kllab {

/// A triple z <= y <= x where lhs ⪯ rhs fails; witness_exponent is the
/// smallest exponent at which rhs - lhs has a negative coefficient.
struct Violation {
  ElementId z;
  ElementId y;
  ElementId x;
  LaurentPoly lhs;
  LaurentPoly rhs;
  int witness_exponent = 0;
};

/// Result of a monotonicity scan: violations in (x, y, z) id order plus the
/// number of triples examined.
struct ScanResult {
  std::vector<Violation> violations;
  std::uint64_t triples_checked = 0;
};

/// h^{z,y} ⪯ v^{ℓ(y)-ℓ(x)} h^{z,x} over all z <= y <= x held by the table.
/// The shift is the one produced by Δ_y<ℓ(y)> ↪ Δ_x<ℓ(x)> with <1> acting as
/// v^{-1} on multiplicities; with v^{ℓ(x)-ℓ(y)} already z = y = e, x = s fails.
ScanResult scan_monotonicity_inverse(const KLTable& table, int threads = 1);
/// h_{y,x} ⪯ v^{ℓ(z)-ℓ(y)} h_{z,x} over all z <= y <= x.
ScanResult scan_monotonicity_classical(const KLTable& table, int threads = 1);
/// n^{z,y} ⪯ v^{ℓ(y)-ℓ(x)} n^{z,x} over z <= y <= x in ^I W. Throws
/// FlavorMismatchError for a spherical table.
ScanResult scan_monotonicity_antispherical(const ParabolicKLTable& table, int threads = 1);
/// The same inequality for m^{y,x}; violations are expected here. Throws
/// FlavorMismatchError for an antispherical table.
ScanResult scan_monotonicity_spherical(const ParabolicKLTable& table, int threads = 1);

/// Consecutive triples z < y < x of the chain ^I W that must violate
/// spherical monotonicity: defined when W is type A_n held in full and I is
/// A_{n-1} (S minus an end node). nullopt when no such claim applies.
std::optional<std::vector<std::array<ElementId, 3>>> mandated_spherical_failures(const ParabolicContext& ctx);

/// Graded multiplicities m^i_{y,Δx}: the coefficient of v^i in h^{y,x}.
struct RouquierTable {
  ElementId x;
  std::map<std::pair<ElementId, int>, std::int64_t> mult;
};

/// Builds the table and re-asserts its parity support; throws InternalError
/// if a multiplicity sits in the wrong parity or is negative.
RouquierTable rouquier_multiplicities(const KLTable& table, ElementId x);
/// m^i_{y,Δx} = 0 unless i ≡ ℓ(x) - ℓ(y) mod 2 and y <= x.
bool rouquier_support_ok(const GroupTable& group, const RouquierTable& rt);
/// Σ_y Σ_i (-1)^i m^i_{y,Δx} v^i b_y, expanded in the δ-basis.
HeckeElt rouquier_grothendieck_class(const KLTable& table, const RouquierTable& rt);

// ---------------------------------------------------------------------------
// Batch harness

/// One reported item, as ordered key/value pairs ("z" -> "1,2", ...).
struct Finding {
  std::vector<std::pair<std::string, std::string>> fields;
  friend bool operator==(const Finding&, const Finding&) = default;
};

struct CheckResult {
  std::string check;
  std::string group;
  std::optional<GenSet> parabolic;
  std::optional<int> cap;
  std::optional<Flavor> flavor;
  /// Violations are the expected outcome (spherical scan).
  bool expect_violations = false;
  std::uint64_t pairs_checked = 0;
  std::vector<Finding> violations;
  /// Mandated violations that did not show up.
  std::vector<Finding> missing;
  /// Upstream error captured into the report.
  std::optional<std::string> error;
  bool passed = false;
};

struct SuiteReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

struct SuiteConfig {
  std::string group;
  /// Parabolic subsets to exercise; the non-parabolic checks always run.
  std::vector<GenSet> parabolics{0};
  std::optional<int> cap;
  int threads = 1;
  std::size_t max_elements = 2'000'000;
  /// Spherical scan semantics: violations expected (only mandated ones are
  /// required) or treated as failures.
  bool spherical_expect_violations = true;
};

/// Identity checks over every pair within the cap: bar invariance and
/// unitriangularity of b_x, agreement with the bar-invariance oracle,
/// positivity of h, h^ and μ, parity, the inversion identity, the Rouquier
/// shadow, and per parabolic subset the canonical basis properties, both
/// parabolic inversion identities and n^{z,x} = h^{z,x}.
SuiteReport run_identity_suite(const SuiteConfig& config);
/// Classical and inverse monotonicity, plus antispherical and spherical
/// monotonicity for each parabolic subset.
SuiteReport run_scans(const SuiteConfig& config);
/// Both of the above, identity checks first.
SuiteReport run_suite(const SuiteConfig& config);

/// Scan selected by name: "inverse", "classical", "antispherical" or
/// "spherical". Uses config.parabolics.front() for the parabolic scans.
CheckResult run_named_scan(const SuiteConfig& config, const std::string& name, bool expect_violations);

/// Builds the group table for a config (spec parse plus enumeration).
GroupTable build_group(const SuiteConfig& config);

}  // namespace kllab
