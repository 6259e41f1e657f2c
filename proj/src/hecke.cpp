#include "kllab/hecke.hpp"

#include <bit>
#include <sstream>

#include "kllab/error.hpp"
#include "kllab/parallel.hpp"
#include "kllab/triangular.hpp"

namespace kllab {

namespace {

const LaurentPoly& v_minus_vinv() {
  static const LaurentPoly p{{-1, -1}, {1, 1}};
  return p;
}

const LaurentPoly& vinv_minus_v() {
  static const LaurentPoly p{{-1, 1}, {1, -1}};
  return p;
}

}  // namespace

void accumulate(Expansion& e, ElementId x, const LaurentPoly& p) {
  if (p.is_zero()) return;
  auto [it, inserted] = e.try_emplace(x, p);
  if (inserted) return;
  it->second += p;
  if (it->second.is_zero()) e.erase(it);
}

// ---------------------------------------------------------------------------
// HeckeElt

HeckeElt::HeckeElt(Expansion terms) : terms_(std::move(terms)) {
  std::erase_if(terms_, [](const auto& kv) { return kv.second.is_zero(); });
}

LaurentPoly HeckeElt::coefficient(ElementId x) const {
  auto it = terms_.find(x);
  return it == terms_.end() ? LaurentPoly{} : it->second;
}

HeckeElt& HeckeElt::operator+=(const HeckeElt& rhs) {
  for (const auto& [x, p] : rhs.terms_) accumulate(terms_, x, p);
  return *this;
}

HeckeElt& HeckeElt::operator-=(const HeckeElt& rhs) {
  for (const auto& [x, p] : rhs.terms_) accumulate(terms_, x, -p);
  return *this;
}

HeckeElt operator*(const LaurentPoly& scalar, const HeckeElt& h) {
  HeckeElt out;
  if (scalar.is_zero()) return out;
  for (const auto& [x, p] : h.terms_) out.terms_.emplace_hint(out.terms_.end(), x, scalar * p);
  return out;
}

std::string HeckeElt::to_string(const GroupTable& group) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [x, p] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << '(' << p << ")*d[" << group.render(x) << ']';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Generator actions

HeckeElt mult_delta_gen(const GroupTable& group, const HeckeElt& h, Gen s, Side side) {
  Expansion out;
  for (const auto& [x, p] : h.terms()) {
    const ElementId xs = group.mult(x, s, side);
    accumulate(out, xs, p);
    if (group.length(xs) < group.length(x)) accumulate(out, x, vinv_minus_v() * p);
  }
  return HeckeElt(std::move(out));
}

HeckeElt mult_b_gen(const GroupTable& group, const HeckeElt& h, Gen s, Side side) {
  Expansion out;
  for (const auto& [x, p] : h.terms()) {
    const ElementId xs = group.mult(x, s, side);
    accumulate(out, xs, p);
    accumulate(out, x, p.shifted(group.length(xs) > group.length(x) ? 1 : -1));
  }
  return HeckeElt(std::move(out));
}

HeckeElt multiply(const GroupTable& group, const HeckeElt& a, const HeckeElt& b) {
  HeckeElt out;
  for (const auto& [y, q] : b.terms()) {
    HeckeElt partial = a;
    for (Gen s : group.word(y)) partial = mult_delta_gen(group, partial, s, Side::right);
    out += q * partial;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bar involution

namespace {

// bar(h)·bar(δ_s) = bar(h)·(δ_s + v - v^{-1}).
HeckeElt times_bar_delta_gen(const GroupTable& group, const HeckeElt& h, Gen s) {
  return mult_delta_gen(group, h, s, Side::right) + v_minus_vinv() * h;
}

}  // namespace

BarInvolution::BarInvolution(const GroupTable& group)
    : group_(&group), once_(std::make_unique<std::once_flag[]>(group.size())), cache_(group.size()) {}

const HeckeElt& BarInvolution::bar_delta(ElementId x) const {
  std::call_once(once_[x.value], [&] {
    if (x == group_->identity()) {
      cache_[x.value] = HeckeElt::delta(x);
      return;
    }
    const Word& w = group_->word(x);
    const Gen s = w.back();
    const ElementId prefix = group_->mult(x, s, Side::right);
    cache_[x.value] = times_bar_delta_gen(*group_, bar_delta(prefix), s);
  });
  return cache_[x.value];
}

HeckeElt BarInvolution::operator()(const HeckeElt& h) const {
  HeckeElt out;
  for (const auto& [x, p] : h.terms()) out += bar(p) * bar_delta(x);
  return out;
}

HeckeElt bar_delta_along_word(const GroupTable& group, const Word& reduced_word) {
  HeckeElt out = HeckeElt::delta(group.identity());
  for (Gen s : reduced_word) out = times_bar_delta_gen(group, out, s);
  return out;
}

HeckeElt bar_element(const GroupTable& group, const HeckeElt& h) { return BarInvolution(group)(h); }

// ---------------------------------------------------------------------------
// KLTable

namespace {

// One μ-recursion step: given b_x and s with xs > x, returns b_{xs}.
HeckeElt next_kl_element(const GroupTable& group, const std::vector<HeckeElt>& basis, const HeckeElt& bx,
                         Gen s) {
  HeckeElt out = mult_b_gen(group, bx, s, Side::right);
  for (const auto& [y, p] : bx.terms()) {
    if (!contains(group.right_descents(y), s)) continue;
    const LaurentPoly::Coeff m = p.coefficient(1);
    if (m != 0) out -= LaurentPoly(m) * basis[y.value];
  }
  return out;
}

}  // namespace

KLTable::KLTable(const GroupTable& group, int threads)
    : group_(&group), bar_(group), basis_(group.size()), inverse_(group.size()) {
  basis_[group.identity().value] = HeckeElt::delta(group.identity());
  for (int n = 1; n <= group.max_length(); ++n) {
    const std::vector<ElementId> layer = group.layer(n);
    parallel_for(layer.size(), threads, [&](std::size_t i) {
      const ElementId x = layer[i];
      // The canonical word minus its last letter is the canonical word of
      // the prefix, which sits one layer down.
      const Gen s = group.word(x).back();
      const ElementId prefix = group.mult(x, s, Side::right);
      basis_[x.value] = next_kl_element(group, basis_, basis_[prefix.value], s);
    });
  }
  parallel_for(group.size(), threads, [&](std::size_t i) {
    inverse_[i] = invert_column(
        ElementId{static_cast<std::uint32_t>(i)},
        [&](ElementId z) -> const Expansion& { return basis_[z.value].terms(); },
        [&](ElementId z) { return group.length(z); });
  });
}

LaurentPoly KLTable::kl_poly(ElementId y, ElementId x) const {
  LaurentPoly p = basis_[x.value].coefficient(y);
  if (!p.is_zero() && !p.in_nonnegative_poly_ring()) {
    throw InternalError("h_{" + group_->render(y) + "," + group_->render(x) + "} = " + p.to_string() +
                        " is not in Z>=0[v]");
  }
  return p;
}

LaurentPoly::Coeff KLTable::mu(ElementId y, ElementId x) const {
  const LaurentPoly::Coeff m = basis_[x.value].coefficient(y).coefficient(1);
  if (m < 0) throw InternalError("negative mu(" + group_->render(y) + "," + group_->render(x) + ")");
  return m;
}

LaurentPoly KLTable::inverse_kl_poly(ElementId y, ElementId x) const {
  const Expansion& col = inverse_[x.value];
  auto it = col.find(y);
  if (it == col.end()) return {};
  if (!it->second.in_nonnegative_poly_ring()) {
    throw InternalError("h^{" + group_->render(y) + "," + group_->render(x) + "} = " + it->second.to_string() +
                        " is not in Z>=0[v]");
  }
  return it->second;
}

HeckeElt KLTable::kl_basis_along_word(const Word& reduced_word) const {
  const GroupTable& group = *group_;
  HeckeElt current = HeckeElt::delta(group.identity());
  ElementId at = group.identity();
  for (Gen s : reduced_word) {
    const ElementId next = group.mult(at, s, Side::right);
    if (group.length(next) < group.length(at)) throw InternalError("kl_basis_along_word: word is not reduced");
    current = next_kl_element(group, basis_, current, s);
    at = next;
  }
  return current;
}

bool KLTable::check_parity(ElementId y, ElementId x) const {
  const int parity = (group_->length(x) - group_->length(y)) & 1;
  const LaurentPoly h = inverse_kl_poly(y, x);
  for (const auto& t : h.terms()) {
    if ((t.exponent & 1) != parity) return false;
  }
  return true;
}

bool KLTable::check_inversion_identity(ElementId y, ElementId x) const {
  LaurentPoly sum;
  const int ly = group_->length(y);
  for (const auto& [z, h] : basis_[x.value].terms()) {
    const Expansion& col = inverse_[z.value];
    auto it = col.find(y);
    if (it == col.end()) continue;
    const LaurentPoly term = it->second * h;
    if ((group_->length(z) - ly) % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return sum == LaurentPoly(y == x ? 1 : 0);
}

HeckeElt kl_basis_by_bar_solve(const BarInvolution& bar, ElementId x) {
  const std::vector<ElementId>& interval = bar.group().lower_interval(x);
  return HeckeElt(solve_self_dual(std::span<const ElementId>(interval),
                                  [&](ElementId y) -> const Expansion& { return bar.bar_delta(y).terms(); }));
}

}  // namespace kllab
