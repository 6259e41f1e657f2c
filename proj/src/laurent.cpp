#include "kllab/laurent.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <sstream>

#include "kllab/error.hpp"

namespace kllab {

namespace checked {

LaurentPoly::Coeff add(LaurentPoly::Coeff a, LaurentPoly::Coeff b) {
  LaurentPoly::Coeff r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("Laurent coefficient overflow in addition");
  return r;
}

LaurentPoly::Coeff mul(LaurentPoly::Coeff a, LaurentPoly::Coeff b) {
  LaurentPoly::Coeff r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("Laurent coefficient overflow in multiplication");
  return r;
}

}  // namespace checked

LaurentPoly::LaurentPoly(Coeff constant) {
  if (constant != 0) terms_.push_back({0, constant});
}

LaurentPoly::LaurentPoly(std::initializer_list<Term> terms)
    : LaurentPoly(from_terms(std::vector<Term>(terms))) {}

LaurentPoly LaurentPoly::from_terms(std::vector<Term> terms) {
  std::stable_sort(terms.begin(), terms.end(),
                   [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
  LaurentPoly p;
  for (const Term& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().exponent == t.exponent) {
      p.terms_.back().coeff = checked::add(p.terms_.back().coeff, t.coeff);
      if (p.terms_.back().coeff == 0) p.terms_.pop_back();
    } else if (t.coeff != 0) {
      p.terms_.push_back(t);
    }
  }
  return p;
}

LaurentPoly LaurentPoly::monomial(Coeff coeff, int exponent) {
  LaurentPoly p;
  if (coeff != 0) p.terms_.push_back({exponent, coeff});
  return p;
}

LaurentPoly::Coeff LaurentPoly::coefficient(int k) const noexcept {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), k,
                             [](const Term& t, int e) { return t.exponent < e; });
  return (it != terms_.end() && it->exponent == k) ? it->coeff : 0;
}

LaurentPoly LaurentPoly::shifted(int k) const {
  LaurentPoly p = *this;
  for (Term& t : p.terms_) t.exponent += k;
  return p;
}

bool LaurentPoly::in_nonnegative_poly_ring() const noexcept {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return t.coeff > 0 && t.exponent >= 0; });
}

bool LaurentPoly::in_v_poly_ring() const noexcept {
  return terms_.empty() || terms_.front().exponent >= 1;
}

void LaurentPoly::add_scaled(const LaurentPoly& rhs, Coeff sign) {
  if (rhs.terms_.empty()) return;
  std::vector<Term> out;
  out.reserve(terms_.size() + rhs.terms_.size());
  auto a = terms_.begin();
  auto b = rhs.terms_.begin();
  while (a != terms_.end() || b != rhs.terms_.end()) {
    if (b == rhs.terms_.end() || (a != terms_.end() && a->exponent < b->exponent)) {
      out.push_back(*a++);
    } else if (a == terms_.end() || b->exponent < a->exponent) {
      out.push_back({b->exponent, checked::mul(sign, b->coeff)});
      ++b;
    } else {
      Coeff c = checked::add(a->coeff, checked::mul(sign, b->coeff));
      if (c != 0) out.push_back({a->exponent, c});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(out);
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& rhs) {
  add_scaled(rhs, 1);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& rhs) {
  add_scaled(rhs, -1);
  return *this;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& rhs) {
  *this = *this * rhs;
  return *this;
}

LaurentPoly operator*(const LaurentPoly& lhs, const LaurentPoly& rhs) {
  if (lhs.is_zero() || rhs.is_zero()) return {};
  const int lo = lhs.min_exponent() + rhs.min_exponent();
  const int hi = lhs.max_exponent() + rhs.max_exponent();
  // Supports are short and dense-ish, so a dense accumulator over the
  // exponent window is the cheap path.
  std::vector<LaurentPoly::Coeff> acc(static_cast<std::size_t>(hi - lo + 1), 0);
  for (const auto& a : lhs.terms()) {
    for (const auto& b : rhs.terms()) {
      auto& slot = acc[static_cast<std::size_t>(a.exponent + b.exponent - lo)];
      slot = checked::add(slot, checked::mul(a.coeff, b.coeff));
    }
  }
  LaurentPoly p;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    if (acc[i] != 0) p.terms_.push_back({lo + static_cast<int>(i), acc[i]});
  }
  return p;
}

LaurentPoly operator-(const LaurentPoly& p) {
  LaurentPoly r = p;
  for (auto& t : r.terms_) t.coeff = checked::mul(t.coeff, -1);
  return r;
}

LaurentPoly bar(const LaurentPoly& p) {
  std::vector<LaurentPoly::Term> terms;
  terms.reserve(p.size());
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) terms.push_back({-it->exponent, it->coeff});
  return LaurentPoly::from_terms(std::move(terms));
}

bool leq_coefficientwise(const LaurentPoly& p, const LaurentPoly& q) {
  return !first_negative_exponent(q - p).has_value();
}

std::optional<int> first_negative_exponent(const LaurentPoly& p) {
  for (const auto& t : p.terms()) {
    if (t.coeff < 0) return t.exponent;
  }
  return std::nullopt;
}

std::string LaurentPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const Term& t : terms_) {
    Coeff mag = t.coeff < 0 ? -t.coeff : t.coeff;
    if (first) {
      if (t.coeff < 0) os << '-';
    } else {
      os << (t.coeff < 0 ? " - " : " + ");
    }
    first = false;
    if (t.exponent == 0) {
      os << mag;
      continue;
    }
    if (mag != 1) os << mag;
    os << 'v';
    if (t.exponent != 1) os << '^' << t.exponent;
  }
  return os.str();
}

std::string LaurentPoly::to_csv_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const Term& t : terms_) {
    if (!out.empty()) out += '+';
    out += std::to_string(t.coeff);
    out += "*v^";
    out += std::to_string(t.exponent);
  }
  return out;
}

namespace {

template <typename T>
T parse_integer(std::string_view text, const std::string& whole) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError("malformed polynomial string: " + whole);
  }
  return value;
}

}  // namespace

LaurentPoly LaurentPoly::parse_csv_string(const std::string& text) {
  if (text == "0") return {};
  if (text.empty()) throw ParseError("empty polynomial string");
  std::vector<Term> terms;
  std::string_view rest = text;
  while (!rest.empty()) {
    // Term separators are '+' not directly following '*v^'; coefficients may
    // carry their own sign ("1*v^0+-2*v^3").
    std::size_t star = rest.find("*v^");
    if (star == std::string_view::npos) throw ParseError("malformed polynomial string: " + text);
    std::size_t end = rest.find('+', star + 3);
    std::string_view coeff = rest.substr(0, star);
    std::string_view exp = rest.substr(star + 3, end == std::string_view::npos ? std::string_view::npos : end - star - 3);
    terms.push_back({parse_integer<int>(exp, text), parse_integer<Coeff>(coeff, text)});
    if (end == std::string_view::npos) break;
    rest.remove_prefix(end + 1);
    if (rest.empty()) throw ParseError("malformed polynomial string: " + text);
  }
  return from_terms(std::move(terms));
}

std::ostream& operator<<(std::ostream& os, const LaurentPoly& p) { return os << p.to_string(); }

}  // namespace kllab
