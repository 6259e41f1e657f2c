#include "kllab/coxeter.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "kllab/error.hpp"

namespace kllab {

// ---------------------------------------------------------------------------
// CoxeterMatrix

CoxeterMatrix::CoxeterMatrix(int rank) : rank_(rank) {
  if (rank < 1 || rank > kMaxRank) throw ParseError("rank must be in [1, 32], got " + std::to_string(rank));
  m_.assign(static_cast<std::size_t>(rank * rank), 2);
  for (int s = 0; s < rank; ++s) m_[static_cast<std::size_t>(s * rank + s)] = 1;
}

void CoxeterMatrix::set_order(Gen s, Gen t, int m) {
  if (s < 0 || t < 0 || s >= rank_ || t >= rank_) throw ParseError("generator index out of range");
  if (s == t) throw ParseError("diagonal entries of a Coxeter matrix are fixed to 1");
  if (m != kInfinity && m < 2) throw ParseError("off-diagonal Coxeter matrix entries must be >= 2 or inf");
  m_[static_cast<std::size_t>(s * rank_ + t)] = m;
  m_[static_cast<std::size_t>(t * rank_ + s)] = m;
}

bool CoxeterMatrix::is_type_a() const {
  for (Gen s = 0; s < rank_; ++s) {
    for (Gen t = s + 1; t < rank_; ++t) {
      if (order(s, t) != (t == s + 1 ? 3 : 2)) return false;
    }
  }
  return true;
}

namespace {

// Classifies one connected component (given as node list) of the Coxeter
// graph; true iff it is one of the finite types.
bool component_is_finite(const CoxeterMatrix& m, const std::vector<Gen>& nodes) {
  const std::size_t n = nodes.size();
  if (n == 1) return true;
  std::vector<std::vector<Gen>> adj(n);
  std::size_t edges = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      int o = m.order(nodes[i], nodes[j]);
      if (o == 2) continue;
      if (o == CoxeterMatrix::kInfinity) return false;
      adj[i].push_back(static_cast<Gen>(j));
      adj[j].push_back(static_cast<Gen>(i));
      ++edges;
    }
  }
  if (n == 2) return true;  // I2(m), m finite
  if (edges != n - 1) return false;  // cycles are never finite

  auto label = [&](std::size_t i, std::size_t j) { return m.order(nodes[i], nodes[j]); };
  std::vector<std::size_t> branch;
  for (std::size_t i = 0; i < n; ++i) {
    if (adj[i].size() > 3) return false;
    if (adj[i].size() == 3) branch.push_back(i);
  }
  if (branch.size() > 1) return false;

  if (branch.size() == 1) {
    // D_n, E_6, E_7, E_8: simply laced star with three arms.
    std::vector<std::size_t> arms;
    for (Gen start : adj[branch[0]]) {
      std::size_t prev = branch[0];
      std::size_t cur = static_cast<std::size_t>(start);
      std::size_t len = 1;
      while (true) {
        if (label(prev, cur) != 3) return false;
        if (adj[cur].size() == 1) break;
        std::size_t next = static_cast<std::size_t>(adj[cur][0]) == prev ? static_cast<std::size_t>(adj[cur][1])
                                                                          : static_cast<std::size_t>(adj[cur][0]);
        prev = cur;
        cur = next;
        ++len;
      }
      arms.push_back(len);
    }
    std::sort(arms.begin(), arms.end());
    if (arms[0] == 1 && arms[1] == 1) return true;
    return arms[0] == 1 && arms[1] == 2 && arms[2] <= 4;
  }

  // Path: walk from an endpoint collecting bond labels.
  std::size_t end = 0;
  while (adj[end].size() != 1) ++end;
  std::vector<int> labels;
  std::size_t prev = n;
  std::size_t cur = end;
  while (true) {
    std::size_t next = n;
    for (Gen g : adj[cur]) {
      if (static_cast<std::size_t>(g) != prev) next = static_cast<std::size_t>(g);
    }
    if (next == n) break;
    labels.push_back(label(cur, next));
    prev = cur;
    cur = next;
  }
  std::size_t heavy = 0;
  std::size_t heavy_pos = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 3) {
      ++heavy;
      heavy_pos = i;
    }
  }
  if (heavy == 0) return true;  // A_n
  if (heavy > 1) return false;
  const int h = labels[heavy_pos];
  const bool at_end = heavy_pos == 0 || heavy_pos + 1 == labels.size();
  if (h == 4) return at_end || (n == 4 && heavy_pos == 1);  // B_n or F_4
  if (h == 5) return at_end && n <= 4;                       // H_3, H_4
  return false;
}

}  // namespace

bool CoxeterMatrix::is_finite() const {
  std::vector<bool> seen(static_cast<std::size_t>(rank_), false);
  for (Gen root = 0; root < rank_; ++root) {
    if (seen[static_cast<std::size_t>(root)]) continue;
    std::vector<Gen> nodes{root};
    seen[static_cast<std::size_t>(root)] = true;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (Gen t = 0; t < rank_; ++t) {
        if (!seen[static_cast<std::size_t>(t)] && order(nodes[i], t) != 2 && t != nodes[i]) {
          seen[static_cast<std::size_t>(t)] = true;
          nodes.push_back(t);
        }
      }
    }
    std::sort(nodes.begin(), nodes.end());
    if (!component_is_finite(*this, nodes)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<int> to_int(std::string_view s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

CoxeterMatrix path_matrix(int rank) {
  CoxeterMatrix m(rank);
  for (Gen s = 0; s + 1 < rank; ++s) m.set_order(s, s + 1, 3);
  return m;
}

}  // namespace

CoxeterMatrix parse_matrix_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<CoxeterMatrix> matrix;
  std::vector<int> given;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::istringstream fields{std::string(body)};
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    const std::string where = "matrix file line " + std::to_string(line_no) + ": ";
    if (!matrix) {
      if (tok.size() != 2 || tok[0] != "rank") throw ParseError(where + "expected 'rank N'");
      auto n = to_int(tok[1]);
      if (!n) throw ParseError(where + "bad rank");
      matrix.emplace(*n);
      given.assign(static_cast<std::size_t>(*n * *n), -1);
      continue;
    }
    if (tok.size() != 3) throw ParseError(where + "expected 's t m'");
    auto s = to_int(tok[0]);
    auto t = to_int(tok[1]);
    if (!s || !t || *s < 1 || *t < 1 || *s > matrix->rank() || *t > matrix->rank()) {
      throw ParseError(where + "generator index out of range");
    }
    int m = 0;
    if (tok[2] == "inf") {
      m = CoxeterMatrix::kInfinity;
    } else {
      auto parsed = to_int(tok[2]);
      if (!parsed || *parsed < 2) throw ParseError(where + "entry must be an integer >= 2 or 'inf'");
      m = *parsed;
    }
    if (*s == *t) throw ParseError(where + "diagonal entries cannot be specified");
    const int rank = matrix->rank();
    auto& a = given[static_cast<std::size_t>((*s - 1) * rank + (*t - 1))];
    auto& b = given[static_cast<std::size_t>((*t - 1) * rank + (*s - 1))];
    if ((a != -1 && a != m) || (b != -1 && b != m)) throw ParseError(where + "asymmetric matrix entry");
    a = b = m;
    matrix->set_order(*s - 1, *t - 1, m);
  }
  if (!matrix) throw ParseError("matrix file is empty");
  return *matrix;
}

CoxeterMatrix parse_coxeter_spec(std::string_view raw) {
  const std::string_view spec = trim(raw);
  if (spec.rfind("file:", 0) == 0) {
    const std::string path(spec.substr(5));
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open matrix file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_matrix_text(buf.str());
  }
  if (spec == "Aff-A1") {
    CoxeterMatrix m(2);
    m.set_order(0, 1, CoxeterMatrix::kInfinity);
    return m;
  }
  if (spec == "Aff-A2") {
    CoxeterMatrix m(3);
    m.set_order(0, 1, 3);
    m.set_order(1, 2, 3);
    m.set_order(0, 2, 3);
    return m;
  }
  if (spec.rfind("I2(", 0) == 0 && spec.back() == ')') {
    std::string_view arg = spec.substr(3, spec.size() - 4);
    CoxeterMatrix m(2);
    if (arg == "inf") {
      m.set_order(0, 1, CoxeterMatrix::kInfinity);
      return m;
    }
    auto order = to_int(arg);
    if (!order || *order < 2) throw ParseError("I2(m) needs m >= 2 or inf: " + std::string(spec));
    m.set_order(0, 1, *order);
    return m;
  }
  if (spec.size() >= 2 && std::isupper(static_cast<unsigned char>(spec[0]))) {
    auto n = to_int(spec.substr(1));
    if (n) {
      const char type = spec[0];
      const int r = *n;
      if (type == 'A' && r >= 1 && r <= kMaxRank) return path_matrix(r);
      if (type == 'B' && r >= 2 && r <= kMaxRank) {
        CoxeterMatrix m = path_matrix(r);
        m.set_order(r - 2, r - 1, 4);
        return m;
      }
      if (type == 'D' && r >= 4 && r <= kMaxRank) {
        CoxeterMatrix d(r);
        for (Gen s = 0; s + 2 < r; ++s) d.set_order(s, s + 1, 3);
        d.set_order(r - 3, r - 1, 3);
        return d;
      }
      if (type == 'F' && r == 4) {
        CoxeterMatrix m = path_matrix(4);
        m.set_order(1, 2, 4);
        return m;
      }
      if (type == 'G' && r == 2) {
        CoxeterMatrix m(2);
        m.set_order(0, 1, 6);
        return m;
      }
      if (type == 'H' && (r == 3 || r == 4)) {
        CoxeterMatrix m = path_matrix(r);
        m.set_order(0, 1, 5);
        return m;
      }
    }
  }
  throw ParseError("unknown Coxeter type: " + std::string(spec));
}

// ---------------------------------------------------------------------------
// Words

bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

std::string render_word(const Word& word) {
  if (word.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(word[i] + 1);
  }
  return out;
}

Word parse_word(std::string_view text) {
  text = trim(text);
  if (text == "e" || text.empty()) return {};
  Word w;
  while (true) {
    std::size_t comma = text.find(',');
    auto g = to_int(trim(text.substr(0, comma)));
    if (!g || *g < 1) throw ParseError("malformed element word: " + std::string(text));
    w.push_back(*g - 1);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return w;
}

namespace {

// Applies the braid move at position i if the alternating pattern of length
// m_st starts there; returns false otherwise.
bool braid_move_at(const Word& w, std::size_t i, const CoxeterMatrix& matrix, Word& out) {
  const Gen s = w[i];
  const Gen t = w[i + 1];
  if (s == t) return false;
  const int m = matrix.order(s, t);
  if (m == CoxeterMatrix::kInfinity || i + static_cast<std::size_t>(m) > w.size()) return false;
  for (int j = 0; j < m; ++j) {
    if (w[i + static_cast<std::size_t>(j)] != (j % 2 == 0 ? s : t)) return false;
  }
  out = w;
  for (int j = 0; j < m; ++j) out[i + static_cast<std::size_t>(j)] = (j % 2 == 0 ? t : s);
  return true;
}

struct VecHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::size_t h = w.size();
    for (Gen g : w) h = h * 1000003u ^ static_cast<std::size_t>(g + 1);
    return h;
  }
};

// Explores the braid class of `word`. If a word with an adjacent repeated
// letter shows up, returns it with that pair cancelled (the input was not
// reduced). Otherwise fills `closure` and returns nullopt.
std::optional<Word> explore(const Word& word, const CoxeterMatrix& matrix, std::vector<Word>* closure,
                            bool stop_on_square) {
  std::unordered_set<Word, VecHash> seen{word};
  std::vector<Word> stack{word};
  std::vector<Word> found{word};
  Word moved;
  while (!stack.empty()) {
    Word w = std::move(stack.back());
    stack.pop_back();
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (stop_on_square && w[i] == w[i + 1]) {
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(i + 2));
        return w;
      }
      if (braid_move_at(w, i, matrix, moved) && seen.insert(moved).second) {
        stack.push_back(moved);
        found.push_back(moved);
      }
    }
  }
  if (closure) {
    std::sort(found.begin(), found.end());
    *closure = std::move(found);
  }
  return std::nullopt;
}

void check_generators(const Word& word, const CoxeterMatrix& matrix) {
  for (Gen g : word) {
    if (g < 0 || g >= matrix.rank()) {
      throw OutOfRangeError("generator index " + std::to_string(g + 1) + " out of range for rank " +
                            std::to_string(matrix.rank()));
    }
  }
}

}  // namespace

std::vector<Word> braid_closure(const Word& word, const CoxeterMatrix& matrix) {
  check_generators(word, matrix);
  std::vector<Word> closure;
  explore(word, matrix, &closure, false);
  return closure;
}

Word canonical_word(const Word& word, const CoxeterMatrix& matrix) {
  check_generators(word, matrix);
  // Free cancellation first; it is cheap and shrinks the braid classes.
  Word w;
  for (Gen g : word) {
    if (!w.empty() && w.back() == g) {
      w.pop_back();
    } else {
      w.push_back(g);
    }
  }
  std::vector<Word> closure;
  while (auto shorter = explore(w, matrix, &closure, true)) w = std::move(*shorter);
  return closure.front();
}

// ---------------------------------------------------------------------------
// GroupTable

GroupTable::GroupTable(const CoxeterMatrix& matrix, std::optional<int> cap) : matrix_(matrix), cap_(cap) {}
GroupTable::GroupTable(GroupTable&&) noexcept = default;
GroupTable& GroupTable::operator=(GroupTable&&) noexcept = default;
GroupTable::~GroupTable() = default;

GroupTable GroupTable::enumerate(const CoxeterMatrix& matrix, std::optional<int> cap, EnumerateOptions options) {
  if (cap && *cap < 0) throw OutOfRangeError("length cap must be >= 0");
  GroupTable t(matrix, cap);
  const int rank = matrix.rank();
  const auto r = static_cast<std::size_t>(rank);
  const GenSet all_gens = rank == 32 ? ~GenSet{0} : ((GenSet{1} << rank) - 1);

  t.elements_.push_back(Element{{}, ElementId{0}});
  t.rdesc_.push_back(0);
  t.right_.assign(r, kBeyondCap);
  t.layer_begin_ = {0, 1};

  auto right = [&](std::size_t x, Gen s) -> std::uint32_t& { return t.right_[x * r + static_cast<std::size_t>(s)]; };

  // If x = z·(alternating word of length m-1 ending in t), returns
  // z·(alternating word of length m-1 ending in s), where m = m_st: then
  // x·s = x'·t is the same element. Only links below layer ℓ(x) are used.
  auto partner = [&](std::size_t x, Gen s, Gen tt) -> std::optional<std::size_t> {
    const int m = matrix.order(s, tt);
    if (m == CoxeterMatrix::kInfinity) return std::nullopt;
    std::size_t cur = x;
    Gen letter = tt;
    for (int i = 0; i < m - 1; ++i) {
      if (!contains(t.rdesc_[cur], letter)) return std::nullopt;
      cur = right(cur, letter);
      letter = letter == tt ? s : tt;
    }
    // Going back up spells the word ending in s; its first letter is s when
    // m - 1 is odd.
    letter = (m - 1) % 2 == 1 ? s : tt;
    for (int i = 0; i < m - 1; ++i) {
      cur = right(cur, letter);
      letter = letter == tt ? s : tt;
    }
    return cur;
  };

  for (int n = 0; !cap || n < *cap; ++n) {
    const std::size_t begin = t.layer_begin_[static_cast<std::size_t>(n)];
    const std::size_t end = t.layer_begin_[static_cast<std::size_t>(n) + 1];
    // Pairs (x, s) are visited in (id, s) order. The first pair reaching an
    // element spells its ShortLex-least word, so creation order is ShortLex.
    for (std::size_t x = begin; x < end; ++x) {
      for (Gen s = 0; s < rank; ++s) {
        if (contains(t.rdesc_[x], s)) continue;
        std::optional<std::uint32_t> existing;
        for (Gen tt = 0; tt < rank && !existing; ++tt) {
          if (tt == s) continue;
          if (auto xp = partner(x, s, tt); xp && (*xp < x || (*xp == x && tt < s))) {
            existing = right(*xp, tt);
          }
        }
        std::uint32_t y;
        if (existing) {
          y = *existing;
        } else {
          if (t.elements_.size() >= options.max_elements) {
            throw ResourceLimitError("enumeration exceeds the element bound of " +
                                     std::to_string(options.max_elements));
          }
          y = static_cast<std::uint32_t>(t.elements_.size());
          Word w = t.elements_[x].word;
          w.push_back(s);
          t.elements_.push_back(Element{std::move(w), ElementId{y}});
          t.rdesc_.push_back(0);
          t.right_.resize(t.elements_.size() * r, kBeyondCap);
        }
        right(x, s) = y;
        right(y, s) = static_cast<std::uint32_t>(x);
        t.rdesc_[y] |= GenSet{1} << s;
      }
    }
    if (t.elements_.size() == end) break;
    t.layer_begin_.push_back(t.elements_.size());
  }

  // The group is exhausted iff the top layer holds the longest element,
  // recognisable by having every generator as a right descent.
  const std::size_t top = t.layer_begin_[t.layer_begin_.size() - 2];
  for (std::size_t x = top; x < t.elements_.size(); ++x) {
    if (t.rdesc_[x] == all_gens) t.complete_ = true;
  }

  // x^{-1} spells the reversed word; then s·x = (x^{-1}·s)^{-1}.
  std::vector<std::uint32_t> inverse(t.elements_.size());
  for (std::size_t x = 0; x < t.elements_.size(); ++x) {
    std::size_t cur = 0;
    const Word& w = t.elements_[x].word;
    for (auto it = w.rbegin(); it != w.rend(); ++it) cur = right(cur, *it);
    inverse[x] = static_cast<std::uint32_t>(cur);
  }
  t.ldesc_.resize(t.elements_.size());
  t.left_.assign(t.elements_.size() * r, kBeyondCap);
  for (std::size_t x = 0; x < t.elements_.size(); ++x) {
    t.ldesc_[x] = t.rdesc_[inverse[x]];
    for (Gen s = 0; s < rank; ++s) {
      const std::uint32_t y = right(inverse[x], s);
      if (y != kBeyondCap) t.left_[x * r + static_cast<std::size_t>(s)] = inverse[y];
    }
  }

  t.interval_once_ = std::make_unique<std::once_flag[]>(t.elements_.size());
  t.intervals_.resize(t.elements_.size());
  return t;
}

std::vector<ElementId> GroupTable::all() const {
  std::vector<ElementId> ids(elements_.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = ElementId{static_cast<std::uint32_t>(i)};
  return ids;
}

std::vector<ElementId> GroupTable::layer(int n) const {
  std::vector<ElementId> ids;
  if (n < 0 || n > max_length()) return ids;
  for (std::size_t i = layer_begin_[static_cast<std::size_t>(n)]; i < layer_begin_[static_cast<std::size_t>(n) + 1]; ++i) {
    ids.push_back(ElementId{static_cast<std::uint32_t>(i)});
  }
  return ids;
}

std::optional<ElementId> GroupTable::try_mult(ElementId x, Gen s, Side side) const {
  const auto& table = side == Side::right ? right_ : left_;
  const std::uint32_t y = table[static_cast<std::size_t>(x.value) * static_cast<std::size_t>(rank()) +
                                static_cast<std::size_t>(s)];
  if (y == kBeyondCap) return std::nullopt;
  return ElementId{y};
}

ElementId GroupTable::mult(ElementId x, Gen s, Side side) const {
  if (s < 0 || s >= rank()) throw OutOfRangeError("generator index out of range");
  if (auto y = try_mult(x, s, side)) return *y;
  throw OutOfRangeError("product " + std::string(side == Side::left ? "s*x" : "x*s") + " with x = " + render(x) +
                        ", s = " + std::to_string(s + 1) + " exceeds the length cap " +
                        std::to_string(max_length()));
}

ElementId GroupTable::find(const Word& word) const {
  check_generators(word, matrix_);
  ElementId cur = identity();
  for (Gen s : word) {
    if (auto next = try_mult(cur, s, Side::right)) {
      cur = *next;
      continue;
    }
    // A prefix left the cap; the word may still come back down.
    const Word canonical = canonical_word(word, matrix_);
    if (static_cast<int>(canonical.size()) > max_length()) {
      throw OutOfRangeError("element " + render_word(canonical) + " exceeds the length cap " +
                            std::to_string(max_length()));
    }
    return find(canonical);
  }
  return cur;
}

const std::vector<ElementId>& GroupTable::lower_interval(ElementId x) const {
  std::call_once(interval_once_[x.value], [&] {
    std::vector<ElementId> out;
    if (x == identity()) {
      out.push_back(x);
    } else {
      // [e, x] = [e, xs] ∪ [e, xs]·s for any right descent s of x.
      const Gen s = std::countr_zero(right_descents(x));
      const std::vector<ElementId>& below = lower_interval(mult(x, s, Side::right));
      out.reserve(2 * below.size());
      for (ElementId y : below) {
        out.push_back(y);
        out.push_back(mult(y, s, Side::right));
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    intervals_[x.value] = std::move(out);
  });
  return intervals_[x.value];
}

bool GroupTable::bruhat_leq(ElementId x, ElementId y) const {
  if (length(x) > length(y)) return false;
  const auto& below = lower_interval(y);
  return std::binary_search(below.begin(), below.end(), x);
}

std::vector<ElementId> GroupTable::min_coset_reps(GenSet I) const {
  std::vector<ElementId> reps;
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if ((ldesc_[i] & I) == 0) reps.push_back(ElementId{static_cast<std::uint32_t>(i)});
  }
  return reps;
}

std::optional<ElementId> GroupTable::longest() const {
  if (!complete_) return std::nullopt;
  return ElementId{static_cast<std::uint32_t>(elements_.size() - 1)};
}

}  // namespace kllab
