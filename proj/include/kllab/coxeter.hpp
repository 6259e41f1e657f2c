#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kllab {

/// Simple reflection index, 0-based. I/O is 1-based.
using Gen = int;
/// Sequence of generators.
using Word = std::vector<Gen>;
/// Bitmask over generators (bit s set <=> generator s present).
using GenSet = std::uint32_t;

inline constexpr int kMaxRank = 32;

enum class Side { left, right };

inline bool contains(GenSet set, Gen s) { return (set >> s) & 1U; }

/// Coxeter matrix with m[s][s] = 1 and m[s][t] = m[t][s] >= 2 off the
/// diagonal. An infinite bond is stored as kInfinity.
class CoxeterMatrix {
 public:
  static constexpr int kInfinity = 0;

  explicit CoxeterMatrix(int rank);

  int rank() const noexcept { return rank_; }
  int order(Gen s, Gen t) const { return m_[static_cast<std::size_t>(s * rank_ + t)]; }
  bool is_infinite_bond(Gen s, Gen t) const { return order(s, t) == kInfinity; }

  /// Sets m[s][t] = m[t][s]. Throws ParseError for invalid entries.
  void set_order(Gen s, Gen t, int m);

  /// Finiteness of W, decided by classifying the connected components of the
  /// Coxeter graph against the finite types A, B, D, E, F, H, I.
  bool is_finite() const;

  /// True iff the matrix is the type A_n presentation (a path with all bonds 3
  /// in node order, or rank 1).
  bool is_type_a() const;

  friend bool operator==(const CoxeterMatrix&, const CoxeterMatrix&) = default;

 private:
  int rank_;
  std::vector<int> m_;
};

/// Parses a preset type ("A3", "B3", "D4", "F4", "G2", "H3", "H4", "I2(m)",
/// "I2(inf)", "Aff-A1", "Aff-A2"; A_n/B_n/D_n for any admissible n) or
/// "file:PATH". Presets use Bourbaki node numbering.
CoxeterMatrix parse_coxeter_spec(std::string_view spec);

/// Reads the line format "rank N" followed by "s t m" lines (1-based
/// generators, m >= 2 or "inf"); unspecified pairs default to 2.
CoxeterMatrix parse_matrix_text(std::string_view text);

/// All words reachable from `word` by braid moves (st... <-> ts..., m_st
/// letters each, none for infinite bonds), sorted ShortLex.
std::vector<Word> braid_closure(const Word& word, const CoxeterMatrix& matrix);

/// The ShortLex-least reduced word of the element `word` represents.
/// Throws OutOfRangeError for an invalid generator index.
Word canonical_word(const Word& word, const CoxeterMatrix& matrix);

/// ShortLex comparison: length first, then lexicographic.
bool shortlex_less(const Word& a, const Word& b);

/// Interned handle to a group element inside a GroupTable. Ids follow
/// length-then-ShortLex order of the canonical words, so comparing ids
/// compares in that order.
struct ElementId {
  std::uint32_t value = 0;
  friend auto operator<=>(ElementId, ElementId) = default;
};

/// Canonical element: reduced ShortLex-least word plus its interned id.
struct Element {
  Word word;
  ElementId id;
  int length() const { return static_cast<int>(word.size()); }
};

/// "1,2,1" (1-based) or "e" for the identity.
std::string render_word(const Word& word);
/// Inverse of render_word. Throws ParseError.
Word parse_word(std::string_view text);

struct EnumerateOptions {
  /// Refuse to store more elements than this.
  std::size_t max_elements = 2'000'000;
};

/// Every element of length <= cap, interned, with memoized one-sided
/// generator products, descent sets and Bruhat lower intervals.
///
/// Construction is single-threaded. Afterwards the table is frozen; the lazily
/// filled interval cache is synchronized, so concurrent reads are safe.
class GroupTable {
 public:
  /// Breadth-first closure of {e} under right multiplication, keeping lengths
  /// <= cap (no cap: run until the group is exhausted). Two products x·s and
  /// x'·t of the same length coincide exactly when x = z·(s t s ...)_{m-1}
  /// type suffixes match, so layers are built without solving the word
  /// problem. Throws ResourceLimitError when more than options.max_elements
  /// would be stored.
  static GroupTable enumerate(const CoxeterMatrix& matrix, std::optional<int> cap,
                              EnumerateOptions options = {});

  GroupTable(GroupTable&&) noexcept;
  GroupTable& operator=(GroupTable&&) noexcept;
  ~GroupTable();

  const CoxeterMatrix& matrix() const noexcept { return matrix_; }
  int rank() const noexcept { return matrix_.rank(); }
  std::size_t size() const noexcept { return elements_.size(); }
  /// Largest length held.
  int max_length() const noexcept { return static_cast<int>(layer_begin_.size()) - 2; }
  /// The cap requested at construction, if any.
  std::optional<int> cap() const noexcept { return cap_; }
  /// True iff the whole (necessarily finite) group is held.
  bool is_complete() const noexcept { return complete_; }

  ElementId identity() const noexcept { return ElementId{0}; }
  const Element& element(ElementId x) const { return elements_[x.value]; }
  const Word& word(ElementId x) const { return elements_[x.value].word; }
  int length(ElementId x) const { return static_cast<int>(elements_[x.value].word.size()); }
  std::string render(ElementId x) const { return render_word(word(x)); }

  /// Ids of every element, in id order.
  std::vector<ElementId> all() const;
  /// Ids of the elements of length exactly n.
  std::vector<ElementId> layer(int n) const;

  GenSet right_descents(ElementId x) const { return rdesc_[x.value]; }
  GenSet left_descents(ElementId x) const { return ldesc_[x.value]; }
  GenSet descents(ElementId x, Side side) const {
    return side == Side::right ? right_descents(x) : left_descents(x);
  }

  /// xs or sx. Throws OutOfRangeError if the product is longer than the cap.
  ElementId mult(ElementId x, Gen s, Side side) const;
  /// As mult(), but nullopt instead of throwing.
  std::optional<ElementId> try_mult(ElementId x, Gen s, Side side) const;

  /// Element represented by an arbitrary word over 0-based generators,
  /// followed through the multiplication table. Throws OutOfRangeError if it
  /// is longer than the cap or a generator is invalid.
  ElementId find(const Word& word) const;

  /// x <= y in the Bruhat order.
  bool bruhat_leq(ElementId x, ElementId y) const;
  /// The Bruhat interval [e, x] in id order, memoized.
  const std::vector<ElementId>& lower_interval(ElementId x) const;

  /// Minimal coset representatives for W_I \ W held in the table: the
  /// elements with no left descent in I, in id order.
  std::vector<ElementId> min_coset_reps(GenSet I) const;

  /// The longest element, when the table is complete.
  std::optional<ElementId> longest() const;

 private:
  GroupTable(const CoxeterMatrix& matrix, std::optional<int> cap);

  static constexpr std::uint32_t kBeyondCap = std::numeric_limits<std::uint32_t>::max();

  CoxeterMatrix matrix_;
  std::optional<int> cap_;
  bool complete_ = false;
  std::vector<Element> elements_;
  std::vector<std::size_t> layer_begin_;  // layer n = [layer_begin_[n], layer_begin_[n+1])
  std::vector<GenSet> rdesc_;
  std::vector<GenSet> ldesc_;
  std::vector<std::uint32_t> right_;  // id * rank + s
  std::vector<std::uint32_t> left_;

  mutable std::unique_ptr<std::once_flag[]> interval_once_;
  mutable std::vector<std::vector<ElementId>> intervals_;
};

}  // namespace kllab

template <>
struct std::hash<kllab::ElementId> {
  std::size_t operator()(kllab::ElementId x) const noexcept { return std::hash<std::uint32_t>{}(x.value); }
};
