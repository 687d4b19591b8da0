#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mucore {

enum class Kind : uint8_t {
  True,
  False,
  Prop,
  Not,
  And,
  Or,
  Next,
  Until,
  WeakUntil,
  Exists,
  Forall,
};

namespace detail {

struct Node {
  Kind kind;
  uint8_t flags;  // bit 0: contains quantifier, bit 1: contains modality
  uint32_t id;
  uint32_t name;  // interned name for Prop / quantified variable
  uint32_t size;  // node count of the syntax tree
  const Node* left;
  const Node* right;
};

constexpr uint8_t kHasQuant = 1;
constexpr uint8_t kHasModal = 2;

}  // namespace detail

// Immutable handle to an interned formula node. Structural equality is
// pointer equality; ids are assigned in creation order.
class Formula {
 public:
  Formula() = default;

  Kind kind() const { return n_->kind; }
  uint32_t id() const { return n_->id; }
  uint32_t size() const { return n_->size; }
  bool has_quantifier() const { return n_->flags & detail::kHasQuant; }
  bool has_modality() const { return n_->flags & detail::kHasModal; }

  // Valid for Prop, Exists, Forall.
  const std::string& name() const;

  // Left child, or the only child of a unary/quantifier node.
  Formula left() const { return Formula(n_->left); }
  Formula right() const { return Formula(n_->right); }
  Formula child() const { return Formula(n_->left); }

  bool is_constant() const { return kind() == Kind::True || kind() == Kind::False; }
  bool is_literal() const {
    return kind() == Kind::Prop || (kind() == Kind::Not && n_->left->kind == Kind::Prop);
  }

  explicit operator bool() const { return n_ != nullptr; }
  friend bool operator==(Formula a, Formula b) { return a.n_ == b.n_; }
  friend bool operator!=(Formula a, Formula b) { return a.n_ != b.n_; }
  friend bool operator<(Formula a, Formula b) { return a.n_->id < b.n_->id; }

  const detail::Node* raw() const { return n_; }

 private:
  explicit Formula(const detail::Node* n) : n_(n) {}
  const detail::Node* n_ = nullptr;

  friend class Factory;
};

struct FormulaHash {
  size_t operator()(Formula f) const { return f.id(); }
};

// ---- construction ----------------------------------------------------------

Formula tt();
Formula ff();
Formula prop(std::string_view name);
Formula neg(Formula a);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula next(Formula a);
Formula until(Formula a, Formula b);
Formula wuntil(Formula a, Formula b);
Formula exists(std::string_view var, Formula body);
Formula forall(std::string_view var, Formula body);

// Derived forms, stored desugared.
Formula globally(Formula a);    // a W FALSE
Formula eventually(Formula a);  // TRUE U a
Formula implies(Formula a, Formula b);  // !a | b

// Left-associated folds; empty input yields the neutral element.
Formula conj_all(std::span<const Formula> fs);
Formula disj_all(std::span<const Formula> fs);

bool is_globally(Formula f);    // f = A W FALSE
bool is_eventually(Formula f);  // f = TRUE U A

// ---- occurrences -----------------------------------------------------------

enum class Step : uint8_t { Only, Left, Right };

struct Occurrence {
  std::vector<Step> path;

  friend bool operator==(const Occurrence&, const Occurrence&) = default;
  friend auto operator<=>(const Occurrence&, const Occurrence&) = default;

  Occurrence extended(Step s) const {
    Occurrence o{path};
    o.path.push_back(s);
    return o;
  }
  // True when this path is a proper or improper prefix of other.
  bool prefix_of(const Occurrence& other) const;
  std::string to_string() const;
};

struct OccurrenceEntry {
  Occurrence occ;
  Formula sub;
  bool positive;
};

// One entry per node of T(f), in preorder.
std::vector<OccurrenceEntry> occurrences(Formula f);

// Resolve a path; throws std::invalid_argument if it does not resolve.
Formula subformula_at(Formula f, const Occurrence& occ);

// Parity of negations strictly above the node (even means positive).
bool positive_at(Formula f, const Occurrence& occ);

// Replace the node at occ by g, leaving every other node untouched.
Formula substitute(Formula f, const Occurrence& occ, Formula g);

// Replace every occurrence structurally equal to h by g.
Formula substitute_all(Formula f, Formula h, Formula g);

// ---- normalization ---------------------------------------------------------

// Constant-collapsing rules applied to fixpoint; semantics-preserving.
Formula simplify(Formula f);

// Push negations down to propositions; accepts quantifier-free or prenex
// input and keeps the prefix in place.
Formula to_nnf(Formula f);

bool is_nnf(Formula f);

// ---- queries ---------------------------------------------------------------

// Names of propositions with a free occurrence, sorted.
std::vector<std::string> free_props(Formula f);

struct PrefixItem {
  bool universal;
  std::string var;
};

// Splits a leading quantifier prefix from its matrix.
std::pair<std::vector<PrefixItem>, Formula> split_prefix(Formula f);

// ---- printing --------------------------------------------------------------

// Re-sugars G/F; parse(print(f)) is structurally f.
std::string print(Formula f);

}  // namespace mucore
