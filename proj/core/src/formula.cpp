#include "mucore/formula.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace mucore {

// ============================================================================
// Interning
// ============================================================================

class Factory {
 public:
  static Factory& instance() {
    static Factory f;
    return f;
  }

  uint32_t intern_name(std::string_view s) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = name_ids_.find(std::string(s));
    if (it != name_ids_.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(names_.size());
    names_.emplace_back(s);
    name_ids_.emplace(names_.back(), id);
    return id;
  }

  const std::string& name_of(uint32_t id) const { return names_[id]; }

  Formula make(Kind k, uint32_t name, const detail::Node* l, const detail::Node* r) {
    std::lock_guard<std::mutex> lock(mu_);
    Key key{static_cast<uint32_t>(k), name, l ? l->id : 0, r ? r->id : 0};
    auto it = table_.find(key);
    if (it != table_.end()) return Formula(it->second);

    detail::Node n;
    n.kind = k;
    n.flags = 0;
    if (l) n.flags |= l->flags;
    if (r) n.flags |= r->flags;
    if (k == Kind::Exists || k == Kind::Forall) n.flags |= detail::kHasQuant;
    if (k == Kind::Next || k == Kind::Until || k == Kind::WeakUntil)
      n.flags |= detail::kHasModal;
    n.id = static_cast<uint32_t>(nodes_.size()) + 1;
    n.name = name;
    n.size = 1 + (l ? l->size : 0) + (r ? r->size : 0);
    n.left = l;
    n.right = r;
    nodes_.push_back(n);
    const detail::Node* p = &nodes_.back();
    table_.emplace(key, p);
    return Formula(p);
  }

 private:
  struct Key {
    uint32_t kind, name, l, r;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    size_t operator()(const Key& k) const {
      uint64_t h = 1469598103934665603ull;
      for (uint64_t v : {k.kind, k.name, k.l, k.r}) {
        h ^= v;
        h *= 1099511628211ull;
      }
      return static_cast<size_t>(h);
    }
  };

  std::mutex mu_;
  std::deque<detail::Node> nodes_;
  std::unordered_map<Key, const detail::Node*, KeyHash> table_;
  std::unordered_map<std::string, uint32_t> name_ids_;
  std::deque<std::string> names_;
};

const std::string& Formula::name() const {
  return Factory::instance().name_of(n_->name);
}

// ============================================================================
// Construction
// ============================================================================

namespace {

Formula make0(Kind k) { return Factory::instance().make(k, 0, nullptr, nullptr); }

Formula make1(Kind k, Formula a) {
  return Factory::instance().make(k, 0, a.raw(), nullptr);
}

Formula make2(Kind k, Formula a, Formula b) {
  return Factory::instance().make(k, 0, a.raw(), b.raw());
}

}  // namespace

Formula tt() {
  static Formula f = make0(Kind::True);
  return f;
}

Formula ff() {
  static Formula f = make0(Kind::False);
  return f;
}

Formula prop(std::string_view name) {
  if (name.empty()) throw std::invalid_argument("empty proposition name");
  for (std::string_view kw : {"TRUE", "FALSE", "X", "F", "G", "U", "W"})
    if (name == kw)
      throw std::invalid_argument("reserved word used as proposition name");
  uint32_t id = Factory::instance().intern_name(name);
  return Factory::instance().make(Kind::Prop, id, nullptr, nullptr);
}

Formula neg(Formula a) { return make1(Kind::Not, a); }
Formula conj(Formula a, Formula b) { return make2(Kind::And, a, b); }
Formula disj(Formula a, Formula b) { return make2(Kind::Or, a, b); }
Formula next(Formula a) { return make1(Kind::Next, a); }
Formula until(Formula a, Formula b) { return make2(Kind::Until, a, b); }
Formula wuntil(Formula a, Formula b) { return make2(Kind::WeakUntil, a, b); }

Formula exists(std::string_view var, Formula body) {
  uint32_t id = Factory::instance().intern_name(var);
  return Factory::instance().make(Kind::Exists, id, body.raw(), nullptr);
}

Formula forall(std::string_view var, Formula body) {
  uint32_t id = Factory::instance().intern_name(var);
  return Factory::instance().make(Kind::Forall, id, body.raw(), nullptr);
}

Formula globally(Formula a) { return wuntil(a, ff()); }
Formula eventually(Formula a) { return until(tt(), a); }
Formula implies(Formula a, Formula b) { return disj(neg(a), b); }

Formula conj_all(std::span<const Formula> fs) {
  if (fs.empty()) return tt();
  Formula acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}

Formula disj_all(std::span<const Formula> fs) {
  if (fs.empty()) return ff();
  Formula acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
  return acc;
}

bool is_globally(Formula f) {
  return f.kind() == Kind::WeakUntil && f.right() == ff();
}

bool is_eventually(Formula f) {
  return f.kind() == Kind::Until && f.left() == tt();
}

// ============================================================================
// Occurrences
// ============================================================================

namespace {

// Children in traversal order with the step that reaches them.
int arity(Kind k) {
  switch (k) {
    case Kind::True:
    case Kind::False:
    case Kind::Prop:
      return 0;
    case Kind::Not:
    case Kind::Next:
    case Kind::Exists:
    case Kind::Forall:
      return 1;
    default:
      return 2;
  }
}

void collect_occurrences(Formula f, std::vector<Step>& path, int negs,
                         std::vector<OccurrenceEntry>& out) {
  out.push_back({Occurrence{path}, f, negs % 2 == 0});
  int a = arity(f.kind());
  if (a == 1) {
    path.push_back(Step::Only);
    collect_occurrences(f.child(), path, negs + (f.kind() == Kind::Not ? 1 : 0), out);
    path.pop_back();
  } else if (a == 2) {
    path.push_back(Step::Left);
    collect_occurrences(f.left(), path, negs, out);
    path.back() = Step::Right;
    collect_occurrences(f.right(), path, negs, out);
    path.pop_back();
  }
}

Formula descend(Formula f, Step s) {
  int a = arity(f.kind());
  if (a == 1 && s == Step::Only) return f.child();
  if (a == 2 && s == Step::Left) return f.left();
  if (a == 2 && s == Step::Right) return f.right();
  throw std::invalid_argument("occurrence path does not resolve");
}

}  // namespace

bool Occurrence::prefix_of(const Occurrence& other) const {
  if (path.size() > other.path.size()) return false;
  return std::equal(path.begin(), path.end(), other.path.begin());
}

std::string Occurrence::to_string() const {
  if (path.empty()) return "root";
  std::string s;
  for (Step st : path) {
    if (!s.empty()) s += '.';
    s += st == Step::Only ? 'o' : st == Step::Left ? 'l' : 'r';
  }
  return s;
}

std::vector<OccurrenceEntry> occurrences(Formula f) {
  std::vector<OccurrenceEntry> out;
  out.reserve(f.size());
  std::vector<Step> path;
  collect_occurrences(f, path, 0, out);
  return out;
}

Formula subformula_at(Formula f, const Occurrence& occ) {
  Formula cur = f;
  for (Step s : occ.path) cur = descend(cur, s);
  return cur;
}

bool positive_at(Formula f, const Occurrence& occ) {
  Formula cur = f;
  int negs = 0;
  for (Step s : occ.path) {
    if (cur.kind() == Kind::Not) ++negs;
    cur = descend(cur, s);
  }
  return negs % 2 == 0;
}

namespace {

Formula rebuild(Formula f, Formula a, Formula b) {
  switch (f.kind()) {
    case Kind::Not:
      return neg(a);
    case Kind::Next:
      return next(a);
    case Kind::Exists:
      return Factory::instance().make(Kind::Exists, f.raw()->name, a.raw(), nullptr);
    case Kind::Forall:
      return Factory::instance().make(Kind::Forall, f.raw()->name, a.raw(), nullptr);
    case Kind::And:
      return conj(a, b);
    case Kind::Or:
      return disj(a, b);
    case Kind::Until:
      return until(a, b);
    case Kind::WeakUntil:
      return wuntil(a, b);
    default:
      return f;
  }
}

Formula substitute_rec(Formula f, const Occurrence& occ, size_t i, Formula g) {
  if (i == occ.path.size()) return g;
  Step s = occ.path[i];
  Formula child = descend(f, s);
  Formula repl = substitute_rec(child, occ, i + 1, g);
  if (arity(f.kind()) == 1) return rebuild(f, repl, Formula());
  if (s == Step::Left) return rebuild(f, repl, f.right());
  return rebuild(f, f.left(), repl);
}

}  // namespace

Formula substitute(Formula f, const Occurrence& occ, Formula g) {
  subformula_at(f, occ);  // validate the path up front
  return substitute_rec(f, occ, 0, g);
}

Formula substitute_all(Formula f, Formula h, Formula g) {
  std::unordered_map<const detail::Node*, Formula> memo;
  auto rec = [&](auto&& self, Formula cur) -> Formula {
    if (cur == h) return g;
    if (arity(cur.kind()) == 0) return cur;
    auto it = memo.find(cur.raw());
    if (it != memo.end()) return it->second;
    Formula out;
    if (arity(cur.kind()) == 1) {
      out = rebuild(cur, self(self, cur.child()), Formula());
    } else {
      out = rebuild(cur, self(self, cur.left()), self(self, cur.right()));
    }
    memo.emplace(cur.raw(), out);
    return out;
  };
  return rec(rec, f);
}

// ============================================================================
// Simplification
// ============================================================================

namespace {

Formula simplify_node(Formula f, Formula a, Formula b) {
  switch (f.kind()) {
    case Kind::Not:
      if (a == tt()) return ff();
      if (a == ff()) return tt();
      return neg(a);
    case Kind::And:
      if (a == tt()) return b;
      if (b == tt()) return a;
      if (a == ff() || b == ff()) return ff();
      return conj(a, b);
    case Kind::Or:
      if (a == tt() || b == tt()) return tt();
      if (a == ff()) return b;
      if (b == ff()) return a;
      return disj(a, b);
    case Kind::Next:
      if (a.is_constant()) return a;
      return next(a);
    case Kind::Until:
      if (b == tt()) return tt();
      return until(a, b);
    case Kind::WeakUntil:
      if (b == tt() || a == tt()) return tt();
      return wuntil(a, b);
    case Kind::Exists:
    case Kind::Forall:
      if (a.is_constant()) return a;
      return rebuild(f, a, Formula());
    default:
      return f;
  }
}

}  // namespace

Formula simplify(Formula f) {
  std::unordered_map<const detail::Node*, Formula> memo;
  auto rec = [&](auto&& self, Formula cur) -> Formula {
    if (arity(cur.kind()) == 0) return cur;
    auto it = memo.find(cur.raw());
    if (it != memo.end()) return it->second;
    Formula out;
    if (arity(cur.kind()) == 1) {
      out = simplify_node(cur, self(self, cur.child()), Formula());
    } else {
      out = simplify_node(cur, self(self, cur.left()), self(self, cur.right()));
    }
    memo.emplace(cur.raw(), out);
    return out;
  };
  return rec(rec, f);
}

// ============================================================================
// Negative normal form
// ============================================================================

namespace {

struct NnfKey {
  const detail::Node* n;
  bool negated;
  bool operator==(const NnfKey&) const = default;
};

struct NnfKeyHash {
  size_t operator()(const NnfKey& k) const {
    return k.n->id * 2 + (k.negated ? 1 : 0);
  }
};

}  // namespace

Formula to_nnf(Formula f) {
  std::unordered_map<NnfKey, Formula, NnfKeyHash> memo;
  auto rec = [&](auto&& self, Formula cur, bool negd) -> Formula {
    NnfKey key{cur.raw(), negd};
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    Formula out;
    switch (cur.kind()) {
      case Kind::True:
        out = negd ? ff() : tt();
        break;
      case Kind::False:
        out = negd ? tt() : ff();
        break;
      case Kind::Prop:
        out = negd ? neg(cur) : cur;
        break;
      case Kind::Not:
        out = self(self, cur.child(), !negd);
        break;
      case Kind::And:
        out = negd ? disj(self(self, cur.left(), true), self(self, cur.right(), true))
                   : conj(self(self, cur.left(), false), self(self, cur.right(), false));
        break;
      case Kind::Or:
        out = negd ? conj(self(self, cur.left(), true), self(self, cur.right(), true))
                   : disj(self(self, cur.left(), false), self(self, cur.right(), false));
        break;
      case Kind::Next:
        out = next(self(self, cur.child(), negd));
        break;
      case Kind::Until: {
        if (negd) {
          if (is_eventually(cur)) {
            out = globally(self(self, cur.right(), true));
          } else {
            Formula nb = self(self, cur.right(), true);
            Formula na = self(self, cur.left(), true);
            out = wuntil(nb, conj(na, nb));
          }
        } else {
          out = until(self(self, cur.left(), false), self(self, cur.right(), false));
        }
        break;
      }
      case Kind::WeakUntil: {
        if (negd) {
          if (is_globally(cur)) {
            out = eventually(self(self, cur.left(), true));
          } else {
            Formula nb = self(self, cur.right(), true);
            Formula na = self(self, cur.left(), true);
            out = until(nb, conj(na, nb));
          }
        } else {
          out = wuntil(self(self, cur.left(), false), self(self, cur.right(), false));
        }
        break;
      }
      case Kind::Exists: {
        Formula body = self(self, cur.child(), negd);
        out = negd ? forall(cur.name(), body) : exists(cur.name(), body);
        break;
      }
      case Kind::Forall: {
        Formula body = self(self, cur.child(), negd);
        out = negd ? exists(cur.name(), body) : forall(cur.name(), body);
        break;
      }
    }
    memo.emplace(key, out);
    return out;
  };
  return rec(rec, f, false);
}

bool is_nnf(Formula f) {
  std::unordered_set<const detail::Node*> seen;
  auto rec = [&](auto&& self, Formula cur) -> bool {
    if (!seen.insert(cur.raw()).second) return true;
    if (cur.kind() == Kind::Not) return cur.child().kind() == Kind::Prop;
    int a = arity(cur.kind());
    if (a == 0) return true;
    if (a == 1) return self(self, cur.child());
    return self(self, cur.left()) && self(self, cur.right());
  };
  return rec(rec, f);
}

// ============================================================================
// Queries
// ============================================================================

std::vector<std::string> free_props(Formula f) {
  std::set<std::string> acc;
  if (!f.has_quantifier()) {
    std::unordered_set<const detail::Node*> seen;
    auto rec = [&](auto&& self, Formula cur) -> void {
      if (!seen.insert(cur.raw()).second) return;
      if (cur.kind() == Kind::Prop) {
        acc.insert(cur.name());
        return;
      }
      int a = arity(cur.kind());
      if (a >= 1) self(self, cur.left());
      if (a == 2) self(self, cur.right());
    };
    rec(rec, f);
  } else {
    std::vector<uint32_t> bound;
    auto rec = [&](auto&& self, Formula cur) -> void {
      switch (cur.kind()) {
        case Kind::Prop:
          if (std::find(bound.begin(), bound.end(), cur.raw()->name) == bound.end())
            acc.insert(cur.name());
          return;
        case Kind::Exists:
        case Kind::Forall:
          bound.push_back(cur.raw()->name);
          self(self, cur.child());
          bound.pop_back();
          return;
        default: {
          int a = arity(cur.kind());
          if (a >= 1) self(self, cur.left());
          if (a == 2) self(self, cur.right());
        }
      }
    };
    rec(rec, f);
  }
  return {acc.begin(), acc.end()};
}

std::pair<std::vector<PrefixItem>, Formula> split_prefix(Formula f) {
  std::vector<PrefixItem> prefix;
  Formula cur = f;
  while (cur.kind() == Kind::Exists || cur.kind() == Kind::Forall) {
    prefix.push_back({cur.kind() == Kind::Forall, cur.name()});
    cur = cur.child();
  }
  return {std::move(prefix), cur};
}

// ============================================================================
// Printing
// ============================================================================

namespace {

// atom 5, unary (incl. sugared G/F) 4, U/W 3, & 2, | 1, quantifier 0
int print_prec(Formula f) {
  if (is_globally(f) || is_eventually(f)) return 4;
  switch (f.kind()) {
    case Kind::True:
    case Kind::False:
    case Kind::Prop:
      return 5;
    case Kind::Not:
    case Kind::Next:
      return 4;
    case Kind::Until:
    case Kind::WeakUntil:
      return 3;
    case Kind::And:
      return 2;
    case Kind::Or:
      return 1;
    default:
      return 0;
  }
}

void print_rec(Formula f, int ctx, std::string& out) {
  int p = print_prec(f);
  bool par = p < ctx;
  if (par) out += '(';
  if (is_globally(f)) {
    out += "G ";
    print_rec(f.left(), 4, out);
  } else if (is_eventually(f)) {
    out += "F ";
    print_rec(f.right(), 4, out);
  } else {
    switch (f.kind()) {
      case Kind::True:
        out += "TRUE";
        break;
      case Kind::False:
        out += "FALSE";
        break;
      case Kind::Prop:
        out += f.name();
        break;
      case Kind::Not:
        out += '!';
        print_rec(f.child(), 4, out);
        break;
      case Kind::Next:
        out += "X ";
        print_rec(f.child(), 4, out);
        break;
      case Kind::Until:
        print_rec(f.left(), 4, out);
        out += " U ";
        print_rec(f.right(), 3, out);
        break;
      case Kind::WeakUntil:
        print_rec(f.left(), 4, out);
        out += " W ";
        print_rec(f.right(), 3, out);
        break;
      case Kind::And:
        print_rec(f.left(), 2, out);
        out += " & ";
        print_rec(f.right(), 3, out);
        break;
      case Kind::Or:
        print_rec(f.left(), 1, out);
        out += " | ";
        print_rec(f.right(), 2, out);
        break;
      case Kind::Exists:
      case Kind::Forall:
        out += f.kind() == Kind::Exists ? "E " : "A ";
        out += f.name();
        out += ". ";
        print_rec(f.child(), 0, out);
        break;
    }
  }
  if (par) out += ')';
}

}  // namespace

std::string print(Formula f) {
  std::string out;
  print_rec(f, 0, out);
  return out;
}

}  // namespace mucore
