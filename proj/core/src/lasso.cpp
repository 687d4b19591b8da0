#include "mucore/lasso.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace mucore {

namespace {

std::unordered_map<std::string, int> index_alphabet(
    const std::vector<std::string>& alphabet) {
  if (alphabet.size() > 64)
    throw std::runtime_error("alphabet exceeds 64 propositions");
  std::unordered_map<std::string, int> idx;
  for (size_t i = 0; i < alphabet.size(); ++i) {
    if (!idx.emplace(alphabet[i], static_cast<int>(i)).second)
      throw std::runtime_error("duplicate proposition in alphabet: " + alphabet[i]);
  }
  return idx;
}

}  // namespace

void validate(const LassoWord& w) {
  if (w.loop.empty()) throw std::runtime_error("lasso loop is empty");
  auto idx = index_alphabet(w.alphabet);
  auto check = [&](const std::vector<std::string>& letter) {
    for (const auto& p : letter)
      if (!idx.count(p))
        throw std::runtime_error("letter proposition not in alphabet: " + p);
  };
  for (const auto& l : w.stem) check(l);
  for (const auto& l : w.loop) check(l);
}

// ============================================================================
// CompiledFormula
// ============================================================================

uint64_t CompiledFormula::letter_mask(const std::vector<std::string>& letter,
                                      const std::vector<std::string>& alphabet) {
  auto idx = index_alphabet(alphabet);
  uint64_t m = 0;
  for (const auto& p : letter) {
    auto it = idx.find(p);
    if (it == idx.end())
      throw std::runtime_error("letter proposition not in alphabet: " + p);
    m |= uint64_t(1) << it->second;
  }
  return m;
}

namespace {

// Gathers the literals of a pure conjunction (or disjunction) of literals;
// returns false when the subtree has any other shape.
bool collect_literals(Formula f, Kind join, const std::unordered_map<std::string, int>& idx,
                      uint64_t& pos, uint64_t& neg) {
  if (f.kind() == Kind::Prop) {
    auto it = idx.find(f.name());
    if (it == idx.end())
      throw std::runtime_error("proposition not in alphabet: " + f.name());
    pos |= uint64_t(1) << it->second;
    return true;
  }
  if (f.kind() == Kind::Not && f.child().kind() == Kind::Prop) {
    auto it = idx.find(f.child().name());
    if (it == idx.end())
      throw std::runtime_error("proposition not in alphabet: " + f.child().name());
    neg |= uint64_t(1) << it->second;
    return true;
  }
  if (f.kind() == join) {
    return collect_literals(f.left(), join, idx, pos, neg) &&
           collect_literals(f.right(), join, idx, pos, neg);
  }
  return false;
}

}  // namespace

CompiledFormula::CompiledFormula(Formula f, const std::vector<std::string>& alphabet)
    : alphabet_(alphabet) {
  if (!f) throw std::invalid_argument("null formula");
  auto idx = index_alphabet(alphabet_);
  std::unordered_map<const detail::Node*, int32_t> memo;

  auto rec = [&](auto&& self, Formula cur) -> int32_t {
    auto it = memo.find(cur.raw());
    if (it != memo.end()) return it->second;
    Op op{};
    switch (cur.kind()) {
      case Kind::True:
      case Kind::False:
        op.kind = OpKind::Const;
        op.value = cur.kind() == Kind::True;
        break;
      case Kind::Prop:
      case Kind::Not:
      case Kind::And: {
        uint64_t p = 0, n = 0;
        if (collect_literals(cur, Kind::And, idx, p, n)) {
          op.kind = OpKind::LitConj;
          op.pos = p;
          op.neg = n;
        } else if (cur.kind() == Kind::Not) {
          op.kind = OpKind::Not;
          op.l = self(self, cur.child());
        } else if (cur.kind() == Kind::And) {
          op.kind = OpKind::And;
          op.l = self(self, cur.left());
          op.r = self(self, cur.right());
        } else {
          throw std::runtime_error("unreachable literal shape");
        }
        break;
      }
      case Kind::Or: {
        uint64_t p = 0, n = 0;
        if (collect_literals(cur, Kind::Or, idx, p, n)) {
          op.kind = OpKind::LitDisj;
          op.pos = p;
          op.neg = n;
        } else {
          op.kind = OpKind::Or;
          op.l = self(self, cur.left());
          op.r = self(self, cur.right());
        }
        break;
      }
      case Kind::Next:
        op.kind = OpKind::Next;
        op.l = self(self, cur.child());
        break;
      case Kind::Until:
        op.kind = OpKind::Until;
        op.l = self(self, cur.left());
        op.r = self(self, cur.right());
        break;
      case Kind::WeakUntil:
        op.kind = OpKind::WeakUntil;
        op.l = self(self, cur.left());
        op.r = self(self, cur.right());
        break;
      case Kind::Exists:
      case Kind::Forall:
        throw std::runtime_error("quantifier in LTL evaluation");
    }
    ops_.push_back(op);
    int32_t id = static_cast<int32_t>(ops_.size()) - 1;
    memo.emplace(cur.raw(), id);
    return id;
  };
  root_ = rec(rec, f);
}

bool CompiledFormula::eval(const std::vector<uint64_t>& letters, size_t stem_len,
                           size_t pos) const {
  size_t n = letters.size();
  if (n == 0 || stem_len >= n)
    throw std::invalid_argument("word must have a non-empty loop");
  size_t loop_len = n - stem_len;
  if (pos >= n) pos = stem_len + (pos - stem_len) % loop_len;
  auto succ = [&](size_t p) { return p + 1 < n ? p + 1 : stem_len; };

  // One boolean table per op, filled children-first; temporal ops are
  // solved backwards, with two sweeps over the loop to reach the fixpoint.
  static thread_local std::vector<uint8_t> val;
  val.assign(ops_.size() * n, 0);
  auto row = [&](int32_t i) { return val.data() + static_cast<size_t>(i) * n; };

  for (size_t i = 0; i < ops_.size(); ++i) {
    const Op& op = ops_[i];
    uint8_t* out = row(static_cast<int32_t>(i));
    const uint8_t* a = op.l >= 0 ? row(op.l) : nullptr;
    const uint8_t* b = op.r >= 0 ? row(op.r) : nullptr;
    switch (op.kind) {
      case OpKind::Const:
        std::fill(out, out + n, op.value ? 1 : 0);
        break;
      case OpKind::LitConj:
        for (size_t p = 0; p < n; ++p)
          out[p] = (letters[p] & op.pos) == op.pos && (letters[p] & op.neg) == 0;
        break;
      case OpKind::LitDisj:
        for (size_t p = 0; p < n; ++p)
          out[p] = (letters[p] & op.pos) != 0 || (~letters[p] & op.neg) != 0;
        break;
      case OpKind::Not:
        for (size_t p = 0; p < n; ++p) out[p] = !a[p];
        break;
      case OpKind::And:
        for (size_t p = 0; p < n; ++p) out[p] = a[p] && b[p];
        break;
      case OpKind::Or:
        for (size_t p = 0; p < n; ++p) out[p] = a[p] || b[p];
        break;
      case OpKind::Next:
        for (size_t p = 0; p < n; ++p) out[p] = a[succ(p)];
        break;
      case OpKind::Until:
        for (int sweep = 0; sweep < 2; ++sweep)
          for (size_t p = n; p-- > stem_len;)
            out[p] = b[p] || (a[p] && out[succ(p)]);
        for (size_t p = stem_len; p-- > 0;) out[p] = b[p] || (a[p] && out[p + 1]);
        break;
      case OpKind::WeakUntil:
        // A W B as the complement of (!B) U (!A & !B).
        for (int sweep = 0; sweep < 2; ++sweep)
          for (size_t p = n; p-- > stem_len;)
            out[p] = (!a[p] && !b[p]) || (!b[p] && out[succ(p)]);
        for (size_t p = stem_len; p-- > 0;)
          out[p] = (!a[p] && !b[p]) || (!b[p] && out[p + 1]);
        for (size_t p = 0; p < n; ++p) out[p] = !out[p];
        break;
    }
  }
  return val[static_cast<size_t>(root_) * n + pos] != 0;
}

bool CompiledFormula::eval(const LassoWord& w, size_t pos) const {
  validate(w);
  std::vector<uint64_t> letters;
  letters.reserve(w.stem.size() + w.loop.size());
  for (const auto& l : w.stem) letters.push_back(letter_mask(l, alphabet_));
  for (const auto& l : w.loop) letters.push_back(letter_mask(l, alphabet_));
  return eval(letters, w.stem.size(), pos);
}

bool eval_ltl(const LassoWord& w, size_t i, Formula f) {
  CompiledFormula cf(f, w.alphabet);
  return cf.eval(w, i);
}

// ============================================================================
// Bounded search
// ============================================================================

std::optional<LassoWord> bounded_sat(Formula f,
                                     const std::vector<std::string>& alphabet,
                                     size_t max_stem, size_t max_loop) {
  CompiledFormula cf(f, alphabet);
  size_t k = alphabet.size();
  uint64_t letter_count = uint64_t(1) << k;

  for (size_t s = 0; s <= max_stem; ++s) {
    for (size_t l = 1; l <= max_loop; ++l) {
      size_t n = s + l;
      std::vector<uint64_t> letters(n, 0);
      bool exhausted = false;
      while (!exhausted) {
        if (cf.eval(letters, s, 0)) {
          LassoWord w;
          w.alphabet = alphabet;
          auto to_set = [&](uint64_t m) {
            std::vector<std::string> letter;
            for (size_t i = 0; i < k; ++i)
              if (m & (uint64_t(1) << i)) letter.push_back(alphabet[i]);
            return letter;
          };
          for (size_t i = 0; i < s; ++i) w.stem.push_back(to_set(letters[i]));
          for (size_t i = s; i < n; ++i) w.loop.push_back(to_set(letters[i]));
          return w;
        }
        // odometer: rightmost letter counts fastest
        exhausted = true;
        for (size_t i = n; i-- > 0;) {
          if (++letters[i] < letter_count) {
            exhausted = false;
            break;
          }
          letters[i] = 0;
        }
      }
    }
  }
  return std::nullopt;
}

// ============================================================================
// JSON and utilities
// ============================================================================

std::string lasso_to_json(const LassoWord& w) {
  nlohmann::ordered_json j;
  j["alphabet"] = w.alphabet;
  j["stem"] = w.stem;
  j["loop"] = w.loop;
  return j.dump();
}

LassoWord lasso_from_json(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, true);
  LassoWord w;
  w.alphabet = j.at("alphabet").get<std::vector<std::string>>();
  w.stem = j.at("stem").get<std::vector<std::vector<std::string>>>();
  w.loop = j.at("loop").get<std::vector<std::vector<std::string>>>();
  for (auto* part : {&w.stem, &w.loop})
    for (auto& letter : *part) {
      std::sort(letter.begin(), letter.end());
      letter.erase(std::unique(letter.begin(), letter.end()), letter.end());
    }
  validate(w);
  return w;
}

LassoWord lasso_erase(const LassoWord& w, const std::vector<std::string>& letter) {
  auto key = letter;
  std::sort(key.begin(), key.end());
  auto matches = [&](const std::vector<std::string>& l) {
    auto s = l;
    std::sort(s.begin(), s.end());
    return s == key;
  };
  LassoWord out;
  out.alphabet = w.alphabet;
  for (const auto& l : w.stem)
    if (!matches(l)) out.stem.push_back(l);
  for (const auto& l : w.loop)
    if (!matches(l)) out.loop.push_back(l);
  if (out.loop.empty())
    throw std::runtime_error("erasure would empty the loop");
  return out;
}

}  // namespace mucore
