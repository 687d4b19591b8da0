#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mucore/formula.hpp"

namespace mucore {

// An ultimately periodic word stem . loop^omega; each letter is the set of
// propositions holding at that position.
struct LassoWord {
  std::vector<std::string> alphabet;
  std::vector<std::vector<std::string>> stem;
  std::vector<std::vector<std::string>> loop;
};

// Checks loop non-emptiness, letters within the alphabet, alphabet <= 64.
void validate(const LassoWord& w);

// Compiles a quantifier-free formula over a fixed alphabet for repeated
// evaluation on lasso words. Letters are bitmasks over alphabet indices;
// maximal conjunctions/disjunctions of literals collapse to single mask
// tests, and temporal operators are solved by backward iteration over the
// positions, so one evaluation is linear in |ops| * |positions|.
class CompiledFormula {
 public:
  CompiledFormula(Formula f, const std::vector<std::string>& alphabet);

  // letters[0..stem_len) is the stem, the rest is the loop (non-empty).
  bool eval(const std::vector<uint64_t>& letters, size_t stem_len,
            size_t pos = 0) const;
  bool eval(const LassoWord& w, size_t pos = 0) const;

  static uint64_t letter_mask(const std::vector<std::string>& letter,
                              const std::vector<std::string>& alphabet);

 private:
  enum class OpKind : uint8_t {
    Const,
    LitConj,  // (letter & pos) == pos and (letter & neg) == 0
    LitDisj,  // (letter & pos) != 0 or (~letter & neg) != 0
    Not,
    And,
    Or,
    Next,
    Until,
    WeakUntil,
  };
  struct Op {
    OpKind kind;
    bool value;      // Const
    uint64_t pos, neg;
    int32_t l = -1, r = -1;
  };

  int32_t compile(Formula f);

  std::vector<std::string> alphabet_;
  std::vector<Op> ops_;
  int32_t root_;
};

// Single-shot evaluation at position i; i beyond the representation is
// reduced modulo the loop.
bool eval_ltl(const LassoWord& w, size_t i, Formula f);

// Deterministic brute-force search for a model within the given bounds:
// outer loop stem length 0..max_stem, then loop length 1..max_loop, then
// letter sequences in odometer order over subsets of the alphabet.
std::optional<LassoWord> bounded_sat(Formula f,
                                     const std::vector<std::string>& alphabet,
                                     size_t max_stem, size_t max_loop);

std::string lasso_to_json(const LassoWord& w);
LassoWord lasso_from_json(std::string_view text);

// Drops every position whose letter equals `letter`; errors if that would
// empty the loop (words of shape u . letter^omega have no erasure).
LassoWord lasso_erase(const LassoWord& w, const std::vector<std::string>& letter);

}  // namespace mucore
