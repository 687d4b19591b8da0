#pragma once

#include <optional>

#include "mucore/formula.hpp"
#include "mucore/kripke.hpp"
#include "mucore/lasso.hpp"

namespace mucore {

struct SatResult {
  bool satisfiable;
  std::optional<LassoWord> witness;  // present iff satisfiable
};

// Complete satisfiability check for quantifier-free LTL, with witness
// extraction. Nodes are saturated obligation sets explored on the fly;
// acceptance is decided per strongly-connected component (every until
// member must see its right operand somewhere in the component). Returned
// witnesses always satisfy f under eval_ltl.
SatResult sat(Formula f);

// The LTL encoding of K: some initial state conjunction holds now, and
// globally every state conjunction forces one of its successors next.
Formula kripke_formula(const KripkeStructure& k);

// Decides K |= f via sat(kripke_formula(K) & !f). Returns (true, absent)
// or (false, counterexample lasso of K).
SatResult model_check(const KripkeStructure& k, Formula f);

}  // namespace mucore
