#pragma once

#include "mucore/formula.hpp"

namespace mucore {

// Decides a closed, modality-free quantified Boolean formula by recursive
// expansion of the quantifiers. Throws on a free variable or a modality.
bool eval_qbf(Formula f);

}  // namespace mucore
