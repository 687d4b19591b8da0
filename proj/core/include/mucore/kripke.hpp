#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mucore/formula.hpp"
#include "mucore/lasso.hpp"

namespace mucore {

// A labeled automaton with a total transition relation.
struct KripkeStructure {
  std::vector<std::string> alphabet;
  std::vector<std::string> states;
  std::vector<std::vector<std::string>> labels;  // one set per state
  std::vector<std::string> initial;
  std::vector<std::pair<std::string, std::string>> transitions;

  int state_index(std::string_view name) const;
};

// Checks totality, non-empty initial set, known endpoints, labels within
// the alphabet.
void validate(const KripkeStructure& k);

// The full conjunction of literals over the alphabet that the state stands
// for: every labeled proposition positively, every other one negated.
Formula state_formula(const KripkeStructure& k, std::string_view state);

// Enumerates all lassos of K within the bounds (stem length 0..max_stem,
// loop length 1..max_loop, depth-first in state order) and returns those
// violating f at time 0.
std::vector<LassoWord> kripke_models(const KripkeStructure& k, Formula f,
                                     size_t max_stem, size_t max_loop);

std::string kripke_to_json(const KripkeStructure& k);
KripkeStructure kripke_from_json(std::string_view text);

}  // namespace mucore
