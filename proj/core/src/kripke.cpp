#include "mucore/kripke.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace mucore {

int KripkeStructure::state_index(std::string_view name) const {
  for (size_t i = 0; i < states.size(); ++i)
    if (states[i] == name) return static_cast<int>(i);
  return -1;
}

void validate(const KripkeStructure& k) {
  if (k.states.empty()) throw std::runtime_error("Kripke structure has no states");
  if (k.labels.size() != k.states.size())
    throw std::runtime_error("label count does not match state count");
  if (k.initial.empty()) throw std::runtime_error("empty initial set");

  std::set<std::string> known(k.states.begin(), k.states.end());
  if (known.size() != k.states.size())
    throw std::runtime_error("duplicate state name");
  for (const auto& s : k.initial)
    if (!known.count(s)) throw std::runtime_error("unknown initial state: " + s);

  std::set<std::string> props(k.alphabet.begin(), k.alphabet.end());
  for (size_t i = 0; i < k.states.size(); ++i)
    for (const auto& p : k.labels[i])
      if (!props.count(p))
        throw std::runtime_error("label not in alphabet: " + p);

  std::set<std::string> with_successor;
  for (const auto& [s, t] : k.transitions) {
    if (!known.count(s)) throw std::runtime_error("unknown transition source: " + s);
    if (!known.count(t)) throw std::runtime_error("unknown transition target: " + t);
    with_successor.insert(s);
  }
  for (const auto& s : k.states)
    if (!with_successor.count(s))
      throw std::runtime_error("transition relation not total at state: " + s);
}

Formula state_formula(const KripkeStructure& k, std::string_view state) {
  int idx = k.state_index(state);
  if (idx < 0) throw std::runtime_error("unknown state: " + std::string(state));
  std::set<std::string> labeled(k.labels[idx].begin(), k.labels[idx].end());
  std::vector<Formula> lits;
  lits.reserve(k.alphabet.size());
  for (const auto& p : k.alphabet)
    lits.push_back(labeled.count(p) ? prop(p) : neg(prop(p)));
  return conj_all(lits);
}

std::vector<LassoWord> kripke_models(const KripkeStructure& k, Formula f,
                                     size_t max_stem, size_t max_loop) {
  validate(k);
  CompiledFormula cf(f, k.alphabet);

  std::vector<std::vector<int>> succ(k.states.size());
  for (const auto& [s, t] : k.transitions)
    succ[k.state_index(s)].push_back(k.state_index(t));

  std::vector<uint64_t> state_mask(k.states.size());
  for (size_t i = 0; i < k.states.size(); ++i)
    state_mask[i] = CompiledFormula::letter_mask(k.labels[i], k.alphabet);

  std::vector<LassoWord> violations;
  std::vector<int> path;

  auto emit = [&](size_t loop_start) {
    std::vector<uint64_t> letters;
    letters.reserve(path.size());
    for (int s : path) letters.push_back(state_mask[s]);
    if (cf.eval(letters, loop_start, 0)) return;
    LassoWord w;
    w.alphabet = k.alphabet;
    for (size_t i = 0; i < path.size(); ++i) {
      auto letter = k.labels[path[i]];
      std::sort(letter.begin(), letter.end());
      (i < loop_start ? w.stem : w.loop).push_back(std::move(letter));
    }
    violations.push_back(std::move(w));
  };

  auto dfs = [&](auto&& self, int state) -> void {
    path.push_back(state);
    // close a loop back to any position within the bounds
    for (size_t j = 0; j < path.size(); ++j) {
      if (j > max_stem) break;
      if (path.size() - j > max_loop) continue;
      for (int t : succ[state])
        if (t == path[j]) {
          emit(j);
          break;
        }
    }
    if (path.size() < max_stem + max_loop)
      for (int t : succ[state]) self(self, t);
    path.pop_back();
  };

  for (const auto& s0 : k.initial) dfs(dfs, k.state_index(s0));
  return violations;
}

std::string kripke_to_json(const KripkeStructure& k) {
  nlohmann::ordered_json j;
  auto states = nlohmann::ordered_json::object();
  for (size_t i = 0; i < k.states.size(); ++i) states[k.states[i]] = k.labels[i];
  j["states"] = std::move(states);
  j["initial"] = k.initial;
  auto trans = nlohmann::ordered_json::array();
  for (const auto& [s, t] : k.transitions)
    trans.push_back(nlohmann::ordered_json::array({s, t}));
  j["transitions"] = std::move(trans);
  return j.dump();
}

KripkeStructure kripke_from_json(std::string_view text) {
  auto j = nlohmann::ordered_json::parse(text);
  KripkeStructure k;
  std::set<std::string> props;
  for (const auto& [name, labels] : j.at("states").items()) {
    k.states.push_back(name);
    auto ls = labels.get<std::vector<std::string>>();
    std::sort(ls.begin(), ls.end());
    ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
    for (const auto& p : ls) props.insert(p);
    k.labels.push_back(std::move(ls));
  }
  k.alphabet.assign(props.begin(), props.end());
  k.initial = j.at("initial").get<std::vector<std::string>>();
  for (const auto& e : j.at("transitions")) {
    if (!e.is_array() || e.size() != 2)
      throw std::runtime_error("transition must be a pair");
    k.transitions.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
  }
  validate(k);
  return k;
}

}  // namespace mucore
