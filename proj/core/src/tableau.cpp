#include "mucore/tableau.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace mucore {

namespace {

bool member(const std::vector<uint32_t>& set, uint32_t id) {
  return std::binary_search(set.begin(), set.end(), id);
}

void flatten_or(Formula f, std::vector<Formula>& leaves) {
  if (f.kind() == Kind::Or) {
    flatten_or(f.left(), leaves);
    flatten_or(f.right(), leaves);
  } else {
    leaves.push_back(f);
  }
}

// ============================================================================
// Saturation graph
// ============================================================================

class Tableau {
 public:
  explicit Tableau(Formula f) : input_(f) {}

  SatResult run() {
    Formula nf = to_nnf(input_);
    std::vector<int> roots;
    for (auto& set : saturate({nf})) {
      int n = intern(std::move(set));
      if (std::find(roots.begin(), roots.end(), n) == roots.end())
        roots.push_back(n);
    }
    for (int r : roots) {
      if (index_.size() <= static_cast<size_t>(r)) grow(r);
      if (index_[r] >= 0) continue;
      if (auto w = explore(r)) return {true, std::move(w)};
    }
    return {false, std::nullopt};
  }

 private:
  // ---- obligation sets -----------------------------------------------------

  struct State {
    std::vector<uint32_t> set;     // sorted member ids
    std::vector<uint32_t> simple;  // unprocessed literals / And / Next
    std::vector<uint32_t> temporal;  // unprocessed U / W
    std::vector<uint32_t> splits;    // unprocessed Or
    size_t np_simple = 0, np_temporal = 0, np_splits = 0;
  };

  bool insert(State& st, Formula g) {
    if (g == tt()) return true;
    if (g == ff()) return false;
    if (g.is_literal()) {
      Formula comp = g.kind() == Kind::Not ? g.child() : neg(g);
      if (member(st.set, comp.id())) return false;
    }
    auto it = std::lower_bound(st.set.begin(), st.set.end(), g.id());
    if (it != st.set.end() && *it == g.id()) return true;
    st.set.insert(it, g.id());
    dict_.emplace(g.id(), g);
    switch (g.kind()) {
      case Kind::Or:
        st.splits.push_back(g.id());
        break;
      case Kind::Until:
      case Kind::WeakUntil:
        st.temporal.push_back(g.id());
        break;
      case Kind::Exists:
      case Kind::Forall:
        throw std::runtime_error("quantifier in LTL satisfiability");
      default:
        st.simple.push_back(g.id());
        break;
    }
    return true;
  }

  bool or_satisfied(const std::vector<uint32_t>& set, Formula f) const {
    if (f == tt()) return true;
    if (f.kind() == Kind::Or)
      return or_satisfied(set, f.left()) || or_satisfied(set, f.right());
    return member(set, f.id());
  }

  // Expands obligations depth-first over the branch choices, non-branching
  // members first so that literal context is in place before any split.
  void expand(State st, std::vector<std::vector<uint32_t>>& out) {
    while (true) {
      if (st.np_simple < st.simple.size()) {
        Formula g = dict_.at(st.simple[st.np_simple++]);
        if (g.kind() == Kind::And)
          if (!insert(st, g.left()) || !insert(st, g.right())) return;
        continue;
      }
      if (st.np_temporal < st.temporal.size()) {
        Formula g = dict_.at(st.temporal[st.np_temporal++]);
        Formula a = g.left(), b = g.right();
        if (b == tt()) continue;
        if (member(st.set, b.id())) continue;
        Formula xg = next(g);
        bool a_here = a == tt() || member(st.set, a.id());
        if (a_here && member(st.set, xg.id())) continue;
        {
          State branch = st;
          if (insert(branch, b)) expand(std::move(branch), out);
        }
        if (insert(st, a) && insert(st, xg)) expand(std::move(st), out);
        return;
      }
      if (st.np_splits < st.splits.size()) {
        Formula g = dict_.at(st.splits[st.np_splits++]);
        if (or_satisfied(st.set, g)) continue;
        std::vector<Formula> leaves;
        flatten_or(g, leaves);
        for (size_t i = 0; i + 1 < leaves.size(); ++i) {
          State branch = st;
          if (insert(branch, leaves[i])) expand(std::move(branch), out);
        }
        if (insert(st, leaves.back())) expand(std::move(st), out);
        return;
      }
      break;
    }
    out.push_back(std::move(st.set));
  }

  std::vector<std::vector<uint32_t>> saturate(std::vector<Formula> init) {
    State st;
    for (Formula f : init)
      if (!insert(st, f)) return {};
    std::vector<std::vector<uint32_t>> out;
    expand(std::move(st), out);
    return out;
  }

  // ---- graph ----------------------------------------------------------------

  int intern(std::vector<uint32_t> set) {
    auto it = node_ids_.find(set);
    if (it != node_ids_.end()) return it->second;
    int id = static_cast<int>(node_sets_.size());
    node_ids_.emplace(set, id);
    node_sets_.push_back(std::move(set));
    return id;
  }

  void grow(int n) {
    size_t need = static_cast<size_t>(n) + 1;
    if (index_.size() < need) {
      index_.resize(need, -1);
      low_.resize(need, 0);
      on_stack_.resize(need, 0);
    }
  }

  const std::vector<int>& successors(int n) {
    auto it = succ_.find(n);
    if (it != succ_.end()) return it->second;
    std::vector<Formula> init;
    for (uint32_t id : node_sets_[n]) {
      Formula g = dict_.at(id);
      if (g.kind() == Kind::Next) init.push_back(g.child());
    }
    std::vector<int> ss;
    for (auto& set : saturate(std::move(init))) {
      int m = intern(std::move(set));
      if (std::find(ss.begin(), ss.end(), m) == ss.end()) ss.push_back(m);
    }
    return succ_.emplace(n, std::move(ss)).first->second;
  }

  bool has_edge(int from, int to) {
    const auto& ss = successors(from);
    return std::find(ss.begin(), ss.end(), to) != ss.end();
  }

  // ---- acceptance ------------------------------------------------------------

  bool accepting(const std::vector<int>& scc) {
    if (scc.size() == 1 && !has_edge(scc[0], scc[0])) return false;
    for (int v : scc) {
      for (uint32_t id : node_sets_[v]) {
        Formula g = dict_.at(id);
        if (g.kind() != Kind::Until) continue;
        if (g.right() == tt()) continue;
        uint32_t bid = g.right().id();
        bool fulfilled = false;
        for (int m : scc)
          if (member(node_sets_[m], bid)) {
            fulfilled = true;
            break;
          }
        if (!fulfilled) return false;
      }
    }
    return true;
  }

  // ---- search ----------------------------------------------------------------

  struct Frame {
    int node;
    size_t next_succ = 0;
  };

  // Iterative Tarjan from the given root; returns a witness as soon as an
  // accepting component closes.
  std::optional<LassoWord> explore(int root) {
    std::vector<Frame> frames;
    auto push = [&](int v) {
      grow(v);
      index_[v] = low_[v] = counter_++;
      stack_.push_back(v);
      on_stack_[v] = 1;
      frames.push_back({v, 0});
    };
    push(root);

    while (!frames.empty()) {
      Frame& fr = frames.back();
      const auto& ss = successors(fr.node);
      if (fr.next_succ < ss.size()) {
        int s = ss[fr.next_succ++];
        grow(s);
        if (index_[s] < 0) {
          push(s);
        } else if (on_stack_[s]) {
          low_[fr.node] = std::min(low_[fr.node], index_[s]);
        }
        continue;
      }
      int v = fr.node;
      if (low_[v] == index_[v]) {
        std::vector<int> scc;
        while (true) {
          int w = stack_.back();
          stack_.pop_back();
          on_stack_[w] = 0;
          scc.push_back(w);
          if (w == v) break;
        }
        std::sort(scc.begin(), scc.end());
        if (accepting(scc)) return build_witness(frames, v, scc);
      }
      frames.pop_back();
      if (!frames.empty())
        low_[frames.back().node] = std::min(low_[frames.back().node], low_[v]);
    }
    return std::nullopt;
  }

  // ---- witness ---------------------------------------------------------------

  // Shortest path inside the component, successor order breaking ties.
  std::vector<int> bfs(int from, int to, const std::unordered_set<int>& scc,
                       bool allow_empty) {
    if (allow_empty && from == to) return {from};
    std::unordered_map<int, int> pred;
    std::deque<int> queue{from};
    std::unordered_set<int> seen{from};
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int s : successors(v)) {
        if (!scc.count(s)) continue;
        if (s == to) {
          std::vector<int> path{to};
          for (int c = v;; c = pred.at(c)) {
            path.push_back(c);
            if (c == from) break;
          }
          std::reverse(path.begin(), path.end());
          return path;
        }
        if (seen.insert(s).second) {
          pred[s] = v;
          queue.push_back(s);
        }
      }
    }
    throw std::logic_error("component not strongly connected");
  }

  std::vector<std::string> node_letter(int n) const {
    std::vector<std::string> letter;
    for (uint32_t id : node_sets_[n]) {
      Formula g = dict_.at(id);
      if (g.kind() == Kind::Prop) letter.push_back(g.name());
    }
    std::sort(letter.begin(), letter.end());
    return letter;
  }

  LassoWord build_witness(const std::vector<Frame>& frames, int entry,
                          const std::vector<int>& scc_nodes) {
    std::unordered_set<int> scc(scc_nodes.begin(), scc_nodes.end());

    std::vector<int> loop{entry};
    for (int t : scc_nodes) {
      if (t == loop.back()) continue;
      auto path = bfs(loop.back(), t, scc, true);
      loop.insert(loop.end(), path.begin() + 1, path.end());
    }
    auto back = bfs(loop.back(), entry, scc, false);
    loop.insert(loop.end(), back.begin() + 1, back.end() - 1);

    LassoWord w;
    w.alphabet = free_props(input_);
    for (const Frame& fr : frames) {
      if (fr.node == entry) break;
      w.stem.push_back(node_letter(fr.node));
    }
    for (int n : loop) w.loop.push_back(node_letter(n));

    if (!eval_ltl(w, 0, input_))
      throw std::logic_error("tableau witness failed validation");
    return w;
  }

  Formula input_;
  std::unordered_map<uint32_t, Formula> dict_;
  std::map<std::vector<uint32_t>, int> node_ids_;
  std::vector<std::vector<uint32_t>> node_sets_;
  std::unordered_map<int, std::vector<int>> succ_;
  std::vector<int> index_, low_;
  std::vector<char> on_stack_;
  std::vector<int> stack_;
  int counter_ = 0;
};

}  // namespace

SatResult sat(Formula f) {
  if (!f) throw std::invalid_argument("null formula");
  return Tableau(f).run();
}

Formula kripke_formula(const KripkeStructure& k) {
  validate(k);
  std::vector<Formula> inits;
  for (const auto& s : k.initial) inits.push_back(state_formula(k, s));
  Formula init = disj_all(inits);

  std::vector<Formula> steps;
  for (size_t i = 0; i < k.states.size(); ++i) {
    // !s-tilde as a disjunction of complemented literals, in alphabet order
    std::unordered_set<std::string> labeled(k.labels[i].begin(), k.labels[i].end());
    std::vector<Formula> anti;
    for (const auto& p : k.alphabet)
      anti.push_back(labeled.count(p) ? neg(prop(p)) : prop(p));

    std::vector<Formula> succs;
    for (const auto& [s, t] : k.transitions)
      if (s == k.states[i]) succs.push_back(state_formula(k, t));

    steps.push_back(globally(disj(disj_all(anti), next(disj_all(succs)))));
  }
  return conj(init, conj_all(steps));
}

SatResult model_check(const KripkeStructure& k, Formula f) {
  auto props = free_props(f);
  for (const auto& p : props)
    if (std::find(k.alphabet.begin(), k.alphabet.end(), p) == k.alphabet.end())
      throw std::runtime_error("formula proposition not in Kripke alphabet: " + p);

  SatResult r = sat(conj(kripke_formula(k), neg(f)));
  if (r.satisfiable) return {false, std::move(r.witness)};
  return {true, std::nullopt};
}

}  // namespace mucore
