#include <doctest.h>

#include <mucore/formula.hpp>
#include <mucore/kripke.hpp>
#include <mucore/lasso.hpp>
#include <mucore/parse.hpp>
#include <mucore/qbf_eval.hpp>

#include <map>
#include <random>

#include "gen.hpp"

using namespace mucore;

namespace {

LassoWord mk_lasso(std::vector<std::string> alphabet,
                   std::vector<std::vector<std::string>> stem,
                   std::vector<std::vector<std::string>> loop) {
  LassoWord w;
  w.alphabet = std::move(alphabet);
  w.stem = std::move(stem);
  w.loop = std::move(loop);
  return w;
}

// Every lasso over the alphabet with the given maximal stem/loop lengths.
std::vector<LassoWord> all_lassos(const std::vector<std::string>& alphabet,
                                  size_t max_stem, size_t max_loop) {
  std::vector<std::vector<std::string>> letters;
  size_t count = size_t(1) << alphabet.size();
  for (size_t m = 0; m < count; ++m) {
    std::vector<std::string> letter;
    for (size_t i = 0; i < alphabet.size(); ++i)
      if (m & (size_t(1) << i)) letter.push_back(alphabet[i]);
    letters.push_back(std::move(letter));
  }
  std::vector<LassoWord> out;
  for (size_t s = 0; s <= max_stem; ++s) {
    for (size_t l = 1; l <= max_loop; ++l) {
      std::vector<size_t> digits(s + l, 0);
      bool done = false;
      while (!done) {
        LassoWord w;
        w.alphabet = alphabet;
        for (size_t i = 0; i < s; ++i) w.stem.push_back(letters[digits[i]]);
        for (size_t i = s; i < s + l; ++i) w.loop.push_back(letters[digits[i]]);
        out.push_back(std::move(w));
        done = true;
        for (size_t i = digits.size(); i-- > 0;) {
          if (++digits[i] < count) {
            done = false;
            break;
          }
          digits[i] = 0;
        }
      }
    }
  }
  return out;
}

// Test-local truth evaluation of a propositional formula under an assignment.
bool prop_eval(Formula f, const std::map<std::string, bool>& env) {
  switch (f.kind()) {
    case Kind::True:
      return true;
    case Kind::False:
      return false;
    case Kind::Prop:
      return env.at(f.name());
    case Kind::Not:
      return !prop_eval(f.child(), env);
    case Kind::And:
      return prop_eval(f.left(), env) && prop_eval(f.right(), env);
    case Kind::Or:
      return prop_eval(f.left(), env) || prop_eval(f.right(), env);
    default:
      throw std::runtime_error("not propositional");
  }
}

// Random propositional formula over the given variables.
Formula random_prop(std::mt19937& rng, int size, const std::vector<std::string>& vars) {
  if (size <= 1) {
    int n = static_cast<int>(vars.size()) + 2;
    int pick = static_cast<int>(rng() % n);
    if (pick == 0) return tt();
    if (pick == 1) return ff();
    return prop(vars[pick - 2]);
  }
  if (size == 2 || rng() % 3 == 0)
    return neg(random_prop(rng, size - 1, vars));
  int left = 1 + static_cast<int>(rng() % (size - 2));
  Formula a = random_prop(rng, left, vars);
  Formula b = random_prop(rng, size - 1 - left, vars);
  return rng() % 2 ? conj(a, b) : disj(a, b);
}

}  // namespace

TEST_CASE("eval_ltl matches the semantic clauses on hand cases") {
  LassoWord w1 = mk_lasso({"p"}, {}, {{"p"}});
  CHECK(eval_ltl(w1, 0, parse("G p")));
  CHECK_FALSE(eval_ltl(w1, 0, parse("F !p")));

  LassoWord w2 = mk_lasso({"p", "q"}, {{"p"}}, {{"q"}});
  CHECK(eval_ltl(w2, 0, parse("p U q")));
  CHECK(eval_ltl(w2, 0, prop("p")));
  CHECK_FALSE(eval_ltl(w2, 1, prop("p")));
  CHECK(eval_ltl(w2, 1, prop("q")));
  CHECK(eval_ltl(w2, 0, parse("X q")));
  CHECK(eval_ltl(w2, 0, parse("G(X q)")));

  // position beyond the representation reduces modulo the loop
  CHECK(eval_ltl(w2, 5, prop("q")));

  CHECK_THROWS(eval_ltl(w1, 0, parse("q")));
  CHECK_THROWS(eval_ltl(w1, 0, parse("E x. x")));
  LassoWord bad = mk_lasso({"p"}, {{"p"}}, {});
  CHECK_THROWS(eval_ltl(bad, 0, parse("p")));
}

TEST_CASE("weak until tolerates never-firing right sides") {
  LassoWord w = mk_lasso({"p", "q"}, {}, {{"p"}});
  CHECK(eval_ltl(w, 0, parse("p W q")));
  CHECK_FALSE(eval_ltl(w, 0, parse("p U q")));
  LassoWord v = mk_lasso({"p", "q"}, {{"p"}, {"p"}}, {{"q"}});
  CHECK(eval_ltl(v, 0, parse("p W q")));
  CHECK(eval_ltl(v, 0, parse("p U q")));
  LassoWord u = mk_lasso({"p", "q"}, {{"p"}, {}}, {{"q"}});
  CHECK_FALSE(eval_ltl(u, 0, parse("p U q")));
  CHECK_FALSE(eval_ltl(u, 0, parse("p W q")));
}

TEST_CASE("expansion laws hold pointwise") {
  std::mt19937 rng(101);
  auto lassos = all_lassos({"p", "q"}, 2, 2);
  for (int trial = 0; trial < 60; ++trial) {
    Formula a = gen::random_formula(rng, 1 + static_cast<int>(rng() % 3), {"p", "q"});
    Formula b = gen::random_formula(rng, 1 + static_cast<int>(rng() % 3), {"p", "q"});
    Formula u = until(a, b);
    Formula uexp = disj(b, conj(a, next(u)));
    Formula w = wuntil(a, b);
    Formula wexp = disj(b, conj(a, next(w)));
    Formula g = globally(a);
    Formula gexp = conj(a, next(g));
    for (const auto& word : lassos) {
      size_t n = word.stem.size() + word.loop.size();
      for (size_t i = 0; i < n; ++i) {
        REQUIRE(eval_ltl(word, i, u) == eval_ltl(word, i, uexp));
        REQUIRE(eval_ltl(word, i, w) == eval_ltl(word, i, wexp));
        REQUIRE(eval_ltl(word, i, g) == eval_ltl(word, i, gexp));
      }
    }
  }
}

TEST_CASE("suffix coherence of next") {
  std::mt19937 rng(102);
  auto lassos = all_lassos({"p", "q"}, 2, 2);
  for (int trial = 0; trial < 40; ++trial) {
    Formula a = gen::random_formula(rng, 1 + static_cast<int>(rng() % 5), {"p", "q"});
    Formula xa = next(a);
    for (const auto& word : lassos) {
      size_t n = word.stem.size() + word.loop.size();
      for (size_t i = 0; i + 1 < n + 3; ++i)
        REQUIRE(eval_ltl(word, i, xa) == eval_ltl(word, i + 1, a));
    }
  }
}

TEST_CASE("nnf and simplify preserve lasso semantics") {
  std::mt19937 rng(103);
  auto lassos = all_lassos({"p", "q"}, 2, 2);
  for (int trial = 0; trial < 150; ++trial) {
    Formula f = gen::random_formula(rng, 1 + static_cast<int>(rng() % 7), {"p", "q"});
    Formula n = to_nnf(f);
    Formula s = simplify(f);
    for (const auto& word : lassos) {
      bool base = eval_ltl(word, 0, f);
      REQUIRE(base == eval_ltl(word, 0, n));
      REQUIRE(base == eval_ltl(word, 0, s));
    }
  }
}

TEST_CASE("eval_qbf decides closed formulas") {
  CHECK(eval_qbf(parse("A x. x | !x")));
  CHECK_FALSE(eval_qbf(parse("E x. x & !x")));
  CHECK_FALSE(eval_qbf(parse("E x. A y. (x | y) & (!x | !y)")));
  CHECK(eval_qbf(parse("A y. E x. (x | y) & (!x | !y)")));
  CHECK(eval_qbf(tt()));
  CHECK_FALSE(eval_qbf(ff()));
}

TEST_CASE("eval_qbf on the four-variable alternation example") {
  Formula matrix = parse("(x1 | x3) & (x1 | x4 | !x3) & (!x2 | !x4)");
  Formula phi = forall("x1", forall("x2", exists("x3", exists("x4", matrix))));
  CHECK_FALSE(eval_qbf(phi));

  Formula inst = substitute_all(substitute_all(matrix, prop("x1"), tt()),
                                prop("x2"), ff());
  CHECK(eval_qbf(exists("x3", exists("x4", inst))));
}

TEST_CASE("eval_qbf rejects free variables and modalities") {
  CHECK_THROWS(eval_qbf(prop("p")));
  CHECK_THROWS(eval_qbf(parse("E x. x & p")));
  CHECK_THROWS(eval_qbf(next(tt())));
  CHECK_THROWS(eval_qbf(parse("A x. x U x")));
}

TEST_CASE("eval_qbf agrees with truth tables and substitution expansion") {
  std::mt19937 rng(104);
  std::vector<std::string> vars{"x1", "x2", "x3", "x4"};
  for (int trial = 0; trial < 120; ++trial) {
    Formula f = random_prop(rng, 1 + static_cast<int>(rng() % 8), vars);

    for (int mask = 0; mask < 16; ++mask) {
      std::map<std::string, bool> env;
      Formula closed = f;
      for (size_t i = 0; i < vars.size(); ++i) {
        bool v = mask & (1 << i);
        env[vars[i]] = v;
        closed = substitute_all(closed, prop(vars[i]), v ? tt() : ff());
      }
      CHECK(eval_qbf(closed) == prop_eval(f, env));
    }

    // random prefix: environment recursion vs. substitution expansion
    Formula prefixed = f;
    Formula expansion = f;
    for (size_t i = vars.size(); i-- > 0;) {
      bool uni = rng() % 2;
      prefixed = uni ? forall(vars[i], prefixed) : exists(vars[i], prefixed);
      Formula t = substitute_all(expansion, prop(vars[i]), tt());
      Formula e = substitute_all(expansion, prop(vars[i]), ff());
      expansion = uni ? conj(t, e) : disj(t, e);
    }
    CHECK(eval_qbf(prefixed) == eval_qbf(expansion));
  }
}

TEST_CASE("bounded_sat finds witnesses in a pinned order") {
  CHECK_FALSE(bounded_sat(parse("p & !p"), {"p"}, 3, 3).has_value());

  auto w = bounded_sat(parse("F q"), {"q"}, 2, 1);
  REQUIRE(w.has_value());
  CHECK(eval_ltl(*w, 0, parse("F q")));

  // first word in enumeration order satisfying p: stem empty, loop [{p}]
  auto v = bounded_sat(prop("p"), {"p"}, 2, 2);
  REQUIRE(v.has_value());
  CHECK(v->stem.empty());
  CHECK(v->loop == std::vector<std::vector<std::string>>{{"p"}});

  auto again = bounded_sat(prop("p"), {"p"}, 2, 2);
  CHECK(lasso_to_json(*again) == lasso_to_json(*v));
}

TEST_CASE("bounded_sat certifies the unsatisfiable weak-until fragment") {
  Formula i = prop("i"), p = prop("p");
  Formula f = conj(conj(wuntil(neg(i), p), eventually(i)),
                   globally(implies(p, globally(neg(i)))));
  CHECK_FALSE(bounded_sat(f, {"i", "p"}, 4, 4).has_value());
}

TEST_CASE("bounded_sat witnesses self-validate") {
  std::mt19937 rng(105);
  int found = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Formula f = gen::random_formula(rng, 1 + static_cast<int>(rng() % 6), {"p", "q"});
    auto w = bounded_sat(f, {"p", "q"}, 2, 2);
    if (w) {
      ++found;
      REQUIRE(eval_ltl(*w, 0, f));
    }
  }
  CHECK(found > 50);
}

TEST_CASE("lasso json round trip") {
  LassoWord w = mk_lasso({"p", "q"}, {{"p"}, {}}, {{"q"}, {"p", "q"}});
  LassoWord back = lasso_from_json(lasso_to_json(w));
  CHECK(back.alphabet == w.alphabet);
  CHECK(back.stem == w.stem);
  CHECK(back.loop == w.loop);

  CHECK_THROWS(lasso_from_json("{"));
  CHECK_THROWS(lasso_from_json(R"({"alphabet":["p"],"stem":[],"loop":[]})"));
  CHECK_THROWS(lasso_from_json(R"({"alphabet":["p"],"stem":[["z"]],"loop":[[]]})"));
}

TEST_CASE("lasso_erase drops matching positions") {
  LassoWord w = mk_lasso({"p", "q"}, {{"p"}, {"q"}}, {{"p"}, {"p", "q"}});
  LassoWord e = lasso_erase(w, {"p"});
  CHECK(e.stem == std::vector<std::vector<std::string>>{{"q"}});
  CHECK(e.loop == std::vector<std::vector<std::string>>{{"p", "q"}});

  LassoWord only = mk_lasso({"p"}, {{"p"}}, {{"p"}});
  CHECK_THROWS(lasso_erase(only, {"p"}));
}

TEST_CASE("kripke structures validate and enumerate lassos") {
  KripkeStructure k;
  k.alphabet = {"p"};
  k.states = {"s"};
  k.labels = {{"p"}};
  k.initial = {"s"};
  k.transitions = {{"s", "s"}};
  CHECK_NOTHROW(validate(k));

  CHECK(kripke_models(k, parse("G p"), 2, 2).empty());
  auto viol = kripke_models(k, parse("F !p"), 2, 2);
  CHECK(!viol.empty());
  CHECK(eval_ltl(viol[0], 0, parse("G p")));

  KripkeStructure nontotal = k;
  nontotal.transitions.clear();
  CHECK_THROWS(validate(nontotal));
  KripkeStructure noinit = k;
  noinit.initial.clear();
  CHECK_THROWS(validate(noinit));
}

TEST_CASE("kripke violations respect branching") {
  // two states: s (p) -> t (no p) -> s; initial s
  KripkeStructure k;
  k.alphabet = {"p"};
  k.states = {"s", "t"};
  k.labels = {{"p"}, {}};
  k.initial = {"s"};
  k.transitions = {{"s", "t"}, {"t", "s"}, {"s", "s"}};
  validate(k);

  // G p fails on every lasso through t but holds on the self-loop at s
  auto viol = kripke_models(k, parse("G p"), 2, 2);
  CHECK(!viol.empty());
  for (const auto& w : viol) CHECK_FALSE(eval_ltl(w, 0, parse("G p")));
  auto none = kripke_models(k, parse("p"), 2, 2);
  CHECK(none.empty());
}

TEST_CASE("state_formula expands to the full literal conjunction") {
  KripkeStructure k;
  k.alphabet = {"p", "q"};
  k.states = {"s"};
  k.labels = {{"p"}};
  k.initial = {"s"};
  k.transitions = {{"s", "s"}};
  CHECK(state_formula(k, "s") == parse("p & !q"));
  CHECK_THROWS(state_formula(k, "nope"));
}

TEST_CASE("kripke json round trip") {
  KripkeStructure k;
  k.alphabet = {"p", "q"};
  k.states = {"s", "t"};
  k.labels = {{"p"}, {"q"}};
  k.initial = {"s"};
  k.transitions = {{"s", "t"}, {"t", "s"}};
  KripkeStructure back = kripke_from_json(kripke_to_json(k));
  CHECK(back.states == k.states);
  CHECK(back.labels == k.labels);
  CHECK(back.initial == k.initial);
  CHECK(back.transitions == k.transitions);
  CHECK(back.alphabet == k.alphabet);  // recomputed as the label union

  CHECK_THROWS(kripke_from_json(R"({"states":{"s":[]},"initial":[],"transitions":[["s","s"]]})"));
}
