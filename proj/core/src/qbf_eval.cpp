#include "mucore/qbf_eval.hpp"

#include <stdexcept>
#include <vector>

namespace mucore {

namespace {

struct Binding {
  uint32_t name;
  bool value;
};

bool eval_rec(Formula f, std::vector<Binding>& env) {
  switch (f.kind()) {
    case Kind::True:
      return true;
    case Kind::False:
      return false;
    case Kind::Prop: {
      uint32_t name = f.raw()->name;
      for (auto it = env.rbegin(); it != env.rend(); ++it)
        if (it->name == name) return it->value;
      throw std::runtime_error("free variable in QBF: " + f.name());
    }
    case Kind::Not:
      return !eval_rec(f.child(), env);
    case Kind::And:
      return eval_rec(f.left(), env) && eval_rec(f.right(), env);
    case Kind::Or:
      return eval_rec(f.left(), env) || eval_rec(f.right(), env);
    case Kind::Exists:
    case Kind::Forall: {
      bool universal = f.kind() == Kind::Forall;
      env.push_back({f.raw()->name, true});
      bool with_true = eval_rec(f.child(), env);
      if (with_true != universal) {
        env.pop_back();
        return with_true;
      }
      env.back().value = false;
      bool with_false = eval_rec(f.child(), env);
      env.pop_back();
      return with_false;
    }
    default:
      throw std::runtime_error("modality in QBF evaluation");
  }
}

}  // namespace

bool eval_qbf(Formula f) {
  std::vector<Binding> env;
  return eval_rec(f, env);
}

}  // namespace mucore
