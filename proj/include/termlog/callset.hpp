#pragma once

// Call-pattern analysis over a five-point mode/shape domain and the rigidity
// requirements it induces.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "termlog/error.hpp"
#include "termlog/orders.hpp"
#include "termlog/term.hpp"

namespace termlog {

enum class AbstractTerm { Free, Ground, NilListGround, NilListAny, Any };

inline const char* to_string(AbstractTerm a) {
  switch (a) {
    case AbstractTerm::Free: return "free";
    case AbstractTerm::Ground: return "ground";
    case AbstractTerm::NilListGround: return "nillist_ground";
    case AbstractTerm::NilListAny: return "nillist";
    case AbstractTerm::Any: return "any";
  }
  return "?";
}

inline std::optional<AbstractTerm> abstract_term_from_string(const std::string& s) {
  if (s == "free" || s == "f") return AbstractTerm::Free;
  if (s == "ground" || s == "g") return AbstractTerm::Ground;
  if (s == "nillist_ground" || s == "list" || s == "nlg") return AbstractTerm::NilListGround;
  if (s == "nillist" || s == "nla") return AbstractTerm::NilListAny;
  if (s == "any") return AbstractTerm::Any;
  return std::nullopt;
}

/// a ⊑ b.
inline bool leq(AbstractTerm a, AbstractTerm b) {
  using A = AbstractTerm;
  if (a == b || b == A::Any) return true;
  return a == A::NilListGround && (b == A::Ground || b == A::NilListAny);
}

inline AbstractTerm join(AbstractTerm a, AbstractTerm b) {
  if (leq(a, b)) return b;
  if (leq(b, a)) return a;
  return AbstractTerm::Any;
}

/// Combined knowledge about one variable seen twice during unification.
inline AbstractTerm unify_values(AbstractTerm a, AbstractTerm b) {
  using A = AbstractTerm;
  if (a == A::Free) return b;
  if (b == A::Free) return a;
  if (leq(a, b)) return a;
  if (leq(b, a)) return b;
  return A::NilListGround;  // Ground with NilListAny
}

struct AbstractAtom {
  Symbol pred;
  std::vector<AbstractTerm> args;

  friend bool operator==(const AbstractAtom&, const AbstractAtom&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const AbstractAtom& a) {
  os << a.pred.name << '(';
  for (std::size_t i = 0; i < a.args.size(); ++i) os << (i ? "," : "") << to_string(a.args[i]);
  return os << ')';
}

/// One abstract atom per predicate, in order of discovery.
struct CallSet {
  std::vector<AbstractAtom> atoms;

  const AbstractAtom* find(const Symbol& p) const {
    auto it = std::find_if(atoms.begin(), atoms.end(), [&](const AbstractAtom& a) { return a.pred == p; });
    return it == atoms.end() ? nullptr : &*it;
  }
  bool empty() const noexcept { return atoms.empty(); }
};

struct RigidityRequirement {
  PositionFamily ignored_pred;
  PositionFamily ignored_fun;

  bool ignores(const Symbol& s, std::size_t pos) const {
    return ignored_pred.contains(s, pos) || ignored_fun.contains(s, pos);
  }
  /// Both families as one filter.
  PositionFamily combined() const {
    PositionFamily f = ignored_pred;
    f.merge(ignored_fun);
    return f;
  }
};

// ---------------------------------------------------------------------------
// Abstract unification

namespace detail {

using AbsEnv = std::map<VarId, AbstractTerm>;

inline void meet_var(AbsEnv& env, VarId id, AbstractTerm v) {
  auto it = env.find(id);
  if (it == env.end())
    env.emplace(id, v);
  else
    it->second = unify_values(it->second, v);
}

/// Binds the variables of `t` assuming the term it is unified with is described by `v`.
inline bool abs_bind(const Term& t, AbstractTerm v, AbsEnv& env) {
  using A = AbstractTerm;
  if (t.is_var()) {
    meet_var(env, t.var_id(), v);
    return true;
  }
  switch (v) {
    case A::Free:
      for (const auto& x : variables(t)) meet_var(env, x.var_id(), A::Free);
      return true;
    case A::Ground:
    case A::Any:
      for (const auto& x : variables(t)) meet_var(env, x.var_id(), v);
      return true;
    case A::NilListGround:
    case A::NilListAny:
      if (t.symbol() == kNil) return true;
      if (t.symbol() != kCons) return false;
      return abs_bind(t.arg(0), v == A::NilListGround ? A::Ground : A::Any, env) && abs_bind(t.arg(1), v, env);
  }
  return false;
}

/// Description of `t` under `env`; unseen variables are free.
inline AbstractTerm abstract_of(const Term& t, const AbsEnv& env) {
  using A = AbstractTerm;
  if (t.is_var()) {
    auto it = env.find(t.var_id());
    return it == env.end() ? A::Free : it->second;
  }
  if (t.symbol() == kNil) return A::NilListGround;
  auto ground_like = [](A a) { return a == A::Ground || a == A::NilListGround; };
  if (t.symbol() == kCons) {
    A h = abstract_of(t.arg(0), env);
    A tl = abstract_of(t.arg(1), env);
    if (tl == A::NilListGround && ground_like(h)) return A::NilListGround;
    if (tl == A::NilListGround || tl == A::NilListAny) return A::NilListAny;
    if (ground_like(h) && ground_like(tl)) return A::Ground;
    return A::Any;
  }
  for (const auto& a : t.args())
    if (!ground_like(abstract_of(a, env))) return A::Any;
  return A::Ground;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Fixpoint

struct CallSetAnalysis {
  CallSet calls;
  /// Success patterns; absent when no derivation succeeds.
  std::map<Symbol, std::vector<AbstractTerm>> success;
  std::size_t iterations = 0;
};

/// Predicates without clauses behave as tests: they are not recorded and
/// their success pattern is the call pattern.
inline CallSetAnalysis analyze_calls(const Program& p, const std::vector<AbstractAtom>& patterns) {
  constexpr int kWidenAfter = 3;
  for (const auto& a : patterns) {
    if (a.args.size() != a.pred.arity) throw InputError("pattern arity mismatch for " + a.pred.str());
    if (!p.defines(a.pred)) throw UnknownPredicate("no clauses for " + a.pred.str());
  }

  CallSetAnalysis st;
  std::map<std::pair<Symbol, std::size_t>, int> call_changes, succ_changes;
  bool changed = false;

  auto record = [&](std::vector<AbstractTerm>& slot, const std::vector<AbstractTerm>& vals, const Symbol& pred,
                    std::map<std::pair<Symbol, std::size_t>, int>& counter) {
    for (std::size_t i = 0; i < vals.size(); ++i) {
      AbstractTerm j = join(slot[i], vals[i]);
      if (j == slot[i]) continue;
      if (++counter[{pred, i}] > kWidenAfter) j = AbstractTerm::Any;
      slot[i] = j;
      changed = true;
    }
  };
  auto record_call = [&](const AbstractAtom& a) {
    for (auto& c : st.calls.atoms)
      if (c.pred == a.pred) return record(c.args, a.args, a.pred, call_changes);
    st.calls.atoms.push_back(a);
    changed = true;
  };
  auto record_success = [&](const Symbol& pred, const std::vector<AbstractTerm>& vals) {
    auto it = st.success.find(pred);
    if (it == st.success.end()) {
      st.success.emplace(pred, vals);
      changed = true;
    } else {
      record(it->second, vals, pred, succ_changes);
    }
  };

  for (const auto& a : patterns) record_call(a);
  do {
    changed = false;
    ++st.iterations;
    for (std::size_t ci = 0; ci < st.calls.atoms.size(); ++ci) {
      const AbstractAtom call = st.calls.atoms[ci];
      for (auto idx : p.clauses_of(call.pred)) {
        const Clause& c = p.clauses[idx];
        detail::AbsEnv env;
        bool ok = true;
        for (std::size_t i = 0; i < call.args.size() && ok; ++i) ok = detail::abs_bind(c.head.arg(i), call.args[i], env);
        if (!ok) continue;
        bool complete = true;
        for (const auto& b : c.body) {
          AbstractAtom ba{b.pred(), {}};
          for (const auto& t : b.args()) ba.args.push_back(detail::abstract_of(t, env));
          std::vector<AbstractTerm> succ = ba.args;
          if (p.defines(b.pred())) {
            record_call(ba);
            auto it = st.success.find(b.pred());
            if (it == st.success.end()) {
              complete = false;
              break;
            }
            succ = it->second;
          }
          for (std::size_t i = 0; i < b.arity() && ok; ++i) ok = detail::abs_bind(b.arg(i), succ[i], env);
          if (!ok) {
            complete = false;
            break;
          }
        }
        if (!complete) continue;
        std::vector<AbstractTerm> head;
        for (const auto& t : c.head.args()) head.push_back(detail::abstract_of(t, env));
        record_success(call.pred, head);
      }
    }
  } while (changed);
  return st;
}

inline CallSet infer_call_set(const Program& p, const std::vector<AbstractAtom>& patterns) {
  if (patterns.empty()) throw InputError("no call patterns given");
  return analyze_calls(p, patterns).calls;
}

/// Call patterns from `%% query:` directives.
inline std::vector<AbstractAtom> query_patterns(const Program& p) {
  std::vector<AbstractAtom> out;
  for (const auto& d : p.directives_of(Directive::Kind::Query)) {
    AbstractAtom a{d.pred, {}};
    for (const auto& v : d.values) {
      auto t = abstract_term_from_string(v);
      if (!t) throw InputError("line " + std::to_string(d.line) + ": unknown abstract value '" + v + "'");
      a.args.push_back(*t);
    }
    out.push_back(std::move(a));
  }
  return out;
}

inline RigidityRequirement rigidity_requirements(const CallSet& cs, const Program& p) {
  (void)p;
  RigidityRequirement rr;
  for (const auto& a : cs.atoms)
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (a.args[i] == AbstractTerm::Free || a.args[i] == AbstractTerm::Any) rr.ignored_pred.insert(a.pred, i + 1);
      if (a.args[i] == AbstractTerm::NilListAny) rr.ignored_fun.insert(kCons, 1);
    }
  return rr;
}

// ---------------------------------------------------------------------------
// Concretization

inline bool is_nil_list(const Term& t, bool ground_elems) {
  Term cur = t;
  while (!cur.is_var() && cur.symbol() == kCons) {
    if (ground_elems && !cur.arg(0).is_ground()) return false;
    cur = cur.arg(1);
  }
  return !cur.is_var() && cur.symbol() == kNil;
}

inline bool describes(AbstractTerm a, const Term& t) {
  switch (a) {
    case AbstractTerm::Free: return t.is_var();
    case AbstractTerm::Ground: return t.is_ground();
    case AbstractTerm::NilListGround: return is_nil_list(t, true);
    case AbstractTerm::NilListAny: return is_nil_list(t, false);
    case AbstractTerm::Any: return true;
  }
  return false;
}

inline bool describes(const AbstractAtom& a, const Atom& at) {
  if (a.pred != at.pred()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!describes(a.args[i], at.arg(i))) return false;
  return true;
}

/// Some abstract atom of the call set describes `at`. Predicates without
/// clauses are not tracked and always count as covered.
inline bool covered(const CallSet& cs, const Program& p, const Atom& at) {
  if (!p.defines(at.pred())) return true;
  const AbstractAtom* a = cs.find(at.pred());
  return a && describes(*a, at);
}

/// Random ground term over `sig` of at most `max_size` symbols.
inline Term random_ground_term(const std::vector<Symbol>& sig, std::size_t max_size, std::mt19937& rng) {
  std::vector<Symbol> consts, funs;
  for (const auto& s : sig) (s.arity == 0 ? consts : funs).push_back(s);
  if (consts.empty()) consts.push_back(Symbol{"a", 0});
  auto pick = [&](const std::vector<Symbol>& v) { return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)]; };
  std::function<Term(std::size_t)> gen = [&](std::size_t budget) -> Term {
    std::vector<Symbol> fit;
    for (const auto& f : funs)
      if (f.arity + 1 <= budget) fit.push_back(f);
    if (fit.empty() || std::uniform_int_distribution<int>(0, 2)(rng) == 0) return Term::constant(pick(consts).name);
    Symbol f = pick(fit);
    std::size_t left = budget - 1;
    std::vector<Term> args;
    for (std::size_t i = 0; i < f.arity; ++i) {
      std::size_t share = std::max<std::size_t>(1, left / (f.arity - i));
      Term a = gen(share);
      left -= std::min(left, a.size());
      args.push_back(a);
    }
    return Term::app(f, std::move(args));
  };
  return gen(std::max<std::size_t>(1, max_size));
}

/// Random concrete atom described by `a`; fresh variables are numbered from `next_var`.
inline Atom concretize(const AbstractAtom& a, const std::vector<Symbol>& sig, std::size_t max_size, std::mt19937& rng,
                       VarId& next_var) {
  std::vector<Symbol> elems;
  for (const auto& s : sig)
    if (s.arity == 0 && s != kNil) elems.push_back(s);
  if (elems.empty()) elems.push_back(Symbol{"a", 0});
  auto list_of = [&](bool ground) {
    std::size_t len = std::uniform_int_distribution<std::size_t>(0, max_size / 2)(rng);
    std::vector<Term> items;
    for (std::size_t i = 0; i < len; ++i) {
      if (!ground && std::uniform_int_distribution<int>(0, 1)(rng) == 0)
        items.push_back(Term::var(next_var++, "E"));
      else
        items.push_back(Term::constant(elems[std::uniform_int_distribution<std::size_t>(0, elems.size() - 1)(rng)].name));
    }
    return Term::list(items);
  };
  std::vector<Term> args;
  for (auto v : a.args) {
    switch (v) {
      case AbstractTerm::Free: args.push_back(Term::var(next_var++, "Q")); break;
      case AbstractTerm::Ground: args.push_back(random_ground_term(sig, max_size, rng)); break;
      case AbstractTerm::NilListGround: args.push_back(list_of(true)); break;
      case AbstractTerm::NilListAny: args.push_back(list_of(false)); break;
      case AbstractTerm::Any:
        args.push_back(std::uniform_int_distribution<int>(0, 1)(rng) ? random_ground_term(sig, max_size, rng)
                                                                       : Term::var(next_var++, "Q"));
        break;
    }
  }
  return Atom(a.pred, std::move(args));
}

}  // namespace termlog
