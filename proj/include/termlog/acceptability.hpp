#pragma once

// Decrease constraints of rigid (and well-moded) term-acceptability, their
// demand-driven reduction into order properties and interargument
// obligations, and the T_P-inclusion discharge of those obligations.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "termlog/callset.hpp"
#include "termlog/depgraph.hpp"
#include "termlog/error.hpp"
#include "termlog/orders.hpp"
#include "termlog/term.hpp"

namespace termlog {

/// `lhs > rhs`, `lhs =_> rhs` or `lhs || rhs`.
struct OrderAtom {
  enum class Rel { Gt, Eq, Inc };
  Rel rel = Rel::Gt;
  Term lhs;
  Term rhs;

  friend bool operator==(const OrderAtom&, const OrderAtom&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const OrderAtom& a) {
  const char* op = a.rel == OrderAtom::Rel::Gt ? " > " : a.rel == OrderAtom::Rel::Eq ? " = " : " || ";
  return os << a.lhs << op << a.rhs;
}

/// Placeholder t_i of an interargument formula (1-based).
inline Term placeholder(std::size_t i) { return Term::var(static_cast<VarId>(i), "t" + std::to_string(i)); }

/// Relation over the arguments of a conjunction `shape` (a single atom in the
/// common case). Placeholders t1..tN number the arguments of the shape's
/// atoms left to right; the formula is in DNF.
struct InterargRelation {
  std::vector<Atom> shape;
  std::vector<std::vector<OrderAtom>> formula;

  const Symbol& pred() const { return shape.front().pred(); }
  bool single() const noexcept { return shape.size() == 1; }

  std::size_t width() const {
    std::size_t n = 0;
    for (const auto& a : shape) n += a.arity();
    return n;
  }

  /// The window is an instance of the shape.
  bool applies_to(std::span<const Atom> window) const {
    if (window.size() != shape.size()) return false;
    Substitution s;
    for (std::size_t i = 0; i < shape.size(); ++i) {
      if (shape[i].pred() != window[i].pred()) return false;
      if (!match_into(shape[i].term(), window[i].term(), s)) return false;
    }
    return true;
  }

  Substitution binding(std::span<const Atom> window) const {
    Substitution s;
    std::size_t k = 1;
    for (const auto& a : window)
      for (const auto& t : a.args()) s.bind(static_cast<VarId>(k++), t);
    return s;
  }

  std::vector<std::vector<OrderAtom>> instantiate(std::span<const Atom> window) const {
    Substitution s = binding(window);
    std::vector<std::vector<OrderAtom>> out;
    for (const auto& conj : formula) {
      std::vector<OrderAtom> c;
      for (const auto& a : conj) c.push_back({a.rel, apply_subst(a.lhs, s), apply_subst(a.rhs, s)});
      out.push_back(std::move(c));
    }
    return out;
  }

  std::string formula_str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < formula.size(); ++i) {
      if (i) os << " ; ";
      for (std::size_t j = 0; j < formula[i].size(); ++j) os << (j ? " & " : "") << formula[i][j];
    }
    return os.str();
  }

  std::string str() const {
    std::ostringstream os;
    os << "{(";
    for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? ", " : "") << shape[i];
    os << ") | " << formula_str() << "}";
    return os.str();
  }

  /// {p(t1..tn) | t_i > t_j}.
  static InterargRelation single_gt(const Symbol& p, std::size_t i, std::size_t j) {
    std::vector<Term> args;
    for (std::size_t k = 1; k <= p.arity; ++k) args.push_back(placeholder(k));
    return {{Atom(p, std::move(args))}, {{{OrderAtom::Rel::Gt, placeholder(i), placeholder(j)}}}};
  }

  friend bool operator==(const InterargRelation& a, const InterargRelation& b) {
    return variant_eq(std::span<const Atom>(a.shape), std::span<const Atom>(b.shape)) && a.formula == b.formula;
  }
};

/// Two relations talk about the same conjunction.
inline bool same_shape(const InterargRelation& a, const InterargRelation& b) {
  return variant_eq(std::span<const Atom>(a.shape), std::span<const Atom>(b.shape));
}

/// H ≻ B_i under the relations of B_1..B_{i-1}.
struct DecreaseConstraint {
  std::size_t clause_id = 0;
  std::size_t body_index = 0;
  Atom head;   // ignored positions wildcarded
  Atom body;   // likewise
  std::vector<Atom> conditions;
  bool strict = true;
  /// Inter-predicate decrease justified by the predicate layering (well-moded mode).
  bool layered = false;

  std::string str() const {
    std::ostringstream os;
    if (!conditions.empty()) {
      os << '[';
      for (std::size_t i = 0; i < conditions.size(); ++i) os << (i ? ", " : "") << conditions[i];
      os << "] => ";
    }
    os << head << " > " << body;
    return os.str();
  }
};

inline Term wildcard_term() { return Term::app(kWildcard, {}); }

/// Replaces the positions of `a` listed in `ignored` by the wildcard.
inline Atom wildcard(const Atom& a, const PositionFamily& ignored) {
  std::vector<Term> args(a.args().begin(), a.args().end());
  for (std::size_t i = 0; i < args.size(); ++i)
    if (ignored.contains(a.pred(), i + 1)) args[i] = wildcard_term();
  return Atom(a.pred(), std::move(args));
}

/// Head can be unified with the call set's description of its predicate.
inline bool reachable(const Clause& c, const CallSet& cs) {
  const AbstractAtom* a = cs.find(c.head.pred());
  if (!a) return false;
  detail::AbsEnv env;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!detail::abs_bind(c.head.arg(i), a->args[i], env)) return false;
  return true;
}

inline std::vector<DecreaseConstraint> generate_constraints(const Program& p, const CallSet& cs,
                                                            const RigidityRequirement& rr,
                                                            std::vector<std::string>* warnings = nullptr) {
  DepGraph g(p);
  std::vector<DecreaseConstraint> out;
  for (std::size_t ci = 0; ci < p.clauses.size(); ++ci) {
    const Clause& c = p.clauses[ci];
    if (!reachable(c, cs)) {
      if (warnings) warnings->push_back("UnreachableClause: " + to_string(c));
      continue;
    }
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      if (!g.mutual(c.body[i].pred(), c.head.pred())) continue;
      DecreaseConstraint d;
      d.clause_id = ci;
      d.body_index = i;
      d.head = wildcard(c.head, rr.ignored_pred);
      d.body = wildcard(c.body[i], rr.ignored_pred);
      d.conditions.assign(c.body.begin(), c.body.begin() + static_cast<std::ptrdiff_t>(i));
      out.push_back(std::move(d));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Demands

struct Demand {
  enum class Kind { SubtermAt, MonotoneAt, GroundDecrease, ConditionalDecrease, Equality };
  Kind kind = Kind::GroundDecrease;
  Symbol sym;
  std::size_t pos = 0;
  std::vector<OrderAtom> premises;
  Term lhs;
  Term rhs;

  static Demand subterm_at(Symbol f, std::size_t i) { return {Kind::SubtermAt, std::move(f), i, {}, {}, {}}; }
  static Demand monotone_at(Symbol f, std::size_t i) { return {Kind::MonotoneAt, std::move(f), i, {}, {}, {}}; }
  static Demand decrease(std::vector<OrderAtom> premises, Term l, Term r) {
    Kind k = premises.empty() ? Kind::GroundDecrease : Kind::ConditionalDecrease;
    return {k, {}, 0, std::move(premises), std::move(l), std::move(r)};
  }
  static Demand equality(std::vector<OrderAtom> premises, Term l, Term r) {
    return {Kind::Equality, {}, 0, std::move(premises), std::move(l), std::move(r)};
  }

  bool is_property() const noexcept { return kind == Kind::SubtermAt || kind == Kind::MonotoneAt; }

  std::string str() const {
    std::ostringstream os;
    switch (kind) {
      case Kind::SubtermAt: os << "S_" << sym.str() << " contains " << pos; break;
      case Kind::MonotoneAt: os << "M_" << sym.str() << " contains " << pos; break;
      default:
        for (std::size_t i = 0; i < premises.size(); ++i) os << (i ? " & " : "") << premises[i];
        if (!premises.empty()) os << " implies ";
        os << lhs << (kind == Kind::Equality ? " = " : " > ") << rhs;
    }
    return os.str();
  }

  friend bool operator==(const Demand&, const Demand&) = default;
};

inline void add_unique(std::vector<Demand>& v, const Demand& d) {
  if (std::find(v.begin(), v.end(), d) == v.end()) v.push_back(d);
}

/// A relation the interargument relations of a preceding conjunction must entail.
struct InterargObligation {
  InterargRelation required;
  /// Window of the constraint's conditions the relation is about.
  std::size_t first = 0;
  std::size_t last = 0;
};

struct ReductionOutcome {
  enum class Kind { Demands, Obligation, Unreducible };
  Kind kind = Kind::Unreducible;
  /// "option1", "option2" or "none".
  std::string route = "none";
  std::vector<Demand> demands;
  std::vector<InterargObligation> obligations;
};

namespace detail {

class Deriver {
 public:
  static constexpr int kMaxDepth = 8;

  Deriver(const std::vector<Atom>& conds, const PositionFamily& ignored, bool option2)
      : conds_(conds), ignored_(ignored), option2_(option2) {}

  struct Proof {
    std::vector<Demand> demands;
    std::vector<InterargObligation> obligations;
    void add(const Proof& o) {
      for (const auto& d : o.demands) add_unique(demands, d);
      obligations.insert(obligations.end(), o.obligations.begin(), o.obligations.end());
    }
  };

  bool eq(const Term& s, const Term& t) const {
    if (s.is_var() || t.is_var()) return s.is_var() && t.is_var() && s.var_id() == t.var_id();
    if (s.symbol() != t.symbol()) return false;
    for (std::size_t i = 0; i < s.arity(); ++i) {
      if (ignored_.contains(s.symbol(), i + 1)) continue;
      if (!eq(s.arg(i), t.arg(i))) return false;
    }
    return true;
  }

  std::optional<Proof> ge(const Term& s, const Term& t, int depth) const {
    if (eq(s, t)) return Proof{};
    return gt(s, t, depth);
  }

  std::optional<Proof> gt(const Term& s, const Term& t, int depth) const {
    if (depth > kMaxDepth || eq(s, t)) return std::nullopt;
    if (!s.is_var()) {
      // direct subterm
      for (std::size_t i = 0; i < s.arity(); ++i) {
        if (ignored_.contains(s.symbol(), i + 1)) continue;
        if (eq(s.arg(i), t)) return Proof{{Demand::subterm_at(s.symbol(), i + 1)}, {}};
      }
    }
    if (option2_)
      if (auto pr = through_conditions(s, t, depth)) return pr;
    if (!s.is_var() && !t.is_var() && s.symbol() == t.symbol()) {
      Proof pr;
      bool strict = false, ok = true;
      for (std::size_t i = 0; i < s.arity() && ok; ++i) {
        if (ignored_.contains(s.symbol(), i + 1) || eq(s.arg(i), t.arg(i))) continue;
        auto sub = gt(s.arg(i), t.arg(i), depth + 1);
        if (!sub) {
          ok = false;
          break;
        }
        strict = true;
        add_unique(pr.demands, Demand::monotone_at(s.symbol(), i + 1));
        pr.add(*sub);
      }
      if (ok && strict) return pr;
    }
    if (!s.is_var()) {
      // transitivity through a subterm
      for (std::size_t i = 0; i < s.arity(); ++i) {
        if (ignored_.contains(s.symbol(), i + 1) || s.arg(i).is_var()) continue;
        if (auto sub = gt(s.arg(i), t, depth + 1)) {
          Proof pr{{Demand::subterm_at(s.symbol(), i + 1)}, {}};
          pr.add(*sub);
          return pr;
        }
      }
    }
    return std::nullopt;
  }

 private:
  /// s ≥ a, a > b by a relation on preceding atoms, b ≥ t.
  std::optional<Proof> through_conditions(const Term& s, const Term& t, int depth) const {
    Deriver plain(conds_, ignored_, false);
    struct Slot {
      std::size_t atom, arg;
    };
    std::vector<Slot> slots;
    for (std::size_t j = 0; j < conds_.size(); ++j)
      for (std::size_t a = 0; a < conds_[j].arity(); ++a) slots.push_back({j, a});
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& x : slots) {
        auto left = plain.ge(s, conds_[x.atom].arg(x.arg), depth + 1);
        if (!left) continue;
        for (const auto& y : slots) {
          if (x.atom == y.atom && x.arg == y.arg) continue;
          if ((pass == 0) != (x.atom == y.atom)) continue;
          auto right = plain.ge(conds_[y.atom].arg(y.arg), t, depth + 1);
          if (!right) continue;
          std::size_t lo = std::min(x.atom, y.atom), hi = std::max(x.atom, y.atom);
          auto index = [&](const Slot& z) {
            std::size_t k = 1;
            for (std::size_t j = lo; j < z.atom; ++j) k += conds_[j].arity();
            return k + z.arg;
          };
          InterargRelation rel;
          if (lo == hi) {
            rel = InterargRelation::single_gt(conds_[lo].pred(), x.arg + 1, y.arg + 1);
          } else {
            rel.shape.assign(conds_.begin() + static_cast<std::ptrdiff_t>(lo),
                             conds_.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
            rel.formula = {{{OrderAtom::Rel::Gt, placeholder(index(x)), placeholder(index(y))}}};
          }
          Proof pr;
          pr.add(*left);
          pr.add(*right);
          pr.obligations.push_back({std::move(rel), lo, hi});
          return pr;
        }
      }
    }
    return std::nullopt;
  }

  const std::vector<Atom>& conds_;
  const PositionFamily& ignored_;
  bool option2_;
};

}  // namespace detail

/// Option 1 (order properties only) is tried before Option 2 (interargument
/// obligations on the preceding atoms).
inline ReductionOutcome reduce_constraint(const DecreaseConstraint& c, const PositionFamily& ignored = {}) {
  ReductionOutcome out;
  if (c.layered) {
    out.kind = ReductionOutcome::Kind::Demands;
    out.route = "layered";
    return out;
  }
  for (bool option2 : {false, true}) {
    detail::Deriver d(c.conditions, ignored, option2);
    if (auto pr = d.gt(c.head.term(), c.body.term(), 0)) {
      out.demands = std::move(pr->demands);
      out.obligations = std::move(pr->obligations);
      out.kind = out.obligations.empty() ? ReductionOutcome::Kind::Demands : ReductionOutcome::Kind::Obligation;
      out.route = option2 ? "option2" : "option1";
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Unfolding and discharge

/// `head ← body` where head is a conjunction.
struct GeneralizedClause {
  std::vector<Atom> head;
  std::vector<Atom> body;
};

inline std::ostream& operator<<(std::ostream& os, const GeneralizedClause& g) {
  for (std::size_t i = 0; i < g.head.size(); ++i) os << (i ? ", " : "") << g.head[i];
  if (!g.body.empty()) {
    os << " :- ";
    for (std::size_t i = 0; i < g.body.size(); ++i) os << (i ? ", " : "") << g.body[i];
  }
  return os << '.';
}

inline VarId max_var_id(std::span<const Atom> atoms) {
  VarId m = 0;
  for (const auto& a : atoms)
    for (auto id : var_ids(a.term())) m = std::max(m, id);
  return m;
}

/// One unfolding step on every atom of `atoms`, all clause combinations.
inline std::vector<GeneralizedClause> unfold_conjunction(const Program& p, const std::vector<Atom>& atoms) {
  std::vector<GeneralizedClause> out;
  VarId counter = max_var_id(atoms) + 1;
  auto rec = [&](auto&& self, std::size_t i, const Substitution& theta, std::vector<Atom> body) -> void {
    if (i == atoms.size()) {
      GeneralizedClause g;
      for (const auto& a : atoms) g.head.push_back(apply_subst(a, theta));
      for (const auto& b : body) g.body.push_back(apply_subst(b, theta));
      out.push_back(std::move(g));
      return;
    }
    for (auto idx : p.clauses_of(atoms[i].pred())) {
      Clause c = rename_fresh(p.clauses[idx], counter);
      Substitution s = theta;
      if (!unify_with(apply_subst(atoms[i].term(), theta), c.head.term(), s)) continue;
      auto b = body;
      b.insert(b.end(), c.body.begin(), c.body.end());
      self(self, i + 1, s, std::move(b));
    }
  };
  rec(rec, 0, Substitution{}, {});
  return out;
}

struct DischargeResult {
  bool ok = true;
  std::string reason;
  std::vector<Demand> demands;
};

namespace detail {

inline void demands_from(const InterargRelation& rel, std::span<const Atom> head, std::vector<OrderAtom> premises,
                         std::vector<Demand>& out) {
  auto concl = rel.instantiate(head);
  if (concl.empty()) return;
  // A disjunctive conclusion is strengthened to its first disjunct.
  for (const auto& a : concl.front()) {
    if (a.rel == OrderAtom::Rel::Gt) add_unique(out, Demand::decrease(premises, a.lhs, a.rhs));
    if (a.rel == OrderAtom::Rel::Eq) add_unique(out, Demand::equality(premises, a.lhs, a.rhs));
  }
}

/// Conjuncts usable as premises: only non-disjunctive instances.
inline void premises_from(const InterargRelation& rel, std::span<const Atom> window, std::vector<OrderAtom>& out) {
  auto inst = rel.instantiate(window);
  if (inst.size() != 1) return;
  for (const auto& a : inst.front())
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
}

}  // namespace detail

/// Demands under which {atoms satisfying `rel`} is closed under T_P.
/// `known` relations of other predicates may contribute premises.
inline DischargeResult discharge_obligation(const Program& p, const InterargRelation& rel,
                                            const std::vector<InterargRelation>& known = {}) {
  DischargeResult res;
  if (rel.single()) {
    for (auto idx : p.clauses_of(rel.pred())) {
      const Clause& c = p.clauses[idx];
      std::vector<OrderAtom> premises;
      for (const auto& b : c.body) {
        std::span<const Atom> w(&b, 1);
        if (rel.applies_to(w)) detail::premises_from(rel, w, premises);
        for (const auto& k : known)
          if (k.single() && !same_shape(k, rel) && k.applies_to(w)) detail::premises_from(k, w, premises);
      }
      detail::demands_from(rel, std::span<const Atom>(&c.head, 1), std::move(premises), res.demands);
    }
    return res;
  }
  for (const auto& g : unfold_conjunction(p, rel.shape)) {
    std::vector<OrderAtom> premises;
    if (!g.body.empty()) {
      if (!rel.applies_to(g.body)) {
        res.ok = false;
        res.reason = "unfolded body is not an instance of the conjunction: " + to_string(g);
        res.demands.clear();
        return res;
      }
      detail::premises_from(rel, g.body, premises);
    }
    detail::demands_from(rel, g.head, std::move(premises), res.demands);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Well-moded variant

/// Per predicate, `true` marks an output position.
using ModeMap = std::map<Symbol, std::vector<bool>>;

inline ModeMap mode_map(const Program& p) {
  ModeMap m;
  for (const auto& d : p.directives_of(Directive::Kind::Mode)) {
    std::vector<bool> outs;
    for (const auto& v : d.values) {
      if (v != "in" && v != "out")
        throw InputError("line " + std::to_string(d.line) + ": mode must be in or out, got '" + v + "'");
      outs.push_back(v == "out");
    }
    m[d.pred] = std::move(outs);
  }
  return m;
}

inline PositionFamily output_positions(const ModeMap& modes) {
  PositionFamily f;
  for (const auto& [s, outs] : modes)
    for (std::size_t i = 0; i < outs.size(); ++i)
      if (outs[i]) f.insert(s, i + 1);
  return f;
}

namespace detail {
inline const std::vector<bool>& modes_of(const ModeMap& modes, const Program& p, const Symbol& s) {
  static const std::vector<bool> none;
  auto it = modes.find(s);
  if (it != modes.end()) return it->second;
  if (p.defines(s)) throw InputError("no mode declared for " + s.str());
  return none;
}
}  // namespace detail

inline bool wellmoded_clause(const Program& p, const Clause& c, const ModeMap& modes) {
  std::set<VarId> known;
  auto io = [&](const Atom& a, bool want_out, auto&& f) {
    const auto& m = detail::modes_of(modes, p, a.pred());
    for (std::size_t i = 0; i < a.arity(); ++i)
      if ((i < m.size() && m[i]) == want_out) f(a.arg(i));
  };
  io(c.head, false, [&](const Term& t) { for (auto id : var_ids(t)) known.insert(id); });
  for (const auto& b : c.body) {
    bool ok = true;
    io(b, false, [&](const Term& t) {
      for (auto id : var_ids(t)) ok = ok && known.count(id);
    });
    if (!ok) return false;
    io(b, true, [&](const Term& t) { for (auto id : var_ids(t)) known.insert(id); });
  }
  bool ok = true;
  io(c.head, true, [&](const Term& t) {
    for (auto id : var_ids(t)) ok = ok && known.count(id);
  });
  return ok;
}

inline bool wellmoded_check(const Program& p, const ModeMap& modes) {
  return std::all_of(p.clauses.begin(), p.clauses.end(), [&](const Clause& c) { return wellmoded_clause(p, c, modes); });
}

inline std::vector<DecreaseConstraint> generate_wellmoded_constraints(const Program& p, const ModeMap& modes) {
  for (std::size_t i = 0; i < p.clauses.size(); ++i)
    if (!wellmoded_clause(p, p.clauses[i], modes))
      throw NotWellModed("clause " + std::to_string(i + 1) + " is not well-moded: " + to_string(p.clauses[i]));
  DepGraph g(p);
  PositionFamily outs = output_positions(modes);
  std::vector<DecreaseConstraint> out;
  for (std::size_t ci = 0; ci < p.clauses.size(); ++ci) {
    const Clause& c = p.clauses[ci];
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      if (!p.defines(c.body[i].pred())) continue;
      DecreaseConstraint d;
      d.clause_id = ci;
      d.body_index = i;
      d.head = wildcard(c.head, outs);
      d.body = wildcard(c.body[i], outs);
      d.conditions.assign(c.body.begin(), c.body.begin() + static_cast<std::ptrdiff_t>(i));
      d.layered = !g.mutual(c.head.pred(), c.body[i].pred());
      out.push_back(std::move(d));
    }
  }
  return out;
}

}  // namespace termlog
