#pragma once

// Depth-bounded LD resolution with direct-descendant tracking, and a
// bottom-up T_P evaluator over a finite Herbrand sample.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "termlog/term.hpp"

namespace termlog {

/// `number/1` is evaluated natively unless the program defines it.
inline bool is_builtin(const Program& p, const Symbol& s) {
  return s == Symbol{"number", 1} && !p.defines(s);
}

inline bool is_numeral(const Term& t) {
  if (!t.is_constant()) return false;
  const auto& n = t.symbol().name;
  return !n.empty() && std::all_of(n.begin(), n.end(), [](unsigned char c) { return std::isdigit(c); });
}

/// One resolution step (or a failed selection when `clause` is empty).
struct DerivationNode {
  std::size_t depth = 0;  // 1-based step number on its branch
  Atom selected;
  std::optional<std::size_t> clause;
  Substitution mgu;
  /// Branch-local index of the step whose clause body introduced `selected`; -1 for query atoms.
  std::ptrdiff_t origin = -1;
};

inline std::string format_node(const DerivationNode& n) {
  std::ostringstream os;
  os << n.depth << ' ' << n.selected << ' ';
  if (n.clause)
    os << "clause " << (*n.clause + 1);
  else
    os << (n.selected.pred().name == "number" ? "builtin" : "fail");
  os << ' ' << n.mgu;
  return os.str();
}

struct ExplorationOutcome {
  enum class Kind { FiniteTree, DepthLimitHit, LoopEvidence };
  Kind kind = Kind::FiniteTree;
  std::size_t answers = 0;
  std::size_t nodes = 0;
  std::size_t max_depth = 0;
  /// Branch ending at the depth limit, or the branch containing the loop.
  std::vector<DerivationNode> witness;
  /// Indices into `witness` of the directed sequence with a repeated variant.
  std::vector<std::size_t> loop;
  /// Loop evidence is a diagnostic, not a proof.
  bool heuristic = false;
  bool budget_exhausted = false;
  std::vector<std::vector<Atom>> answer_instances;
};

inline const char* to_string(ExplorationOutcome::Kind k) {
  switch (k) {
    case ExplorationOutcome::Kind::FiniteTree: return "FiniteTree";
    case ExplorationOutcome::Kind::DepthLimitHit: return "DepthLimitHit";
    case ExplorationOutcome::Kind::LoopEvidence: return "LoopEvidence";
  }
  return "?";
}

struct ExploreOptions {
  std::size_t max_nodes = 5'000'000;
  std::size_t keep_answers = 100;
  bool detect_loops = true;
  /// Every node in depth-first order.
  std::vector<DerivationNode>* trace = nullptr;
  /// Every complete branch (success, failure or limit).
  std::vector<std::vector<DerivationNode>>* branches = nullptr;
  std::function<void(const Atom&)> on_select;
};

namespace detail {

struct GoalAtom {
  Atom atom;
  std::ptrdiff_t origin;
};

class Explorer {
 public:
  Explorer(const Program& p, std::size_t max_depth, const ExploreOptions& opt)
      : p_(p), max_depth_(max_depth), opt_(opt) {}

  ExplorationOutcome run(const std::vector<Atom>& query) {
    VarId top = 0;
    for (const auto& a : query)
      for (auto id : var_ids(a.term())) top = std::max(top, id);
    counter_ = top + 1;
    std::vector<GoalAtom> goal;
    for (auto it = query.rbegin(); it != query.rend(); ++it) goal.push_back({*it, -1});
    query_ = query;
    explore(goal, query);
    return std::move(out_);
  }

 private:
  // Returns false when exploration must stop.
  bool explore(std::vector<GoalAtom>& goal, const std::vector<Atom>& instance) {
    if (goal.empty()) {
      ++out_.answers;
      if (out_.answer_instances.size() < opt_.keep_answers) out_.answer_instances.push_back(instance);
      if (opt_.branches) opt_.branches->push_back(path_);
      return true;
    }
    if (path_.size() >= max_depth_) {
      out_.kind = ExplorationOutcome::Kind::DepthLimitHit;
      out_.witness = path_;
      if (opt_.branches) opt_.branches->push_back(path_);
      return false;
    }
    if (++out_.nodes > opt_.max_nodes) {
      out_.kind = ExplorationOutcome::Kind::DepthLimitHit;
      out_.budget_exhausted = true;
      out_.witness = path_;
      return false;
    }
    GoalAtom sel = goal.back();
    goal.pop_back();
    if (opt_.on_select) opt_.on_select(sel.atom);
    std::size_t depth = path_.size() + 1;
    out_.max_depth = std::max(out_.max_depth, depth);

    if (opt_.detect_loops && loop_check(sel)) {
      goal.push_back(sel);
      return false;
    }

    bool any = false;
    if (is_builtin(p_, sel.atom.pred())) {
      if (is_numeral(sel.atom.arg(0))) {
        any = true;
        if (!step(goal, sel, depth, std::nullopt, Substitution{}, {}, instance)) return restore(goal, sel);
      }
    } else {
      for (auto idx : p_.clauses_of(sel.atom.pred())) {
        Clause c = rename_fresh(p_.clauses[idx], counter_);
        auto m = mgu(sel.atom, c.head);
        if (!m) continue;
        any = true;
        if (!step(goal, sel, depth, idx, *m, c.body, instance)) return restore(goal, sel);
      }
    }
    if (!any) {
      DerivationNode n{depth, sel.atom, std::nullopt, {}, sel.origin};
      if (opt_.trace) opt_.trace->push_back(n);
      if (opt_.branches) {
        path_.push_back(n);
        opt_.branches->push_back(path_);
        path_.pop_back();
      }
    }
    goal.push_back(sel);
    return true;
  }

  bool restore(std::vector<GoalAtom>& goal, const GoalAtom& sel) {
    goal.push_back(sel);
    return false;
  }

  bool step(const std::vector<GoalAtom>& goal, const GoalAtom& sel, std::size_t depth, std::optional<std::size_t> clause,
            const Substitution& m, const std::vector<Atom>& body, const std::vector<Atom>& instance) {
    DerivationNode n{depth, sel.atom, clause, m, sel.origin};
    if (opt_.trace) opt_.trace->push_back(n);
    path_.push_back(n);
    auto here = static_cast<std::ptrdiff_t>(path_.size() - 1);
    std::vector<GoalAtom> next;
    next.reserve(goal.size() + body.size());
    for (const auto& g : goal) next.push_back({apply_subst(g.atom, m), g.origin});
    for (auto it = body.rbegin(); it != body.rend(); ++it) next.push_back({apply_subst(*it, m), here});
    std::vector<Atom> inst;
    inst.reserve(instance.size());
    for (const auto& a : instance) inst.push_back(apply_subst(a, m));
    bool go = explore(next, inst);
    if (go) path_.pop_back();
    return go;
  }

  /// A selected atom that is a variant of a directed ancestor.
  bool loop_check(const GoalAtom& sel) {
    std::vector<std::size_t> chain;
    for (std::ptrdiff_t j = sel.origin; j >= 0; j = path_[static_cast<std::size_t>(j)].origin) {
      chain.push_back(static_cast<std::size_t>(j));
      if (variant_eq(path_[static_cast<std::size_t>(j)].selected, sel.atom)) {
        out_.kind = ExplorationOutcome::Kind::LoopEvidence;
        out_.heuristic = true;
        out_.witness = path_;
        out_.witness.push_back({path_.size() + 1, sel.atom, std::nullopt, {}, sel.origin});
        std::reverse(chain.begin(), chain.end());
        chain.push_back(out_.witness.size() - 1);
        out_.loop = chain;
        return true;
      }
    }
    return false;
  }

  const Program& p_;
  std::size_t max_depth_;
  const ExploreOptions& opt_;
  VarId counter_ = 0;
  std::vector<Atom> query_;
  std::vector<DerivationNode> path_;
  ExplorationOutcome out_;
};

}  // namespace detail

/// Depth-first construction of the LD-tree, cut at `max_depth` resolution steps.
inline ExplorationOutcome ld_explore(const Program& p, const std::vector<Atom>& query, std::size_t max_depth,
                                     const ExploreOptions& opt = {}) {
  if (max_depth == 0) max_depth = 1;
  return detail::Explorer(p, max_depth, opt).run(query);
}

/// Maximal chains of direct descendants in one branch, as node indices.
inline std::vector<std::vector<std::size_t>> directed_subsequences(const std::vector<DerivationNode>& branch) {
  std::vector<bool> has_child(branch.size(), false);
  for (const auto& n : branch)
    if (n.origin >= 0 && static_cast<std::size_t>(n.origin) < branch.size()) has_child[static_cast<std::size_t>(n.origin)] = true;
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < branch.size(); ++i) {
    if (has_child[i]) continue;
    std::vector<std::size_t> seq;
    for (auto j = static_cast<std::ptrdiff_t>(i); j >= 0; j = branch[static_cast<std::size_t>(j)].origin)
      seq.push_back(static_cast<std::size_t>(j));
    std::reverse(seq.begin(), seq.end());
    out.push_back(std::move(seq));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bottom-up evaluation

/// Ground terms over the program's functors and constants plus `extra`
/// constants, with at most `max_size` symbols each.
inline std::vector<Term> herbrand_sample(const Program& p, std::size_t max_size, const std::vector<std::string>& extra) {
  std::vector<Symbol> fun = functors(p), consts, comp;
  for (const auto& s : fun) (s.arity == 0 ? consts : comp).push_back(s);
  for (const auto& e : extra)
    if (std::find(consts.begin(), consts.end(), Symbol{e, 0}) == consts.end()) consts.push_back(Symbol{e, 0});
  std::vector<std::vector<Term>> by_size(max_size + 1);
  if (max_size >= 1)
    for (const auto& c : consts) by_size[1].push_back(Term::constant(c.name));
  for (std::size_t sz = 2; sz <= max_size; ++sz) {
    for (const auto& f : comp) {
      // distribute sz-1 symbols among f.arity arguments
      std::vector<std::size_t> sizes(f.arity, 1);
      auto rec = [&](auto&& self, std::size_t k, std::size_t left, std::vector<Term>& args) -> void {
        if (k == f.arity) {
          if (left == 0) by_size[sz].push_back(Term::app(f, args));
          return;
        }
        for (std::size_t s = 1; s <= left; ++s)
          for (const auto& t : by_size[s]) {
            args.push_back(t);
            self(self, k + 1, left - s, args);
            args.pop_back();
          }
      };
      std::vector<Term> args;
      rec(rec, 0, sz - 1, args);
    }
  }
  std::vector<Term> out;
  for (const auto& v : by_size) out.insert(out.end(), v.begin(), v.end());
  return out;
}

namespace detail {

inline bool within(const Atom& a, std::size_t max_size) {
  return std::all_of(a.args().begin(), a.args().end(), [&](const Term& t) { return t.size() <= max_size; });
}

}  // namespace detail

/// Least fixpoint of T_P restricted to atoms whose arguments are sample terms.
inline std::map<Symbol, std::set<Atom>> ground_model(const Program& p, std::size_t max_size,
                                                     const std::vector<std::string>& extra = {"c_fresh"}) {
  auto universe = herbrand_sample(p, max_size, extra);
  std::map<Symbol, std::set<Atom>> facts;
  bool changed = true;
  while (changed) {
    changed = false;
    auto snapshot = facts;
    for (const auto& c : p.clauses) {
      auto rec = [&](auto&& self, std::size_t i, Substitution s) -> void {
        if (i == c.body.size()) {
          Atom h = apply_subst(c.head, s);
          auto free = variables(h.term());
          auto emit = [&](auto&& emit_self, std::size_t k, Substitution& ss) -> void {
            if (k == free.size()) {
              Atom g = apply_subst(h, ss);
              if (detail::within(g, max_size) && facts[g.pred()].insert(g).second) changed = true;
              return;
            }
            for (const auto& u : universe) {
              ss.bind(free[k].var_id(), u);
              emit_self(emit_self, k + 1, ss);
            }
          };
          Substitution ss;
          emit(emit, 0, ss);
          return;
        }
        Atom b = apply_subst(c.body[i], s);
        if (is_builtin(p, b.pred())) {
          if (b.arg(0).is_ground()) {
            if (is_numeral(b.arg(0))) self(self, i + 1, s);
          } else if (b.arg(0).is_var()) {
            for (const auto& u : universe)
              if (is_numeral(u)) {
                Substitution t = s;
                t.bind(b.arg(0).var_id(), u);
                self(self, i + 1, t);
              }
          }
          return;
        }
        auto it = snapshot.find(b.pred());
        if (it == snapshot.end()) return;
        for (const auto& f : it->second) {
          Substitution t = s;
          if (match_into(b.term(), f.term(), t)) self(self, i + 1, t);
        }
      };
      rec(rec, 0, Substitution{});
    }
  }
  return facts;
}

inline std::set<Atom> ground_consequences(const Program& p, const Symbol& pred, std::size_t max_size,
                                          const std::vector<std::string>& extra = {"c_fresh"}) {
  auto m = ground_model(p, max_size, extra);
  auto it = m.find(pred);
  return it == m.end() ? std::set<Atom>{} : it->second;
}

}  // namespace termlog
