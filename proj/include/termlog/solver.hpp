#pragma once

// The analysis pipeline and the order search: builds constraints, reduces
// them, discharges interargument obligations and looks for a concrete order
// under which everything holds.

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "termlog/acceptability.hpp"
#include "termlog/callset.hpp"
#include "termlog/depgraph.hpp"
#include "termlog/orders.hpp"
#include "termlog/term.hpp"

namespace termlog {

enum class Mode { Rigid, WellModed };

inline const char* to_string(Mode m) { return m == Mode::Rigid ? "rigid" : "wellmoded"; }

struct Justification {
  std::size_t constraint = 0;
  /// option1, option2, direct or layered.
  std::string route;
  std::vector<std::string> lemmas;
};

struct ProofCertificate {
  Mode mode = Mode::Rigid;
  CallSet call_set;
  RigidityRequirement rigidity;
  ModeMap modes;
  std::vector<DecreaseConstraint> constraints;
  std::vector<InterargRelation> interarg;
  OrderSpec order;
  std::vector<Justification> per_constraint;
  std::size_t search_trace = 0;
};

struct Verdict {
  enum class Kind { Terminating, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<ProofCertificate> certificate;
  std::string reason;
  std::size_t candidates_tried = 0;

  bool terminating() const noexcept { return kind == Kind::Terminating; }
};

/// Intermediate products of the pipeline for one program.
struct Analysis {
  Mode mode = Mode::Rigid;
  CallSet call_set;
  RigidityRequirement rigidity;
  ModeMap modes;
  /// Positions every candidate order must erase.
  PositionFamily filter;
  std::vector<DecreaseConstraint> constraints;
  std::vector<ReductionOutcome> outcomes;
  std::vector<InterargRelation> relations;
  std::vector<std::vector<Demand>> relation_demands;
  std::vector<Demand> property_demands;
  std::vector<std::pair<Symbol, Symbol>> harvested;
  std::vector<std::string> warnings;
};

/// Predicate and functor symbols in order of first occurrence.
inline std::vector<Symbol> signature_in_order(const Program& p) {
  std::vector<Symbol> out;
  auto atom = [&](const Atom& a) {
    if (std::find(out.begin(), out.end(), a.pred()) == out.end()) out.push_back(a.pred());
    for (const auto& t : a.args()) collect_symbols(t, out);
  };
  for (const auto& c : p.clauses) {
    atom(c.head);
    for (const auto& b : c.body) atom(b);
  }
  out.erase(std::remove(out.begin(), out.end(), kWildcard), out.end());
  return out;
}

/// Norm extended to predicate atoms: an atom weighs the sum of its arguments.
inline NormDef with_predicate_rules(NormDef n, const Program& p) {
  for (const auto& s : p.predicates()) {
    NormRule r;
    for (std::size_t i = 1; i <= s.arity; ++i) r.positions.insert(i);
    n.rules[s] = r;
  }
  return n;
}

// ---------------------------------------------------------------------------
// Pipeline

namespace detail {

inline void merge_obligation(std::vector<InterargRelation>& rels, const InterargRelation& r) {
  for (auto& have : rels) {
    if (!same_shape(have, r)) continue;
    // rename r's placeholders onto have's: both number shape arguments identically
    for (const auto& a : r.formula.front())
      if (std::find(have.formula.front().begin(), have.formula.front().end(), a) == have.formula.front().end())
        have.formula.front().push_back(a);
    return;
  }
  rels.push_back(r);
}

/// Root-symbol precedence pair for a decrease not derivable from order properties.
inline void harvest(const Term& l, const Term& r, const PositionFamily& filter,
                    std::vector<std::pair<Symbol, Symbol>>& out) {
  if (l.is_var() || r.is_var() || l.symbol() == r.symbol()) return;
  std::vector<Atom> none;
  if (Deriver(none, filter, false).gt(l, r, 0)) return;
  std::pair<Symbol, Symbol> pr{l.symbol(), r.symbol()};
  if (std::find(out.begin(), out.end(), pr) == out.end()) out.push_back(pr);
}

}  // namespace detail

inline Analysis prepare_rigid(const Program& p, const CallSet& cs, const RigidityRequirement& rr) {
  Analysis a;
  a.mode = Mode::Rigid;
  a.call_set = cs;
  a.rigidity = rr;
  a.filter = rr.combined();
  a.constraints = generate_constraints(p, cs, rr, &a.warnings);
  return a;
}

inline Analysis prepare_wellmoded(const Program& p, const ModeMap& modes) {
  Analysis a;
  a.mode = Mode::WellModed;
  a.modes = modes;
  a.filter = output_positions(modes);
  a.constraints = generate_wellmoded_constraints(p, modes);
  return a;
}

/// Reduction, obligation discharge and precedence harvesting. When
/// `given` is non-null those relations are used instead of synthesized ones.
inline void reduce_all(const Program& p, Analysis& a, const std::vector<InterargRelation>* given = nullptr) {
  a.outcomes.clear();
  a.property_demands.clear();
  a.harvested.clear();
  std::vector<InterargRelation> rels;
  for (const auto& c : a.constraints) {
    a.outcomes.push_back(reduce_constraint(c, a.filter));
    const auto& o = a.outcomes.back();
    for (const auto& d : o.demands) add_unique(a.property_demands, d);
    for (const auto& ob : o.obligations) detail::merge_obligation(rels, ob.required);
    if (o.kind == ReductionOutcome::Kind::Unreducible) detail::harvest(c.head.term(), c.body.term(), a.filter, a.harvested);
  }
  if (given) rels = *given;
  a.relations.clear();
  a.relation_demands.clear();
  for (const auto& r : rels) {
    auto res = discharge_obligation(p, r, rels);
    if (!res.ok) {
      a.warnings.push_back("relation " + r.str() + " not discharged: " + res.reason);
      continue;
    }
    a.relations.push_back(r);
    a.relation_demands.push_back(res.demands);
    for (const auto& d : res.demands)
      if (!d.is_property()) detail::harvest(d.lhs, d.rhs, a.filter, a.harvested);
  }
}

// ---------------------------------------------------------------------------
// Checking an order

/// Hypotheses contributed by the relations on windows of `conds`.
inline std::vector<Hypothesis> hypotheses_for(const std::vector<InterargRelation>& rels, const std::vector<Atom>& conds) {
  std::vector<Hypothesis> hyps;
  for (const auto& r : rels) {
    std::size_t w = r.shape.size();
    for (std::size_t i = 0; i + w <= conds.size(); ++i) {
      std::span<const Atom> win(conds.data() + i, w);
      if (!r.applies_to(win)) continue;
      std::vector<OrderAtom> prem;
      detail::premises_from(r, win, prem);
      for (const auto& o : prem)
        if (o.rel == OrderAtom::Rel::Gt) hyps.push_back({o.lhs, o.rhs});
    }
  }
  return hyps;
}

inline bool demand_holds(const OrderSpec& o, const Demand& d, const DefinedFamilies& fams) {
  switch (d.kind) {
    case Demand::Kind::SubtermAt: return fams.subterm.contains(d.sym, d.pos);
    case Demand::Kind::MonotoneAt: return fams.monotone.contains(d.sym, d.pos);
    case Demand::Kind::Equality: return entails_equal(o, d.lhs, d.rhs);
    default: {
      std::vector<Hypothesis> hyps;
      for (const auto& pr : d.premises)
        if (pr.rel == OrderAtom::Rel::Gt) hyps.push_back({pr.lhs, pr.rhs});
      return entails(o, hyps, d.lhs, d.rhs);
    }
  }
}

/// First failing check of `o` against the analysis, or nullopt when all hold.
inline std::optional<std::string> check_order(const Program& p, const Analysis& a, const OrderSpec& o) {
  auto sig = signature_in_order(p);
  DefinedFamilies fams = defined_families(o, sig);
  for (std::size_t i = 0; i < a.constraints.size(); ++i) {
    const auto& c = a.constraints[i];
    if (c.layered) continue;
    auto hyps = hypotheses_for(a.relations, c.conditions);
    if (!entails(o, hyps, c.head.term(), c.body.term()))
      return "constraint " + std::to_string(i + 1) + ": " + c.str() + " not entailed";
  }
  for (std::size_t i = 0; i < a.relations.size(); ++i)
    for (const auto& d : a.relation_demands[i])
      if (!demand_holds(o, d, fams)) return "relation " + a.relations[i].str() + ": demand " + d.str() + " fails";
  return std::nullopt;
}

inline std::vector<Justification> justify(const Program& p, const Analysis& a, const OrderSpec& o) {
  auto fams = defined_families(o, signature_in_order(p));
  const char* cmp = o.kind == OrderSpec::Kind::Rpo ? "rpo-comparison" : "norm-comparison";
  std::vector<Justification> out;
  for (std::size_t i = 0; i < a.constraints.size(); ++i) {
    Justification j{i, "direct", {}};
    const auto& oc = a.outcomes[i];
    if (a.constraints[i].layered) {
      j.route = "layered";
      j.lemmas.push_back("predicate-layering");
    } else if (oc.kind != ReductionOutcome::Kind::Unreducible &&
               std::all_of(oc.demands.begin(), oc.demands.end(), [&](const Demand& d) { return demand_holds(o, d, fams); })) {
      j.route = oc.route;
      for (const auto& d : oc.demands)
        j.lemmas.push_back((d.kind == Demand::Kind::SubtermAt ? "subterm: " : "monotonicity: ") + d.str());
      for (const auto& ob : oc.obligations) j.lemmas.push_back("interarg: " + ob.required.str());
      if (oc.demands.size() + oc.obligations.size() > 1) j.lemmas.push_back("transitivity");
    } else {
      j.lemmas.push_back(cmp);
    }
    out.push_back(std::move(j));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Search

inline std::size_t default_budget() {
  if (const char* env = std::getenv("TERMLOG_BUDGET")) {
    try {
      long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (...) {
    }
  }
  return 10000;
}

struct SolveOptions {
  /// auto, rpo, listlen or termsize.
  std::string order = "auto";
  std::size_t budget = default_budget();
};

/// Linear extensions of `pairs` over `syms`, earliest symbols preferred, at most `limit`.
inline std::vector<std::vector<Symbol>> linear_extensions(const std::vector<Symbol>& syms,
                                                          const std::vector<std::pair<Symbol, Symbol>>& pairs,
                                                          std::size_t limit) {
  std::vector<std::vector<Symbol>> out;
  std::vector<Symbol> cur;
  std::vector<bool> used(syms.size(), false);
  auto blocked = [&](std::size_t k) {
    for (const auto& [hi, lo] : pairs) {
      if (lo != syms[k]) continue;
      for (std::size_t j = 0; j < syms.size(); ++j)
        if (!used[j] && syms[j] == hi) return true;
    }
    return false;
  };
  auto rec = [&](auto&& self) -> void {
    if (out.size() >= limit) return;
    if (cur.size() == syms.size()) {
      out.push_back(cur);
      return;
    }
    for (std::size_t k = 0; k < syms.size() && out.size() < limit; ++k) {
      if (used[k] || blocked(k)) continue;
      used[k] = true;
      cur.push_back(syms[k]);
      self(self);
      cur.pop_back();
      used[k] = false;
    }
  };
  rec(rec);
  return out;
}

/// Candidate orders in search order: the two stock norms, then RPO
/// precedences extending the harvested pairs.
inline std::vector<OrderSpec> candidate_orders(const Program& p, const Analysis& a, const SolveOptions& opt) {
  std::vector<OrderSpec> out;
  if (opt.order == "auto" || opt.order == "listlen")
    out.push_back(OrderSpec::norm_based(with_predicate_rules(NormDef::list_length(), p), a.filter));
  if (opt.order == "auto" || opt.order == "termsize")
    out.push_back(OrderSpec::norm_based(with_predicate_rules(NormDef::term_size(), p), a.filter));
  if (opt.order == "auto" || opt.order == "rpo") {
    std::size_t room = opt.budget > out.size() ? opt.budget - out.size() : 0;
    auto sig = signature_in_order(p);
    auto exts = linear_extensions(sig, a.harvested, room);
    if (exts.empty()) exts = linear_extensions(sig, {}, room);  // cyclic harvest
    for (const auto& e : exts) out.push_back(OrderSpec::rpo(Precedence::from_ranking(e), a.filter));
  }
  if (out.size() > opt.budget) out.resize(opt.budget);
  return out;
}

inline Verdict solve(const Program& p, const Analysis& a, const SolveOptions& opt = {}) {
  Verdict v;
  for (const auto& d : a.property_demands)
    if (a.filter.contains(d.sym, d.pos)) {
      v.reason = "demand " + d.str() + " conflicts with an ignored position";
      return v;
    }
  auto cands = candidate_orders(p, a, opt);
  std::vector<std::string> failures;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    ++v.candidates_tried;
    auto fail = check_order(p, a, cands[i]);
    if (!fail) {
      ProofCertificate cert;
      cert.mode = a.mode;
      cert.call_set = a.call_set;
      cert.rigidity = a.rigidity;
      cert.modes = a.modes;
      cert.constraints = a.constraints;
      cert.interarg = a.relations;
      cert.order = cands[i];
      cert.per_constraint = justify(p, a, cands[i]);
      cert.search_trace = v.candidates_tried;
      v.kind = Verdict::Kind::Terminating;
      v.certificate = std::move(cert);
      return v;
    }
    if (failures.size() < 3 && (failures.empty() || cands[i].kind != cands[i - 1].kind))
      failures.push_back(cands[i].describe() + ": " + *fail);
  }
  std::ostringstream os;
  os << "no order among " << cands.size() << " candidates satisfies every constraint";
  if (cands.size() >= opt.budget) os << " (BudgetExceeded)";
  for (const auto& f : failures) os << "\n  " << f;
  v.reason = os.str();
  return v;
}

// ---------------------------------------------------------------------------
// End to end

struct AnalyzeOptions {
  Mode mode = Mode::Rigid;
  SolveOptions solve;
};

/// Builds the analysis for `p` from its directives.
inline Analysis prepare(const Program& p, Mode mode) {
  Analysis a;
  if (mode == Mode::Rigid) {
    auto pats = query_patterns(p);
    if (pats.empty()) throw InputError("no '%% query:' directive");
    CallSet cs = infer_call_set(p, pats);
    a = prepare_rigid(p, cs, rigidity_requirements(cs, p));
  } else {
    auto modes = mode_map(p);
    if (modes.empty()) throw InputError("no '%% mode:' directive");
    a = prepare_wellmoded(p, modes);
  }
  reduce_all(p, a);
  return a;
}

inline Verdict analyze(const Program& p, const AnalyzeOptions& opt = {}) {
  Analysis a = prepare(p, opt.mode);
  return solve(p, a, opt.solve);
}

}  // namespace termlog
