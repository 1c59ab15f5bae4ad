#pragma once
// Matching constraints and demands up to variable renaming.

#include "support.hpp"

namespace termlog::testing {

/// `t` written in an expected constraint stands for an ignored position.
inline Term wild(const Term& t) {
  if (t.is_var()) return t;
  if (t.is_constant() && t.symbol().name == "t") return wildcard_term();
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(wild(a));
  return Term::app(t.symbol(), std::move(args));
}

/// conditions..., head, body as one term so variance covers shared variables.
inline Term as_term(const DecreaseConstraint& c) {
  std::vector<Term> parts;
  for (const auto& a : c.conditions) parts.push_back(a.term());
  parts.push_back(c.head.term());
  parts.push_back(c.body.term());
  return Term::app({"c", parts.size()}, parts);
}

/// "cond1, cond2 => head > body" with t for wildcards.
inline Term expected(const std::string& text) {
  std::string conds, rest = text;
  if (auto k = text.find("=>"); k != std::string::npos) {
    conds = text.substr(0, k);
    rest = text.substr(k + 2);
  }
  auto gt = rest.find(" > ");
  std::string goal = conds.empty() ? "" : conds + ", ";
  goal += rest.substr(0, gt) + ", " + rest.substr(gt + 3);
  auto atoms = parse_goal(goal);
  std::vector<Term> parts;
  for (const auto& a : atoms) parts.push_back(wild(a.term()));
  return Term::app({"c", parts.size()}, parts);
}

inline bool contains_variant(const std::vector<DecreaseConstraint>& cs, const std::string& text) {
  Term want = expected(text);
  return std::any_of(cs.begin(), cs.end(), [&](const DecreaseConstraint& c) { return variant_eq(as_term(c), want); });
}

/// Demand text with variables canonically renamed.
inline bool has_decrease(const std::vector<Demand>& ds, const std::string& premises, const std::string& lhs, const std::string& rhs) {
  std::string goal = "k(" + lhs + ", " + rhs + ")";
  if (!premises.empty()) goal = "prem(" + premises + "), " + goal;
  auto want = parse_goal(goal);
  for (const auto& d : ds) {
    if (d.kind != Demand::Kind::GroundDecrease && d.kind != Demand::Kind::ConditionalDecrease) continue;
    std::vector<Term> prem;
    for (const auto& p : d.premises) prem.push_back(Term::app({"gt", 2}, {p.lhs, p.rhs}));
    std::vector<Term> have_parts, want_parts;
    if (!d.premises.empty()) have_parts.push_back(Term::app({"prem", prem.size()}, prem));
    have_parts.push_back(Term::app({"k", 2}, {d.lhs, d.rhs}));
    for (const auto& a : want) want_parts.push_back(a.term());
    if (have_parts.size() != want_parts.size()) continue;
    if (variant_eq(Term::app({"w", have_parts.size()}, have_parts), Term::app({"w", want_parts.size()}, want_parts)))
      return true;
  }
  return false;
}

}  // namespace termlog::testing
