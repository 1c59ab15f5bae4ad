#include <gtest/gtest.h>

#include "matchers.hpp"

using namespace termlog;
using termlog::testing::A;
using termlog::testing::load;
using termlog::testing::T;
using termlog::testing::contains_variant;
using termlog::testing::has_decrease;

namespace {

std::string dump(const std::vector<DecreaseConstraint>& cs) {
  std::string s;
  for (const auto& c : cs) s += "\n  " + c.str();
  return s;
}

std::vector<DecreaseConstraint> rigid_constraints(const Program& p) {
  auto cs = infer_call_set(p, query_patterns(p));
  return generate_constraints(p, cs, rigidity_requirements(cs, p));
}

bool has_demand(const std::vector<Demand>& ds, const Demand& d) { return std::find(ds.begin(), ds.end(), d) != ds.end(); }

std::string dump(const std::vector<Demand>& ds) {
  std::string s;
  for (const auto& d : ds) s += "\n  " + d.str();
  return s;
}

}  // namespace

TEST(Constraints, Permute) {
  auto cs = rigid_constraints(load("permute.pl"));
  ASSERT_EQ(cs.size(), 2u) << dump(cs);
  EXPECT_TRUE(contains_variant(cs, "delete(t,[H|T],t) > delete(t,T,t)")) << dump(cs);
  EXPECT_TRUE(contains_variant(cs, "delete(El,L,L1) => permute(L,t) > permute(L1,t)")) << dump(cs);
}

TEST(Constraints, Derivative) {
  auto cs = rigid_constraints(load("derivative.pl"));
  ASSERT_EQ(cs.size(), 6u) << dump(cs);
  for (const char* c : {"d(der(X+Y),t) > d(der(X),t)", "d(der(X),DX) => d(der(X+Y),t) > d(der(Y),t)",
                        "d(der(X*Y),t) > d(der(X),t)", "d(der(X),DX) => d(der(X*Y),t) > d(der(Y),t)",
                        "d(der(der(X)),t) > d(der(X),t)", "d(der(X),DX) => d(der(der(X)),t) > d(der(DX),t)"})
    EXPECT_TRUE(contains_variant(cs, c)) << c << dump(cs);
}

TEST(Constraints, NonRecursive) {
  auto p = parse_program("%% query: p(ground).\np(X) :- q(X).\nq(a).");
  EXPECT_TRUE(rigid_constraints(p).empty());
}

TEST(Constraints, OnlyMutuallyRecursiveBodyAtoms) {
  for (const char* f : {"permute.pl", "discon.pl", "quicksort.pl", "flatten.pl", "reverse.pl", "addmult.pl"}) {
    auto p = load(f);
    DepGraph g(p);
    for (const auto& c : rigid_constraints(p)) EXPECT_TRUE(g.mutual(c.head.pred(), c.body.pred())) << f << ' ' << c.str();
  }
}

TEST(Constraints, WildcardsAreExactlyTheIgnoredPositions) {
  for (const char* f : {"permute.pl", "derivative.pl", "discon.pl", "quicksort.pl", "addmult.pl"}) {
    auto p = load(f);
    auto cs = infer_call_set(p, query_patterns(p));
    auto rr = rigidity_requirements(cs, p);
    for (const auto& c : generate_constraints(p, cs, rr))
      for (const Atom* a : {&c.head, &c.body})
        for (std::size_t i = 0; i < a->arity(); ++i)
          EXPECT_EQ(a->arg(i) == wildcard_term(), rr.ignores(a->pred(), i + 1)) << f << ' ' << c.str();
  }
}

TEST(Constraints, UnreachableClauseWarns) {
  auto q = parse_program("%% query: p(nillist_ground).\np([]).\np([X|T]) :- p(T).\np(f(X)) :- p(X).");
  auto cq = infer_call_set(q, query_patterns(q));
  std::vector<std::string> w;
  auto cons = generate_constraints(q, cq, rigidity_requirements(cq, q), &w);
  EXPECT_EQ(cons.size(), 1u);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_NE(w[0].find("UnreachableClause"), std::string::npos);
}

TEST(Reduce, DeleteOption1) {
  auto cs = rigid_constraints(load("permute.pl"));
  auto out = reduce_constraint(cs[0]);
  EXPECT_EQ(out.kind, ReductionOutcome::Kind::Demands);
  EXPECT_EQ(out.route, "option1");
  EXPECT_TRUE(has_demand(out.demands, Demand::subterm_at(kCons, 2))) << dump(out.demands);
  EXPECT_TRUE(has_demand(out.demands, Demand::monotone_at({"delete", 3}, 2))) << dump(out.demands);
}

TEST(Reduce, PermuteOption2) {
  auto cs = rigid_constraints(load("permute.pl"));
  auto out = reduce_constraint(cs[1]);
  EXPECT_EQ(out.kind, ReductionOutcome::Kind::Obligation);
  EXPECT_EQ(out.route, "option2");
  ASSERT_EQ(out.obligations.size(), 1u);
  EXPECT_EQ(out.obligations[0].required, InterargRelation::single_gt({"delete", 3}, 2, 3));
}

TEST(Reduce, IdenticalAfterWildcarding) {
  DecreaseConstraint c;
  c.head = wildcard(A("p(X, Y)"), PositionFamily{{Symbol{"p", 2}, {2}}});
  c.body = wildcard(A("p(X, Z)"), PositionFamily{{Symbol{"p", 2}, {2}}});
  EXPECT_EQ(reduce_constraint(c).kind, ReductionOutcome::Kind::Unreducible);
}

TEST(Discharge, Delete) {
  auto p = load("permute.pl");
  auto r = discharge_obligation(p, InterargRelation::single_gt({"delete", 3}, 2, 3));
  EXPECT_TRUE(r.ok);
  ASSERT_EQ(r.demands.size(), 2u) << dump(r.demands);
  EXPECT_TRUE(has_decrease(r.demands, "", "[X|T]", "T")) << dump(r.demands);
  EXPECT_TRUE(has_decrease(r.demands, "gt(T, T1)", "[H|T]", "[H|T1]")) << dump(r.demands);
}

TEST(Discharge, Derivative) {
  auto p = load("derivative.pl");
  auto r = discharge_obligation(p, InterargRelation::single_gt({"d", 2}, 1, 2));
  EXPECT_TRUE(r.ok);
  ASSERT_EQ(r.demands.size(), 5u) << dump(r.demands);
  EXPECT_TRUE(has_decrease(r.demands, "", "der(u)", "1")) << dump(r.demands);
  EXPECT_TRUE(has_decrease(r.demands, "", "der(A)", "0")) << dump(r.demands);
  EXPECT_TRUE(has_decrease(r.demands, "gt(der(X), DX), gt(der(Y), DY)", "der(X+Y)", "DX+DY")) << dump(r.demands);
  EXPECT_TRUE(has_decrease(r.demands, "gt(der(X), DX), gt(der(Y), DY)", "der(X*Y)", "X*DY+Y*DX")) << dump(r.demands);
  EXPECT_TRUE(has_decrease(r.demands, "gt(der(X), DX), gt(der(DX), DDX)", "der(der(X))", "DDX")) << dump(r.demands);
}

TEST(Discharge, NoClauses) {
  auto p = parse_program("q(a).");
  auto r = discharge_obligation(p, InterargRelation::single_gt({"p", 2}, 1, 2));
  EXPECT_TRUE(r.ok);
  EXPECT_TRUE(r.demands.empty());
}

TEST(Unfold, WellModedPermute) {
  auto p = load("perm_wellmoded.pl");
  auto atoms = parse_goal("ap2(V,[H|U],L), ap1(V,U,W)");
  auto g = unfold_conjunction(p, atoms);
  ASSERT_EQ(g.size(), 2u);
  auto flat = [](const GeneralizedClause& c) {
    std::vector<Term> h, b;
    for (const auto& a : c.head) h.push_back(a.term());
    for (const auto& a : c.body) b.push_back(a.term());
    return Term::app({"g", 2}, {Term::app({"h", h.size()}, h), Term::app({"b", b.size()}, b)});
  };
  auto want = [](const std::string& head, const std::string& body) {
    auto hs = parse_goal(body.empty() ? head : head + ", " + body);
    std::vector<Term> h, b;
    for (std::size_t i = 0; i < hs.size(); ++i) (i < 2 ? h : b).push_back(hs[i].term());
    return Term::app({"g", 2}, {Term::app({"h", h.size()}, h), Term::app({"b", b.size()}, b)});
  };
  EXPECT_TRUE(variant_eq(flat(g[0]), want("ap2([],[T1|T2],[T1|T2]), ap1([],T2,T2)", ""))) << g[0];
  EXPECT_TRUE(variant_eq(flat(g[1]), want("ap2([T6|T1],[T5|T2],[T6|T3]), ap1([T6|T1],T2,[T6|T4])",
                                          "ap2(T1,[T5|T2],T3), ap1(T1,T2,T4)")))
      << g[1];
}

TEST(Unfold, SingleAtom) {
  auto p = load("permute.pl");
  auto g = unfold_conjunction(p, parse_goal("delete(X, [a,b], T)"));
  ASSERT_EQ(g.size(), 2u);
  EXPECT_TRUE(g[0].body.empty());
  EXPECT_EQ(g[1].body.size(), 1u);
}

TEST(Unfold, NoMatch) {
  auto p = load("permute.pl");
  EXPECT_TRUE(unfold_conjunction(p, parse_goal("delete(X, [], T)")).empty());
}

TEST(Unfold, PreservesLeastModelOnConjunction) {
  // ground instances of ap2(V,[H|U],L), ap1(V,U,W) derivable in P equal those derivable from P'
  auto p = load("perm_wellmoded.pl");
  auto model = ground_model(p, 5);
  auto atoms = parse_goal("ap2(V,[H|U],L), ap1(V,U,W)");
  std::set<std::pair<Atom, Atom>> in_p;
  for (const auto& a : model[{"ap2", 3}])
    for (const auto& b : model[{"ap1", 3}]) {
      Substitution s;
      if (match_into(atoms[0].term(), a.term(), s) && match_into(atoms[1].term(), b.term(), s)) in_p.insert({a, b});
    }
  // bottom-up over P': a pair is derived when a generalized clause head matches it and its body pair is derived
  auto gen = unfold_conjunction(p, atoms);
  std::set<std::pair<Atom, Atom>> in_q;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& [a, b] : in_p) {
      if (in_q.count({a, b})) continue;
      for (const auto& g : gen) {
        Substitution s;
        if (!match_into(g.head[0].term(), a.term(), s) || !match_into(g.head[1].term(), b.term(), s)) continue;
        if (!g.body.empty() && !in_q.count({apply_subst(g.body[0], s), apply_subst(g.body[1], s)})) continue;
        in_q.insert({a, b});
        changed = true;
        break;
      }
    }
  }
  EXPECT_FALSE(in_p.empty());
  EXPECT_EQ(in_p, in_q);
}

TEST(WellModed, Counterexample) {
  auto p = parse_program("p(a) :- q(X).\nq(f(X)) :- q(X).");
  ModeMap m{{{"p", 1}, {false}}, {{"q", 1}, {false}}};
  EXPECT_FALSE(wellmoded_check(p, m));
  EXPECT_THROW(generate_wellmoded_constraints(p, m), NotWellModed);
}

TEST(WellModed, Permute) {
  auto p = load("permute.pl");
  ModeMap m{{{"permute", 2}, {false, true}}, {{"delete", 3}, {true, false, true}}};
  EXPECT_TRUE(wellmoded_check(p, m));
}

TEST(WellModed, GroundFacts) {
  auto p = parse_program("p(a, b).\np(b, c).");
  ModeMap m{{{"p", 2}, {false, false}}};
  EXPECT_TRUE(wellmoded_check(p, m));
  EXPECT_TRUE(generate_wellmoded_constraints(p, m).empty());
}

TEST(WellModed, PermuteConstraints) {
  auto p = load("perm_wellmoded.pl");
  auto cs = generate_wellmoded_constraints(p, mode_map(p));
  EXPECT_TRUE(contains_variant(cs, "ap2(V,[H|U],L), ap1(V,U,W) => perm(L,t) > perm(W,t)")) << dump(cs);
}

TEST(WellModed, SelfRecursion) {
  auto p = parse_program("q(f(X)) :- q(X).");
  ModeMap m{{{"q", 1}, {false}}};
  auto cs = generate_wellmoded_constraints(p, m);
  ASSERT_EQ(cs.size(), 1u);
  EXPECT_TRUE(contains_variant(cs, "q(f(X)) > q(X)"));
  EXPECT_TRUE(cs[0].conditions.empty());
}
