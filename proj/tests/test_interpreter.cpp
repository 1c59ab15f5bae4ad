#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace termlog;
using termlog::testing::A;
using termlog::testing::load;

TEST(Explore, PermuteTwoAnswers) {
  auto p = load("permute.pl");
  auto out = ld_explore(p, parse_goal("permute([a,b], X)"), 50);
  EXPECT_EQ(out.kind, ExplorationOutcome::Kind::FiniteTree);
  EXPECT_EQ(out.answers, 2u);
  ASSERT_EQ(out.answer_instances.size(), 2u);
  std::set<std::string> got;
  for (const auto& inst : out.answer_instances) got.insert(to_string(inst[0]));
  EXPECT_EQ(got, (std::set<std::string>{"permute([a,b],[a,b])", "permute([a,b],[b,a])"}));
}

TEST(Explore, SelfLoop) {
  auto p = parse_program("p :- p.");
  auto out = ld_explore(p, parse_goal("p"), 30);
  EXPECT_NE(out.kind, ExplorationOutcome::Kind::FiniteTree);
  ExploreOptions no_loops;
  no_loops.detect_loops = false;
  auto plain = ld_explore(p, parse_goal("p"), 30, no_loops);
  EXPECT_EQ(plain.kind, ExplorationOutcome::Kind::DepthLimitHit);
  EXPECT_EQ(plain.witness.size(), 30u);
}

TEST(Explore, LoopEvidenceIsHeuristic) {
  auto p = load("loop.pl");
  auto out = ld_explore(p, parse_goal("p(a)"), 100);
  EXPECT_NE(out.kind, ExplorationOutcome::Kind::FiniteTree);
  if (out.kind == ExplorationOutcome::Kind::LoopEvidence) {
    EXPECT_TRUE(out.heuristic);
    EXPECT_FALSE(out.loop.empty());
  }
}

TEST(Explore, NoMatchingClause) {
  auto p = parse_program("p(a).\nq(X) :- p(b).");
  auto out = ld_explore(p, parse_goal("q(Y)"), 10);
  EXPECT_EQ(out.kind, ExplorationOutcome::Kind::FiniteTree);
  EXPECT_EQ(out.answers, 0u);
}

TEST(Explore, LeftmostSelection) {
  auto p = parse_program("p :- q, r.\nq.\nr.");
  std::vector<DerivationNode> trace;
  ExploreOptions opt;
  opt.trace = &trace;
  auto out = ld_explore(p, parse_goal("p"), 10, opt);
  EXPECT_EQ(out.answers, 1u);
  ASSERT_EQ(trace.size(), 3u);
  EXPECT_EQ(to_string(trace[0].selected), "p");
  EXPECT_EQ(to_string(trace[1].selected), "q");
  EXPECT_EQ(to_string(trace[2].selected), "r");
}

TEST(Explore, NumberBuiltin) {
  auto p = load("derivative.pl");
  auto out = ld_explore(p, parse_goal("d(der(der(u)), X)"), 100);
  EXPECT_EQ(out.kind, ExplorationOutcome::Kind::FiniteTree);
  EXPECT_GE(out.answers, 1u);
  EXPECT_TRUE(is_builtin(p, {"number", 1}));
  EXPECT_FALSE(is_builtin(p, {"d", 2}));
}

TEST(Explore, NodeBudget) {
  auto p = parse_program("p :- p.\np :- p.");
  ExploreOptions opt;
  opt.max_nodes = 100;
  opt.detect_loops = false;
  auto out = ld_explore(p, parse_goal("p"), 1000, opt);
  EXPECT_TRUE(out.budget_exhausted);
  EXPECT_NE(out.kind, ExplorationOutcome::Kind::FiniteTree);
}

TEST(Directed, Delete) {
  auto p = load("permute.pl");
  std::vector<std::vector<DerivationNode>> branches;
  ExploreOptions opt;
  opt.branches = &branches;
  ld_explore(p, parse_goal("delete(X, [a,b], T)"), 20, opt);
  ASSERT_FALSE(branches.empty());
  std::size_t longest = 0;
  for (const auto& b : branches) {
    for (const auto& chain : directed_subsequences(b)) {
      longest = std::max(longest, chain.size());
      for (std::size_t k = 1; k < chain.size(); ++k) EXPECT_EQ(b[chain[k]].origin, static_cast<std::ptrdiff_t>(chain[k - 1]));
    }
  }
  // delete(X,[a,b],T) -> delete(X,[b],T1) -> delete(X,[],T2)
  EXPECT_EQ(longest, 3u);
}

// A branch reaching depth d with bodies of length at most b holds a directed chain of length >= log_b(d).
TEST(Directed, LongBranchHasLongChain) {
  for (auto [src, query] : {std::pair{"p :- p.", "p"}, {"p(X) :- q(X), p(f(X)).\nq(X).", "p(a)"},
                            {"p :- q, p.\np :- p, q.\nq.", "p"}}) {
    auto p = parse_program(src);
    std::size_t b = 1;
    for (const auto& c : p.clauses) b = std::max(b, c.body.size());
    std::vector<std::vector<DerivationNode>> branches;
    ExploreOptions opt;
    opt.branches = &branches;
    opt.detect_loops = false;
    opt.max_nodes = 20000;
    auto out = ld_explore(p, parse_goal(query), 40, opt);
    ASSERT_NE(out.kind, ExplorationOutcome::Kind::FiniteTree) << src;
    for (const auto& br : branches) {
      if (br.size() < 40) continue;
      std::size_t longest = 0;
      for (const auto& chain : directed_subsequences(br)) longest = std::max(longest, chain.size());
      double bound = b == 1 ? 40.0 : std::log(40.0) / std::log(static_cast<double>(b));
      EXPECT_GE(static_cast<double>(longest), std::floor(bound)) << src;
    }
  }
}

TEST(GroundModel, DeleteConsequence) {
  auto p = load("permute.pl");
  auto del = ground_consequences(p, {"delete", 3}, 5);
  EXPECT_TRUE(del.count(A("delete(a, [a,b], [b])")) == 0);  // a and b are not in the program's signature
  auto q = parse_program("delete(X, [X|T], T).\ndelete(X, [H|T], [H|T1]) :- delete(X, T, T1).\nsym(a).\nsym(b).\nsym([]).");
  auto dq = ground_consequences(q, {"delete", 3}, 5);
  EXPECT_TRUE(dq.count(A("delete(a, [a,b], [b])")));
  EXPECT_TRUE(dq.count(A("delete(b, [a,b], [a])")));
  EXPECT_FALSE(dq.count(A("delete(a, [b], [])")));
}

TEST(GroundModel, Trivial) {
  EXPECT_TRUE(ground_consequences(parse_program("q(a)."), {"p", 1}, 3).empty());
  auto m = ground_consequences(parse_program("p(a)."), {"p", 1}, 3);
  EXPECT_EQ(m, (std::set<Atom>{A("p(a)")}));
}

TEST(GroundModel, IsFixpoint) {
  for (const char* f : {"permute.pl", "oddeven.pl", "reverse.pl", "transitive.pl"}) {
    auto p = load(f);
    auto model = ground_model(p, 4);
    std::set<Atom> all;
    for (const auto& [s, as] : model) all.insert(as.begin(), as.end());
    // every ground instance of a clause with body in the model and head within bounds has its head in the model
    auto pool = herbrand_sample(p, 4, {"c_fresh"});
    for (const auto& c : p.clauses) {
      auto vars = var_ids(c);
      if (vars.size() > 3) continue;
      std::vector<VarId> vs(vars.begin(), vars.end());
      std::vector<std::size_t> idx(vs.size(), 0);
      for (;;) {
        Substitution s;
        for (std::size_t i = 0; i < vs.size(); ++i) s.bind(vs[i], pool[idx[i]]);
        Atom h = apply_subst(c.head, s);
        bool body_in = true;
        for (const auto& b : c.body) body_in = body_in && (is_builtin(p, b.pred()) || all.count(apply_subst(b, s)));
        if (body_in && detail::within(h, 4)) EXPECT_TRUE(all.count(h)) << f << ' ' << h;
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == pool.size()) idx[k++] = 0;
        if (k == idx.size()) break;
      }
    }
  }
}

TEST(Oracle, TerminatingCorpusAgrees) {
  for (const char* f : {"permute.pl", "derivative.pl", "reverse.pl", "oddeven.pl"}) {
    auto p = load(f);
    auto rep = termination_oracle(p);
    EXPECT_TRUE(rep.ok()) << f << ": " << (rep.failures.empty() ? "" : rep.failures[0]);
    EXPECT_EQ(rep.runs, 20u);
  }
}

TEST(Oracle, DetectsLoop) {
  auto p = parse_program("%% query: p(ground).\np(X) :- p(X).\np(a).");
  auto rep = termination_oracle(p);
  EXPECT_FALSE(rep.ok());
}
