#pragma once

// Concrete cross-checks of analysis results: sampled LD runs for
// Terminating verdicts and brute-force validity of interargument relations.

#include <random>
#include <string>
#include <vector>

#include "termlog/callset.hpp"
#include "termlog/interpreter.hpp"
#include "termlog/solver.hpp"

namespace termlog {

struct OracleReport {
  std::size_t runs = 0;
  std::size_t finite = 0;
  std::vector<std::string> failures;

  bool ok() const noexcept { return failures.empty(); }
};

/// Runs `n` random queries drawn from the `%% query:` patterns of `p`.
inline OracleReport termination_oracle(const Program& p, std::size_t n = 20, std::size_t depth = 500,
                                       std::size_t max_size = 6, unsigned seed = 20240601) {
  OracleReport r;
  auto pats = query_patterns(p);
  if (pats.empty()) return r;
  std::mt19937 rng(seed);
  auto sig = functors(p);
  if (std::find(sig.begin(), sig.end(), kNil) == sig.end()) sig.push_back(kNil);
  for (std::size_t i = 0; i < n; ++i) {
    VarId next = 0;
    Atom q = concretize(pats[i % pats.size()], sig, max_size, rng, next);
    ExploreOptions opt;
    opt.keep_answers = 0;
    auto out = ld_explore(p, {q}, depth, opt);
    ++r.runs;
    if (out.kind == ExplorationOutcome::Kind::FiniteTree)
      ++r.finite;
    else
      r.failures.push_back(to_string(q) + ": " + to_string(out.kind));
  }
  return r;
}

inline bool holds_ground(const OrderSpec& o, const OrderAtom& a) {
  Comparison c = compare(o, a.lhs, a.rhs);
  switch (a.rel) {
    case OrderAtom::Rel::Gt: return c == Comparison::Greater;
    case OrderAtom::Rel::Eq: return c == Comparison::EqualUnderOrder;
    case OrderAtom::Rel::Inc: return c == Comparison::Incomparable;
  }
  return false;
}

inline bool relation_holds(const OrderSpec& o, const InterargRelation& r, std::span<const Atom> window) {
  for (const auto& conj : r.instantiate(window))
    if (std::all_of(conj.begin(), conj.end(), [&](const OrderAtom& a) { return holds_ground(o, a); })) return true;
  return false;
}

/// Every sampled ground consequence (or conjunction of consequences matching
/// the relation's shape) satisfies the relation under the certificate's order.
inline OracleReport relation_oracle(const Program& p, const ProofCertificate& cert, std::size_t max_size = 4) {
  OracleReport r;
  auto model = ground_model(p, max_size);
  for (const auto& rel : cert.interarg) {
    std::vector<Atom> window;
    auto rec = [&](auto&& self, std::size_t k) -> void {
      if (k == rel.shape.size()) {
        if (!rel.applies_to(window)) return;
        ++r.runs;
        if (relation_holds(cert.order, rel, window)) {
          ++r.finite;
        } else if (r.failures.size() < 20) {
          std::string w;
          for (const auto& a : window) w += (w.empty() ? "" : ", ") + to_string(a);
          r.failures.push_back(rel.str() + " violated by " + w);
        }
        return;
      }
      auto it = model.find(rel.shape[k].pred());
      if (it == model.end()) return;
      for (const auto& f : it->second) {
        window.push_back(f);
        self(self, k + 1);
        window.pop_back();
      }
    };
    rec(rec, 0);
  }
  return r;
}

}  // namespace termlog
