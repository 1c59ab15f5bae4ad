#pragma once
// Order property suites shared by the unit tests and the acceptance binary.

#include <random>
#include <sstream>

#include "support.hpp"

namespace termlog::testing {

inline const Symbol kS{"s", 1}, kG{"g", 2}, kA{"a", 0};

struct Tally {
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::string first;

  void fail(const std::string& what) {
    if (violations++ == 0) first = what;
  }
  bool ok(std::size_t min_checked = 1) const { return violations == 0 && checked >= min_checked; }
  std::string str() const {
    std::ostringstream os;
    os << checked << " checked, " << violations << " violations";
    if (!first.empty()) os << " (first: " << first << ")";
    return os.str();
  }
};

/// The concrete orders every property suite runs against.
inline std::vector<std::pair<std::string, OrderSpec>> shipped_orders() {
  PositionFamily g_first;
  g_first.insert(kG, 1);
  PositionFamily cons_head;
  cons_head.insert(kCons, 1);
  std::vector<Symbol> rank{kG, kCons, kS, kA};
  return {
      {"rpo", OrderSpec::rpo(Precedence::from_ranking(rank))},
      {"rpo-rev", OrderSpec::rpo(Precedence::from_ranking(std::vector<Symbol>{kA, kS, kCons, kG}))},
      {"rpo-filter", OrderSpec::rpo(Precedence::from_ranking(rank), g_first)},
      {"rpo-mul", OrderSpec::rpo(Precedence::from_ranking(rank), {}, {{kG, Status::Multiset}})},
      {"listlen", OrderSpec::norm_based(NormDef::list_length())},
      {"listlen-filter", OrderSpec::norm_based(NormDef::list_length(), cons_head)},
      {"termsize", OrderSpec::norm_based(NormDef::term_size())},
  };
}

inline const std::vector<Term>& pool() {
  static const auto p = enumerate_terms(small_signature(), 5, 3);
  return p;
}

inline const std::vector<Term>& ground_pool() {
  static const auto p = ground_only(enumerate_terms(small_signature(), 5, 0));
  return p;
}

namespace detail {

inline std::vector<PathVector> paths_where(const Term& s, const PositionFamily& fam, int value) {
  std::vector<PathVector> out;
  for (const auto& v : subterm_paths(s))
    if (char_fn(s, v, fam) == value) out.push_back(v);
  return out;
}

inline bool is_prefix(const PathVector& a, const PathVector& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

inline std::string show(const Term& a, const std::string& rel, const Term& b) {
  std::ostringstream os;
  os << a << ' ' << rel << ' ' << b;
  return os.str();
}

}  // namespace detail

/// Below a zero of χ every extension is zero.
inline Tally prefix_zero() {
  std::vector<PositionFamily> fams(1);
  PositionFamily f1;
  f1.insert(kCons, 2);
  f1.insert(kG, 1);
  fams.push_back(f1);
  PositionFamily f2;
  f2.insert(kS, 1);
  f2.insert(kCons, 1);
  f2.insert(kG, 2);
  fams.push_back(f2);
  fams.push_back(PositionFamily::all(small_signature()));
  Tally t;
  for (const auto& fam : fams)
    for (const auto& s : pool())
      for (const auto& v : detail::paths_where(s, fam, 0))
        for (const auto& w : subterm_paths(s))
          if (detail::is_prefix(v, w)) {
            ++t.checked;
            if (char_fn(s, w, fam) != 0) t.fail(to_string(s));
          }
  return t;
}

/// Replacing a χ_M = 1 occurrence by a larger ground term gives a larger term.
inline Tally monotonicity(const OrderSpec& o) {
  const auto& ground = ground_pool();
  std::mt19937 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, ground.size() - 1);
  std::vector<std::pair<Term, Term>> gt;
  for (int tries = 0; gt.size() < 40 && tries < 100000; ++tries) {
    Term a = ground[pick(rng)], b = ground[pick(rng)];
    if (compare(o, a, b) == Comparison::Greater) gt.emplace_back(a, b);
  }
  auto fams = defined_families(o, small_signature());
  Tally t;
  for (std::size_t k = 0; k < pool().size(); k += 3) {
    const Term& s = pool()[k];
    for (const auto& [path, var] : var_occurrences(s)) {
      if (char_fn(s, path, fams.monotone) != 1) continue;
      for (std::size_t j = 0; j < gt.size(); j += 4) {
        ++t.checked;
        Term l = replace_at(s, path, gt[j].first), r = replace_at(s, path, gt[j].second);
        if (compare(o, l, r) != Comparison::Greater) t.fail(detail::show(l, "not >", r));
      }
    }
  }
  return t;
}

/// A term is above every proper subterm at a χ_S = 1 path.
inline Tally subterm_property(const OrderSpec& o) {
  auto fams = defined_families(o, small_signature());
  Tally t;
  for (const auto& s : pool())
    for (const auto& v : subterm_paths(s)) {
      if (v.empty() || char_fn(s, v, fams.subterm) != 1) continue;
      ++t.checked;
      Term sub = *subterm_at(s, v);
      if (compare(o, s, sub) != Comparison::Greater) t.fail(detail::show(s, "not >", sub));
    }
  return t;
}

/// Variables found by the S- and M-sets occur at relevant positions.
inline Tally sets_within_vrel(const OrderSpec& o) {
  auto fams = defined_families(o, small_signature());
  auto abs = OrderSpec::property_abstract({}, {}, fams.monotone, fams.subterm);
  Tally t;
  for (std::size_t k = 0; k < pool().size(); k += 2) {
    const Term& s = pool()[k];
    auto rel = vrel(o, s).occurrences;
    auto in_vrel = [&](const PathVector& p) { return std::find(rel.begin(), rel.end(), p) != rel.end(); };
    auto svars = s_set(abs, s), mvars = m_set(abs, s);
    for (const auto& [path, var] : var_occurrences(s)) {
      if (svars.count(var.var_id())) {
        ++t.checked;
        if (!in_vrel(path)) t.fail("S: " + to_string(s));
      }
      if (mvars.count(var.var_id())) {
        ++t.checked;
        if (!in_vrel(path)) t.fail("M: " + to_string(s));
      }
    }
  }
  return t;
}

/// With M and S everywhere, rigid means ground.
inline Tally full_rigidity_is_groundness() {
  auto all = PositionFamily::all(small_signature());
  auto o = OrderSpec::property_abstract({}, {}, all, all);
  Tally t;
  for (const auto& s : pool()) {
    ++t.checked;
    if (is_rigid(o, s) != s.is_ground()) t.fail(to_string(s));
  }
  return t;
}

/// tree(a,X,X) is rigid under the balance norm yet both X occurrences are relevant.
inline Tally balance_norm() {
  Symbol tree{"tree", 3};
  auto bal = [&](const Term& t) -> int {
    if (t.is_var() || t.symbol() != tree || t.arg(0) != Term::constant("a")) return 0;
    return t.arg(1) == t.arg(2) ? 0 : 1;
  };
  Term s = parse_term("tree(a, X, X)");
  Tally t;
  for (const auto& g : pool()) {
    ++t.checked;
    Substitution th{{s.arg(1).var_id(), g}};
    if (bal(apply_subst(s, th)) != bal(s)) t.fail("instance " + to_string(g));
  }
  auto rel = vrel_bruteforce(s, pool(), [&](const Term& a, const Term& b) { return bal(a) == bal(b); });
  ++t.checked;
  if (rel != std::vector<PathVector>{{2}, {3}}) t.fail("vrel of tree(a,X,X)");
  return t;
}

/// Irreflexive, asymmetric and transitive on sampled triples.
inline Tally strict_part_sane(const OrderSpec& o) {
  static const auto small = enumerate_terms(small_signature(), 5, 2);
  std::mt19937 rng(5);
  std::uniform_int_distribution<std::size_t> pick(0, small.size() - 1);
  Tally t;
  for (const auto& x : small) {
    ++t.checked;
    if (compare(o, x, x) == Comparison::Greater) t.fail(detail::show(x, ">", x));
  }
  for (int k = 0; k < 20000; ++k) {
    const Term &a = small[pick(rng)], &b = small[pick(rng)], &c = small[pick(rng)];
    auto ab = compare(o, a, b), bc = compare(o, b, c), ba = compare(o, b, a);
    ++t.checked;
    if (ab == Comparison::Greater && ba != Comparison::Less) t.fail(detail::show(a, "> but not reversed <", b));
    if (ab == Comparison::Greater && bc == Comparison::Greater && compare(o, a, c) != Comparison::Greater)
      t.fail(detail::show(a, "not > (transitivity via " + to_string(b) + ")", c));
  }
  return t;
}

/// The Greater graph on all terms of size ≤ 6 (at most one variable) has no cycle.
inline Tally acyclic_up_to_six(const OrderSpec& o) {
  static const auto terms = enumerate_terms(small_signature(), 6, 1);
  std::size_t n = terms.size();
  std::vector<std::vector<std::size_t>> succ(n);
  std::vector<std::size_t> indeg(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && compare(o, terms[i], terms[j]) == Comparison::Greater) {
        succ[i].push_back(j);
        ++indeg[j];
      }
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.push_back(i);
  std::size_t seen = 0;
  while (!ready.empty()) {
    auto i = ready.back();
    ready.pop_back();
    ++seen;
    for (auto j : succ[i])
      if (--indeg[j] == 0) ready.push_back(j);
  }
  Tally t;
  t.checked = n;
  if (seen != n) t.fail(std::to_string(n - seen) + " terms on a cycle");
  return t;
}

}  // namespace termlog::testing
