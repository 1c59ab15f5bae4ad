#pragma once

// Term orderings: characteristic functions over position families, the
// recursive path ordering, norm-based orderings, and the rigidity / VREL
// machinery built on top of them.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "termlog/error.hpp"
#include "termlog/term.hpp"

namespace termlog {

using PositionSet = std::set<std::size_t>;

/// Symbol -> subset of {1..arity}. Absent symbols map to the empty set.
class PositionFamily {
 public:
  PositionFamily() = default;
  PositionFamily(std::initializer_list<std::pair<const Symbol, PositionSet>> init) : map_(init) {}

  bool contains(const Symbol& s, std::size_t pos) const {
    auto it = map_.find(s);
    return it != map_.end() && it->second.count(pos);
  }
  const PositionSet& at(const Symbol& s) const {
    static const PositionSet empty;
    auto it = map_.find(s);
    return it == map_.end() ? empty : it->second;
  }
  void insert(const Symbol& s, std::size_t pos) { map_[s].insert(pos); }
  void erase(const Symbol& s, std::size_t pos) {
    auto it = map_.find(s);
    if (it == map_.end()) return;
    it->second.erase(pos);
    if (it->second.empty()) map_.erase(it);
  }
  void merge(const PositionFamily& o) {
    for (const auto& [s, ps] : o.map_)
      for (auto p : ps) insert(s, p);
  }
  bool empty() const noexcept { return map_.empty(); }
  const std::map<Symbol, PositionSet>& entries() const noexcept { return map_; }

  /// Every position of every listed symbol.
  static PositionFamily all(std::span<const Symbol> syms) {
    PositionFamily f;
    for (const auto& s : syms)
      for (std::size_t i = 1; i <= s.arity; ++i) f.insert(s, i);
    return f;
  }

  friend bool operator==(const PositionFamily& a, const PositionFamily& b) { return a.map_ == b.map_; }

 private:
  std::map<Symbol, PositionSet> map_;
};

enum class Comparison { Greater, EqualUnderOrder, Less, Incomparable };

inline const char* to_string(Comparison c) {
  switch (c) {
    case Comparison::Greater: return ">";
    case Comparison::EqualUnderOrder: return "=";
    case Comparison::Less: return "<";
    case Comparison::Incomparable: return "||";
  }
  return "?";
}

/// Linear norm rule for one symbol: offset + sum of the norms at `positions`.
struct NormRule {
  long offset = 0;
  PositionSet positions;
  friend bool operator==(const NormRule&, const NormRule&) = default;
};

struct NormDef {
  /// Rule for symbols without an explicit entry.
  enum class Fallback { Zero, Size };

  std::string name;
  std::map<Symbol, NormRule> rules;
  Fallback fallback = Fallback::Zero;

  NormRule rule_for(const Symbol& s) const {
    if (auto it = rules.find(s); it != rules.end()) return it->second;
    if (fallback == Fallback::Zero) return {};
    NormRule r{static_cast<long>(s.arity), {}};
    for (std::size_t i = 1; i <= s.arity; ++i) r.positions.insert(i);
    return r;
  }

  /// ‖[h|t]‖ = 1 + ‖t‖, every other term 0.
  static NormDef list_length() { return {"listlen", {{kCons, {1, {2}}}}, Fallback::Zero}; }
  /// ‖f(t1..tn)‖ = n + Σ‖ti‖.
  static NormDef term_size() { return {"termsize", {}, Fallback::Size}; }

  friend bool operator==(const NormDef&, const NormDef&) = default;
};

/// Symbolic norm value: constant + Σ coeff·‖X‖ with every ‖X‖ ≥ 0.
struct LinearExpr {
  long constant = 0;
  std::map<VarId, long> coeffs;

  bool is_constant() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const auto& kv) { return kv.second == 0; });
  }
  LinearExpr& operator+=(const LinearExpr& o) {
    constant += o.constant;
    for (const auto& [v, c] : o.coeffs) coeffs[v] += c;
    return *this;
  }
  LinearExpr scaled(long k) const {
    LinearExpr r{constant * k, {}};
    for (const auto& [v, c] : coeffs) r.coeffs[v] = c * k;
    return r;
  }
  friend LinearExpr operator-(const LinearExpr& a, const LinearExpr& b) {
    LinearExpr r = a;
    r += b.scaled(-1);
    return r;
  }
  friend bool operator==(const LinearExpr& a, const LinearExpr& b) {
    return a.constant == b.constant && (a - b).is_constant();
  }
};

enum class Status { Lex, Multiset };

/// Strict precedence on symbols, kept transitively closed.
class Precedence {
 public:
  Precedence() = default;
  explicit Precedence(std::vector<std::pair<Symbol, Symbol>> pairs) : pairs_(std::move(pairs)) { close(); }

  /// Total precedence from a ranking, highest first.
  static Precedence from_ranking(std::span<const Symbol> ranking) {
    std::vector<std::pair<Symbol, Symbol>> pairs;
    for (std::size_t i = 0; i + 1 < ranking.size(); ++i) pairs.emplace_back(ranking[i], ranking[i + 1]);
    return Precedence(std::move(pairs));
  }

  bool greater(const Symbol& f, const Symbol& g) const { return closure_.count({f, g}) > 0; }
  bool acyclic() const {
    return std::none_of(closure_.begin(), closure_.end(), [](const auto& p) { return p.first == p.second; });
  }
  const std::vector<std::pair<Symbol, Symbol>>& pairs() const noexcept { return pairs_; }

  friend bool operator==(const Precedence& a, const Precedence& b) { return a.closure_ == b.closure_; }

 private:
  void close() {
    for (const auto& p : pairs_) closure_.insert(p);
    bool changed = true;
    while (changed) {
      changed = false;
      std::vector<std::pair<Symbol, Symbol>> add;
      for (const auto& [a, b] : closure_)
        for (auto it = closure_.lower_bound({b, Symbol{"", 0}}); it != closure_.end() && it->first == b; ++it)
          if (!closure_.count({a, it->second})) add.emplace_back(a, it->second);
      for (auto& p : add) changed = closure_.insert(std::move(p)).second || changed;
    }
  }

  std::vector<std::pair<Symbol, Symbol>> pairs_;
  std::set<std::pair<Symbol, Symbol>> closure_;
};

/// Description of a term ordering.
///
/// PropertyAbstract describes an ordering only through the positions it
/// ignores and the monotone / subterm positions it is required to have.
/// Rpo and NormBased are concrete; their `filter` lists argument positions
/// erased before comparison, which is how rigidity and output-independence
/// are realised.
struct OrderSpec {
  enum class Kind { PropertyAbstract, Rpo, NormBased };

  Kind kind = Kind::Rpo;
  // PropertyAbstract
  PositionFamily ignored_pred;
  PositionFamily ignored_fun;
  PositionFamily monotone;
  PositionFamily subterm;
  // Rpo
  Precedence precedence;
  std::map<Symbol, Status> status;
  // NormBased
  NormDef norm;
  // concrete orders
  PositionFamily filter;

  static OrderSpec property_abstract(PositionFamily ignored_pred, PositionFamily ignored_fun, PositionFamily m,
                                     PositionFamily s) {
    OrderSpec o;
    o.kind = Kind::PropertyAbstract;
    o.ignored_pred = std::move(ignored_pred);
    o.ignored_fun = std::move(ignored_fun);
    o.monotone = std::move(m);
    o.subterm = std::move(s);
    return o;
  }
  static OrderSpec rpo(Precedence prec, PositionFamily filter = {}, std::map<Symbol, Status> status = {}) {
    OrderSpec o;
    o.kind = Kind::Rpo;
    o.precedence = std::move(prec);
    o.filter = std::move(filter);
    o.status = std::move(status);
    return o;
  }
  static OrderSpec norm_based(NormDef n, PositionFamily filter = {}) {
    OrderSpec o;
    o.kind = Kind::NormBased;
    o.norm = std::move(n);
    o.filter = std::move(filter);
    return o;
  }

  bool concrete() const noexcept { return kind != Kind::PropertyAbstract; }

  /// Positions erased by this order (ignored positions for PropertyAbstract).
  bool erased(const Symbol& s, std::size_t pos) const {
    if (kind == Kind::PropertyAbstract) return ignored_pred.contains(s, pos) || ignored_fun.contains(s, pos);
    return filter.contains(s, pos);
  }

  Status status_of(const Symbol& s) const {
    auto it = status.find(s);
    return it == status.end() ? Status::Lex : it->second;
  }

  std::string describe() const {
    switch (kind) {
      case Kind::PropertyAbstract: return "property-abstract";
      case Kind::Rpo: return "rpo";
      case Kind::NormBased: return "norm:" + norm.name;
    }
    return "?";
  }
};

// ---------------------------------------------------------------------------
// Characteristic functions

/// χ^I_s(v): 1 iff every step of `v` goes through a position in I.
inline int char_fn(const Term& s, std::span<const std::size_t> v, const PositionFamily& fam) {
  if (v.empty()) return 1;
  if (s.is_var() || s.is_constant()) throw InvalidPath("path continues below a leaf");
  std::size_t i = v.front();
  if (i == 0 || i > s.arity()) throw InvalidPath("position " + std::to_string(i) + " out of range for " + s.symbol().str());
  int here = fam.contains(s.symbol(), i) ? 1 : 0;
  int below = char_fn(s.arg(i - 1), v.subspan(1), fam);
  return here * below;
}

/// χ of the path through positions *not* erased by the order; 0 means the
/// path is hidden from the order.
inline bool path_visible(const OrderSpec& o, const Term& s, std::span<const std::size_t> v) {
  Term cur = s;
  for (auto i : v) {
    if (cur.is_var() || i == 0 || i > cur.arity()) throw InvalidPath("invalid path");
    if (o.erased(cur.symbol(), i)) return false;
    cur = cur.arg(i - 1);
  }
  return true;
}

// ---------------------------------------------------------------------------
// Norms

namespace detail {
inline void norm_into(const NormDef& n, const PositionFamily* filter, const Term& t, long k, LinearExpr& out) {
  if (t.is_var()) {
    out.coeffs[t.var_id()] += k;
    return;
  }
  NormRule r = n.rule_for(t.symbol());
  out.constant += k * r.offset;
  for (auto p : r.positions) {
    if (p == 0 || p > t.arity()) continue;
    if (filter && filter->contains(t.symbol(), p)) continue;
    norm_into(n, filter, t.arg(p - 1), k, out);
  }
}
}  // namespace detail

inline LinearExpr norm_value(const NormDef& n, const Term& t) {
  LinearExpr e;
  detail::norm_into(n, nullptr, t, 1, e);
  return e;
}

inline LinearExpr norm_value(const OrderSpec& o, const Term& t) {
  LinearExpr e;
  detail::norm_into(o.norm, &o.filter, t, 1, e);
  return e;
}

/// Sign-definite comparison of a symbolic difference.
inline Comparison sign_of(const LinearExpr& d) {
  if (d.is_constant()) {
    if (d.constant > 0) return Comparison::Greater;
    if (d.constant < 0) return Comparison::Less;
    return Comparison::EqualUnderOrder;
  }
  bool nonneg = std::all_of(d.coeffs.begin(), d.coeffs.end(), [](const auto& kv) { return kv.second >= 0; });
  bool nonpos = std::all_of(d.coeffs.begin(), d.coeffs.end(), [](const auto& kv) { return kv.second <= 0; });
  if (nonneg && d.constant >= 1) return Comparison::Greater;
  if (nonpos && d.constant <= -1) return Comparison::Less;
  return Comparison::Incomparable;
}

// ---------------------------------------------------------------------------
// Recursive path ordering

/// `lhs > rhs`, assumed to hold for the instances under consideration.
struct Hypothesis {
  Term lhs;
  Term rhs;
};

namespace detail {

class Rpo {
 public:
  Rpo(const OrderSpec& o, std::span<const Hypothesis> hyps) : o_(o), hyps_(hyps) {}

  // bounds chains through hypotheses; structural recursion always shrinks
  static constexpr int kMaxDepth = 8;

  bool eq(const Term& s, const Term& t) const {
    if (s.is_var() || t.is_var()) return s.is_var() && t.is_var() && s.var_id() == t.var_id();
    if (s.symbol() != t.symbol()) return false;
    auto as = active(s), at = active(t);
    if (o_.status_of(s.symbol()) == Status::Multiset) return multiset_eq(as, at);
    for (std::size_t i = 0; i < as.size(); ++i)
      if (!eq(as[i], at[i])) return false;
    return true;
  }

  bool ge(const Term& s, const Term& t, int depth) const { return eq(s, t) || gt(s, t, depth); }

  bool gt(const Term& s, const Term& t, int depth) const {
    if (depth > kMaxDepth) return false;
    if (eq(s, t)) return false;
    if (!s.is_var()) {
      auto as = active(s);
      for (const auto& si : as)
        if (ge(si, t, depth)) return true;
      if (!t.is_var()) {
        auto at = active(t);
        const Symbol& f = s.symbol();
        const Symbol& g = t.symbol();
        if (o_.precedence.greater(f, g)) {
          if (std::all_of(at.begin(), at.end(), [&](const Term& tj) { return gt(s, tj, depth); })) return true;
        } else if (f == g) {
          if (o_.status_of(f) == Status::Multiset) {
            if (multiset_gt(as, at, depth)) return true;
          } else {
            std::size_t i = 0;
            while (i < as.size() && eq(as[i], at[i])) ++i;
            if (i < as.size() && gt(as[i], at[i], depth) &&
                std::all_of(at.begin() + static_cast<std::ptrdiff_t>(i) + 1, at.end(),
                            [&](const Term& tj) { return gt(s, tj, depth); }))
              return true;
          }
        }
      }
    }
    for (const auto& h : hyps_)
      if ((eq(s, h.lhs) || (depth < kMaxDepth && gt(s, h.lhs, depth + 1))) &&
          (eq(h.rhs, t) || (depth < kMaxDepth && gt(h.rhs, t, depth + 1))))
        return true;
    return false;
  }

  std::vector<Term> active(const Term& t) const {
    std::vector<Term> out;
    for (std::size_t i = 0; i < t.arity(); ++i)
      if (!o_.filter.contains(t.symbol(), i + 1)) out.push_back(t.arg(i));
    return out;
  }

 private:
  bool multiset_eq(std::vector<Term> a, std::vector<Term> b) const {
    if (a.size() != b.size()) return false;
    for (const auto& x : a) {
      auto it = std::find_if(b.begin(), b.end(), [&](const Term& y) { return eq(x, y); });
      if (it == b.end()) return false;
      b.erase(it);
    }
    return true;
  }

  bool multiset_gt(std::vector<Term> a, std::vector<Term> b, int depth) const {
    for (auto it = a.begin(); it != a.end();) {
      auto jt = std::find_if(b.begin(), b.end(), [&](const Term& y) { return eq(*it, y); });
      if (jt != b.end()) {
        b.erase(jt);
        it = a.erase(it);
      } else {
        ++it;
      }
    }
    if (a.empty()) return false;
    return std::all_of(b.begin(), b.end(), [&](const Term& y) {
      return std::any_of(a.begin(), a.end(), [&](const Term& x) { return gt(x, y, depth); });
    });
  }

  const OrderSpec& o_;
  std::span<const Hypothesis> hyps_;
};

/// Norm comparison under hypotheses: looks for small non-negative
/// multipliers λ with (s - t) - Σλ(lhs - rhs) sign-definite above 1 - Σλ.
inline bool norm_entails(const OrderSpec& o, std::span<const Hypothesis> hyps, const Term& s, const Term& t) {
  LinearExpr d = norm_value(o, s) - norm_value(o, t);
  if (sign_of(d) == Comparison::Greater) return true;
  std::vector<LinearExpr> hd;
  for (const auto& h : hyps) hd.push_back(norm_value(o, h.lhs) - norm_value(o, h.rhs));
  if (hd.empty() || hd.size() > 8) return false;
  std::vector<int> lambda(hd.size(), 0);
  while (true) {
    std::size_t k = 0;
    while (k < lambda.size() && lambda[k] == 2) lambda[k++] = 0;
    if (k == lambda.size()) return false;
    ++lambda[k];
    LinearExpr r = d;
    long used = 0;
    for (std::size_t j = 0; j < hd.size(); ++j) {
      r += hd[j].scaled(-lambda[j]);
      used += lambda[j];
    }
    bool nonneg = std::all_of(r.coeffs.begin(), r.coeffs.end(), [](const auto& kv) { return kv.second >= 0; });
    if (nonneg && r.constant >= 1 - used) return true;
  }
}

}  // namespace detail

/// Erasure congruence: equal after deleting the erased argument positions.
inline bool equal_under(const OrderSpec& o, const Term& a, const Term& b) {
  if (a.is_var() || b.is_var()) return a.is_var() && b.is_var() && a.var_id() == b.var_id();
  if (a.symbol() != b.symbol()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (o.erased(a.symbol(), i + 1)) continue;
    if (!equal_under(o, a.arg(i), b.arg(i))) return false;
  }
  return true;
}

/// Decides `s > t` for all instances satisfying `hyps` (sound, incomplete).
inline bool entails(const OrderSpec& o, std::span<const Hypothesis> hyps, const Term& s, const Term& t) {
  switch (o.kind) {
    case OrderSpec::Kind::Rpo: return detail::Rpo(o, hyps).gt(s, t, 0);
    case OrderSpec::Kind::NormBased: return detail::norm_entails(o, hyps, s, t);
    case OrderSpec::Kind::PropertyAbstract: return false;
  }
  return false;
}

/// Decides `s =_> t` for all instances.
inline bool entails_equal(const OrderSpec& o, const Term& s, const Term& t) {
  switch (o.kind) {
    case OrderSpec::Kind::Rpo: return detail::Rpo(o, {}).eq(s, t);
    case OrderSpec::Kind::NormBased: return sign_of(norm_value(o, s) - norm_value(o, t)) == Comparison::EqualUnderOrder;
    case OrderSpec::Kind::PropertyAbstract: return equal_under(o, s, t);
  }
  return false;
}

inline Comparison compare(const OrderSpec& o, const Term& a, const Term& b) {
  switch (o.kind) {
    case OrderSpec::Kind::Rpo: {
      detail::Rpo r(o, {});
      if (r.eq(a, b)) return Comparison::EqualUnderOrder;
      if (r.gt(a, b, 0)) return Comparison::Greater;
      if (r.gt(b, a, 0)) return Comparison::Less;
      return Comparison::Incomparable;
    }
    case OrderSpec::Kind::NormBased: return sign_of(norm_value(o, a) - norm_value(o, b));
    case OrderSpec::Kind::PropertyAbstract:
      return equal_under(o, a, b) ? Comparison::EqualUnderOrder : Comparison::Incomparable;
  }
  return Comparison::Incomparable;
}

// ---------------------------------------------------------------------------
// Defined position families of concrete orders

struct DefinedFamilies {
  PositionFamily monotone;
  PositionFamily subterm;
};

/// M and S sets a concrete order defines over `signature`.
inline DefinedFamilies defined_families(const OrderSpec& o, std::span<const Symbol> signature) {
  DefinedFamilies out;
  for (const auto& s : signature) {
    for (std::size_t i = 1; i <= s.arity; ++i) {
      if (o.erased(s, i)) continue;
      switch (o.kind) {
        case OrderSpec::Kind::Rpo:
          out.monotone.insert(s, i);
          out.subterm.insert(s, i);
          break;
        case OrderSpec::Kind::NormBased: {
          NormRule r = o.norm.rule_for(s);
          if (r.positions.count(i)) {
            out.monotone.insert(s, i);
            if (r.offset >= 1) out.subterm.insert(s, i);
          }
          break;
        }
        case OrderSpec::Kind::PropertyAbstract:
          if (o.monotone.contains(s, i)) out.monotone.insert(s, i);
          if (o.subterm.contains(s, i)) out.subterm.insert(s, i);
          break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// VREL, M_>(s), S_>(s), rigidity

struct VrelResult {
  std::vector<PathVector> occurrences;
  /// Set when computed by bounded enumeration rather than exactly.
  bool approximate = false;
};

/// Canonical replacement pool: fresh variable, the given constants, and
/// one application of each given functor to pool constants, up to `max_size`.
inline std::vector<Term> replacement_pool(std::span<const Symbol> symbols, std::size_t max_size, VarId fresh) {
  std::vector<Term> pool{Term::var(fresh, "_R")};
  std::vector<Term> layer;
  for (const auto& s : symbols)
    if (s.arity == 0) layer.push_back(Term::constant(s.name));
  if (layer.empty()) layer.push_back(Term::constant("a"));
  std::vector<Term> all = layer;
  for (std::size_t size = 2; size <= max_size; ++size) {
    std::vector<Term> next;
    for (const auto& f : symbols) {
      if (f.arity == 0) continue;
      // arguments drawn from `all`, total size = size
      std::vector<std::vector<Term>> partial{{}};
      for (std::size_t k = 0; k < f.arity; ++k) {
        std::vector<std::vector<Term>> grown;
        for (const auto& p : partial)
          for (const auto& a : all) {
            auto q = p;
            q.push_back(a);
            grown.push_back(std::move(q));
          }
        partial = std::move(grown);
      }
      for (auto& args : partial) {
        std::size_t sz = 1;
        for (const auto& a : args) sz += a.size();
        if (sz == size) next.push_back(Term::app(f, std::move(args)));
      }
    }
    all.insert(all.end(), next.begin(), next.end());
  }
  pool.insert(pool.end(), all.begin(), all.end());
  return pool;
}

/// Occurrences whose replacement by some pool term changes the class of `s`.
inline std::vector<PathVector> vrel_bruteforce(const Term& s, std::span<const Term> pool,
                                               const std::function<bool(const Term&, const Term&)>& equal) {
  std::vector<PathVector> out;
  for (const auto& [path, var] : var_occurrences(s)) {
    for (const auto& r : pool) {
      if (r.is_var() && r.var_id() == var.var_id()) continue;
      if (!equal(replace_at(s, path, r), s)) {
        out.push_back(path);
        break;
      }
    }
  }
  return out;
}

inline VrelResult vrel(const OrderSpec& o, const Term& s) {
  VrelResult res;
  switch (o.kind) {
    case OrderSpec::Kind::PropertyAbstract:
      for (const auto& [path, var] : var_occurrences(s))
        if (char_fn(s, path, o.monotone) == 1 || char_fn(s, path, o.subterm) == 1) res.occurrences.push_back(path);
      break;
    case OrderSpec::Kind::NormBased:
      for (const auto& [path, var] : var_occurrences(s)) {
        Term cur = s;
        bool counted = true;
        for (auto i : path) {
          if (o.filter.contains(cur.symbol(), i) || !o.norm.rule_for(cur.symbol()).positions.count(i)) {
            counted = false;
            break;
          }
          cur = cur.arg(i - 1);
        }
        if (counted) res.occurrences.push_back(path);
      }
      break;
    case OrderSpec::Kind::Rpo: {
      std::vector<Symbol> syms;
      collect_symbols(s, syms);
      VarId fresh = 0;
      for (auto id : var_ids(s)) fresh = std::max(fresh, id + 1);
      auto pool = replacement_pool(syms, 3, fresh);
      res.occurrences = vrel_bruteforce(s, pool, [&](const Term& a, const Term& b) {
        return compare(o, a, b) == Comparison::EqualUnderOrder;
      });
      res.approximate = true;
      break;
    }
  }
  return res;
}

/// Variables all of whose occurrences have χ = 1 under `fam`.
inline std::set<VarId> vars_with_char_one(const Term& s, const PositionFamily& fam) {
  std::map<VarId, bool> all_one;
  for (const auto& [path, var] : var_occurrences(s)) {
    bool one = char_fn(s, path, fam) == 1;
    auto [it, fresh] = all_one.emplace(var.var_id(), one);
    if (!fresh) it->second = it->second && one;
  }
  std::set<VarId> out;
  for (const auto& [id, one] : all_one)
    if (one) out.insert(id);
  return out;
}

inline std::set<VarId> m_set(const OrderSpec& o, const Term& s) { return vars_with_char_one(s, o.monotone); }
inline std::set<VarId> s_set(const OrderSpec& o, const Term& s) { return vars_with_char_one(s, o.subterm); }

/// Rigidity via pseudo-rigidity: every variable occurrence hidden from the order.
inline bool is_rigid(const OrderSpec& o, const Term& s) {
  if (o.kind == OrderSpec::Kind::NormBased) return norm_value(o, s).is_constant();
  for (const auto& [path, var] : var_occurrences(s))
    if (path_visible(o, s, path)) return false;
  return true;
}

inline bool is_rigid(const OrderSpec& o, const Atom& a) { return is_rigid(o, a.term()); }

}  // namespace termlog
