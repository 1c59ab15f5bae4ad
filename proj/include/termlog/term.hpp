#pragma once

// Terms, atoms, clauses and programs of the pure definite-clause subset,
// together with substitutions, unification and variable renaming.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace termlog {

/// Functor or predicate identified by name and arity.
struct Symbol {
  std::string name;
  std::size_t arity = 0;

  auto operator<=>(const Symbol&) const = default;
  bool operator==(const Symbol&) const = default;

  std::string str() const { return name + "/" + std::to_string(arity); }
};

inline const Symbol kNil{"[]", 0};
inline const Symbol kCons{".", 2};
inline const Symbol kPlus{"+", 2};
inline const Symbol kTimes{"*", 2};
/// Placeholder written `t` for argument positions an order ignores.
inline const Symbol kWildcard{"$t", 0};

using VarId = std::int64_t;

/// Path into a term; entries are 1-based argument positions.
using PathVector = std::vector<std::size_t>;

class Term {
 public:
  Term() : Term(constant("[]")) {}

  static Term var(VarId id, std::string name = {}) {
    auto n = std::make_shared<Node>();
    n->is_var = true;
    n->id = id;
    n->var_name = std::move(name);
    n->size = 1;
    return Term(std::move(n));
  }

  static Term app(Symbol sym, std::vector<Term> args) {
    auto n = std::make_shared<Node>();
    sym.arity = args.size();
    n->sym = std::move(sym);
    n->size = 1;
    n->ground = true;
    for (const auto& a : args) {
      n->size += a.size();
      n->ground = n->ground && a.is_ground();
    }
    n->args = std::move(args);
    return Term(std::move(n));
  }

  static Term constant(std::string name) { return app(Symbol{std::move(name), 0}, {}); }

  static Term list(const std::vector<Term>& elems, const std::optional<Term>& tail = std::nullopt) {
    Term t = tail ? *tail : constant("[]");
    for (auto it = elems.rbegin(); it != elems.rend(); ++it) t = app(kCons, {*it, t});
    return t;
  }

  bool is_var() const noexcept { return node_->is_var; }
  bool is_constant() const noexcept { return !node_->is_var && node_->args.empty(); }
  bool is_ground() const noexcept { return node_->ground; }
  VarId var_id() const noexcept { return node_->id; }
  const std::string& var_name() const noexcept { return node_->var_name; }
  const Symbol& symbol() const noexcept { return node_->sym; }
  std::span<const Term> args() const noexcept { return node_->args; }
  std::size_t arity() const noexcept { return node_->args.size(); }
  /// 0-based argument access.
  const Term& arg(std::size_t i) const { return node_->args.at(i); }
  /// Number of symbol and variable occurrences.
  std::size_t size() const noexcept { return node_->size; }

  bool same_node(const Term& o) const noexcept { return node_ == o.node_; }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.is_var() || b.is_var()) return a.is_var() && b.is_var() && a.var_id() == b.var_id();
    if (a.symbol() != b.symbol()) return false;
    for (std::size_t i = 0; i < a.arity(); ++i)
      if (!(a.arg(i) == b.arg(i))) return false;
    return true;
  }

  /// Structural total order: variables first (by id), then symbols, then arguments.
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (a.is_var() != b.is_var()) return a.is_var() ? std::strong_ordering::less : std::strong_ordering::greater;
    if (a.is_var()) return a.var_id() <=> b.var_id();
    if (auto c = a.symbol() <=> b.symbol(); c != 0) return c;
    for (std::size_t i = 0; i < a.arity(); ++i)
      if (auto c = a.arg(i) <=> b.arg(i); c != 0) return c;
    return std::strong_ordering::equal;
  }

 private:
  struct Node {
    bool is_var = false;
    bool ground = false;
    VarId id = 0;
    std::string var_name;
    Symbol sym;
    std::vector<Term> args;
    std::size_t size = 1;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

/// Atom p(t1,...,tn); stored as a term rooted at the predicate symbol.
class Atom {
 public:
  Atom() = default;
  Atom(Symbol pred, std::vector<Term> args) : term_(Term::app(std::move(pred), std::move(args))) {}
  explicit Atom(Term t) : term_(std::move(t)) {}

  const Symbol& pred() const noexcept { return term_.symbol(); }
  std::span<const Term> args() const noexcept { return term_.args(); }
  const Term& arg(std::size_t i) const { return term_.arg(i); }
  std::size_t arity() const noexcept { return term_.arity(); }
  const Term& term() const noexcept { return term_; }

  friend bool operator==(const Atom& a, const Atom& b) { return a.term_ == b.term_; }
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b) { return a.term_ <=> b.term_; }

 private:
  Term term_;
};

struct Clause {
  Atom head;
  std::vector<Atom> body;
};

/// `%% query:` or `%% mode:` annotation attached to a program.
struct Directive {
  enum class Kind { Query, Mode };
  Kind kind = Kind::Query;
  Symbol pred;
  std::vector<std::string> values;
  std::size_t line = 0;
};

struct Program {
  std::vector<Clause> clauses;
  std::vector<Directive> directives;

  /// Predicates in order of first occurrence (heads and bodies).
  std::vector<Symbol> predicates() const {
    std::vector<Symbol> out;
    auto add = [&](const Symbol& s) {
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    };
    for (const auto& c : clauses) {
      add(c.head.pred());
      for (const auto& b : c.body) add(b.pred());
    }
    return out;
  }

  std::vector<std::size_t> clauses_of(const Symbol& pred) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < clauses.size(); ++i)
      if (clauses[i].head.pred() == pred) out.push_back(i);
    return out;
  }

  bool defines(const Symbol& pred) const {
    return std::any_of(clauses.begin(), clauses.end(), [&](const Clause& c) { return c.head.pred() == pred; });
  }

  std::vector<Directive> directives_of(Directive::Kind k) const {
    std::vector<Directive> out;
    for (const auto& d : directives)
      if (d.kind == k) out.push_back(d);
    return out;
  }
};

// ---------------------------------------------------------------------------
// Traversal helpers

inline void collect_vars(const Term& t, std::vector<Term>& out) {
  if (t.is_var()) {
    if (std::none_of(out.begin(), out.end(), [&](const Term& v) { return v.var_id() == t.var_id(); }))
      out.push_back(t);
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out);
}

/// Distinct variables in order of first occurrence.
inline std::vector<Term> variables(const Term& t) {
  std::vector<Term> out;
  collect_vars(t, out);
  return out;
}

inline std::set<VarId> var_ids(const Term& t) {
  std::set<VarId> out;
  for (const auto& v : variables(t)) out.insert(v.var_id());
  return out;
}

inline std::set<VarId> var_ids(const Clause& c) {
  std::set<VarId> out = var_ids(c.head.term());
  for (const auto& b : c.body)
    for (auto id : var_ids(b.term())) out.insert(id);
  return out;
}

inline bool occurs(VarId id, const Term& t) {
  if (t.is_var()) return t.var_id() == id;
  if (t.is_ground()) return false;
  for (const auto& a : t.args())
    if (occurs(id, a)) return true;
  return false;
}

/// Subterm addressed by `path`, or nullopt if the path leaves the term.
inline std::optional<Term> subterm_at(const Term& t, std::span<const std::size_t> path) {
  Term cur = t;
  for (auto i : path) {
    if (cur.is_var() || i == 0 || i > cur.arity()) return std::nullopt;
    cur = cur.arg(i - 1);
  }
  return cur;
}

/// Replaces the subterm at `path` by `by`. The path must be valid.
inline Term replace_at(const Term& t, std::span<const std::size_t> path, const Term& by) {
  if (path.empty()) return by;
  std::vector<Term> args(t.args().begin(), t.args().end());
  args.at(path[0] - 1) = replace_at(args[path[0] - 1], path.subspan(1), by);
  return Term::app(t.symbol(), std::move(args));
}

/// Every variable occurrence with its path, in depth-first left-to-right order.
inline std::vector<std::pair<PathVector, Term>> var_occurrences(const Term& t) {
  std::vector<std::pair<PathVector, Term>> out;
  PathVector path;
  auto walk = [&](auto&& self, const Term& s) -> void {
    if (s.is_var()) {
      out.emplace_back(path, s);
      return;
    }
    for (std::size_t i = 0; i < s.arity(); ++i) {
      path.push_back(i + 1);
      self(self, s.arg(i));
      path.pop_back();
    }
  };
  walk(walk, t);
  return out;
}

/// All proper subterm paths (non-empty), pre-order.
inline std::vector<PathVector> subterm_paths(const Term& t) {
  std::vector<PathVector> out;
  PathVector path;
  auto walk = [&](auto&& self, const Term& s) -> void {
    for (std::size_t i = 0; i < s.arity(); ++i) {
      path.push_back(i + 1);
      out.push_back(path);
      self(self, s.arg(i));
      path.pop_back();
    }
  };
  walk(walk, t);
  return out;
}

inline void collect_symbols(const Term& t, std::vector<Symbol>& out) {
  if (t.is_var()) return;
  if (std::find(out.begin(), out.end(), t.symbol()) == out.end()) out.push_back(t.symbol());
  for (const auto& a : t.args()) collect_symbols(a, out);
}

/// Functor symbols of the program (argument positions only) in order of first occurrence.
inline std::vector<Symbol> functors(const Program& p) {
  std::vector<Symbol> out;
  auto atom = [&](const Atom& a) {
    for (const auto& t : a.args()) collect_symbols(t, out);
  };
  for (const auto& c : p.clauses) {
    atom(c.head);
    for (const auto& b : c.body) atom(b);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Substitutions

class Substitution {
 public:
  Substitution() = default;
  Substitution(std::initializer_list<std::pair<const VarId, Term>> init) : map_(init) {}

  bool empty() const noexcept { return map_.empty(); }
  std::size_t size() const noexcept { return map_.size(); }
  const Term* find(VarId id) const {
    auto it = map_.find(id);
    return it == map_.end() ? nullptr : &it->second;
  }
  void bind(VarId id, Term t) { map_.insert_or_assign(id, std::move(t)); }
  const std::map<VarId, Term>& bindings() const noexcept { return map_; }

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  std::map<VarId, Term> map_;
};

/// Simultaneous replacement of the bound variables of `t`.
inline Term apply_subst(const Term& t, const Substitution& s) {
  if (s.empty() || t.is_ground()) return t;
  if (t.is_var()) {
    const Term* b = s.find(t.var_id());
    return b ? *b : t;
  }
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(apply_subst(a, s));
    changed = changed || !args.back().same_node(a);
  }
  return changed ? Term::app(t.symbol(), std::move(args)) : t;
}

inline Atom apply_subst(const Atom& a, const Substitution& s) { return Atom(apply_subst(a.term(), s)); }

inline Clause apply_subst(const Clause& c, const Substitution& s) {
  Clause out{apply_subst(c.head, s), {}};
  for (const auto& b : c.body) out.body.push_back(apply_subst(b, s));
  return out;
}

/// Composition: applying the result equals applying `first` then `second`.
inline Substitution compose(const Substitution& first, const Substitution& second) {
  Substitution out;
  for (const auto& [id, t] : first.bindings()) {
    Term r = apply_subst(t, second);
    if (!(r.is_var() && r.var_id() == id)) out.bind(id, r);
  }
  for (const auto& [id, t] : second.bindings())
    if (!first.find(id)) out.bind(id, t);
  return out;
}

namespace detail {

inline Term resolve(const Term& t, const Substitution& s) {
  Term cur = t;
  while (cur.is_var()) {
    const Term* b = s.find(cur.var_id());
    if (!b) break;
    cur = *b;
  }
  return cur;
}

inline bool occurs_deep(VarId id, const Term& t, const Substitution& s) {
  Term r = resolve(t, s);
  if (r.is_var()) return r.var_id() == id;
  for (const auto& a : r.args())
    if (occurs_deep(id, a, s)) return true;
  return false;
}

inline bool unify_into(const Term& a, const Term& b, Substitution& s) {
  std::vector<std::pair<Term, Term>> work{{a, b}};
  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    x = resolve(x, s);
    y = resolve(y, s);
    if (x.is_var() && y.is_var() && x.var_id() == y.var_id()) continue;
    if (x.is_var()) {
      if (occurs_deep(x.var_id(), y, s)) return false;
      s.bind(x.var_id(), y);
      continue;
    }
    if (y.is_var()) {
      if (occurs_deep(y.var_id(), x, s)) return false;
      s.bind(y.var_id(), x);
      continue;
    }
    if (x.symbol() != y.symbol()) return false;
    for (std::size_t i = 0; i < x.arity(); ++i) work.emplace_back(x.arg(i), y.arg(i));
  }
  return true;
}

/// Turns a triangular binding set into an idempotent substitution.
inline Substitution normalize(const Substitution& tri) {
  Substitution out;
  auto full = [&](auto&& self, const Term& t) -> Term {
    if (t.is_var()) {
      const Term* b = tri.find(t.var_id());
      return b ? self(self, *b) : t;
    }
    if (t.is_ground()) return t;
    std::vector<Term> args;
    for (const auto& a : t.args()) args.push_back(self(self, a));
    return Term::app(t.symbol(), std::move(args));
  };
  for (const auto& [id, t] : tri.bindings()) out.bind(id, full(full, t));
  return out;
}

}  // namespace detail

/// Most general unifier with occurs-check, idempotent; nullopt when none exists.
inline std::optional<Substitution> mgu(const Term& a, const Term& b) {
  Substitution s;
  if (!detail::unify_into(a, b, s)) return std::nullopt;
  return detail::normalize(s);
}

inline std::optional<Substitution> mgu(const Atom& a, const Atom& b) {
  if (a.pred() != b.pred()) return std::nullopt;
  return mgu(a.term(), b.term());
}

/// Unifies pairwise under an existing substitution (which is extended in place).
inline bool unify_with(const Term& a, const Term& b, Substitution& s) {
  Substitution tri = s;
  if (!detail::unify_into(a, b, tri)) return false;
  s = detail::normalize(tri);
  return true;
}

/// One-way matching: finds s with apply_subst(pattern, s) == target.
inline bool match_into(const Term& pattern, const Term& target, Substitution& s) {
  if (pattern.is_var()) {
    if (const Term* b = s.find(pattern.var_id())) return *b == target;
    s.bind(pattern.var_id(), target);
    return true;
  }
  if (target.is_var() || pattern.symbol() != target.symbol()) return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i)
    if (!match_into(pattern.arg(i), target.arg(i), s)) return false;
  return true;
}

inline std::optional<Substitution> match(const Term& pattern, const Term& target) {
  Substitution s;
  if (!match_into(pattern, target, s)) return std::nullopt;
  return s;
}

namespace detail {
inline bool variant_into(const Term& a, const Term& b, std::map<VarId, VarId>& fw, std::map<VarId, VarId>& bw) {
  if (a.is_var() || b.is_var()) {
    if (!a.is_var() || !b.is_var()) return false;
    auto [i1, n1] = fw.emplace(a.var_id(), b.var_id());
    auto [i2, n2] = bw.emplace(b.var_id(), a.var_id());
    return i1->second == b.var_id() && i2->second == a.var_id();
  }
  if (a.symbol() != b.symbol()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!variant_into(a.arg(i), b.arg(i), fw, bw)) return false;
  return true;
}
}  // namespace detail

/// Equality up to a bijective variable renaming.
inline bool variant_eq(const Term& a, const Term& b) {
  std::map<VarId, VarId> fw, bw;
  return detail::variant_into(a, b, fw, bw);
}

inline bool variant_eq(const Atom& a, const Atom& b) { return variant_eq(a.term(), b.term()); }

/// Variant check for sequences of atoms sharing one renaming.
inline bool variant_eq(std::span<const Atom> a, std::span<const Atom> b) {
  if (a.size() != b.size()) return false;
  std::map<VarId, VarId> fw, bw;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!detail::variant_into(a[i].term(), b[i].term(), fw, bw)) return false;
  return true;
}

inline bool variant_eq(const Clause& a, const Clause& b) {
  std::vector<Atom> x{a.head}, y{b.head};
  x.insert(x.end(), a.body.begin(), a.body.end());
  y.insert(y.end(), b.body.begin(), b.body.end());
  return variant_eq(std::span<const Atom>(x), std::span<const Atom>(y));
}

/// Renames every variable of `c` to an id outside `avoid` and outside the clause itself.
inline Clause rename_apart(const Clause& c, const std::set<VarId>& avoid) {
  std::set<VarId> own = var_ids(c);
  VarId next = 0;
  if (!avoid.empty()) next = std::max(next, *avoid.rbegin() + 1);
  if (!own.empty()) next = std::max(next, *own.rbegin() + 1);
  Substitution ren;
  auto visit = [&](const Term& t) {
    for (const auto& v : variables(t)) {
      if (ren.find(v.var_id())) continue;
      std::string name = v.var_name().empty() ? std::string("_G") : v.var_name();
      ren.bind(v.var_id(), Term::var(next, name + std::to_string(next)));
      ++next;
    }
  };
  visit(c.head.term());
  for (const auto& b : c.body) visit(b.term());
  return apply_subst(c, ren);
}

/// Renames with ids starting at `*counter`, advancing it.
inline Clause rename_fresh(const Clause& c, VarId& counter) {
  Substitution ren;
  auto visit = [&](const Term& t) {
    for (const auto& v : variables(t)) {
      if (ren.find(v.var_id())) continue;
      std::string name = v.var_name().empty() ? std::string("_G") : v.var_name();
      ren.bind(v.var_id(), Term::var(counter, name + "_" + std::to_string(counter)));
      ++counter;
    }
  };
  visit(c.head.term());
  for (const auto& b : c.body) visit(b.term());
  return apply_subst(c, ren);
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline bool is_infix(const Term& t) {
  return !t.is_var() && (t.symbol() == kPlus || t.symbol() == kTimes);
}

inline int infix_prec(const Term& t) { return t.symbol() == kPlus ? 1 : 2; }

inline bool plain_name(const std::string& s) {
  if (s.empty()) return false;
  if (s == "[]") return true;
  bool digits = std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
  if (digits) return true;
  if (!std::islower(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; });
}

inline void print(std::ostream& os, const Term& t, int ctx) {
  if (t.is_var()) {
    if (t.var_name().empty())
      os << "_G" << t.var_id();
    else
      os << t.var_name();
    return;
  }
  const Symbol& s = t.symbol();
  if (s == kWildcard) {
    os << 't';
    return;
  }
  if (s == kCons) {
    os << '[';
    Term cur = t;
    bool first = true;
    while (!cur.is_var() && cur.symbol() == kCons) {
      if (!first) os << ',';
      print(os, cur.arg(0), 0);
      first = false;
      cur = cur.arg(1);
    }
    if (cur.is_var() || cur.symbol() != kNil) {
      os << '|';
      print(os, cur, 0);
    }
    os << ']';
    return;
  }
  if (is_infix(t)) {
    int p = infix_prec(t);
    if (p < ctx) os << '(';
    print(os, t.arg(0), p);
    os << (s == kPlus ? '+' : '*');
    print(os, t.arg(1), p + 1);
    if (p < ctx) os << ')';
    return;
  }
  if (plain_name(s.name))
    os << s.name;
  else
    os << '\'' << s.name << '\'';
  if (t.arity() == 0) return;
  os << '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) os << ',';
    print(os, t.arg(i), 0);
  }
  os << ')';
}

}  // namespace detail

inline std::ostream& operator<<(std::ostream& os, const Term& t) {
  detail::print(os, t, 0);
  return os;
}

inline std::ostream& operator<<(std::ostream& os, const Atom& a) { return os << a.term(); }

inline std::ostream& operator<<(std::ostream& os, const Clause& c) {
  os << c.head;
  if (!c.body.empty()) {
    os << " :- ";
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      if (i) os << ", ";
      os << c.body[i];
    }
  }
  return os << '.';
}

inline std::ostream& operator<<(std::ostream& os, const Substitution& s) {
  os << '{';
  bool first = true;
  for (const auto& [id, t] : s.bindings()) {
    if (!first) os << ", ";
    first = false;
    os << "_G" << id << "->" << t;
  }
  return os << '}';
}

template <class T>
std::string to_string(const T& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

inline std::string to_string(const Program& p) {
  std::ostringstream os;
  for (const auto& d : p.directives) {
    os << "%% " << (d.kind == Directive::Kind::Query ? "query" : "mode") << ": " << d.pred.name << '(';
    for (std::size_t i = 0; i < d.values.size(); ++i) os << (i ? "," : "") << d.values[i];
    os << ").\n";
  }
  for (const auto& c : p.clauses) os << c << '\n';
  return os.str();
}

}  // namespace termlog
