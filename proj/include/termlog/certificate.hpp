#pragma once

// JSON form of proof certificates and the independent replay check.
//
// Schema (all symbols are written "name/arity"):
//   mode            "rigid" | "wellmoded"
//   callSet         [{pred, args: [free|ground|list|nillist|any]}]
//   rigidity        {ignoredPred: {sym: [pos]}, ignoredFun: {sym: [pos]}}
//   modes           {sym: [in|out]}
//   constraints     [string]            informational, compared on replay
//   interarg        [{shape: string, formula: [[{rel, lhs, rhs}]]}]
//                   placeholders are written _t1, _t2, ...
//   order           {kind: rpo|norm, filter, precedence: [[sym, sym]],
//                    status: {sym: lex|mul}, norm: {name, fallback, rules}}
//   perConstraint   [{constraint, route, lemmas: [string]}]
//   searchTrace     number of candidate orders examined

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "termlog/error.hpp"
#include "termlog/parser.hpp"
#include "termlog/solver.hpp"

namespace termlog {

using json = nlohmann::ordered_json;

namespace detail {

inline std::string sym_str(const Symbol& s) { return s.str(); }

inline Symbol sym_parse(const std::string& s) {
  auto k = s.rfind('/');
  if (k == std::string::npos || k == 0) throw InputError("malformed symbol '" + s + "'");
  try {
    return Symbol{s.substr(0, k), static_cast<std::size_t>(std::stoul(s.substr(k + 1)))};
  } catch (const std::exception&) {
    throw InputError("malformed symbol '" + s + "'");
  }
}

inline json family_to_json(const PositionFamily& f) {
  json j = json::object();
  for (const auto& [s, ps] : f.entries()) j[sym_str(s)] = std::vector<std::size_t>(ps.begin(), ps.end());
  return j;
}

inline PositionFamily family_from_json(const json& j) {
  PositionFamily f;
  for (const auto& [k, v] : j.items())
    for (const auto& p : v) f.insert(sym_parse(k), p.get<std::size_t>());
  return f;
}

/// Placeholders are variables t_k; in JSON they become `_tk` so they parse back as variables.
inline Term to_written(const Term& t) {
  Substitution s;
  for (auto id : var_ids(t)) s.bind(id, Term::var(id, "_t" + std::to_string(id)));
  return apply_subst(t, s);
}

inline Term from_written(const std::string& text) {
  Term t = parse_term(text, 1000000);
  Substitution s;
  for (const auto& v : variables(t)) {
    const std::string& n = v.var_name();
    if (n.size() < 3 || n.rfind("_t", 0) != 0) throw InputError("unexpected variable '" + n + "' in formula");
    s.bind(v.var_id(), placeholder(std::stoul(n.substr(2))));
  }
  return apply_subst(t, s);
}

inline std::string rel_str(OrderAtom::Rel r) {
  return r == OrderAtom::Rel::Gt ? ">" : r == OrderAtom::Rel::Eq ? "=" : "||";
}

inline OrderAtom::Rel rel_parse(const std::string& s) {
  if (s == ">") return OrderAtom::Rel::Gt;
  if (s == "=") return OrderAtom::Rel::Eq;
  if (s == "||") return OrderAtom::Rel::Inc;
  throw InputError("unknown relation '" + s + "'");
}

inline bool is_placeholder_name(const std::string& n) {
  return n.size() > 1 && n[0] == 't' && std::all_of(n.begin() + 1, n.end(), [](unsigned char c) { return std::isdigit(c); });
}

inline std::vector<Atom> shape_parse(const std::string& text) {
  std::vector<Atom> out;
  for (const auto& a : parse_goal(text, 1000000)) {
    Substitution s;
    for (const auto& v : variables(a.term()))
      if (v.var_name().size() > 1 && v.var_name()[0] == '_' && is_placeholder_name(v.var_name().substr(1)))
        s.bind(v.var_id(), placeholder(std::stoul(v.var_name().substr(2))));
    out.push_back(apply_subst(a, s));
  }
  return out;
}

inline std::string shape_str(const std::vector<Atom>& shape) {
  std::ostringstream os;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    Substitution s;
    for (const auto& v : variables(shape[i].term()))
      if (is_placeholder_name(v.var_name())) s.bind(v.var_id(), Term::var(v.var_id(), "_" + v.var_name()));
    os << (i ? ", " : "") << apply_subst(shape[i], s);
  }
  return os.str();
}

}  // namespace detail

inline json order_to_json(const OrderSpec& o) {
  json j;
  j["kind"] = o.kind == OrderSpec::Kind::Rpo ? "rpo" : o.kind == OrderSpec::Kind::NormBased ? "norm" : "property";
  j["filter"] = detail::family_to_json(o.filter);
  if (o.kind == OrderSpec::Kind::Rpo) {
    json prec = json::array();
    for (const auto& [a, b] : o.precedence.pairs()) prec.push_back({detail::sym_str(a), detail::sym_str(b)});
    j["precedence"] = prec;
    json st = json::object();
    for (const auto& [s, v] : o.status) st[detail::sym_str(s)] = v == Status::Lex ? "lex" : "mul";
    j["status"] = st;
  } else if (o.kind == OrderSpec::Kind::NormBased) {
    json n;
    n["name"] = o.norm.name;
    n["fallback"] = o.norm.fallback == NormDef::Fallback::Zero ? "zero" : "size";
    json rules = json::object();
    for (const auto& [s, r] : o.norm.rules)
      rules[detail::sym_str(s)] = {{"offset", r.offset}, {"positions", std::vector<std::size_t>(r.positions.begin(), r.positions.end())}};
    n["rules"] = rules;
    j["norm"] = n;
  }
  return j;
}

inline OrderSpec order_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  PositionFamily filter = detail::family_from_json(j.value("filter", json::object()));
  if (kind == "rpo") {
    std::vector<std::pair<Symbol, Symbol>> pairs;
    for (const auto& pr : j.at("precedence"))
      pairs.emplace_back(detail::sym_parse(pr.at(0).get<std::string>()), detail::sym_parse(pr.at(1).get<std::string>()));
    std::map<Symbol, Status> status;
    const json status_j = j.value("status", json::object());
    for (const auto& [k, v] : status_j.items())
      status[detail::sym_parse(k)] = v.get<std::string>() == "mul" ? Status::Multiset : Status::Lex;
    Precedence prec(std::move(pairs));
    if (!prec.acyclic()) throw InputError("precedence is cyclic");
    return OrderSpec::rpo(std::move(prec), std::move(filter), std::move(status));
  }
  if (kind == "norm") {
    const json& n = j.at("norm");
    NormDef d;
    d.name = n.value("name", "");
    d.fallback = n.value("fallback", "zero") == "size" ? NormDef::Fallback::Size : NormDef::Fallback::Zero;
    const json rules_j = n.value("rules", json::object());
    for (const auto& [k, v] : rules_j.items()) {
      NormRule r;
      r.offset = v.at("offset").get<long>();
      for (const auto& p : v.at("positions")) r.positions.insert(p.get<std::size_t>());
      d.rules[detail::sym_parse(k)] = r;
    }
    return OrderSpec::norm_based(std::move(d), std::move(filter));
  }
  throw InputError("certificate order must be rpo or norm, got '" + kind + "'");
}

inline json certificate_to_json(const ProofCertificate& c) {
  json j;
  j["mode"] = to_string(c.mode);
  json cs = json::array();
  for (const auto& a : c.call_set.atoms) {
    json args = json::array();
    for (auto v : a.args) args.push_back(to_string(v));
    cs.push_back({{"pred", detail::sym_str(a.pred)}, {"args", args}});
  }
  j["callSet"] = cs;
  j["rigidity"] = {{"ignoredPred", detail::family_to_json(c.rigidity.ignored_pred)},
                   {"ignoredFun", detail::family_to_json(c.rigidity.ignored_fun)}};
  json modes = json::object();
  for (const auto& [s, outs] : c.modes) {
    json m = json::array();
    for (bool o : outs) m.push_back(o ? "out" : "in");
    modes[detail::sym_str(s)] = m;
  }
  j["modes"] = modes;
  json cons = json::array();
  for (const auto& d : c.constraints) cons.push_back(d.str());
  j["constraints"] = cons;
  json rels = json::array();
  for (const auto& r : c.interarg) {
    json f = json::array();
    for (const auto& conj : r.formula) {
      json cj = json::array();
      for (const auto& a : conj)
        cj.push_back({{"rel", detail::rel_str(a.rel)},
                      {"lhs", to_string(detail::to_written(a.lhs))},
                      {"rhs", to_string(detail::to_written(a.rhs))}});
      f.push_back(cj);
    }
    rels.push_back({{"shape", detail::shape_str(r.shape)}, {"formula", f}, {"text", r.str()}});
  }
  j["interarg"] = rels;
  j["order"] = order_to_json(c.order);
  json just = json::array();
  for (const auto& x : c.per_constraint) just.push_back({{"constraint", x.constraint}, {"route", x.route}, {"lemmas", x.lemmas}});
  j["perConstraint"] = just;
  j["searchTrace"] = c.search_trace;
  return j;
}

/// Reads the replayable parts of a certificate; constraints are kept as
/// text only and recomputed on verification.
inline ProofCertificate certificate_from_json(const json& j, std::vector<std::string>* constraint_text = nullptr) {
  try {
    ProofCertificate c;
    std::string mode = j.at("mode").get<std::string>();
    if (mode != "rigid" && mode != "wellmoded") throw InputError("unknown mode '" + mode + "'");
    c.mode = mode == "rigid" ? Mode::Rigid : Mode::WellModed;
    for (const auto& a : j.at("callSet")) {
      AbstractAtom aa{detail::sym_parse(a.at("pred").get<std::string>()), {}};
      for (const auto& v : a.at("args")) {
        auto t = abstract_term_from_string(v.get<std::string>());
        if (!t) throw InputError("unknown abstract value '" + v.get<std::string>() + "'");
        aa.args.push_back(*t);
      }
      if (aa.args.size() != aa.pred.arity) throw InputError("call pattern arity mismatch for " + aa.pred.str());
      c.call_set.atoms.push_back(std::move(aa));
    }
    const json& rr = j.at("rigidity");
    c.rigidity.ignored_pred = detail::family_from_json(rr.at("ignoredPred"));
    c.rigidity.ignored_fun = detail::family_from_json(rr.at("ignoredFun"));
    const json modes_j = j.value("modes", json::object());
    for (const auto& [k, v] : modes_j.items()) {
      std::vector<bool> outs;
      for (const auto& m : v) outs.push_back(m.get<std::string>() == "out");
      c.modes[detail::sym_parse(k)] = outs;
    }
    if (constraint_text)
      for (const auto& s : j.value("constraints", json::array())) constraint_text->push_back(s.get<std::string>());
    for (const auto& r : j.at("interarg")) {
      InterargRelation rel;
      rel.shape = detail::shape_parse(r.at("shape").get<std::string>());
      for (const auto& conj : r.at("formula")) {
        std::vector<OrderAtom> cj;
        for (const auto& a : conj)
          cj.push_back({detail::rel_parse(a.at("rel").get<std::string>()), detail::from_written(a.at("lhs").get<std::string>()),
                        detail::from_written(a.at("rhs").get<std::string>())});
        rel.formula.push_back(std::move(cj));
      }
      if (rel.shape.empty() || rel.formula.empty()) throw InputError("empty interargument relation");
      c.interarg.push_back(std::move(rel));
    }
    c.order = order_from_json(j.at("order"));
    for (const auto& x : j.value("perConstraint", json::array()))
      c.per_constraint.push_back({x.at("constraint").get<std::size_t>(), x.at("route").get<std::string>(),
                                  x.at("lemmas").get<std::vector<std::string>>()});
    c.search_trace = j.value("searchTrace", std::size_t{0});
    return c;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed certificate: ") + e.what());
  }
}

inline void save_certificate(const ProofCertificate& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << certificate_to_json(c).dump(2) << '\n';
}

inline ProofCertificate load_certificate(const std::string& path, std::vector<std::string>* constraint_text = nullptr) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed certificate: ") + e.what());
  }
  return certificate_from_json(j, constraint_text);
}

// ---------------------------------------------------------------------------
// Verification

struct VerifyResult {
  bool ok = true;
  std::string failure;
  explicit operator bool() const noexcept { return ok; }
};

/// Representative instance of an abstract atom: variables wherever the
/// description admits them.
inline Atom representative(const AbstractAtom& a) {
  VarId next = 0;
  std::vector<Term> args;
  for (auto v : a.args) {
    switch (v) {
      case AbstractTerm::Free:
      case AbstractTerm::Any: args.push_back(Term::var(next++, "X")); break;
      case AbstractTerm::Ground: args.push_back(Term::constant("a")); break;
      case AbstractTerm::NilListGround: args.push_back(Term::list({Term::constant("a")})); break;
      case AbstractTerm::NilListAny: args.push_back(Term::list({Term::var(next++, "E")})); break;
    }
  }
  return Atom(a.pred, std::move(args));
}

inline VerifyResult verify_certificate(const Program& p, const ProofCertificate& cert,
                                       const std::vector<std::string>* constraint_text = nullptr) {
  auto fail = [](std::string m) { return VerifyResult{false, std::move(m)}; };
  if (!cert.order.concrete()) return fail("order is not concrete");
  if (cert.order.kind == OrderSpec::Kind::Rpo && !cert.order.precedence.acyclic()) return fail("precedence is cyclic");

  Analysis a;
  try {
    if (cert.mode == Mode::Rigid) {
      // the call set must cover the declared queries
      auto pats = query_patterns(p);
      if (!pats.empty()) {
        CallSet fresh = infer_call_set(p, pats);
        for (const auto& f : fresh.atoms) {
          const AbstractAtom* have = cert.call_set.find(f.pred);
          bool ok = have != nullptr;
          for (std::size_t i = 0; ok && i < f.args.size(); ++i) ok = leq(f.args[i], have->args[i]);
          if (!ok) return fail("call set does not cover " + to_string(f));
        }
      }
      RigidityRequirement need = rigidity_requirements(cert.call_set, p);
      const PositionFamily needed = need.combined();
      for (const auto& [s, ps] : needed.entries())
        for (auto i : ps)
          if (!cert.rigidity.ignores(s, i)) return fail("rigidity requirement misses " + s.str() + " position " + std::to_string(i));
      a = prepare_rigid(p, cert.call_set, cert.rigidity);
      for (const auto& aa : cert.call_set.atoms) {
        Atom rep = representative(aa);
        if (!is_rigid(cert.order, rep)) return fail("order is not rigid on " + to_string(aa));
      }
    } else {
      if (!wellmoded_check(p, cert.modes)) return fail("program is not well-moded under the recorded modes");
      a = prepare_wellmoded(p, cert.modes);
      const PositionFamily outs = output_positions(cert.modes);
      for (const auto& [s, ps] : outs.entries())
        for (auto i : ps)
          if (!cert.order.filter.contains(s, i)) return fail("order does not ignore output " + s.str() + " position " + std::to_string(i));
    }
  } catch (const Error& e) {
    return fail(e.what());
  }
  for (const auto& [s, ps] : a.filter.entries())
    for (auto i : ps)
      if (!cert.order.filter.contains(s, i) && cert.order.kind == OrderSpec::Kind::Rpo)
        return fail("order does not ignore " + s.str() + " position " + std::to_string(i));

  if (constraint_text) {
    if (constraint_text->size() != a.constraints.size())
      return fail("certificate lists " + std::to_string(constraint_text->size()) + " constraints, program yields " +
                  std::to_string(a.constraints.size()));
    for (std::size_t i = 0; i < a.constraints.size(); ++i)
      if ((*constraint_text)[i] != a.constraints[i].str())
        return fail("constraint " + std::to_string(i + 1) + " differs: " + a.constraints[i].str());
  }

  reduce_all(p, a, &cert.interarg);
  if (a.relations.size() != cert.interarg.size()) return fail("an interargument relation could not be re-discharged");

  auto sig = signature_in_order(p);
  DefinedFamilies fams = defined_families(cert.order, sig);
  for (std::size_t i = 0; i < a.constraints.size(); ++i) {
    const auto& c = a.constraints[i];
    if (c.layered) continue;
    if (!entails(cert.order, hypotheses_for(a.relations, c.conditions), c.head.term(), c.body.term()))
      return fail("constraint " + std::to_string(i + 1) + " fails: " + c.str());
  }
  for (std::size_t i = 0; i < a.relations.size(); ++i)
    for (const auto& d : a.relation_demands[i])
      if (!demand_holds(cert.order, d, fams))
        return fail("interargument relation " + a.relations[i].str() + " fails demand " + d.str());
  return {};
}

}  // namespace termlog
