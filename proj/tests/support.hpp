#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "termlog/termlog.hpp"

namespace termlog::testing {

inline std::string corpus_path(const std::string& file) { return std::string(TERMLOG_CORPUS_DIR) + "/" + file; }

inline Program load(const std::string& file) {
  std::ifstream in(corpus_path(file));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str());
}

inline Term T(const std::string& s) { return parse_term(s); }
inline Atom A(const std::string& s) { return parse_atom(s); }

/// Signature {a/0, s/1, ./2, g/2}.
inline std::vector<Symbol> small_signature() { return {{"a", 0}, {"s", 1}, kCons, {"g", 2}}; }

/// Every term over `sig` plus variables X0..X(vars-1) with at most `max_size` symbols.
inline std::vector<Term> enumerate_terms(const std::vector<Symbol>& sig, std::size_t max_size, int vars) {
  std::vector<std::vector<Term>> by_size(max_size + 1);
  for (int v = 0; v < vars; ++v) by_size[1].push_back(Term::var(v, "X" + std::to_string(v)));
  for (const auto& f : sig)
    if (f.arity == 0) by_size[1].push_back(Term::constant(f.name));
  for (std::size_t n = 2; n <= max_size; ++n)
    for (const auto& f : sig) {
      if (f.arity == 1)
        for (const auto& t : by_size[n - 1]) by_size[n].push_back(Term::app(f, {t}));
      if (f.arity == 2)
        for (std::size_t k = 1; k + 1 < n; ++k)
          for (const auto& l : by_size[k])
            for (const auto& r : by_size[n - 1 - k]) by_size[n].push_back(Term::app(f, {l, r}));
    }
  std::vector<Term> out;
  for (const auto& layer : by_size) out.insert(out.end(), layer.begin(), layer.end());
  return out;
}

inline std::vector<Term> ground_only(const std::vector<Term>& ts) {
  std::vector<Term> out;
  for (const auto& t : ts)
    if (t.is_ground()) out.push_back(t);
  return out;
}

}  // namespace termlog::testing
