#pragma once

#include <map>
#include <set>
#include <vector>

#include "termlog/term.hpp"

namespace termlog {

/// Predicate dependency relations: refers-to, its reflexive-transitive
/// closure (depends-on) and mutual recursion classes.
class DepGraph {
 public:
  explicit DepGraph(const Program& p) : preds_(p.predicates()) {
    for (const auto& s : preds_) depends_[s].insert(s);
    for (const auto& c : p.clauses)
      for (const auto& b : c.body) {
        refers_[c.head.pred()].insert(b.pred());
        depends_[c.head.pred()].insert(b.pred());
      }
    // Warshall-style closure; predicate counts are small.
    for (const auto& k : preds_)
      for (const auto& i : preds_)
        if (depends_[i].count(k))
          for (const auto& j : depends_[k]) depends_[i].insert(j);
  }

  const std::vector<Symbol>& predicates() const noexcept { return preds_; }

  bool refers(const Symbol& p, const Symbol& q) const {
    auto it = refers_.find(p);
    return it != refers_.end() && it->second.count(q);
  }

  /// p ⊒ q.
  bool depends(const Symbol& p, const Symbol& q) const {
    if (p == q) return true;
    auto it = depends_.find(p);
    return it != depends_.end() && it->second.count(q);
  }

  /// p ≃ q.
  bool mutual(const Symbol& p, const Symbol& q) const { return depends(p, q) && depends(q, p); }

  /// p ⊐ q.
  bool strictly_above(const Symbol& p, const Symbol& q) const { return depends(p, q) && !depends(q, p); }

  /// Mutual recursion classes, each listed in first-occurrence order.
  std::vector<std::vector<Symbol>> classes() const {
    std::vector<std::vector<Symbol>> out;
    std::set<Symbol> seen;
    for (const auto& p : preds_) {
      if (seen.count(p)) continue;
      std::vector<Symbol> cls;
      for (const auto& q : preds_)
        if (mutual(p, q)) {
          cls.push_back(q);
          seen.insert(q);
        }
      out.push_back(std::move(cls));
    }
    return out;
  }

 private:
  std::vector<Symbol> preds_;
  std::map<Symbol, std::set<Symbol>> refers_;
  std::map<Symbol, std::set<Symbol>> depends_;
};

inline DepGraph dependency_graph(const Program& p) { return DepGraph(p); }

}  // namespace termlog
