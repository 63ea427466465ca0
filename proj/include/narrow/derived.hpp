#pragma once

// Finite posets, monotone forcing-style names for systems, and the derived
// system whose relations are indexed by (relation, condition) pairs with
// edges given by the deciding conditions. "Generic filter" is finitized as a
// maximal filter; on a finite poset those are exactly the principal up-sets
// of minimal elements.

#include "narrow/ordinal.hpp"
#include "narrow/report.hpp"
#include "narrow/system.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace narrow {

struct PosetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class FinitePoset {
 public:
  // Relations list pairs (p, q) meaning p <= q; the reflexive-transitive
  // closure is taken. Must be antisymmetric and have a maximum element.
  static FinitePoset make(std::vector<std::string> elements,
                          const std::vector<std::pair<std::string, std::string>>& below) {
    FinitePoset P;
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    P.names_ = std::move(elements);
    const std::size_t n = P.names_.size();
    if (n == 0) throw PosetError("poset needs at least one element");
    P.le_.assign(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) P.le_[i][i] = true;
    for (const auto& [p, q] : below) P.le_[P.index(p)][P.index(q)] = true;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (P.le_[i][k] && P.le_[k][j]) P.le_[i][j] = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (P.le_[i][j] && P.le_[j][i])
          throw PosetError("not antisymmetric: " + P.names_[i] + " and " + P.names_[j]);
    bool has_one = false;
    for (std::size_t j = 0; j < n && !has_one; ++j) {
      bool top = true;
      for (std::size_t i = 0; i < n; ++i) top = top && P.le_[i][j];
      if (top) {
        P.one_ = j;
        has_one = true;
      }
    }
    if (!has_one) throw PosetError("poset has no maximum element");
    return P;
  }

  static FinitePoset trivial() { return make({"1"}, {}); }

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  std::size_t index(const std::string& name) const {
    auto it = std::lower_bound(names_.begin(), names_.end(), name);
    if (it == names_.end() || *it != name) throw PosetError("unknown element " + name);
    return static_cast<std::size_t>(it - names_.begin());
  }
  const std::string& name(std::size_t i) const { return names_[i]; }
  bool leq(std::size_t p, std::size_t q) const { return le_[p][q]; }
  std::size_t one() const { return one_; }

  std::vector<std::size_t> minimal_elements() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i) {
      bool minimal = true;
      for (std::size_t j = 0; j < size() && minimal; ++j)
        if (j != i && le_[j][i]) minimal = false;
      if (minimal) out.push_back(i);
    }
    return out;
  }

  // Down-sets, for systematic name enumeration.
  std::vector<std::vector<bool>> down_sets() const {
    std::vector<std::vector<bool>> out;
    const std::size_t n = size();
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
      std::vector<bool> s(n, false);
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i)
        if (m & (1u << i)) s[i] = true;
      for (std::size_t i = 0; i < n && ok; ++i)
        for (std::size_t j = 0; j < n && ok; ++j)
          if (s[i] && le_[j][i] && !s[j]) ok = false;
      if (ok) out.push_back(std::move(s));
    }
    return out;
  }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<bool>> le_;
  std::size_t one_ = 0;
};

// A name: for each relation index and node pair, the set of conditions
// forcing the edge. Downward closure (stronger conditions keep decisions) is
// an invariant validated rather than assumed; close_downward() normalizes.
class SystemName {
 public:
  SystemName(std::map<Ordinal, std::uint32_t> widths, std::uint32_t tau)
      : widths_(std::move(widths)), tau_(tau) {
    if (tau_ == 0) throw PosetError("a name needs at least one relation index");
  }

  const std::map<Ordinal, std::uint32_t>& widths() const { return widths_; }
  std::uint32_t tau() const { return tau_; }

  void add_forcing(std::size_t p, std::uint32_t i, const Node& from, const Node& to) {
    decided_[Key{i, from, to}].insert(p);
  }
  void close_downward(const FinitePoset& P) {
    for (auto& [k, ps] : decided_) {
      std::set<std::size_t> closed = ps;
      for (std::size_t p : ps)
        for (std::size_t q = 0; q < P.size(); ++q)
          if (P.leq(q, p)) closed.insert(q);
      ps = std::move(closed);
    }
  }

  struct Key {
    std::uint32_t rel;
    Node from, to;
    bool operator<(const Key& o) const {
      if (rel != o.rel) return rel < o.rel;
      if (from != o.from) return from < o.from;
      return to < o.to;
    }
  };

  const std::map<Key, std::set<std::size_t>>& decided() const { return decided_; }

  bool forces(std::size_t p, std::uint32_t i, const Node& from, const Node& to) const {
    auto it = decided_.find(Key{i, from, to});
    return it != decided_.end() && it->second.count(p) > 0;
  }

 private:
  std::map<Ordinal, std::uint32_t> widths_;
  std::uint32_t tau_;
  std::map<Key, std::set<std::size_t>> decided_;
};

// Interpretation along the maximal filter generated by a minimal element m:
// edges decided by any member of the filter; by downward closure that is
// exactly the edges decided at m.
inline System interpret(const SystemName& N, const FinitePoset& P, std::size_t min_elem) {
  System s;
  for (const auto& [level, w] : N.widths()) s.add_level(level, w);
  for (std::uint32_t i = 0; i < N.tau(); ++i) s.ensure_relation("R" + std::to_string(i));
  for (const auto& [key, ps] : N.decided()) {
    bool in_filter = false;
    for (std::size_t p : ps)
      if (P.leq(min_elem, p)) in_filter = true;
    if (in_filter) s.add_edge("R" + std::to_string(key.rel), key.from, key.to);
  }
  return s;
}

// Downward-closure and level-increase checks, then per-maximal-filter system
// validation of the interpretation.
inline ValidationReport validate_name(const SystemName& N, const FinitePoset& P) {
  ValidationReport rep;
  for (const auto& [key, ps] : N.decided()) {
    if (!(key.from.level < key.to.level))
      rep.add("level-increase", "i=" + std::to_string(key.rel) + " " + key.from.to_string() +
                                    " -> " + key.to.to_string());
    for (std::size_t p : ps)
      for (std::size_t q = 0; q < P.size(); ++q)
        if (P.leq(q, p) && ps.count(q) == 0)
          rep.add("downward-closure", "p=" + P.name(p) + " q=" + P.name(q) + " i=" +
                                          std::to_string(key.rel) + " " + key.from.to_string() +
                                          " -> " + key.to.to_string());
  }
  for (std::size_t m : P.minimal_elements()) {
    ValidationReport inner = validate_system(interpret(N, P, m));
    for (const auto& v : inner.violations)
      rep.add("interpretation", "filter=" + P.name(m) + " " + v.clause + " " + v.witness);
  }
  return rep;
}

struct InvalidNameError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The derived system: relations R(i,p) for i < tau and p in P, with an edge
// under R(i,p) exactly when p forces it. Relation count is tau * |P| on the
// finite truncation.
inline System derive_system(const SystemName& N, const FinitePoset& P, bool require_valid = true) {
  if (require_valid) {
    ValidationReport rep = validate_name(N, P);
    if (!rep.valid()) throw InvalidNameError("invalid name: " + rep.violations[0].clause + " " +
                                             rep.violations[0].witness);
  }
  System s;
  for (const auto& [level, w] : N.widths()) s.add_level(level, w);
  for (std::uint32_t i = 0; i < N.tau(); ++i)
    for (std::size_t p = 0; p < P.size(); ++p)
      s.ensure_relation("R(" + std::to_string(i) + "," + P.name(p) + ")");
  for (const auto& [key, ps] : N.decided())
    for (std::size_t p : ps)
      s.add_edge("R(" + std::to_string(key.rel) + "," + P.name(p) + ")", key.from, key.to);
  return s;
}

struct TransferReport {
  bool ok = true;
  std::size_t branches_checked = 0;
  std::vector<std::string> failures;
};

// For every branch of the derived system through R(i,p) and every maximal
// filter containing p, the branch is a branch of the interpretation through
// relation i. This is the module's core correctness property at finite
// scale; it must never fail for downward-closed names.
inline TransferReport branch_transfer_check(const SystemName& N, const FinitePoset& P) {
  TransferReport rep;
  System derived = derive_system(N, P, /*require_valid=*/false);
  std::vector<Node> nodes = derived.nodes();
  if (nodes.size() > 20) throw PosetError("branch_transfer_check supports at most 20 nodes");
  const std::size_t n = nodes.size();
  const std::uint32_t full = n == 0 ? 0 : (1u << n) - 1;

  std::vector<std::size_t> minimals = P.minimal_elements();

  // comparability bitmasks: comp[k] = nodes comparable with node k
  auto comp_masks = [&](const System& s, const std::string& rel) {
    std::vector<std::uint32_t> comp(n, 0);
    for (std::size_t a = 0; a < n; ++a) {
      comp[a] |= 1u << a;
      for (std::size_t b = a + 1; b < n; ++b)
        if (s.comparable(rel, nodes[a], nodes[b])) {
          comp[a] |= 1u << b;
          comp[b] |= 1u << a;
        }
    }
    return comp;
  };
  auto is_chain = [&](const std::vector<std::uint32_t>& comp, std::uint32_t mask) {
    for (std::uint32_t rest = mask; rest;) {
      std::uint32_t k = static_cast<std::uint32_t>(__builtin_ctz(rest));
      rest &= rest - 1;
      if (mask & ~comp[k]) return false;
    }
    return true;
  };

  // interpretation comparability per (relation index, minimal element)
  std::map<std::pair<std::uint32_t, std::size_t>, std::vector<std::uint32_t>> icomp;
  for (std::size_t m : minimals) {
    System interp_m = interpret(N, P, m);
    for (std::uint32_t i = 0; i < N.tau(); ++i)
      icomp[{i, m}] = comp_masks(interp_m, "R" + std::to_string(i));
  }

  for (std::uint32_t i = 0; i < N.tau(); ++i) {
    for (std::size_t p = 0; p < P.size(); ++p) {
      const std::string rel = "R(" + std::to_string(i) + "," + P.name(p) + ")";
      std::vector<std::uint32_t> comp = comp_masks(derived, rel);
      for (std::uint32_t mask = 1; mask <= full; ++mask) {
        if (!is_chain(comp, mask)) continue;
        ++rep.branches_checked;
        for (std::size_t m : minimals) {
          if (!P.leq(m, p)) continue;  // the filter must contain p
          if (!is_chain(icomp.at({i, m}), mask)) {
            rep.ok = false;
            rep.failures.push_back("relation " + rel + " branch mask " + std::to_string(mask) +
                                   " not a branch in filter " + P.name(m));
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace narrow
