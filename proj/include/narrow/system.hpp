#pragma once

// Level-indexed node systems with families of transitive, tree-like,
// level-increasing relations: clause validation, the construction of a
// branchless system from a subadditive function, single-relation reduction,
// branch search, full-branch-set checking and Ramsey-style branch extraction.
//
// "Cofinal" on a truncation: a branch is cofinal iff it meets every
// designated top-marker level (all levels by default) and at least the
// configured fraction of all levels.

#include "narrow/ordinal.hpp"
#include "narrow/report.hpp"
#include "narrow/walks.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace narrow {

struct SystemError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Node {
  Ordinal level;
  std::uint32_t index = 0;

  friend bool operator==(const Node& a, const Node& b) {
    return a.index == b.index && a.level == b.level;
  }
  friend bool operator!=(const Node& a, const Node& b) { return !(a == b); }
  friend bool operator<(const Node& a, const Node& b) {
    int c = a.level.compare(b.level);
    if (c != 0) return c < 0;
    return a.index < b.index;
  }
  std::string to_string() const {
    return "(" + level.to_string() + "," + std::to_string(index) + ")";
  }
};

using Edge = std::pair<Node, Node>;

class System {
 public:
  void add_level(const Ordinal& level, std::uint32_t width) {
    if (width == 0) throw SystemError("level width must be positive");
    widths_[level] = width;
  }
  void ensure_relation(const std::string& name) { rels_[name]; }
  void add_edge(const std::string& rel, const Node& from, const Node& to) {
    rels_[rel].insert(Edge{from, to});
  }

  void set_top_markers(std::set<Ordinal> markers) { top_markers_ = std::move(markers); }
  // Intended cardinal parameters as aleph indices; narrowness is metadata on
  // a truncation, never computed from truncation sizes.
  void set_intended_alephs(Ordinal width_index, Ordinal height_index) {
    intended_ = std::make_pair(std::move(width_index), std::move(height_index));
  }

  const std::map<Ordinal, std::uint32_t>& widths() const { return widths_; }
  const std::map<std::string, std::set<Edge>>& relations() const { return rels_; }
  const std::optional<std::pair<Ordinal, Ordinal>>& intended_alephs() const { return intended_; }

  std::vector<Ordinal> levels() const {
    std::vector<Ordinal> r;
    for (const auto& [k, v] : widths_) r.push_back(k);
    return r;
  }
  std::uint32_t width_at(const Ordinal& level) const {
    auto it = widths_.find(level);
    if (it == widths_.end()) throw SystemError("no level " + level.to_string());
    return it->second;
  }
  bool has_level(const Ordinal& level) const { return widths_.find(level) != widths_.end(); }

  // Top markers; empty designation means every level is a marker.
  std::set<Ordinal> top_markers() const {
    if (!top_markers_.empty()) return top_markers_;
    std::set<Ordinal> all;
    for (const auto& [k, v] : widths_) all.insert(k);
    return all;
  }
  const std::set<Ordinal>& raw_top_markers() const { return top_markers_; }

  std::vector<Node> nodes() const {
    std::vector<Node> out;
    for (const auto& [level, w] : widths_)
      for (std::uint32_t i = 0; i < w; ++i) out.push_back(Node{level, i});
    return out;
  }

  bool has_edge(const std::string& rel, const Node& a, const Node& b) const {
    auto it = rels_.find(rel);
    return it != rels_.end() && it->second.count(Edge{a, b}) > 0;
  }
  bool comparable(const std::string& rel, const Node& a, const Node& b) const {
    return a == b || has_edge(rel, a, b) || has_edge(rel, b, a);
  }

  // width = max(level widths, relation count); height = number of levels.
  std::uint32_t width() const {
    std::uint32_t w = static_cast<std::uint32_t>(rels_.size());
    for (const auto& [k, v] : widths_) w = std::max(w, v);
    return w;
  }
  std::size_t height_levels() const { return widths_.size(); }

 private:
  std::map<Ordinal, std::uint32_t> widths_;
  std::map<std::string, std::set<Edge>> rels_;
  std::set<Ordinal> top_markers_;
  std::optional<std::pair<Ordinal, Ordinal>> intended_;
};

struct Branch {
  std::string relation;
  std::vector<Node> nodes;  // kept sorted by level

  std::set<Ordinal> level_support() const {
    std::set<Ordinal> s;
    for (const Node& n : nodes) s.insert(n.level);
    return s;
  }
};

inline bool is_branch(const System& s, const Branch& b) {
  if (s.relations().find(b.relation) == s.relations().end()) return false;
  for (const Node& n : b.nodes)
    if (!s.has_level(n.level) || n.index >= s.width_at(n.level)) return false;
  for (std::size_t i = 0; i < b.nodes.size(); ++i)
    for (std::size_t j = i + 1; j < b.nodes.size(); ++j)
      if (!s.comparable(b.relation, b.nodes[i], b.nodes[j])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// validate_system

inline ValidationReport validate_system(const System& s, bool strong = false) {
  ValidationReport rep;
  // malformed nodes
  for (const auto& [rel, edges] : s.relations())
    for (const Edge& e : edges)
      for (const Node& n : {e.first, e.second})
        if (!s.has_level(n.level) || n.index >= s.width_at(n.level))
          rep.add("malformed-node", rel + " " + n.to_string());
  if (s.relations().empty()) rep.add("relations", "no relations");

  for (const auto& [rel, edges] : s.relations()) {
    for (const Edge& e : edges)
      if (!(e.first.level < e.second.level))
        rep.add("clause3", rel + " " + e.first.to_string() + " -> " + e.second.to_string());
    // transitivity
    for (const Edge& e1 : edges)
      for (const Edge& e2 : edges) {
        if (!(e1.second == e2.first)) continue;
        if (!s.has_edge(rel, e1.first, e2.second))
          rep.add("transitivity", rel + " " + e1.first.to_string() + " -> " +
                                      e1.second.to_string() + " -> " + e2.second.to_string());
      }
    // tree-likeness: two predecessors of a node must be comparable
    for (const Edge& e1 : edges)
      for (const Edge& e2 : edges) {
        if (!(e1.second == e2.first || e1.second == e2.second)) continue;
        if (!(e1.second == e2.second)) continue;
        if (e1.first == e2.first) continue;
        if (!s.comparable(rel, e1.first, e2.first))
          rep.add("tree-like", rel + " " + e1.first.to_string() + " _|_ " + e2.first.to_string() +
                                   " below " + e1.second.to_string());
      }
  }

  // clause 4 / strong clause 4'
  std::vector<Ordinal> levels = s.levels();
  for (std::size_t i = 0; i < levels.size(); ++i)
    for (std::size_t j = i + 1; j < levels.size(); ++j) {
      bool connected = false;
      for (const auto& [rel, edges] : s.relations()) {
        for (const Edge& e : edges)
          if (e.first.level == levels[i] && e.second.level == levels[j]) {
            connected = true;
            break;
          }
        if (connected) break;
      }
      if (!connected)
        rep.add("clause4", levels[i].to_string() + " " + levels[j].to_string());
      if (strong) {
        for (std::uint32_t b1 = 0; b1 < s.width_at(levels[j]); ++b1) {
          bool hit = false;
          Node target{levels[j], b1};
          for (const auto& [rel, edges] : s.relations()) {
            for (const Edge& e : edges)
              if (e.first.level == levels[i] && e.second == target) {
                hit = true;
                break;
              }
            if (hit) break;
          }
          if (!hit)
            rep.add("clause4strong",
                    levels[i].to_string() + " " + levels[j].to_string() + " target " +
                        target.to_string());
        }
      }
    }

  rep.note("width " + std::to_string(s.width()));
  rep.note("height-levels " + std::to_string(s.height_levels()));
  if (s.intended_alephs()) {
    const auto& [wi, hi] = *s.intended_alephs();
    bool narrow = wi + Ordinal(1) < hi;
    rep.note(std::string("narrow-at-intended ") + (narrow ? "yes" : "no") + " width=aleph(" +
             wi.to_string() + ") height=aleph(" + hi.to_string() + ")");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// system_from_tree: wrap a level-respecting tree restriction; by the remark
// on admitting systems, only the level-connectedness clause needs checking.

struct TreeWrapResult {
  System system;
  bool admits = false;
  std::vector<std::pair<Ordinal, Ordinal>> missing_pairs;
};

inline TreeWrapResult system_from_tree(const std::vector<Edge>& tree_edges,
                                       const std::vector<Ordinal>& levels, std::uint32_t kappa) {
  System s;
  for (const Ordinal& l : levels) s.add_level(l, kappa);
  s.ensure_relation("T");
  for (const Edge& e : tree_edges) s.add_edge("T", e.first, e.second);
  ValidationReport rep = validate_system(s);
  for (const auto& v : rep.violations) {
    if (v.clause == "tree-like" || v.clause == "transitivity" || v.clause == "clause3" ||
        v.clause == "malformed-node")
      throw SystemError("input is not a level-respecting tree restriction: " + v.clause + " " +
                        v.witness);
  }
  TreeWrapResult r{std::move(s), true, {}};
  for (const auto& v : rep.violations)
    if (v.clause == "clause4") {
      r.admits = false;
      auto sp = v.witness.find(' ');
      r.missing_pairs.emplace_back(Ordinal::parse(v.witness.substr(0, sp)),
                                   Ordinal::parse(v.witness.substr(sp + 1)));
    }
  return r;
}

// ---------------------------------------------------------------------------
// from_subadditive: nodes I x kappa, one relation with
// (a0,b) < (a1,b) iff b >= d({a0,a1}). Transitivity and tree-likeness follow
// from the two subadditivity properties; the construction emits the edge set
// regardless and leaves judging to validate_system.

inline System from_subadditive(const SubadditiveFunction& d, std::uint32_t kappa) {
  System s;
  const auto& I = d.domain();
  for (const Ordinal& a : I) s.add_level(a, kappa);
  s.ensure_relation("R");
  for (std::size_t i = 0; i < I.size(); ++i)
    for (std::size_t j = i + 1; j < I.size(); ++j) {
      const Ordinal& v = d.at(I[i], I[j]);
      for (std::uint32_t b = 0; b < kappa; ++b)
        if (Ordinal(b) >= v) s.add_edge("R", Node{I[i], b}, Node{I[j], b});
    }
  return s;
}

// ---------------------------------------------------------------------------
// reduce_to_single_relation: pair the node index with the relation index via
// beta = beta1 * kappa_max + beta0; edges demand equal relation parts. On
// finite truncations the paired width is the product kappa_max * |R|.

struct ReductionResult {
  System reduced;
  std::uint32_t kappa_max = 0;
  std::uint32_t relation_count = 0;
  std::vector<std::string> relation_names;  // index -> original name

  std::pair<Node, std::string> to_original(const Node& n) const {
    std::uint32_t b1 = n.index / kappa_max;
    std::uint32_t b0 = n.index % kappa_max;
    return {Node{n.level, b0}, relation_names[b1]};
  }
  Node to_reduced(const Node& n, std::uint32_t rel_index) const {
    return Node{n.level, rel_index * kappa_max + n.index};
  }
};

inline ReductionResult reduce_to_single_relation(const System& s) {
  ReductionResult r;
  for (const auto& [level, w] : s.widths()) r.kappa_max = std::max(r.kappa_max, w);
  for (const auto& [name, edges] : s.relations()) r.relation_names.push_back(name);
  r.relation_count = static_cast<std::uint32_t>(r.relation_names.size());
  if (r.relation_count == 0) throw SystemError("reduction needs at least one relation");

  System out;
  const std::uint32_t paired = r.kappa_max * r.relation_count;
  for (const auto& [level, w] : s.widths()) out.add_level(level, paired);
  out.set_top_markers(s.raw_top_markers());
  out.ensure_relation("R");
  for (std::uint32_t xi = 0; xi < r.relation_count; ++xi) {
    const auto& edges = s.relations().at(r.relation_names[xi]);
    for (const Edge& e : edges)
      out.add_edge("R", r.to_reduced(e.first, xi), r.to_reduced(e.second, xi));
  }
  r.reduced = std::move(out);
  return r;
}

// ---------------------------------------------------------------------------
// Branch search. Exhaustive over chains (memoized chain extension), with the
// finitized cofinality criterion; also reports the longest branch found per
// relation, ties resolved lexicographically.

struct BranchSearchResult {
  std::optional<Branch> cofinal;
  std::map<std::string, Branch> longest_per_relation;
};

namespace detail {
inline bool lex_less(const std::vector<Node>& a, const std::vector<Node>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}
}  // namespace detail

inline BranchSearchResult find_cofinal_branch(const System& s, double fraction = 1.0) {
  BranchSearchResult result;
  std::vector<Ordinal> levels = s.levels();
  std::vector<Node> nodes = s.nodes();
  if (nodes.size() > 30) throw SystemError("branch search supports at most 30 nodes");
  const std::set<Ordinal> markers = s.top_markers();
  const std::size_t need_levels = static_cast<std::size_t>(
      std::max(0.0, fraction) * static_cast<double>(levels.size()) + 0.999999);

  auto meets_criterion = [&](const std::vector<Node>& chain) {
    std::set<Ordinal> met;
    for (const Node& n : chain) met.insert(n.level);
    if (met.size() < need_levels) return false;
    for (const Ordinal& m : markers)
      if (met.find(m) == met.end()) return false;
    return true;
  };

  for (const auto& [rel, edges] : s.relations()) {
    Branch longest{rel, {}};
    std::optional<Branch> cofinal;
    std::vector<Node> chain;
    // DFS over pairwise-comparable node sets in node order (one node per
    // level follows from comparability plus level increase); first hit in
    // DFS order is the deterministic winner.
    auto dfs = [&](auto&& self, std::size_t from) -> void {
      if (chain.size() > longest.nodes.size() ||
          (chain.size() == longest.nodes.size() &&
           detail::lex_less(chain, longest.nodes)))
        longest.nodes = chain;
      if (!cofinal && meets_criterion(chain)) cofinal = Branch{rel, chain};
      for (std::size_t i = from; i < nodes.size(); ++i) {
        if (!chain.empty() && !(chain.back().level < nodes[i].level)) continue;
        bool ok = true;
        for (const Node& u : chain)
          if (!s.comparable(rel, u, nodes[i])) {
            ok = false;
            break;
          }
        if (!ok) continue;
        chain.push_back(nodes[i]);
        self(self, i + 1);
        chain.pop_back();
      }
    };
    dfs(dfs, 0);
    if (longest.nodes.empty() && !nodes.empty()) longest.nodes = {nodes.front()};
    result.longest_per_relation[rel] = longest;
    if (!result.cofinal && cofinal) result.cofinal = cofinal;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Full sets of branches

struct FullSetCheck {
  bool full = false;
  std::optional<std::size_t> bad_branch;  // clause 1 witness
  std::optional<Ordinal> bad_level;       // clause 2 witness
};

inline FullSetCheck is_full_branch_set(const System& s, const std::vector<Branch>& family) {
  FullSetCheck r;
  for (std::size_t g = 0; g < family.size(); ++g)
    if (!is_branch(s, family[g])) {
      r.bad_branch = g;
      return r;
    }
  for (const Ordinal& level : s.levels()) {
    bool met = false;
    for (const Branch& b : family) {
      for (const Node& n : b.nodes)
        if (n.level == level) {
          met = true;
          break;
        }
      if (met) break;
    }
    if (!met) {
      r.bad_level = level;
      return r;
    }
  }
  r.full = true;
  return r;
}

// ---------------------------------------------------------------------------
// ramsey_branch: colour each level pair by the least witnessing index pair,
// take the largest monochromatic level set H, and read the branch off H
// minus its top level; tree-likeness forces comparability.

struct RamseyResult {
  Branch branch;
  std::pair<std::uint32_t, std::uint32_t> colour;
  std::vector<Ordinal> mono_levels;
  std::size_t colours_used = 0;
  std::vector<std::string> transcript;
};

inline RamseyResult ramsey_branch(const System& s) {
  if (s.relations().size() != 1) throw SystemError("ramsey_branch needs a one-relation system");
  const std::string rel = s.relations().begin()->first;
  std::vector<Ordinal> levels = s.levels();
  if (levels.size() > 30) throw SystemError("ramsey_branch supports at most 30 levels");

  RamseyResult out;
  std::map<std::pair<std::size_t, std::size_t>, std::pair<std::uint32_t, std::uint32_t>> colour;
  std::set<std::pair<std::uint32_t, std::uint32_t>> used;
  for (std::size_t i = 0; i < levels.size(); ++i)
    for (std::size_t j = i + 1; j < levels.size(); ++j) {
      std::optional<std::pair<std::uint32_t, std::uint32_t>> c;
      for (std::uint32_t b0 = 0; b0 < s.width_at(levels[i]) && !c; ++b0)
        for (std::uint32_t b1 = 0; b1 < s.width_at(levels[j]); ++b1)
          if (s.has_edge(rel, Node{levels[i], b0}, Node{levels[j], b1})) {
            c = std::make_pair(b0, b1);
            break;
          }
      if (!c)
        throw SystemError("colouring undefined: no edge between levels " +
                          levels[i].to_string() + " and " + levels[j].to_string());
      colour[{i, j}] = *c;
      used.insert(*c);
      out.transcript.push_back("f(" + levels[i].to_string() + "," + levels[j].to_string() +
                               ") = (" + std::to_string(c->first) + "," +
                               std::to_string(c->second) + ")");
    }
  out.colours_used = used.size();

  // largest monochromatic subset; ties: smaller colour, then lexicographically
  // least level subset
  std::uint32_t best_mask = 0;
  std::optional<std::pair<std::uint32_t, std::uint32_t>> best_colour;
  const std::uint32_t full = (1u << levels.size()) - 1;
  for (std::uint32_t m = 1; m <= full; ++m) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < levels.size(); ++i)
      if (m & (1u << i)) idx.push_back(i);
    if (idx.size() < 2) continue;
    std::optional<std::pair<std::uint32_t, std::uint32_t>> c;
    bool mono = true;
    for (std::size_t a = 0; a < idx.size() && mono; ++a)
      for (std::size_t b = a + 1; b < idx.size() && mono; ++b) {
        auto cc = colour.at({idx[a], idx[b]});
        if (!c)
          c = cc;
        else if (*c != cc)
          mono = false;
      }
    if (!mono) continue;
    std::size_t sz = idx.size();
    std::size_t best_sz = static_cast<std::size_t>(__builtin_popcount(best_mask));
    if (sz > best_sz || (sz == best_sz && best_colour && (*c < *best_colour)) ||
        (sz == best_sz && best_colour && *c == *best_colour && m < best_mask)) {
      best_mask = m;
      best_colour = c;
    }
  }

  if (!best_colour) {
    // a single level (or none): empty branch at colour (0,0)
    out.colour = {0, 0};
    out.branch = Branch{rel, {}};
    out.transcript.push_back("H = {} colour=(0,0)");
    return out;
  }
  out.colour = *best_colour;
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (best_mask & (1u << i)) out.mono_levels.push_back(levels[i]);
  std::string hline = "H = {";
  for (std::size_t i = 0; i < out.mono_levels.size(); ++i)
    hline += (i ? "," : "") + out.mono_levels[i].to_string();
  hline += "} colour=(" + std::to_string(out.colour.first) + "," +
           std::to_string(out.colour.second) + ")";
  out.transcript.push_back(hline);

  out.branch.relation = rel;
  for (std::size_t i = 0; i + 1 < out.mono_levels.size(); ++i)
    out.branch.nodes.push_back(Node{out.mono_levels[i], out.colour.first});
  return out;
}

}  // namespace narrow
