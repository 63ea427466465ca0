#pragma once

// C-sequences and square-sequence variants: builders, clause validators and
// brute-force thread search on explicit finite-height data.
//
// Truncation conventions used throughout (they make "club" and "thread"
// meaningful on desk-scale data):
//   * a club in a limit ordinal must end in a fundamental-sequence tail
//     converging to it; a club in a successor b+1 must contain b;
//   * "unbounded in the domain bound" for a thread means: the sequence's top
//     assigned level is a limit point of the thread, and the thread ends in
//     a tail converging to the bound.

#include "narrow/ordinal.hpp"
#include "narrow/ordinal_set.hpp"
#include "narrow/report.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace narrow {

struct SequenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One club per ordinal. Either backed by the canonical fundamental-sequence
// rule or by an explicit finite table; successors get {a} when the successor
// rule is on.
class CSequence {
 public:
  static CSequence canonical(Ordinal bound, bool zero_rooted = false) {
    CSequence c;
    c.bound_ = std::move(bound);
    c.canonical_ = true;
    c.zero_rooted_ = zero_rooted;
    c.successor_rule_ = true;
    return c;
  }

  static CSequence explicit_table(Ordinal bound, std::map<Ordinal, OrdinalSet> table,
                                  bool successor_rule = true) {
    CSequence c;
    c.bound_ = std::move(bound);
    c.table_ = std::move(table);
    c.successor_rule_ = successor_rule;
    return c;
  }

  const Ordinal& bound() const { return bound_; }
  bool is_canonical() const { return canonical_; }
  bool zero_rooted() const { return zero_rooted_; }
  bool successor_rule() const { return successor_rule_; }

  bool has_club(const Ordinal& a) const {
    if (a.is_zero() || a > bound_) return false;
    if (a.is_successor() && successor_rule_ && table_.find(a) == table_.end()) return true;
    if (canonical_) return true;
    return table_.find(a) != table_.end();
  }

  OrdinalSet club(const Ordinal& a) const {
    if (a.is_zero() || a > bound_) throw SequenceError("no club assigned at " + a.to_string());
    auto it = table_.find(a);
    if (it != table_.end()) return it->second;
    if (a.is_successor() && successor_rule_) return OrdinalSet::single(a.predecessor());
    if (canonical_ && a.is_limit()) {
      OrdinalSet s;
      if (zero_rooted_) s.append_point(Ordinal(0));
      s.append_tail(a);
      return s;
    }
    throw SequenceError("no club assigned at " + a.to_string());
  }

  std::vector<Ordinal> explicit_levels() const {
    std::vector<Ordinal> r;
    for (const auto& [k, v] : table_) r.push_back(k);
    return r;
  }

 private:
  Ordinal bound_;
  bool canonical_ = false;
  bool zero_rooted_ = false;
  bool successor_rule_ = true;
  std::map<Ordinal, OrdinalSet> table_;
};

// Assigns to each of finitely many limit levels a nonempty collection of
// clubs; clubs are kept sorted, so reports never depend on insertion order.
class CollectionSequence {
 public:
  CollectionSequence(Ordinal bound, std::uint32_t lambda_bound)
      : bound_(std::move(bound)), lambda_bound_(lambda_bound) {}

  void assign(const Ordinal& level, std::vector<OrdinalSet> clubs) {
    std::sort(clubs.begin(), clubs.end());
    clubs.erase(std::unique(clubs.begin(), clubs.end(),
                            [](const OrdinalSet& a, const OrdinalSet& b) { return a == b; }),
                clubs.end());
    table_[level] = std::move(clubs);
  }
  void add_club(const Ordinal& level, const OrdinalSet& club) {
    auto& v = table_[level];
    for (const auto& c : v)
      if (c == club) return;
    v.push_back(club);
    std::sort(v.begin(), v.end());
  }

  const Ordinal& bound() const { return bound_; }
  std::uint32_t lambda_bound() const { return lambda_bound_; }
  const std::map<Ordinal, std::vector<OrdinalSet>>& table() const { return table_; }

  bool has_level(const Ordinal& a) const { return table_.find(a) != table_.end(); }
  const std::vector<OrdinalSet>& clubs_at(const Ordinal& a) const {
    auto it = table_.find(a);
    if (it == table_.end()) throw SequenceError("no level " + a.to_string());
    return it->second;
  }
  bool member_at(const Ordinal& a, const OrdinalSet& c) const {
    auto it = table_.find(a);
    if (it == table_.end()) return false;
    for (const auto& x : it->second)
      if (x == c) return true;
    return false;
  }

  std::vector<Ordinal> levels() const {
    std::vector<Ordinal> r;
    for (const auto& [k, v] : table_) r.push_back(k);
    return r;
  }

  // Designated top level: the largest assigned level unless overridden.
  void set_top_level(Ordinal t) { top_override_ = std::move(t); }
  std::optional<Ordinal> top_level() const {
    if (top_override_) return top_override_;
    if (table_.empty()) return std::nullopt;
    return table_.rbegin()->first;
  }

 private:
  Ordinal bound_;
  std::uint32_t lambda_bound_;
  std::map<Ordinal, std::vector<OrdinalSet>> table_;
  std::optional<Ordinal> top_override_;
};

// Matrix sequence: per limit level a starting index i(a) < kappa and clubs
// C_{a,i} for i(a) <= i < kappa.
class IndexedSequence {
 public:
  struct Level {
    std::uint32_t i_of = 0;
    std::vector<OrdinalSet> clubs;  // clubs[j] is C_{a, i_of + j}
  };

  IndexedSequence(Ordinal bound, std::uint32_t kappa) : bound_(std::move(bound)), kappa_(kappa) {}

  void assign(const Ordinal& level, std::uint32_t i_of, std::vector<OrdinalSet> clubs) {
    table_[level] = Level{i_of, std::move(clubs)};
  }

  const Ordinal& bound() const { return bound_; }
  std::uint32_t kappa() const { return kappa_; }
  const std::map<Ordinal, Level>& table() const { return table_; }
  bool has_level(const Ordinal& a) const { return table_.find(a) != table_.end(); }
  const Level& at(const Ordinal& a) const {
    auto it = table_.find(a);
    if (it == table_.end()) throw SequenceError("no level " + a.to_string());
    return it->second;
  }
  bool has_club(const Ordinal& a, std::uint32_t i) const {
    auto it = table_.find(a);
    if (it == table_.end()) return false;
    return i >= it->second.i_of && i < it->second.i_of + it->second.clubs.size();
  }
  const OrdinalSet& club(const Ordinal& a, std::uint32_t i) const {
    const Level& l = at(a);
    if (i < l.i_of || i >= l.i_of + l.clubs.size())
      throw SequenceError("no club at index " + std::to_string(i));
    return l.clubs[i - l.i_of];
  }

  std::vector<Ordinal> levels() const {
    std::vector<Ordinal> r;
    for (const auto& [k, v] : table_) r.push_back(k);
    return r;
  }

  void set_top_level(Ordinal t) { top_override_ = std::move(t); }
  std::optional<Ordinal> top_level() const {
    if (top_override_) return top_override_;
    if (table_.empty()) return std::nullopt;
    return table_.rbegin()->first;
  }

 private:
  Ordinal bound_;
  std::uint32_t kappa_;
  std::map<Ordinal, Level> table_;
  std::optional<Ordinal> top_override_;
};

inline CSequence build_canonical(const Ordinal& bound) { return CSequence::canonical(bound); }

// ---------------------------------------------------------------------------
// Validators

struct SquareVariant {
  enum class Kind { jensen, bracket } kind;
  Ordinal mu;  // jensen only: otp(C) <= mu

  static SquareVariant jensen(Ordinal mu) { return {Kind::jensen, std::move(mu)}; }
  static SquareVariant bracket() { return {Kind::bracket, Ordinal()}; }
};

namespace detail {
inline std::string club_witness(const Ordinal& level, const OrdinalSet& c) {
  return "level=" + level.to_string() + " club=" + c.to_string();
}
}  // namespace detail

// Clauses of the square-sequence definitions on explicit tables: each level
// holds between 1 and lambda_bound-1 clubs in it; whenever a is a limit point
// of C in the collection at b, C cap a must appear at a; jensen variants also
// bound every club's order type by mu. Thread non-existence is find_thread's
// job, not checked here.
inline ValidationReport validate_square(const CollectionSequence& seq, const SquareVariant& variant) {
  ValidationReport rep;
  for (const auto& [level, clubs] : seq.table()) {
    if (!level.is_limit())
      rep.add("malformed", "level=" + level.to_string() + " not a limit ordinal");
    if (clubs.empty() || clubs.size() >= seq.lambda_bound())
      rep.add("cardinality",
              "level=" + level.to_string() + " count=" + std::to_string(clubs.size()));
    for (const OrdinalSet& c : clubs) {
      if (!c.is_club_in(level)) rep.add("club", detail::club_witness(level, c));
      if (variant.kind == SquareVariant::Kind::jensen && c.order_type() > variant.mu)
        rep.add("order-type", detail::club_witness(level, c) + " otp=" + c.order_type().to_string());
      for (const Ordinal& a : c.interior_limit_points()) {
        if (!seq.has_level(a)) {
          rep.add("missing-level", "level=" + a.to_string() + " needed by club at " +
                                       level.to_string());
          continue;
        }
        if (!seq.member_at(a, c.prefix_below(a)))
          rep.add("coherence", "alpha=" + a.to_string() + " beta=" + level.to_string() +
                                   " club=" + c.to_string());
      }
    }
  }
  return rep;
}

// Clauses (1)-(5) of the indexed-square definition; clause (6) is delegated
// to find_thread.
inline ValidationReport validate_indexed(const IndexedSequence& seq) {
  ValidationReport rep;
  const std::uint32_t kappa = seq.kappa();
  for (const auto& [level, l] : seq.table()) {
    if (!level.is_limit())
      rep.add("malformed", "level=" + level.to_string() + " not a limit ordinal");
    if (l.i_of >= kappa)
      rep.add("clause1", "level=" + level.to_string() + " i=" + std::to_string(l.i_of));
    if (l.i_of + l.clubs.size() != kappa)
      rep.add("malformed", "level=" + level.to_string() + " clubs end at index " +
                               std::to_string(l.i_of + l.clubs.size()) + " expected " +
                               std::to_string(kappa));
    for (std::uint32_t i = l.i_of; i < l.i_of + l.clubs.size(); ++i) {
      const OrdinalSet& c = l.clubs[i - l.i_of];
      if (!c.is_club_in(level))
        rep.add("clause2", "level=" + level.to_string() + " i=" + std::to_string(i) + " club=" +
                               c.to_string());
      if (i + 1 < l.i_of + l.clubs.size() && !c.subset_of(l.clubs[i + 1 - l.i_of]))
        rep.add("clause3", "level=" + level.to_string() + " i=" + std::to_string(i));
    }
  }
  // Coherence (4) and linkedness (5) over assigned level pairs.
  for (const auto& [beta, lb] : seq.table()) {
    for (std::uint32_t i = lb.i_of; i < lb.i_of + lb.clubs.size(); ++i) {
      const OrdinalSet& c = lb.clubs[i - lb.i_of];
      for (const Ordinal& alpha : c.interior_limit_points()) {
        if (!seq.has_level(alpha)) {
          rep.add("missing-level",
                  "level=" + alpha.to_string() + " needed by C_(" + beta.to_string() + "," +
                      std::to_string(i) + ")");
          continue;
        }
        const auto& la = seq.at(alpha);
        if (la.i_of > i) {
          rep.add("clause4", "alpha=" + alpha.to_string() + " beta=" + beta.to_string() +
                                 " i=" + std::to_string(i) + " i(alpha)=" +
                                 std::to_string(la.i_of));
          continue;
        }
        if (!(c.prefix_below(alpha) == seq.club(alpha, i)))
          rep.add("clause4", "alpha=" + alpha.to_string() + " beta=" + beta.to_string() +
                                 " i=" + std::to_string(i));
      }
    }
  }
  for (const auto& [alpha, la] : seq.table()) {
    for (const auto& [beta, lb] : seq.table()) {
      if (!(alpha < beta)) continue;
      bool linked = false;
      for (std::uint32_t i = lb.i_of; i < lb.i_of + lb.clubs.size() && !linked; ++i)
        for (const Ordinal& p : lb.clubs[i - lb.i_of].interior_limit_points())
          if (p == alpha) linked = true;
      if (!linked)
        rep.add("clause5", "alpha=" + alpha.to_string() + " beta=" + beta.to_string());
    }
  }
  return rep;
}

// Partial single-club sequence over a domain A: the caller supplies the
// designated "cofinality >= kappa" set standing for S^{mu+}_{>=kappa} on the
// truncation. Checks domain inclusion, otp(C) <= mu and coherence.
inline ValidationReport validate_geq_kappa(const std::map<Ordinal, OrdinalSet>& assign,
                                           const std::vector<Ordinal>& designated_geq_kappa,
                                           const Ordinal& mu) {
  ValidationReport rep;
  for (const Ordinal& s : designated_geq_kappa)
    if (assign.find(s) == assign.end())
      rep.add("domain", "designated ordinal " + s.to_string() + " not in A");
  for (const auto& [a, c] : assign) {
    if (!a.is_limit()) rep.add("malformed", "level=" + a.to_string() + " not a limit ordinal");
    if (!c.is_club_in(a)) rep.add("club", detail::club_witness(a, c));
    if (c.order_type() > mu)
      rep.add("order-type", detail::club_witness(a, c) + " otp=" + c.order_type().to_string());
    for (const Ordinal& alpha : c.interior_limit_points()) {
      auto it = assign.find(alpha);
      if (it == assign.end()) {
        rep.add("clause3", "alpha=" + alpha.to_string() + " beta=" + a.to_string() +
                               " alpha not in A");
        continue;
      }
      if (!(c.prefix_below(alpha) == it->second))
        rep.add("clause3", "alpha=" + alpha.to_string() + " beta=" + a.to_string());
    }
  }
  return rep;
}

// Designated-set surrogate for the order-type square flag: every a in S has
// otp(C_a) = kappa and is a limit point of no later club among `levels`.
inline ValidationReport validate_otp_flag(const CSequence& seq, const Ordinal& kappa,
                                          const std::vector<Ordinal>& S,
                                          const std::vector<Ordinal>& levels) {
  ValidationReport rep;
  for (const Ordinal& a : S) {
    if (!seq.has_club(a)) {
      rep.add("domain", "no club at " + a.to_string());
      continue;
    }
    Ordinal otp = seq.club(a).order_type();
    if (otp != kappa)
      rep.add("order-type", "alpha=" + a.to_string() + " otp=" + otp.to_string());
    for (const Ordinal& b : levels) {
      if (!(a < b) || !seq.has_club(b)) continue;
      for (const Ordinal& p : seq.club(b).interior_limit_points())
        if (p == a) rep.add("limit-point", "alpha=" + a.to_string() + " beta=" + b.to_string());
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Thread search

enum class ThreadOutcome { found, none, cap_exceeded };

struct ThreadResult {
  ThreadOutcome outcome;
  std::optional<OrdinalSet> thread;
  std::optional<std::uint32_t> fixed_index;

  bool found() const { return outcome == ThreadOutcome::found; }
};

enum class ThreadMode { full, fixed_index };

namespace detail {
// Assemble C + {top} + (tail of bound above top).
inline std::optional<OrdinalSet> assemble_thread(const OrdinalSet& c, const Ordinal& top,
                                                 const Ordinal& bound) {
  if (!bound.is_limit() || !(top < bound)) return std::nullopt;
  try {
    OrdinalSet d = c.set_union(OrdinalSet::single(top));
    OrdinalSet filler;
    filler.append_tail_above(bound, top);
    return d.set_union(filler);
  } catch (const SetFormError&) {
    return std::nullopt;
  }
}
}  // namespace detail

// Thread through an explicit collection sequence, on the truncation reading:
// D is club in bound, the top assigned level is a limit point of D, and for
// every limit point a of D, D cap a is one of the clubs assigned at a.
inline bool is_thread(const CollectionSequence& seq, const OrdinalSet& d) {
  auto top = seq.top_level();
  if (!top) return false;
  if (!d.is_club_in(seq.bound())) return false;
  bool top_hit = false;
  for (const Ordinal& a : d.interior_limit_points()) {
    if (!d.contains(a)) return false;  // not closed (paranoia; club check covers it)
    if (a == *top) top_hit = true;
    if (!seq.has_level(a)) return false;
    if (!seq.member_at(a, d.prefix_below(a))) return false;
  }
  return top_hit;
}

// Same for indexed sequences; with a fixed index the same i must witness
// every limit point.
inline bool is_thread(const IndexedSequence& seq, const OrdinalSet& d,
                      std::optional<std::uint32_t> fixed) {
  auto top = seq.top_level();
  if (!top) return false;
  if (!d.is_club_in(seq.bound())) return false;
  bool top_hit = false;
  for (const Ordinal& a : d.interior_limit_points()) {
    if (a == *top) top_hit = true;
    if (!seq.has_level(a)) return false;
    OrdinalSet pre = d.prefix_below(a);
    const auto& l = seq.at(a);
    bool ok = false;
    if (fixed) {
      ok = seq.has_club(a, *fixed) && pre == seq.club(a, *fixed);
    } else {
      for (std::uint32_t i = l.i_of; i < l.i_of + l.clubs.size() && !ok; ++i)
        ok = pre == seq.club(a, i);
    }
    if (!ok) return false;
  }
  return top_hit;
}

// Search for a thread. Because D cap top must itself be one of the clubs
// assigned at the top level, candidates are exactly those clubs extended by
// the top level and a canonical filler tail; `cap` bounds how many candidates
// are examined and exhausting it is an outcome distinct from "none".
inline ThreadResult find_thread(const CollectionSequence& seq, std::size_t cap = 1 << 20) {
  auto top = seq.top_level();
  if (!top || !seq.has_level(*top)) return {ThreadOutcome::none, std::nullopt, std::nullopt};
  const auto& candidates = seq.clubs_at(*top);
  std::size_t examined = 0;
  for (const OrdinalSet& c : candidates) {
    if (examined++ == cap) return {ThreadOutcome::cap_exceeded, std::nullopt, std::nullopt};
    auto d = detail::assemble_thread(c, *top, seq.bound());
    if (d && is_thread(seq, *d)) return {ThreadOutcome::found, *d, std::nullopt};
  }
  return {ThreadOutcome::none, std::nullopt, std::nullopt};
}

inline ThreadResult find_thread(const IndexedSequence& seq, ThreadMode mode,
                                std::size_t cap = 1 << 20) {
  auto top = seq.top_level();
  if (!top || !seq.has_level(*top)) return {ThreadOutcome::none, std::nullopt, std::nullopt};
  const auto& l = seq.at(*top);
  std::size_t examined = 0;
  for (std::uint32_t i = l.i_of; i < l.i_of + l.clubs.size(); ++i) {
    if (examined++ == cap) return {ThreadOutcome::cap_exceeded, std::nullopt, std::nullopt};
    auto d = detail::assemble_thread(seq.club(*top, i), *top, seq.bound());
    if (!d) continue;
    if (mode == ThreadMode::fixed_index) {
      if (is_thread(seq, *d, i)) return {ThreadOutcome::found, *d, i};
    } else {
      if (is_thread(seq, *d, std::nullopt)) return {ThreadOutcome::found, *d, std::nullopt};
    }
  }
  return {ThreadOutcome::none, std::nullopt, std::nullopt};
}

}  // namespace narrow
