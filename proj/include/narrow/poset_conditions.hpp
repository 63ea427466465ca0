#pragma once

// Validators for conditions of the square-adding and threading posets, plus
// the end-extension order between pairs of conditions. Candidates are given
// as explicit finite data; cofinality-based clauses take a caller-supplied
// classification of the ordinals in range.

#include "narrow/csequence.hpp"
#include "narrow/ordinal.hpp"
#include "narrow/ordinal_set.hpp"
#include "narrow/report.hpp"

#include <map>
#include <optional>
#include <vector>

namespace narrow {

// A condition of the square-forcing kind: clubs assigned to every limit
// ordinal up to gamma.
struct SquareCondition {
  Ordinal gamma;
  std::map<Ordinal, std::vector<OrdinalSet>> clubs;
};

namespace detail {
// Limit ordinals <= gamma, enumerable on the truncations we care about
// (gamma < w^2, so limits are w*k). Returns nullopt when not enumerable.
inline std::optional<std::vector<Ordinal>> limits_up_to(const Ordinal& gamma) {
  if (gamma >= Ordinal::omega_pow(Ordinal(2))) return std::nullopt;
  std::vector<Ordinal> r;
  Ordinal w = Ordinal::omega();
  for (Ordinal a = w; a <= gamma; a += w) r.push_back(a);
  return r;
}
}  // namespace detail

// S(mu,<lambda): clubs of order type <= mu, collection sizes in [1, lambda),
// coherence at interior limit points. With `bound_otp` off this is the
// Q(kappa,<lambda) condition validator (no order-type clause).
inline ValidationReport validate_square_condition(const SquareCondition& p, const Ordinal& mu,
                                                  std::uint32_t lambda_bound, bool bound_otp) {
  ValidationReport rep;
  if (auto limits = detail::limits_up_to(p.gamma)) {
    for (const Ordinal& a : *limits)
      if (p.clubs.find(a) == p.clubs.end())
        rep.add("totality", "limit " + a.to_string() + " <= gamma has no clubs");
  } else {
    rep.note("totality not checked (gamma too large to enumerate)");
  }
  for (const auto& [a, cs] : p.clubs) {
    if (a > p.gamma) rep.add("domain", "level " + a.to_string() + " above gamma");
    if (!a.is_limit()) rep.add("malformed", "level " + a.to_string() + " not a limit");
    if (cs.empty() || cs.size() >= lambda_bound)
      rep.add("cardinality", "level=" + a.to_string() + " count=" + std::to_string(cs.size()));
    for (const OrdinalSet& c : cs) {
      if (!c.is_club_in(a)) rep.add("club", detail::club_witness(a, c));
      if (bound_otp && c.order_type() > mu)
        rep.add("order-type", detail::club_witness(a, c) + " otp=" + c.order_type().to_string());
      for (const Ordinal& alpha : c.interior_limit_points()) {
        auto it = p.clubs.find(alpha);
        if (it == p.clubs.end()) {
          rep.add("coherence", "alpha=" + alpha.to_string() + " beta=" + a.to_string() +
                                   " alpha unassigned");
          continue;
        }
        OrdinalSet pre = c.prefix_below(alpha);
        bool hit = false;
        for (const OrdinalSet& x : it->second)
          if (x == pre) hit = true;
        if (!hit)
          rep.add("coherence", "alpha=" + alpha.to_string() + " beta=" + a.to_string());
      }
    }
  }
  return rep;
}

inline ValidationReport validate_s_condition(const SquareCondition& p, const Ordinal& mu,
                                             std::uint32_t lambda_bound) {
  return validate_square_condition(p, mu, lambda_bound, true);
}
inline ValidationReport validate_q_condition(const SquareCondition& p, std::uint32_t lambda_bound) {
  return validate_square_condition(p, Ordinal(), lambda_bound, false);
}

inline ValidationReport square_condition_extends(const SquareCondition& q,
                                                 const SquareCondition& p) {
  ValidationReport rep;
  if (q.gamma < p.gamma) rep.add("end-extension", "gamma shrank");
  for (const auto& [a, cs] : p.clubs) {
    auto it = q.clubs.find(a);
    if (it == q.clubs.end()) {
      rep.add("end-extension", "level " + a.to_string() + " dropped");
      continue;
    }
    bool same = it->second.size() == cs.size();
    for (std::size_t i = 0; same && i < cs.size(); ++i) same = it->second[i] == cs[i];
    if (!same) rep.add("end-extension", "collection altered at " + a.to_string());
  }
  return rep;
}

// T_kappa(C): t is a closed bounded set, otp(t) < kappa, and t coheres with
// the ambient sequence at every interior limit point. Without `kappa` this is
// the T(C) condition validator.
inline ValidationReport validate_t_condition(const OrdinalSet& t, const CollectionSequence& seq,
                                             const std::optional<Ordinal>& kappa) {
  ValidationReport rep;
  if (t.is_empty()) return rep;  // the empty condition
  if (!t.max_element()) rep.add("bounded", "no maximum (ends in a tail)");
  if (!t.is_closed()) rep.add("closed", t.to_string());
  if (kappa && t.order_type() >= *kappa)
    rep.add("order-type", "otp=" + t.order_type().to_string());
  for (const Ordinal& a : t.interior_limit_points()) {
    if (!t.contains(a)) continue;  // already flagged by closedness
    if (!seq.has_level(a)) {
      rep.add("coherence", "alpha=" + a.to_string() + " unassigned");
      continue;
    }
    if (!seq.member_at(a, t.prefix_below(a)))
      rep.add("coherence", "alpha=" + a.to_string());
  }
  return rep;
}

inline ValidationReport t_condition_extends(const OrdinalSet& s, const OrdinalSet& t) {
  ValidationReport rep;
  auto tmax = t.max_element();
  if (!tmax) {
    if (!t.is_empty()) rep.add("end-extension", "old condition has no maximum");
    return rep;
  }
  if (!(t == s.prefix_below(*tmax + Ordinal(1))))
    rep.add("end-extension", "new condition alters old part");
  return rep;
}

// P(lambda,kappa): an indexed-square condition up to a limit gamma.
struct IndexedCondition {
  Ordinal gamma;
  IndexedSequence seq;  // bound should equal gamma
};

inline ValidationReport validate_p_condition(const IndexedCondition& p) {
  ValidationReport rep;
  if (!p.gamma.is_limit()) rep.add("clause1", "gamma=" + p.gamma.to_string() + " not a limit");
  if (auto limits = detail::limits_up_to(p.gamma)) {
    for (const Ordinal& a : *limits)
      if (!p.seq.has_level(a)) rep.add("totality", "limit " + a.to_string() + " unassigned");
  } else {
    rep.note("totality not checked (gamma too large to enumerate)");
  }
  for (const auto& [a, l] : p.seq.table())
    if (a > p.gamma) rep.add("domain", "level " + a.to_string() + " above gamma");
  ValidationReport inner = validate_indexed(p.seq);
  for (auto& v : inner.violations) rep.violations.push_back(std::move(v));
  return rep;
}

inline ValidationReport p_condition_extends(const IndexedCondition& q, const IndexedCondition& p) {
  ValidationReport rep;
  if (q.gamma < p.gamma) rep.add("end-extension", "gamma shrank");
  for (const auto& [a, l] : p.seq.table()) {
    if (!q.seq.has_level(a)) {
      rep.add("end-extension", "level " + a.to_string() + " dropped");
      continue;
    }
    const auto& lq = q.seq.at(a);
    if (lq.i_of != l.i_of) {
      rep.add("end-extension", "i(" + a.to_string() + ") changed");
      continue;
    }
    bool same = lq.clubs.size() == l.clubs.size();
    for (std::size_t i = 0; same && i < l.clubs.size(); ++i) same = lq.clubs[i] == l.clubs[i];
    if (!same) rep.add("end-extension", "clubs altered at " + a.to_string());
  }
  return rep;
}

// B(mu,kappa): a partial single-club assignment whose domain s has a maximal
// element and contains every designated cofinality->=kappa ordinal below it.
struct BaumgartnerCondition {
  std::map<Ordinal, OrdinalSet> clubs;  // domain s^p
};

inline ValidationReport validate_b_condition(const BaumgartnerCondition& p, const Ordinal& mu,
                                             const std::vector<Ordinal>& designated_geq_kappa) {
  ValidationReport rep;
  if (p.clubs.empty()) return rep;
  const Ordinal gamma = p.clubs.rbegin()->first;
  for (const Ordinal& s : designated_geq_kappa)
    if (s < gamma && p.clubs.find(s) == p.clubs.end())
      rep.add("domain", "designated ordinal " + s.to_string() + " below gamma not in s");
  for (const auto& [a, c] : p.clubs) {
    if (!c.is_club_in(a)) rep.add("club", detail::club_witness(a, c));
    if (c.order_type() > mu)
      rep.add("order-type", detail::club_witness(a, c) + " otp=" + c.order_type().to_string());
    for (const Ordinal& alpha : c.interior_limit_points()) {
      auto it = p.clubs.find(alpha);
      if (it == p.clubs.end()) {
        rep.add("coherence", "alpha=" + alpha.to_string() + " beta=" + a.to_string() +
                                 " alpha not in s");
        continue;
      }
      if (!(c.prefix_below(alpha) == it->second))
        rep.add("coherence", "alpha=" + alpha.to_string() + " beta=" + a.to_string());
    }
  }
  return rep;
}

inline ValidationReport b_condition_extends(const BaumgartnerCondition& q,
                                            const BaumgartnerCondition& p) {
  ValidationReport rep;
  if (p.clubs.empty()) return rep;
  const Ordinal gamma = p.clubs.rbegin()->first;
  for (const auto& [a, c] : p.clubs) {
    auto it = q.clubs.find(a);
    if (it == q.clubs.end() || !(it->second == c)) {
      rep.add("end-extension", "club altered or dropped at " + a.to_string());
    }
  }
  for (const auto& [a, c] : q.clubs)
    if (a <= gamma && p.clubs.find(a) == p.clubs.end())
      rep.add("end-extension", "new level " + a.to_string() + " inserted below old gamma");
  return rep;
}

}  // namespace narrow
