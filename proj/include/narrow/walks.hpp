#pragma once

// Walk characteristics computed from a C-sequence: Lambda_kappa picks the
// last point of C_beta up to alpha whose predecessor count in C_beta is
// divisible by kappa, and rho_kappa is the recursive supremum over the three
// displayed term families. Conventions (recorded in the project docs): the
// sequence assigns {a} at successors a+1, max of an empty Lambda-set is 0,
// and rho(a, a) = 0.

#include "narrow/csequence.hpp"
#include "narrow/ordinal.hpp"
#include "narrow/ordinal_set.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace narrow {

struct WalkError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class WalkContext {
 public:
  WalkContext(CSequence c, Ordinal kappa) : c_(std::move(c)), kappa_(std::move(kappa)) {
    if (kappa_.is_zero()) throw WalkError("kappa must be positive");
  }

  // The canonical context used by the CLI: fundamental-sequence clubs with 0
  // adjoined at limits, {a} at successors.
  static WalkContext canonical(const Ordinal& bound, const Ordinal& kappa) {
    return WalkContext(CSequence::canonical(bound, /*zero_rooted=*/true), kappa);
  }

  const CSequence& sequence() const { return c_; }
  const Ordinal& kappa() const { return kappa_; }

  // max({xi in C_beta cap (alpha+1) : kappa divides otp(C_beta cap xi)}),
  // with max of the empty set read as 0.
  Ordinal lambda(const Ordinal& alpha, const Ordinal& beta) const {
    if (!(alpha < beta)) throw WalkError("lambda needs alpha < beta");
    OrdinalSet c = c_.club(beta);
    Ordinal count = c.order_type_below(alpha + Ordinal(1));
    if (count.is_zero()) return Ordinal();
    // Elements at position p qualify iff kappa divides p; take the largest
    // qualifying position below `count`.
    auto [q, r] = count.divmod(kappa_);
    Ordinal position;
    if (!r.is_zero()) {
      position = kappa_ * q;
    } else if (q.is_successor()) {
      position = kappa_ * q.predecessor();
    } else {
      // count is a limit multiple of kappa: the qualifying set has no max.
      throw WalkError("Lambda has no maximum at this pair on this truncation");
    }
    auto e = c.element_at(position);
    if (!e) throw WalkError("internal: position out of range");
    return *e;
  }

  Ordinal rho(const Ordinal& alpha, const Ordinal& beta) const {
    if (alpha > beta) throw WalkError("rho needs alpha <= beta");
    if (alpha == beta) return Ordinal();
    auto key = std::make_pair(alpha, beta);
    auto hit = memo_.find(key);
    if (hit != memo_.end()) return hit->second;

    Ordinal lam = lambda(alpha, beta);
    OrdinalSet c = c_.club(beta);
    Ordinal best = c.order_type_below(alpha).minus_left(c.order_type_below(lam));
    auto m = c.min_at_least(alpha);
    if (!m) throw WalkError("club not unbounded under " + beta.to_string());
    Ordinal via = rho(alpha, *m);
    if (via > best) best = via;
    auto xs = c.elements_in(lam, alpha);
    if (!xs) throw WalkError("infinite recursion family at (" + alpha.to_string() + "," +
                             beta.to_string() + ") on this truncation");
    for (const Ordinal& xi : *xs) {
      Ordinal t = rho(xi, alpha);
      if (t > best) best = t;
    }
    memo_.emplace(std::move(key), best);
    return best;
  }

  void clear_cache() const { memo_.clear(); }
  std::size_t cache_size() const { return memo_.size(); }

 private:
  CSequence c_;
  Ordinal kappa_;
  mutable std::map<std::pair<Ordinal, Ordinal>, Ordinal> memo_;
};

struct SubadditivityViolation {
  Ordinal a, b, c;
  int property;  // 1: rho(a,c) <= max(rho(a,b), rho(b,c)); 2: the dual
  Ordinal lhs, rhs;
};

// Exhaustive triangle-inequality scan over a caller-supplied enumeration.
inline std::vector<SubadditivityViolation> check_subadditivity(
    const WalkContext& ctx, const std::vector<Ordinal>& enumeration) {
  std::vector<Ordinal> xs = enumeration;
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<SubadditivityViolation> out;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j)
      for (std::size_t k = j + 1; k < xs.size(); ++k) {
        Ordinal ab = ctx.rho(xs[i], xs[j]);
        Ordinal bc = ctx.rho(xs[j], xs[k]);
        Ordinal ac = ctx.rho(xs[i], xs[k]);
        const Ordinal& m1 = ab > bc ? ab : bc;
        if (ac > m1) out.push_back({xs[i], xs[j], xs[k], 1, ac, m1});
        const Ordinal& m2 = ac > bc ? ac : bc;
        if (ab > m2) out.push_back({xs[i], xs[j], xs[k], 2, ab, m2});
      }
  return out;
}

// A finite map on unordered pairs from an explicit index set.
class SubadditiveFunction {
 public:
  SubadditiveFunction(std::vector<Ordinal> domain, Ordinal range_kappa)
      : domain_(std::move(domain)), range_(std::move(range_kappa)) {
    std::sort(domain_.begin(), domain_.end());
    domain_.erase(std::unique(domain_.begin(), domain_.end()), domain_.end());
  }

  const std::vector<Ordinal>& domain() const { return domain_; }
  const Ordinal& range_kappa() const { return range_; }

  void set(const Ordinal& a, const Ordinal& b, Ordinal value) {
    if (a == b) throw WalkError("d is defined on pairs of distinct ordinals");
    if (!(value < range_)) throw WalkError("d value out of range");
    values_[key(a, b)] = std::move(value);
  }
  const Ordinal& at(const Ordinal& a, const Ordinal& b) const {
    auto it = values_.find(key(a, b));
    if (it == values_.end()) throw WalkError("d undefined on a pair");
    return it->second;
  }
  bool total() const { return values_.size() == domain_.size() * (domain_.size() - 1) / 2; }

  // Triples violating the two subadditivity properties.
  std::vector<SubadditivityViolation> property_violations() const {
    std::vector<SubadditivityViolation> out;
    for (std::size_t i = 0; i < domain_.size(); ++i)
      for (std::size_t j = i + 1; j < domain_.size(); ++j)
        for (std::size_t k = j + 1; k < domain_.size(); ++k) {
          const Ordinal& ab = at(domain_[i], domain_[j]);
          const Ordinal& bc = at(domain_[j], domain_[k]);
          const Ordinal& ac = at(domain_[i], domain_[k]);
          const Ordinal& m1 = ab > bc ? ab : bc;
          if (ac > m1) out.push_back({domain_[i], domain_[j], domain_[k], 1, ac, m1});
          const Ordinal& m2 = ac > bc ? ac : bc;
          if (ab > m2) out.push_back({domain_[i], domain_[j], domain_[k], 2, ab, m2});
        }
    return out;
  }
  bool is_subadditive() const { return property_violations().empty(); }

 private:
  std::vector<Ordinal> domain_;
  Ordinal range_;
  std::map<std::pair<Ordinal, Ordinal>, Ordinal> values_;

  static std::pair<Ordinal, Ordinal> key(const Ordinal& a, const Ordinal& b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
  }
};

struct UnboundedReport {
  Ordinal sup_observed;
  std::vector<std::pair<Ordinal, Ordinal>> attained_pairs;
};

// Finite surrogate for "d''[I]^2 is unbounded in kappa": the supremum of d
// over pairs from I with the witnessing pairs; the caller compares it with
// the intended range.
inline UnboundedReport check_unbounded(const SubadditiveFunction& d,
                                       const std::vector<Ordinal>& I) {
  if (I.size() < 2) throw WalkError("check_unbounded needs at least two indices");
  std::vector<Ordinal> xs = I;
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  UnboundedReport rep;
  bool first = true;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const Ordinal& v = d.at(xs[i], xs[j]);
      if (first || v > rep.sup_observed) {
        rep.sup_observed = v;
        rep.attained_pairs.clear();
        first = false;
      }
      if (v == rep.sup_observed) rep.attained_pairs.emplace_back(xs[i], xs[j]);
    }
  return rep;
}

}  // namespace narrow
