#pragma once

// Exact arithmetic for ordinals below epsilon_0 in Cantor normal form.
// An ordinal is a finite sum  w^(e_0)*c_0 + ... + w^(e_k)*c_k  with the
// exponents (themselves ordinals) strictly decreasing and all coefficients
// positive. The empty sum is 0.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace narrow {

using BigNat = boost::multiprecision::cpp_int;

struct OrdinalParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Grammar was fine but the term sequence is not in normal form.
struct OrdinalFormError : OrdinalParseError {
  using OrdinalParseError::OrdinalParseError;
};
struct OrdinalSyntaxError : OrdinalParseError {
  using OrdinalParseError::OrdinalParseError;
};

struct OrdinalDomainError : std::domain_error {
  using std::domain_error::domain_error;
};

class Ordinal {
 public:
  struct Term;  // { exponent, coefficient }; defined below

  enum class Kind { zero, successor, limit };

  Ordinal() = default;
  Ordinal(std::uint64_t n);  // NOLINT: implicit on purpose, finite ordinals
  explicit Ordinal(BigNat n);

  static Ordinal omega();
  static Ordinal omega_pow(const Ordinal& exponent, BigNat coefficient = 1);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const;
  bool is_finite() const;
  const BigNat& finite_value() const;  // caller must check is_finite()

  Kind classify() const;
  bool is_limit() const { return classify() == Kind::limit; }
  bool is_successor() const { return classify() == Kind::successor; }

  int compare(const Ordinal& rhs) const;

  friend bool operator==(const Ordinal& a, const Ordinal& b) { return a.compare(b) == 0; }
  friend bool operator!=(const Ordinal& a, const Ordinal& b) { return a.compare(b) != 0; }
  friend bool operator<(const Ordinal& a, const Ordinal& b) { return a.compare(b) < 0; }
  friend bool operator<=(const Ordinal& a, const Ordinal& b) { return a.compare(b) <= 0; }
  friend bool operator>(const Ordinal& a, const Ordinal& b) { return a.compare(b) > 0; }
  friend bool operator>=(const Ordinal& a, const Ordinal& b) { return a.compare(b) >= 0; }

  friend Ordinal operator+(const Ordinal& a, const Ordinal& b);
  friend Ordinal operator*(const Ordinal& a, const Ordinal& b);
  Ordinal& operator+=(const Ordinal& b) { return *this = *this + b; }

  // Unique x with a + x = *this; requires a <= *this.
  Ordinal minus_left(const Ordinal& a) const;

  Ordinal predecessor() const;  // of a successor ordinal
  Ordinal successor() const { return *this + Ordinal(1); }

  // Left division: the unique (q, r) with *this = k*q + r and r < k.
  std::pair<Ordinal, Ordinal> divmod(const Ordinal& k) const;

  // True iff there is gamma with b = k * gamma.
  static bool divides(const Ordinal& k, const Ordinal& b);
  static std::optional<Ordinal> quotient(const Ordinal& k, const Ordinal& b);

  // n-th entry of the canonical fundamental sequence of a limit ordinal:
  // the tail rule for sums, w^(e+1)[n] = w^(e)*(n+1), and w^(e)[n] = w^(e[n])
  // for limit e. Entries are strictly increasing with supremum *this.
  Ordinal fundamental(std::uint64_t n) const;

  std::string to_string() const;
  static Ordinal parse(std::string_view text);

 private:
  std::vector<Term> terms_;

  struct Parser;
};

struct Ordinal::Term {
  Ordinal exponent;
  BigNat coefficient;
};

inline Ordinal::Ordinal(std::uint64_t n) {
  if (n > 0) terms_.push_back(Term{Ordinal(), BigNat(n)});
}

inline Ordinal::Ordinal(BigNat n) {
  if (n < 0) throw OrdinalDomainError("negative value is not an ordinal");
  if (n > 0) terms_.push_back(Term{Ordinal(), std::move(n)});
}

inline Ordinal Ordinal::omega() { return omega_pow(Ordinal(1)); }

inline Ordinal Ordinal::omega_pow(const Ordinal& exponent, BigNat coefficient) {
  if (coefficient <= 0) throw OrdinalDomainError("coefficient must be positive");
  Ordinal r;
  r.terms_.push_back(Term{exponent, std::move(coefficient)});
  return r;
}

inline bool Ordinal::is_zero() const { return terms_.empty(); }

inline bool Ordinal::is_finite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent.is_zero());
}

inline const BigNat& Ordinal::finite_value() const {
  static const BigNat zero = 0;
  if (terms_.empty()) return zero;
  if (!is_finite()) throw OrdinalDomainError("not a finite ordinal");
  return terms_[0].coefficient;
}

inline Ordinal::Kind Ordinal::classify() const {
  if (terms_.empty()) return Kind::zero;
  return terms_.back().exponent.is_zero() ? Kind::successor : Kind::limit;
}

inline int Ordinal::compare(const Ordinal& rhs) const {
  const auto& a = terms_;
  const auto& b = rhs.terms_;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    int e = a[i].exponent.compare(b[i].exponent);
    if (e != 0) return e;
    if (a[i].coefficient != b[i].coefficient)
      return a[i].coefficient < b[i].coefficient ? -1 : 1;
  }
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

// CNF addition: terms of the left summand below the right summand's leading
// exponent are absorbed.
inline Ordinal operator+(const Ordinal& a, const Ordinal& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return b;
  const Ordinal& lead = b.terms_[0].exponent;
  Ordinal r;
  std::size_t keep = a.terms_.size();
  while (keep > 0 && a.terms_[keep - 1].exponent < lead) --keep;
  r.terms_.assign(a.terms_.begin(), a.terms_.begin() + keep);
  std::size_t from = 0;
  if (!r.terms_.empty() && r.terms_.back().exponent == lead) {
    r.terms_.back().coefficient += b.terms_[0].coefficient;
    from = 1;
  }
  r.terms_.insert(r.terms_.end(), b.terms_.begin() + from, b.terms_.end());
  return r;
}

inline Ordinal operator*(const Ordinal& a, const Ordinal& b) {
  if (a.is_zero() || b.is_zero()) return Ordinal();
  Ordinal r;
  const Ordinal& e0 = a.terms_[0].exponent;
  for (const Ordinal::Term& t : b.terms_) {
    if (!t.exponent.is_zero()) {
      r.terms_.push_back(Ordinal::Term{e0 + t.exponent, t.coefficient});
    } else {
      // right factor has a finite part d: a*d = w^(e0)*(c0*d) + tail(a)
      r.terms_.push_back(Ordinal::Term{e0, a.terms_[0].coefficient * t.coefficient});
      r.terms_.insert(r.terms_.end(), a.terms_.begin() + 1, a.terms_.end());
    }
  }
  return r;
}

inline Ordinal Ordinal::minus_left(const Ordinal& a) const {
  if (a.compare(*this) > 0) throw OrdinalDomainError("minus_left: subtrahend too large");
  const auto& big = terms_;
  const auto& small = a.terms_;
  std::size_t i = 0;
  while (i < small.size() && i < big.size() && small[i].exponent == big[i].exponent &&
         small[i].coefficient == big[i].coefficient)
    ++i;
  Ordinal r;
  if (i == small.size()) {
    r.terms_.assign(big.begin() + i, big.end());
    return r;
  }
  // First difference; by a <= *this it is in *this's favour.
  if (small[i].exponent == big[i].exponent) {
    r.terms_.push_back(Term{big[i].exponent, big[i].coefficient - small[i].coefficient});
    r.terms_.insert(r.terms_.end(), big.begin() + i + 1, big.end());
  } else {
    r.terms_.assign(big.begin() + i, big.end());
  }
  return r;
}

inline Ordinal Ordinal::predecessor() const {
  if (!is_successor()) throw OrdinalDomainError("predecessor of a non-successor");
  Ordinal r = *this;
  if (r.terms_.back().coefficient == 1)
    r.terms_.pop_back();
  else
    r.terms_.back().coefficient -= 1;
  return r;
}

inline std::pair<Ordinal, Ordinal> Ordinal::divmod(const Ordinal& k) const {
  if (k.is_zero()) throw OrdinalDomainError("division by zero ordinal");
  Ordinal q;
  Ordinal r = *this;
  const Ordinal& ek = k.terms_[0].exponent;
  const BigNat& ck = k.terms_[0].coefficient;
  while (r.compare(k) >= 0) {
    const Ordinal er = r.terms_[0].exponent;
    if (er > ek) {
      Ordinal g = er.minus_left(ek);  // ek + g = er, g > 0
      q += omega_pow(g, r.terms_[0].coefficient);
      r = r.minus_left(omega_pow(er, r.terms_[0].coefficient));
    } else {
      // Equal leading exponents: the quotient's last, finite part.
      BigNat h = r.terms_[0].coefficient / ck;
      while (h > 0 && (k * Ordinal(h)).compare(r) > 0) --h;
      if (h == 0) break;
      q += Ordinal(h);
      r = r.minus_left(k * Ordinal(h));
      break;
    }
  }
  return {q, r};
}

inline bool Ordinal::divides(const Ordinal& k, const Ordinal& b) {
  if (k.is_zero()) throw OrdinalDomainError("zero divisor");
  return b.divmod(k).second.is_zero();
}

inline std::optional<Ordinal> Ordinal::quotient(const Ordinal& k, const Ordinal& b) {
  if (k.is_zero()) throw OrdinalDomainError("zero divisor");
  auto [q, r] = b.divmod(k);
  if (!r.is_zero()) return std::nullopt;
  return q;
}

inline Ordinal Ordinal::fundamental(std::uint64_t n) const {
  if (!is_limit()) throw OrdinalDomainError("fundamental sequence of a non-limit");
  const Term& last = terms_.back();
  Ordinal prefix;
  prefix.terms_.assign(terms_.begin(), terms_.end() - 1);
  if (last.coefficient > 1) {
    Ordinal head = omega_pow(last.exponent, last.coefficient - 1);
    return prefix + head + omega_pow(last.exponent).fundamental(n);
  }
  const Ordinal& e = last.exponent;
  if (e.is_successor()) {
    return prefix + omega_pow(e.predecessor(), BigNat(n) + 1);
  }
  return prefix + omega_pow(e.fundamental(n));
}

inline std::string Ordinal::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0) out += '+';
    const Term& t = terms_[i];
    if (t.exponent.is_zero()) {
      out += t.coefficient.str();
      continue;
    }
    out += 'w';
    if (t.exponent != Ordinal(1)) {
      out += "^(";
      out += t.exponent.to_string();
      out += ')';
    }
    if (t.coefficient != 1) {
      out += '*';
      out += t.coefficient.str();
    }
  }
  return out;
}

struct Ordinal::Parser {
  std::string_view in;
  std::size_t pos;

  void skip_ws() {
    while (pos < in.size() && (in[pos] == ' ' || in[pos] == '\t')) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < in.size() && in[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  BigNat parse_nat() {
    skip_ws();
    std::size_t start = pos;
    while (pos < in.size() && in[pos] >= '0' && in[pos] <= '9') ++pos;
    if (pos == start) throw OrdinalSyntaxError("expected a number");
    return BigNat(std::string(in.substr(start, pos - start)));
  }

  // term := nat | 'w' ['^' ( '(' ordinal ')' | nat )] ['*' nat]
  Term parse_term() {
    skip_ws();
    if (pos >= in.size()) throw OrdinalSyntaxError("expected a term");
    if (in[pos] == 'w') {
      ++pos;
      Ordinal e(1);
      if (eat('^')) {
        if (eat('(')) {
          e = parse_ordinal();
          if (!eat(')')) throw OrdinalSyntaxError("expected ')'");
        } else {
          e = Ordinal(parse_nat());
        }
      }
      BigNat c = 1;
      if (eat('*')) c = parse_nat();
      if (c == 0) throw OrdinalFormError("zero coefficient");
      if (e.is_zero()) throw OrdinalFormError("exponent 0 must be written as a plain number");
      return Term{e, c};
    }
    BigNat c = parse_nat();
    return Term{Ordinal(), c};
  }

  Ordinal parse_ordinal() {
    skip_ws();
    Ordinal r;
    if (pos < in.size() && in[pos] == '0') {
      ++pos;  // a bare zero; anything after it is the caller's problem
      return r;
    }
    bool first = true;
    for (;;) {
      Term t = parse_term();
      if (t.coefficient == 0) throw OrdinalFormError("zero coefficient");
      if (!first) {
        const Term& prev = r.terms_.back();
        if (!(t.exponent < prev.exponent))
          throw OrdinalFormError("exponents must be strictly decreasing");
      }
      r.terms_.push_back(std::move(t));
      first = false;
      if (!eat('+')) break;
    }
    return r;
  }
};

inline Ordinal Ordinal::parse(std::string_view text) {
  Parser p{text, 0};
  Ordinal r = p.parse_ordinal();
  p.skip_ws();
  if (p.pos != text.size()) throw OrdinalSyntaxError("trailing input after ordinal");
  return r;
}

inline std::string to_string(const Ordinal& a) { return a.to_string(); }

}  // namespace narrow
