#pragma once

// Sets of ordinals for club/C-sequence work. A set is a strictly increasing
// concatenation of pieces; a piece is either a single ordinal or the tail of
// the canonical fundamental sequence of a limit ordinal (an w-run converging
// to that limit). Explicit finite sets use point pieces only; rule-based
// clubs end in a tail. Membership, order types below a point, minima above a
// point and limit points are all decidable.

#include "narrow/ordinal.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace narrow {

struct SetFormError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class OrdinalSet {
 public:
  struct Piece {
    enum class Kind { point, tail };
    Kind kind;
    Ordinal value;            // the point, or the limit the tail converges to
    std::uint64_t drop = 0;   // tail only: entries value[n] for n >= drop

    bool operator==(const Piece& o) const {
      return kind == o.kind && value == o.value && (kind == Kind::point || drop == o.drop);
    }
  };

  OrdinalSet() = default;

  static OrdinalSet empty() { return {}; }

  static OrdinalSet points(std::vector<Ordinal> xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    OrdinalSet s;
    for (auto& x : xs) s.pieces_.push_back(Piece{Piece::Kind::point, std::move(x), 0});
    return s;
  }

  static OrdinalSet single(Ordinal x) { return points({std::move(x)}); }

  // {limit[n] : n >= drop}
  static OrdinalSet fundamental_tail(const Ordinal& limit, std::uint64_t drop = 0) {
    if (!limit.is_limit()) throw SetFormError("tail piece needs a limit ordinal");
    OrdinalSet s;
    s.pieces_.push_back(Piece{Piece::Kind::tail, limit, drop});
    return s;
  }

  OrdinalSet& append_point(const Ordinal& x) {
    check_extends(x);
    pieces_.push_back(Piece{Piece::Kind::point, x, 0});
    return *this;
  }

  OrdinalSet& append_tail(const Ordinal& limit, std::uint64_t drop = 0) {
    if (!limit.is_limit()) throw SetFormError("tail piece needs a limit ordinal");
    check_extends(limit.fundamental(drop));
    pieces_.push_back(Piece{Piece::Kind::tail, limit, drop});
    return *this;
  }

  // Append the tail of `limit` starting with the first entry above `above`.
  OrdinalSet& append_tail_above(const Ordinal& limit, const Ordinal& above) {
    std::uint64_t n = least_entry_index_at_least(limit, above + Ordinal(1));
    return append_tail(limit, n);
  }

  const std::vector<Piece>& pieces() const { return pieces_; }
  bool is_empty() const { return pieces_.empty(); }

  // Set equality needs a canonical representation: a tail absorbs immediately
  // preceding points that are its own earlier entries.
  OrdinalSet normalized() const {
    OrdinalSet s;
    for (const Piece& p : pieces_) {
      if (p.kind == Piece::Kind::tail) {
        Piece t = p;
        while (t.drop > 0 && !s.pieces_.empty() &&
               s.pieces_.back().kind == Piece::Kind::point &&
               s.pieces_.back().value == t.value.fundamental(t.drop - 1)) {
          --t.drop;
          s.pieces_.pop_back();
        }
        s.pieces_.push_back(std::move(t));
      } else {
        s.pieces_.push_back(p);
      }
    }
    return s;
  }

  friend bool operator==(const OrdinalSet& a, const OrdinalSet& b) {
    return a.normalized().pieces_ == b.normalized().pieces_;
  }
  friend bool operator!=(const OrdinalSet& a, const OrdinalSet& b) { return !(a == b); }

  bool contains(const Ordinal& x) const {
    for (const Piece& p : pieces_) {
      if (p.kind == Piece::Kind::point) {
        if (p.value == x) return true;
        if (p.value > x) return false;
      } else {
        if (x < p.value) {
          // Later pieces start at or above p.value, so x lives here or nowhere.
          std::uint64_t n = least_entry_index_at_least(p.value, x);
          return n >= p.drop && p.value.fundamental(n) == x;
        }
      }
    }
    return false;
  }

  // Order type of {s : s < xi}.
  Ordinal order_type_below(const Ordinal& xi) const {
    Ordinal acc;
    for (const Piece& p : pieces_) {
      if (p.kind == Piece::Kind::point) {
        if (p.value >= xi) break;
        acc += Ordinal(1);
      } else {
        if (xi >= p.value) {
          acc += Ordinal::omega();
          continue;
        }
        if (p.value.fundamental(p.drop) >= xi) break;
        std::uint64_t n = least_entry_index_at_least(p.value, xi);
        acc += Ordinal(n - p.drop);
        break;
      }
    }
    return acc;
  }

  Ordinal order_type() const {
    Ordinal acc;
    for (const Piece& p : pieces_)
      acc += p.kind == Piece::Kind::point ? Ordinal(1) : Ordinal::omega();
    return acc;
  }

  // min {s : s >= x}
  std::optional<Ordinal> min_at_least(const Ordinal& x) const {
    for (const Piece& p : pieces_) {
      if (p.kind == Piece::Kind::point) {
        if (p.value >= x) return p.value;
      } else {
        if (p.value > x) {
          std::uint64_t n = std::max(p.drop, least_entry_index_at_least(p.value, x));
          return p.value.fundamental(n);
        }
      }
    }
    return std::nullopt;
  }

  // Element whose set of predecessors in the set has order type `position`.
  std::optional<Ordinal> element_at(const Ordinal& position) const {
    Ordinal rem = position;
    for (const Piece& p : pieces_) {
      if (p.kind == Piece::Kind::point) {
        if (rem.is_zero()) return p.value;
        rem = rem.minus_left(Ordinal(1));
      } else {
        if (rem.is_finite()) {
          std::uint64_t m = static_cast<std::uint64_t>(rem.finite_value());
          return p.value.fundamental(p.drop + m);
        }
        rem = rem.minus_left(Ordinal::omega());
      }
    }
    return std::nullopt;
  }

  std::optional<Ordinal> max_element() const {
    if (pieces_.empty() || pieces_.back().kind == Piece::Kind::tail) return std::nullopt;
    return pieces_.back().value;
  }

  // Supremum: the max for point-final sets, the final tail's limit otherwise.
  Ordinal sup() const {
    if (pieces_.empty()) return Ordinal();
    const Piece& last = pieces_.back();
    return last.kind == Piece::Kind::point ? last.value : last.value;
  }

  // Limit points of the set, i.e. ordinals d with sup(S cap d) = d: exactly
  // the tails' limits. `interior` ones are those that are not the overall sup.
  std::vector<Ordinal> limit_points() const {
    std::vector<Ordinal> r;
    for (const Piece& p : pieces_)
      if (p.kind == Piece::Kind::tail) r.push_back(p.value);
    return r;
  }
  std::vector<Ordinal> interior_limit_points() const {
    std::vector<Ordinal> r = limit_points();
    if (!pieces_.empty() && pieces_.back().kind == Piece::Kind::tail) r.pop_back();
    return r;
  }

  // Contains all its limit points below its sup.
  bool is_closed() const {
    for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
      if (pieces_[i].kind != Piece::Kind::tail) continue;
      if (!contains(pieces_[i].value)) return false;
    }
    return true;
  }

  // Unbounded in alpha: for limit alpha, the set ends with a tail converging
  // to alpha; for a successor alpha = b+1, the set's maximum is b.
  bool unbounded_in(const Ordinal& alpha) const {
    if (pieces_.empty()) return false;
    const Piece& last = pieces_.back();
    if (alpha.is_limit())
      return last.kind == Piece::Kind::tail && last.value == alpha;
    if (alpha.is_successor())
      return last.kind == Piece::Kind::point && last.value == alpha.predecessor();
    return false;
  }

  bool all_below(const Ordinal& alpha) const {
    for (const Piece& p : pieces_) {
      if (p.kind == Piece::Kind::point) {
        if (!(p.value < alpha)) return false;
      } else {
        if (!(p.value <= alpha)) return false;  // entries < value <= alpha
      }
    }
    return true;
  }

  bool is_club_in(const Ordinal& alpha) const {
    return !pieces_.empty() && all_below(alpha) && is_closed() && unbounded_in(alpha);
  }

  // S cap alpha
  OrdinalSet prefix_below(const Ordinal& alpha) const {
    OrdinalSet s;
    for (const Piece& p : pieces_) {
      if (p.kind == Piece::Kind::point) {
        if (p.value >= alpha) break;
        s.pieces_.push_back(p);
      } else {
        if (p.value <= alpha) {
          s.pieces_.push_back(p);
          if (p.value == alpha) break;
          continue;
        }
        // Keep finitely many entries below alpha.
        std::uint64_t n = least_entry_index_at_least(p.value, alpha);
        for (std::uint64_t i = p.drop; i < n; ++i)
          s.pieces_.push_back(Piece{Piece::Kind::point, p.value.fundamental(i), 0});
        break;
      }
    }
    return s.normalized();
  }

  bool subset_of(const OrdinalSet& other) const {
    for (const Piece& p : pieces_) {
      if (p.kind == Piece::Kind::point) {
        if (!other.contains(p.value)) return false;
      } else {
        std::optional<std::uint64_t> cover;
        for (const Piece& q : other.pieces_)
          if (q.kind == Piece::Kind::tail && q.value == p.value) cover = q.drop;
        if (!cover) return false;
        for (std::uint64_t i = p.drop; i < *cover; ++i)
          if (!other.contains(p.value.fundamental(i))) return false;
      }
    }
    return true;
  }

  // Elements in [lo, hi), when finitely many; nullopt when a whole tail fits.
  std::optional<std::vector<Ordinal>> elements_in(const Ordinal& lo, const Ordinal& hi) const {
    std::vector<Ordinal> out;
    for (const Piece& p : pieces_) {
      if (p.kind == Piece::Kind::point) {
        if (p.value >= lo && p.value < hi) out.push_back(p.value);
      } else {
        if (hi >= p.value) {
          if (lo < p.value) return std::nullopt;  // cofinally many entries in range
          continue;
        }
        std::uint64_t n = std::max(p.drop, least_entry_index_at_least(p.value, lo));
        for (;; ++n) {
          Ordinal e = p.value.fundamental(n);
          if (e >= hi) break;
          out.push_back(e);
        }
      }
    }
    return out;
  }

  // Setwise union. Throws SetFormError when the result is not expressible as
  // an increasing run of point/tail pieces (a stray point strictly between the
  // entries of a tail).
  OrdinalSet set_union(const OrdinalSet& other) const {
    std::vector<Piece> tails;
    auto add_tail = [&tails](const Piece& p) {
      for (Piece& t : tails)
        if (t.value == p.value) {
          t.drop = std::min(t.drop, p.drop);
          return;
        }
      tails.push_back(p);
    };
    std::vector<Ordinal> pts;
    for (const OrdinalSet* s : {this, &other})
      for (const Piece& p : s->pieces_)
        p.kind == Piece::Kind::tail ? add_tail(p) : pts.push_back(p.value);
    std::sort(tails.begin(), tails.end(),
              [](const Piece& a, const Piece& b) { return a.value < b.value; });
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    auto covered = [&tails](const Ordinal& x) {
      for (const Piece& t : tails) {
        if (!(x < t.value)) continue;
        OrdinalSet run = fundamental_tail(t.value, t.drop);
        if (run.contains(x)) return true;
      }
      return false;
    };
    pts.erase(std::remove_if(pts.begin(), pts.end(), covered), pts.end());

    OrdinalSet s;
    auto emit_point = [&s](const Ordinal& x) {
      if (!s.pieces_.empty()) {
        const Piece& prev = s.pieces_.back();
        bool ok = prev.kind == Piece::Kind::point ? prev.value < x : prev.value <= x;
        if (!ok) throw SetFormError("union is not expressible with point/tail pieces");
      }
      s.pieces_.push_back(Piece{Piece::Kind::point, x, 0});
    };
    std::size_t pi = 0;
    for (const Piece& t : tails) {
      Ordinal first = t.value.fundamental(t.drop);
      for (; pi < pts.size() && pts[pi] < first; ++pi) emit_point(pts[pi]);
      if (pi < pts.size() && pts[pi] < t.value)
        throw SetFormError("union is not expressible with point/tail pieces");
      if (!s.pieces_.empty()) {
        const Piece& prev = s.pieces_.back();
        bool ok = prev.kind == Piece::Kind::point ? prev.value < first : prev.value <= first;
        if (!ok) throw SetFormError("union is not expressible with point/tail pieces");
      }
      s.pieces_.push_back(t);
    }
    for (; pi < pts.size(); ++pi) emit_point(pts[pi]);
    return s.normalized();
  }

  // { 1, w, tail(w*2), ... }
  std::string to_string() const {
    std::string out = "{";
    bool first = true;
    for (const Piece& p : pieces_) {
      out += first ? " " : ", ";
      first = false;
      if (p.kind == Piece::Kind::point) {
        out += p.value.to_string();
      } else {
        out += "tail(";
        out += p.value.to_string();
        if (p.drop > 0) {
          out += ',';
          out += std::to_string(p.drop);
        }
        out += ')';
      }
    }
    out += first ? "}" : " }";
    return out;
  }

  // Deterministic total order on canonical representations.
  int compare(const OrdinalSet& other) const {
    auto a = normalized().pieces_;
    auto b = other.normalized().pieces_;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
      if (a[i].kind != b[i].kind) return a[i].kind == Piece::Kind::point ? -1 : 1;
      int c = a[i].value.compare(b[i].value);
      if (c != 0) return c;
      if (a[i].drop != b[i].drop) return a[i].drop < b[i].drop ? -1 : 1;
    }
    if (a.size() == b.size()) return 0;
    return a.size() < b.size() ? -1 : 1;
  }
  friend bool operator<(const OrdinalSet& a, const OrdinalSet& b) { return a.compare(b) < 0; }

 private:
  std::vector<Piece> pieces_;

  void check_extends(const Ordinal& next_start) const {
    if (pieces_.empty()) return;
    const Piece& last = pieces_.back();
    if (last.kind == Piece::Kind::point) {
      if (!(last.value < next_start)) throw SetFormError("pieces must be strictly increasing");
    } else {
      if (!(last.value <= next_start)) throw SetFormError("pieces must be strictly increasing");
    }
  }

  // Least n with limit[n] >= x (entries are strictly increasing in n).
  static std::uint64_t least_entry_index_at_least(const Ordinal& limit, const Ordinal& x) {
    if (limit.fundamental(0) >= x) return 0;
    std::uint64_t lo = 0, hi = 1;
    while (limit.fundamental(hi) < x) {
      lo = hi;
      if (hi > (std::uint64_t(1) << 62)) throw SetFormError("entry index out of range");
      hi *= 2;
    }
    while (lo + 1 < hi) {
      std::uint64_t mid = lo + (hi - lo) / 2;
      (limit.fundamental(mid) < x ? lo : hi) = mid;
    }
    return hi;
  }
};

}  // namespace narrow
