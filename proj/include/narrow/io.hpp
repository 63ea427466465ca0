#pragma once

// Line-oriented file formats. Readers are strict, writers canonicalize
// (sorted levels/edges, fixed spacing), so write(read(f)) is a fixed point.
//
//   csequence <jensen|bracket> bound=<CNF> lambda=<int> [mu=<CNF>]
//   top <CNF>
//   level <CNF> : { <CNF>|tail(<CNF>[,<int>]), ... } ; { ... }
//
//   csequence indexed bound=<CNF> kappa=<int>
//   level <CNF> i(<CNF>)=<int> : idx=<int> { ... } ; idx=<int> { ... }
//
//   system levels=<n>
//   meta aleph-width=<CNF> aleph-height=<CNF>
//   level <CNF> width=<int>
//   top <CNF>
//   edge <rel> (<CNF>,<int>) -> (<CNF>,<int>)
//
//   name tau=<int>
//   elem <id>
//   le <id> <id>            (first is below second)
//   level <CNF> width=<int>
//   forces <id> <int> (<CNF>,<int>) -> (<CNF>,<int>)
//
//   dfun kappa=<CNF>
//   dom <CNF>
//   d <CNF> <CNF> = <CNF>
//
//   branchset
//   branch <rel> : (<CNF>,<int>) (<CNF>,<int>) ...

#include "narrow/csequence.hpp"
#include "narrow/derived.hpp"
#include "narrow/ordinal.hpp"
#include "narrow/ordinal_set.hpp"
#include "narrow/system.hpp"
#include "narrow/walks.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace narrow {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace io_detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

// split on `sep` characters at parenthesis depth 0
inline std::vector<std::string> split_depth0(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline std::string expect_prefix(const std::string& s, const std::string& prefix,
                                 const std::string& what) {
  if (s.rfind(prefix, 0) != 0) throw IoError("expected " + what + " in '" + s + "'");
  return trim(s.substr(prefix.size()));
}

inline std::uint32_t parse_u32(const std::string& s) {
  try {
    std::size_t used = 0;
    unsigned long v = std::stoul(s, &used);
    if (used != s.size()) throw IoError("bad integer '" + s + "'");
    return static_cast<std::uint32_t>(v);
  } catch (const std::exception&) {
    throw IoError("bad integer '" + s + "'");
  }
}

inline Ordinal parse_cnf(const std::string& s) {
  try {
    return Ordinal::parse(s);
  } catch (const OrdinalParseError& e) {
    throw IoError(std::string("bad ordinal '") + s + "': " + e.what());
  }
}

// key=value field out of a whitespace token
inline std::string field(const std::string& tok, const std::string& key) {
  return expect_prefix(tok, key + "=", key + "=");
}

}  // namespace io_detail

// ---------------------------------------------------------------------------
// ordinal sets

inline std::string print_ordinal_set(const OrdinalSet& s) { return s.normalized().to_string(); }

inline OrdinalSet parse_ordinal_set(const std::string& text) {
  using io_detail::trim;
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '{' || t.back() != '}')
    throw IoError("a set must be written in braces: " + text);
  std::string inner = trim(t.substr(1, t.size() - 2));
  OrdinalSet s;
  if (inner.empty()) return s;
  for (const std::string& item : io_detail::split_depth0(inner, ',')) {
    if (item.rfind("tail(", 0) == 0) {
      if (item.back() != ')') throw IoError("bad tail item: " + item);
      std::string args = item.substr(5, item.size() - 6);
      // a drop argument is a bare integer after the last comma at depth 0
      std::vector<std::string> parts = io_detail::split_depth0(args, ';');  // no ';' inside
      std::vector<std::string> sub;
      int depth = 0;
      std::string cur;
      for (char c : args) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
          sub.push_back(cur);
          cur.clear();
        } else
          cur += c;
      }
      sub.push_back(cur);
      try {
        if (sub.size() == 1)
          s.append_tail(io_detail::parse_cnf(trim(sub[0])));
        else if (sub.size() == 2)
          s.append_tail(io_detail::parse_cnf(trim(sub[0])), io_detail::parse_u32(trim(sub[1])));
        else
          throw IoError("bad tail item: " + item);
      } catch (const SetFormError& e) {
        throw IoError(std::string("bad set: ") + e.what());
      }
    } else {
      try {
        s.append_point(io_detail::parse_cnf(item));
      } catch (const SetFormError& e) {
        throw IoError(std::string("bad set: ") + e.what());
      }
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// sequence files

struct SequenceDocument {
  enum class Kind { jensen, bracket, indexed } kind;
  // jensen/bracket
  std::optional<CollectionSequence> collection;
  Ordinal mu;  // jensen only
  // indexed
  std::optional<IndexedSequence> indexed;

  SquareVariant variant() const {
    return kind == Kind::jensen ? SquareVariant::jensen(mu) : SquareVariant::bracket();
  }
};

inline SequenceDocument parse_sequence_document(const std::string& text) {
  using namespace io_detail;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty sequence file");
  std::vector<std::string> head = split_ws(trim(line));
  if (head.size() < 2 || head[0] != "csequence") throw IoError("expected 'csequence' header");
  SequenceDocument doc;
  std::optional<Ordinal> top;
  if (head[1] == "indexed") {
    doc.kind = SequenceDocument::Kind::indexed;
    Ordinal bound;
    std::uint32_t kappa = 0;
    for (std::size_t i = 2; i < head.size(); ++i) {
      if (head[i].rfind("bound=", 0) == 0) bound = parse_cnf(field(head[i], "bound"));
      else if (head[i].rfind("kappa=", 0) == 0) kappa = parse_u32(field(head[i], "kappa"));
      else throw IoError("unknown header field " + head[i]);
    }
    if (kappa == 0) throw IoError("indexed sequence needs kappa");
    IndexedSequence seq(bound, kappa);
    while (std::getline(in, line)) {
      std::string t = trim(line);
      if (t.empty() || t[0] == '#') continue;
      if (t.rfind("top ", 0) == 0) {
        top = parse_cnf(t.substr(4));
        continue;
      }
      std::string rest = expect_prefix(t, "level ", "level line");
      std::size_t colon = rest.find(" : ");
      if (colon == std::string::npos) throw IoError("level line needs ' : ': " + t);
      std::vector<std::string> lhs = split_ws(rest.substr(0, colon));
      if (lhs.size() != 2) throw IoError("indexed level line needs 'level <CNF> i(<CNF>)=<int>'");
      Ordinal level = parse_cnf(lhs[0]);
      std::string iof_tok = lhs[1];
      std::string want = "i(" + level.to_string() + ")=";
      if (iof_tok.rfind("i(", 0) != 0) throw IoError("expected i(<CNF>)=<int>, got " + iof_tok);
      std::size_t close = iof_tok.find(")=");
      if (close == std::string::npos) throw IoError("expected i(<CNF>)=<int>, got " + iof_tok);
      Ordinal declared = parse_cnf(iof_tok.substr(2, close - 2));
      if (declared != level) throw IoError("i(...) must name its own level: " + iof_tok);
      std::uint32_t i_of = parse_u32(iof_tok.substr(close + 2));
      std::vector<OrdinalSet> clubs;
      std::uint32_t expect_idx = i_of;
      for (const std::string& group : split_depth0(rest.substr(colon + 3), ';')) {
        std::string g = trim(group);
        std::string idxs = expect_prefix(g, "idx=", "idx=");
        std::size_t brace = idxs.find('{');
        if (brace == std::string::npos) throw IoError("club group needs braces: " + g);
        std::uint32_t idx = parse_u32(trim(idxs.substr(0, brace)));
        if (idx != expect_idx)
          throw IoError("club indices must be consecutive from i(level): " + g);
        ++expect_idx;
        clubs.push_back(parse_ordinal_set(idxs.substr(brace)));
      }
      if (expect_idx != kappa)
        throw IoError("level " + level.to_string() + " clubs must reach index kappa-1");
      seq.assign(level, i_of, std::move(clubs));
    }
    if (top) seq.set_top_level(*top);
    doc.indexed = std::move(seq);
    return doc;
  }

  if (head[1] != "jensen" && head[1] != "bracket")
    throw IoError("unknown sequence variant " + head[1]);
  doc.kind = head[1] == "jensen" ? SequenceDocument::Kind::jensen : SequenceDocument::Kind::bracket;
  Ordinal bound;
  std::uint32_t lambda = 0;
  for (std::size_t i = 2; i < head.size(); ++i) {
    if (head[i].rfind("bound=", 0) == 0) bound = parse_cnf(field(head[i], "bound"));
    else if (head[i].rfind("lambda=", 0) == 0) lambda = parse_u32(field(head[i], "lambda"));
    else if (head[i].rfind("mu=", 0) == 0) doc.mu = parse_cnf(field(head[i], "mu"));
    else throw IoError("unknown header field " + head[i]);
  }
  if (lambda == 0) throw IoError("sequence needs lambda=");
  if (doc.kind == SequenceDocument::Kind::jensen && doc.mu.is_zero())
    throw IoError("jensen sequence needs mu=");
  CollectionSequence seq(bound, lambda);
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.rfind("top ", 0) == 0) {
      top = parse_cnf(t.substr(4));
      continue;
    }
    std::string rest = expect_prefix(t, "level ", "level line");
    std::size_t colon = rest.find(" : ");
    if (colon == std::string::npos) throw IoError("level line needs ' : ': " + t);
    Ordinal level = parse_cnf(trim(rest.substr(0, colon)));
    std::vector<OrdinalSet> clubs;
    for (const std::string& group : split_depth0(rest.substr(colon + 3), ';'))
      clubs.push_back(parse_ordinal_set(group));
    seq.assign(level, std::move(clubs));
  }
  if (top) seq.set_top_level(*top);
  doc.collection = std::move(seq);
  return doc;
}

inline std::string print_sequence_document(const SequenceDocument& doc) {
  std::string out;
  if (doc.kind == SequenceDocument::Kind::indexed) {
    const IndexedSequence& seq = *doc.indexed;
    out += "csequence indexed bound=" + seq.bound().to_string() +
           " kappa=" + std::to_string(seq.kappa()) + "\n";
    for (const auto& [level, l] : seq.table()) {
      out += "level " + level.to_string() + " i(" + level.to_string() +
             ")=" + std::to_string(l.i_of) + " : ";
      for (std::size_t j = 0; j < l.clubs.size(); ++j) {
        if (j) out += " ; ";
        out += "idx=" + std::to_string(l.i_of + j) + " " + print_ordinal_set(l.clubs[j]);
      }
      out += "\n";
    }
    return out;
  }
  const CollectionSequence& seq = *doc.collection;
  out += "csequence ";
  out += doc.kind == SequenceDocument::Kind::jensen ? "jensen" : "bracket";
  out += " bound=" + seq.bound().to_string() + " lambda=" + std::to_string(seq.lambda_bound());
  if (doc.kind == SequenceDocument::Kind::jensen) out += " mu=" + doc.mu.to_string();
  out += "\n";
  for (const auto& [level, clubs] : seq.table()) {
    out += "level " + level.to_string() + " : ";
    for (std::size_t j = 0; j < clubs.size(); ++j) {
      if (j) out += " ; ";
      out += print_ordinal_set(clubs[j]);
    }
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// nodes and systems

inline Node parse_node(const std::string& text) {
  using io_detail::trim;
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')') throw IoError("bad node " + text);
  std::string inner = t.substr(1, t.size() - 2);
  int depth = 0;
  std::size_t cut = std::string::npos;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    if (inner[i] == '(') ++depth;
    if (inner[i] == ')') --depth;
    if (inner[i] == ',' && depth == 0) cut = i;
  }
  if (cut == std::string::npos) throw IoError("bad node " + text);
  return Node{io_detail::parse_cnf(trim(inner.substr(0, cut))),
              io_detail::parse_u32(trim(inner.substr(cut + 1)))};
}

inline std::string print_node(const Node& n) { return n.to_string(); }

inline System parse_system_document(const std::string& text) {
  using namespace io_detail;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty system file");
  std::vector<std::string> head = split_ws(trim(line));
  if (head.size() != 2 || head[0] != "system" || head[1].rfind("levels=", 0) != 0)
    throw IoError("expected 'system levels=<n>' header");
  std::uint32_t declared = parse_u32(field(head[1], "levels"));
  System s;
  std::set<Ordinal> tops;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> toks = split_ws(t);
    if (toks[0] == "level") {
      if (toks.size() != 3) throw IoError("bad level line: " + t);
      s.add_level(parse_cnf(toks[1]), parse_u32(field(toks[2], "width")));
    } else if (toks[0] == "top") {
      if (toks.size() != 2) throw IoError("bad top line: " + t);
      tops.insert(parse_cnf(toks[1]));
    } else if (toks[0] == "meta") {
      if (toks.size() != 3) throw IoError("bad meta line: " + t);
      s.set_intended_alephs(parse_cnf(field(toks[1], "aleph-width")),
                            parse_cnf(field(toks[2], "aleph-height")));
    } else if (toks[0] == "edge") {
      if (toks.size() != 5 || toks[3] != "->") throw IoError("bad edge line: " + t);
      s.add_edge(toks[1], parse_node(toks[2]), parse_node(toks[4]));
    } else if (toks[0] == "relation") {
      if (toks.size() != 2) throw IoError("bad relation line: " + t);
      s.ensure_relation(toks[1]);
    } else {
      throw IoError("unknown line: " + t);
    }
  }
  if (s.widths().size() != declared)
    throw IoError("header declares " + std::to_string(declared) + " levels, found " +
                  std::to_string(s.widths().size()));
  if (!tops.empty()) s.set_top_markers(std::move(tops));
  return s;
}

inline std::string print_system_document(const System& s) {
  std::string out = "system levels=" + std::to_string(s.widths().size()) + "\n";
  if (s.intended_alephs()) {
    const auto& [w, h] = *s.intended_alephs();
    out += "meta aleph-width=" + w.to_string() + " aleph-height=" + h.to_string() + "\n";
  }
  for (const auto& [level, w] : s.widths())
    out += "level " + level.to_string() + " width=" + std::to_string(w) + "\n";
  for (const Ordinal& m : s.raw_top_markers()) out += "top " + m.to_string() + "\n";
  for (const auto& [rel, edges] : s.relations()) {
    if (edges.empty()) out += "relation " + rel + "\n";
    for (const Edge& e : edges)
      out += "edge " + rel + " " + print_node(e.first) + " -> " + print_node(e.second) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// poset + name files

struct NameDocument {
  FinitePoset poset;
  SystemName name;
};

inline NameDocument parse_name_document(const std::string& text) {
  using namespace io_detail;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty name file");
  std::vector<std::string> head = split_ws(trim(line));
  if (head.size() != 2 || head[0] != "name" || head[1].rfind("tau=", 0) != 0)
    throw IoError("expected 'name tau=<n>' header");
  std::uint32_t tau = parse_u32(field(head[1], "tau"));

  std::vector<std::string> elems;
  std::vector<std::pair<std::string, std::string>> below;
  std::map<Ordinal, std::uint32_t> widths;
  struct Forcing {
    std::string p;
    std::uint32_t rel;
    Node from, to;
  };
  std::vector<Forcing> forcings;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> toks = split_ws(t);
    if (toks[0] == "elem" && toks.size() == 2) {
      elems.push_back(toks[1]);
    } else if (toks[0] == "le" && toks.size() == 3) {
      below.emplace_back(toks[1], toks[2]);
    } else if (toks[0] == "level" && toks.size() == 3) {
      widths[parse_cnf(toks[1])] = parse_u32(field(toks[2], "width"));
    } else if (toks[0] == "forces" && toks.size() == 6 && toks[4] == "->") {
      forcings.push_back(Forcing{toks[1], parse_u32(toks[2]), parse_node(toks[3]),
                                 parse_node(toks[5])});
    } else {
      throw IoError("unknown line: " + t);
    }
  }
  FinitePoset poset = FinitePoset::make(std::move(elems), below);
  SystemName name(std::move(widths), tau);
  for (const Forcing& f : forcings)
    name.add_forcing(poset.index(f.p), f.rel, f.from, f.to);
  return NameDocument{std::move(poset), std::move(name)};
}

inline std::string print_name_document(const NameDocument& doc) {
  std::string out = "name tau=" + std::to_string(doc.name.tau()) + "\n";
  for (const std::string& e : doc.poset.names()) out += "elem " + e + "\n";
  for (std::size_t i = 0; i < doc.poset.size(); ++i)
    for (std::size_t j = 0; j < doc.poset.size(); ++j)
      if (i != j && doc.poset.leq(i, j))
        out += "le " + doc.poset.name(i) + " " + doc.poset.name(j) + "\n";
  for (const auto& [level, w] : doc.name.widths())
    out += "level " + level.to_string() + " width=" + std::to_string(w) + "\n";
  for (const auto& [key, ps] : doc.name.decided())
    for (std::size_t p : ps)
      out += "forces " + doc.poset.name(p) + " " + std::to_string(key.rel) + " " +
             print_node(key.from) + " -> " + print_node(key.to) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// subadditive function files

inline SubadditiveFunction parse_dfun_document(const std::string& text) {
  using namespace io_detail;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty dfun file");
  std::vector<std::string> head = split_ws(trim(line));
  if (head.size() != 2 || head[0] != "dfun" || head[1].rfind("kappa=", 0) != 0)
    throw IoError("expected 'dfun kappa=<CNF>' header");
  Ordinal kappa = parse_cnf(field(head[1], "kappa"));
  std::vector<Ordinal> dom;
  struct Entry {
    Ordinal a, b, v;
  };
  std::vector<Entry> entries;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> toks = split_ws(t);
    if (toks[0] == "dom" && toks.size() == 2) {
      dom.push_back(parse_cnf(toks[1]));
    } else if (toks[0] == "d" && toks.size() == 5 && toks[3] == "=") {
      entries.push_back(Entry{parse_cnf(toks[1]), parse_cnf(toks[2]), parse_cnf(toks[4])});
    } else {
      throw IoError("unknown line: " + t);
    }
  }
  SubadditiveFunction d(dom, kappa);
  for (const Entry& e : entries) {
    try {
      d.set(e.a, e.b, e.v);
    } catch (const WalkError& err) {
      throw IoError(err.what());
    }
  }
  return d;
}

inline std::string print_dfun_document(const SubadditiveFunction& d) {
  std::string out = "dfun kappa=" + d.range_kappa().to_string() + "\n";
  for (const Ordinal& a : d.domain()) out += "dom " + a.to_string() + "\n";
  const auto& dom = d.domain();
  for (std::size_t i = 0; i < dom.size(); ++i)
    for (std::size_t j = i + 1; j < dom.size(); ++j)
      out += "d " + dom[i].to_string() + " " + dom[j].to_string() + " = " +
             d.at(dom[i], dom[j]).to_string() + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// branch sets

inline std::vector<Branch> parse_branchset_document(const std::string& text) {
  using namespace io_detail;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "branchset")
    throw IoError("expected 'branchset' header");
  std::vector<Branch> out;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> toks = split_ws(t);
    if (toks.size() < 3 || toks[0] != "branch" || toks[2] != ":")
      throw IoError("bad branch line: " + t);
    Branch b{toks[1], {}};
    for (std::size_t i = 3; i < toks.size(); ++i) b.nodes.push_back(parse_node(toks[i]));
    std::sort(b.nodes.begin(), b.nodes.end());
    out.push_back(std::move(b));
  }
  return out;
}

inline std::string print_branchset_document(const std::vector<Branch>& branches) {
  std::string out = "branchset\n";
  for (const Branch& b : branches) {
    out += "branch " + b.relation + " :";
    for (const Node& n : b.nodes) out += " " + print_node(n);
    out += "\n";
  }
  return out;
}

}  // namespace narrow
