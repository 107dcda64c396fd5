#pragma once

#include <cctype>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gmc/laws.hpp"

namespace gmc::cli {

// ---------------------------------------------------------------------------
// Source files

struct Loc {
  int line = 0;
  int col = 0;
};

class SyntaxError : public PresentationError {
 public:
  SyntaxError(Loc at, const std::string& msg)
      : PresentationError(std::to_string(at.line) + ":" + std::to_string(at.col) + ": " + msg), loc(at),
        message(msg) {}
  Loc loc;
  std::string message;
  std::string file;
};

enum class FileKind { Category, Multicat, StrictMon, Relation };

inline std::string kind_name(FileKind k) {
  switch (k) {
    case FileKind::Category: return "category";
    case FileKind::Multicat: return "multicat";
    case FileKind::StrictMon: return "strictmon";
    case FileKind::Relation: return "relation";
  }
  return "?";
}

struct MorDecl {
  std::string name;
  std::vector<std::string> sources;
  std::string target;
  Loc loc;
  bool operator==(const MorDecl& o) const { return name == o.name && sources == o.sources && target == o.target; }
};

/// result = outer . inner[0]  or  result = outer ∘ (inner...).
struct CompDecl {
  std::string result, outer;
  std::vector<std::string> inner;
  Loc loc;
  bool operator==(const CompDecl& o) const { return result == o.result && outer == o.outer && inner == o.inner; }
};

struct TensorDecl {
  std::string left, right, result;
  Loc loc;
  bool operator==(const TensorDecl& o) const { return left == o.left && right == o.right && result == o.result; }
};

struct PairDecl {
  std::string from, to;
  Loc loc;
  bool operator==(const PairDecl& o) const { return from == o.from && to == o.to; }
};

struct SourceFile {
  FileKind kind = FileKind::Category;
  std::string name;
  std::vector<std::string> objects;
  std::vector<MorDecl> mors;
  std::vector<CompDecl> comps;
  std::vector<TensorDecl> tensors;
  std::optional<std::string> unit;
  std::vector<PairDecl> pairs;
  std::optional<Bound> bound;
  std::optional<std::string> rule;
  Loc header;
  std::map<std::string, Loc> object_locs;

  bool operator==(const SourceFile& o) const {
    return kind == o.kind && name == o.name && objects == o.objects && mors == o.mors && comps == o.comps &&
           tensors == o.tensors && unit == o.unit && pairs == o.pairs && bound == o.bound && rule == o.rule;
  }
};

namespace detail {

enum class Tok { Ident, LBrack, RBrack, LParen, RParen, Comma, Colon, Arrow, Eq, Dot, Circ, End };

struct Token {
  Tok kind;
  std::string text;
  int col;
};

inline std::string tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "a name";
    case Tok::LBrack: return "'['";
    case Tok::RBrack: return "']'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Colon: return "':'";
    case Tok::Arrow: return "'->'";
    case Tok::Eq: return "'='";
    case Tok::Dot: return "'.'";
    case Tok::Circ: return "'∘'";
    case Tok::End: return "end of line";
  }
  return "?";
}

inline const std::string kCirc = "\xE2\x88\x98";

inline bool ident_byte(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '\'' || c == '+' || c == '@' || c >= 0x80;
}

inline std::vector<Token> lex(const std::string& line, int lineno) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    unsigned char c = line[i];
    int col = static_cast<int>(i) + 1;
    if (c == '#') break;
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (line.compare(i, kCirc.size(), kCirc) == 0) {
      out.push_back({Tok::Circ, kCirc, col});
      i += kCirc.size();
      continue;
    }
    if (line.compare(i, 2, "->") == 0) {
      out.push_back({Tok::Arrow, "->", col});
      i += 2;
      continue;
    }
    static const std::map<char, Tok> single{{'[', Tok::LBrack}, {']', Tok::RBrack}, {'(', Tok::LParen},
                                            {')', Tok::RParen}, {',', Tok::Comma},  {':', Tok::Colon},
                                            {'=', Tok::Eq},     {'.', Tok::Dot}};
    if (auto it = single.find(static_cast<char>(c)); it != single.end()) {
      out.push_back({it->second, std::string(1, static_cast<char>(c)), col});
      ++i;
      continue;
    }
    if (ident_byte(c)) {
      std::size_t j = i;
      while (j < line.size() && ident_byte(static_cast<unsigned char>(line[j])) &&
             line.compare(j, kCirc.size(), kCirc) != 0)
        ++j;
      out.push_back({Tok::Ident, line.substr(i, j - i), col});
      i = j;
      continue;
    }
    throw SyntaxError({lineno, col}, std::string("unexpected character '") + static_cast<char>(c) + "'");
  }
  out.push_back({Tok::End, "", static_cast<int>(line.size()) + 1});
  return out;
}

class LineParser {
 public:
  LineParser(std::vector<Token> toks, int line) : toks_(std::move(toks)), line_(line) {}

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Loc loc() const { return {line_, peek().col}; }
  bool at(Tok t) const { return peek().kind == t; }

  Token expect(Tok t, const char* what = nullptr) {
    if (!at(t))
      throw SyntaxError(loc(), "expected " + (what ? std::string(what) : tok_name(t)) + ", found " +
                                   (at(Tok::End) ? "end of line" : "'" + peek().text + "'"));
    return toks_[pos_++];
  }

  bool accept(Tok t) {
    if (!at(t)) return false;
    ++pos_;
    return true;
  }

  std::string name() { return expect(Tok::Ident).text; }

  /// name {, name}, possibly empty before `stop`.
  std::vector<std::string> names_until(Tok stop) {
    std::vector<std::string> out;
    if (at(stop)) return out;
    out.push_back(name());
    while (accept(Tok::Comma)) out.push_back(name());
    return out;
  }

  /// Names separated by commas or blanks, to the end of the line.
  std::vector<std::pair<std::string, Loc>> name_list() {
    std::vector<std::pair<std::string, Loc>> out;
    while (!at(Tok::End)) {
      Loc l = loc();
      out.emplace_back(name(), l);
      accept(Tok::Comma);
    }
    return out;
  }

  void end() { expect(Tok::End); }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int line_;
};

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline Bound parse_bound(const Token& t, int line) {
  if (t.text.empty() || t.text.find_first_not_of("0123456789") != std::string::npos || t.text.size() > 3)
    throw SyntaxError({line, t.col}, "bound must be a small non-negative integer");
  return std::stoi(t.text);
}

}  // namespace detail

inline SourceFile parse_source(const std::string& text) {
  using namespace detail;
  SourceFile f;
  bool have_header = false;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!have_header) {
      std::string body = raw.substr(0, raw.find('#'));
      std::string t = trim(body);
      if (t.empty()) continue;
      Loc l{lineno, static_cast<int>(body.find_first_not_of(" \t")) + 1};
      std::string k = t.substr(0, t.find_first_of(" \t"));
      static const std::map<std::string, FileKind> kinds{{"category", FileKind::Category},
                                                         {"multicat", FileKind::Multicat},
                                                         {"strictmon", FileKind::StrictMon},
                                                         {"relation", FileKind::Relation}};
      auto it = kinds.find(k);
      if (it == kinds.end()) throw SyntaxError(l, "expected a header: category, multicat, strictmon or relation");
      f.kind = it->second;
      f.header = l;
      f.name = trim(t.substr(k.size()));
      if (f.name.empty()) f.name = k == "category" ? "C" : k == "multicat" ? "M" : k == "strictmon" ? "S" : "R";
      have_header = true;
      continue;
    }
    auto toks = lex(raw, lineno);
    if (toks.front().kind == Tok::End) continue;
    LineParser p(std::move(toks), lineno);
    Loc l = p.loc();
    bool comp_line = p.at(Tok::Ident) && p.peek(1).kind == Tok::Eq;
    std::string kw = comp_line ? "comp" : p.name();
    auto only = [&](std::initializer_list<FileKind> ks) {
      for (auto k : ks)
        if (k == f.kind) return;
      throw SyntaxError(l, "'" + kw + "' lines are not allowed in a " + kind_name(f.kind) + " file");
    };
    if (kw == "objects") {
      p.expect(Tok::Colon);
      for (auto& [n, nl] : p.name_list()) {
        if (f.object_locs.count(n)) throw SyntaxError(nl, "object " + n + " is declared twice");
        f.object_locs[n] = nl;
        f.objects.push_back(n);
      }
    } else if (kw == "mor" || kw == "op") {
      only({FileKind::Category, FileKind::Multicat, FileKind::StrictMon});
      MorDecl d;
      d.loc = l;
      d.name = p.name();
      p.expect(Tok::Colon);
      if (p.accept(Tok::LBrack)) {
        d.sources = p.names_until(Tok::RBrack);
        p.expect(Tok::RBrack);
      } else {
        d.sources = {p.name()};
      }
      p.expect(Tok::Arrow);
      d.target = p.name();
      p.end();
      f.mors.push_back(std::move(d));
    } else if (kw == "comp") {
      only({FileKind::Category, FileKind::Multicat, FileKind::StrictMon});
      CompDecl d;
      d.loc = l;
      d.result = p.name();
      p.expect(Tok::Eq);
      d.outer = p.name();
      if (p.accept(Tok::Dot)) {
        d.inner = {p.name()};
      } else {
        p.expect(Tok::Circ, "'.' or '∘'");
        p.expect(Tok::LParen);
        d.inner = p.names_until(Tok::RParen);
        p.expect(Tok::RParen);
      }
      p.end();
      f.comps.push_back(std::move(d));
    } else if (kw == "unit") {
      only({FileKind::StrictMon});
      p.expect(Tok::Colon);
      if (f.unit) throw SyntaxError(l, "unit is declared twice");
      f.unit = p.name();
      p.end();
    } else if (kw == "tensor") {
      only({FileKind::StrictMon});
      TensorDecl d;
      d.loc = l;
      d.left = p.name();
      p.expect(Tok::Comma);
      d.right = p.name();
      p.expect(Tok::Eq);
      d.result = p.name();
      p.end();
      f.tensors.push_back(std::move(d));
    } else if (kw == "pairs") {
      only({FileKind::Relation});
      p.expect(Tok::Colon);
      while (!p.at(Tok::End)) {
        PairDecl d;
        d.loc = p.loc();
        d.from = p.name();
        p.expect(Tok::Arrow);
        d.to = p.name();
        f.pairs.push_back(std::move(d));
        if (!p.accept(Tok::Comma)) break;
      }
      p.end();
    } else if (kw == "bound") {
      p.expect(Tok::Colon);
      if (f.bound) throw SyntaxError(l, "bound is declared twice");
      f.bound = parse_bound(p.expect(Tok::Ident, "a number"), lineno);
      p.end();
    } else if (kw == "rule") {
      only({FileKind::Multicat});
      Loc rl = p.loc();
      std::string r = p.name();
      if (r != "cyclic" && r != "terminal") throw SyntaxError(rl, "unknown rule " + r + " (cyclic or terminal)");
      if (f.rule) throw SyntaxError(l, "rule is declared twice");
      f.rule = r;
      p.end();
    } else {
      throw SyntaxError(l, "unknown line '" + kw + "'");
    }
  }
  if (!have_header) throw SyntaxError({lineno + 1, 1}, "empty file: expected a header");
  return f;
}

/// Canonical text; parsing it gives back an equal file.
inline std::string print_source(const SourceFile& f) {
  std::ostringstream o;
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s;
  };
  o << kind_name(f.kind) << " " << f.name << "\n";
  o << "objects:" << (f.objects.empty() ? "" : " " + join(f.objects)) << "\n";
  if (f.rule) o << "rule " << *f.rule << "\n";
  for (const auto& m : f.mors) {
    if (f.kind == FileKind::Multicat)
      o << "op " << m.name << " : [" << join(m.sources) << "] -> " << m.target << "\n";
    else
      o << "mor " << m.name << " : " << join(m.sources) << " -> " << m.target << "\n";
  }
  for (const auto& c : f.comps) {
    if (f.kind == FileKind::Multicat)
      o << "comp " << c.result << " = " << c.outer << " " << detail::kCirc << " (" << join(c.inner) << ")\n";
    else
      o << "comp " << c.result << " = " << c.outer << " . " << c.inner.at(0) << "\n";
  }
  if (f.unit) o << "unit: " << *f.unit << "\n";
  for (const auto& t : f.tensors) o << "tensor " << t.left << ", " << t.right << " = " << t.result << "\n";
  if (f.kind == FileKind::Relation) {
    o << "pairs:";
    for (std::size_t i = 0; i < f.pairs.size(); ++i)
      o << (i ? ", " : " ") << f.pairs[i].from << " -> " << f.pairs[i].to;
    o << "\n";
  }
  if (f.bound) o << "bound: " << *f.bound << "\n";
  return o.str();
}

// ---------------------------------------------------------------------------
// Building presentations

inline std::string identity_name(const std::string& object) { return "1_" + object; }

namespace detail {

inline Elem A(const std::string& s) { return Elem::atom(s); }

inline Loc object_loc(const SourceFile& f, const std::string& o) {
  auto it = f.object_locs.find(o);
  return it == f.object_locs.end() ? f.header : it->second;
}

}  // namespace detail

/// The category of a category or strictmon file. Identities 1_o and their
/// composites are implicit; every other composable pair needs a comp line.
inline FiniteCategory build_category(const SourceFile& f) {
  using detail::A;
  if (f.kind != FileKind::Category && f.kind != FileKind::StrictMon)
    throw SyntaxError(f.header, "a " + kind_name(f.kind) + " file does not present a category");
  FiniteCategory c;
  std::set<std::string> objs(f.objects.begin(), f.objects.end());
  std::map<std::string, std::pair<std::string, std::string>> ends;  // name -> (dom, cod)
  std::set<std::string> ids;
  for (const auto& o : f.objects) {
    std::string id = identity_name(o);
    c.objects.push_back(A(o));
    c.morphisms.push_back({A(id), A(o), A(o)});
    c.identities[A(o)] = A(id);
    ends[id] = {o, o};
    ids.insert(id);
  }
  for (const auto& m : f.mors) {
    if (ends.count(m.name))
      throw SyntaxError(m.loc, ids.count(m.name) ? m.name + " is the implicit identity name" : m.name + " is declared twice");
    if (objs.count(m.name)) throw SyntaxError(m.loc, m.name + " is already an object");
    if (m.sources.size() != 1) throw SyntaxError(m.loc, "a morphism has exactly one source");
    for (const auto& e : {m.sources[0], m.target})
      if (!objs.count(e)) throw SyntaxError(m.loc, "unknown object " + e);
    ends[m.name] = {m.sources[0], m.target};
    c.morphisms.push_back({A(m.name), A(m.sources[0]), A(m.target)});
  }
  for (const auto& [g, ge] : ends)
    for (const auto& [h, he] : ends) {
      if (he.second != ge.first) continue;
      if (ids.count(g)) c.compose[{A(g), A(h)}] = A(h);
      else if (ids.count(h)) c.compose[{A(g), A(h)}] = A(g);
    }
  for (const auto& cd : f.comps) {
    if (cd.inner.size() != 1) throw SyntaxError(cd.loc, "a composite of morphisms has one inner morphism");
    const std::string &g = cd.outer, &h = cd.inner[0];
    for (const auto& n : {g, h, cd.result})
      if (!ends.count(n)) throw SyntaxError(cd.loc, "unknown morphism " + n);
    if (ids.count(g) || ids.count(h)) throw SyntaxError(cd.loc, "composites with identities are implicit");
    if (ends[g].first != ends[h].second) throw SyntaxError(cd.loc, g + " . " + h + " is not composable");
    if (!c.compose.emplace(std::make_pair(A(g), A(h)), A(cd.result)).second)
      throw SyntaxError(cd.loc, "composite " + g + " . " + h + " is given twice");
  }
  for (const auto& m : f.mors)
    for (const auto& [h, he] : ends)
      if (he.second == ends[m.name].first && !c.compose.count({A(m.name), A(h)}))
        throw SyntaxError(m.loc, "no composite for " + m.name + " . " + h);
  try {
    c.validate();
  } catch (const PresentationError& e) {
    throw SyntaxError(f.header, e.what());
  }
  return c;
}

/// The multicategory of a multicat file, or of a category file read with
/// unary operations only.
inline Multicat build_multicat(const SourceFile& f) {
  using detail::A;
  if (f.kind == FileKind::Category) return category_as_multicat(build_category(f), f.name);
  if (f.kind != FileKind::Multicat)
    throw SyntaxError(f.header, "a " + kind_name(f.kind) + " file does not present a multicategory");
  std::vector<Elem> objv;
  for (const auto& o : f.objects) objv.push_back(A(o));
  SetExpr objects = SetExpr::fin(objv);
  if (f.rule) {
    if (!f.mors.empty() || !f.comps.empty())
      throw SyntaxError(f.mors.empty() ? f.comps[0].loc : f.mors[0].loc, "a rule multicat lists no operations");
    Multicat m;
    if (*f.rule == "terminal") {
      m = terminal_multicat(objects);
    } else {
      for (std::size_t i = 0; i < f.objects.size(); ++i)
        if (f.objects[i] != std::to_string(i))
          throw SyntaxError(detail::object_loc(f, f.objects[i]), "rule cyclic needs objects 0, 1, ..., n-1 in order");
      if (f.objects.empty()) throw SyntaxError(f.header, "rule cyclic needs at least one object");
      m = cyclic_multicat(static_cast<int>(f.objects.size()));
    }
    m.name = f.name;
    return m;
  }
  std::set<std::string> objs(f.objects.begin(), f.objects.end());
  MulticatTable t;
  std::map<std::string, MulticatTable::Op> ops;
  std::map<std::string, Loc> locs;
  std::set<std::string> ids;
  for (const auto& o : f.objects) {
    std::string id = identity_name(o);
    MulticatTable::Op op{A(id), Elem::nest({A(o)}), A(o)};
    ops[id] = op;
    t.ops.push_back(op);
    t.identities[A(o)] = A(id);
    ids.insert(id);
  }
  for (const auto& m : f.mors) {
    if (ops.count(m.name))
      throw SyntaxError(m.loc, ids.count(m.name) ? m.name + " is the implicit identity name" : m.name + " is declared twice");
    std::vector<Elem> srcs;
    for (const auto& s : m.sources) {
      if (!objs.count(s)) throw SyntaxError(m.loc, "unknown object " + s);
      srcs.push_back(A(s));
    }
    if (!objs.count(m.target)) throw SyntaxError(m.loc, "unknown object " + m.target);
    MulticatTable::Op op{A(m.name), Elem::nest(srcs), A(m.target)};
    ops[m.name] = op;
    locs[m.name] = m.loc;
    t.ops.push_back(op);
  }
  for (const auto& [n, op] : ops) {
    std::vector<Elem> inner;
    for (const auto& s : op.sources.kids()) inner.push_back(A(identity_name(s.name())));
    t.composites[Elem::nest({op.name, Elem::nest(inner)})] = op.name;
    t.composites[Elem::nest({A(identity_name(op.target.name())), Elem::nest({op.name})})] = op.name;
  }
  for (const auto& cd : f.comps) {
    for (const auto& n : cd.inner)
      if (!ops.count(n)) throw SyntaxError(cd.loc, "unknown operation " + n);
    for (const auto& n : {cd.outer, cd.result})
      if (!ops.count(n)) throw SyntaxError(cd.loc, "unknown operation " + n);
    const auto& outer = ops[cd.outer];
    if (outer.sources.size() != cd.inner.size())
      throw SyntaxError(cd.loc, cd.outer + " takes " + std::to_string(outer.sources.size()) + " inputs");
    bool all_ids = true;
    std::vector<Elem> inner;
    for (std::size_t i = 0; i < cd.inner.size(); ++i) {
      if (!(ops[cd.inner[i]].target == outer.sources[i]))
        throw SyntaxError(cd.loc, cd.inner[i] + " does not land in input " + std::to_string(i + 1) + " of " + cd.outer);
      all_ids = all_ids && ids.count(cd.inner[i]);
      inner.push_back(A(cd.inner[i]));
    }
    if (ids.count(cd.outer) || all_ids) throw SyntaxError(cd.loc, "composites with identities are implicit");
    if (!t.composites.emplace(Elem::nest({A(cd.outer), Elem::nest(inner)}), A(cd.result)).second)
      throw SyntaxError(cd.loc, "composite of " + cd.outer + " with these inputs is given twice");
  }
  std::map<Elem, std::vector<Elem>> by_target;
  for (const auto& op : t.ops) by_target[op.target].push_back(op.name);
  for (const auto& m : f.mors) {
    const auto& op = ops[m.name];
    std::vector<Elem> picked;
    std::function<void(std::size_t)> go = [&](std::size_t i) {
      if (i == op.sources.size()) {
        if (!t.composites.count(Elem::nest({op.name, Elem::nest(picked)}))) {
          std::string s;
          for (std::size_t k = 0; k < picked.size(); ++k) s += (k ? ", " : "") + picked[k].str();
          throw SyntaxError(m.loc, "no composite for " + m.name + " " + detail::kCirc + " (" + s + ")");
        }
        return;
      }
      for (const auto& g : by_target[op.sources[i]]) {
        picked.push_back(g);
        go(i + 1);
        picked.pop_back();
      }
    };
    go(0);
  }
  try {
    return Multicat::from_table(f.name, objects, std::move(t));
  } catch (const PresentationError& e) {
    throw SyntaxError(f.header, e.what());
  }
}

/// Tensors of two identities default to the identity of the tensor of
/// objects.
inline StrictMonCat build_strictmon(const SourceFile& f) {
  using detail::A;
  if (f.kind != FileKind::StrictMon)
    throw SyntaxError(f.header, "a " + kind_name(f.kind) + " file does not present a strict monoidal category");
  StrictMonCat s;
  s.name = f.name;
  s.cat = build_category(f);
  if (!f.unit) throw SyntaxError(f.header, "missing 'unit:' line");
  std::set<std::string> objs(f.objects.begin(), f.objects.end());
  if (!objs.count(*f.unit)) throw SyntaxError(f.header, "unit " + *f.unit + " is not an object");
  s.unit = A(*f.unit);
  if (f.tensors.empty()) throw SyntaxError(f.header, "tensor table is empty");
  std::set<std::string> mors;
  for (const auto& m : s.cat.morphisms) mors.insert(m.name.name());
  for (const auto& t : f.tensors) {
    bool on_objects = objs.count(t.left) && objs.count(t.right) && objs.count(t.result);
    bool on_morphisms = mors.count(t.left) && mors.count(t.right) && mors.count(t.result);
    if (!on_objects && !on_morphisms)
      throw SyntaxError(t.loc, "tensor needs three objects or three morphisms");
    auto& table = on_objects ? s.tensor_objects : s.tensor_morphisms;
    if (!table.emplace(std::make_pair(A(t.left), A(t.right)), A(t.result)).second)
      throw SyntaxError(t.loc, "tensor of " + t.left + ", " + t.right + " is given twice");
  }
  for (const auto& x : f.objects)
    for (const auto& y : f.objects) {
      auto it = s.tensor_objects.find({A(x), A(y)});
      if (it == s.tensor_objects.end()) throw SyntaxError(f.header, "no tensor of objects " + x + ", " + y);
      s.tensor_morphisms.emplace(std::make_pair(A(identity_name(x)), A(identity_name(y))),
                                 A(identity_name(it->second.name())));
    }
  try {
    s.validate();
  } catch (const PresentationError& e) {
    throw SyntaxError(f.header, e.what());
  }
  return s;
}

struct Relation {
  std::string name;
  SetExpr carrier;
  std::vector<std::pair<Elem, Elem>> pairs;
};

inline Relation build_relation(const SourceFile& f) {
  if (f.kind != FileKind::Relation) throw SyntaxError(f.header, "not a relation file");
  Relation r;
  r.name = f.name;
  std::vector<Elem> objv;
  for (const auto& o : f.objects) objv.push_back(detail::A(o));
  r.carrier = SetExpr::fin(objv);
  std::set<std::string> objs(f.objects.begin(), f.objects.end());
  for (const auto& p : f.pairs) {
    for (const auto& e : {p.from, p.to})
      if (!objs.count(e)) throw SyntaxError(p.loc, "unknown element " + e);
    r.pairs.emplace_back(detail::A(p.from), detail::A(p.to));
  }
  return r;
}

/// Builds whatever the file presents, to surface every error at parse time.
inline void build_any(const SourceFile& f) {
  switch (f.kind) {
    case FileKind::Category: build_category(f); break;
    case FileKind::Multicat: build_multicat(f); break;
    case FileKind::StrictMon: build_strictmon(f); break;
    case FileKind::Relation: build_relation(f); break;
  }
}

inline SourceFile read_source(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PresentationError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    SourceFile f = parse_source(ss.str());
    build_any(f);
    return f;
  } catch (SyntaxError& e) {
    e.file = path;
    throw;
  }
}

// ---------------------------------------------------------------------------
// Commands

enum ExitCode { kPass = 0, kLawFailure = 1, kUsage = 2 };

/// Human text and the structured document mirror each other line for line.
struct Outcome {
  int code = kPass;
  std::string text;
  nlohmann::ordered_json json = nlohmann::ordered_json::object();
};

inline std::string vacuous_note(const LawReport& r) { return r.bound && *r.bound == 0 ? " (vacuous)" : ""; }

inline Outcome report_outcome(const std::string& command, const LawReports& rs) {
  Outcome o;
  o.code = all_pass(rs) ? kPass : kLawFailure;
  o.json["command"] = command;
  o.json["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : rs) {
    o.text += report_line(r) + vacuous_note(r) + "\n";
    auto j = report_json(r);
    if (!vacuous_note(r).empty()) j["note"] = "vacuous";
    o.json["reports"].push_back(j);
  }
  o.json["verdict"] = o.code == kPass ? "pass" : "fail";
  o.text += std::string("verdict: ") + (o.code == kPass ? "pass" : "fail") + "\n";
  return o;
}

inline Bound effective_bound(const SourceFile& f, std::optional<Bound> flag) {
  if (flag) return *flag;
  return f.bound ? *f.bound : 3;
}

/// Runs a check and turns an exception from a broken structure into a
/// failure of the named law.
inline void guarded(LawReports& out, const std::string& law, const std::string& instance, std::optional<Bound> b,
                    const std::function<LawReports()>& run) {
  try {
    for (auto& r : run()) out.push_back(std::move(r));
  } catch (const error& e) {
    out.push_back(law_failure(law, instance, b, e.what()));
  }
}

inline Outcome cmd_check(const SourceFile& f, std::optional<Bound> bound) {
  Bound b = effective_bound(f, bound);
  LawReports rs;
  switch (f.kind) {
    case FileKind::Category: {
      Monoid m = cat_to_monoid(build_category(f), f.name);
      guarded(rs, "monoid laws", f.name, b, [&] { return check_monoid(m, b); });
      break;
    }
    case FileKind::Multicat: {
      TMonoid t = multicat_to_tmonoid(build_multicat(f));
      guarded(rs, "T-monoid laws", f.name, b, [&] { return check_tmonoid(t, b); });
      break;
    }
    case FileKind::StrictMon: {
      TAlgebra a = smc_to_talgebra(build_strictmon(f));
      guarded(rs, "T-algebra laws", f.name, b, [&] { return check_talgebra(a, b); });
      break;
    }
    case FileKind::Relation: {
      Relation r = build_relation(f);
      auto q = Quantale::two();
      MatVector rel = MatVector::relation(q, r.carrier, r.carrier, r.pairs, r.name);
      std::set<std::pair<Elem, Elem>> ps(r.pairs.begin(), r.pairs.end());
      auto leq = [ps](const Elem& x, const Elem& y) { return ps.count({x, y}) > 0; };
      guarded(rs, "preorder laws", r.name, b, [&] { return check_mat_monoid(rel, r.name, b); });
      guarded(rs, "multi-preorder laws", r.name + " on lists", b, [&] {
        return check_mat_tmonoid(multi_preorder(q, r.carrier, leq, b, r.name + " on lists"), r.name + " on lists", b);
      });
      break;
    }
  }
  return report_outcome("check", rs);
}

enum class Emit { Homs, Counts };

/// Objects and homs of the free strict monoidal category on a multicategory,
/// for lists up to max_len.
inline Outcome cmd_free_monoidal(const SourceFile& f, std::size_t max_len, Emit emit) {
  TMonoid t = multicat_to_tmonoid(build_multicat(f));
  TAlgebra m = free_talgebra(t);
  Bound b = std::max<Bound>(static_cast<Bound>(max_len), 1);
  auto lists = SetExpr::fm(t.x).enumerate(static_cast<Bound>(max_len));
  Outcome o;
  o.json["command"] = "free-monoidal";
  o.json["name"] = m.name;
  o.json["max_len"] = max_len;
  o.json["objects"] = nlohmann::ordered_json::array();
  for (const auto& u : lists) {
    o.text += "object " + u.str() + "\n";
    o.json["objects"].push_back(u.str());
  }
  o.json["homs"] = nlohmann::ordered_json::array();
  for (const auto& u : lists)
    for (const auto& v : lists) {
      auto es = m.monoid.a.fiber(v, u, b);
      o.text += "hom " + u.str() + " -> " + v.str() + " : " + std::to_string(es.size()) + "\n";
      nlohmann::ordered_json h;
      h["from"] = u.str();
      h["to"] = v.str();
      h["count"] = es.size();
      if (emit == Emit::Homs) {
        h["elements"] = nlohmann::ordered_json::array();
        for (const auto& e : es) {
          o.text += "  " + e.str() + "\n";
          h["elements"].push_back(e.str());
        }
      }
      o.json["homs"].push_back(h);
    }
  return o;
}

/// Operations hom(u; y) of the underlying multicategory for lists up to
/// max_len.
inline Outcome cmd_underlying(const SourceFile& f, std::size_t max_len) {
  TMonoid k = underlying_tmonoid(smc_to_talgebra(build_strictmon(f)));
  Bound b = std::max<Bound>(static_cast<Bound>(max_len), 1);
  Outcome o;
  o.json["command"] = "underlying";
  o.json["name"] = k.name;
  o.json["max_len"] = max_len;
  o.json["homs"] = nlohmann::ordered_json::array();
  for (const auto& u : SetExpr::fm(k.x).enumerate(static_cast<Bound>(max_len)))
    for (const auto& y : k.x.elements()) {
      auto es = k.a.fiber(y, u, b);
      o.text += "hom " + u.str() + " -> " + y.str() + " : " + std::to_string(es.size()) + "\n";
      nlohmann::ordered_json h;
      h["from"] = u.str();
      h["to"] = y.str();
      h["count"] = es.size();
      h["elements"] = nlohmann::ordered_json::array();
      for (const auto& e : es) {
        o.text += "  " + e.str() + "\n";
        h["elements"].push_back(e.str());
      }
      o.json["homs"].push_back(h);
    }
  return o;
}

/// Validity of both inputs, the triangle identities and the hom bijection.
/// The bijection search runs at min(bound, 2). Bound 0 checks nothing.
inline Outcome cmd_adjunction_check(const SourceFile& mf, const SourceFile& sf, Bound b, std::uint64_t seed) {
  TMonoid t = multicat_to_tmonoid(build_multicat(mf));
  TAlgebra a = smc_to_talgebra(build_strictmon(sf));
  std::string inst = t.name + ", " + a.name;
  LawReports rs;
  if (b == 0) {
    for (const char* law : {"triangle on K", "triangle on M", "hom bijection"})
      rs.push_back(law_result(law, inst, 0, std::nullopt));
  } else {
    guarded(rs, "T-monoid laws", t.name, b, [&] { return check_tmonoid(t, b); });
    guarded(rs, "T-algebra laws", a.name, b, [&] { return check_talgebra(a, b); });
    if (all_pass(rs)) {
      guarded(rs, "triangles", inst, b, [&] { return check_triangles(t, a, b); });
      Bound hb = std::min<Bound>(b, 2);
      guarded(rs, "hom bijection", inst, hb, [&] { return hom_bijection_oracle(t, a, hb).reports(inst); });
    }
  }
  for (auto& r : rs) r.seed = seed;
  return report_outcome("adjunction-check", rs);
}

inline Outcome cmd_laws(const std::vector<Suite>& suites, const SuiteOptions& opts) {
  LawReports rs;
  for (auto s : suites)
    for (auto& r : run_suite(s, opts)) rs.push_back(std::move(r));
  Outcome o = report_outcome("laws", rs);
  return o;
}

inline Outcome cmd_print(const SourceFile& f) {
  build_any(f);
  Outcome o;
  o.text = print_source(f);
  o.json["command"] = "print";
  o.json["kind"] = kind_name(f.kind);
  o.json["text"] = o.text;
  return o;
}

inline Outcome usage_error(const std::string& msg) {
  Outcome o;
  o.code = kUsage;
  o.text = "error: " + msg + "\n";
  o.json["error"] = msg;
  return o;
}

}  // namespace gmc::cli
