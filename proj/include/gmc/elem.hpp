#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gmc/errors.hpp"

namespace gmc {

/// An element of a finite set or of an iterated free-monoid set: either an
/// atom or a finite ordered list of elements. Immutable; copies share nodes.
class Elem {
 public:
  /// The empty list.
  Elem() : node_(empty_node()) {}

  static Elem atom(std::string name) {
    auto n = std::make_shared<Node>();
    n->is_atom = true;
    n->hash = std::hash<std::string>{}(name) * 0x9e3779b97f4a7c15ULL + 0x51ed27;
    n->name = std::move(name);
    return Elem(std::move(n));
  }

  static Elem nest(std::vector<Elem> kids) {
    auto n = std::make_shared<Node>();
    n->is_atom = false;
    std::size_t h = 0xcbf29ce484222325ULL ^ kids.size();
    for (const auto& k : kids) h = (h ^ k.hash()) * 0x100000001b3ULL;
    n->hash = h;
    n->kids = std::move(kids);
    return Elem(std::move(n));
  }

  static Elem nest(std::initializer_list<Elem> kids) {
    return nest(std::vector<Elem>(kids));
  }

  static Elem list() { return Elem(); }

  bool is_atom() const { return node_->is_atom; }
  bool is_nest() const { return !node_->is_atom; }
  const std::string& name() const { return node_->name; }
  std::span<const Elem> kids() const { return node_->kids; }
  const std::vector<Elem>& kid_vector() const { return node_->kids; }
  std::size_t size() const { return node_->kids.size(); }
  const Elem& operator[](std::size_t i) const {
    if (i >= node_->kids.size()) throw DomainError("no entry " + std::to_string(i) + " in " + str());
    return node_->kids[i];
  }
  std::size_t hash() const { return node_->hash; }

  /// Uniform nesting depth: 0 for atoms, 1 + depth of children for lists.
  /// Lists whose children disagree, and empty lists, report the depth of
  /// their first child or 1.
  int depth() const {
    if (is_atom()) return 0;
    if (size() == 0) return 1;
    return 1 + (*this)[0].depth();
  }

  friend bool operator==(const Elem& a, const Elem& b) {
    if (a.node_ == b.node_) return true;
    if (a.node_->hash != b.node_->hash) return false;
    if (a.node_->is_atom != b.node_->is_atom) return false;
    if (a.node_->is_atom) return a.node_->name == b.node_->name;
    return a.node_->kids == b.node_->kids;
  }

  /// Atoms precede lists; atoms by name; lists lexicographically.
  friend std::strong_ordering operator<=>(const Elem& a, const Elem& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (a.is_atom() != b.is_atom())
      return a.is_atom() ? std::strong_ordering::less : std::strong_ordering::greater;
    if (a.is_atom()) {
      int c = a.name().compare(b.name());
      return c < 0 ? std::strong_ordering::less
                   : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }
    const auto& x = a.node_->kids;
    const auto& y = b.node_->kids;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
      auto c = x[i] <=> y[i];
      if (c != 0) return c;
    }
    return x.size() <=> y.size();
  }

  std::string str() const {
    std::string out;
    write(out);
    return out;
  }

  void write(std::string& out) const {
    if (is_atom()) {
      if (plain_name(name())) {
        out += name();
      } else {
        out += '"';
        for (char c : name()) {
          if (c == '"' || c == '\\') out += '\\';
          out += c;
        }
        out += '"';
      }
      return;
    }
    out += '[';
    for (std::size_t i = 0; i < size(); ++i) {
      if (i) out += ", ";
      (*this)[i].write(out);
    }
    out += ']';
  }

  static bool plain_name(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
      bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                c == '_' || c == '\'' || c == '.' || c == '+' || c == '-' || c == '*' ||
                c == '#' || c == '@';
      if (!ok) return false;
    }
    return true;
  }

  /// Parses the textual form produced by str().
  static Elem parse(std::string_view text) {
    std::size_t pos = 0;
    Elem e = parse_at(text, pos);
    skip_ws(text, pos);
    if (pos != text.size())
      throw DomainError("trailing characters in element text '" + std::string(text) + "'");
    return e;
  }

 private:
  struct Node {
    bool is_atom = false;
    std::size_t hash = 0;
    std::string name;
    std::vector<Elem> kids;
  };

  explicit Elem(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static const std::shared_ptr<const Node>& empty_node() {
    static const std::shared_ptr<const Node> n = [] {
      auto m = std::make_shared<Node>();
      m->hash = 0xcbf29ce484222325ULL;
      return std::shared_ptr<const Node>(m);
    }();
    return n;
  }

  static void skip_ws(std::string_view t, std::size_t& p) {
    while (p < t.size() && (t[p] == ' ' || t[p] == '\t' || t[p] == '\n' || t[p] == '\r')) ++p;
  }

  static Elem parse_at(std::string_view t, std::size_t& p) {
    skip_ws(t, p);
    if (p >= t.size()) throw DomainError("unexpected end of element text");
    if (t[p] == '[') {
      ++p;
      std::vector<Elem> kids;
      skip_ws(t, p);
      if (p < t.size() && t[p] == ']') {
        ++p;
        return Elem::nest(std::move(kids));
      }
      while (true) {
        kids.push_back(parse_at(t, p));
        skip_ws(t, p);
        if (p >= t.size()) throw DomainError("unterminated list in element text");
        if (t[p] == ',') {
          ++p;
          continue;
        }
        if (t[p] == ']') {
          ++p;
          break;
        }
        throw DomainError("expected ',' or ']' in element text");
      }
      return Elem::nest(std::move(kids));
    }
    if (t[p] == '"') {
      ++p;
      std::string name;
      while (p < t.size() && t[p] != '"') {
        if (t[p] == '\\' && p + 1 < t.size()) ++p;
        name += t[p++];
      }
      if (p >= t.size()) throw DomainError("unterminated quoted atom");
      ++p;
      return Elem::atom(std::move(name));
    }
    std::size_t start = p;
    while (p < t.size() && t[p] != ',' && t[p] != ']' && t[p] != '[' && t[p] != ' ' &&
           t[p] != '\t' && t[p] != '\n')
      ++p;
    if (p == start) throw DomainError("empty atom in element text");
    return Elem::atom(std::string(t.substr(start, p - start)));
  }

  std::shared_ptr<const Node> node_;
};

inline Elem atom(std::string name) { return Elem::atom(std::move(name)); }
inline Elem list(std::vector<Elem> kids) { return Elem::nest(std::move(kids)); }
inline Elem list(std::initializer_list<Elem> kids) { return Elem::nest(kids); }

struct ElemHash {
  std::size_t operator()(const Elem& e) const { return e.hash(); }
};

}  // namespace gmc

template <>
struct std::hash<gmc::Elem> {
  std::size_t operator()(const gmc::Elem& e) const { return e.hash(); }
};
