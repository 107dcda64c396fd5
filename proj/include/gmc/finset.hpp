#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "gmc/elem.hpp"
#include "gmc/errors.hpp"

namespace gmc {

/// Size limit for bounded enumeration: every list has at most `bound` entries
/// and at most `bound` leaves, counted relative to the set it lives in.
using Bound = int;

class SetExpr;
std::size_t leaves(const SetExpr& s, const Elem& e);

/// A finite set, the free-monoid set of lists over a set, or an opaque carrier
/// (used for apexes that are only known through their fibers).
class SetExpr {
 public:
  enum class Kind { Fin, FM, Any };

  SetExpr() : SetExpr(fin({})) {}

  static SetExpr fin(std::vector<Elem> elems) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Fin;
    std::sort(elems.begin(), elems.end());
    for (std::size_t i = 1; i < elems.size(); ++i)
      if (elems[i] == elems[i - 1])
        throw DomainError("finite set lists " + elems[i].str() + " twice");
    n->members.reserve(elems.size());
    for (const auto& e : elems) n->members.insert(e);
    n->elems = std::move(elems);
    n->text = "{";
    for (std::size_t i = 0; i < n->elems.size(); ++i) {
      if (i) n->text += ", ";
      n->text += n->elems[i].str();
    }
    n->text += "}";
    return SetExpr(std::move(n));
  }

  static SetExpr atoms(std::initializer_list<const char*> names) {
    std::vector<Elem> es;
    for (const char* s : names) es.push_back(Elem::atom(s));
    return fin(std::move(es));
  }

  static SetExpr fm(const SetExpr& base) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::FM;
    n->base = std::make_shared<SetExpr>(base);
    n->text = "T" + (base.kind() == Kind::Fin && base.size() > 3 ? "(" + base.str() + ")"
                                                                  : base.str());
    return SetExpr(std::move(n));
  }

  /// T^n applied to base.
  static SetExpr fm_n(const SetExpr& base, int n) {
    SetExpr s = base;
    for (int i = 0; i < n; ++i) s = fm(s);
    return s;
  }

  static SetExpr any(std::string label) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Any;
    n->text = "<" + label + ">";
    return SetExpr(std::move(n));
  }

  Kind kind() const { return node_->kind; }
  bool is_fin() const { return kind() == Kind::Fin; }
  bool is_fm() const { return kind() == Kind::FM; }
  const std::vector<Elem>& elements() const { return node_->elems; }
  std::size_t size() const { return node_->elems.size(); }
  const SetExpr& base() const { return *node_->base; }
  const std::string& str() const { return node_->text; }

  bool contains(const Elem& e) const {
    switch (kind()) {
      case Kind::Fin:
        return node_->members.count(e) > 0;
      case Kind::FM:
        if (!e.is_nest()) return false;
        for (const auto& k : e.kids())
          if (!base().contains(k)) return false;
        return true;
      case Kind::Any:
        return true;
    }
    return false;
  }

  /// Whether e (assumed a member) satisfies the size limit.
  bool within(const Elem& e, Bound b) const {
    if (kind() != Kind::FM) return true;
    if (static_cast<long>(e.size()) > b) return false;
    if (static_cast<long>(leaves(*this, e)) > b) return false;
    for (const auto& k : e.kids())
      if (!base().within(k, b)) return false;
    return true;
  }

  /// Members within the bound, in a fixed order: Fin sets in element order;
  /// list sets by length, then lexicographically.
  std::vector<Elem> enumerate(Bound b) const {
    if (kind() == Kind::Fin) return node_->elems;
    if (kind() == Kind::Any) throw InfeasibleEnumeration("cannot enumerate " + str());
    std::lock_guard<std::mutex> lock(node_->cache_mutex);
    auto it = node_->enum_cache.find(b);
    if (it != node_->enum_cache.end()) return *it->second;
    auto out = std::make_unique<std::vector<Elem>>();
    const auto items = base().enumerate(std::max(b, 0));
    std::vector<std::size_t> weights;
    weights.reserve(items.size());
    for (const auto& it2 : items) weights.push_back(leaves(base(), it2));
    std::vector<Elem> cur;
    for (int len = 0; len <= b; ++len) {
      std::function<void(std::size_t)> rec = [&](std::size_t used) {
        if (static_cast<int>(cur.size()) == len) {
          out->push_back(Elem::nest(cur));
          return;
        }
        for (std::size_t i = 0; i < items.size(); ++i) {
          if (used + weights[i] > static_cast<std::size_t>(b)) continue;
          if (!base().within(items[i], b)) continue;
          cur.push_back(items[i]);
          rec(used + weights[i]);
          cur.pop_back();
        }
      };
      rec(0);
    }
    std::vector<Elem> ref = *out;
    node_->enum_cache.emplace(b, std::move(out));
    return ref;
  }

  friend bool operator==(const SetExpr& a, const SetExpr& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
      case Kind::Fin:
        return a.node_->elems == b.node_->elems;
      case Kind::FM:
        return a.base() == b.base();
      case Kind::Any:
        return a.node_->text == b.node_->text;
    }
    return false;
  }

  /// Equal, or one side opaque.
  bool compatible(const SetExpr& o) const {
    return kind() == Kind::Any || o.kind() == Kind::Any || *this == o;
  }

 private:
  struct Node {
    Kind kind = Kind::Fin;
    std::vector<Elem> elems;
    std::unordered_set<Elem, ElemHash> members;
    std::shared_ptr<SetExpr> base;
    std::string text;
    mutable std::mutex cache_mutex;
    mutable std::map<Bound, std::unique_ptr<std::vector<Elem>>> enum_cache;
  };

  explicit SetExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

/// Number of base leaves in e relative to s: elements of finite or opaque sets
/// count 1, lists count the sum of their entries.
inline std::size_t leaves(const SetExpr& s, const Elem& e) {
  if (!s.is_fm()) return 1;
  std::size_t n = 0;
  for (const auto& k : e.kids()) n += leaves(s.base(), k);
  return n;
}

/// A finitely presented map between sets.
class MapF {
 public:
  enum class Rule {
    Table,
    Identity,
    Singleton,
    Concat,
    Flatten,
    MapOf,
    ComposeSeq,
    ConstTo,
    Proj,
    Tuple,
    Fn
  };

  MapF() : MapF(identity(SetExpr())) {}

  static MapF table(const SetExpr& dom, const SetExpr& cod,
                    const std::vector<std::pair<Elem, Elem>>& graph) {
    if (!dom.is_fin()) throw DomainError("table rule needs a finite domain, got " + dom.str());
    auto n = base(Rule::Table, dom, cod, "table");
    for (const auto& [k, v] : graph) {
      if (!dom.contains(k)) throw DomainError(k.str() + " is not in " + dom.str());
      if (!cod.contains(v)) throw CodomainMismatch(v.str() + " is not in " + cod.str());
      n->table[k] = v;
    }
    for (const auto& e : dom.elements())
      if (!n->table.count(e)) throw RuleError("table has no entry for " + e.str());
    return MapF(std::move(n));
  }

  static MapF identity(const SetExpr& s) { return MapF(base(Rule::Identity, s, s, "id")); }

  static MapF singleton(const SetExpr& s) {
    return MapF(base(Rule::Singleton, s, SetExpr::fm(s), "e"));
  }

  static MapF concat(const SetExpr& s) {
    return MapF(base(Rule::Concat, SetExpr::fm_n(s, 2), SetExpr::fm(s), "m"));
  }

  /// T^n s -> T s. Level 0 is the singleton map, level 1 the identity on T s.
  static MapF flatten(const SetExpr& s, int n) {
    if (n < 0) throw DomainError("negative flatten level");
    if (n == 0) return singleton(s);
    auto node = base(Rule::Flatten, SetExpr::fm_n(s, n), SetExpr::fm(s),
                     "m" + std::to_string(n));
    node->level = n;
    return MapF(std::move(node));
  }

  static MapF map_of(const MapF& f) {
    auto n = base(Rule::MapOf, SetExpr::fm(f.dom()), SetExpr::fm(f.cod()), "T(" + f.name() + ")");
    n->parts = {f};
    return MapF(std::move(n));
  }

  /// T^k f.
  static MapF map_of_n(const MapF& f, int k) {
    MapF g = f;
    for (int i = 0; i < k; ++i) g = map_of(g);
    return g;
  }

  /// Applies fs in order, first to last.
  static MapF compose_seq(std::vector<MapF> fs) {
    if (fs.empty()) throw DomainError("empty composition sequence");
    if (fs.size() == 1) return fs[0];
    std::string nm;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      if (i && !fs[i - 1].cod().compatible(fs[i].dom()))
        throw CodomainMismatch(fs[i - 1].name() + " lands in " + fs[i - 1].cod().str() +
                               " but " + fs[i].name() + " starts at " + fs[i].dom().str());
      nm = i ? fs[i].name() + "." + nm : fs[i].name();
    }
    auto n = base(Rule::ComposeSeq, fs.front().dom(), fs.back().cod(), nm);
    n->parts = std::move(fs);
    return MapF(std::move(n));
  }

  static MapF const_to(const SetExpr& dom, const SetExpr& cod, Elem c) {
    if (!cod.contains(c)) throw CodomainMismatch(c.str() + " is not in " + cod.str());
    auto n = base(Rule::ConstTo, dom, cod, "const " + c.str());
    n->value = std::move(c);
    return MapF(std::move(n));
  }

  static MapF proj(const SetExpr& dom, const SetExpr& cod, std::size_t i) {
    auto n = base(Rule::Proj, dom, cod, "pr" + std::to_string(i));
    n->index = i;
    return MapF(std::move(n));
  }

  /// e -> [f1(e), ..., fk(e)].
  static MapF tuple(const SetExpr& dom, const SetExpr& cod, std::vector<MapF> fs) {
    std::string nm = "<";
    for (std::size_t i = 0; i < fs.size(); ++i) nm += (i ? "," : "") + fs[i].name();
    auto n = base(Rule::Tuple, dom, cod, nm + ">");
    n->parts = std::move(fs);
    return MapF(std::move(n));
  }

  /// A computable rule given as a function; the result is checked against the
  /// codomain on every checked evaluation.
  static MapF fn(const SetExpr& dom, const SetExpr& cod, std::string name,
                 std::function<Elem(const Elem&)> f) {
    auto n = base(Rule::Fn, dom, cod, std::move(name));
    n->fn = std::move(f);
    return MapF(std::move(n));
  }

  Rule rule() const { return node_->rule; }
  /// Structural rules are keyed by shape; the others by construction.
  const std::string& key() const { return node_->key; }
  const SetExpr& dom() const { return node_->dom; }
  const SetExpr& cod() const { return node_->cod; }
  const std::string& name() const { return node_->name; }
  const std::vector<MapF>& parts() const { return node_->parts; }
  int level() const { return node_->level; }
  bool is_identity() const { return rule() == Rule::Identity; }

  /// Checked evaluation.
  Elem operator()(const Elem& e) const {
    if (!dom().contains(e)) throw DomainError(e.str() + " is not in " + dom().str() + " (" + name() + ")");
    Elem r = apply(e);
    if (rule() == Rule::Fn && !cod().contains(r))
      throw RuleError(name() + " sent " + e.str() + " to " + r.str() + " outside " + cod().str());
    return r;
  }

  /// Evaluation without membership checks.
  Elem apply(const Elem& e) const {
    const Node& n = *node_;
    switch (n.rule) {
      case Rule::Table: {
        auto it = n.table.find(e);
        if (it == n.table.end()) throw RuleError("table has no entry for " + e.str());
        return it->second;
      }
      case Rule::Identity:
        return e;
      case Rule::Singleton:
        return Elem::nest({e});
      case Rule::Concat:
        return concat_elem(e);
      case Rule::Flatten:
        return flatten_elem(e, n.level);
      case Rule::MapOf: {
        expect_list(e);
        std::vector<Elem> out;
        out.reserve(e.size());
        for (const auto& k : e.kids()) out.push_back(n.parts[0].apply(k));
        return Elem::nest(std::move(out));
      }
      case Rule::ComposeSeq: {
        Elem cur = e;
        for (const auto& f : n.parts) cur = f.apply(cur);
        return cur;
      }
      case Rule::ConstTo:
        return n.value;
      case Rule::Proj:
        expect_list(e);
        if (n.index >= e.size())
          throw DomainError("projection " + std::to_string(n.index) + " of " + e.str());
        return e[n.index];
      case Rule::Tuple: {
        std::vector<Elem> out;
        out.reserve(n.parts.size());
        for (const auto& f : n.parts) out.push_back(f.apply(e));
        return Elem::nest(std::move(out));
      }
      case Rule::Fn:
        return n.fn(e);
    }
    throw RuleError("unknown rule");
  }

  static Elem concat_elem(const Elem& e) {
    expect_list(e);
    std::vector<Elem> out;
    for (const auto& k : e.kids()) {
      expect_list(k);
      out.insert(out.end(), k.kids().begin(), k.kids().end());
    }
    return Elem::nest(std::move(out));
  }

  static Elem flatten_elem(const Elem& e, int level) {
    if (level == 0) return Elem::nest({e});
    if (level == 1) return e;
    expect_list(e);
    std::vector<Elem> out;
    for (const auto& k : e.kids()) {
      Elem f = flatten_elem(k, level - 1);
      out.insert(out.end(), f.kids().begin(), f.kids().end());
    }
    return Elem::nest(std::move(out));
  }

  /// Members x of the domain with f(x) = v. With a bound, only members within
  /// it are returned; without one the rule must have finite fibers.
  std::vector<Elem> preimage(const Elem& v, std::optional<Bound> b) const {
    const Node& n = *node_;
    switch (n.rule) {
      case Rule::Identity:
        if (dom().contains(v) && (!b || dom().within(v, *b))) return {v};
        return {};
      case Rule::Singleton:
        if (v.is_nest() && v.size() == 1 && dom().contains(v[0]) && (!b || dom().within(v[0], *b)))
          return {v[0]};
        return {};
      case Rule::MapOf: {
        if (!v.is_nest()) return {};
        if (b && static_cast<long>(v.size()) > *b) return {};
        std::vector<std::vector<Elem>> fibers;
        for (const auto& k : v.kids()) {
          fibers.push_back(n.parts[0].preimage(k, b));
          if (fibers.back().empty()) return {};
        }
        std::vector<Elem> out;
        std::vector<Elem> cur;
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
          if (i == fibers.size()) {
            Elem l = Elem::nest(cur);
            if (!b || dom().within(l, *b)) out.push_back(std::move(l));
            return;
          }
          for (const auto& x : fibers[i]) {
            cur.push_back(x);
            rec(i + 1);
            cur.pop_back();
          }
        };
        rec(0);
        return out;
      }
      case Rule::ComposeSeq: {
        std::vector<Elem> cur = {v};
        for (std::size_t i = n.parts.size(); i-- > 0;) {
          std::vector<Elem> next;
          for (const auto& y : cur) {
            auto pre = n.parts[i].preimage(y, b);
            next.insert(next.end(), pre.begin(), pre.end());
          }
          cur = std::move(next);
        }
        std::sort(cur.begin(), cur.end());
        cur.erase(std::unique(cur.begin(), cur.end()), cur.end());
        return cur;
      }
      default:
        break;
    }
    if (dom().is_fin()) return index_lookup(v, -1);
    if (!b)
      throw InfeasibleEnumeration("fibers of " + name() + " on " + dom().str() +
                                  " need a bound");
    return index_lookup(v, *b);
  }

  std::string str() const { return name() + " : " + dom().str() + " -> " + cod().str(); }

 private:
  struct Node {
    Rule rule = Rule::Identity;
    SetExpr dom, cod;
    std::string name;
    std::unordered_map<Elem, Elem, ElemHash> table;
    std::vector<MapF> parts;
    Elem value;
    std::size_t index = 0;
    int level = 0;
    std::function<Elem(const Elem&)> fn;
    std::string key;
    mutable std::mutex cache_mutex;
    mutable std::map<Bound, std::unordered_map<Elem, std::vector<Elem>, ElemHash>> fibers;
  };

  static std::shared_ptr<Node> base(Rule r, const SetExpr& dom, const SetExpr& cod, std::string name) {
    auto n = std::make_shared<Node>();
    n->rule = r;
    n->dom = dom;
    n->cod = cod;
    n->name = std::move(name);
    return n;
  }

  static void expect_list(const Elem& e) {
    if (!e.is_nest()) throw DomainError("expected a list, got " + e.str());
  }

  std::vector<Elem> index_lookup(const Elem& v, Bound b) const {
    std::lock_guard<std::mutex> lock(node_->cache_mutex);
    auto it = node_->fibers.find(b);
    if (it == node_->fibers.end()) {
      std::unordered_map<Elem, std::vector<Elem>, ElemHash> idx;
      for (const auto& x : dom().enumerate(b < 0 ? 0 : b)) idx[apply(x)].push_back(x);
      it = node_->fibers.emplace(b, std::move(idx)).first;
    }
    auto f = it->second.find(v);
    if (f == it->second.end()) return {};
    return f->second;
  }

  explicit MapF(std::shared_ptr<Node> n) {
    static std::atomic<unsigned long> counter{0};
    switch (n->rule) {
      case Rule::Identity:
      case Rule::Singleton:
      case Rule::Concat:
      case Rule::Flatten:
        n->key = n->name + "@" + n->dom.str();
        break;
      case Rule::MapOf:
        n->key = "T(" + n->parts[0].key() + ")";
        break;
      case Rule::ComposeSeq:
        for (const auto& f : n->parts) n->key += (n->key.empty() ? "" : ";") + f.key();
        break;
      default:
        n->key = n->name + "#" + std::to_string(++counter);
    }
    node_ = std::move(n);
  }

  std::shared_ptr<const Node> node_;
};

inline Elem eval(const MapF& f, const Elem& e) { return f(e); }

/// A set known through finite fibers over index pairs.
struct FiberFiniteSet {
  std::string label;
  std::function<std::vector<Elem>(const Elem&, const Elem&)> fiber;
};

struct Pullback {
  /// Present when the apex is finite.
  std::optional<SetExpr> apex;
  /// Present when the apex is only fiber-finite; fibers are indexed by the
  /// pair (c, c) of the shared value.
  std::optional<FiberFiniteSet> lazy;
  MapF proj_left;
  MapF proj_right;
};

/// Pairs [a, b] with f(a) = g(b).
inline Pullback pullback(const MapF& f, const MapF& g) {
  if (!(f.cod() == g.cod()))
    throw CodomainMismatch(f.cod().str() + " vs " + g.cod().str());
  SetExpr label = SetExpr::any(f.name() + " x " + g.name());
  if (f.dom().is_fin() || g.dom().is_fin()) {
    std::vector<Elem> pairs;
    if (f.dom().is_fin()) {
      for (const auto& a : f.dom().elements())
        for (const auto& b : g.preimage(f.apply(a), std::nullopt))
          pairs.push_back(Elem::nest({a, b}));
    } else {
      for (const auto& b : g.dom().elements())
        for (const auto& a : f.preimage(g.apply(b), std::nullopt))
          pairs.push_back(Elem::nest({a, b}));
    }
    SetExpr apex = SetExpr::fin(std::move(pairs));
    return {apex, std::nullopt, MapF::proj(apex, f.dom(), 0), MapF::proj(apex, g.dom(), 1)};
  }
  // Both sides infinite: fibers must be finite on both.
  MapF ff = f, gg = g;
  FiberFiniteSet lazy{label.str(), [ff, gg](const Elem& c, const Elem& c2) {
                        std::vector<Elem> out;
                        if (!(c == c2)) return out;
                        for (const auto& a : ff.preimage(c, std::nullopt))
                          for (const auto& b : gg.preimage(c, std::nullopt))
                            out.push_back(Elem::nest({a, b}));
                        return out;
                      }};
  return {std::nullopt, lazy, MapF::proj(label, f.dom(), 0), MapF::proj(label, g.dom(), 1)};
}

/// All lists [b1..bn] with g(bi) equal to the i-th entry of target.
inline std::vector<Elem> list_decompositions(const Elem& target, const MapF& g) {
  return MapF::map_of(g).preimage(target, std::nullopt);
}

}  // namespace gmc
