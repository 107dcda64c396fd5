#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gmc/elem.hpp"
#include "gmc/errors.hpp"
#include "gmc/finset.hpp"

namespace gmc {

/// Which leg of a span: left lands in the source, right in the target.
enum class Side { Left, Right };

inline Side other(Side s) { return s == Side::Left ? Side::Right : Side::Left; }

inline constexpr Bound kDefaultCheckBound = 2;

class Span;

namespace detail {

inline unsigned long next_id() {
  static std::atomic<unsigned long> counter{0};
  return ++counter;
}

class SpanNode {
 public:
  enum class Kind { Graph, Fiber, Lift, Composite, LegPost };

  virtual ~SpanNode() = default;

  Kind kind;
  SetExpr source, target;
  MapF left, right;
  std::string sig;

  virtual bool contains(const Elem& e) const = 0;
  /// Elements whose leg on `side` equals v and whose other values are all
  /// within the bound; nullopt when this side has no finite fibers.
  virtual std::optional<std::vector<Elem>> side_fiber(Side side, const Elem& v, Bound b) const = 0;
  virtual bool side_enumerable(Side side) const = 0;
  virtual std::vector<Elem> enumerate(Bound b) const = 0;
  virtual std::vector<Elem> collect(Bound b) const { return enumerate(b); }

  const MapF& leg(Side s) const { return s == Side::Left ? left : right; }
  const SetExpr& end(Side s) const { return s == Side::Left ? source : target; }
};

}  // namespace detail

/// A span source <- apex -> target of finite or fiber-finite sets. Handles are
/// cheap to copy and immutable.
class Span {
 public:
  using Node = detail::SpanNode;
  using Kind = Node::Kind;

  Span() = default;
  explicit Span(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  const SetExpr& source() const { return node_->source; }
  const SetExpr& target() const { return node_->target; }
  const MapF& left() const { return node_->left; }
  const MapF& right() const { return node_->right; }
  const MapF& leg(Side s) const { return node_->leg(s); }
  const SetExpr& end(Side s) const { return node_->end(s); }
  Elem left_of(const Elem& e) const { return node_->left.apply(e); }
  Elem right_of(const Elem& e) const { return node_->right.apply(e); }
  Elem leg_of(Side s, const Elem& e) const { return node_->leg(s).apply(e); }
  const std::string& sig() const { return node_->sig; }
  Kind kind() const { return node_->kind; }
  const Node& node() const { return *node_; }
  bool valid() const { return node_ != nullptr; }

  bool contains(const Elem& e) const { return node_->contains(e); }

  /// All elements whose boundary and internal values lie within the bound,
  /// sorted.
  std::vector<Elem> enumerate(Bound b) const { return node_->enumerate(b); }
  /// The same elements in no particular order.
  std::vector<Elem> elements(Bound b) const { return node_->collect(b); }

  std::optional<std::vector<Elem>> side_fiber(Side s, const Elem& v, Bound b) const {
    return node_->side_fiber(s, v, b);
  }
  bool side_enumerable(Side s) const { return node_->side_enumerable(s); }

  /// Elements over the boundary pair (s, t) at the bound.
  std::vector<Elem> fiber(const Elem& s, const Elem& t, Bound b) const {
    Side use = side_enumerable(Side::Right) ? Side::Right : Side::Left;
    const Elem& fixed = use == Side::Right ? t : s;
    const Elem& other_v = use == Side::Right ? s : t;
    auto f = side_fiber(use, fixed, b);
    if (!f) throw InfeasibleEnumeration("no finite fibers for " + sig());
    std::vector<Elem> out;
    for (auto& e : *f)
      if (leg_of(gmc::other(use), e) == other_v) out.push_back(std::move(e));
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool same_span(const Span& a, const Span& b) { return a.sig() == b.sig(); }

 private:
  std::shared_ptr<const Node> node_;
};

namespace detail {

inline std::vector<Elem> sorted(std::vector<Elem> v) {
  std::sort(v.begin(), v.end());
  return v;
}

/// Apex given as a set, with explicit legs.
class GraphNode : public SpanNode {
 public:
  SetExpr apex;

  bool contains(const Elem& e) const override { return apex.contains(e); }

  std::optional<std::vector<Elem>> side_fiber(Side s, const Elem& v, Bound b) const override {
    std::vector<Elem> out;
    for (auto& e : leg(s).preimage(v, b))
      if (end(other(s)).within(leg(other(s)).apply(e), b)) out.push_back(std::move(e));
    return out;
  }

  bool side_enumerable(Side) const override { return true; }

  std::vector<Elem> enumerate(Bound b) const override {
    std::vector<Elem> out;
    for (const auto& e : apex.enumerate(b))
      if (source.within(left.apply(e), b) && target.within(right.apply(e), b)) out.push_back(e);
    return sorted(std::move(out));
  }
};

/// Apex known through its fibers over (source, target) pairs.
class FiberNode : public SpanNode {
 public:
  std::function<std::vector<Elem>(const Elem&, const Elem&)> fiber;
  std::function<bool(const Elem&)> member;

  bool contains(const Elem& e) const override { return member(e); }

  std::optional<std::vector<Elem>> side_fiber(Side s, const Elem& v, Bound b) const override {
    std::vector<Elem> out;
    for (const auto& w : end(other(s)).enumerate(b)) {
      auto f = s == Side::Left ? fiber(v, w) : fiber(w, v);
      out.insert(out.end(), f.begin(), f.end());
    }
    return out;
  }

  bool side_enumerable(Side) const override { return true; }

  std::vector<Elem> enumerate(Bound b) const override {
    std::vector<Elem> out;
    for (const auto& s : source.enumerate(b))
      for (const auto& t : target.enumerate(b)) {
        auto f = fiber(s, t);
        out.insert(out.end(), f.begin(), f.end());
      }
    return sorted(std::move(out));
  }
};

/// Lists of elements of a span, with the lifted legs.
class LiftNode : public SpanNode {
 public:
  Span base;

  bool contains(const Elem& e) const override {
    if (!e.is_nest()) return false;
    for (const auto& k : e.kids())
      if (!base.contains(k)) return false;
    return true;
  }

  std::optional<std::vector<Elem>> side_fiber(Side s, const Elem& v, Bound b) const override {
    if (!v.is_nest() || static_cast<long>(v.size()) > b) return std::vector<Elem>{};
    std::vector<std::vector<Elem>> fibers;
    for (const auto& k : v.kids()) {
      auto f = base.side_fiber(s, k, b);
      if (!f) return std::nullopt;
      if (f->empty()) return std::vector<Elem>{};
      fibers.push_back(std::move(*f));
    }
    const SetExpr& far = base.end(other(s));
    std::vector<std::vector<std::size_t>> weights(fibers.size());
    for (std::size_t i = 0; i < fibers.size(); ++i)
      for (const auto& e : fibers[i]) weights[i].push_back(leaves(far, base.leg_of(other(s), e)));
    std::vector<Elem> out;
    std::vector<Elem> cur;
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
      if (i == fibers.size()) {
        out.push_back(Elem::nest(cur));
        return;
      }
      for (std::size_t j = 0; j < fibers[i].size(); ++j) {
        if (used + weights[i][j] > static_cast<std::size_t>(b)) continue;
        cur.push_back(fibers[i][j]);
        rec(i + 1, used + weights[i][j]);
        cur.pop_back();
      }
    };
    rec(0, 0);
    return out;
  }

  bool side_enumerable(Side s) const override { return base.side_enumerable(s); }

  std::vector<Elem> enumerate(Bound b) const override { return sorted(collect(b)); }

  std::vector<Elem> collect(Bound b) const override {
    Side s = base.side_enumerable(Side::Right) ? Side::Right : Side::Left;
    std::vector<Elem> out;
    for (const auto& v : end(s).enumerate(b)) {
      auto f = side_fiber(s, v, b);
      if (!f) throw InfeasibleEnumeration("no finite fibers for " + sig);
      out.insert(out.end(), f->begin(), f->end());
    }
    return out;
  }
};

/// Wide pullback of a chain of at least two spans; elements are tuples.
class CompositeNode : public SpanNode {
 public:
  std::vector<Span> chain;

  bool contains(const Elem& e) const override {
    if (!e.is_nest() || e.size() != chain.size()) return false;
    for (std::size_t i = 0; i < chain.size(); ++i)
      if (!chain[i].contains(e[i])) return false;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
      if (!(chain[i].right_of(e[i]) == chain[i + 1].left_of(e[i + 1]))) return false;
    return true;
  }

  std::optional<std::vector<Elem>> side_fiber(Side s, const Elem& v, Bound b) const override {
    if (s == Side::Left) return join(v, std::nullopt, b);
    return join(std::nullopt, v, b);
  }

  bool side_enumerable(Side) const override { return split().has_value(); }

  std::vector<Elem> enumerate(Bound b) const override { return sorted(collect(b)); }

  std::vector<Elem> collect(Bound b) const override {
    auto r = join(std::nullopt, std::nullopt, b);
    if (!r) throw InfeasibleEnumeration("no finite fibers for " + sig);
    return std::move(*r);
  }

 private:
  static int depth(const SetExpr& s) { return s.is_fm() ? 1 + depth(s.base()) : 0; }

  /// Nodes before the split are walked left to right, the rest right to left.
  /// Unfixed ends are enumerated, so the shallower one is preferred.
  std::optional<std::size_t> split(bool lfixed = false, bool rfixed = false) const {
    const std::size_t n = chain.size();
    std::optional<std::size_t> best;
    int best_cost = 0;
    for (std::size_t k = 0; k <= n; ++k) {
      bool ok = true;
      for (std::size_t i = 0; i < k && ok; ++i) ok = chain[i].side_enumerable(Side::Left);
      for (std::size_t i = k; i < n && ok; ++i) ok = chain[i].side_enumerable(Side::Right);
      if (!ok) continue;
      int cost = std::max(k > 0 && !lfixed ? depth(source) : -1, k < n && !rfixed ? depth(target) : -1);
      if (!best || cost < best_cost) {
        best = k;
        best_cost = cost;
      }
    }
    return best;
  }

  struct Partial {
    std::vector<Elem> parts;
    Elem end;
  };

  std::optional<std::vector<Elem>> join(const std::optional<Elem>& lfix,
                                        const std::optional<Elem>& rfix, Bound b) const {
    auto k_opt = split(lfix.has_value(), rfix.has_value());
    if (!k_opt) return std::nullopt;
    const std::size_t n = chain.size();
    const std::size_t k = *k_opt;

    std::vector<Partial> lefts;
    if (k > 0) {
      std::vector<Elem> starts = lfix ? std::vector<Elem>{*lfix} : source.enumerate(b);
      for (auto& s : starts) lefts.push_back({{}, s});
      for (std::size_t i = 0; i < k; ++i) {
        std::vector<Partial> next;
        for (const auto& p : lefts) {
          auto f = chain[i].side_fiber(Side::Left, p.end, b);
          if (!f) return std::nullopt;
          for (auto& e : *f) {
            Elem r = chain[i].right_of(e);
            if (!chain[i].target().within(r, b)) continue;
            Partial q{p.parts, r};
            q.parts.push_back(e);
            next.push_back(std::move(q));
          }
        }
        lefts = std::move(next);
      }
    }

    std::vector<Partial> rights;
    if (k < n) {
      std::vector<Elem> starts = rfix ? std::vector<Elem>{*rfix} : target.enumerate(b);
      for (auto& t : starts) rights.push_back({{}, t});
      for (std::size_t i = n; i-- > k;) {
        std::vector<Partial> next;
        for (const auto& p : rights) {
          auto f = chain[i].side_fiber(Side::Right, p.end, b);
          if (!f) return std::nullopt;
          for (auto& e : *f) {
            Elem l = chain[i].left_of(e);
            if (!chain[i].source().within(l, b)) continue;
            Partial q{p.parts, l};
            q.parts.push_back(e);
            next.push_back(std::move(q));
          }
        }
        rights = std::move(next);
      }
    }

    std::vector<Elem> out;
    if (k == 0) {
      for (auto& p : rights) {
        if (lfix && !(p.end == *lfix)) continue;
        std::reverse(p.parts.begin(), p.parts.end());
        out.push_back(Elem::nest(std::move(p.parts)));
      }
    } else if (k == n) {
      for (auto& p : lefts) {
        if (rfix && !(p.end == *rfix)) continue;
        out.push_back(Elem::nest(std::move(p.parts)));
      }
    } else {
      std::unordered_map<Elem, std::vector<const Partial*>, ElemHash> by_end;
      for (const auto& p : lefts) by_end[p.end].push_back(&p);
      for (const auto& r : rights) {
        auto it = by_end.find(r.end);
        if (it == by_end.end()) continue;
        for (const Partial* l : it->second) {
          std::vector<Elem> parts = l->parts;
          parts.insert(parts.end(), r.parts.rbegin(), r.parts.rend());
          out.push_back(Elem::nest(std::move(parts)));
        }
      }
    }
    return out;
  }
};

/// The same apex with one leg post-composed with a map.
class LegPostNode : public SpanNode {
 public:
  Span base;
  Side side = Side::Right;
  MapF post;

  bool contains(const Elem& e) const override { return base.contains(e); }

  std::optional<std::vector<Elem>> side_fiber(Side s, const Elem& v, Bound b) const override {
    if (s == side) {
      std::vector<Elem> out;
      for (const auto& w : post.preimage(v, b)) {
        auto f = base.side_fiber(s, w, b);
        if (!f) return std::nullopt;
        out.insert(out.end(), f->begin(), f->end());
      }
      return out;
    }
    auto f = base.side_fiber(s, v, b);
    if (!f) return std::nullopt;
    std::vector<Elem> out;
    for (auto& e : *f)
      if (end(side).within(leg(side).apply(e), b)) out.push_back(std::move(e));
    return out;
  }

  bool side_enumerable(Side s) const override { return base.side_enumerable(s); }

  std::vector<Elem> enumerate(Bound b) const override {
    std::vector<Elem> out;
    for (auto& e : base.enumerate(b))
      if (end(side).within(leg(side).apply(e), b)) out.push_back(std::move(e));
    return out;
  }
};

}  // namespace detail

/// Span with an explicit apex set. Legs must start at the apex.
inline Span graph_span(const SetExpr& apex, const MapF& left, const MapF& right,
                       std::string name = "") {
  if (!(left.dom() == apex) || !(right.dom() == apex))
    throw DomainError("span legs must start at the apex " + apex.str());
  auto n = std::make_shared<detail::GraphNode>();
  n->kind = Span::Kind::Graph;
  n->apex = apex;
  n->source = left.cod();
  n->target = right.cod();
  n->left = left;
  n->right = right;
  n->sig = name.empty() ? "g#" + std::to_string(detail::next_id()) : name;
  return Span(std::move(n));
}

/// Span from a finite table of elements with their leg values.
inline Span table_span(const SetExpr& source, const SetExpr& target,
                       const std::vector<std::tuple<Elem, Elem, Elem>>& rows,
                       std::string name = "") {
  std::vector<Elem> apex;
  std::vector<std::pair<Elem, Elem>> l, r;
  for (const auto& [e, s, t] : rows) {
    apex.push_back(e);
    l.emplace_back(e, s);
    r.emplace_back(e, t);
  }
  SetExpr a = SetExpr::fin(apex);
  return graph_span(a, MapF::table(a, source, l), MapF::table(a, target, r), std::move(name));
}

/// Span known through finite fibers; legs read tokens.
inline Span fiber_span(const SetExpr& source, const SetExpr& target, const MapF& left,
                       const MapF& right,
                       std::function<std::vector<Elem>(const Elem&, const Elem&)> fiber,
                       std::function<bool(const Elem&)> member, std::string name) {
  auto n = std::make_shared<detail::FiberNode>();
  n->kind = Span::Kind::Fiber;
  n->source = source;
  n->target = target;
  n->left = left;
  n->right = right;
  n->fiber = std::move(fiber);
  n->member = std::move(member);
  n->sig = name + "#" + std::to_string(detail::next_id());
  return Span(std::move(n));
}

/// x <- x -> x.
inline Span identity(const SetExpr& x) {
  return graph_span(x, MapF::identity(x), MapF::identity(x), "i" + x.str());
}

/// The graph of f read forwards: dom f <- dom f -> cod f.
inline Span embed(const MapF& f) {
  return graph_span(f.dom(), MapF::identity(f.dom()), f, "emb(" + f.key() + ")");
}

/// The graph of f read backwards: cod f <- dom f -> dom f.
inline Span star(const MapF& f) {
  return graph_span(f.dom(), f, MapF::identity(f.dom()), "star(" + f.key() + ")");
}

inline void check_chain(const std::vector<Span>& chain) {
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    if (!(chain[i].target() == chain[i + 1].source()))
      throw ChainMismatch("position " + std::to_string(i) + " ends at " + chain[i].target().str() +
                          " but the next vector starts at " + chain[i + 1].source().str());
}

/// n-fold composite: the identity on `anchor` for n = 0, the argument for
/// n = 1, otherwise the wide pullback with tuple elements.
inline Span compose_n(const std::vector<Span>& chain, std::optional<SetExpr> anchor = std::nullopt) {
  if (chain.empty()) {
    if (!anchor) throw ChainMismatch("empty chain needs an anchoring object");
    return identity(*anchor);
  }
  if (anchor && !(chain.front().source() == *anchor))
    throw ChainMismatch("chain does not start at " + anchor->str());
  check_chain(chain);
  if (chain.size() == 1) return chain[0];
  auto n = std::make_shared<detail::CompositeNode>();
  n->kind = Span::Kind::Composite;
  n->chain = chain;
  n->source = chain.front().source();
  n->target = chain.back().target();
  n->sig = "(";
  for (std::size_t i = 0; i < chain.size(); ++i) n->sig += (i ? " ; " : "") + chain[i].sig();
  n->sig += ")";
  SetExpr apex = SetExpr::any(n->sig);
  n->left = MapF::compose_seq(
      {MapF::proj(apex, SetExpr::any(chain.front().sig()), 0), chain.front().left()});
  n->right = MapF::compose_seq(
      {MapF::proj(apex, SetExpr::any(chain.back().sig()), chain.size() - 1), chain.back().right()});
  return Span(std::move(n));
}

/// The same apex with the leg on `side` followed by g.
inline Span post_leg(const Span& a, Side side, const MapF& g) {
  if (!(g.dom() == a.end(side)))
    throw SideMismatch(g.name() + " starts at " + g.dom().str() + " but the leg ends at " +
                       a.end(side).str());
  auto n = std::make_shared<detail::LegPostNode>();
  n->kind = Span::Kind::LegPost;
  n->base = a;
  n->side = side;
  n->post = g;
  n->source = side == Side::Left ? g.cod() : a.source();
  n->target = side == Side::Right ? g.cod() : a.target();
  n->left = side == Side::Left ? MapF::compose_seq({a.left(), g}) : a.left();
  n->right = side == Side::Right ? MapF::compose_seq({a.right(), g}) : a.right();
  n->sig = (side == Side::Left ? "L[" : "R[") + g.key() + "](" + a.sig() + ")";
  return Span(std::move(n));
}

/// Scalar action. On the right, g : y -> z follows the right leg; on the left,
/// f : w -> x restricts the source by composing with the graph of f.
inline Span act_scalar(const MapF& f, const Span& a, Side side) {
  if (side == Side::Right) return post_leg(a, Side::Right, f);
  if (!(f.cod() == a.source()))
    throw SideMismatch(f.name() + " lands in " + f.cod().str() + " but the span starts at " +
                       a.source().str());
  return compose_n({embed(f), a});
}

/// Scalar opaction: composition with star(f) on the given side.
inline Span act_opscalar(const MapF& f, const Span& a, Side side) {
  if (side == Side::Left) {
    if (!(f.dom() == a.source()))
      throw SideMismatch(f.name() + " starts at " + f.dom().str() + " but the span starts at " +
                         a.source().str());
    return compose_n({star(f), a});
  }
  if (!(f.cod() == a.target()))
    throw SideMismatch(f.name() + " lands in " + f.cod().str() + " but the span ends at " +
                       a.target().str());
  return compose_n({a, star(f)});
}

/// Lists of elements: T(a) = (T a_o, T left, T right).
inline Span lift(const Span& a) {
  auto n = std::make_shared<detail::LiftNode>();
  n->kind = Span::Kind::Lift;
  n->base = a;
  n->source = SetExpr::fm(a.source());
  n->target = SetExpr::fm(a.target());
  n->left = MapF::map_of(a.left());
  n->right = MapF::map_of(a.right());
  n->sig = "T" + (a.kind() == Span::Kind::Graph || a.kind() == Span::Kind::Fiber
                      ? a.sig()
                      : "{" + a.sig() + "}");
  return Span(std::move(n));
}

inline Span lift_n(const Span& a, int k) {
  Span s = a;
  for (int i = 0; i < k; ++i) s = lift(s);
  return s;
}

/// Components of an element of compose_n over a chain of length n.
inline std::vector<Elem> components(std::size_t n, const Elem& e) {
  if (n == 0) return {};
  if (n == 1) return {e};
  return e.kid_vector();
}

inline Elem from_components(std::vector<Elem> parts) {
  if (parts.size() == 1) return parts[0];
  return Elem::nest(std::move(parts));
}

}  // namespace gmc
