#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gmc/cell.hpp"

namespace gmc {

/// The free monoid monad on sets: T x = lists over x.
struct ListMonad {
  static SetExpr on_objects(const SetExpr& x) { return SetExpr::fm(x); }
  static MapF on_maps(const MapF& f) { return MapF::map_of(f); }
  static MapF mult(const SetExpr& x) { return MapF::concat(x); }
  static MapF unit(const SetExpr& x) { return MapF::singleton(x); }
};

struct MonadLawFailure {
  std::string law;
  Elem witness;
};

/// m . e_T = id, m . T e = id and m . m_T = m . T m on lists over x within the
/// bound.
inline std::optional<MonadLawFailure> check_monad_laws(const SetExpr& x, Bound b) {
  MapF m = ListMonad::mult(x);
  MapF e_t = ListMonad::unit(SetExpr::fm(x));
  MapF t_e = MapF::map_of(ListMonad::unit(x));
  for (const auto& l : SetExpr::fm(x).enumerate(b)) {
    if (!(m(e_t(l)) == l)) return MonadLawFailure{"left unit", l};
    if (!(m(t_e(l)) == l)) return MonadLawFailure{"right unit", l};
  }
  MapF m_t = ListMonad::mult(SetExpr::fm(x));
  MapF t_m = MapF::map_of(m);
  for (const auto& l : SetExpr::fm_n(x, 3).enumerate(b))
    if (!(m(m_t(l)) == m(t_m(l)))) return MonadLawFailure{"associativity", l};
  return std::nullopt;
}

inline Span lift_span(const Span& a) { return lift(a); }

/// T a_1 ... T a_n => T(a_1 ... a_n): zip of equal-length lists, with unzip as
/// inverse. For n = 0 the cell i_{Tx} => T i_x is the identity on lists.
inline CellPair kappa_cell(const std::vector<Span>& chain,
                           std::optional<SetExpr> anchor = std::nullopt) {
  auto xs = chain_objects(chain, anchor);
  std::vector<Span> lifted;
  for (const auto& a : chain) lifted.push_back(lift(a));
  Span from = compose_n(lifted, SetExpr::fm(xs[0]));
  Span to = lift(compose_n(chain, xs[0]));
  const std::size_t n = chain.size();
  if (n <= 1) {
    auto id = [](const Elem& e) { return e; };
    return {SpanCell::make(from, to, "kappa", id), SpanCell::make(to, from, "kappa^-1", id)};
  }
  auto zip = [n](const Elem& e) {
    std::vector<Elem> out;
    for (std::size_t i = 0; i < e[0].size(); ++i) {
      std::vector<Elem> tup;
      for (std::size_t j = 0; j < n; ++j) tup.push_back(e[j][i]);
      out.push_back(Elem::nest(std::move(tup)));
    }
    return Elem::nest(std::move(out));
  };
  auto unzip = [n](const Elem& e) {
    std::vector<std::vector<Elem>> cols(n);
    for (const auto& tup : e.kids())
      for (std::size_t j = 0; j < n; ++j) cols[j].push_back(tup[j]);
    std::vector<Elem> out;
    for (auto& c : cols) out.push_back(Elem::nest(std::move(c)));
    return Elem::nest(std::move(out));
  };
  return {SpanCell::make(from, to, "kappa", zip), SpanCell::make(to, from, "kappa^-1", unzip)};
}

/// Splits a flat list into consecutive pieces with the lengths of `shape`.
inline Elem reshape(const Elem& flat, const Elem& shape) {
  std::vector<Elem> out;
  std::size_t pos = 0;
  for (const auto& piece : shape.kids()) {
    std::vector<Elem> chunk(flat.kids().begin() + pos, flat.kids().begin() + pos + piece.size());
    pos += piece.size();
    out.push_back(Elem::nest(std::move(chunk)));
  }
  return Elem::nest(std::move(out));
}

/// m_y T^2 a => T a m_x: a list of lists of elements goes to its left values
/// paired with its concatenation.
inline CellPair nu_m_cell(const Span& a) {
  Span from = post_leg(lift_n(a, 2), Side::Right, ListMonad::mult(a.target()));
  Span to = compose_n({embed(ListMonad::mult(a.source())), lift(a)});
  Span t2a = lift_n(a, 2);
  auto fwd = [t2a](const Elem& l) { return Elem::nest({t2a.left_of(l), MapF::concat_elem(l)}); };
  auto inv = [](const Elem& p) { return reshape(p[1], p[0]); };
  return {SpanCell::make(from, to, "nu_m", fwd), SpanCell::make(to, from, "nu_m^-1", inv)};
}

/// e_y a => T a e_x: an element goes to its left value paired with the
/// singleton list.
inline CellPair nu_e_cell(const Span& a) {
  Span from = post_leg(a, Side::Right, ListMonad::unit(a.target()));
  Span to = compose_n({embed(ListMonad::unit(a.source())), lift(a)});
  auto fwd = [a](const Elem& e) { return Elem::nest({a.left_of(e), Elem::nest({e})}); };
  auto inv = [](const Elem& p) { return p[1][0]; };
  return {SpanCell::make(from, to, "nu_e", fwd), SpanCell::make(to, from, "nu_e^-1", inv)};
}

/// Outcome of testing whether a commuting square is a pullback.
struct SquareReport {
  bool pullback = true;
  std::string reason;
  std::optional<Elem> witness;  // [a, b] in A x_C B
};

/// Square P -p-> A -f-> C, P -q-> B -g-> C. Checks that P -> A x_C B is a
/// bijection on elements within the bound.
inline SquareReport square_is_pullback(const SetExpr& P, const MapF& p, const MapF& q, const MapF& f,
                                       const MapF& g, Bound b) {
  SquareReport r;
  std::unordered_map<Elem, std::size_t, ElemHash> hits;
  for (const auto& e : P.enumerate(b)) {
    Elem pa = p(e), qb = q(e);
    if (!(f(pa) == g(qb))) {
      r.pullback = false;
      r.reason = "square does not commute";
      r.witness = Elem::nest({pa, qb});
      return r;
    }
    ++hits[Elem::nest({pa, qb})];
  }
  for (const auto& a : p.cod().enumerate(b))
    for (const auto& bb : q.cod().enumerate(b)) {
      if (!(f(a) == g(bb))) continue;
      Elem pair = Elem::nest({a, bb});
      auto it = hits.find(pair);
      std::size_t n = it == hits.end() ? 0 : it->second;
      if (n != 1) {
        r.pullback = false;
        r.reason = n == 0 ? "pair is not reached" : "pair is reached " + std::to_string(n) + " times";
        r.witness = pair;
        return r;
      }
    }
  return r;
}

/// Naturality square of m at f: T^2 X -> T X over T^2 Y -> T Y.
inline SquareReport mult_square_is_pullback(const MapF& f, Bound b) {
  const SetExpr& X = f.dom();
  return square_is_pullback(SetExpr::fm_n(X, 2), MapF::map_of_n(f, 2), ListMonad::mult(X),
                            ListMonad::mult(f.cod()), MapF::map_of(f), b);
}

/// Naturality square of e at f: X -> T X over Y -> T Y.
inline SquareReport unit_square_is_pullback(const MapF& f, Bound b) {
  const SetExpr& X = f.dom();
  return square_is_pullback(X, f, ListMonad::unit(X), ListMonad::unit(f.cod()), MapF::map_of(f), b);
}

/// T applied to the pullback square of the cospan (f, g): the comparison
/// T(A x_C B) -> T A x_{T C} T B.
inline SquareReport preserves_pullback(const MapF& f, const MapF& g, Bound b) {
  auto pb = pullback(f, g);
  if (!pb.apex) throw InfeasibleEnumeration("cospan with infinite legs");
  MapF pl = MapF::table(*pb.apex, f.dom(), [&] {
    std::vector<std::pair<Elem, Elem>> v;
    for (const auto& e : pb.apex->elements()) v.emplace_back(e, e[0]);
    return v;
  }());
  MapF pr = MapF::table(*pb.apex, g.dom(), [&] {
    std::vector<std::pair<Elem, Elem>> v;
    for (const auto& e : pb.apex->elements()) v.emplace_back(e, e[1]);
    return v;
  }());
  return square_is_pullback(SetExpr::fm(*pb.apex), MapF::map_of(pl), MapF::map_of(pr),
                            MapF::map_of(f), MapF::map_of(g), b);
}

}  // namespace gmc
