#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gmc/monoids.hpp"

namespace gmc {

// ---------------------------------------------------------------------------
// The functor from Kleisli vectors to vectors

/// T x <- T a -> T^2 y -> T y: lists of elements, targets listwise, sources
/// concatenated.
inline Span L_on_kleisli(const Span& a) {
  return post_leg(lift(a), Side::Right, ListMonad::mult(kl_target(a)));
}

inline SpanCell L_on_cell(const SpanCell& c) {
  return post_leg_cell(lift_cell(c), Side::Right, ListMonad::mult(kl_target(c.from())));
}

/// i_{Tx} => L(kl_identity x); both directions are the identity on lists.
inline CellPair kappa_L0(const SetExpr& x) {
  Span from = identity(SetExpr::fm(x));
  Span to = L_on_kleisli(kl_identity(x));
  auto id = [](const Elem& e) { return e; };
  return {SpanCell::make(from, to, "kappaL0", id), SpanCell::make(to, from, "kappaL0^-1", id)};
}

/// L(b) L(a) => L(kl(b, a)) for b : w -> T x and a : x -> T y, pasted from
/// the inverse of nu^m_a and the zip cell. `num` must be a pair of mutually
/// inverse cells on the bound-`check` slice.
inline CellPair kappa_L2(const Span& b, const Span& a, std::optional<CellPair> num = std::nullopt,
                         Bound check = 2) {
  CellPair nm = num ? *num : nu_m_cell(a);
  if (auto w = inverse_violation(nm.fwd, nm.inv, check))
    throw NotInvertibleNuM("the multiplication cell of " + a.sig() + " has no inverse at " + w->str());
  Span from = compose_n({L_on_kleisli(b), L_on_kleisli(a)});
  Span to = L_on_kleisli(kl_compose_n({b, a}));
  Span tb = lift(b);
  auto fwd = [nm, tb](const Elem& e) {
    Elem blocks = nm.inv(Elem::nest({tb.right_of(e[0]), e[1]}));
    std::vector<Elem> out;
    for (std::size_t i = 0; i < e[0].size(); ++i) out.push_back(Elem::nest({e[0][i], blocks[i]}));
    return Elem::nest(std::move(out));
  };
  auto inv = [nm](const Elem& l) {
    std::vector<Elem> bs, as;
    for (const auto& p : l.kids()) {
      bs.push_back(p[0]);
      as.push_back(p[1]);
    }
    Elem blocks = Elem::nest(std::move(as));
    return Elem::nest({Elem::nest(std::move(bs)), nm.fwd(blocks)[1]});
  };
  return {SpanCell::make(from, to, "kappaL2", fwd, check), SpanCell::make(to, from, "kappaL2^-1", inv, check)};
}

/// The monoid (T x, m_x T a) with multiplication L(mu) kappa_L2 and unit
/// L(eta) kappa_L0.
inline Monoid L_on_tmonoid(const TMonoid& t) {
  Span la = L_on_kleisli(t.a);
  SpanCell mu = vertical_compose(kappa_L2(t.a, t.a).fwd, L_on_cell(t.mu));
  SpanCell eta = vertical_compose(kappa_L0(t.x).fwd, L_on_cell(t.eta));
  return Monoid{"L" + t.name, SetExpr::fm(t.x), la, mu, eta, false};
}

// ---------------------------------------------------------------------------
// T-algebras

/// A monoid with an algebra h : T x -> x of the list monad and a cell sigma
/// from T a with both legs followed by h to a.
struct TAlgebra {
  std::string name;
  Monoid monoid;
  MapF h;
  SpanCell sigma;

  /// (h, sigma) as a monoid map from T of the monoid.
  MonoidHom structure() const { return MonoidHom{h, sigma}; }
};

struct TAlgebraHom {
  MonoidHom hom;
};

inline TAlgebra make_talgebra(const Monoid& m, const MapF& h, SpanCell::Fn sigma, std::string name = "") {
  SpanCell s = SpanCell::unchecked(push_legs(lift(m.a), h), m.a, "sigma", std::move(sigma));
  return TAlgebra{name.empty() ? m.name : std::move(name), m, h, s};
}

/// Monoid laws, the algebra laws of h, sigma as a monoid map, and the unit
/// and associativity laws of sigma.
inline LawReports check_talgebra(const TAlgebra& A, Bound b = 3) {
  LawReports out = check_monoid(A.monoid, b);
  for (auto& r : out) r.instance = A.name;
  const SetExpr& x = A.monoid.x;
  const Span& a = A.monoid.a;
  auto h = A.h;
  auto sig = A.sigma;
  auto same = [](const Elem& e) { return e; };
  out.push_back(law_result("action unit", A.name, b,
                           detail::first_difference(
                               x.enumerate(b), [h](const Elem& o) { return h(Elem::nest({o})); }, same)));
  MapF th = MapF::map_of(h);
  out.push_back(law_result(
      "action associativity", A.name, b,
      detail::first_difference(
          SetExpr::fm_n(x, 2).enumerate(b), [h](const Elem& u) { return h(MapF::concat_elem(u)); },
          [h, th](const Elem& u) { return h(th(u)); })));
  LawReports hom = check_monoid_hom(A.structure(), T_on_monoid(A.monoid), A.monoid, b);
  const char* names[] = {"sigma is a cell", "sigma multiplicative", "sigma unital"};
  for (std::size_t i = 0; i < hom.size(); ++i) {
    hom[i].law = names[i];
    hom[i].instance = A.name;
    hom[i].bound = b;
    out.push_back(hom[i]);
  }
  out.push_back(law_result("sigma unit", A.name, b,
                           detail::first_difference(
                               a.enumerate(b), [sig](const Elem& e) { return sig(Elem::nest({e})); }, same)));
  SpanCell tsig = lift_cell(sig);
  out.push_back(law_result(
      "sigma associativity", A.name, b,
      detail::first_difference(
          lift_n(a, 2).enumerate(b), [sig](const Elem& l) { return sig(MapF::concat_elem(l)); },
          [sig, tsig](const Elem& l) { return sig(tsig(l)); })));
  return out;
}

inline TAlgebraHom make_talgebra_hom(const TAlgebra& src, const TAlgebra& tgt, const MapF& f, SpanCell::Fn phi,
                                     std::string name = "phi") {
  return TAlgebraHom{make_monoid_hom(src.monoid, tgt.monoid, f, std::move(phi), std::move(name))};
}

/// Monoid map laws plus compatibility with h and sigma.
inline LawReports check_talgebra_hom(const TAlgebraHom& F, const TAlgebra& src, const TAlgebra& tgt, Bound b = 3) {
  LawReports out = check_monoid_hom(F.hom, src.monoid, tgt.monoid, b);
  std::string inst = src.name + " -> " + tgt.name;
  for (auto& r : out) {
    r.instance = inst;
    r.bound = b;
  }
  MapF f = F.hom.f, tf = MapF::map_of(f);
  SpanCell phi = F.hom.phi;
  MapF hs = src.h, ht = tgt.h;
  SpanCell ss = src.sigma, st = tgt.sigma;
  out.push_back(law_result("action compatible", inst, b,
                           detail::first_difference(
                               SetExpr::fm(src.monoid.x).enumerate(b), [f, hs](const Elem& u) { return f(hs(u)); },
                               [ht, tf](const Elem& u) { return ht(tf(u)); })));
  SpanCell tphi = lift_cell(phi);
  out.push_back(law_result("sigma compatible", inst, b,
                           detail::first_difference(
                               lift(src.monoid.a).enumerate(b), [phi, ss](const Elem& l) { return phi(ss(l)); },
                               [st, tphi](const Elem& l) { return st(tphi(l)); })));
  return out;
}

inline TAlgebraHom identity_talgebra_hom(const TAlgebra& A) {
  return make_talgebra_hom(A, A, MapF::identity(A.monoid.x), [](const Elem& e) { return e; }, "1");
}

inline TAlgebraHom compose_talgebra_homs(const TAlgebraHom& g, const TAlgebraHom& f, const TAlgebra& src,
                                         const TAlgebra& tgt) {
  return TAlgebraHom{compose_homs(g.hom, f.hom, src.monoid, tgt.monoid)};
}

// ---------------------------------------------------------------------------
// Free T-algebras

/// The free T-algebra on a T-monoid: the monoid L(t) with h = concatenation
/// and sigma concatenating lists of lists of operations.
inline TAlgebra free_talgebra(const TMonoid& t) {
  Monoid m = L_on_tmonoid(t);
  m.name = "M" + t.name;
  return make_talgebra(m, ListMonad::mult(t.x), [](const Elem& l) { return MapF::concat_elem(l); });
}

/// Object map T f and the listwise operation map.
inline TAlgebraHom M_on_homs(const TMonoidHom& h, const TMonoid& src, const TMonoid& tgt) {
  SpanCell phi = h.phi;
  return make_talgebra_hom(free_talgebra(src), free_talgebra(tgt), MapF::map_of(h.f), [phi](const Elem& l) {
    std::vector<Elem> out;
    for (const auto& e : l.kids()) out.push_back(phi(e));
    return Elem::nest(std::move(out));
  }, "M" + phi.name());
}

// ---------------------------------------------------------------------------
// Strict monoidal categories

/// A finite category with a strict tensor given by tables on objects and on
/// morphisms.
struct StrictMonCat {
  std::string name = "S";
  FiniteCategory cat;
  Elem unit;
  std::map<std::pair<Elem, Elem>, Elem> tensor_objects;
  std::map<std::pair<Elem, Elem>, Elem> tensor_morphisms;

  /// Totality of the tables; the monoidal laws are checked as T-algebra laws.
  void validate() const {
    cat.validate();
    std::set<Elem> objs(cat.objects.begin(), cat.objects.end());
    if (!objs.count(unit)) throw PresentationError("unit " + unit.str() + " is not an object");
    for (const auto& x : cat.objects)
      for (const auto& y : cat.objects) {
        auto it = tensor_objects.find({x, y});
        if (it == tensor_objects.end()) throw PresentationError("no tensor of objects " + x.str() + ", " + y.str());
        if (!objs.count(it->second)) throw PresentationError("tensor " + it->second.str() + " is not an object");
      }
    if (tensor_objects.size() != objs.size() * objs.size())
      throw PresentationError("object tensor lists an unknown pair");
    for (const auto& f : cat.morphisms)
      for (const auto& g : cat.morphisms) {
        auto it = tensor_morphisms.find({f.name, g.name});
        if (it == tensor_morphisms.end())
          throw PresentationError("no tensor of morphisms " + f.name.str() + ", " + g.name.str());
        cat.morphism(it->second);
      }
    if (tensor_morphisms.size() != cat.morphisms.size() * cat.morphisms.size())
      throw PresentationError("morphism tensor lists an unknown pair");
  }

  bool operator==(const StrictMonCat& o) const {
    return cat == o.cat && unit == o.unit && tensor_objects == o.tensor_objects &&
           tensor_morphisms == o.tensor_morphisms;
  }
};

/// Objects 0..n-1, identities only, tensor = addition mod n.
inline StrictMonCat discrete_cyclic_smc(int n) {
  StrictMonCat s;
  s.name = "disc Z/" + std::to_string(n);
  auto obj = [](int i) { return Elem::atom(std::to_string(i)); };
  auto id = [](int i) { return Elem::atom("1_" + std::to_string(i)); };
  for (int i = 0; i < n; ++i) {
    s.cat.objects.push_back(obj(i));
    s.cat.morphisms.push_back({id(i), obj(i), obj(i)});
    s.cat.identities[obj(i)] = id(i);
    s.cat.compose[{id(i), id(i)}] = id(i);
  }
  s.unit = obj(0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      s.tensor_objects[{obj(i), obj(j)}] = obj((i + j) % n);
      s.tensor_morphisms[{id(i), id(j)}] = id((i + j) % n);
    }
  return s;
}

/// h folds a list of objects from the left with the tensor; sigma folds a
/// list of morphisms. Empty lists go to the unit and its identity.
inline TAlgebra smc_to_talgebra(const StrictMonCat& s) {
  s.validate();
  Monoid m = cat_to_monoid(s.cat, s.name);
  SetExpr x = m.x;
  auto to = s.tensor_objects;
  auto tm = s.tensor_morphisms;
  Elem unit = s.unit;
  Elem unit_id = s.cat.identities.at(unit);
  MapF h = MapF::fn(SetExpr::fm(x), x, "fold", [to, unit](const Elem& u) {
    if (u.size() == 0) return unit;
    Elem acc = u[0];
    for (std::size_t i = 1; i < u.size(); ++i) acc = to.at({acc, u[i]});
    return acc;
  });
  return make_talgebra(m, h, [tm, unit_id](const Elem& l) {
    if (l.size() == 0) return unit_id;
    Elem acc = l[0];
    for (std::size_t i = 1; i < l.size(); ++i) {
      auto it = tm.find({acc, l[i]});
      if (it == tm.end()) throw RuleError("no tensor of " + acc.str() + " and " + l[i].str());
      acc = it->second;
    }
    return acc;
  }, s.name);
}

/// Reads a T-algebra on a finite monoid as a strict monoidal category.
inline StrictMonCat talgebra_to_smc(const TAlgebra& A) {
  StrictMonCat s;
  s.name = A.name;
  s.cat = monoid_to_cat(A.monoid);
  s.unit = A.h(Elem::list());
  for (const auto& x : s.cat.objects)
    for (const auto& y : s.cat.objects) s.tensor_objects[{x, y}] = A.h(Elem::nest({x, y}));
  for (const auto& f : s.cat.morphisms)
    for (const auto& g : s.cat.morphisms) s.tensor_morphisms[{f.name, g.name}] = A.sigma(Elem::nest({f.name, g.name}));
  return s;
}

}  // namespace gmc
