#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gmc/algebras.hpp"

namespace gmc {

// ---------------------------------------------------------------------------
// Opactions

/// f_* -| f^* in spans: unit i_x => embed(f) star(f), counit star(f) embed(f)
/// => i_y.
struct AdjointWitness {
  MapF f;
  SpanCell unit;
  SpanCell counit;
};

inline AdjointWitness opaction_adjunction(const MapF& f) {
  const SetExpr& x = f.dom();
  const SetExpr& y = f.cod();
  Span es = compose_n({embed(f), star(f)});
  Span se = compose_n({star(f), embed(f)});
  SpanCell unit = SpanCell::make(identity(x), es, "unit", [](const Elem& p) { return Elem::nest({p, p}); });
  SpanCell counit = SpanCell::make(se, identity(y), "counit", [f](const Elem& pq) { return f.apply(pq[0]); });
  return {f, unit, counit};
}

/// Both triangle composites, evaluated pointwise against the identity.
inline LawReports check_opaction_triangles(const AdjointWitness& w, Bound b) {
  const SetExpr& x = w.f.dom();
  const SetExpr& y = w.f.cod();
  Span e = embed(w.f), s = star(w.f);
  auto same = [](const Elem& v) { return v; };
  LawReports out;
  {
    auto x01 = associator(Partition{{0, 1}}, {e}, x);
    auto x21 = associator(Partition{{2, 1}}, {e, s, e});
    auto x12 = associator(Partition{{1, 2}}, {e, s, e});
    auto x10 = associator(Partition{{1, 0}}, {e});
    SpanCell path = vertical_compose({x01.inv, hcompose({w.unit, identity_cell(e)}), x21.fwd, x12.inv,
                                      hcompose({identity_cell(e), w.counit}), x10.fwd});
    out.push_back(law_result("triangle at f_*", w.f.name(), b,
                             detail::first_difference(e.enumerate(b), path, same)));
  }
  {
    auto x10 = associator(Partition{{1, 0}}, {s});
    auto x12 = associator(Partition{{1, 2}}, {s, e, s});
    auto x21 = associator(Partition{{2, 1}}, {s, e, s});
    auto x01 = associator(Partition{{0, 1}}, {s}, y);
    SpanCell path = vertical_compose({x10.inv, hcompose({identity_cell(s), w.unit}), x12.fwd, x21.inv,
                                      hcompose({w.counit, identity_cell(s)}), x01.fwd});
    out.push_back(law_result("triangle at f^*", w.f.name(), b,
                             detail::first_difference(s.enumerate(b), path, same)));
  }
  return out;
}

/// In Mat(V) the opaction of f is the transpose of its graph: i <= f f^T and
/// f^T f <= i.
inline LawReports check_mat_opaction(QuantaleRef q, const MapF& f, Bound b) {
  MatVector e = embed_map(q, f), s = mat_star(q, f, b);
  auto pair = [](const std::optional<std::pair<Elem, Elem>>& w) -> std::optional<Elem> {
    if (!w) return std::nullopt;
    return Elem::nest({w->first, w->second});
  };
  LawReports out;
  out.push_back(law_result("unit", f.name(), b,
                           pair(mat_leq_violation(mat_identity(q, f.dom()), mat_compose_n({e, s}, std::nullopt, b), b))));
  out.push_back(law_result("counit", f.name(), b,
                           pair(mat_leq_violation(mat_compose_n({s, e}, std::nullopt, b), mat_identity(q, f.cod()), b))));
  return out;
}

// ---------------------------------------------------------------------------
// Cartesian transformations

/// alpha : F => G between endofunctors of sets, through components and the
/// action of F and G on maps.
struct NaturalTransformation {
  std::string name;
  std::function<SetExpr(const SetExpr&)> F, G;
  std::function<MapF(const MapF&)> F_map, G_map;
  std::function<MapF(const SetExpr&)> component;
};

struct CartesianReport {
  std::string transformation;
  bool cartesian = true;
  /// The map whose square fails, and the element at fault.
  std::string witness;
  std::size_t squares = 0;
};

/// For each f : x -> y the mate cell star(alpha_x) embed(F f) => embed(G f)
/// star(alpha_y), [p, p] |-> [alpha_x p, F f p], must be a legal cell and a
/// bijection on the bound-b slices. Preimages are searched within the bound.
inline CartesianReport cartesian_check(const NaturalTransformation& nt, const std::vector<MapF>& maps, Bound b) {
  CartesianReport r{nt.name, true, "", 0};
  for (const auto& f : maps) {
    ++r.squares;
    MapF ax = nt.component(f.dom()), ay = nt.component(f.cod());
    MapF Ff = nt.F_map(f), Gf = nt.G_map(f);
    Span from = compose_n({star(ax), embed(Ff)});
    Span to = compose_n({embed(Gf), star(ay)});
    SpanCell mate = SpanCell::unchecked(from, to, "mate", [ax, Ff](const Elem& pp) {
      return Elem::nest({ax.apply(pp[0]), Ff.apply(pp[0])});
    });
    auto fail = [&](const std::string& why) {
      r.cartesian = false;
      r.witness = f.name() + ": " + why;
      return r;
    };
    if (auto w = mate.leg_violation(b)) return fail("not natural at " + w->str());
    std::map<Elem, Elem> seen;
    for (const auto& pp : from.enumerate(b)) {
      Elem img = mate(pp);
      auto [it, fresh] = seen.emplace(img, pp);
      if (!fresh) return fail(it->second[0].str() + " and " + pp[0].str() + " meet at " + img.str());
    }
    for (const auto& q : to.enumerate(b))
      if (!seen.count(q)) return fail(q.str() + " has no preimage");
  }
  return r;
}

/// The list monad's multiplication and unit, and the identity of T.
inline NaturalTransformation list_multiplication() {
  return {"m", [](const SetExpr& x) { return SetExpr::fm_n(x, 2); }, [](const SetExpr& x) { return SetExpr::fm(x); },
          [](const MapF& f) { return MapF::map_of_n(f, 2); }, [](const MapF& f) { return MapF::map_of(f); },
          [](const SetExpr& x) { return ListMonad::mult(x); }};
}

inline NaturalTransformation list_unit() {
  return {"e", [](const SetExpr& x) { return x; }, [](const SetExpr& x) { return SetExpr::fm(x); },
          [](const MapF& f) { return f; }, [](const MapF& f) { return MapF::map_of(f); },
          [](const SetExpr& x) { return ListMonad::unit(x); }};
}

inline NaturalTransformation list_identity() {
  return {"1", [](const SetExpr& x) { return SetExpr::fm(x); }, [](const SetExpr& x) { return SetExpr::fm(x); },
          [](const MapF& f) { return MapF::map_of(f); }, [](const MapF& f) { return MapF::map_of(f); },
          [](const SetExpr& x) { return MapF::identity(SetExpr::fm(x)); }};
}

/// u |-> u u: natural, but its squares are pullbacks only along injections.
inline NaturalTransformation list_doubling() {
  return {"double", [](const SetExpr& x) { return SetExpr::fm(x); }, [](const SetExpr& x) { return SetExpr::fm(x); },
          [](const MapF& f) { return MapF::map_of(f); }, [](const MapF& f) { return MapF::map_of(f); },
          [](const SetExpr& x) {
            SetExpr tx = SetExpr::fm(x);
            return MapF::fn(tx, tx, "double", [](const Elem& u) {
              std::vector<Elem> v = u.kid_vector();
              v.insert(v.end(), u.kids().begin(), u.kids().end());
              return Elem::nest(std::move(v));
            });
          }};
}

// ---------------------------------------------------------------------------
// The underlying T-monoid functor

/// (x, b star(h)): an operation u -> y is a morphism h(u) -> y of the monoid,
/// stored as [beta, u]. Substitution composes beta with sigma of the inner
/// morphisms and concatenates their sources.
inline TMonoid underlying_tmonoid(const TAlgebra& A) {
  const SetExpr& x = A.monoid.x;
  if (x.kind() == SetExpr::Kind::Any)
    throw NoStarStructure("h on " + x.str() + " has no enumerable preimages");
  if (!(A.h.dom() == SetExpr::fm(x)) || !(A.h.cod() == x))
    throw NoStarStructure(A.h.name() + " is not a scalar T x -> x for x = " + x.str());
  Span a = compose_n({A.monoid.a, star(A.h)});
  SpanCell amu = A.monoid.mu, aeta = A.monoid.eta, sig = A.sigma;
  SpanCell mu = SpanCell::unchecked(kl_compose_n({a, a}), a, "mu", [amu, sig](const Elem& e) {
    const Elem& outer = e[0];
    std::vector<Elem> betas, srcs;
    for (const auto& op : e[1].kids()) {
      betas.push_back(op[0]);
      for (const auto& s : op[1].kids()) srcs.push_back(s);
    }
    Elem beta = amu(Elem::nest({outer[0], sig(Elem::nest(std::move(betas)))}));
    return Elem::nest({beta, Elem::nest(std::move(srcs))});
  });
  SpanCell eta = SpanCell::unchecked(kl_identity(x), a, "eta", [aeta](const Elem& o) {
    return Elem::nest({aeta(o), Elem::nest({o})});
  });
  return TMonoid{"K" + A.name, x, a, mu, eta, std::nullopt, false};
}

/// [beta, u] |-> [phi beta, T f u].
inline TMonoidHom K_on_homs(const TAlgebraHom& F, const TAlgebra& src, const TAlgebra& tgt) {
  SpanCell phi = F.hom.phi;
  MapF tf = MapF::map_of(F.hom.f);
  return make_tmonoid_hom(underlying_tmonoid(src), underlying_tmonoid(tgt), F.hom.f,
                          [phi, tf](const Elem& e) { return Elem::nest({phi(e[0]), tf(e[1])}); },
                          "K" + phi.name());
}

/// t -> K M t: objects to singletons, an operation to its singleton list over
/// the list of singleton sources.
inline TMonoidHom adjunction_unit(const TMonoid& t) {
  TAlgebra m = free_talgebra(t);
  TMonoid km = underlying_tmonoid(m);
  MapF te = MapF::map_of(ListMonad::unit(t.x));
  Span a = t.a;
  return make_tmonoid_hom(t, km, ListMonad::unit(t.x), [a, te](const Elem& op) {
    return Elem::nest({Elem::nest({op}), te(a.right_of(op))});
  }, "unit");
}

/// M K A -> A: h on objects, sigma of the underlying morphisms on lists.
inline TAlgebraHom adjunction_counit(const TAlgebra& A) {
  TAlgebra mk = free_talgebra(underlying_tmonoid(A));
  SpanCell sig = A.sigma;
  return make_talgebra_hom(mk, A, A.h, [sig](const Elem& l) {
    std::vector<Elem> betas;
    for (const auto& op : l.kids()) betas.push_back(op[0]);
    return sig(Elem::nest(std::move(betas)));
  }, "counit");
}

/// Unit and counit, replaceable to test the checks.
struct AdjunctionData {
  std::function<TMonoidHom(const TMonoid&)> unit = adjunction_unit;
  std::function<TAlgebraHom(const TAlgebra&)> counit = adjunction_counit;
};

namespace detail {

inline std::optional<Elem> hom_difference(const MapF& f1, const SpanCell& p1, const MapF& f2, const SpanCell& p2,
                                          const std::vector<Elem>& objects, const std::vector<Elem>& elems) {
  for (const auto& o : objects) {
    try {
      if (!(f1(o) == f2(o))) return o;
    } catch (const error&) {
      return o;
    }
  }
  return first_difference(elems, p1, p2);
}

}  // namespace detail

/// (K counit)(unit K) = 1 on K A and (counit M)(M unit) = 1 on M t, compared
/// on objects and elements within the bound.
inline LawReports check_triangles(const TMonoid& t, const TAlgebra& A, Bound b = 3,
                                  const AdjunctionData& adj = AdjunctionData{}) {
  LawReports out;
  std::string inst = t.name + ", " + A.name;
  {
    TMonoid ka = underlying_tmonoid(A);
    TAlgebra mka = free_talgebra(ka);
    TMonoidHom u = adj.unit(ka);
    TMonoidHom ke = K_on_homs(adj.counit(A), mka, A);
    TMonoidHom path = compose_tmonoid_homs(ke, u, ka, ka);
    TMonoidHom id = identity_tmonoid_hom(ka);
    out.push_back(law_result("triangle on K", inst, b,
                             detail::hom_difference(path.f, path.phi, id.f, id.phi, ka.x.enumerate(b),
                                                    ka.a.enumerate(b))));
  }
  {
    TAlgebra mt = free_talgebra(t);
    TMonoid kmt = underlying_tmonoid(mt);
    TAlgebraHom mu = M_on_homs(adj.unit(t), t, kmt);
    TAlgebraHom e = adj.counit(mt);
    TAlgebraHom path = compose_talgebra_homs(e, mu, mt, mt);
    TAlgebraHom id = identity_talgebra_hom(mt);
    out.push_back(law_result("triangle on M", inst, b,
                             detail::hom_difference(path.hom.f, path.hom.phi, id.hom.f, id.hom.phi,
                                                    mt.monoid.x.enumerate(b), mt.monoid.a.enumerate(b))));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hom bijection oracle

struct HomBijectionReport {
  std::size_t candidates = 0;
  std::size_t algebra_homs = 0;
  std::size_t tmonoid_homs = 0;
  bool bijection = true;
  std::string witness;
  Bound bound = 0;

  LawReports reports(const std::string& instance) const {
    LawReport r{"hom bijection", instance, bijection, bound, witness, std::nullopt};
    return {r};
  }
};

/// Enumerates generator data (an object map f : x -> y and a morphism
/// h(T f s) -> f t of A for each operation s -> t within the bound), keeps the
/// data that are T-monoid maps t -> K A and, separately, the data whose
/// extension is a T-algebra map M t -> A, and checks that transposition
/// through the unit and counit is a bijection with identity round trips.
inline HomBijectionReport hom_bijection_oracle(const TMonoid& t, const TAlgebra& A, Bound b = 2,
                                               std::size_t cap = 10000) {
  HomBijectionReport rep;
  rep.bound = b;
  if (!t.x.is_fin() || !A.monoid.x.is_fin())
    throw BoundTooLargeToEnumerate("object maps need finite object sets");
  const auto& xs = t.x.elements();
  const auto& ys = A.monoid.x.elements();
  double maps = std::pow(static_cast<double>(ys.size()), static_cast<double>(xs.size()));
  if (maps > static_cast<double>(cap))
    throw BoundTooLargeToEnumerate(std::to_string(static_cast<long long>(maps)) + " object maps exceed the cap of " +
                                   std::to_string(cap));
  std::vector<Elem> ops = t.finite_ops ? *t.finite_ops : t.a.enumerate(b);
  std::sort(ops.begin(), ops.end());
  TMonoid ka = underlying_tmonoid(A);
  TAlgebra mt = free_talgebra(t);
  const Span& ta = t.a;
  const Span& aa = A.monoid.a;
  MapF h = A.h;
  SpanCell sig = A.sigma;

  struct Data {
    std::map<Elem, Elem> objects;
    std::map<Elem, Elem> morphisms;
  };
  auto object_map = [&](const Data& d) {
    auto tab = d.objects;
    return MapF::fn(t.x, A.monoid.x, "f", [tab](const Elem& o) { return tab.at(o); });
  };
  auto as_tmonoid_hom = [&](const Data& d) {
    auto mor = d.morphisms;
    MapF f = object_map(d);
    MapF tf = MapF::map_of(f);
    return make_tmonoid_hom(t, ka, f, [mor, tf, ta](const Elem& op) {
      auto it = mor.find(op);
      if (it == mor.end()) throw DomainError(op.str() + " is outside the enumerated operations");
      return Elem::nest({it->second, tf(ta.right_of(op))});
    }, "g");
  };
  auto as_algebra_hom = [&](const Data& d) {
    auto mor = d.morphisms;
    MapF f = object_map(d);
    MapF F = MapF::compose_seq({MapF::map_of(f), h});
    return make_talgebra_hom(mt, A, F, [mor, sig](const Elem& l) {
      std::vector<Elem> betas;
      for (const auto& op : l.kids()) {
        auto it = mor.find(op);
        if (it == mor.end()) throw DomainError(op.str() + " is outside the enumerated operations");
        betas.push_back(it->second);
      }
      return sig(Elem::nest(std::move(betas)));
    }, "G");
  };

  std::vector<Data> kept_k, kept_m;
  std::vector<std::size_t> digits(xs.size(), 0);
  for (std::size_t n = 0; n < static_cast<std::size_t>(maps); ++n) {
    Data d;
    for (std::size_t i = 0; i < xs.size(); ++i) d.objects[xs[i]] = ys[digits[i]];
    for (std::size_t i = 0; i < digits.size(); ++i) {
      if (++digits[i] < ys.size()) break;
      digits[i] = 0;
    }
    std::vector<std::vector<Elem>> cands;
    bool empty = false;
    for (const auto& op : ops) {
      std::vector<Elem> srcs;
      for (const auto& s : ta.right_of(op).kids()) srcs.push_back(d.objects.at(s));
      Elem from = h(Elem::nest(std::move(srcs)));
      Elem to = d.objects.at(ta.left_of(op));
      cands.push_back(aa.fiber(to, from, std::max<Bound>(b, 1)));
      if (cands.back().empty()) empty = true;
    }
    if (empty) continue;
    std::vector<std::size_t> pick(ops.size(), 0);
    while (true) {
      if (++rep.candidates > cap)
        throw BoundTooLargeToEnumerate("more than " + std::to_string(cap) + " candidate homomorphisms");
      Data full = d;
      for (std::size_t i = 0; i < ops.size(); ++i) full.morphisms[ops[i]] = cands[i][pick[i]];
      if (all_pass(check_tmonoid_hom(as_tmonoid_hom(full), t, ka, b))) kept_k.push_back(full);
      if (all_pass(check_talgebra_hom(as_algebra_hom(full), mt, A, b))) kept_m.push_back(full);
      std::size_t i = 0;
      for (; i < pick.size(); ++i) {
        if (++pick[i] < cands[i].size()) break;
        pick[i] = 0;
      }
      if (i == pick.size()) break;
    }
  }
  rep.tmonoid_homs = kept_k.size();
  rep.algebra_homs = kept_m.size();
  auto fail = [&](std::string why) {
    rep.bijection = false;
    if (rep.witness.empty()) rep.witness = std::move(why);
  };
  if (kept_k.size() != kept_m.size())
    fail(std::to_string(kept_m.size()) + " algebra maps but " + std::to_string(kept_k.size()) + " T-monoid maps");

  TMonoidHom unit = adjunction_unit(t);
  TAlgebraHom counit = adjunction_counit(A);
  auto objs_t = t.x.elements();
  auto objs_mt = SetExpr::fm(t.x).enumerate(b);
  auto elems_mt = mt.monoid.a.enumerate(b);
  auto same_k = [&](const TMonoidHom& g, const TMonoidHom& k) {
    return detail::hom_difference(g.f, g.phi, k.f, k.phi, objs_t, ops);
  };
  auto same_m = [&](const TAlgebraHom& g, const TAlgebraHom& k) {
    return detail::hom_difference(g.hom.f, g.hom.phi, k.hom.f, k.hom.phi, objs_mt, elems_mt);
  };
  auto find_k = [&](const TMonoidHom& g) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < kept_k.size(); ++i)
      if (!same_k(g, as_tmonoid_hom(kept_k[i]))) return i;
    return std::nullopt;
  };
  auto find_m = [&](const TAlgebraHom& g) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < kept_m.size(); ++i)
      if (!same_m(g, as_algebra_hom(kept_m[i]))) return i;
    return std::nullopt;
  };
  for (const auto& d : kept_m) {
    TAlgebraHom G = as_algebra_hom(d);
    TMonoidHom down = compose_tmonoid_homs(K_on_homs(G, mt, A), unit, t, ka);
    if (!find_k(down)) {
      fail("transpose of an algebra map is not an enumerated T-monoid map");
      continue;
    }
    TAlgebraHom back = compose_talgebra_homs(counit, M_on_homs(down, t, ka), mt, A);
    if (auto w = same_m(back, G)) fail("algebra map does not round-trip at " + w->str());
  }
  for (const auto& d : kept_k) {
    TMonoidHom g = as_tmonoid_hom(d);
    TAlgebraHom up = compose_talgebra_homs(counit, M_on_homs(g, t, ka), mt, A);
    if (!find_m(up)) {
      fail("transpose of a T-monoid map is not an enumerated algebra map");
      continue;
    }
    TMonoidHom back = compose_tmonoid_homs(K_on_homs(up, mt, A), unit, t, ka);
    if (auto w = same_k(back, g)) fail("T-monoid map does not round-trip at " + w->str());
  }
  return rep;
}

}  // namespace gmc
