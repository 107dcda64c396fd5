#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gmc/kleisli.hpp"
#include "gmc/report.hpp"

namespace gmc {

// ---------------------------------------------------------------------------
// Presentations

/// A category given by finite tables. Morphisms are named by atoms.
struct FiniteCategory {
  struct Morphism {
    Elem name, dom, cod;
    auto operator<=>(const Morphism&) const = default;
  };

  std::vector<Elem> objects;
  std::vector<Morphism> morphisms;
  std::map<Elem, Elem> identities;               // object -> morphism
  std::map<std::pair<Elem, Elem>, Elem> compose;  // (g, f) with dom g = cod f -> g f

  const Morphism& morphism(const Elem& name) const {
    for (const auto& m : morphisms)
      if (m.name == name) return m;
    throw PresentationError("no morphism " + name.str());
  }

  /// Checks names, identities, and that every composable pair has a composite.
  void validate() const {
    std::set<Elem> objs(objects.begin(), objects.end());
    if (objs.size() != objects.size()) throw PresentationError("repeated object");
    std::set<Elem> names;
    for (const auto& m : morphisms) {
      if (!names.insert(m.name).second) throw PresentationError("repeated morphism " + m.name.str());
      if (!objs.count(m.dom) || !objs.count(m.cod))
        throw PresentationError("morphism " + m.name.str() + " has an unknown end");
    }
    for (const auto& o : objects) {
      auto it = identities.find(o);
      if (it == identities.end()) throw PresentationError("object " + o.str() + " has no identity");
      if (!names.count(it->second)) throw PresentationError("identity " + it->second.str() + " is not a morphism");
    }
    std::size_t composable = 0;
    for (const auto& g : morphisms)
      for (const auto& f : morphisms) {
        if (!(g.dom == f.cod)) continue;
        ++composable;
        auto it = compose.find({g.name, f.name});
        if (it == compose.end())
          throw PresentationError("no composite for " + g.name.str() + " after " + f.name.str());
        if (!names.count(it->second)) throw PresentationError("composite " + it->second.str() + " is not a morphism");
      }
    if (composable != compose.size()) throw PresentationError("composition lists a non-composable pair");
  }

  bool operator==(const FiniteCategory& o) const {
    auto sm = morphisms, om = o.morphisms;
    std::sort(sm.begin(), sm.end());
    std::sort(om.begin(), om.end());
    auto so = objects, oo = o.objects;
    std::sort(so.begin(), so.end());
    std::sort(oo.begin(), oo.end());
    return so == oo && sm == om && identities == o.identities && compose == o.compose;
  }
};

/// Finite composition data of a multicategory: operations with their source
/// lists and targets, identities, and composites keyed by [outer, [inner...]].
struct MulticatTable {
  struct Op {
    Elem name, sources, target;
    auto operator<=>(const Op&) const = default;
  };
  std::vector<Op> ops;
  std::map<Elem, Elem> identities;
  std::map<Elem, Elem> composites;

  bool operator==(const MulticatTable& o) const {
    auto a = ops, b = o.ops;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b && identities == o.identities && composites == o.composites;
  }
};

/// A multicategory through its fibers hom(sources; target), substitution and
/// identities. Table-backed instances also carry their finite data.
struct Multicat {
  std::string name;
  SetExpr objects;
  std::function<std::vector<Elem>(const Elem& sources, const Elem& target)> ops;
  std::function<Elem(const Elem&)> source_of;
  std::function<Elem(const Elem&)> target_of;
  std::function<Elem(const Elem& outer, const std::vector<Elem>& inner)> compose;
  std::function<Elem(const Elem&)> identity;
  std::function<bool(const Elem&)> member;
  std::shared_ptr<const MulticatTable> table;

  /// Largest arity of an operation, when finitely many.
  std::optional<std::size_t> max_arity() const {
    if (!table) return std::nullopt;
    std::size_t m = 0;
    for (const auto& op : table->ops) m = std::max(m, op.sources.size());
    return m;
  }

  static Multicat from_table(std::string name, const SetExpr& objects, MulticatTable t) {
    if (!objects.is_fin()) throw PresentationError("objects must form a finite set");
    std::map<Elem, MulticatTable::Op> by_name;
    for (const auto& op : t.ops) {
      if (!by_name.emplace(op.name, op).second) throw PresentationError("repeated operation " + op.name.str());
      if (!objects.contains(op.target) || !SetExpr::fm(objects).contains(op.sources))
        throw PresentationError("operation " + op.name.str() + " has an unknown end");
    }
    for (const auto& o : objects.elements()) {
      auto it = t.identities.find(o);
      if (it == t.identities.end()) throw PresentationError("object " + o.str() + " has no identity");
      if (!by_name.count(it->second)) throw PresentationError("identity " + it->second.str() + " is not an operation");
    }
    std::map<Elem, std::vector<Elem>> by_target;
    for (const auto& op : t.ops) by_target[op.target].push_back(op.name);
    std::size_t composable = 0;
    for (const auto& f : t.ops) {
      std::vector<Elem> picked;
      std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == f.sources.size()) {
          ++composable;
          Elem key = Elem::nest({f.name, Elem::nest(picked)});
          auto it = t.composites.find(key);
          if (it == t.composites.end()) throw PresentationError("no composite for " + key.str());
          if (!by_name.count(it->second))
            throw PresentationError("composite " + it->second.str() + " is not an operation");
          return;
        }
        for (const auto& g : by_target[f.sources[i]]) {
          picked.push_back(g);
          go(i + 1);
          picked.pop_back();
        }
      };
      go(0);
    }
    if (composable != t.composites.size()) throw PresentationError("composition lists a non-composable entry");
    auto data = std::make_shared<const MulticatTable>(std::move(t));
    auto index = std::make_shared<const std::map<Elem, MulticatTable::Op>>(std::move(by_name));
    Multicat m;
    m.name = std::move(name);
    m.objects = objects;
    m.table = data;
    m.ops = [data](const Elem& s, const Elem& tg) {
      std::vector<Elem> out;
      for (const auto& op : data->ops)
        if (op.sources == s && op.target == tg) out.push_back(op.name);
      std::sort(out.begin(), out.end());
      return out;
    };
    m.source_of = [index](const Elem& f) {
      auto it = index->find(f);
      if (it == index->end()) throw DomainError(f.str() + " is not an operation");
      return it->second.sources;
    };
    m.target_of = [index](const Elem& f) {
      auto it = index->find(f);
      if (it == index->end()) throw DomainError(f.str() + " is not an operation");
      return it->second.target;
    };
    m.compose = [data](const Elem& f, const std::vector<Elem>& gs) {
      auto it = data->composites.find(Elem::nest({f, Elem::nest(gs)}));
      if (it == data->composites.end()) throw RuleError("no composite of " + f.str());
      return it->second;
    };
    m.identity = [data](const Elem& o) {
      auto it = data->identities.find(o);
      if (it == data->identities.end()) throw DomainError(o.str() + " is not an object");
      return it->second;
    };
    m.member = [index](const Elem& f) { return index->count(f) > 0; };
    return m;
  }
};

/// Operations as tokens [label, sources, target]: one per fiber where
/// `present` holds.
inline Multicat token_multicat(std::string name, const SetExpr& objects, std::string label,
                               std::function<bool(const Elem& sources, const Elem& target)> present) {
  Multicat m;
  m.name = std::move(name);
  m.objects = objects;
  Elem tag = Elem::atom(label);
  m.ops = [tag, present](const Elem& s, const Elem& t) {
    if (!present(s, t)) return std::vector<Elem>{};
    return std::vector<Elem>{Elem::nest({tag, s, t})};
  };
  m.source_of = [](const Elem& f) { return f[1]; };
  m.target_of = [](const Elem& f) { return f[2]; };
  m.compose = [tag](const Elem& f, const std::vector<Elem>& gs) {
    std::vector<Elem> srcs;
    for (const auto& g : gs)
      for (const auto& s : g[1].kids()) srcs.push_back(s);
    return Elem::nest({tag, Elem::nest(std::move(srcs)), f[2]});
  };
  m.identity = [tag](const Elem& o) { return Elem::nest({tag, Elem::nest({o}), o}); };
  SetExpr lists = SetExpr::fm(objects);
  m.member = [tag, objects, lists, present](const Elem& f) {
    return f.is_nest() && f.size() == 3 && f[0] == tag && lists.contains(f[1]) && objects.contains(f[2]) &&
           present(f[1], f[2]);
  };
  return m;
}

/// Objects 0..n-1; one operation [m_1..m_k] -> m exactly when the sum is m mod n.
inline Multicat cyclic_multicat(int n) {
  std::vector<Elem> objs;
  for (int i = 0; i < n; ++i) objs.push_back(Elem::atom(std::to_string(i)));
  return token_multicat("Z/" + std::to_string(n), SetExpr::fin(objs), "z", [n](const Elem& s, const Elem& t) {
    int sum = 0;
    for (const auto& m : s.kids()) sum += std::stoi(m.name());
    return sum % n == std::stoi(t.name());
  });
}

/// Exactly one operation for every sources list and target.
inline Multicat terminal_multicat(const SetExpr& objects) {
  return token_multicat("terminal", objects, "t", [](const Elem&, const Elem&) { return true; });
}

/// A category as a multicategory with unary operations only.
inline Multicat category_as_multicat(const FiniteCategory& c, std::string name = "C") {
  c.validate();
  MulticatTable t;
  for (const auto& m : c.morphisms) t.ops.push_back({m.name, Elem::nest({m.dom}), m.cod});
  t.identities = c.identities;
  for (const auto& [k, v] : c.compose) t.composites[Elem::nest({k.first, Elem::nest({k.second})})] = v;
  return Multicat::from_table(std::move(name), SetExpr::fin(c.objects), std::move(t));
}

// ---------------------------------------------------------------------------
// Monoids in the span equipment

/// (x, a, mu : a a => a, eta : i_x => a).
struct Monoid {
  std::string name;
  SetExpr x;
  Span a;
  SpanCell mu;
  SpanCell eta;
  /// Whether checks at any bound see every element.
  bool finite = false;
};

/// (f, phi) with phi from a with both legs pushed along f to b.
struct MonoidHom {
  MapF f;
  SpanCell phi;
};

namespace detail {

/// Compares two composites of cells pointwise; evaluation errors count as a
/// difference at that element.
inline std::optional<Elem> first_difference(const std::vector<Elem>& domain,
                                            const std::function<Elem(const Elem&)>& lhs,
                                            const std::function<Elem(const Elem&)>& rhs) {
  for (const auto& e : domain) {
    try {
      if (!(lhs(e) == rhs(e))) return e;
    } catch (const error&) {
      return e;
    }
  }
  return std::nullopt;
}

inline std::optional<Elem> illegal(const SpanCell& c, Bound b) {
  try {
    return c.leg_violation(b);
  } catch (const error&) {
    return Elem::atom("<" + c.name() + " cannot be evaluated>");
  }
}

}  // namespace detail

/// Associativity and both unit laws, stated through the associator cells of
/// the unbiased composite, plus legality of mu and eta.
inline LawReports check_monoid(const Monoid& m, Bound b = 3) {
  std::optional<Bound> shown = m.finite ? std::nullopt : std::optional<Bound>(b);
  LawReports out;
  out.push_back(law_result("mu is a cell", m.name, shown, detail::illegal(m.mu, b)));
  out.push_back(law_result("eta is a cell", m.name, shown, detail::illegal(m.eta, b)));
  const Span& a = m.a;
  SpanCell id = identity_cell(a);
  auto x21 = associator(Partition{{2, 1}}, {a, a, a});
  auto x12 = associator(Partition{{1, 2}}, {a, a, a});
  SpanCell left_path = vertical_compose({x21.inv, hcompose({m.mu, id}), m.mu});
  SpanCell right_path = vertical_compose({x12.inv, hcompose({id, m.mu}), m.mu});
  out.push_back(law_result("associativity", m.name, shown,
                           detail::first_difference(compose_n({a, a, a}).enumerate(b), left_path, right_path)));
  auto x01 = associator(Partition{{0, 1}}, {a});
  auto x10 = associator(Partition{{1, 0}}, {a});
  SpanCell lu = vertical_compose({x01.inv, hcompose({m.eta, id}), m.mu});
  SpanCell ru = vertical_compose({x10.inv, hcompose({id, m.eta}), m.mu});
  auto same = [](const Elem& e) { return e; };
  auto elems = a.enumerate(b);
  out.push_back(law_result("left unit", m.name, shown, detail::first_difference(elems, lu, same)));
  out.push_back(law_result("right unit", m.name, shown, detail::first_difference(elems, ru, same)));
  return out;
}

/// Apex = morphisms, left leg = codomain, right leg = domain; mu composes
/// (g, f) to g f.
inline Monoid cat_to_monoid(const FiniteCategory& c, std::string name = "C") {
  c.validate();
  SetExpr x = SetExpr::fin(c.objects);
  std::vector<std::tuple<Elem, Elem, Elem>> rows;
  for (const auto& m : c.morphisms) rows.emplace_back(m.name, m.cod, m.dom);
  Span a = table_span(x, x, rows, name);
  auto comp = c.compose;
  auto ids = c.identities;
  SpanCell mu = SpanCell::unchecked(compose_n({a, a}), a, "mu", [comp](const Elem& e) {
    auto it = comp.find({e[0], e[1]});
    if (it == comp.end()) throw RuleError("no composite for " + e.str());
    return it->second;
  });
  SpanCell eta = SpanCell::unchecked(identity(x), a, "eta", [ids](const Elem& o) {
    auto it = ids.find(o);
    if (it == ids.end()) throw RuleError("no identity at " + o.str());
    return it->second;
  });
  return Monoid{std::move(name), x, a, mu, eta, true};
}

/// Reads a monoid on a finite span as a category.
inline FiniteCategory monoid_to_cat(const Monoid& m) {
  if (!m.x.is_fin()) throw PresentationError("objects must form a finite set");
  FiniteCategory c;
  c.objects = m.x.elements();
  for (const auto& e : m.a.enumerate(1)) c.morphisms.push_back({e, m.a.right_of(e), m.a.left_of(e)});
  for (const auto& o : c.objects) c.identities[o] = m.eta(o);
  for (const auto& p : compose_n({m.a, m.a}).enumerate(1)) c.compose[{p[0], p[1]}] = m.mu(p);
  return c;
}

/// (T x, T a, T mu . kappa, T eta . kappa).
inline Monoid T_on_monoid(const Monoid& m) {
  SpanCell mu = vertical_compose(kappa_cell({m.a, m.a}).fwd, lift_cell(m.mu));
  SpanCell eta = vertical_compose(kappa_cell({}, m.x).fwd, lift_cell(m.eta));
  return Monoid{"T" + m.name, SetExpr::fm(m.x), lift(m.a), mu, eta, false};
}

/// The span a with both legs followed by f.
inline Span push_legs(const Span& a, const MapF& f) {
  return post_leg(post_leg(a, Side::Left, f), Side::Right, f);
}

inline MonoidHom make_monoid_hom(const Monoid& src, const Monoid& tgt, const MapF& f, SpanCell::Fn phi,
                                 std::string name = "phi") {
  return MonoidHom{f, SpanCell::unchecked(push_legs(src.a, f), tgt.a, std::move(name), std::move(phi))};
}

inline LawReports check_monoid_hom(const MonoidHom& h, const Monoid& src, const Monoid& tgt, Bound b = 3) {
  std::string inst = src.name + " -> " + tgt.name;
  std::optional<Bound> shown = src.finite && tgt.finite ? std::nullopt : std::optional<Bound>(b);
  LawReports out;
  out.push_back(law_result("phi is a cell", inst, shown, detail::illegal(h.phi, b)));
  auto mult = detail::first_difference(
      compose_n({src.a, src.a}).enumerate(b), [&](const Elem& e) { return h.phi(src.mu(e)); },
      [&](const Elem& e) { return tgt.mu(Elem::nest({h.phi(e[0]), h.phi(e[1])})); });
  out.push_back(law_result("multiplicative", inst, shown, mult));
  auto unit = detail::first_difference(
      src.x.enumerate(b), [&](const Elem& o) { return h.phi(src.eta(o)); },
      [&](const Elem& o) { return tgt.eta(h.f(o)); });
  out.push_back(law_result("unital", inst, shown, unit));
  return out;
}

inline MonoidHom compose_homs(const MonoidHom& g, const MonoidHom& f, const Monoid& src, const Monoid& tgt) {
  MapF gf = MapF::compose_seq({f.f, g.f});
  SpanCell pf = f.phi, pg = g.phi;
  return make_monoid_hom(src, tgt, gf, [pf, pg](const Elem& e) { return pg(pf(e)); },
                         pg.name() + "." + pf.name());
}

inline MonoidHom T_on_monoid_hom(const MonoidHom& h, const Monoid& src, const Monoid& tgt) {
  SpanCell phi = h.phi;
  return make_monoid_hom(T_on_monoid(src), T_on_monoid(tgt), MapF::map_of(h.f), [phi](const Elem& l) {
    std::vector<Elem> out;
    for (const auto& e : l.kids()) out.push_back(phi(e));
    return Elem::nest(std::move(out));
  }, "T" + phi.name());
}

/// (m_x, nu^m_a) : T T (x, a) -> T (x, a): concatenation of lists of lists.
inline MonoidHom monad_mult_hom(const Monoid& m) {
  Monoid tt = T_on_monoid(T_on_monoid(m)), t = T_on_monoid(m);
  return make_monoid_hom(tt, t, ListMonad::mult(m.x), [](const Elem& l) { return MapF::concat_elem(l); }, "nu_m");
}

/// (e_x, nu^e_a) : (x, a) -> T (x, a): singleton lists.
inline MonoidHom monad_unit_hom(const Monoid& m) {
  Monoid t = T_on_monoid(m);
  return make_monoid_hom(m, t, ListMonad::unit(m.x), [](const Elem& e) { return Elem::nest({e}); }, "nu_e");
}

// ---------------------------------------------------------------------------
// T-monoids: monoids in the Kleisli equipment

/// (x, a : x -> T x, mu : kl(a, a) => a, eta : kl_identity(x) => a).
struct TMonoid {
  std::string name;
  SetExpr x;
  Span a;
  SpanCell mu;
  SpanCell eta;
  /// Operations, when finitely many; checks are exhaustive when every arity is
  /// at most one.
  std::optional<std::vector<Elem>> finite_ops;
  bool exact = false;
};

/// Left leg = target, right leg = source list.
inline TMonoid multicat_to_tmonoid(const Multicat& mc) {
  const SetExpr& x = mc.objects;
  SetExpr tx = SetExpr::fm(x);
  Span a;
  std::optional<std::vector<Elem>> finite;
  if (mc.table) {
    std::vector<std::tuple<Elem, Elem, Elem>> rows;
    finite.emplace();
    for (const auto& op : mc.table->ops) {
      rows.emplace_back(op.name, op.target, op.sources);
      finite->push_back(op.name);
    }
    a = table_span(x, tx, rows, mc.name);
  } else {
    SetExpr apex = SetExpr::any(mc.name);
    auto src = mc.source_of, tgt = mc.target_of;
    auto ops = mc.ops;
    a = fiber_span(x, tx, MapF::fn(apex, x, "target", tgt), MapF::fn(apex, tx, "sources", src),
                   [ops](const Elem& t, const Elem& s) { return ops(s, t); }, mc.member, mc.name);
  }
  auto comp = mc.compose;
  SpanCell mu = SpanCell::unchecked(kl_compose_n({a, a}), a, "mu",
                                    [comp](const Elem& e) { return comp(e[0], e[1].kid_vector()); });
  SpanCell eta = SpanCell::unchecked(kl_identity(x), a, "eta", mc.identity);
  auto arity = mc.max_arity();
  return TMonoid{mc.name, x, a, mu, eta, finite, arity && *arity <= 1};
}

/// The multicategory of a T-monoid: fibers of a, substitution by mu.
inline Multicat tmonoid_to_multicat(const TMonoid& t) {
  if (t.finite_ops) {
    MulticatTable tab;
    std::map<Elem, std::vector<Elem>> by_target;
    for (const auto& f : *t.finite_ops) {
      tab.ops.push_back({f, t.a.right_of(f), t.a.left_of(f)});
      by_target[t.a.left_of(f)].push_back(f);
    }
    for (const auto& o : t.x.elements()) tab.identities[o] = t.eta(o);
    for (const auto& op : tab.ops) {
      std::vector<Elem> picked;
      std::function<void(std::size_t)> go = [&](std::size_t i) {
        if (i == op.sources.size()) {
          Elem list = Elem::nest(picked);
          tab.composites[Elem::nest({op.name, list})] = t.mu(Elem::nest({op.name, list}));
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
    return Multicat::from_table(t.name, t.x, std::move(tab));
  }
  Multicat m;
  m.name = t.name;
  m.objects = t.x;
  Span a = t.a;
  SpanCell mu = t.mu, eta = t.eta;
  m.ops = [a](const Elem& s, const Elem& tg) { return a.fiber(tg, s, std::max<Bound>(1, static_cast<Bound>(s.size()))); };
  m.source_of = [a](const Elem& f) { return a.right_of(f); };
  m.target_of = [a](const Elem& f) { return a.left_of(f); };
  m.compose = [mu](const Elem& f, const std::vector<Elem>& gs) { return mu(Elem::nest({f, Elem::nest(gs)})); };
  m.identity = [eta](const Elem& o) { return eta(o); };
  m.member = [a](const Elem& f) { return a.contains(f); };
  return m;
}

/// Legality of mu and eta, associativity and both unit laws, stated through
/// the Kleisli associator cells.
inline LawReports check_tmonoid(const TMonoid& t, Bound b = 3) {
  std::optional<Bound> shown = t.exact ? std::nullopt : std::optional<Bound>(b);
  Bound use = t.exact ? std::max<Bound>(b, 1) : b;
  LawReports out;
  out.push_back(law_result("mu is a cell", t.name, shown, detail::illegal(t.mu, use)));
  out.push_back(law_result("eta is a cell", t.name, shown, detail::illegal(t.eta, use)));
  if (!out[0].pass || !out[1].pass) {
    for (const char* law : {"associativity", "left unit", "right unit"})
      out.push_back(law_failure(law, t.name, shown, "not checked: structure cells are not legal"));
    return out;
  }
  const Span& a = t.a;
  SpanCell id = identity_cell(a);
  try {
    auto x21 = kl_associator(Partition{{2, 1}}, {a, a, a});
    auto x12 = kl_associator(Partition{{1, 2}}, {a, a, a});
    SpanCell lp = vertical_compose({x21.inv, kl_hcompose({t.mu, id}), t.mu});
    SpanCell rp = vertical_compose({x12.inv, kl_hcompose({id, t.mu}), t.mu});
    out.push_back(law_result("associativity", t.name, shown,
                             detail::first_difference(kl_compose_n({a, a, a}).enumerate(use), lp, rp)));
    auto x01 = kl_associator(Partition{{0, 1}}, {a});
    auto x10 = kl_associator(Partition{{1, 0}}, {a});
    SpanCell lu = vertical_compose({x01.inv, kl_hcompose({t.eta, id}), t.mu});
    SpanCell ru = vertical_compose({x10.inv, kl_hcompose({id, t.eta}), t.mu});
    auto same = [](const Elem& e) { return e; };
    auto elems = a.enumerate(use);
    out.push_back(law_result("left unit", t.name, shown, detail::first_difference(elems, lu, same)));
    out.push_back(law_result("right unit", t.name, shown, detail::first_difference(elems, ru, same)));
  } catch (const error& e) {
    out.push_back(law_failure("associativity", t.name, shown, e.what()));
  }
  return out;
}

/// Same objects, same fibers, identities and composites. Finite data are
/// compared exactly; otherwise every fiber with sources up to the bound.
inline std::optional<std::string> presentation_diff(const Multicat& m, const Multicat& n, Bound b = 3) {
  if (!(m.objects == n.objects)) return "objects differ: " + m.objects.str() + " vs " + n.objects.str();
  if (m.table && n.table) {
    if (*m.table == *n.table) return std::nullopt;
    auto ma = m.table->ops, na = n.table->ops;
    std::sort(ma.begin(), ma.end());
    std::sort(na.begin(), na.end());
    if (ma != na) return "operations differ";
    if (m.table->identities != n.table->identities) return "identities differ";
    for (const auto& [k, v] : m.table->composites) {
      auto it = n.table->composites.find(k);
      if (it == n.table->composites.end() || !(it->second == v)) return "composite of " + k.str() + " differs";
    }
    return "composites differ";
  }
  for (const auto& o : m.objects.elements())
    if (!(m.identity(o) == n.identity(o))) return "identity at " + o.str() + " differs";
  const auto lists = SetExpr::fm(m.objects).enumerate(b);
  std::map<Elem, std::vector<Elem>> small_by_target;
  for (const auto& s : lists)
    for (const auto& t : m.objects.elements()) {
      auto mo = m.ops(s, t), no = n.ops(s, t);
      std::sort(mo.begin(), mo.end());
      std::sort(no.begin(), no.end());
      if (mo != no) return "fiber (" + s.str() + "; " + t.str() + ") differs";
      for (const auto& f : mo) small_by_target[t].push_back(f);
    }
  for (const auto& [t, fs] : small_by_target)
    for (const auto& f : fs) {
      Elem srcs = m.source_of(f);
      std::vector<Elem> picked;
      std::optional<std::string> diff;
      std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t width) {
        if (diff) return;
        if (i == srcs.size()) {
          if (!(m.compose(f, picked) == n.compose(f, picked)))
            diff = "composite of " + f.str() + " with " + Elem::nest(picked).str() + " differs";
          return;
        }
        for (const auto& g : small_by_target[srcs[i]]) {
          std::size_t w = width + m.source_of(g).size();
          if (static_cast<Bound>(w) > b) continue;
          picked.push_back(g);
          go(i + 1, w);
          picked.pop_back();
        }
      };
      go(0, 0);
      if (diff) return diff;
    }
  return std::nullopt;
}

/// (f, phi) with phi from a with its target pushed along f and its sources
/// along T f, into b.
struct TMonoidHom {
  MapF f;
  SpanCell phi;
};

inline TMonoidHom make_tmonoid_hom(const TMonoid& src, const TMonoid& tgt, const MapF& f, SpanCell::Fn phi,
                                   std::string name = "phi") {
  Span pushed = post_leg(post_leg(src.a, Side::Left, f), Side::Right, MapF::map_of(f));
  return TMonoidHom{f, SpanCell::unchecked(pushed, tgt.a, std::move(name), std::move(phi))};
}

inline LawReports check_tmonoid_hom(const TMonoidHom& h, const TMonoid& src, const TMonoid& tgt, Bound b = 3) {
  std::string inst = src.name + " -> " + tgt.name;
  bool exact = src.exact && tgt.exact;
  std::optional<Bound> shown = exact ? std::nullopt : std::optional<Bound>(b);
  Bound use = exact ? std::max<Bound>(b, 1) : b;
  LawReports out;
  out.push_back(law_result("phi is a cell", inst, shown, detail::illegal(h.phi, use)));
  auto mapped = [&](const Elem& l) {
    std::vector<Elem> v;
    for (const auto& e : l.kids()) v.push_back(h.phi(e));
    return Elem::nest(std::move(v));
  };
  auto mult = detail::first_difference(
      kl_compose_n({src.a, src.a}).enumerate(use), [&](const Elem& e) { return h.phi(src.mu(e)); },
      [&](const Elem& e) { return tgt.mu(Elem::nest({h.phi(e[0]), mapped(e[1])})); });
  out.push_back(law_result("multiplicative", inst, shown, mult));
  auto unit = detail::first_difference(
      src.x.enumerate(use), [&](const Elem& o) { return h.phi(src.eta(o)); },
      [&](const Elem& o) { return tgt.eta(h.f(o)); });
  out.push_back(law_result("unital", inst, shown, unit));
  return out;
}

inline TMonoidHom identity_tmonoid_hom(const TMonoid& t) {
  return make_tmonoid_hom(t, t, MapF::identity(t.x), [](const Elem& e) { return e; }, "1");
}

inline TMonoidHom compose_tmonoid_homs(const TMonoidHom& g, const TMonoidHom& f, const TMonoid& src,
                                       const TMonoid& tgt) {
  SpanCell pf = f.phi, pg = g.phi;
  return make_tmonoid_hom(src, tgt, MapF::compose_seq({f.f, g.f}), [pf, pg](const Elem& e) { return pg(pf(e)); },
                          pg.name() + "." + pf.name());
}

/// Object map and operation map between token multicategories, for instance
/// reduction mod 2 from the cyclic multicategory of order 4.
inline TMonoidHom token_hom(const TMonoid& src, const TMonoid& tgt, const MapF& f, const std::string& label) {
  Elem tag = Elem::atom(label);
  MapF tf = MapF::map_of(f);
  return make_tmonoid_hom(src, tgt, f, [tag, f, tf](const Elem& op) {
    return Elem::nest({tag, tf(op[1]), f(op[2])});
  }, "tokens");
}

// ---------------------------------------------------------------------------
// Monoids and T-monoids in the matrix equipment

/// A V-category on x: i_x <= a and a a <= a.
inline LawReports check_mat_monoid(const MatVector& a, const std::string& name, Bound b = 3) {
  std::optional<Bound> shown = a.source().is_fin() && a.is_table() ? std::nullopt : std::optional<Bound>(b);
  auto pair = [](const std::optional<std::pair<Elem, Elem>>& w) -> std::optional<Elem> {
    if (!w) return std::nullopt;
    return Elem::nest({w->first, w->second});
  };
  LawReports out;
  out.push_back(law_result("unit", name, shown, pair(mat_leq_violation(mat_identity(a.quantale(), a.source()), a, b))));
  out.push_back(law_result("multiplication", name, shown, pair(mat_leq_violation(mat_compose_n({a, a}, std::nullopt, b), a, b))));
  return out;
}

/// A (T, V)-category on x: kl_identity <= a and kl(a, a) <= a, checked on
/// lists up to the bound.
inline LawReports check_mat_tmonoid(const MatVector& a, const std::string& name, Bound b = 3) {
  auto pair = [](const std::optional<std::pair<Elem, Elem>>& w) -> std::optional<Elem> {
    if (!w) return std::nullopt;
    return Elem::nest({w->first, w->second});
  };
  LawReports out;
  out.push_back(law_result("unit", name, b, pair(mat_leq_violation(mat_kl_identity(a.quantale(), a.source()), a, b))));
  out.push_back(law_result("multiplication", name, b, pair(mat_leq_violation(mat_kl_compose_n({a, a}, b), a, b))));
  return out;
}

/// a(t, u) holds when t is below every entry of u.
inline MatVector multi_preorder(QuantaleRef q, const SetExpr& x, std::function<bool(const Elem&, const Elem&)> leq,
                                Bound b, std::string name = "multi-preorder") {
  V top = q->top(), bot = q->bottom();
  return MatVector::pred(q, x, SetExpr::fm(x), std::move(name), [leq, top, bot](const Elem& t, const Elem& u) {
    for (const auto& v : u.kids())
      if (!leq(t, v)) return bot;
    return top;
  }, b);
}

}  // namespace gmc
