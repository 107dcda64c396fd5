#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "gmc/monoids.hpp"

namespace gmc {

// ---------------------------------------------------------------------------
// Modules between span monoids (profunctors between finite categories)

/// A vector m acted on by `left` through [b, m] => m and by `right` through
/// [m, a] => m. An element of m is a heteromorphism from its right leg value
/// to its left leg value.
struct BiModule {
  std::string name;
  Monoid left;
  Monoid right;
  Span m;
  SpanCell lact;
  SpanCell ract;
  bool finite = true;

  Elem act_left(const Elem& beta, const Elem& e) const { return lact(Elem::nest({beta, e})); }
  Elem act_right(const Elem& e, const Elem& alpha) const { return ract(Elem::nest({e, alpha})); }
};

inline BiModule make_bimodule(std::string name, const Monoid& left, const Monoid& right, const Span& m,
                              SpanCell::Fn lact, SpanCell::Fn ract, bool finite = true) {
  if (!(m.source() == left.x)) throw ChainMismatch(name + ": left end is not the objects of " + left.name);
  if (!(m.target() == right.x)) throw ChainMismatch(name + ": right end is not the objects of " + right.name);
  SpanCell l = SpanCell::unchecked(compose_n({left.a, m}), m, name + ".lact", std::move(lact));
  SpanCell r = SpanCell::unchecked(compose_n({m, right.a}), m, name + ".ract", std::move(ract));
  return BiModule{std::move(name), left, right, m, l, r, finite && left.finite && right.finite};
}

/// Both actions are cells, each is associative and unital, and they commute.
inline LawReports check_bimodule(const BiModule& mod, Bound b = 3) {
  std::optional<Bound> shown = mod.finite ? std::nullopt : std::optional<Bound>(b);
  const std::string& inst = mod.name;
  const Monoid& L = mod.left;
  const Monoid& R = mod.right;
  LawReports out;
  out.push_back(law_result("left action is a cell", inst, shown, detail::illegal(mod.lact, b)));
  out.push_back(law_result("right action is a cell", inst, shown, detail::illegal(mod.ract, b)));
  out.push_back(law_result(
      "left action associativity", inst, shown,
      detail::first_difference(
          compose_n({L.a, L.a, mod.m}).enumerate(b),
          [&](const Elem& t) { return mod.act_left(L.mu(Elem::nest({t[0], t[1]})), t[2]); },
          [&](const Elem& t) { return mod.act_left(t[0], mod.act_left(t[1], t[2])); })));
  out.push_back(law_result(
      "left action unit", inst, shown,
      detail::first_difference(
          mod.m.enumerate(b), [&](const Elem& e) { return mod.act_left(L.eta(mod.m.left_of(e)), e); },
          [](const Elem& e) { return e; })));
  out.push_back(law_result(
      "right action associativity", inst, shown,
      detail::first_difference(
          compose_n({mod.m, R.a, R.a}).enumerate(b),
          [&](const Elem& t) { return mod.act_right(t[0], R.mu(Elem::nest({t[1], t[2]}))); },
          [&](const Elem& t) { return mod.act_right(mod.act_right(t[0], t[1]), t[2]); })));
  out.push_back(law_result(
      "right action unit", inst, shown,
      detail::first_difference(
          mod.m.enumerate(b), [&](const Elem& e) { return mod.act_right(e, R.eta(mod.m.right_of(e))); },
          [](const Elem& e) { return e; })));
  out.push_back(law_result(
      "actions commute", inst, shown,
      detail::first_difference(
          compose_n({L.a, mod.m, R.a}).enumerate(b),
          [&](const Elem& t) { return mod.act_right(mod.act_left(t[0], t[1]), t[2]); },
          [&](const Elem& t) { return mod.act_left(t[0], mod.act_right(t[1], t[2])); })));
  return out;
}

struct ModuleMap {
  SpanCell cell;
};

inline ModuleMap make_module_map(const BiModule& src, const BiModule& tgt, SpanCell::Fn f, std::string name = "t") {
  return ModuleMap{SpanCell::unchecked(src.m, tgt.m, std::move(name), std::move(f))};
}

inline LawReports check_module_map(const ModuleMap& t, const BiModule& src, const BiModule& tgt, Bound b = 3) {
  std::string inst = src.name + " -> " + tgt.name;
  std::optional<Bound> shown = src.finite && tgt.finite ? std::nullopt : std::optional<Bound>(b);
  LawReports out;
  out.push_back(law_result("map is a cell", inst, shown, detail::illegal(t.cell, b)));
  out.push_back(law_result(
      "left action preserved", inst, shown,
      detail::first_difference(
          compose_n({src.left.a, src.m}).enumerate(b),
          [&](const Elem& p) { return t.cell(src.act_left(p[0], p[1])); },
          [&](const Elem& p) { return tgt.act_left(p[0], t.cell(p[1])); })));
  out.push_back(law_result(
      "right action preserved", inst, shown,
      detail::first_difference(
          compose_n({src.m, src.right.a}).enumerate(b),
          [&](const Elem& p) { return t.cell(src.act_right(p[0], p[1])); },
          [&](const Elem& p) { return tgt.act_right(t.cell(p[0]), p[1]); })));
  return out;
}

inline ModuleMap identity_module_map(const BiModule& m) {
  return ModuleMap{identity_cell(m.m)};
}

/// Both maps are module maps and inverse to each other.
inline LawReports check_module_iso(const ModuleMap& fwd, const ModuleMap& inv, const BiModule& src,
                                   const BiModule& tgt, const std::string& instance, Bound b = 3) {
  std::optional<Bound> shown = src.finite && tgt.finite ? std::nullopt : std::optional<Bound>(b);
  LawReports out;
  for (auto r : check_module_map(fwd, src, tgt, b)) {
    r.law = "forward " + r.law;
    r.instance = instance;
    out.push_back(std::move(r));
  }
  for (auto r : check_module_map(inv, tgt, src, b)) {
    r.law = "inverse " + r.law;
    r.instance = instance;
    out.push_back(std::move(r));
  }
  auto same = [](const Elem& e) { return e; };
  out.push_back(law_result("inverse after forward", instance, shown,
                           detail::first_difference(
                               src.m.enumerate(b), [&](const Elem& e) { return inv.cell(fwd.cell(e)); }, same)));
  out.push_back(law_result("forward after inverse", instance, shown,
                           detail::first_difference(
                               tgt.m.enumerate(b), [&](const Elem& e) { return fwd.cell(inv.cell(e)); }, same)));
  return out;
}

// ---------------------------------------------------------------------------
// Standard modules

/// The monoid acting on itself by multiplication on both sides.
inline BiModule identity_module(const Monoid& a) {
  return BiModule{"id(" + a.name + ")", a, a, a.a, a.mu, a.mu, a.finite};
}

/// For a functor f : A -> B, the module with elements [g, x] where g is a
/// morphism of B out of f(x). B acts by postcomposition, A by precomposition
/// with f of a morphism.
inline BiModule hom_module(const MonoidHom& f, const Monoid& A, const Monoid& B, std::string name = "",
                           Bound b = 3) {
  if (name.empty()) name = "hom(" + B.name + ", " + f.phi.name() + " " + A.name + ")";
  std::vector<std::tuple<Elem, Elem, Elem>> rows;
  for (const auto& x : A.x.enumerate(b))
    for (const auto& g : B.a.side_fiber(Side::Right, f.f(x), b).value_or(std::vector<Elem>{}))
      rows.emplace_back(Elem::nest({g, x}), B.a.left_of(g), x);
  Span m = table_span(B.x, A.x, rows, name + "#" + std::to_string(detail::next_id()));
  SpanCell phi = f.phi;
  Monoid Bm = B;
  return make_bimodule(
      name, B, A, m, [Bm](const Elem& p) { return Elem::nest({Bm.mu(Elem::nest({p[0], p[1][0]})), p[1][1]}); },
      [Bm, phi, A](const Elem& p) {
        return Elem::nest({Bm.mu(Elem::nest({p[0][0], phi(p[1])})), A.a.right_of(p[1])});
      },
      A.finite && B.finite);
}

// ---------------------------------------------------------------------------
// Composition by coequalizer

/// Classes of composable pairs [n, m] under (n.beta, m) ~ (n, beta.m), each
/// named by its enumeration-least member.
struct Quotient {
  std::vector<Elem> pairs;
  std::map<Elem, Elem> rep;
  std::size_t classes = 0;

  Elem operator()(const Elem& pair) const {
    auto it = rep.find(pair);
    if (it == rep.end()) throw DomainError("not a composable pair: " + pair.str());
    return it->second;
  }
};

inline void check_composable(const BiModule& n, const BiModule& m) {
  if (!(n.right.x == m.left.x) || !same_span(n.right.a, m.left.a))
    throw ChainMismatch(n.name + " is acted on by " + n.right.name + " but " + m.name + " by " + m.left.name);
}

inline Quotient composite_quotient(const BiModule& n, const BiModule& m, Bound b = 3) {
  check_composable(n, m);
  Quotient q;
  q.pairs = compose_n({n.m, m.m}).enumerate(b);
  std::map<Elem, std::size_t> index;
  for (std::size_t i = 0; i < q.pairs.size(); ++i) index.emplace(q.pairs[i], i);
  std::vector<std::size_t> parent(q.pairs.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto at = [&](const Elem& p) {
    auto it = index.find(p);
    if (it == index.end()) throw CellError("action leaves the composable pairs at " + p.str());
    return it->second;
  };
  for (const auto& t : compose_n({n.m, n.right.a, m.m}).enumerate(b)) {
    std::size_t i = find(at(Elem::nest({n.act_right(t[0], t[1]), t[2]})));
    std::size_t j = find(at(Elem::nest({t[0], m.act_left(t[1], t[2])})));
    if (i != j) parent[std::max(i, j)] = std::min(i, j);
  }
  for (std::size_t i = 0; i < q.pairs.size(); ++i) {
    std::size_t r = find(i);
    q.classes += r == i;
    q.rep.emplace(q.pairs[i], q.pairs[r]);
  }
  return q;
}

/// Quotient elements are the class representatives; the actions act on a
/// representative and renormalize.
inline BiModule module_compose(const BiModule& n, const BiModule& m, Bound b = 3) {
  Quotient q = composite_quotient(n, m, b);
  std::vector<std::tuple<Elem, Elem, Elem>> rows;
  for (const auto& p : q.pairs)
    if (q(p) == p) rows.emplace_back(p, n.m.left_of(p[0]), m.m.right_of(p[1]));
  std::string name = "(" + n.name + " * " + m.name + ")";
  Span carrier = table_span(n.left.x, m.right.x, rows, name + "#" + std::to_string(detail::next_id()));
  return make_bimodule(
      name, n.left, m.right, carrier,
      [q, n](const Elem& p) { return q(Elem::nest({n.act_left(p[0], p[1][0]), p[1][1]})); },
      [q, m](const Elem& p) { return q(Elem::nest({p[0][0], m.act_right(p[0][1], p[1])})); },
      n.finite && m.finite);
}

struct ModuleIso {
  ModuleMap fwd, inv;
  BiModule src, tgt;
};

/// (p * n) * m  ->  p * (n * m).
inline ModuleIso module_associator(const BiModule& p, const BiModule& n, const BiModule& m, Bound b = 3) {
  BiModule pn = module_compose(p, n, b), nm = module_compose(n, m, b);
  BiModule lhs = module_compose(pn, m, b), rhs = module_compose(p, nm, b);
  Quotient q_pn = composite_quotient(p, n, b), q_nm = composite_quotient(n, m, b);
  Quotient q_l = composite_quotient(pn, m, b), q_r = composite_quotient(p, nm, b);
  ModuleMap fwd = make_module_map(lhs, rhs, [q_nm, q_r](const Elem& e) {
    return q_r(Elem::nest({e[0][0], q_nm(Elem::nest({e[0][1], e[1]}))}));
  }, "assoc");
  ModuleMap inv = make_module_map(rhs, lhs, [q_pn, q_l](const Elem& e) {
    return q_l(Elem::nest({q_pn(Elem::nest({e[0], e[1][0]})), e[1][1]}));
  }, "assoc^-1");
  return {fwd, inv, lhs, rhs};
}

/// id * m -> m by the left action.
inline ModuleIso left_unitor(const BiModule& m, Bound b = 3) {
  BiModule idm = identity_module(m.left);
  BiModule c = module_compose(idm, m, b);
  Quotient q = composite_quotient(idm, m, b);
  Monoid L = m.left;
  ModuleMap fwd = make_module_map(c, m, [m](const Elem& e) { return m.act_left(e[0], e[1]); }, "lunit");
  ModuleMap inv = make_module_map(m, c, [q, L, m](const Elem& e) {
    return q(Elem::nest({L.eta(m.m.left_of(e)), e}));
  }, "lunit^-1");
  return {fwd, inv, c, m};
}

/// m * id -> m by the right action.
inline ModuleIso right_unitor(const BiModule& m, Bound b = 3) {
  BiModule idm = identity_module(m.right);
  BiModule c = module_compose(m, idm, b);
  Quotient q = composite_quotient(m, idm, b);
  Monoid R = m.right;
  ModuleMap fwd = make_module_map(c, m, [m](const Elem& e) { return m.act_right(e[0], e[1]); }, "runit");
  ModuleMap inv = make_module_map(m, c, [q, R, m](const Elem& e) {
    return q(Elem::nest({e, R.eta(m.m.right_of(e))}));
  }, "runit^-1");
  return {fwd, inv, c, m};
}

/// hom_g * hom_f -> hom_{g f}: [[h, y], [k, x]] goes to [h . g(k), x].
inline ModuleIso representable_comparison(const MonoidHom& g, const MonoidHom& f, const Monoid& A,
                                          const Monoid& B, const Monoid& C, Bound b = 3) {
  BiModule hf = hom_module(f, A, B, "", b), hg = hom_module(g, B, C, "", b);
  MonoidHom gf = compose_homs(g, f, A, C);
  BiModule hgf = hom_module(gf, A, C, "", b);
  BiModule comp = module_compose(hg, hf, b);
  Quotient q = composite_quotient(hg, hf, b);
  SpanCell gphi = g.phi;
  MapF ff = f.f;
  Monoid Cm = C, Bm = B;
  ModuleMap fwd = make_module_map(comp, hgf, [Cm, gphi](const Elem& e) {
    return Elem::nest({Cm.mu(Elem::nest({e[0][0], gphi(e[1][0])})), e[1][1]});
  }, "yoneda");
  ModuleMap inv = make_module_map(hgf, comp, [q, Bm, ff](const Elem& e) {
    Elem fx = ff(e[1]);
    return q(Elem::nest({Elem::nest({e[0], fx}), Elem::nest({Bm.eta(fx), e[1]})}));
  }, "yoneda^-1");
  return {fwd, inv, comp, hgf};
}

/// Every map from the composable pairs into {0, 1} that equalizes the two
/// actions factors through the quotient, and uniquely since the quotient is
/// onto its representatives. Exhaustive over all such maps.
inline LawReports check_coequalizer(const BiModule& n, const BiModule& m, Bound b = 3,
                                    std::size_t max_pairs = 16) {
  Quotient q = composite_quotient(n, m, b);
  std::string inst = n.name + " * " + m.name;
  std::optional<Bound> shown = n.finite && m.finite ? std::nullopt : std::optional<Bound>(b);
  if (q.pairs.size() > max_pairs)
    throw BoundTooLargeToEnumerate(inst + " has " + std::to_string(q.pairs.size()) + " composable pairs");
  auto triples = compose_n({n.m, n.right.a, m.m}).enumerate(b);
  std::map<Elem, std::size_t> index;
  for (std::size_t i = 0; i < q.pairs.size(); ++i) index.emplace(q.pairs[i], i);
  std::vector<std::pair<std::size_t, std::size_t>> gens;
  for (const auto& t : triples)
    gens.emplace_back(index.at(Elem::nest({n.act_right(t[0], t[1]), t[2]})),
                      index.at(Elem::nest({t[0], m.act_left(t[1], t[2])})));

  LawReports out;
  std::optional<Elem> unbalanced;
  for (std::size_t i = 0; i < gens.size() && !unbalanced; ++i)
    if (!(q(q.pairs[gens[i].first]) == q(q.pairs[gens[i].second]))) unbalanced = triples[i];
  out.push_back(law_result("quotient equalizes the actions", inst, shown, unbalanced));

  std::optional<Elem> no_factor;
  std::size_t balanced = 0;
  const std::uint64_t total = std::uint64_t{1} << q.pairs.size();
  for (std::uint64_t bits = 0; bits < total && !no_factor; ++bits) {
    auto val = [&](std::size_t i) { return (bits >> i) & 1u; };
    bool ok = std::all_of(gens.begin(), gens.end(), [&](const auto& g) { return val(g.first) == val(g.second); });
    if (!ok) continue;
    ++balanced;
    for (std::size_t i = 0; i < q.pairs.size() && !no_factor; ++i)
      if (val(i) != val(index.at(q(q.pairs[i])))) no_factor = q.pairs[i];
  }
  out.push_back(law_result("balanced maps factor through the quotient", inst, shown, no_factor));
  if (!no_factor && balanced != (std::uint64_t{1} << q.classes))
    out.push_back(law_failure("factorization is unique", inst, shown,
                              std::to_string(balanced) + " balanced maps for " + std::to_string(q.classes) +
                                  " classes"));
  else
    out.push_back(law_result("factorization is unique", inst, shown, std::nullopt));
  return out;
}

/// Composites are modules, composition is associative up to the canonical
/// isomorphism, and identity modules are units.
inline LawReports mmod_equipment_laws(const BiModule& p, const BiModule& n, const BiModule& m, Bound b = 3) {
  LawReports out;
  auto add = [&](LawReports rs) {
    for (auto& r : rs) out.push_back(std::move(r));
  };
  for (const auto* x : {&p.left, &p.right, &n.right, &m.right})
    for (auto r : check_monoid(*x, b)) {
      r.law = "scalar " + r.law;
      out.push_back(std::move(r));
    }
  for (const auto* x : {&p, &n, &m}) add(check_bimodule(*x, b));
  BiModule pn = module_compose(p, n, b), nm = module_compose(n, m, b);
  add(check_bimodule(pn, b));
  add(check_bimodule(nm, b));
  ModuleIso a = module_associator(p, n, m, b);
  add(check_bimodule(a.src, b));
  add(check_bimodule(a.tgt, b));
  add(check_module_iso(a.fwd, a.inv, a.src, a.tgt, "associator " + a.src.name, b));
  for (const auto* x : {&p, &n, &m}) {
    ModuleIso l = left_unitor(*x, b), r = right_unitor(*x, b);
    add(check_module_iso(l.fwd, l.inv, l.src, l.tgt, "left unitor " + x->name, b));
    add(check_module_iso(r.fwd, r.inv, r.src, r.tgt, "right unitor " + x->name, b));
  }
  return out;
}

}  // namespace gmc
