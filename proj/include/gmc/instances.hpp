#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "gmc/algebras.hpp"

namespace gmc::instances {

inline Elem atom(const std::string& s) { return Elem::atom(s); }

/// u -> v.
inline FiniteCategory arrow_category() {
  FiniteCategory c;
  c.objects = {atom("u"), atom("v")};
  c.morphisms = {{atom("1u"), atom("u"), atom("u")}, {atom("1v"), atom("v"), atom("v")}, {atom("a"), atom("u"), atom("v")}};
  c.identities = {{atom("u"), atom("1u")}, {atom("v"), atom("1v")}};
  c.compose = {{{atom("1u"), atom("1u")}, atom("1u")},
               {{atom("1v"), atom("1v")}, atom("1v")},
               {{atom("a"), atom("1u")}, atom("a")},
               {{atom("1v"), atom("a")}, atom("a")}};
  return c;
}

/// 0 -> 1 -> ... -> n-1 with morphisms "ij" for i <= j. Needs n <= 10.
inline FiniteCategory chain_category(int n) {
  FiniteCategory c;
  auto mor = [](int i, int j) { return atom(std::to_string(i) + std::to_string(j)); };
  for (int i = 0; i < n; ++i) {
    c.objects.push_back(atom(std::to_string(i)));
    c.identities[atom(std::to_string(i))] = mor(i, i);
    for (int j = i; j < n; ++j) {
      c.morphisms.push_back({mor(i, j), atom(std::to_string(i)), atom(std::to_string(j))});
      for (int k = j; k < n; ++k) c.compose[{mor(j, k), mor(i, j)}] = mor(i, k);
    }
  }
  return c;
}

/// One object, morphisms 1 and e with e e = e.
inline FiniteCategory idempotent_category() {
  FiniteCategory c;
  c.objects = {atom("*")};
  c.morphisms = {{atom("1"), atom("*"), atom("*")}, {atom("e"), atom("*"), atom("*")}};
  c.identities = {{atom("*"), atom("1")}};
  c.compose = {{{atom("1"), atom("1")}, atom("1")},
               {{atom("1"), atom("e")}, atom("e")},
               {{atom("e"), atom("1")}, atom("e")},
               {{atom("e"), atom("e")}, atom("e")}};
  return c;
}

inline FiniteCategory terminal_category() {
  FiniteCategory c;
  c.objects = {atom("*")};
  c.morphisms = {{atom("1"), atom("*"), atom("*")}};
  c.identities = {{atom("*"), atom("1")}};
  c.compose = {{{atom("1"), atom("1")}, atom("1")}};
  return c;
}

/// Monotone map between chain categories.
inline MonoidHom monotone_functor(const Monoid& src, const Monoid& tgt, std::vector<int> on_objects,
                                  const std::string& name) {
  auto img = [on_objects](const Elem& o) { return atom(std::to_string(on_objects.at(std::stoi(o.name())))); };
  MapF f = MapF::fn(src.x, tgt.x, name, img);
  return make_monoid_hom(src, tgt, f, [on_objects](const Elem& m) {
    const std::string& s = m.name();
    return atom(std::to_string(on_objects.at(s[0] - '0')) + std::to_string(on_objects.at(s[1] - '0')));
  }, name);
}

/// Only unary identity operations.
inline TMonoid identities_only(const std::vector<std::string>& names) {
  std::vector<Elem> objs;
  for (const auto& n : names) objs.push_back(atom(n));
  SetExpr x = SetExpr::fin(objs);
  MulticatTable tab;
  for (const auto& o : objs) {
    Elem id = atom("1" + o.name());
    tab.ops.push_back({id, Elem::nest({o}), o});
    tab.identities[o] = id;
    tab.composites[Elem::nest({id, Elem::nest({id})})] = id;
  }
  return multicat_to_tmonoid(Multicat::from_table("ids", x, tab));
}

inline StrictMonCat single_object_smc() {
  StrictMonCat s;
  s.name = "pt";
  s.cat = terminal_category();
  s.unit = atom("*");
  s.tensor_objects = {{{atom("*"), atom("*")}, atom("*")}};
  s.tensor_morphisms = {{{atom("1"), atom("1")}, atom("1")}};
  return s;
}

/// The arrow 0 -> 1 with tensor max and unit 0.
inline StrictMonCat arrow_max_smc() {
  StrictMonCat s;
  s.name = "arrow max";
  s.cat.objects = {atom("0"), atom("1")};
  s.cat.morphisms = {{atom("i0"), atom("0"), atom("0")}, {atom("i1"), atom("1"), atom("1")}, {atom("a"), atom("0"), atom("1")}};
  s.cat.identities = {{atom("0"), atom("i0")}, {atom("1"), atom("i1")}};
  s.cat.compose = {{{atom("i0"), atom("i0")}, atom("i0")},
                   {{atom("i1"), atom("i1")}, atom("i1")},
                   {{atom("a"), atom("i0")}, atom("a")},
                   {{atom("i1"), atom("a")}, atom("a")}};
  s.unit = atom("0");
  for (const char* x : {"0", "1"})
    for (const char* y : {"0", "1"})
      s.tensor_objects[{atom(x), atom(y)}] = atom(std::max(std::string(x), std::string(y)));
  std::map<std::string, std::pair<int, int>> ends{{"i0", {0, 0}}, {"i1", {1, 1}}, {"a", {0, 1}}};
  for (const auto& [f, fe] : ends)
    for (const auto& [g, ge] : ends) {
      std::pair<int, int> e{std::max(fe.first, ge.first), std::max(fe.second, ge.second)};
      for (const auto& [k, ke] : ends)
        if (ke == e) s.tensor_morphisms[{atom(f), atom(g)}] = atom(k);
    }
  return s;
}

}  // namespace gmc::instances
