#include <gtest/gtest.h>

#include "gmc/battery.hpp"
#include "gmc/monoids.hpp"

using namespace gmc;

namespace {

Elem A(const std::string& s) { return Elem::atom(s); }

FiniteCategory point_category() {
  FiniteCategory c;
  c.objects = {A("*")};
  c.morphisms = {{A("1"), A("*"), A("*")}};
  c.identities[A("*")] = A("1");
  c.compose[{A("1"), A("1")}] = A("1");
  return c;
}

FiniteCategory z2_category() {
  FiniteCategory c;
  c.objects = {A("*")};
  c.morphisms = {{A("1"), A("*"), A("*")}, {A("s"), A("*"), A("*")}};
  c.identities[A("*")] = A("1");
  c.compose[{A("1"), A("1")}] = A("1");
  c.compose[{A("1"), A("s")}] = A("s");
  c.compose[{A("s"), A("1")}] = A("s");
  c.compose[{A("s"), A("s")}] = A("1");
  return c;
}

/// 0 -> 1 -> 2 with all composites.
FiniteCategory chain3() {
  FiniteCategory c;
  for (int i = 0; i < 3; ++i) c.objects.push_back(A("o" + std::to_string(i)));
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      Elem name = A(i == j ? "id" + std::to_string(i) : "f" + std::to_string(i) + std::to_string(j));
      c.morphisms.push_back({name, c.objects[i], c.objects[j]});
      if (i == j) c.identities[c.objects[i]] = name;
    }
  for (const auto& f : c.morphisms)
    for (const auto& g : c.morphisms)
      if (g.dom == f.cod) {
        for (const auto& h : c.morphisms)
          if (h.dom == f.dom && h.cod == g.cod) c.compose[{g.name, f.name}] = h.name;
      }
  return c;
}

/// Two objects with two parallel arrows a, b : u -> v.
FiniteCategory parallel_pair() {
  FiniteCategory c;
  c.objects = {A("u"), A("v")};
  c.morphisms = {{A("1u"), A("u"), A("u")}, {A("1v"), A("v"), A("v")}, {A("a"), A("u"), A("v")},
                 {A("b"), A("u"), A("v")}};
  c.identities = {{A("u"), A("1u")}, {A("v"), A("1v")}};
  for (const auto& m : c.morphisms) {
    c.compose[{c.identities[m.cod], m.name}] = m.name;
    if (!(m.cod == m.dom)) c.compose[{m.name, c.identities[m.dom]}] = m.name;
  }
  return c;
}

std::size_t hom_count(const FiniteCategory& c, const Elem& from, const Elem& to) {
  std::size_t n = 0;
  for (const auto& m : c.morphisms) n += m.dom == from && m.cod == to;
  return n;
}

}  // namespace

TEST(Presentations, CategoryValidation) {
  FiniteCategory c = z2_category();
  c.compose.erase({A("s"), A("s")});
  EXPECT_THROW(c.validate(), PresentationError);
  FiniteCategory d = z2_category();
  d.identities.clear();
  EXPECT_THROW(d.validate(), PresentationError);
  FiniteCategory e = z2_category();
  e.compose[{A("s"), A("s")}] = A("t");
  EXPECT_THROW(e.validate(), PresentationError);
}

TEST(CheckMonoid, TrivialMonoid) {
  Monoid m = cat_to_monoid(point_category(), "pt");
  auto rs = check_monoid(m);
  EXPECT_TRUE(all_pass(rs));
  for (const auto& r : rs) EXPECT_EQ(r.bound_text(), "exact");
  EXPECT_EQ(monoid_to_cat(m), point_category());
}

TEST(CheckMonoid, ThreeObjectCategory) {
  Monoid m = cat_to_monoid(chain3());
  EXPECT_TRUE(all_pass(check_monoid(m)));
  EXPECT_EQ(monoid_to_cat(m), chain3());
}

TEST(CheckMonoid, CyclicGroupAsSpanMonoid) {
  Monoid m = cat_to_monoid(z2_category(), "Z2");
  EXPECT_EQ(m.a.enumerate(3).size(), 2u);
  EXPECT_EQ(m.mu(Elem::parse("[s, s]")), A("1"));
  EXPECT_TRUE(all_pass(check_monoid(m)));
  EXPECT_EQ(monoid_to_cat(m), z2_category());
}

TEST(CheckMonoid, CorruptedCompositionFails) {
  FiniteCategory c = z2_category();
  c.compose[{A("1"), A("s")}] = A("1");
  auto rs = check_monoid(cat_to_monoid(c, "bad"));
  const LawReport* f = first_failure(rs);
  ASSERT_NE(f, nullptr);
  EXPECT_FALSE(f->witness.empty());
}

TEST(CheckMonoid, SomeMutationsAreValid) {
  // s s = s turns the group of order 2 into the idempotent monoid.
  FiniteCategory c = z2_category();
  c.compose[{A("s"), A("s")}] = A("s");
  EXPECT_TRUE(all_pass(check_monoid(cat_to_monoid(c, "idempotent"))));
}

TEST(CheckMonoid, IllegalCompositeIsReported) {
  FiniteCategory c = chain3();
  c.compose[{A("f12"), A("f01")}] = A("f01");
  auto rs = check_monoid(cat_to_monoid(c, "bad"));
  EXPECT_FALSE(rs[0].pass);
  EXPECT_EQ(rs[0].law, "mu is a cell");
}

TEST(CheckMonoid, RandomCategoryRoundTrips) {
  Rng rng(70);
  int tried = 0;
  while (tried < 20) {
    FiniteCategory c = random_category(rng, 3, 7);
    if (c.objects.size() != 3 || c.morphisms.size() != 7) continue;
    ++tried;
    Monoid m = cat_to_monoid(c);
    EXPECT_TRUE(all_pass(check_monoid(m)));
    EXPECT_EQ(monoid_to_cat(m), c);
  }
}

TEST(CheckMonoid, EveryMutationFails) {
  Rng rng(71);
  for (int t = 0; t < 5; ++t) {
    FiniteCategory c = random_category(rng, 3, 8, true);
    for (const auto& [key, val] : c.compose)
      for (const auto& m : c.morphisms) {
        if (m.name == val) continue;
        FiniteCategory d = c;
        d.compose[key] = m.name;
        EXPECT_FALSE(all_pass(check_monoid(cat_to_monoid(d)))) << key.first.str() << " " << key.second.str();
      }
  }
}

TEST(TOnMonoids, TrivialMonoidLiftsToLists) {
  Monoid t = T_on_monoid(cat_to_monoid(point_category()));
  EXPECT_EQ(t.x, SetExpr::fm(SetExpr::atoms({"*"})));
  EXPECT_EQ(t.a.fiber(Elem::parse("[*, *]"), Elem::parse("[*, *]"), 3).size(), 1u);
  EXPECT_EQ(t.a.fiber(Elem::parse("[*]"), Elem::parse("[*, *]"), 3).size(), 0u);
  EXPECT_TRUE(all_pass(check_monoid(t, 2)));
}

TEST(TOnMonoids, ComponentwiseHoms) {
  FiniteCategory c = parallel_pair();
  Monoid t = T_on_monoid(cat_to_monoid(c));
  SetExpr lists = t.x;
  for (const auto& u : lists.enumerate(3))
    for (const auto& v : lists.enumerate(3)) {
      std::size_t expected = 0;
      if (u.size() == v.size()) {
        expected = 1;
        for (std::size_t i = 0; i < u.size(); ++i) expected *= hom_count(c, u[i], v[i]);
      }
      EXPECT_EQ(t.a.fiber(v, u, 3).size(), expected) << u.str() << " -> " << v.str();
    }
  EXPECT_TRUE(all_pass(check_monoid(t, 2)));
}

TEST(TOnMonoids, MonadComponentsAreHoms) {
  Monoid m = cat_to_monoid(z2_category(), "Z2");
  Monoid t = T_on_monoid(m), tt = T_on_monoid(t);
  EXPECT_TRUE(all_pass(check_monoid_hom(monad_unit_hom(m), m, t, 2)));
  EXPECT_TRUE(all_pass(check_monoid_hom(monad_mult_hom(m), tt, t, 2)));
}

TEST(TOnMonoids, FunctorialOnHoms) {
  // Z2 -> point -> point, and its image under T.
  Monoid z = cat_to_monoid(z2_category(), "Z2"), p = cat_to_monoid(point_category(), "pt");
  SetExpr star = SetExpr::atoms({"*"});
  auto to_point = make_monoid_hom(z, p, MapF::identity(star), [](const Elem&) { return A("1"); }, "collapse");
  auto id_point = make_monoid_hom(p, p, MapF::identity(star), [](const Elem& e) { return e; }, "1");
  EXPECT_TRUE(all_pass(check_monoid_hom(to_point, z, p)));
  auto gf = compose_homs(id_point, to_point, z, p);
  EXPECT_TRUE(all_pass(check_monoid_hom(gf, z, p)));
  auto t_gf = T_on_monoid_hom(gf, z, p);
  auto tg_tf = compose_homs(T_on_monoid_hom(id_point, p, p), T_on_monoid_hom(to_point, z, p), T_on_monoid(z),
                            T_on_monoid(p));
  for (const auto& l : T_on_monoid(z).a.enumerate(3)) EXPECT_EQ(t_gf.phi(l), tg_tf.phi(l));
  auto bad = make_monoid_hom(p, z, MapF::identity(star), [](const Elem&) { return A("s"); }, "bad");
  EXPECT_FALSE(all_pass(check_monoid_hom(bad, p, z)));
}

TEST(CheckTMonoid, IdentitiesOnly) {
  SetExpr x = SetExpr::atoms({"a", "b"});
  MulticatTable t;
  for (const auto& o : x.elements()) {
    Elem id = A("1" + o.name());
    t.ops.push_back({id, Elem::nest({o}), o});
    t.identities[o] = id;
    t.composites[Elem::nest({id, Elem::nest({id})})] = id;
  }
  Multicat mc = Multicat::from_table("ids", x, t);
  TMonoid tm = multicat_to_tmonoid(mc);
  auto rs = check_tmonoid(tm);
  EXPECT_TRUE(all_pass(rs));
  for (const auto& r : rs) EXPECT_EQ(r.bound_text(), "exact");
  EXPECT_EQ(tm.a.enumerate(3).size(), x.size());
}

TEST(CheckTMonoid, TerminalMulticat) {
  TMonoid tm = multicat_to_tmonoid(terminal_multicat(SetExpr::atoms({"a", "b"})));
  auto rs = check_tmonoid(tm, 3);
  EXPECT_TRUE(all_pass(rs));
  for (const auto& r : rs) EXPECT_EQ(r.bound_text(), "3");
  for (const auto& s : SetExpr::fm(tm.x).enumerate(3))
    for (const auto& t : tm.x.elements()) EXPECT_EQ(tm.a.fiber(t, s, 3).size(), 1u);
}

TEST(CheckTMonoid, CyclicMulticat) {
  Multicat z2 = cyclic_multicat(2);
  TMonoid tm = multicat_to_tmonoid(z2);
  EXPECT_TRUE(all_pass(check_tmonoid(tm, 3)));
  for (const auto& s : SetExpr::fm(tm.x).enumerate(3))
    for (const auto& t : tm.x.elements()) {
      int sum = 0;
      for (const auto& m : s.kids()) sum += std::stoi(m.name());
      EXPECT_EQ(tm.a.fiber(t, s, 3).size(), sum % 2 == std::stoi(t.name()) ? 1u : 0u);
    }
}

TEST(CheckTMonoid, UnaryMulticatComposesLikeCategory) {
  FiniteCategory c = chain3();
  TMonoid tm = multicat_to_tmonoid(category_as_multicat(c));
  EXPECT_TRUE(all_pass(check_tmonoid(tm)));
  for (const auto& [k, v] : c.compose) EXPECT_EQ(tm.mu(Elem::nest({k.first, Elem::nest({k.second})})), v);
}

TEST(CheckTMonoid, RoundTrips) {
  Multicat z2 = cyclic_multicat(2);
  EXPECT_FALSE(presentation_diff(tmonoid_to_multicat(multicat_to_tmonoid(z2)), z2, 3).has_value());
  Multicat cm = category_as_multicat(chain3());
  Multicat back = tmonoid_to_multicat(multicat_to_tmonoid(cm));
  ASSERT_TRUE(back.table);
  EXPECT_FALSE(presentation_diff(back, cm).has_value());
}

TEST(CheckTMonoid, MutationsFail) {
  Multicat cm = category_as_multicat(z2_category());
  MulticatTable t = *cm.table;
  t.composites[Elem::parse("[1, [s]]")] = A("1");
  auto rs = check_tmonoid(multicat_to_tmonoid(Multicat::from_table("bad", cm.objects, t)));
  const LawReport* f = first_failure(rs);
  ASSERT_NE(f, nullptr);
  EXPECT_FALSE(f->witness.empty());
  MulticatTable u = *cm.table;
  u.identities[A("*")] = A("s");
  EXPECT_FALSE(all_pass(check_tmonoid(multicat_to_tmonoid(Multicat::from_table("bad", cm.objects, u)))));
}

TEST(TMonoidHoms, IdentityAndParity) {
  TMonoid z4 = multicat_to_tmonoid(cyclic_multicat(4));
  TMonoid z2 = multicat_to_tmonoid(cyclic_multicat(2));
  EXPECT_TRUE(all_pass(check_tmonoid_hom(identity_tmonoid_hom(z2), z2, z2, 3)));
  std::vector<std::pair<Elem, Elem>> g;
  for (int i = 0; i < 4; ++i) g.emplace_back(A(std::to_string(i)), A(std::to_string(i % 2)));
  MapF parity = MapF::table(z4.x, z2.x, g);
  auto h = token_hom(z4, z2, parity, "z");
  EXPECT_TRUE(all_pass(check_tmonoid_hom(h, z4, z2, 2)));
  auto hh = compose_tmonoid_homs(identity_tmonoid_hom(z2), h, z4, z2);
  EXPECT_TRUE(all_pass(check_tmonoid_hom(hh, z4, z2, 2)));
  std::vector<std::pair<Elem, Elem>> ones;
  for (int i = 0; i < 4; ++i) ones.emplace_back(A(std::to_string(i)), A("1"));
  auto bad = token_hom(z4, z2, MapF::table(z4.x, z2.x, ones), "z");
  auto rs = check_tmonoid_hom(bad, z4, z2, 2);
  EXPECT_FALSE(rs[0].pass);
  EXPECT_FALSE(rs[0].witness.empty());
}

TEST(MatMonoids, MultiPreorderIsTwoCategory) {
  auto q = Quantale::two();
  SetExpr x = numbered_set("x", 3);
  auto leq = [](const Elem& a, const Elem& b) { return a.name() <= b.name(); };
  MatVector a = multi_preorder(q, x, leq, 3);
  auto rs = check_mat_tmonoid(a, "chain", 3);
  EXPECT_TRUE(all_pass(rs));
  for (const auto& r : rs) EXPECT_EQ(r.bound_text(), "3");
  // Not transitive: x0 <= x1 <= x2 without x0 <= x2.
  auto broken = [](const Elem& a, const Elem& b) {
    return a == b || (a.name() == "x0" && b.name() == "x1") || (a.name() == "x1" && b.name() == "x2");
  };
  EXPECT_FALSE(all_pass(check_mat_tmonoid(multi_preorder(q, x, broken, 3), "broken", 3)));
}

TEST(MatMonoids, PreorderIsTwoCategory) {
  auto q = Quantale::two();
  SetExpr x = numbered_set("x", 3);
  std::vector<std::pair<Elem, Elem>> pairs;
  for (const auto& a : x.elements())
    for (const auto& b : x.elements())
      if (a.name() <= b.name()) pairs.emplace_back(a, b);
  EXPECT_TRUE(all_pass(check_mat_monoid(MatVector::relation(q, x, x, pairs), "chain")));
  pairs.pop_back();
  pairs.erase(pairs.begin());
  EXPECT_FALSE(all_pass(check_mat_monoid(MatVector::relation(q, x, x, pairs), "no identity")));
}
