#include <gtest/gtest.h>

#include <map>
#include <random>

#include "gmc/finset.hpp"

using namespace gmc;

namespace {

Elem A(const char* s) { return Elem::atom(s); }

SetExpr numbered(const std::string& prefix, int n) {
  std::vector<Elem> v;
  for (int i = 0; i < n; ++i) v.push_back(Elem::atom(prefix + std::to_string(i)));
  return SetExpr::fin(v);
}

MapF random_map(std::mt19937_64& rng, const SetExpr& dom, const SetExpr& cod) {
  std::vector<std::pair<Elem, Elem>> g;
  for (const auto& e : dom.elements()) g.emplace_back(e, cod.elements()[rng() % cod.size()]);
  return MapF::table(dom, cod, g);
}

}  // namespace

TEST(Eval, Singleton) {
  SetExpr x = SetExpr::atoms({"p", "q"});
  EXPECT_EQ(eval(MapF::singleton(x), A("p")), Elem::nest({A("p")}));
}

TEST(Eval, Concat) {
  SetExpr x = SetExpr::atoms({"p", "q"});
  Elem e = Elem::parse("[[p], [q, p]]");
  EXPECT_EQ(eval(MapF::concat(x), e), Elem::parse("[p, q, p]"));
}

TEST(Eval, MapOf) {
  SetExpr x = SetExpr::atoms({"p", "q"});
  MapF f = MapF::table(x, x, {{A("p"), A("q")}, {A("q"), A("q")}});
  EXPECT_EQ(eval(MapF::map_of(f), Elem::parse("[p, p]")), Elem::parse("[q, q]"));
}

TEST(Eval, FlattenLevels) {
  SetExpr x = SetExpr::atoms({"p"});
  EXPECT_EQ(eval(MapF::flatten(x, 0), A("p")), Elem::parse("[p]"));
  EXPECT_EQ(eval(MapF::flatten(x, 1), Elem::parse("[p, p]")), Elem::parse("[p, p]"));
  EXPECT_EQ(eval(MapF::flatten(x, 3), Elem::parse("[[[p], []], [[p, p]]]")),
            Elem::parse("[p, p, p]"));
}

TEST(Eval, Errors) {
  SetExpr x = SetExpr::atoms({"p"});
  EXPECT_THROW(eval(MapF::singleton(x), A("z")), DomainError);
  EXPECT_THROW(eval(MapF::concat(x), Elem::parse("[p]")), DomainError);
  MapF bad = MapF::fn(x, x, "bad", [](const Elem&) { return Elem::atom("zz"); });
  EXPECT_THROW(eval(bad, A("p")), RuleError);
  EXPECT_THROW(MapF::table(x, x, {}), RuleError);
  EXPECT_THROW(MapF::table(SetExpr::fm(x), x, {}), DomainError);
  EXPECT_THROW(SetExpr::fin({A("p"), A("p")}), DomainError);
}

TEST(Eval, ComposeSeqAppliesInOrder) {
  std::mt19937_64 rng(7);
  SetExpr x = numbered("x", 4), y = numbered("y", 3), z = numbered("z", 2);
  for (int t = 0; t < 20; ++t) {
    MapF f = random_map(rng, x, y), g = random_map(rng, y, z);
    MapF gf = MapF::compose_seq({f, g});
    for (const auto& e : x.elements()) EXPECT_EQ(eval(gf, e), eval(g, eval(f, e)));
    MapF tgf = MapF::compose_seq({MapF::map_of(f), MapF::map_of(g)});
    for (const auto& l : SetExpr::fm(x).enumerate(3))
      EXPECT_EQ(eval(tgf, l), eval(MapF::map_of(gf), l));
  }
  EXPECT_THROW(MapF::compose_seq({MapF::identity(x), MapF::identity(y)}), CodomainMismatch);
}

TEST(Membership, FreeMonoid) {
  SetExpr x = SetExpr::atoms({"p", "q"});
  SetExpr tx = SetExpr::fm(x);
  EXPECT_TRUE(tx.contains(Elem::parse("[]")));
  EXPECT_TRUE(tx.contains(Elem::parse("[p, q, p]")));
  EXPECT_FALSE(tx.contains(Elem::parse("[p, [q]]")));
  EXPECT_FALSE(tx.contains(A("p")));
  EXPECT_TRUE(SetExpr::fm(tx).contains(Elem::parse("[[], [p]]")));
}

TEST(Enumerate, ListCountsMatchPowerSums) {
  SetExpr x = SetExpr::atoms({"p", "q"});
  // lists of length <= 3 over 2 letters: 1 + 2 + 4 + 8
  EXPECT_EQ(SetExpr::fm(x).enumerate(3).size(), 15u);
  for (const auto& l : SetExpr::fm(x).enumerate(3)) EXPECT_TRUE(SetExpr::fm(x).within(l, 3));
  // T^2 over one letter, bound 2: width <= 2 and at most 2 leaves in total.
  SetExpr one = SetExpr::atoms({"p"});
  auto t2 = SetExpr::fm_n(one, 2).enumerate(2);
  // [], [[]], [[p]], [[p,p]], [[],[]], [[],[p]], [[p],[]], [[p],[p]], [[],[p,p]], [[p,p],[]]
  EXPECT_EQ(t2.size(), 10u);
}

TEST(Pullback, Identities) {
  SetExpr pt = SetExpr::atoms({"*"});
  auto pb = pullback(MapF::identity(pt), MapF::identity(pt));
  ASSERT_TRUE(pb.apex);
  EXPECT_EQ(pb.apex->size(), 1u);
  EXPECT_EQ(pb.apex->elements()[0], Elem::parse("[*, *]"));
}

TEST(Pullback, ConstantAgainstPoint) {
  SetExpr a = SetExpr::atoms({"a1", "a2"}), b = SetExpr::atoms({"b1"}), c = SetExpr::atoms({"c"});
  auto pb = pullback(MapF::const_to(a, c, A("c")), MapF::const_to(b, c, A("c")));
  EXPECT_EQ(pb.apex->size(), 2u);
}

TEST(Pullback, AgainstLiftedMap) {
  SetExpr xy = SetExpr::atoms({"x", "y"}), pq = SetExpr::atoms({"p", "q"});
  SetExpr alpha = SetExpr::atoms({"alpha"});
  MapF f = MapF::table(alpha, SetExpr::fm(xy), {{A("alpha"), Elem::parse("[x, y]")}});
  MapF u = MapF::table(pq, xy, {{A("p"), A("x")}, {A("q"), A("y")}});
  auto pb = pullback(f, MapF::map_of(u));
  ASSERT_TRUE(pb.apex);
  ASSERT_EQ(pb.apex->size(), 1u);
  EXPECT_EQ(pb.apex->elements()[0], Elem::parse("[alpha, [p, q]]"));
  EXPECT_THROW(pullback(f, u), CodomainMismatch);
}

TEST(Pullback, BothSidesFiberFinite) {
  SetExpr xy = SetExpr::atoms({"x", "y"}), pq = SetExpr::atoms({"p", "q", "r"});
  MapF u = MapF::table(pq, xy, {{A("p"), A("x")}, {A("q"), A("y")}, {A("r"), A("y")}});
  auto pb = pullback(MapF::map_of(u), MapF::map_of(u));
  ASSERT_TRUE(pb.lazy);
  Elem c = Elem::parse("[x, y]");
  // two decompositions on each side
  EXPECT_EQ(pb.lazy->fiber(c, c).size(), 4u);
  EXPECT_THROW(pullback(MapF::concat(xy), MapF::concat(xy)).lazy->fiber(c, c),
               InfeasibleEnumeration);
}

TEST(Pullback, CardinalityFormula) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    SetExpr a = numbered("a", 1 + rng() % 6), b = numbered("b", 1 + rng() % 6),
            c = numbered("c", 1 + rng() % 4);
    MapF f = random_map(rng, a, c), g = random_map(rng, b, c);
    std::map<Elem, std::size_t> fa, gb;
    for (const auto& e : a.elements()) ++fa[f(e)];
    for (const auto& e : b.elements()) ++gb[g(e)];
    std::size_t expected = 0;
    for (const auto& e : c.elements()) expected += fa[e] * gb[e];
    auto pb = pullback(f, g);
    EXPECT_EQ(pb.apex->size(), expected);
    for (const auto& p : pb.apex->elements())
      EXPECT_EQ(f(pb.proj_left(p)), g(pb.proj_right(p)));
  }
}

TEST(Pullback, UniversalPropertyByExhaustiveSearch) {
  std::mt19937_64 rng(13);
  int checked = 0;
  while (checked < 25) {
    SetExpr a = numbered("a", 1 + rng() % 3), b = numbered("b", 1 + rng() % 3),
            c = numbered("c", 1 + rng() % 2), w = numbered("w", 1 + rng() % 3);
    MapF f = random_map(rng, a, c), g = random_map(rng, b, c);
    MapF h = random_map(rng, w, a), k = random_map(rng, w, b);
    bool cone = true;
    for (const auto& e : w.elements()) cone = cone && f(h(e)) == g(k(e));
    if (!cone) continue;
    auto pb = pullback(f, g);
    const auto& apex = pb.apex->elements();
    std::size_t total = 1;
    for (std::size_t i = 0; i < w.size(); ++i) total *= apex.size();
    ASSERT_LE(apex.size(), 64u);
    int factorizations = 0;
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t rest = code;
      bool ok = true;
      for (const auto& e : w.elements()) {
        const Elem& img = apex[rest % apex.size()];
        rest /= apex.size();
        ok = ok && pb.proj_left(img) == h(e) && pb.proj_right(img) == k(e);
      }
      factorizations += ok;
    }
    EXPECT_EQ(factorizations, 1);
    ++checked;
  }
}

TEST(ListDecompositions, Examples) {
  SetExpr x = SetExpr::atoms({"x"}), pq = SetExpr::atoms({"p", "q"});
  MapF g = MapF::const_to(pq, x, A("x"));
  auto empty = list_decompositions(Elem::parse("[]"), g);
  ASSERT_EQ(empty.size(), 1u);
  EXPECT_EQ(empty[0], Elem());
  EXPECT_EQ(list_decompositions(Elem::parse("[x, x]"), g).size(), 4u);
  SetExpr xy = SetExpr::atoms({"x", "y"});
  MapF g2 = MapF::table(SetExpr::atoms({"p"}), xy, {{A("p"), A("x")}});
  EXPECT_TRUE(list_decompositions(Elem::parse("[y]"), g2).empty());
}

TEST(Preimage, BoundedFallbackMatchesFilter) {
  SetExpr x = SetExpr::atoms({"p", "q"});
  MapF m = MapF::concat(x);
  for (const auto& v : SetExpr::fm(x).enumerate(2)) {
    auto pre = m.preimage(v, 3);
    std::size_t count = 0;
    for (const auto& l : SetExpr::fm_n(x, 2).enumerate(3)) count += m(l) == v;
    EXPECT_EQ(pre.size(), count);
  }
  EXPECT_THROW(m.preimage(Elem::parse("[p]"), std::nullopt), InfeasibleEnumeration);
}
