#include <gtest/gtest.h>

#include <random>
#include <set>

#include "gmc/elem.hpp"

using gmc::Elem;

namespace {

Elem random_elem(std::mt19937_64& rng, int depth) {
  if (depth == 0 || rng() % 3 == 0) {
    static const char* names[] = {"p", "q", "r", "a b", "x\"y"};
    return Elem::atom(names[rng() % 5]);
  }
  std::vector<Elem> kids;
  int n = static_cast<int>(rng() % 4);
  for (int i = 0; i < n; ++i) kids.push_back(random_elem(rng, depth - 1));
  return Elem::nest(std::move(kids));
}

}  // namespace

TEST(Elem, StructuralEquality) {
  Elem a = Elem::nest({Elem::atom("p"), Elem::nest({Elem::atom("q")})});
  Elem b = Elem::nest({Elem::atom("p"), Elem::nest({Elem::atom("q")})});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a, Elem::nest({Elem::atom("p")}));
  EXPECT_EQ(Elem(), Elem::nest({}));
}

TEST(Elem, AtomsPrecedeLists) {
  EXPECT_LT(Elem::atom("z"), Elem());
  EXPECT_LT(Elem(), Elem::nest({Elem::atom("a")}));
  EXPECT_LT(Elem::nest({Elem::atom("a")}), Elem::nest({Elem::atom("a"), Elem::atom("a")}));
}

TEST(Elem, UniformDepth) {
  Elem p = Elem::atom("p");
  EXPECT_EQ(p.depth(), 0);
  EXPECT_EQ(Elem::nest({p}).depth(), 1);
  EXPECT_EQ(Elem::nest({Elem::nest({p}), Elem::nest({p, p})}).depth(), 2);
}

TEST(Elem, ParsePrintRoundTrip) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    Elem e = random_elem(rng, 4);
    EXPECT_EQ(Elem::parse(e.str()), e) << e.str();
  }
  EXPECT_EQ(Elem::parse(" [ p ,[q]] ").str(), "[p, [q]]");
  EXPECT_THROW(Elem::parse("[p"), gmc::DomainError);
  EXPECT_THROW(Elem::parse("[p] q"), gmc::DomainError);
}

TEST(Elem, OrderIsTotalOnSamples) {
  std::mt19937_64 rng(11);
  std::vector<Elem> v;
  for (int i = 0; i < 200; ++i) v.push_back(random_elem(rng, 3));
  for (const auto& a : v)
    for (const auto& b : v) {
      bool lt = a < b, gt = b < a, eq = a == b;
      EXPECT_EQ(int(lt) + int(gt) + int(eq), 1);
    }
}
