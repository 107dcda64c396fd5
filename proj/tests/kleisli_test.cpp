#include <gtest/gtest.h>

#include <map>

#include "gmc/battery.hpp"
#include "gmc/kleisli.hpp"

using namespace gmc;

namespace {

Elem A(const char* s) { return Elem::atom(s); }

std::pair<SpanCell, SpanCell> kl_routes(const Refinement& r, const std::vector<Span>& chain,
                                        const SetExpr& anchor) {
  auto blocks = split_chain(r.coarse, chain);
  auto xs = kl_chain_objects(chain, anchor);
  std::vector<SpanCell> inner;
  std::vector<Span> subs;
  std::size_t pos = 0;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    inner.push_back(kl_associator(r.inner[j], blocks[j], xs[pos]).fwd);
    std::size_t p2 = pos;
    for (const auto& s : split_chain(r.inner[j], blocks[j])) {
      subs.push_back(kl_compose_n(s, xs[p2]));
      p2 += s.size();
    }
    pos += blocks[j].size();
  }
  SpanCell first = vertical_compose(kl_hcompose(inner), kl_associator(r.coarse, chain, anchor).fwd);
  SpanCell second = vertical_compose(kl_associator(r.groups, subs, anchor).fwd,
                                     kl_associator(r.fine, chain, anchor).fwd);
  return {first, second};
}

/// One-colour multicategory with a binary f, a unary g and a constant c.
Span small_multicat() {
  SetExpr x = SetExpr::atoms({"x"});
  return table_span(x, SetExpr::fm(x),
                    {{A("f"), A("x"), Elem::parse("[x, x]")},
                     {A("g"), A("x"), Elem::parse("[x]")},
                     {A("c"), A("x"), Elem::parse("[]")}},
                    "ops");
}

}  // namespace

TEST(KlCompose, UnaryIsArgument) {
  SetExpr x = SetExpr::atoms({"a", "b"});
  EXPECT_TRUE(same_span(kl_compose_n({kl_identity(x)}), kl_identity(x)));
  Span id = kl_identity(x);
  for (const auto& e : id.enumerate(3)) EXPECT_EQ(id.right_of(e), Elem::nest({e}));
}

TEST(KlCompose, ChainMismatch) {
  SetExpr x = SetExpr::atoms({"a"}), y = SetExpr::atoms({"b"});
  EXPECT_THROW(kl_compose_n({kl_identity(x), kl_identity(y)}), ChainMismatch);
  EXPECT_THROW(kl_compose_n({identity(x)}, std::nullopt), ChainMismatch);
}

TEST(KlCompose, SubstitutionOracle) {
  Span ops = small_multicat();
  Span sq = kl_compose_n({ops, ops});
  std::vector<std::pair<Elem, Elem>> rows;
  for (const auto& e : ops.enumerate(3)) rows.emplace_back(e, ops.right_of(e));
  SetExpr tx = SetExpr::fm(SetExpr::atoms({"x"}));
  for (const auto& t : tx.enumerate(3)) {
    // Outer op with inner ops on each input whose inputs concatenate to t.
    std::size_t expected = 0;
    for (const auto& [f, ins] : rows) {
      std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t used) {
        if (i == ins.size()) {
          if (used == t.size()) ++expected;
          return;
        }
        for (const auto& [g, gin] : rows)
          if (used + gin.size() <= t.size()) go(i + 1, used + gin.size());
      };
      go(0, 0);
    }
    auto fib = sq.fiber(A("x"), t, 3);
    EXPECT_EQ(fib.size(), expected) << t.str();
    for (const auto& e : fib) {
      auto ins = ops.right_of(e[0]);
      ASSERT_EQ(e[1].size(), ins.size());
      std::vector<Elem> cat;
      for (std::size_t i = 0; i < ins.size(); ++i) {
        EXPECT_EQ(ops.left_of(e[1][i]), ins[i]);
        for (const auto& v : ops.right_of(e[1][i]).kids()) cat.push_back(v);
      }
      EXPECT_EQ(Elem::nest(cat), t);
    }
  }
}

TEST(KlCompose, CategoryTransportedAlongUnit) {
  Rng rng(4);
  auto chain = random_chain(rng, 2, 2, 4, "c");
  std::vector<Span> kl;
  for (const auto& a : chain) kl.push_back(post_leg(a, Side::Right, ListMonad::unit(a.target())));
  Span k = kl_compose_n(kl);
  Span plain = post_leg(compose_n(chain), Side::Right, ListMonad::unit(chain[1].target()));
  auto ke = k.enumerate(3), pe = plain.enumerate(3);
  ASSERT_EQ(ke.size(), pe.size());
  std::set<Elem> images;
  for (const auto& e : ke) {
    ASSERT_EQ(e[1].size(), 1u);
    Elem img = Elem::nest({e[0], e[1][0]});
    EXPECT_EQ(plain.left_of(img), k.left_of(e));
    EXPECT_EQ(plain.right_of(img), k.right_of(e));
    images.insert(img);
  }
  EXPECT_EQ(images, std::set<Elem>(pe.begin(), pe.end()));
}

TEST(KlAssociator, SingleBlockIsIdentity) {
  Rng rng(1);
  auto chain = random_kl_chain(rng, 2, 2, 3, 2, "s");
  auto xi = kl_associator(Partition{{2}}, chain);
  for (const auto& e : xi.fwd.from().enumerate(2)) EXPECT_EQ(xi.fwd(e), e);
}

TEST(KlAssociator, PartitionMismatch) {
  Rng rng(1);
  auto chain = random_kl_chain(rng, 2, 2, 3, 2, "s");
  EXPECT_THROW(kl_associator(Partition{{1}}, chain), PartitionMismatch);
}

TEST(KlAssociator, UnitsInvert) {
  Rng rng(2);
  for (int i = 0; i < 5; ++i) {
    auto chain = random_kl_chain(rng, 1, 2, 4, 2, "u" + std::to_string(i));
    for (const auto& p : {Partition{{0, 1}}, Partition{{1, 0}}, Partition{{0, 1, 0}}}) {
      auto xi = kl_associator(p, chain);
      EXPECT_FALSE(inverse_violation(xi.fwd, xi.inv, 2).has_value()) << p.str();
    }
  }
}

TEST(KlAssociator, MatchesDisplayedComponents) {
  Rng rng(8);
  for (int i = 0; i < 6; ++i) {
    auto one = random_kl_chain(rng, 1, 2, 4, 2, "d" + std::to_string(i));
    auto three = random_kl_chain(rng, 3, 2, 3, 2, "t" + std::to_string(i));
    for (const auto& [p, chain] : std::vector<std::pair<Partition, std::vector<Span>>>{
             {Partition{{0, 1}}, one},
             {Partition{{1, 0}}, one},
             {Partition{{2, 1}}, three},
             {Partition{{1, 2}}, three}}) {
      auto closed = kl_associator(p, chain).fwd;
      auto shown = kl_associator_displayed(p, chain);
      auto cmp = equality(closed, shown, 2);
      EXPECT_TRUE(cmp.equal) << p.str() << " at " << (cmp.witness ? cmp.witness->str() : "");
      EXPECT_GT(cmp.checked, 0u);
    }
  }
  auto chain = random_kl_chain(rng, 2, 2, 3, 2, "z");
  EXPECT_THROW(kl_associator_displayed(Partition{{1, 1}}, chain), PartitionMismatch);
}

TEST(KlAssociator, InvertibleOnRandomPartitions) {
  Rng rng(12);
  for (int i = 0; i < 4; ++i) {
    auto chain = random_kl_chain(rng, 3, 2, 3, 2, "v" + std::to_string(i));
    for (const auto& p : {Partition{{1, 2}}, Partition{{2, 1}}, Partition{{1, 1, 1}},
                          Partition{{0, 3, 0}}, Partition{{1, 0, 2}}}) {
      auto xi = kl_associator(p, chain);
      EXPECT_FALSE(inverse_violation(xi.fwd, xi.inv, 2).has_value()) << p.str();
    }
  }
}

TEST(KlAssociator, CoherenceOverRefinements) {
  Rng rng(31);
  for (std::size_t n = 0; n <= 3; ++n) {
    auto chain = random_kl_chain(rng, n, 2, 3, 2, "h" + std::to_string(n));
    while (n > 0 && kl_compose_n(chain).enumerate(2).size() < 2)
      chain = random_kl_chain(rng, n, 2, 3, 2, "h" + std::to_string(n));
    SetExpr anchor = n ? chain[0].source() : numbered_set("h0x", 2);
    for (const auto& r : refinements(n, 3)) {
      auto [a, b] = kl_routes(r, chain, anchor);
      auto cmp = equality(a, b, 2);
      EXPECT_TRUE(cmp.equal) << r.str();
      if (n > 0) EXPECT_GT(cmp.checked, 0u) << r.str();
    }
  }
}

TEST(KlAssociator, MultiplicativeUnitsOnMulticat) {
  Span ops = small_multicat();
  SetExpr x = ops.source();
  auto left = kl_associator(Partition{{0, 1}}, {ops});
  auto right = kl_associator(Partition{{1, 0}}, {ops});
  EXPECT_EQ(left.fwd(Elem::parse("[x, [f]]")), A("f"));
  EXPECT_EQ(right.fwd(Elem::parse("[f, [x, x]]")), A("f"));
  EXPECT_EQ(right.inv(A("c")), Elem::parse("[c, []]"));
}

TEST(KlHcompose, IdentityCellsGiveIdentity) {
  Rng rng(5);
  auto chain = random_kl_chain(rng, 2, 2, 3, 2, "w");
  SpanCell c = kl_hcompose({identity_cell(chain[0]), identity_cell(chain[1])});
  EXPECT_TRUE(same_span(c.from(), kl_compose_n(chain)));
  for (const auto& e : c.from().enumerate(3)) EXPECT_EQ(c(e), e);
}

namespace {

MatVector random_kl_relation(Rng& rng, QuantaleRef q, const SetExpr& x, const std::string& nm) {
  std::vector<std::tuple<Elem, Elem, V>> es;
  auto lists = SetExpr::fm(x).enumerate(2);
  for (const auto& a : x.elements())
    for (const auto& l : lists)
      if (uniform(rng, 0, 4) == 0) es.emplace_back(a, l, q->top());
  return MatVector::sparse(q, x, SetExpr::fm(x), es, nm);
}

/// Whether w splits into |u| consecutive pieces w_i with s(u_i, w_i).
bool splits(const MatVector& s, const Elem& u, std::size_t i, const Elem& w, std::size_t at) {
  if (i == u.size()) return at == w.size();
  for (std::size_t end = at; end <= w.size(); ++end) {
    std::vector<Elem> piece(w.kids().begin() + at, w.kids().begin() + end);
    if (s.at(u[i], Elem::nest(piece)) != 0 && splits(s, u, i + 1, w, end)) return true;
  }
  return false;
}

}  // namespace

TEST(MatKleisli, ConvolutionMatchesRelationalOracle) {
  auto q = Quantale::two();
  Rng rng(17);
  SetExpr x = numbered_set("x", 3);
  for (int t = 0; t < 3; ++t) {
    MatVector r = random_kl_relation(rng, q, x, "r"), s = random_kl_relation(rng, q, x, "s");
    MatVector rs = mat_kl_compose_n({r, s});
    std::size_t related = 0;
    for (const auto& a : x.elements())
      for (const auto& w : SetExpr::fm(x).enumerate(3)) {
        bool rel = false;
        for (const auto& [u, v] : r.row(a)) rel = rel || splits(s, u, 0, w, 0);
        EXPECT_EQ(rs(a, w), rel ? 1 : 0) << a.str() << " " << w.str();
        related += rel;
      }
    EXPECT_GT(related, 0u);
  }
}

TEST(MatKleisli, IdentityEntries) {
  auto q = Quantale::two();
  SetExpr x = numbered_set("x", 2);
  MatVector id = mat_kl_identity(q, x);
  for (const auto& a : x.elements())
    for (const auto& l : SetExpr::fm(x).enumerate(3)) EXPECT_EQ(id(a, l), l == Elem::nest({a}) ? 1 : 0);
}

TEST(MatKleisli, AssociatorIsEqualityForRelations) {
  auto q = Quantale::two();
  Rng rng(18);
  SetExpr x = numbered_set("x", 2);
  std::vector<MatVector> chain;
  for (int i = 0; i < 3; ++i) chain.push_back(random_kl_relation(rng, q, x, "r" + std::to_string(i)));
  for (const auto& p : {Partition{{0, 1}}, Partition{{1, 0}}}) {
    auto rep = mat_kl_associator(p, {chain[0]}, 3);
    EXPECT_FALSE(rep.lax_violation.has_value()) << p.str();
    EXPECT_TRUE(rep.invertible) << p.str();
  }
  for (const auto& p : {Partition{{1, 2}}, Partition{{2, 1}}, Partition{{1, 1, 1}}, Partition{{0, 3}}}) {
    auto rep = mat_kl_associator(p, chain, 3);
    EXPECT_FALSE(rep.lax_violation.has_value()) << p.str();
    EXPECT_TRUE(rep.invertible) << p.str();
  }
}
