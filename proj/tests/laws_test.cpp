#include <gtest/gtest.h>

#include "gmc/laws.hpp"

using namespace gmc;

namespace {

std::string failures(const LawReports& rs) {
  std::string s;
  for (const auto& r : rs)
    if (!r.pass) s += report_line(r) + "\n";
  return s;
}

class SuiteTest : public ::testing::TestWithParam<Suite> {};

}  // namespace

TEST_P(SuiteTest, PassesOnItsBattery) {
  auto rs = run_suite(GetParam());
  EXPECT_FALSE(rs.empty());
  EXPECT_TRUE(all_pass(rs)) << failures(rs);
  for (const auto& r : rs) EXPECT_EQ(r.seed, std::optional<std::uint64_t>(7));
}

TEST_P(SuiteTest, EachMutationBreaksExactlyItsLaw) {
  for (const auto& law : suite_mutations(GetParam())) {
    SuiteOptions o;
    o.mutation = law;
    auto rs = run_suite(GetParam(), o);
    std::size_t failed = 0;
    for (const auto& r : rs) {
      if (r.pass) continue;
      ++failed;
      EXPECT_EQ(r.law, law) << report_line(r);
      EXPECT_FALSE(r.witness.empty()) << report_line(r);
    }
    EXPECT_GE(failed, 1u) << suite_name(GetParam()) << " mutation " << law << " went unnoticed";
  }
}

TEST_P(SuiteTest, OutputIsReproducible) {
  SuiteOptions o;
  o.seed = 11;
  o.samples = 3;
  EXPECT_EQ(reports_json(run_suite(GetParam(), o)), reports_json(run_suite(GetParam(), o)));
  EXPECT_EQ(reports_text(run_suite(GetParam(), o)), reports_text(run_suite(GetParam(), o)));
}

INSTANTIATE_TEST_SUITE_P(AllSuites, SuiteTest,
                         ::testing::Values(Suite::Span, Suite::Mat2, Suite::Monad, Suite::Kleisli, Suite::Monoid,
                                           Suite::TMonoid, Suite::Algebra, Suite::Adjunction, Suite::Prof),
                         [](const auto& info) { return suite_name(info.param); });

TEST(Suites, NamesRoundTrip) {
  for (const auto& [s, n] : suite_names()) EXPECT_EQ(parse_suite(n), s);
  EXPECT_FALSE(parse_suite("groupoid"));
}

TEST(Suites, UnknownMutationIsRejected) {
  SuiteOptions o;
  o.mutation = "associativity";
  EXPECT_THROW(run_suite(Suite::Span, o), DomainError);
}

TEST(Suites, JsonCarriesEveryField) {
  SuiteOptions o;
  o.samples = 1;
  auto j = nlohmann::json::parse(reports_json(run_suite(Suite::Monoid, o)));
  ASSERT_TRUE(j.is_array());
  ASSERT_FALSE(j.empty());
  for (const auto& r : j) {
    for (const char* k : {"law", "instance", "verdict", "bound", "witness", "seed"}) EXPECT_TRUE(r.contains(k)) << k;
    EXPECT_EQ(r["seed"], 7);
  }
}

TEST(Suites, SeedChangesTheBattery) {
  SuiteOptions a, c;
  c.seed = 8;
  EXPECT_NE(reports_text(run_suite(Suite::Span, a)), reports_text(run_suite(Suite::Span, c)));
}

TEST(Pastings, ReflexiveOnStructureCells) {
  Rng rng(3);
  auto chain = detail::nontrivial_chain(rng, 3, "r", false, 3);
  Pasting x = paste::xi(Partition{{2, 1}}, chain);
  auto v = diagram_equal(x, x, 3);
  EXPECT_TRUE(v.equal) << v.reason;
  EXPECT_GT(v.checked, 0u);
}

TEST(Pastings, KleisliRefinementCommutes) {
  Rng rng(5);
  auto chain = random_kl_chain(rng, 3, 2, 3, 2, "k");
  Refinement ref;
  for (const auto& r : refinements(3, 3))
    if (r.coarse.blocks == std::vector<std::size_t>{1, 2} && r.fine.blocks == std::vector<std::size_t>{1, 1, 1})
      ref = r;
  ASSERT_EQ(ref.fine.blocks.size(), 3u);
  auto [first, second] = coherence_pastings(ref, chain, chain[0].source(), true);
  auto v = diagram_equal(first, second, 2);
  EXPECT_TRUE(v.equal) << first.str() << " vs " << second.str() << ": " << v.reason;
}

TEST(Pastings, DisplayedKleisliAssociatorMatches) {
  Rng rng(9);
  auto chain = random_kl_chain(rng, 3, 2, 3, 2, "d");
  for (const auto& p : {Partition{{2, 1}}, Partition{{1, 2}}}) {
    auto v = diagram_equal(paste::kl_xi(p, chain), paste::kl_xi_displayed(p, chain), 2);
    EXPECT_TRUE(v.equal) << p.str() << ": " << v.reason;
  }
}

TEST(Pastings, KappaAgainstAssociator) {
  Rng rng(2);
  auto chain = random_chain(rng, 3, 2, 3, "q");
  for (const auto& p : {Partition{{2, 1}}, Partition{{1, 2}}}) {
    auto [lhs, rhs] = kappa_coherence_pastings(p, chain, chain[0].source());
    auto v = diagram_equal(lhs, rhs, 2);
    EXPECT_TRUE(v.equal) << p.str() << ": " << v.reason;
  }
}

TEST(Pastings, MismatchComesWithASoundWitness) {
  SetExpr x = numbered_set("w", 2);
  Span a = table_span(x, x, {{atom("s"), atom("w0"), atom("w1")}, {atom("t"), atom("w0"), atom("w1")}}, "st");
  SpanCell swap = SpanCell::make(a, a, "swap", [](const Elem& e) { return atom(e.name() == "s" ? "t" : "s"); });
  Pasting id = paste::atom(Pasting::Kind::P, "id", identity_cell(a));
  Pasting sw = paste::atom(Pasting::Kind::P, "swap", swap);
  auto v = diagram_equal(id, sw, 2);
  ASSERT_FALSE(v.equal);
  ASSERT_TRUE(v.witness);
  EXPECT_NE(identity_cell(a)(*v.witness), swap(*v.witness));
  auto twice = diagram_equal(paste::vcomp({sw, sw}), id, 2);
  EXPECT_TRUE(twice.equal) << twice.reason;
}

TEST(Pastings, DifferentBoundariesAreNotEqual) {
  SetExpr x = numbered_set("b", 1);
  Span a = table_span(x, x, {{atom("s"), atom("b0"), atom("b0")}}, "one");
  auto v = diagram_equal(paste::P({a}), paste::P({identity(x)}), 2);
  EXPECT_FALSE(v.equal);
  EXPECT_FALSE(v.reason.empty());
}
