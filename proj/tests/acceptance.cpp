// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <string>

#include "gmc/laws.hpp"

using namespace gmc;

namespace {

Elem A(const std::string& s) { return Elem::atom(s); }

/// Empty when the criterion holds, otherwise the first problem found.
using Check = std::function<std::string()>;

struct Criterion {
  int id;
  std::string title;
  double limit_s;
  Check run;
};

std::string first_failure_text(const LawReports& rs) {
  const LawReport* f = first_failure(rs);
  return f ? report_line(*f) : "";
}

// 1 -------------------------------------------------------------------------

std::string list_monad_cells() {
  const Bound b = 3;
  auto battery = span_battery(7, 24);
  if (battery.size() < 20) return "battery too small";
  for (const auto& a : battery) {
    if (a.enumerate(1).size() > 8) return "apex above 8 elements: " + a.sig();
    Span back = detail::reversed(a, a.sig() + "'");
    for (const auto& chain : {std::vector<Span>{a}, std::vector<Span>{a, back}, std::vector<Span>{back, a}}) {
      CellPair k = kappa_cell(chain);
      if (auto w = inverse_violation(k.fwd, k.inv, b)) return "kappa on " + detail::chain_name(chain) + " at " + w->str();
    }
    CellPair m = nu_m_cell(a), e = nu_e_cell(a);
    if (auto w = inverse_violation(m.fwd, m.inv, b)) return "nu_m on " + a.sig() + " at " + w->str();
    if (auto w = inverse_violation(e.fwd, e.inv, b)) return "nu_e on " + a.sig() + " at " + w->str();
  }
  return "";
}

// 2 -------------------------------------------------------------------------

std::string multicat_round_trip() {
  Rng rng(7);
  std::size_t mutations = 0;
  for (int i = 0; i < 12; ++i) {
    FiniteCategory c = random_category(rng, 4, 10, true);
    if (c.objects.size() > 4 || c.morphisms.size() > 10) return "generator exceeded its limits";
    std::string name = "R" + std::to_string(i);
    Multicat mc = category_as_multicat(c, name);
    TMonoid t = multicat_to_tmonoid(mc);
    Multicat back = tmonoid_to_multicat(t);
    if (!back.table || !(*back.table == *mc.table)) return name + ": presentation changed";
    if (auto d = presentation_diff(back, mc, 3)) return name + ": " + *d;
    auto rs = check_tmonoid(t, 3);
    if (!all_pass(rs)) return first_failure_text(rs);
    for (const auto& r : rs)
      if (r.bound) return name + ": " + r.law + " was not exhaustive";
    for (const auto& [key, value] : mc.table->composites)
      for (const auto& op : mc.table->ops) {
        if (op.name == value) continue;
        MulticatTable bad = *mc.table;
        bad.composites[key] = op.name;
        auto mrs = check_tmonoid(multicat_to_tmonoid(Multicat::from_table(name + "!", mc.objects, bad)), 3);
        const LawReport* f = first_failure(mrs);
        if (!f) return name + ": mutation " + key.str() + " := " + op.name.str() + " passed";
        if (f->witness.empty()) return name + ": mutation without witness";
        ++mutations;
      }
  }
  if (mutations == 0) return "no mutations were tried";
  return "";
}

// 3 -------------------------------------------------------------------------

int parity(const std::vector<Elem>& xs) {
  int s = 0;
  for (const auto& x : xs) s += std::stoi(x.name());
  return s % 2;
}

/// Outer operation w -> y with |w| <= bound, and the source list cut into |w|
/// consecutive blocks each carrying the operation block -> w_i.
std::set<Elem> substitution_oracle(const Elem& u, const Elem& y, Bound bound) {
  std::set<Elem> out;
  Elem z = A("z");
  for (int k = 0; k <= bound; ++k)
    for (int bits = 0; bits < (1 << k); ++bits) {
      std::vector<Elem> w;
      for (int i = 0; i < k; ++i) w.push_back(A(std::to_string((bits >> i) & 1)));
      if (parity(w) != std::stoi(y.name())) continue;
      Elem outer = Elem::nest({z, Elem::nest(w), y});
      std::vector<Elem> inner;
      std::function<void(std::size_t, std::size_t)> cut = [&](std::size_t i, std::size_t at) {
        if (i == w.size()) {
          if (at == u.size()) out.insert(Elem::nest({outer, Elem::nest(inner)}));
          return;
        }
        for (std::size_t end = at; end <= u.size(); ++end) {
          std::vector<Elem> block(u.kids().begin() + at, u.kids().begin() + end);
          if (parity(block) != std::stoi(w[i].name())) continue;
          inner.push_back(Elem::nest({z, Elem::nest(block), w[i]}));
          cut(i + 1, end);
          inner.pop_back();
        }
      };
      cut(0, 0);
    }
  return out;
}

std::string kleisli_oracle() {
  TMonoid t = multicat_to_tmonoid(cyclic_multicat(2));
  Span sq = kl_compose_n({t.a, t.a});
  std::size_t compared = 0;
  for (const auto& u : SetExpr::fm(t.x).enumerate(3))
    for (const auto& y : t.x.elements()) {
      auto fib = sq.fiber(y, u, 3);
      std::set<Elem> got(fib.begin(), fib.end());
      if (got.size() != fib.size()) return "repeated element over " + u.str();
      auto want = substitution_oracle(u, y, 3);
      if (got.size() != want.size())
        return "fiber over " + u.str() + " -> " + y.str() + " has " + std::to_string(got.size()) + ", oracle " +
               std::to_string(want.size());
      if (got != want) return "elements differ over " + u.str() + " -> " + y.str();
      compared += got.size();
    }
  return compared ? "" : "nothing compared";
}

// 4 -------------------------------------------------------------------------

std::size_t brute_hom_count(const FiniteCategory& c, const Elem& x, const Elem& y) {
  std::size_t n = 0;
  for (const auto& m : c.morphisms) n += m.dom == x && m.cod == y;
  return n;
}

std::string free_monoidal_counts() {
  FiniteCategory c = instances::arrow_category();
  TAlgebra m = free_talgebra(multicat_to_tmonoid(category_as_multicat(c, "arrow")));
  auto lists = SetExpr::fm(SetExpr::fin(c.objects)).enumerate(3);
  for (const auto& u : lists)
    for (const auto& v : lists) {
      std::size_t want = 0;
      if (u.size() == v.size()) {
        want = 1;
        for (std::size_t i = 0; i < u.size(); ++i) want *= brute_hom_count(c, u[i], v[i]);
      }
      std::size_t got = m.monoid.a.fiber(v, u, 3).size();
      if (got != want)
        return "hom " + u.str() + " -> " + v.str() + ": " + std::to_string(got) + " vs " + std::to_string(want);
    }
  return "";
}

// 5 -------------------------------------------------------------------------

std::string underlying_parity() {
  TMonoid k = underlying_tmonoid(smc_to_talgebra(discrete_cyclic_smc(2)));
  for (const auto& u : SetExpr::fm(k.x).enumerate(4))
    for (const auto& m : k.x.elements()) {
      std::size_t want = parity(u.kid_vector()) == std::stoi(m.name()) ? 1 : 0;
      if (k.a.fiber(m, u, 4).size() != want) return "hom " + u.str() + " -> " + m.str();
    }
  return "";
}

// 6 -------------------------------------------------------------------------

std::string adjunction() {
  auto pairs = detail::adjunction_pairs();
  pairs.emplace_back(multicat_to_tmonoid(category_as_multicat(instances::chain_category(2), "chain2")),
                     smc_to_talgebra(instances::arrow_max_smc()));
  bool has_required = false;
  for (const auto& [t, a] : pairs) {
    has_required = has_required || (t.name == "arrow" && a.name == "disc Z/2");
    auto tri = check_triangles(t, a, 3);
    if (!all_pass(tri)) return first_failure_text(tri);
    auto hb = hom_bijection_oracle(t, a, 2);
    if (!hb.bijection) return t.name + ", " + a.name + ": " + hb.witness;
    if (hb.algebra_homs == 0) return t.name + ", " + a.name + ": no maps found";
  }
  if (pairs.size() < 3 || !has_required) return "battery is missing pairs";
  return "";
}

// 7 -------------------------------------------------------------------------

std::string kleisli_coherence() {
  Rng rng(7);
  std::size_t compared = 0;
  for (std::size_t n = 0; n <= 4; ++n)
    for (int s = 0; s < 2; ++s) {
      std::string tag = "c" + std::to_string(n) + "_" + std::to_string(s) + "_";
      auto chain = random_kl_chain(rng, n, 2, 2, 2, tag);
      SetExpr anchor = n ? chain[0].source() : numbered_set(tag + "x", 2);
      Span flat = kl_compose_n(chain, anchor);
      // Every list in these apexes has length at most 2, so bound 2 sees all.
      if (flat.enumerate(2).size() != flat.enumerate(3).size()) return "bound 2 does not exhaust " + tag;
      for (const auto& r : refinements(n, 4)) {
        auto [first, second] = coherence_pastings(r, chain, anchor, true);
        auto v = diagram_equal(first, second, 2);
        if (!v.equal) return tag + " " + r.str() + ": " + (v.witness ? v.witness->str() : v.reason);
        compared += v.checked;
      }
    }
  return compared ? "" : "nothing compared";
}

// 8 -------------------------------------------------------------------------

std::string mat2() {
  SuiteOptions o;
  o.bound = 3;
  auto rs = run_suite(Suite::Mat2, o);
  std::set<std::string> laws;
  for (const auto& r : rs) laws.insert(r.law + "@" + r.instance.substr(0, 5));
  if (!laws.count("kleisli convolution@r0 ; ")) return "convolution oracle did not run";
  if (!laws.count("multiplication@chain")) return "multi-preorder laws did not run";
  for (const auto& r : rs)
    if (r.bound && *r.bound != 3) return r.law + " ran at bound " + r.bound_text();
  return first_failure_text(rs);
}

// 9 -------------------------------------------------------------------------

/// Classes of composable pairs under the relations that move an element of
/// the middle monoid across, computed by a separate union-find.
std::set<std::set<Elem>> union_find_classes(const BiModule& n, const BiModule& m, Bound b) {
  auto pairs = compose_n({n.m, m.m}).enumerate(b);
  std::map<Elem, std::size_t> index;
  for (std::size_t i = 0; i < pairs.size(); ++i) index[pairs[i]] = i;
  std::vector<std::size_t> parent(pairs.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (const auto& t : compose_n({n.m, n.right.a, m.m}).enumerate(b)) {
    std::size_t x = find(index.at(Elem::nest({n.act_right(t[0], t[1]), t[2]})));
    std::size_t y = find(index.at(Elem::nest({t[0], m.act_left(t[1], t[2])})));
    parent[x] = y;
  }
  std::map<std::size_t, std::set<Elem>> groups;
  for (std::size_t i = 0; i < pairs.size(); ++i) groups[find(i)].insert(pairs[i]);
  std::set<std::set<Elem>> out;
  for (auto& [r, g] : groups) out.insert(std::move(g));
  return out;
}

std::string profunctors() {
  const Bound b = 3;
  Monoid c3 = cat_to_monoid(instances::chain_category(3), "C3");
  MonoidHom f = instances::monotone_functor(c3, c3, {0, 1, 1}, "f");
  MonoidHom g = instances::monotone_functor(c3, c3, {0, 2, 2}, "g");
  MonoidHom k = instances::monotone_functor(c3, c3, {0, 0, 1}, "k");
  BiModule hf = hom_module(f, c3, c3, "hom f", b), hg = hom_module(g, c3, c3, "hom g", b),
           hk = hom_module(k, c3, c3, "hom k", b);
  ModuleIso y = representable_comparison(g, f, c3, c3, c3, b);
  auto iso = check_module_iso(y.fwd, y.inv, y.src, y.tgt, "hom g * hom f", b);
  if (!all_pass(iso)) return first_failure_text(iso);
  std::size_t composite = module_compose(hg, hf, b).m.enumerate(b).size();
  std::size_t direct = hom_module(compose_homs(g, f, c3, c3), c3, c3, "hom gf", b).m.enumerate(b).size();
  if (composite != direct) return "composite has " + std::to_string(composite) + " elements, representable " +
                                 std::to_string(direct);
  for (const auto& [n, m] : {std::pair{hg, hf}, std::pair{hk, hg}, std::pair{identity_module(c3), hf}}) {
    Quotient q = composite_quotient(n, m, b);
    std::map<Elem, std::set<Elem>> by_rep;
    for (const auto& p : q.pairs) by_rep[q(p)].insert(p);
    std::set<std::set<Elem>> got;
    for (auto& [r, cls] : by_rep) got.insert(cls);
    if (got != union_find_classes(n, m, b)) return "quotient of " + n.name + " * " + m.name + " differs from oracle";
    auto co = check_coequalizer(n, m, b);
    if (!all_pass(co)) return first_failure_text(co);
  }
  auto assoc = mmod_equipment_laws(hk, hg, hf, b);
  return first_failure_text(assoc);
}

// 10 ------------------------------------------------------------------------

std::string determinism() {
  for (const auto& [s, name] : suite_names()) {
    SuiteOptions o;
    std::string first = reports_json(run_suite(s, o));
    std::string second = reports_json(run_suite(s, o));
    if (first != second) return name + " differs between runs";
    if (reports_text(run_suite(s, o)) != reports_text(run_suite(s, o))) return name + " text differs";
  }
  return "";
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "list monad cells invertible on 24 spans at list bound 3", 10, list_monad_cells},
      {2, "unary multicategory round trip and single-entry mutations", 5, multicat_round_trip},
      {3, "Kleisli square of Z/2 against substitution", 5, kleisli_oracle},
      {4, "free monoidal hom counts are products", 10, free_monoidal_counts},
      {5, "underlying multicategory of discrete Z/2", 5, underlying_parity},
      {6, "triangle identities and hom bijection", 30, adjunction},
      {7, "Kleisli associator coherence up to total 4", 30, kleisli_coherence},
      {8, "Mat(2) convolution and multi-preorder", 10, mat2},
      {9, "representable modules, quotient oracle, associativity", 10, profunctors},
      {10, "reports are reproducible", 600, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string problem;
    try {
      problem = c.run();
    } catch (const std::exception& e) {
      problem = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (problem.empty() && secs > c.limit_s)
      problem = "took " + std::to_string(secs) + " s, limit " + std::to_string(c.limit_s) + " s";
    char head[64];
    std::snprintf(head, sizeof head, "%s criterion %d (%.2f s): ", problem.empty() ? "PASS" : "FAIL", c.id, secs);
    std::cout << head << c.title << (problem.empty() ? "" : " | " + problem) << std::endl;
    failed += !problem.empty();
  }
  return failed ? 1 : 0;
}
