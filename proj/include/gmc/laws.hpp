#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gmc/battery.hpp"
#include "gmc/instances.hpp"
#include "gmc/kleisli.hpp"
#include "gmc/prof.hpp"
#include "gmc/staradj.hpp"

namespace gmc {

// ---------------------------------------------------------------------------
// Pasting descriptions

/// A tree whose leaves are structure cells and whose inner nodes paste them.
struct Pasting {
  enum class Kind { P, Xi, KappaT, NuM, NuE, KappaL, Sigma, Mu, Eta, Whisker, VComp, HComp, T };

  Kind kind = Kind::P;
  std::string label;
  std::shared_ptr<const SpanCell> cell;
  std::vector<Span> chain;
  std::size_t pos = 0;
  bool kleisli = false;
  std::vector<Pasting> kids;

  std::string str() const {
    if (cell) return label;
    std::string s = label + "(";
    for (std::size_t i = 0; i < kids.size(); ++i) s += (i ? ", " : "") + kids[i].str();
    return s + ")";
  }
};

namespace paste {

inline Pasting leaf(Pasting::Kind k, std::string label, SpanCell c) {
  Pasting p;
  p.kind = k;
  p.label = std::move(label);
  p.cell = std::make_shared<const SpanCell>(std::move(c));
  return p;
}

inline std::string inv_tag(bool inverse) { return inverse ? "^-1" : ""; }

/// The identity cell of the n-fold composite.
inline Pasting P(const std::vector<Span>& chain, std::optional<SetExpr> anchor = std::nullopt) {
  return leaf(Pasting::Kind::P, "P" + std::to_string(chain.size()), identity_cell(compose_n(chain, anchor)));
}

inline Pasting xi(const Partition& p, const std::vector<Span>& chain, std::optional<SetExpr> anchor = std::nullopt,
                  bool inverse = false) {
  CellPair c = associator(p, chain, anchor);
  return leaf(Pasting::Kind::Xi, "xi" + p.str() + inv_tag(inverse), inverse ? c.inv : c.fwd);
}

inline Pasting kl_xi(const Partition& p, const std::vector<Span>& chain, std::optional<SetExpr> anchor = std::nullopt,
                     bool inverse = false) {
  CellPair c = kl_associator(p, chain, anchor);
  return leaf(Pasting::Kind::Xi, "klxi" + p.str() + inv_tag(inverse), inverse ? c.inv : c.fwd);
}

/// The Kleisli associator assembled from nu^e, nu^m and kappa for the
/// partitions 0+1, 1+0, 2+1 and 1+2.
inline Pasting kl_xi_displayed(const Partition& p, const std::vector<Span>& chain) {
  return leaf(Pasting::Kind::Xi, "klxi" + p.str() + "'", kl_associator_displayed(p, chain));
}

inline Pasting kappa_T(const std::vector<Span>& chain, std::optional<SetExpr> anchor = std::nullopt,
                       bool inverse = false) {
  CellPair c = kappa_cell(chain, anchor);
  return leaf(Pasting::Kind::KappaT, "kappa" + std::to_string(chain.size()) + inv_tag(inverse),
              inverse ? c.inv : c.fwd);
}

inline Pasting nu_m(const Span& a, bool inverse = false) {
  CellPair c = nu_m_cell(a);
  return leaf(Pasting::Kind::NuM, "nu_m" + inv_tag(inverse), inverse ? c.inv : c.fwd);
}

inline Pasting nu_e(const Span& a, bool inverse = false) {
  CellPair c = nu_e_cell(a);
  return leaf(Pasting::Kind::NuE, "nu_e" + inv_tag(inverse), inverse ? c.inv : c.fwd);
}

inline Pasting kappa_L(const Span& b, const Span& a, bool inverse = false) {
  CellPair c = kappa_L2(b, a);
  return leaf(Pasting::Kind::KappaL, "kappaL" + inv_tag(inverse), inverse ? c.inv : c.fwd);
}

inline Pasting sigma(const TAlgebra& A) { return leaf(Pasting::Kind::Sigma, "sigma", A.sigma); }
inline Pasting mu(const Monoid& m) { return leaf(Pasting::Kind::Mu, "mu", m.mu); }
inline Pasting eta(const Monoid& m) { return leaf(Pasting::Kind::Eta, "eta", m.eta); }
inline Pasting mu(const TMonoid& t) { return leaf(Pasting::Kind::Mu, "mu", t.mu); }
inline Pasting eta(const TMonoid& t) { return leaf(Pasting::Kind::Eta, "eta", t.eta); }

/// Any named cell, reported as an atom of the given kind.
inline Pasting atom(Pasting::Kind k, std::string label, SpanCell c) { return leaf(k, std::move(label), std::move(c)); }

inline Pasting whisker(const std::vector<Span>& chain, std::size_t pos, Pasting inner) {
  Pasting p;
  p.kind = Pasting::Kind::Whisker;
  p.label = "whisker@" + std::to_string(pos);
  p.chain = chain;
  p.pos = pos;
  p.kids = {std::move(inner)};
  return p;
}

inline Pasting vcomp(std::vector<Pasting> steps) {
  Pasting p;
  p.kind = Pasting::Kind::VComp;
  p.label = "vcomp";
  p.kids = std::move(steps);
  return p;
}

inline Pasting hcomp(std::vector<Pasting> cells, bool kleisli = false) {
  Pasting p;
  p.kind = Pasting::Kind::HComp;
  p.label = kleisli ? "klhcomp" : "hcomp";
  p.kleisli = kleisli;
  p.kids = std::move(cells);
  return p;
}

/// T applied to a pasted cell.
inline Pasting T(Pasting inner) {
  Pasting p;
  p.kind = Pasting::Kind::T;
  p.label = "T";
  p.kids = {std::move(inner)};
  return p;
}

}  // namespace paste

inline SpanCell evaluate(const Pasting& p) {
  using K = Pasting::Kind;
  if (p.cell) return *p.cell;
  std::vector<SpanCell> cs;
  for (const auto& k : p.kids) cs.push_back(evaluate(k));
  switch (p.kind) {
    case K::Whisker:
      return whisker(p.chain, p.pos, cs.at(0));
    case K::VComp:
      return vertical_compose(cs);
    case K::HComp:
      return p.kleisli ? kl_hcompose(cs) : hcompose(cs);
    case K::T:
      return lift_cell(cs.at(0));
    default:
      throw DomainError("atom " + p.label + " has no cell");
  }
}

struct DiagramVerdict {
  bool equal = true;
  std::optional<Elem> witness;
  std::size_t checked = 0;
  std::string reason;
};

/// Evaluates both pastings and compares them pointwise within the bound.
inline DiagramVerdict diagram_equal(const Pasting& lhs, const Pasting& rhs, Bound b) {
  DiagramVerdict v;
  try {
    SpanCell l = evaluate(lhs), r = evaluate(rhs);
    if (!same_span(l.from(), r.from()) || !same_span(l.to(), r.to())) {
      v.equal = false;
      v.reason = "different boundaries";
      return v;
    }
    CellComparison c = equality(l, r, b);
    v.equal = c.equal;
    v.witness = c.witness;
    v.checked = c.checked;
    if (!c.equal) v.reason = "values differ";
  } catch (const error& e) {
    v.equal = false;
    v.reason = e.what();
  }
  return v;
}

/// The two ways from the doubly nested composite to the flat one, in the
/// span equipment or in its Kleisli equipment.
inline std::pair<Pasting, Pasting> coherence_pastings(const Refinement& r, const std::vector<Span>& chain,
                                                      const SetExpr& anchor, bool kleisli) {
  auto blocks = split_chain(r.coarse, chain);
  auto xs = kleisli ? kl_chain_objects(chain, anchor) : chain_objects(chain, anchor);
  auto xi = [kleisli](const Partition& p, const std::vector<Span>& c, const SetExpr& x) {
    return kleisli ? paste::kl_xi(p, c, x) : paste::xi(p, c, x);
  };
  std::vector<Pasting> inner;
  std::vector<Span> subs;
  std::size_t pos = 0;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    inner.push_back(xi(r.inner[j], blocks[j], xs[pos]));
    std::size_t p2 = pos;
    for (const auto& s : split_chain(r.inner[j], blocks[j])) {
      subs.push_back(kleisli ? kl_compose_n(s, xs[p2]) : compose_n(s, xs[p2]));
      p2 += s.size();
    }
    pos += blocks[j].size();
  }
  Pasting first = paste::vcomp({paste::hcomp(inner, kleisli), xi(r.coarse, chain, anchor)});
  Pasting second = paste::vcomp({xi(r.groups, subs, anchor), xi(r.fine, chain, anchor)});
  return {first, second};
}

/// kappa against the associator: zip block by block, then the outer zip and T
/// of the associator, equals the associator on lifted vectors followed by the
/// flat zip.
inline std::pair<Pasting, Pasting> kappa_coherence_pastings(const Partition& p, const std::vector<Span>& chain,
                                                            const SetExpr& anchor) {
  auto blocks = split_chain(p, chain);
  auto xs = chain_objects(chain, anchor);
  std::vector<Span> lifted, outer;
  for (const auto& a : chain) lifted.push_back(lift(a));
  std::vector<Pasting> zips;
  std::size_t pos = 0;
  for (const auto& blk : blocks) {
    zips.push_back(paste::kappa_T(blk, xs[pos]));
    outer.push_back(compose_n(blk, xs[pos]));
    pos += blk.size();
  }
  Pasting lhs = paste::vcomp({paste::hcomp(zips), paste::kappa_T(outer, xs[0]), paste::T(paste::xi(p, chain, anchor))});
  Pasting rhs = paste::vcomp({paste::xi(p, lifted, SetExpr::fm(xs[0])), paste::kappa_T(chain, anchor)});
  return {lhs, rhs};
}

// ---------------------------------------------------------------------------
// Suites

enum class Suite { Span, Mat2, Monad, Kleisli, Monoid, TMonoid, Algebra, Adjunction, Prof };

inline const std::vector<std::pair<Suite, std::string>>& suite_names() {
  static const std::vector<std::pair<Suite, std::string>> names{
      {Suite::Span, "span"},       {Suite::Mat2, "mat2"},       {Suite::Monad, "monad"},
      {Suite::Kleisli, "kleisli"}, {Suite::Monoid, "monoid"},   {Suite::TMonoid, "tmonoid"},
      {Suite::Algebra, "algebra"}, {Suite::Adjunction, "adjunction"}, {Suite::Prof, "prof"}};
  return names;
}

inline std::string suite_name(Suite s) {
  for (const auto& [k, n] : suite_names())
    if (k == s) return n;
  return "?";
}

inline std::optional<Suite> parse_suite(const std::string& name) {
  for (const auto& [k, n] : suite_names())
    if (n == name) return k;
  return std::nullopt;
}

struct SuiteOptions {
  std::uint64_t seed = 7;
  Bound bound = 3;
  std::size_t samples = 4;
  /// Name of the law whose instance data are replaced by a known defect.
  std::optional<std::string> mutation;
};

/// The laws each suite can be made to fail on purpose.
inline std::vector<std::string> suite_mutations(Suite s) {
  switch (s) {
    case Suite::Span:
      return {"associator invertible"};
    case Suite::Mat2:
      return {"multiplication"};
    case Suite::Monad:
      return {"kappa invertible"};
    case Suite::Kleisli:
      return {"kl associator invertible"};
    case Suite::Monoid:
    case Suite::TMonoid:
      return {"associativity"};
    case Suite::Algebra:
      return {"L comparison invertible"};
    case Suite::Adjunction:
      return {"triangle on K"};
    case Suite::Prof:
      return {"actions commute"};
  }
  return {};
}

namespace detail {

inline void append(LawReports& out, LawReports rs) {
  for (auto& r : rs) out.push_back(std::move(r));
}

inline LawReport from_verdict(std::string law, std::string instance, std::optional<Bound> bound,
                              const DiagramVerdict& v, const std::string& where) {
  if (v.equal) return law_result(std::move(law), std::move(instance), bound, std::nullopt);
  std::string w = where + ": " + (v.witness ? v.witness->str() : v.reason);
  return law_failure(std::move(law), std::move(instance), bound, w);
}

/// A cell with the same boundary that sends everything to one element.
inline SpanCell constant_inverse(const SpanCell& inv, Bound b) {
  auto elems = inv.from().enumerate(b);
  Elem first = elems.empty() ? Elem() : inv(elems.front());
  return SpanCell::unchecked(inv.from(), inv.to(), inv.name() + "!", [first](const Elem&) { return first; });
}

/// Chains whose flat composite has at least two elements, so that a constant
/// inverse is detectable.
inline std::vector<Span> nontrivial_chain(Rng& rng, std::size_t n, const std::string& tag, bool kleisli, Bound b) {
  for (int attempt = 0;; ++attempt) {
    auto chain = kleisli ? random_kl_chain(rng, n, 2, 3, 2, tag + std::to_string(attempt))
                         : random_chain(rng, n, 3, 4, tag + std::to_string(attempt));
    Span flat = kleisli ? kl_compose_n(chain) : compose_n(chain);
    if (flat.enumerate(b).size() >= 2) return chain;
  }
}

inline std::vector<Partition> partitions_of(std::size_t n, std::size_t max_blocks) {
  std::vector<Partition> out;
  for (const auto& r : refinements(n, max_blocks))
    if (r.groups.blocks.size() == 1) out.push_back(r.fine);
  return out;
}

inline Span reversed(const Span& a, const std::string& name) {
  std::vector<std::tuple<Elem, Elem, Elem>> rows;
  for (const auto& e : a.enumerate(1)) rows.emplace_back(e, a.right_of(e), a.left_of(e));
  return table_span(a.target(), a.source(), rows, name);
}

/// Unital but not associative on one object: a a = b, a b = b a = b b = a.
inline FiniteCategory non_associative_category() {
  using instances::atom;
  FiniteCategory c;
  c.objects = {atom("*")};
  c.morphisms = {{atom("1"), atom("*"), atom("*")}, {atom("a"), atom("*"), atom("*")}, {atom("b"), atom("*"), atom("*")}};
  c.identities = {{atom("*"), atom("1")}};
  for (const char* x : {"1", "a", "b"}) {
    c.compose[{atom("1"), atom(x)}] = atom(x);
    c.compose[{atom(x), atom("1")}] = atom(x);
  }
  c.compose[{atom("a"), atom("a")}] = atom("b");
  c.compose[{atom("a"), atom("b")}] = atom("a");
  c.compose[{atom("b"), atom("a")}] = atom("a");
  c.compose[{atom("b"), atom("b")}] = atom("a");
  return c;
}

inline std::string chain_name(const std::vector<Span>& chain) {
  std::string s = "[";
  for (std::size_t i = 0; i < chain.size(); ++i) s += (i ? " ; " : "") + chain[i].sig();
  return s + "]";
}

// --- span -------------------------------------------------------------------

inline LawReports span_suite(const SuiteOptions& o, Rng& rng) {
  LawReports out;
  const Bound b = o.bound;
  bool mutate = o.mutation == std::string("associator invertible");
  for (std::size_t s = 0; s < o.samples; ++s) {
    std::size_t n = 1 + s % 4;
    auto chain = nontrivial_chain(rng, n, "sp" + std::to_string(s) + "_", false, b);
    std::string inst = chain_name(chain);
    std::optional<std::string> bad_inverse, illegal_cell, incoherent;
    for (const auto& p : partitions_of(n, 3)) {
      CellPair xi = associator(p, chain);
      if (!illegal_cell) {
        if (auto w = xi.fwd.leg_violation(b)) illegal_cell = p.str() + ": " + w->str();
        else if (auto w2 = xi.inv.leg_violation(b)) illegal_cell = p.str() + " inverse: " + w2->str();
      }
      SpanCell inv = mutate && s == 0 ? constant_inverse(xi.inv, b) : xi.inv;
      if (!bad_inverse)
        if (auto w = inverse_violation(xi.fwd, inv, b)) bad_inverse = p.str() + ": " + w->str();
    }
    for (const auto& r : refinements(n, 3)) {
      if (incoherent) break;
      auto [first, second] = coherence_pastings(r, chain, chain[0].source(), false);
      auto v = diagram_equal(first, second, b);
      if (!v.equal) incoherent = r.str() + ": " + (v.witness ? v.witness->str() : v.reason);
    }
    auto rep = [&](const char* law, const std::optional<std::string>& w) {
      out.push_back(w ? law_failure(law, inst, b, *w) : law_result(law, inst, b, std::nullopt));
    };
    rep("associator is a cell", illegal_cell);
    rep("associator invertible", bad_inverse);
    rep("associator coherence", incoherent);
  }
  return out;
}

// --- mat2 -------------------------------------------------------------------

/// Whether w splits into |u| consecutive pieces w_i with s(u_i, w_i).
inline bool splits_along(const MatVector& s, const Elem& u, std::size_t i, const Elem& w, std::size_t at) {
  if (i == u.size()) return at == w.size();
  for (std::size_t end = at; end <= w.size(); ++end) {
    std::vector<Elem> piece(w.kids().begin() + at, w.kids().begin() + end);
    if (s.at(u[i], Elem::nest(piece)) != 0 && splits_along(s, u, i + 1, w, end)) return true;
  }
  return false;
}

inline MatVector random_kl_relation(Rng& rng, QuantaleRef q, const SetExpr& x, const std::string& nm) {
  std::vector<std::tuple<Elem, Elem, V>> es;
  for (const auto& a : x.elements())
    for (const auto& l : SetExpr::fm(x).enumerate(2))
      if (uniform(rng, 0, 4) == 0) es.emplace_back(a, l, q->top());
  return MatVector::sparse(q, x, SetExpr::fm(x), es, nm);
}

inline LawReports mat2_suite(const SuiteOptions& o, Rng& rng) {
  LawReports out;
  const Bound b = o.bound;
  auto q = Quantale::two();
  SetExpr x = numbered_set("x", 3);
  for (std::size_t s = 0; s < o.samples; ++s) {
    std::string tag = std::to_string(s);
    MatVector r = random_kl_relation(rng, q, x, "r" + tag), t = random_kl_relation(rng, q, x, "s" + tag);
    MatVector rt = mat_kl_compose_n({r, t}, b);
    std::optional<Elem> w;
    for (const auto& a : x.elements()) {
      for (const auto& l : SetExpr::fm(x).enumerate(b)) {
        bool rel = false;
        for (const auto& [u, v] : r.row(a)) rel = rel || (v != 0 && splits_along(t, u, 0, l, 0));
        if ((rt(a, l) != 0) != rel) {
          w = Elem::nest({a, l});
          break;
        }
      }
      if (w) break;
    }
    std::string inst = "r" + tag + " ; s" + tag;
    out.push_back(law_result("kleisli convolution", inst, b, w));
    MatVector u = random_kl_relation(rng, q, x, "u" + tag);
    std::optional<std::string> lax, strict;
    for (const auto& p : partitions_of(3, 3)) {
      auto rep = mat_kl_associator(p, {r, t, u}, b);
      if (rep.lax_violation && !lax)
        lax = p.str() + ": " + Elem::nest({rep.lax_violation->first, rep.lax_violation->second}).str();
      if (!rep.invertible && !strict) strict = p.str();
    }
    std::string inst3 = inst + " ; u" + tag;
    out.push_back(lax ? law_failure("associator is lax", inst3, b, *lax)
                      : law_result("associator is lax", inst3, b, std::nullopt));
    out.push_back(strict ? law_failure("associator invertible", inst3, b, *strict)
                         : law_result("associator invertible", inst3, b, std::nullopt));
  }
  auto leq = [](const Elem& a, const Elem& c) { return a.name() <= c.name(); };
  auto broken = [](const Elem& a, const Elem& c) {
    return a == c || (a.name() == "x0" && c.name() == "x1") || (a.name() == "x1" && c.name() == "x2");
  };
  bool mutate = o.mutation == std::string("multiplication");
  append(out, check_mat_tmonoid(multi_preorder(q, x, mutate ? std::function<bool(const Elem&, const Elem&)>(broken)
                                                             : std::function<bool(const Elem&, const Elem&)>(leq),
                                               b, "chain multi-preorder"),
                                "chain multi-preorder", b));
  std::vector<std::pair<Elem, Elem>> pairs;
  for (const auto& a : x.elements())
    for (const auto& c : x.elements())
      if (leq(a, c)) pairs.emplace_back(a, c);
  append(out, check_mat_monoid(MatVector::relation(q, x, x, pairs, "chain"), "chain preorder", b));
  return out;
}

// --- monad ------------------------------------------------------------------

inline LawReports monad_suite(const SuiteOptions& o, Rng& rng) {
  LawReports out;
  const Bound b = o.bound;
  for (std::size_t k = 1; k <= 3; ++k) {
    SetExpr x = numbered_set("m", k);
    auto f = check_monad_laws(x, b);
    out.push_back(f ? law_failure("monad laws", x.str(), b, f->law + " at " + f->witness.str())
                    : law_result("monad laws", x.str(), b, std::nullopt));
  }
  bool mutate = o.mutation == std::string("kappa invertible");
  auto spans = span_battery(o.seed, std::max<std::size_t>(o.samples, 2));
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const Span& a = spans[i];
    Span back = reversed(a, a.sig() + "'");
    std::vector<Span> chain{a, back};
    std::string inst = a.sig();
    CellPair k = kappa_cell(chain);
    SpanCell kinv = mutate && i == 1 ? constant_inverse(k.inv, b) : k.inv;
    out.push_back(law_result("kappa invertible", inst, b, inverse_violation(k.fwd, kinv, b)));
    CellPair nm = nu_m_cell(a), ne = nu_e_cell(a);
    out.push_back(law_result("nu_m invertible", inst, b, inverse_violation(nm.fwd, nm.inv, b)));
    out.push_back(law_result("nu_e invertible", inst, b, inverse_violation(ne.fwd, ne.inv, b)));
    std::optional<std::string> incoherent;
    std::vector<Span> triple{a, back, a};
    for (const auto& p : {Partition{{2, 1}}, Partition{{1, 2}}}) {
      auto [lhs, rhs] = kappa_coherence_pastings(p, triple, a.source());
      auto v = diagram_equal(lhs, rhs, std::min<Bound>(b, 2));
      if (!v.equal) {
        incoherent = p.str() + ": " + (v.witness ? v.witness->str() : v.reason);
        break;
      }
    }
    out.push_back(incoherent ? law_failure("kappa coherence", inst, std::min<Bound>(b, 2), *incoherent)
                             : law_result("kappa coherence", inst, std::min<Bound>(b, 2), std::nullopt));
  }
  for (std::size_t s = 0; s < o.samples; ++s) {
    SetExpr d = numbered_set("d" + std::to_string(s) + "_", uniform(rng, 1, 3));
    SetExpr c = numbered_set("c" + std::to_string(s) + "_", uniform(rng, 1, 2));
    MapF f = random_map(rng, d, c);
    auto sq = mult_square_is_pullback(f, b);
    std::string inst = "map " + d.str() + " -> " + c.str();
    out.push_back(sq.pullback ? law_result("multiplication square is a pullback", inst, b, std::nullopt)
                              : law_failure("multiplication square is a pullback", inst, b,
                                            sq.witness ? sq.witness->str() : sq.reason));
    auto su = unit_square_is_pullback(f, b);
    out.push_back(su.pullback ? law_result("unit square is a pullback", inst, b, std::nullopt)
                              : law_failure("unit square is a pullback", inst, b,
                                            su.witness ? su.witness->str() : su.reason));
  }
  return out;
}

// --- kleisli ----------------------------------------------------------------

inline LawReports kleisli_suite(const SuiteOptions& o, Rng& rng) {
  LawReports out;
  const Bound b = std::min<Bound>(o.bound, 2);
  bool mutate = o.mutation == std::string("kl associator invertible");
  for (std::size_t s = 0; s < o.samples; ++s) {
    std::size_t n = 1 + s % 3;
    auto chain = nontrivial_chain(rng, n, "kl" + std::to_string(s) + "_", true, b);
    std::string inst = chain_name(chain);
    std::optional<std::string> bad_inverse, incoherent, displayed;
    for (const auto& p : partitions_of(n, 3)) {
      CellPair xi = kl_associator(p, chain);
      SpanCell inv = mutate && s == 0 ? constant_inverse(xi.inv, b) : xi.inv;
      if (!bad_inverse)
        if (auto w = inverse_violation(xi.fwd, inv, b)) bad_inverse = p.str() + ": " + w->str();
    }
    for (const auto& r : refinements(n, 3)) {
      auto [first, second] = coherence_pastings(r, chain, chain[0].source(), true);
      auto v = diagram_equal(first, second, b);
      if (!v.equal) {
        incoherent = r.str() + ": " + (v.witness ? v.witness->str() : v.reason);
        break;
      }
    }
    std::vector<Partition> shown;
    if (n == 1) shown = {Partition{{0, 1}}, Partition{{1, 0}}};
    if (n == 3) shown = {Partition{{2, 1}}, Partition{{1, 2}}};
    for (const auto& p : shown) {
      auto v = diagram_equal(paste::kl_xi(p, chain), paste::kl_xi_displayed(p, chain), b);
      if (!v.equal) {
        displayed = p.str() + ": " + (v.witness ? v.witness->str() : v.reason);
        break;
      }
    }
    auto rep = [&](const char* law, const std::optional<std::string>& w) {
      out.push_back(w ? law_failure(law, inst, b, *w) : law_result(law, inst, b, std::nullopt));
    };
    rep("kl associator invertible", bad_inverse);
    rep("kl associator coherence", incoherent);
    if (!shown.empty()) rep("kl associator matches displayed components", displayed);
  }
  return out;
}

// --- monoid / tmonoid -------------------------------------------------------

inline std::vector<std::pair<std::string, FiniteCategory>> category_battery(const SuiteOptions& o, Rng& rng,
                                                                             bool mutate) {
  std::vector<std::pair<std::string, FiniteCategory>> cats;
  cats.emplace_back("arrow", instances::arrow_category());
  cats.emplace_back("chain3", instances::chain_category(3));
  cats.emplace_back(mutate ? "non-associative" : "idempotent",
                    mutate ? non_associative_category() : instances::idempotent_category());
  for (std::size_t s = 0; s < o.samples; ++s)
    cats.emplace_back("random" + std::to_string(s), random_category(rng, 4, 10, true));
  return cats;
}

inline LawReports monoid_suite(const SuiteOptions& o, Rng& rng) {
  LawReports out;
  bool mutate = o.mutation == std::string("associativity");
  for (const auto& [name, c] : category_battery(o, rng, mutate)) {
    Monoid m = cat_to_monoid(c, name);
    append(out, check_monoid(m, o.bound));
    out.push_back(monoid_to_cat(m) == c ? law_result("round trip", name, std::nullopt, std::nullopt)
                                        : law_failure("round trip", name, std::nullopt, "presentation changed"));
  }
  return out;
}

inline LawReports tmonoid_suite(const SuiteOptions& o, Rng& rng) {
  LawReports out;
  bool mutate = o.mutation == std::string("associativity");
  std::vector<Multicat> ms;
  for (const auto& [name, c] : category_battery(o, rng, mutate)) ms.push_back(category_as_multicat(c, name));
  ms.push_back(cyclic_multicat(2));
  ms.push_back(cyclic_multicat(3));
  for (const auto& m : ms) {
    TMonoid t = multicat_to_tmonoid(m);
    Bound b = std::min<Bound>(o.bound, 2);
    append(out, check_tmonoid(t, b));
    auto diff = presentation_diff(tmonoid_to_multicat(t), m, b);
    std::optional<Bound> shown = t.exact ? std::nullopt : std::optional<Bound>(b);
    out.push_back(diff ? law_failure("round trip", t.name, shown, *diff)
                       : law_result("round trip", t.name, shown, std::nullopt));
  }
  return out;
}

// --- algebra ----------------------------------------------------------------

inline LawReports algebra_suite(const SuiteOptions& o, Rng& rng) {
  LawReports out;
  const Bound b = std::min<Bound>(o.bound, 2);
  std::vector<StrictMonCat> smcs{discrete_cyclic_smc(2), discrete_cyclic_smc(3), instances::single_object_smc(),
                                 instances::arrow_max_smc()};
  for (const auto& s : smcs) {
    TAlgebra a = smc_to_talgebra(s);
    append(out, check_talgebra(a, o.bound));
    out.push_back(talgebra_to_smc(a) == s ? law_result("round trip", a.name, std::nullopt, std::nullopt)
                                          : law_failure("round trip", a.name, std::nullopt, "presentation changed"));
  }
  append(out, check_talgebra(free_talgebra(multicat_to_tmonoid(cyclic_multicat(2))), b));
  bool mutate = o.mutation == std::string("L comparison invertible");
  for (std::size_t s = 0; s < o.samples; ++s) {
    auto chain = random_kl_chain(rng, 2, 3, 5, 2, "L" + std::to_string(s) + "_");
    std::string inst = chain_name(chain);
    std::optional<CellPair> num;
    if (mutate && s == 0) {
      CellPair nm = nu_m_cell(chain[1]);
      num = CellPair{nm.fwd, constant_inverse(nm.inv, b)};
    }
    try {
      auto k = kappa_L2(chain[0], chain[1], num, b);
      out.push_back(law_result("L comparison invertible", inst, b, inverse_violation(k.fwd, k.inv, b)));
    } catch (const NotInvertibleNuM& e) {
      out.push_back(law_failure("L comparison invertible", inst, b, e.what()));
    }
  }
  return out;
}

// --- adjunction -------------------------------------------------------------

inline std::vector<std::pair<TMonoid, TAlgebra>> adjunction_pairs() {
  return {{multicat_to_tmonoid(category_as_multicat(instances::arrow_category(), "arrow")),
           smc_to_talgebra(discrete_cyclic_smc(2))},
          {multicat_to_tmonoid(cyclic_multicat(2)), smc_to_talgebra(discrete_cyclic_smc(2))},
          {instances::identities_only({"p"}), smc_to_talgebra(instances::single_object_smc())}};
}

/// The counit with its morphism part sent off its value on singleton lists.
inline AdjunctionData broken_counit_at(const std::string& algebra) {
  AdjunctionData adj;
  adj.counit = [algebra](const TAlgebra& A) {
    TAlgebraHom e = adjunction_counit(A);
    if (A.name != algebra) return e;
    SpanCell phi = e.hom.phi;
    e.hom.phi = SpanCell::unchecked(phi.from(), phi.to(), "broken", [phi](const Elem& l) {
      return l.size() == 1 ? Elem::atom("broken") : phi(l);
    });
    return e;
  };
  return adj;
}

inline LawReports adjunction_suite(const SuiteOptions& o, Rng&) {
  LawReports out;
  bool mutate = o.mutation == std::string("triangle on K");
  auto pairs = adjunction_pairs();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [t, a] = pairs[i];
    AdjunctionData adj = mutate && i == 0 ? broken_counit_at(a.name) : AdjunctionData{};
    append(out, check_triangles(t, a, o.bound, adj));
    append(out, hom_bijection_oracle(t, a, std::min<Bound>(o.bound, 2)).reports(t.name + ", " + a.name));
  }
  return out;
}

// --- prof -------------------------------------------------------------------

/// Two points swapped by nothing: e acts on the left by sending everything to
/// p and on the right by sending everything to q.
inline BiModule noncommuting_module(const Monoid& e) {
  using instances::atom;
  Span m = table_span(e.x, e.x, {{atom("p"), atom("*"), atom("*")}, {atom("q"), atom("*"), atom("*")}}, "pq");
  return make_bimodule(
      "pq", e, e, m, [](const Elem& x) { return x[0] == atom("1") ? x[1] : atom("p"); },
      [](const Elem& x) { return x[1] == atom("1") ? x[0] : atom("q"); });
}

inline LawReports prof_suite(const SuiteOptions& o, Rng&) {
  LawReports out;
  const Bound b = o.bound;
  Monoid c2 = cat_to_monoid(instances::chain_category(2), "C2"), c3 = cat_to_monoid(instances::chain_category(3), "C3");
  Monoid e = cat_to_monoid(instances::idempotent_category(), "E");
  MonoidHom f = instances::monotone_functor(c2, c3, {0, 2}, "f");
  MonoidHom g = instances::monotone_functor(c3, c3, {0, 2, 2}, "g");
  MonoidHom k = instances::monotone_functor(c3, c2, {0, 0, 1}, "k");
  BiModule m = hom_module(f, c2, c3, "hom f", b), n = hom_module(g, c3, c3, "hom g", b),
           p = hom_module(k, c3, c2, "hom k", b);
  append(out, mmod_equipment_laws(p, n, m, b));
  ModuleIso y = representable_comparison(g, f, c2, c3, c3, b);
  append(out, check_module_iso(y.fwd, y.inv, y.src, y.tgt, "representables compose", b));
  append(out, check_coequalizer(n, m, b));
  bool mutate = o.mutation == std::string("actions commute");
  append(out, check_bimodule(mutate ? noncommuting_module(e) : identity_module(e), b));
  return out;
}

}  // namespace detail

/// Runs every law of a suite on its battery. All randomness comes from the
/// seed; reports come out in a fixed order.
inline LawReports run_suite(Suite s, const SuiteOptions& o = {}) {
  if (o.mutation) {
    auto ms = suite_mutations(s);
    if (std::find(ms.begin(), ms.end(), *o.mutation) == ms.end())
      throw DomainError("suite " + suite_name(s) + " has no mutation for law '" + *o.mutation + "'");
  }
  Rng rng(o.seed);
  LawReports out;
  switch (s) {
    case Suite::Span: out = detail::span_suite(o, rng); break;
    case Suite::Mat2: out = detail::mat2_suite(o, rng); break;
    case Suite::Monad: out = detail::monad_suite(o, rng); break;
    case Suite::Kleisli: out = detail::kleisli_suite(o, rng); break;
    case Suite::Monoid: out = detail::monoid_suite(o, rng); break;
    case Suite::TMonoid: out = detail::tmonoid_suite(o, rng); break;
    case Suite::Algebra: out = detail::algebra_suite(o, rng); break;
    case Suite::Adjunction: out = detail::adjunction_suite(o, rng); break;
    case Suite::Prof: out = detail::prof_suite(o, rng); break;
  }
  for (auto& r : out) r.seed = o.seed;
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::ordered_json report_json(const LawReport& r) {
  nlohmann::ordered_json j;
  j["law"] = r.law;
  j["instance"] = r.instance;
  j["verdict"] = r.verdict();
  if (r.bound) j["bound"] = *r.bound;
  else j["bound"] = "exact";
  j["witness"] = r.witness;
  if (r.seed) j["seed"] = *r.seed;
  else j["seed"] = nullptr;
  return j;
}

inline std::string reports_json(const LawReports& rs) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (const auto& r : rs) a.push_back(report_json(r));
  return a.dump(2);
}

/// One line per report: verdict, law, instance, bound, seed, and the witness
/// of a failure.
inline std::string report_line(const LawReport& r) {
  std::string s = r.verdict() + " | " + r.law + " | " + r.instance + " | bound " + r.bound_text();
  if (r.seed) s += " | seed " + std::to_string(*r.seed);
  if (!r.pass) s += " | witness " + r.witness;
  return s;
}

inline std::string reports_text(const LawReports& rs) {
  std::string s;
  for (const auto& r : rs) s += report_line(r) + "\n";
  return s;
}

}  // namespace gmc
