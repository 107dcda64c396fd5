#pragma once

#include <random>
#include <string>
#include <vector>

#include "gmc/monoids.hpp"
#include "gmc/span.hpp"

namespace gmc {

using Rng = std::mt19937_64;

inline SetExpr numbered_set(const std::string& prefix, std::size_t n) {
  std::vector<Elem> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(Elem::atom(prefix + std::to_string(i)));
  return SetExpr::fin(std::move(v));
}

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline MapF random_map(Rng& rng, const SetExpr& dom, const SetExpr& cod) {
  std::vector<std::pair<Elem, Elem>> g;
  for (const auto& e : dom.elements()) g.emplace_back(e, cod.elements()[uniform(rng, 0, cod.size() - 1)]);
  return MapF::table(dom, cod, g);
}

/// A finite span with `apex_size` elements named `prefix`0, `prefix`1, ...
inline Span random_span(Rng& rng, const SetExpr& source, const SetExpr& target,
                        std::size_t apex_size, const std::string& prefix) {
  std::vector<std::tuple<Elem, Elem, Elem>> rows;
  for (std::size_t i = 0; i < apex_size; ++i)
    rows.emplace_back(Elem::atom(prefix + std::to_string(i)),
                      source.elements()[uniform(rng, 0, source.size() - 1)],
                      target.elements()[uniform(rng, 0, target.size() - 1)]);
  return table_span(source, target, rows, prefix);
}

/// A composable chain x0 -> ... -> xn of random spans over small sets.
inline std::vector<Span> random_chain(Rng& rng, std::size_t n, std::size_t max_set,
                                      std::size_t max_apex, const std::string& tag) {
  std::vector<SetExpr> xs;
  for (std::size_t i = 0; i <= n; ++i)
    xs.push_back(numbered_set(tag + "x" + std::to_string(i) + "_", uniform(rng, 1, max_set)));
  std::vector<Span> chain;
  for (std::size_t i = 0; i < n; ++i)
    chain.push_back(random_span(rng, xs[i], xs[i + 1], uniform(rng, 0, max_apex),
                                tag + "a" + std::to_string(i) + "_"));
  return chain;
}

/// A finite Kleisli vector x -> T y whose elements have right values of length
/// at most max_len.
inline Span random_kl_span(Rng& rng, const SetExpr& source, const SetExpr& target,
                           std::size_t apex_size, std::size_t max_len, const std::string& prefix) {
  std::vector<std::tuple<Elem, Elem, Elem>> rows;
  for (std::size_t i = 0; i < apex_size; ++i) {
    std::vector<Elem> outs;
    std::size_t len = uniform(rng, 0, max_len);
    for (std::size_t j = 0; j < len; ++j) outs.push_back(target.elements()[uniform(rng, 0, target.size() - 1)]);
    rows.emplace_back(Elem::atom(prefix + std::to_string(i)),
                      source.elements()[uniform(rng, 0, source.size() - 1)], Elem::nest(std::move(outs)));
  }
  return table_span(source, SetExpr::fm(target), rows, prefix);
}

inline std::vector<Span> random_kl_chain(Rng& rng, std::size_t n, std::size_t max_set,
                                         std::size_t max_apex, std::size_t max_len,
                                         const std::string& tag) {
  std::vector<SetExpr> xs;
  for (std::size_t i = 0; i <= n; ++i)
    xs.push_back(numbered_set(tag + "x" + std::to_string(i) + "_", uniform(rng, 1, max_set)));
  std::vector<Span> chain;
  for (std::size_t i = 0; i < n; ++i)
    chain.push_back(random_kl_span(rng, xs[i], xs[i + 1], uniform(rng, 1, max_apex), max_len,
                                   tag + "a" + std::to_string(i) + "_"));
  return chain;
}

/// Standard battery of finite spans x -> y with apexes of at most 8 elements.
inline std::vector<Span> span_battery(std::uint64_t seed, std::size_t count) {
  Rng rng(seed);
  std::vector<Span> out;
  SetExpr one = numbered_set("o", 1);
  out.push_back(identity(one));
  out.push_back(identity(numbered_set("p", 2)));
  for (std::size_t i = out.size(); i < count; ++i) {
    std::string tag = "s" + std::to_string(i) + "_";
    SetExpr x = numbered_set(tag + "x", uniform(rng, 1, 3));
    SetExpr y = numbered_set(tag + "y", uniform(rng, 1, 3));
    out.push_back(random_span(rng, x, y, uniform(rng, 0, 8), tag + "a"));
  }
  return out;
}

/// A random finite category: a preorder on up to max_objects objects where
/// objects outside every cycle may carry a one-object monoid (a cyclic group of
/// order 2 or 3, or an idempotent) acting trivially on the other arrows. With
/// `rigid` only the order 3 group is used; then every single change of a
/// composite yields an invalid table.
inline FiniteCategory random_category(Rng& rng, std::size_t max_objects, std::size_t max_morphisms,
                                      bool rigid = false) {
  for (;;) {
    std::size_t n = uniform(rng, 1, max_objects);
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j && uniform(rng, 0, 3) == 0) r[i][j] = true;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (r[i][k] && r[k][j]) r[i][j] = true;
    auto obj = [](std::size_t i) { return Elem::atom("o" + std::to_string(i)); };
    auto arrow = [](std::size_t i, std::size_t j) {
      return Elem::atom(i == j ? "id" + std::to_string(i) : "f" + std::to_string(i) + "_" + std::to_string(j));
    };
    // Endomorphism monoid at each object: element 0 is the identity.
    std::vector<std::size_t> order(n, 1);
    std::vector<bool> cyclic(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      bool in_cycle = false;
      for (std::size_t j = 0; j < n; ++j) in_cycle = in_cycle || (i != j && r[i][j] && r[j][i]);
      if (in_cycle || uniform(rng, 0, 2) != 0) continue;
      std::size_t kind = rigid ? 1 : uniform(rng, 0, 2);
      order[i] = kind == 2 ? 2 : kind + 2;
      cyclic[i] = kind != 2;
    }
    auto endo = [&](std::size_t i, std::size_t k) {
      return k == 0 ? arrow(i, i) : Elem::atom("g" + std::to_string(i) + "_" + std::to_string(k));
    };
    FiniteCategory c;
    for (std::size_t i = 0; i < n; ++i) c.objects.push_back(obj(i));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (!r[i][j]) continue;
        if (i == j) {
          for (std::size_t k = 0; k < order[i]; ++k) c.morphisms.push_back({endo(i, k), obj(i), obj(i)});
        } else {
          c.morphisms.push_back({arrow(i, j), obj(i), obj(j)});
        }
      }
    if (c.morphisms.size() > max_morphisms) continue;
    for (std::size_t i = 0; i < n; ++i) c.identities[obj(i)] = arrow(i, i);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          if (!r[i][j] || !r[j][k]) continue;
          if (i == j && j == k) {
            for (std::size_t a = 0; a < order[i]; ++a)
              for (std::size_t b = 0; b < order[i]; ++b) {
                std::size_t ab = cyclic[i] ? (a + b) % order[i] : std::max(a, b);
                c.compose[{endo(i, b), endo(i, a)}] = endo(i, ab);
              }
            continue;
          }
          std::vector<Elem> firsts, seconds;
          if (i == j)
            for (std::size_t a = 0; a < order[i]; ++a) firsts.push_back(endo(i, a));
          else
            firsts.push_back(arrow(i, j));
          if (j == k)
            for (std::size_t a = 0; a < order[j]; ++a) seconds.push_back(endo(j, a));
          else
            seconds.push_back(arrow(j, k));
          for (const auto& f : firsts)
            for (const auto& g : seconds) c.compose[{g, f}] = arrow(i, k);
        }
    return c;
  }
}

}  // namespace gmc
