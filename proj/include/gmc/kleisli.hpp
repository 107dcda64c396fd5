#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gmc/listmonad.hpp"
#include "gmc/quantale.hpp"

namespace gmc {

/// Target object of a Kleisli vector x -> T y.
inline const SetExpr& kl_target(const Span& a) {
  if (!a.target().is_fm()) throw ChainMismatch(a.sig() + " does not land in a list set");
  return a.target().base();
}

inline void check_kl_chain(const std::vector<Span>& chain) {
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    if (!(kl_target(chain[i]) == chain[i + 1].source()))
      throw ChainMismatch("position " + std::to_string(i) + " ends at " + chain[i].target().str() +
                          " but the next vector starts at " + chain[i + 1].source().str());
  if (!chain.empty()) kl_target(chain.back());
}

/// Objects x_0, ..., x_n of a Kleisli chain.
inline std::vector<SetExpr> kl_chain_objects(const std::vector<Span>& chain,
                                             std::optional<SetExpr> anchor) {
  if (chain.empty()) {
    if (!anchor) throw ChainMismatch("empty chain needs an anchoring object");
    return {*anchor};
  }
  std::vector<SetExpr> xs{chain[0].source()};
  for (const auto& a : chain) xs.push_back(kl_target(a));
  return xs;
}

/// x <- x -> T x with the singleton on the right.
inline Span kl_identity(const SetExpr& x) {
  return post_leg(identity(x), Side::Right, ListMonad::unit(x));
}

/// a_1, T a_2, ..., T^{n-1} a_n composed, followed by flattening T^n x_n -> T x_n.
/// Elements are tuples (alpha, L_2, ..., L_n) with L_k a depth k-1 nested list.
inline Span kl_compose_n(const std::vector<Span>& chain, std::optional<SetExpr> anchor = std::nullopt) {
  if (chain.empty()) {
    if (!anchor) throw ChainMismatch("empty chain needs an anchoring object");
    return kl_identity(*anchor);
  }
  if (anchor && !(chain.front().source() == *anchor))
    throw ChainMismatch("chain does not start at " + anchor->str());
  check_kl_chain(chain);
  if (chain.size() == 1) return chain[0];
  std::vector<Span> host;
  for (std::size_t i = 0; i < chain.size(); ++i) host.push_back(lift_n(chain[i], static_cast<int>(i)));
  const int n = static_cast<int>(chain.size());
  return post_leg(compose_n(host), Side::Right, MapF::flatten(kl_target(chain.back()), n));
}

/// Kleisli horizontal composite of cells c_j : a_j => b_j.
inline SpanCell kl_hcompose(const std::vector<SpanCell>& cells) {
  if (cells.empty()) throw ChainMismatch("empty horizontal composite");
  if (cells.size() == 1) return cells[0];
  std::vector<SpanCell> host;
  for (std::size_t i = 0; i < cells.size(); ++i)
    host.push_back(lift_cell_n(cells[i], static_cast<int>(i)));
  const int n = static_cast<int>(cells.size());
  return post_leg_cell(hcompose(host), Side::Right, MapF::flatten(kl_target(cells.back().from()), n));
}

namespace detail {

/// An element of a Kleisli composite read as a planted tree: a node at level
/// k holds an element of a_k and has one child per entry of its right value.
struct KlTree {
  Elem elem;
  std::vector<KlTree> kids;
};

using Outputs = std::function<std::size_t(std::size_t, const Elem&)>;

inline KlTree decode_flat(const Elem& e, std::size_t m, const Outputs& outputs) {
  if (m == 1) return {e, {}};
  std::function<KlTree(std::size_t, const Elem&, std::vector<std::size_t>&)> build =
      [&](std::size_t level, const Elem& el, std::vector<std::size_t>& path) {
        KlTree t{el, {}};
        if (level == m) return t;
        std::size_t r = outputs(level, el);
        for (std::size_t i = 0; i < r; ++i) {
          path.push_back(i);
          Elem child = e[level];
          for (auto p : path) child = child[p];
          t.kids.push_back(build(level + 1, child, path));
          path.pop_back();
        }
        return t;
      };
  std::vector<std::size_t> path;
  return build(1, e[0], path);
}

inline Elem encode_level(const KlTree& t, std::size_t depth) {
  std::vector<Elem> out;
  for (const auto& c : t.kids) out.push_back(depth == 1 ? c.elem : encode_level(c, depth - 1));
  return Elem::nest(std::move(out));
}

inline Elem encode_flat(const KlTree& root, std::size_t m) {
  if (m == 1) return root.elem;
  std::vector<Elem> parts{root.elem};
  for (std::size_t k = 2; k <= m; ++k) parts.push_back(encode_level(root, k - 1));
  return Elem::nest(std::move(parts));
}

/// Nodes at the given depth below t (depth 0 is t itself), left to right.
inline void frontier(KlTree& t, std::size_t depth, std::vector<KlTree*>& out) {
  if (depth == 0) {
    out.push_back(&t);
    return;
  }
  for (auto& c : t.kids) frontier(c, depth - 1, out);
}

}  // namespace detail

/// Closed form of the Kleisli lax associator from the nested composite over
/// partition p to the flat composite, with its inverse. Both sides are read as
/// planted trees and regrafted.
inline CellPair kl_associator(const Partition& p, const std::vector<Span>& chain,
                              std::optional<SetExpr> anchor = std::nullopt) {
  auto blocks = split_chain(p, chain);
  auto xs = kl_chain_objects(chain, anchor);
  std::vector<Span> outer;
  std::vector<std::size_t> starts;
  std::size_t pos = 0;
  for (const auto& blk : blocks) {
    starts.push_back(pos);
    outer.push_back(kl_compose_n(blk, xs[pos]));
    pos += blk.size();
  }
  Span from = kl_compose_n(outer, xs[0]);
  Span to = kl_compose_n(chain, xs[0]);
  const std::size_t n = chain.size(), k = blocks.size();
  std::string nm = "klxi" + p.str();
  std::vector<std::size_t> sizes = p.blocks;

  if (n == 0) {
    auto fwd = [k](const Elem& e) { return k >= 2 ? e[0] : e; };
    auto inv = [k](const Elem& x) {
      if (k < 2) return x;
      std::vector<Elem> parts{x};
      Elem cur = x;
      for (std::size_t j = 1; j < k; ++j) {
        cur = Elem::nest({cur});
        parts.push_back(cur);
      }
      return Elem::nest(std::move(parts));
    };
    return {SpanCell::make(from, to, nm, fwd), SpanCell::make(to, from, nm + "^-1", inv)};
  }

  detail::Outputs flat_out = [chain](std::size_t level, const Elem& e) {
    return chain[level - 1].right_of(e).size();
  };
  detail::Outputs outer_out = [outer](std::size_t level, const Elem& e) {
    return outer[level - 1].right_of(e).size();
  };

  auto fwd = [=](const Elem& e) {
    detail::KlTree otree = detail::decode_flat(e, k, outer_out);
    std::function<std::optional<detail::KlTree>(std::size_t, const detail::KlTree&)> convert =
        [&](std::size_t j, const detail::KlTree& node) -> std::optional<detail::KlTree> {
      if (sizes[j] == 0) {
        if (j + 1 == k) return std::nullopt;
        return convert(j + 1, node.kids.at(0));
      }
      std::size_t s = starts[j];
      detail::Outputs local = [&](std::size_t level, const Elem& el) { return flat_out(s + level, el); };
      detail::KlTree sub = detail::decode_flat(node.elem, sizes[j], local);
      if (j + 1 == k) return sub;
      std::vector<detail::KlTree*> leaves;
      detail::frontier(sub, sizes[j] - 1, leaves);
      std::size_t c = 0;
      for (auto* leaf : leaves) {
        std::size_t r = flat_out(s + sizes[j], leaf->elem);
        for (std::size_t i = 0; i < r; ++i) {
          auto t = convert(j + 1, node.kids.at(c++));
          if (t) leaf->kids.push_back(std::move(*t));
        }
      }
      return sub;
    };
    return detail::encode_flat(*convert(0, otree), n);
  };

  // Positions of the flat tree: a value of x_s together with the node of a_{s+1}
  // sitting there (absent past the last level).
  struct Pos {
    Elem value;
    const detail::KlTree* node;
  };
  auto inv = [=](const Elem& e) {
    detail::KlTree ftree = detail::decode_flat(e, n, flat_out);
    std::function<detail::KlTree(std::size_t, const Pos&)> collapse = [&](std::size_t j,
                                                                           const Pos& at) {
      detail::KlTree out;
      if (sizes[j] == 0) {
        out.elem = at.value;
        if (j + 1 < k) out.kids.push_back(collapse(j + 1, at));
        return out;
      }
      std::size_t s = starts[j];
      // Copy the block's levels of the subtree rooted at `at`.
      std::function<detail::KlTree(const detail::KlTree&, std::size_t)> cut = [&](const detail::KlTree& t,
                                                                                  std::size_t lvl) {
        detail::KlTree c{t.elem, {}};
        if (lvl < sizes[j])
          for (const auto& ch : t.kids) c.kids.push_back(cut(ch, lvl + 1));
        return c;
      };
      detail::KlTree block = cut(*at.node, 1);
      out.elem = detail::encode_flat(block, sizes[j]);
      if (j + 1 == k) return out;
      std::vector<const detail::KlTree*> leaves;
      std::function<void(const detail::KlTree&, std::size_t)> walk = [&](const detail::KlTree& t,
                                                                          std::size_t lvl) {
        if (lvl == sizes[j]) {
          leaves.push_back(&t);
          return;
        }
        for (const auto& ch : t.kids) walk(ch, lvl + 1);
      };
      walk(*at.node, 1);
      for (const auto* leaf : leaves) {
        Elem outs = chain[s + sizes[j] - 1].right_of(leaf->elem);
        for (std::size_t i = 0; i < outs.size(); ++i) {
          const detail::KlTree* child = i < leaf->kids.size() ? &leaf->kids[i] : nullptr;
          out.kids.push_back(collapse(j + 1, Pos{outs[i], child}));
        }
      }
      return out;
    };
    Pos root{chain[0].left_of(ftree.elem), &ftree};
    return detail::encode_flat(collapse(0, root), k);
  };
  return {SpanCell::make(from, to, nm, fwd), SpanCell::make(to, from, nm + "^-1", inv)};
}

/// The associator components assembled from the atoms for the partitions
/// 0+1, 1+0, 2+1 and 1+2: unit cells, nu^e, nu^m and kappa, applied pointwise.
inline SpanCell kl_associator_displayed(const Partition& p, const std::vector<Span>& chain) {
  const auto& b = p.blocks;
  auto xs = kl_chain_objects(chain, std::nullopt);
  auto blocks = split_chain(p, chain);
  std::vector<Span> outer;
  std::size_t pos = 0;
  for (const auto& blk : blocks) {
    outer.push_back(kl_compose_n(blk, xs[pos]));
    pos += blk.size();
  }
  Span from = kl_compose_n(outer, xs[0]);
  Span to = kl_compose_n(chain, xs[0]);
  std::string nm = "klxi" + p.str() + "'";
  if (b == std::vector<std::size_t>{0, 1}) {
    // (x, [alpha]): T a e_x => e_y a, then m e = 1.
    CellPair nu = nu_e_cell(chain[0]);
    return SpanCell::make(from, to, nm, [nu](const Elem& e) { return nu.inv(e); });
  }
  if (b == std::vector<std::size_t>{1, 0}) {
    // (alpha, L): T i_y => i_{Ty} by kappa for the empty chain, then m T e = 1.
    CellPair k0 = kappa_cell({}, xs[1]);
    return SpanCell::make(from, to, nm, [k0](const Elem& e) {
      k0.inv(e[1]);
      return e[0];
    });
  }
  if (b == std::vector<std::size_t>{2, 1}) {
    // ((alpha, B), L): m T^2 c => T c m through nu^m_c inverted.
    CellPair nu = nu_m_cell(chain[2]);
    Span tb = lift(chain[1]);
    return SpanCell::make(from, to, nm, [nu, tb](const Elem& e) {
      Elem shape = tb.right_of(e[0][1]);
      return Elem::nest({e[0][0], e[0][1], nu.inv(Elem::nest({shape, e[1]}))});
    });
  }
  if (b == std::vector<std::size_t>{1, 2}) {
    // (alpha, [(beta_i, C_i)]): kappa for (b, T c) inverted, then T m = m T.
    CellPair k = kappa_cell({chain[1], lift(chain[2])});
    return SpanCell::make(from, to, nm, [k](const Elem& e) {
      Elem split = k.inv(e[1]);
      return Elem::nest({e[0], split[0], split[1]});
    });
  }
  throw PartitionMismatch("no displayed component for " + p.str());
}

// Kleisli matrices x -> T y over a quantale.

inline const SetExpr& kl_target(const MatVector& r) {
  if (!r.target().is_fm()) throw ChainMismatch(r.name() + " does not land in a list set");
  return r.target().base();
}

/// Unit exactly on the pairs (x, [x]).
inline MatVector mat_kl_identity(QuantaleRef q, const SetExpr& x) {
  return embed_map(std::move(q), ListMonad::unit(x));
}

/// Kleisli convolution: r_1, T r_2, ..., T^{n-1} r_n composed and then
/// flattened.
inline MatVector mat_kl_compose_n(const std::vector<MatVector>& chain, std::optional<Bound> b = std::nullopt) {
  if (chain.empty()) throw ChainMismatch("empty Kleisli chain needs mat_kl_identity");
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    if (!(kl_target(chain[i]) == chain[i + 1].source()))
      throw ChainMismatch("position " + std::to_string(i) + " ends at " + chain[i].target().str() +
                          " but the next matrix starts at " + chain[i + 1].source().str());
  if (chain.size() == 1) return chain[0];
  std::vector<MatVector> host;
  for (std::size_t i = 0; i < chain.size(); ++i)
    host.push_back(barr_list_extension_n(chain[i], static_cast<int>(i)));
  const int n = static_cast<int>(chain.size());
  host.push_back(embed_map(chain[0].quantale(), MapF::flatten(kl_target(chain.back()), n)));
  return mat_compose_n(host, std::nullopt, b);
}

/// Nested Kleisli composite over partition p against the flat one: the lax
/// associator exists when nested <= flat; `invertible` records the converse.
struct MatAssociatorReport {
  std::optional<std::pair<Elem, Elem>> lax_violation;
  bool invertible = true;
};

inline MatAssociatorReport mat_kl_associator(const Partition& p, const std::vector<MatVector>& chain, Bound b) {
  if (p.total() != chain.size())
    throw PartitionMismatch("partition " + p.str() + " does not cover " + std::to_string(chain.size()) + " vectors");
  std::vector<MatVector> outer;
  std::size_t pos = 0;
  for (auto k : p.blocks) {
    if (k == 0) {
      const SetExpr& x = pos < chain.size() ? chain[pos].source() : kl_target(chain.back());
      outer.push_back(mat_kl_identity(chain[0].quantale(), x));
    } else {
      outer.push_back(mat_kl_compose_n({chain.begin() + pos, chain.begin() + pos + k}, b));
    }
    pos += k;
  }
  MatVector nested = mat_kl_compose_n(outer, b);
  MatVector flat = mat_kl_compose_n(chain, b);
  MatAssociatorReport r;
  r.lax_violation = mat_leq_violation(nested, flat, b);
  r.invertible = !mat_leq_violation(flat, nested, b).has_value();
  return r;
}

}  // namespace gmc
