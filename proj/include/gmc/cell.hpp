#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gmc/span.hpp"

namespace gmc {

/// A 2-cell between spans with the same ends: a map of apexes commuting with
/// both legs.
class SpanCell {
 public:
  using Fn = std::function<Elem(const Elem&)>;

  SpanCell() = default;

  /// Checked construction: ends must agree, and every element of `from`
  /// within the check bound must land in `to` with unchanged leg values.
  static SpanCell make(const Span& from, const Span& to, std::string name, Fn map,
                       Bound check = kDefaultCheckBound) {
    SpanCell c = unchecked(from, to, std::move(name), std::move(map));
    if (auto w = c.leg_violation(check)) throw CellError(c.name_ + " breaks leg commutation at " + w->str());
    return c;
  }

  /// Construction for cells obtained from checked cells by the cell operations.
  static SpanCell unchecked(const Span& from, const Span& to, std::string name, Fn map) {
    if (!(from.source() == to.source()) || !(from.target() == to.target()))
      throw BoundaryMismatch(name + ": " + from.sig() + " and " + to.sig() + " have different ends");
    SpanCell c;
    c.from_ = from;
    c.to_ = to;
    c.name_ = std::move(name);
    c.fn_ = std::make_shared<Fn>(std::move(map));
    return c;
  }

  const Span& from() const { return from_; }
  const Span& to() const { return to_; }
  const std::string& name() const { return name_; }
  Elem operator()(const Elem& e) const { return (*fn_)(e); }

  /// The apex map as a MapF.
  MapF map() const {
    auto f = fn_;
    return MapF::fn(SetExpr::any(from_.sig()), SetExpr::any(to_.sig()), name_,
                    [f](const Elem& e) { return (*f)(e); });
  }

  /// First element within the bound whose image is not an element of `to`
  /// over the same boundary values.
  std::optional<Elem> leg_violation(Bound b) const {
    for (const auto& e : from_.enumerate(b)) {
      Elem img;
      try {
        img = (*fn_)(e);
      } catch (const error&) {
        return e;
      }
      if (!to_.contains(img)) return e;
      if (!(to_.left_of(img) == from_.left_of(e)) || !(to_.right_of(img) == from_.right_of(e)))
        return e;
    }
    return std::nullopt;
  }

 private:
  Span from_, to_;
  std::string name_;
  std::shared_ptr<Fn> fn_;
};

struct CellPair {
  SpanCell fwd;
  SpanCell inv;
};

inline SpanCell identity_cell(const Span& a) {
  return SpanCell::unchecked(a, a, "1", [](const Elem& e) { return e; });
}

/// c1 then c2.
inline SpanCell vertical_compose(const SpanCell& c1, const SpanCell& c2) {
  if (!same_span(c1.to(), c2.from()))
    throw BoundaryMismatch(c1.name() + " ends at " + c1.to().sig() + " but " + c2.name() +
                           " starts at " + c2.from().sig());
  return SpanCell::unchecked(c1.from(), c2.to(), c2.name() + "." + c1.name(),
                             [c1, c2](const Elem& e) { return c2(c1(e)); });
}

inline SpanCell vertical_compose(const std::vector<SpanCell>& cells) {
  if (cells.empty()) throw BoundaryMismatch("empty vertical composite");
  SpanCell c = cells[0];
  for (std::size_t i = 1; i < cells.size(); ++i) c = vertical_compose(c, cells[i]);
  return c;
}

/// Side-by-side composite of cells along a chain.
inline SpanCell hcompose(const std::vector<SpanCell>& cells) {
  if (cells.empty()) throw ChainMismatch("empty horizontal composite");
  if (cells.size() == 1) return cells[0];
  std::vector<Span> from, to;
  std::string nm = "(";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    from.push_back(cells[i].from());
    to.push_back(cells[i].to());
    nm += (i ? " * " : "") + cells[i].name();
  }
  nm += ")";
  return SpanCell::unchecked(compose_n(from), compose_n(to), nm, [cells](const Elem& e) {
    std::vector<Elem> out;
    out.reserve(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) out.push_back(cells[i](e[i]));
    return Elem::nest(std::move(out));
  });
}

/// The cell at position `pos` of a chain, identities elsewhere.
inline SpanCell whisker(const std::vector<Span>& chain, std::size_t pos, const SpanCell& cell) {
  if (pos >= chain.size() || !same_span(chain[pos], cell.from()))
    throw BoundaryMismatch("whisker position does not hold " + cell.from().sig());
  std::vector<SpanCell> cells;
  for (std::size_t i = 0; i < chain.size(); ++i)
    cells.push_back(i == pos ? cell : identity_cell(chain[i]));
  return hcompose(cells);
}

/// T on cells: apply the map to every list entry.
inline SpanCell lift_cell(const SpanCell& c) {
  return SpanCell::unchecked(lift(c.from()), lift(c.to()), "T" + c.name(), [c](const Elem& e) {
    std::vector<Elem> out;
    out.reserve(e.size());
    for (const auto& k : e.kids()) out.push_back(c(k));
    return Elem::nest(std::move(out));
  });
}

inline SpanCell lift_cell_n(const SpanCell& c, int k) {
  SpanCell d = c;
  for (int i = 0; i < k; ++i) d = lift_cell(d);
  return d;
}

/// A cell between spans whose leg on `side` is followed by g.
inline SpanCell post_leg_cell(const SpanCell& c, Side side, const MapF& g) {
  return SpanCell::unchecked(post_leg(c.from(), side, g), post_leg(c.to(), side, g), c.name(),
                             [c](const Elem& e) { return c(e); });
}

struct CellComparison {
  bool equal = true;
  std::optional<Elem> witness;
  std::size_t checked = 0;
};

/// Pointwise comparison on the elements of the common source within the bound.
inline CellComparison equality(const SpanCell& c1, const SpanCell& c2, Bound b) {
  if (!same_span(c1.from(), c2.from()) || !same_span(c1.to(), c2.to()))
    throw BoundaryMismatch(c1.name() + " and " + c2.name() + " have different boundaries");
  CellComparison r;
  for (const auto& e : c1.from().enumerate(b)) {
    ++r.checked;
    if (!(c1(e) == c2(e))) {
      r.equal = false;
      r.witness = e;
      return r;
    }
  }
  return r;
}

/// Whether fwd and inv are mutually inverse on both sides within the bound;
/// returns the first element where a round trip fails.
inline std::optional<Elem> inverse_violation(const SpanCell& fwd, const SpanCell& inv, Bound b) {
  std::optional<Elem> found;
  for (const auto& e : fwd.from().elements(b))
    if (!(inv(fwd(e)) == e) && (!found || e < *found)) found = e;
  if (found) return found;
  for (const auto& e : inv.from().elements(b))
    if (!(fwd(inv(e)) == e) && (!found || e < *found)) found = e;
  return found;
}

/// Sizes of consecutive blocks of a chain.
struct Partition {
  std::vector<std::size_t> blocks;

  std::size_t total() const {
    std::size_t t = 0;
    for (auto k : blocks) t += k;
    return t;
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < blocks.size(); ++i) s += (i ? "," : "") + std::to_string(blocks[i]);
    return s + ")";
  }
};

/// Objects x_0..x_n along a chain; x_0 = anchor when the chain is empty.
inline std::vector<SetExpr> chain_objects(const std::vector<Span>& chain,
                                          const std::optional<SetExpr>& anchor) {
  std::vector<SetExpr> xs;
  if (chain.empty()) {
    if (!anchor) throw ChainMismatch("empty chain needs an anchoring object");
    return {*anchor};
  }
  xs.push_back(chain[0].source());
  for (const auto& a : chain) xs.push_back(a.target());
  return xs;
}

inline std::vector<std::vector<Span>> split_chain(const Partition& p, const std::vector<Span>& chain) {
  if (p.total() != chain.size())
    throw PartitionMismatch("partition " + p.str() + " of a chain of length " +
                            std::to_string(chain.size()));
  std::vector<std::vector<Span>> out;
  std::size_t pos = 0;
  for (auto k : p.blocks) {
    out.emplace_back(chain.begin() + pos, chain.begin() + pos + k);
    pos += k;
  }
  return out;
}

/// The composite of the composites of the blocks.
inline Span nested_composite(const Partition& p, const std::vector<Span>& chain,
                             const std::optional<SetExpr>& anchor = std::nullopt) {
  auto blocks = split_chain(p, chain);
  auto xs = chain_objects(chain, anchor);
  std::vector<Span> outer;
  std::size_t pos = 0;
  for (const auto& blk : blocks) {
    outer.push_back(compose_n(blk, xs[pos]));
    pos += blk.size();
  }
  return compose_n(outer, xs[0]);
}

namespace detail {

/// Identity values at the object positions of a flat chain element.
inline Elem object_value_at(const std::vector<Span>& chain, const std::vector<Elem>& parts,
                            std::size_t pos, const Elem& whole) {
  if (chain.empty()) return whole;
  if (pos > 0) return chain[pos - 1].right_of(parts[pos - 1]);
  return chain[0].left_of(parts[0]);
}

}  // namespace detail

/// The invertible cell from the nested composite of the blocks to the flat
/// composite, with its inverse.
inline CellPair associator(const Partition& p, const std::vector<Span>& chain,
                           std::optional<SetExpr> anchor = std::nullopt) {
  auto blocks = split_chain(p, chain);
  Span from = nested_composite(p, chain, anchor);
  auto xs = chain_objects(chain, anchor);
  Span to = compose_n(chain, xs[0]);
  const std::size_t k = p.blocks.size();
  const std::size_t n = chain.size();
  std::vector<std::size_t> sizes = p.blocks;

  auto flatten = [k, n, sizes](const Elem& e) {
    auto outer = components(k, e);
    std::vector<Elem> flat;
    for (std::size_t j = 0; j < k; ++j) {
      auto inner = components(sizes[j], outer[j]);
      flat.insert(flat.end(), inner.begin(), inner.end());
    }
    if (n == 0) return k == 0 ? e : outer[0];
    return from_components(std::move(flat));
  };
  auto nest = [k, n, sizes, chain](const Elem& e) {
    auto flat = components(n, e);
    std::vector<Elem> outer;
    std::size_t pos = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (sizes[j] == 0) {
        outer.push_back(detail::object_value_at(chain, flat, pos, e));
        continue;
      }
      std::vector<Elem> inner(flat.begin() + pos, flat.begin() + pos + sizes[j]);
      outer.push_back(from_components(std::move(inner)));
      pos += sizes[j];
    }
    if (k == 0) return e;
    return from_components(std::move(outer));
  };
  std::string nm = "xi" + p.str();
  return {SpanCell::make(from, to, nm, flatten), SpanCell::make(to, from, nm + "^-1", nest)};
}

}  // namespace gmc

namespace gmc {

/// A partition of a chain into blocks, each block further partitioned.
struct Refinement {
  Partition coarse;              // block sizes N_j
  std::vector<Partition> inner;  // partition of block j
  Partition fine;                // all sub-block sizes in order
  Partition groups;              // number of sub-blocks per block

  std::string str() const {
    std::string s = "[";
    for (std::size_t j = 0; j < inner.size(); ++j) s += (j ? " " : "") + inner[j].str();
    return s + "]";
  }
};

/// All refinements of chains of length n with at most `max_parts` sub-blocks
/// and at most `max_parts` blocks.
inline std::vector<Refinement> refinements(std::size_t n, std::size_t max_parts) {
  std::vector<Refinement> out;
  std::vector<std::size_t> fine;
  std::function<void(std::size_t)> fines = [&](std::size_t left) {
    if (fine.size() <= max_parts && left == 0) {
      // group fine into k consecutive groups, empty groups allowed
      for (std::size_t k = 1; k <= max_parts; ++k) {
        std::vector<std::size_t> groups;
        std::function<void(std::size_t)> grp = [&](std::size_t rem) {
          if (groups.size() == k) {
            if (rem != 0) return;
            Refinement r;
            r.fine.blocks = fine;
            r.groups.blocks = groups;
            std::size_t pos = 0;
            for (auto g : groups) {
              Partition p;
              p.blocks.assign(fine.begin() + pos, fine.begin() + pos + g);
              pos += g;
              r.coarse.blocks.push_back(p.total());
              r.inner.push_back(p);
            }
            out.push_back(std::move(r));
            return;
          }
          for (std::size_t g = 0; g <= rem; ++g) {
            groups.push_back(g);
            grp(rem - g);
            groups.pop_back();
          }
        };
        grp(fine.size());
      }
    }
    if (fine.size() == max_parts) return;
    for (std::size_t s = 0; s <= left; ++s) {
      fine.push_back(s);
      fines(left - s);
      fine.pop_back();
    }
  };
  fines(n);
  return out;
}

}  // namespace gmc
