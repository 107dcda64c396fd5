#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gmc/finset.hpp"

namespace gmc {

/// Index into the carrier of a quantale.
using V = int;

/// A finite lattice with an associative, unital tensor that is monotone and
/// preserves finite joins in each variable.
class Quantale {
 public:
  static std::shared_ptr<const Quantale> make(std::string name, std::vector<std::string> carrier,
                                              std::vector<std::vector<bool>> leq,
                                              std::vector<std::vector<V>> tensor, V unit) {
    auto q = std::make_shared<Quantale>();
    q->name_ = std::move(name);
    q->carrier_ = std::move(carrier);
    q->leq_ = std::move(leq);
    q->tensor_ = std::move(tensor);
    q->unit_ = unit;
    q->validate();
    return q;
  }

  /// The two-element lattice with meet as tensor.
  static std::shared_ptr<const Quantale> two() {
    return make("2", {"0", "1"}, {{true, true}, {false, true}}, {{0, 0}, {0, 1}}, 1);
  }

  /// The chain 0 < h < 1 with truncated addition a + b - 1.
  static std::shared_ptr<const Quantale> lukasiewicz3() {
    std::vector<std::vector<bool>> leq(3, std::vector<bool>(3));
    std::vector<std::vector<V>> t(3, std::vector<V>(3));
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        leq[a][b] = a <= b;
        t[a][b] = std::max(0, a + b - 2);
      }
    return make("L3", {"0", "h", "1"}, leq, t, 2);
  }

  const std::string& name() const { return name_; }
  std::size_t size() const { return carrier_.size(); }
  const std::string& label(V v) const { return carrier_.at(v); }
  V index(const std::string& s) const {
    for (std::size_t i = 0; i < carrier_.size(); ++i)
      if (carrier_[i] == s) return static_cast<V>(i);
    throw QuantaleError("no value " + s + " in " + name_);
  }
  bool leq(V a, V b) const { return leq_[a][b]; }
  V tensor(V a, V b) const { return tensor_[a][b]; }
  V join(V a, V b) const { return join_[a][b]; }
  V unit() const { return unit_; }
  V bottom() const { return bottom_; }
  V top() const { return top_; }

 private:
  void validate() {
    const std::size_t n = carrier_.size();
    if (n == 0) throw QuantaleError(name_ + " has an empty carrier");
    if (leq_.size() != n || tensor_.size() != n)
      throw QuantaleError(name_ + ": tables do not match the carrier");
    for (std::size_t i = 0; i < n; ++i)
      if (leq_[i].size() != n || tensor_[i].size() != n)
        throw QuantaleError(name_ + ": tables do not match the carrier");
    auto nm = [&](std::size_t i) { return carrier_[i]; };
    for (std::size_t a = 0; a < n; ++a) {
      if (!leq_[a][a]) throw QuantaleError(name_ + ": order is not reflexive at " + nm(a));
      for (std::size_t b = 0; b < n; ++b) {
        if (a != b && leq_[a][b] && leq_[b][a])
          throw QuantaleError(name_ + ": order is not antisymmetric at " + nm(a) + ", " + nm(b));
        if (tensor_[a][b] < 0 || static_cast<std::size_t>(tensor_[a][b]) >= n)
          throw QuantaleError(name_ + ": tensor leaves the carrier");
        for (std::size_t c = 0; c < n; ++c)
          if (leq_[a][b] && leq_[b][c] && !leq_[a][c])
            throw QuantaleError(name_ + ": order is not transitive at " + nm(a) + ", " + nm(b) + ", " + nm(c));
      }
    }
    if (unit_ < 0 || static_cast<std::size_t>(unit_) >= n) throw QuantaleError(name_ + ": unit outside carrier");
    join_.assign(n, std::vector<V>(n, -1));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        int best = -1;
        for (std::size_t c = 0; c < n; ++c) {
          if (!leq_[a][c] || !leq_[b][c]) continue;
          if (best < 0 || leq_[c][best]) best = static_cast<int>(c);
        }
        for (std::size_t c = 0; c < n; ++c)
          if (best >= 0 && leq_[a][c] && leq_[b][c] && !leq_[best][c]) best = -1;
        if (best < 0) throw QuantaleError(name_ + ": no join of " + nm(a) + " and " + nm(b));
        join_[a][b] = best;
      }
    bottom_ = 0;
    top_ = 0;
    for (std::size_t a = 1; a < n; ++a) {
      bottom_ = leq_[a][bottom_] ? static_cast<V>(a) : bottom_;
      top_ = leq_[top_][a] ? static_cast<V>(a) : top_;
    }
    for (std::size_t a = 0; a < n; ++a)
      if (!leq_[bottom_][a] || !leq_[a][top_]) throw QuantaleError(name_ + " is not bounded");
    for (std::size_t a = 0; a < n; ++a) {
      if (tensor_[unit_][a] != static_cast<V>(a) || tensor_[a][unit_] != static_cast<V>(a))
        throw QuantaleError(name_ + ": unit law fails at " + nm(a));
      if (tensor_[a][bottom_] != bottom_ || tensor_[bottom_][a] != bottom_)
        throw QuantaleError(name_ + ": tensor does not preserve the empty join at " + nm(a));
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c) {
          if (tensor_[tensor_[a][b]][c] != tensor_[a][tensor_[b][c]])
            throw QuantaleError(name_ + ": tensor is not associative at " + nm(a) + ", " + nm(b) + ", " + nm(c));
          if (tensor_[a][join_[b][c]] != join_[tensor_[a][b]][tensor_[a][c]] ||
              tensor_[join_[b][c]][a] != join_[tensor_[b][a]][tensor_[c][a]])
            throw QuantaleError(name_ + ": tensor does not distribute over the join of " + nm(b) + " and " +
                                nm(c) + " at " + nm(a));
        }
    }
  }

  std::string name_;
  std::vector<std::string> carrier_;
  std::vector<std::vector<bool>> leq_;
  std::vector<std::vector<V>> tensor_;
  std::vector<std::vector<V>> join_;
  V unit_ = 0, bottom_ = 0, top_ = 0;
};

using QuantaleRef = std::shared_ptr<const Quantale>;

/// Non-bottom entries of one row of a matrix.
using Row = std::vector<std::pair<Elem, V>>;

/// A V-valued matrix between sets: a finite table, or an entry predicate with
/// optional row enumeration and an optional check bound.
class MatVector {
 public:
  using Entry = std::function<V(const Elem&, const Elem&)>;
  using RowFn = std::function<Row(const Elem&)>;

  MatVector() = default;

  static MatVector table(QuantaleRef q, const SetExpr& source, const SetExpr& target,
                         const std::vector<std::tuple<Elem, Elem, V>>& entries, std::string name = "") {
    if (!source.is_fin() || !target.is_fin())
      throw DomainError("table matrices need finite ends, got " + source.str() + " and " + target.str());
    return listed(q, source, target, entries, std::move(name), true);
  }

  /// Finitely many listed non-bottom entries between arbitrary ends.
  static MatVector sparse(QuantaleRef q, const SetExpr& source, const SetExpr& target,
                          const std::vector<std::tuple<Elem, Elem, V>>& entries, std::string name = "") {
    return listed(q, source, target, entries, std::move(name), false);
  }

  static MatVector listed(QuantaleRef q, const SetExpr& source, const SetExpr& target,
                          const std::vector<std::tuple<Elem, Elem, V>>& entries, std::string name,
                          bool is_table) {
    auto rows = std::make_shared<std::map<Elem, std::map<Elem, V>>>();
    for (const auto& [x, y, v] : entries) {
      if (!source.contains(x)) throw DomainError(x.str() + " is not in " + source.str());
      if (!target.contains(y)) throw DomainError(y.str() + " is not in " + target.str());
      if (v < 0 || static_cast<std::size_t>(v) >= q->size()) throw QuantaleError("entry outside " + q->name());
      (*rows)[x][y] = v;
    }
    V bot = q->bottom();
    MatVector m;
    m.q_ = q;
    m.source_ = source;
    m.target_ = target;
    m.is_table_ = is_table;
    m.name_ = name.empty() ? "M" : std::move(name);
    m.entry_ = [rows, bot](const Elem& x, const Elem& y) {
      auto r = rows->find(x);
      if (r == rows->end()) return bot;
      auto c = r->second.find(y);
      return c == r->second.end() ? bot : c->second;
    };
    m.row_ = [rows, bot](const Elem& x) {
      Row out;
      auto r = rows->find(x);
      if (r != rows->end())
        for (const auto& [y, v] : r->second)
          if (v != bot) out.emplace_back(y, v);
      return out;
    };
    return m;
  }

  /// Relation over a quantale: listed pairs get the top value.
  static MatVector relation(QuantaleRef q, const SetExpr& source, const SetExpr& target,
                            const std::vector<std::pair<Elem, Elem>>& pairs, std::string name = "") {
    std::vector<std::tuple<Elem, Elem, V>> es;
    for (const auto& [x, y] : pairs) es.emplace_back(x, y, q->top());
    return table(q, source, target, es, std::move(name));
  }

  static MatVector pred(QuantaleRef q, const SetExpr& source, const SetExpr& target, std::string name,
                        Entry entry, std::optional<Bound> check_bound = std::nullopt,
                        RowFn row = nullptr) {
    MatVector m;
    m.q_ = std::move(q);
    m.source_ = source;
    m.target_ = target;
    m.name_ = std::move(name);
    m.entry_ = std::move(entry);
    m.row_ = std::move(row);
    m.bound_ = check_bound;
    return m;
  }

  const QuantaleRef& quantale() const { return q_; }
  const SetExpr& source() const { return source_; }
  const SetExpr& target() const { return target_; }
  const std::string& name() const { return name_; }
  bool is_table() const { return is_table_; }
  std::optional<Bound> check_bound() const { return bound_; }

  V operator()(const Elem& x, const Elem& y) const {
    if (!source_.contains(x)) throw DomainError(x.str() + " is not in " + source_.str());
    if (!target_.contains(y)) throw DomainError(y.str() + " is not in " + target_.str());
    return entry_(x, y);
  }
  V at(const Elem& x, const Elem& y) const { return entry_(x, y); }

  bool has_rows() const { return row_ != nullptr || target_.is_fin(); }

  /// Non-bottom entries of row x; targets are enumerated up to `b` when the
  /// matrix has no row function.
  Row row(const Elem& x, std::optional<Bound> b = std::nullopt) const {
    if (row_) return row_(x);
    std::optional<Bound> use = b ? b : bound_;
    if (!target_.is_fin() && !use)
      throw UnboundedComposite("rows of " + name_ + " over " + target_.str() + " need a bound");
    Row out;
    for (const auto& y : target_.is_fin() ? target_.elements() : target_.enumerate(*use)) {
      V v = entry_(x, y);
      if (v != q_->bottom()) out.emplace_back(y, v);
    }
    return out;
  }

 private:
  QuantaleRef q_;
  SetExpr source_, target_;
  std::string name_;
  Entry entry_;
  RowFn row_;
  std::optional<Bound> bound_;
  bool is_table_ = false;
};

/// Unit on the diagonal, bottom elsewhere.
inline MatVector mat_identity(QuantaleRef q, const SetExpr& x) {
  V u = q->unit(), bot = q->bottom();
  return MatVector::pred(
      q, x, x, "i" + x.str(), [u, bot](const Elem& a, const Elem& b) { return a == b ? u : bot; },
      std::nullopt, [u](const Elem& a) { return Row{{a, u}}; });
}

/// Unit on pairs (x, f x).
inline MatVector embed_map(QuantaleRef q, const MapF& f) {
  V u = q->unit(), bot = q->bottom();
  return MatVector::pred(
      q, f.dom(), f.cod(), "emb(" + f.key() + ")",
      [f, u, bot](const Elem& a, const Elem& b) { return f.apply(a) == b ? u : bot; }, std::nullopt,
      [f, u](const Elem& a) { return Row{{f.apply(a), u}}; });
}

/// Unit on pairs (f x, x).
inline MatVector mat_star(QuantaleRef q, const MapF& f, std::optional<Bound> b = std::nullopt) {
  V u = q->unit(), bot = q->bottom();
  return MatVector::pred(
      q, f.cod(), f.dom(), "star(" + f.key() + ")",
      [f, u, bot](const Elem& a, const Elem& x) { return f.apply(x) == a ? u : bot; }, b,
      [f, u, b](const Elem& a) {
        Row out;
        for (auto& x : f.preimage(a, b)) out.emplace_back(std::move(x), u);
        return out;
      });
}

namespace detail {

/// Sparse row of the composite: joins of tensors along all paths from x.
inline Row propagate(const std::vector<MatVector>& chain, const Elem& x, std::optional<Bound> b) {
  const Quantale& q = *chain[0].quantale();
  std::map<Elem, V> cur{{x, q.unit()}};
  for (const auto& m : chain) {
    std::map<Elem, V> next;
    for (const auto& [z, v] : cur)
      for (const auto& [y, w] : m.row(z, b)) {
        V t = q.tensor(v, w);
        if (t == q.bottom()) continue;
        auto [it, fresh] = next.emplace(y, t);
        if (!fresh) it->second = q.join(it->second, t);
      }
    cur = std::move(next);
  }
  return Row(cur.begin(), cur.end());
}

}  // namespace detail

/// (a_1 ... a_n)(x, y) = join over intermediate tuples of the tensor of
/// entries. Tables compose to a table.
inline MatVector mat_compose_n(const std::vector<MatVector>& chain,
                               std::optional<SetExpr> anchor = std::nullopt,
                               std::optional<Bound> b = std::nullopt) {
  if (chain.empty()) {
    throw ChainMismatch("empty matrix chain needs an anchoring object and a quantale");
  }
  if (anchor && !(chain.front().source() == *anchor))
    throw ChainMismatch("chain does not start at " + anchor->str());
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (!(chain[i].target() == chain[i + 1].source()))
      throw ChainMismatch("position " + std::to_string(i) + " ends at " + chain[i].target().str() +
                          " but the next matrix starts at " + chain[i + 1].source().str());
    if (chain[i].quantale() != chain[i + 1].quantale()) throw ChainMismatch("matrices over different quantales");
  }
  if (chain.size() == 1) return chain[0];
  std::optional<Bound> use = b;
  for (const auto& m : chain)
    if (m.check_bound()) use = use ? std::min(*use, *m.check_bound()) : *m.check_bound();
  for (std::size_t i = 0; i + 1 < chain.size(); ++i)
    if (!chain[i].has_rows() && !use)
      throw UnboundedComposite("intermediate " + chain[i].target().str() + " has no bound");
  std::string nm = "(";
  for (std::size_t i = 0; i < chain.size(); ++i) nm += (i ? " ; " : "") + chain[i].name();
  nm += ")";
  QuantaleRef q = chain[0].quantale();
  bool tables = true;
  for (const auto& m : chain) tables = tables && m.is_table();
  if (tables) {
    std::vector<std::tuple<Elem, Elem, V>> es;
    for (const auto& x : chain.front().source().elements())
      for (const auto& [y, v] : detail::propagate(chain, x, use)) es.emplace_back(x, y, v);
    return MatVector::table(q, chain.front().source(), chain.back().target(), es, nm);
  }
  auto cache = std::make_shared<std::pair<std::mutex, std::unordered_map<Elem, Row, ElemHash>>>();
  auto row = [chain, use, cache](const Elem& x) {
    {
      std::lock_guard<std::mutex> lock(cache->first);
      auto it = cache->second.find(x);
      if (it != cache->second.end()) return it->second;
    }
    Row r = detail::propagate(chain, x, use);
    std::lock_guard<std::mutex> lock(cache->first);
    cache->second.emplace(x, r);
    return r;
  };
  V bot = q->bottom();
  auto entry = [row, bot](const Elem& x, const Elem& y) {
    for (const auto& [z, v] : row(x))
      if (z == y) return v;
    return bot;
  };
  return MatVector::pred(q, chain.front().source(), chain.back().target(), nm, entry, use, row);
}

/// T r(u, v) = tensor of r(u_i, v_i) when the lengths agree, bottom otherwise.
inline MatVector barr_list_extension(const MatVector& r) {
  QuantaleRef q = r.quantale();
  V bot = q->bottom(), u = q->unit();
  auto entry = [r, q, bot, u](const Elem& a, const Elem& b) {
    if (a.size() != b.size()) return bot;
    V acc = u;
    for (std::size_t i = 0; i < a.size() && acc != bot; ++i) acc = q->tensor(acc, r.at(a[i], b[i]));
    return acc;
  };
  auto row = [r, q, u](const Elem& a) {
    Row acc{{Elem::list(), u}};
    for (const auto& ai : a.kids()) {
      Row next;
      Row ri = r.row(ai);
      for (const auto& [prefix, v] : acc)
        for (const auto& [y, w] : ri) {
          V t = q->tensor(v, w);
          if (t == q->bottom()) continue;
          auto ks = prefix.kid_vector();
          ks.push_back(y);
          next.emplace_back(Elem::nest(std::move(ks)), t);
        }
      acc = std::move(next);
    }
    return acc;
  };
  return MatVector::pred(q, SetExpr::fm(r.source()), SetExpr::fm(r.target()), "T" + r.name(), entry,
                         r.check_bound(), r.has_rows() ? MatVector::RowFn(row) : nullptr);
}

inline MatVector barr_list_extension_n(const MatVector& r, int k) {
  MatVector m = r;
  for (int i = 0; i < k; ++i) m = barr_list_extension(m);
  return m;
}

/// First pair (x, y) with x in the source within the bound and from(x, y) not
/// below to(x, y). Only non-bottom entries of `from` can fail.
inline std::optional<std::pair<Elem, Elem>> mat_leq_violation(const MatVector& from, const MatVector& to,
                                                             Bound b) {
  const Quantale& q = *from.quantale();
  for (const auto& x : from.source().is_fin() ? from.source().elements() : from.source().enumerate(b))
    for (const auto& [y, v] : from.row(x, b)) {
      if (!from.target().within(y, b)) continue;
      if (!q.leq(v, to.at(x, y))) return std::make_pair(x, y);
    }
  return std::nullopt;
}

inline std::optional<std::pair<Elem, Elem>> mat_equal_violation(const MatVector& a, const MatVector& c, Bound b) {
  if (auto w = mat_leq_violation(a, c, b)) return w;
  return mat_leq_violation(c, a, b);
}

}  // namespace gmc
