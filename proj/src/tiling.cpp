#include "kirchhoff/tiling.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

namespace kirchhoff {

namespace {

void require_same_system(const VectorGraph& a, const VectorGraph& b) {
  if (!(a.system() == b.system())) {
    throw TilingError(TilingError::Kind::system_mismatch, "graphs belong to different row systems");
  }
}

bool contains_at(const VectorGraph& host, const VectorGraph& anchored_pattern) {
  for (const auto& [key, count] : anchored_pattern.edge_map()) {
    if (host.edge_count(key.tail, key.vec_index) < count) return false;
  }
  return true;
}

TilingStep finish(VectorGraph g) {
  TilingStep step{std::move(g), {}, false};
  step.verdict = is_kirchhoff(step.graph);
  step.vector_2_connected = is_vector_2_connected(step.graph);
  return step;
}

}  // namespace

// ---------------------------------------------------------------------------
// Expressions

std::string to_string(const TilingExpression& expr) {
  std::ostringstream os;
  const auto& ps = expr.placements;
  for (std::size_t i = 0; i < ps.size();) {
    std::size_t j = i + 1;
    while (j < ps.size() && ps[j] == ps[i]) ++j;
    if (i == 0) {
      if (ps[i].sign < 0) os << '-';
    } else {
      os << (ps[i].sign < 0 ? " - " : " + ");
    }
    os << (j - i) << "*G" << ps[i].graph << '@' << to_string(ps[i].offset);
    i = j;
  }
  return os.str();
}

namespace {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, std::size_t k) : text_(text), k_(k) {}

  TilingExpression parse() {
    TilingExpression expr;
    skip_space();
    int sign = 1;
    if (peek('+') || peek('-')) sign = take() == '-' ? -1 : 1;
    while (true) {
      term(sign, expr);
      skip_space();
      if (pos_ == text_.size()) break;
      if (!peek('+') && !peek('-')) fail("expected '+' or '-'");
      sign = take() == '-' ? -1 : 1;
    }
    return expr;
  }

 private:
  void term(int sign, TilingExpression& expr) {
    skip_space();
    std::int64_t coeff = 1;
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      coeff = integer();
      skip_space();
      if (!peek('*')) fail("expected '*' after coefficient");
      take();
      skip_space();
    }
    if (!peek('G')) fail("expected graph reference 'G<index>'");
    take();
    const std::int64_t index = integer();
    if (index < 0) fail("graph index must be nonnegative");
    Coordinate offset = Coordinate::origin(k_);
    skip_space();
    if (peek('@')) {
      take();
      skip_space();
      if (!peek('(')) fail("expected '(' after '@'");
      take();
      offset.components.clear();
      while (true) {
        skip_space();
        offset.components.push_back(integer());
        skip_space();
        if (peek(',')) {
          take();
          continue;
        }
        if (!peek(')')) fail("expected ',' or ')'");
        take();
        break;
      }
      if (offset.size() != k_) fail("offset has the wrong number of coordinates");
    }
    if (coeff < 1) fail("coefficient must be positive");
    for (std::int64_t c = 0; c < coeff; ++c) {
      expr.placements.push_back(Placement{static_cast<std::size_t>(index), offset, sign});
    }
  }

  std::int64_t integer() {
    std::size_t start = pos_;
    if (peek('-') || peek('+')) ++pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::int64_t value = 0;
    const char* first = text_.data() + start + (text_[start] == '+' ? 1 : 0);
    auto [ptr, ec] = std::from_chars(first, text_.data() + pos_, value);
    if (ec != std::errc() || ptr != text_.data() + pos_ || pos_ == start) fail("expected integer");
    return value;
  }

  bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }
  char take() { return text_[pos_++]; }
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << msg << " at position " << pos_ << " in \"" << text_ << '"';
    throw TilingError(TilingError::Kind::parse_error, os.str());
  }

  std::string_view text_;
  std::size_t k_;
  std::size_t pos_ = 0;
};

}  // namespace

TilingExpression parse_tiling_expression(std::string_view text, std::size_t k) {
  return ExpressionParser(text, k).parse();
}

VectorGraph evaluate(const TilingExpression& expr, std::span<const VectorGraph> graphs) {
  if (graphs.empty()) throw TilingError(TilingError::Kind::unknown_graph, "no graphs to tile");
  std::vector<std::optional<VectorGraph>> canonical(graphs.size());
  VectorGraph acc(graphs.front().system_ref());
  for (std::size_t step = 0; step < expr.placements.size(); ++step) {
    const Placement& p = expr.placements[step];
    if (p.graph >= graphs.size()) {
      throw TilingError(TilingError::Kind::unknown_graph,
                        "unknown graph G" + std::to_string(p.graph), step);
    }
    require_same_system(acc, graphs[p.graph]);
    if (!canonical[p.graph]) canonical[p.graph] = canonicalize(graphs[p.graph]);
    const VectorGraph placed = canonical[p.graph]->translated(p.offset);
    if (p.sign > 0) {
      for (const auto& [key, count] : placed.edge_map()) acc.add_edge(key.tail, key.vec_index, count);
    } else {
      if (!contains_at(acc, placed)) {
        throw TilingError(TilingError::Kind::no_embedding_at_offset,
                          "no copy of G" + std::to_string(p.graph) + " at " +
                              to_string(p.offset) + " (step " + std::to_string(step + 1) + ")",
                          step);
      }
      for (const auto& [key, count] : placed.edge_map()) {
        acc.remove_edge(key.tail, key.vec_index, count);
      }
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Sum, difference, embeddings

TilingStep add(const VectorGraph& g1, const VectorGraph& g2, const Coordinate& x) {
  require_same_system(g1, g2);
  VectorGraph out = g1;
  const VectorGraph placed = canonicalize(g2).translated(x);
  for (const auto& [key, count] : placed.edge_map()) {
    out.add_edge(key.tail, key.vec_index, count);
  }
  return finish(std::move(out));
}

TilingStep subtract(const VectorGraph& g1, const VectorGraph& g2, const Coordinate& x) {
  require_same_system(g1, g2);
  const VectorGraph placed = canonicalize(g2).translated(x);
  if (!contains_at(g1, placed)) {
    throw TilingError(TilingError::Kind::no_embedding_at_offset,
                      "no copy of the subtrahend anchored at " + to_string(x));
  }
  VectorGraph out = g1;
  for (const auto& [key, count] : placed.edge_map()) out.remove_edge(key.tail, key.vec_index, count);
  return finish(std::move(out));
}

std::vector<Coordinate> find_embeddings(const VectorGraph& host, const VectorGraph& pattern) {
  require_same_system(host, pattern);
  const VectorGraph anchored = canonicalize(pattern);
  if (anchored.empty()) return {Coordinate::origin(host.system().k())};
  const auto& first = anchored.edge_map().begin()->first;
  std::set<Coordinate> offsets;
  for (const auto& [key, count] : host.edge_map()) {
    if (key.vec_index != first.vec_index) continue;
    const Coordinate x = key.tail - first.tail;
    if (!offsets.count(x) && contains_at(host, anchored.translated(x))) offsets.insert(x);
  }
  return {offsets.begin(), offsets.end()};
}

// ---------------------------------------------------------------------------
// Primality

const char* to_string(PrimalityVerdict::Status status) {
  switch (status) {
    case PrimalityVerdict::Status::prime: return "prime";
    case PrimalityVerdict::Status::composite: return "composite";
    case PrimalityVerdict::Status::unknown: return "unknown";
  }
  return "unknown";
}

namespace {

// Splits the edge multiset into parts A and B group by group. Groups are
// ordered so vertices become fully assigned early; once a vertex is, A's cut
// there must lie in the row space (B's cut is the remainder, so it follows).
class BipartitionSearch {
 public:
  BipartitionSearch(const VectorGraph& g, std::uint64_t budget) : g_(g), budget_(budget) {
    const std::vector<Coordinate> verts = g.vertices();
    std::map<Coordinate, std::size_t> index;
    for (std::size_t i = 0; i < verts.size(); ++i) index.emplace(verts[i], i);
    verts_ = verts;

    std::vector<VectorGraph::Edge> all = g.edges();
    std::vector<bool> taken(all.size(), false);
    std::vector<std::vector<std::size_t>> incident(verts.size());
    for (std::size_t e = 0; e < all.size(); ++e) {
      incident[index.at(all[e].instance.tail)].push_back(e);
      incident[index.at(all[e].instance.head)].push_back(e);
    }
    for (std::size_t v = 0; v < verts.size(); ++v) {
      for (std::size_t e : incident[v]) {
        if (taken[e]) continue;
        taken[e] = true;
        groups_.push_back(Group{all[e].instance, all[e].count, index.at(all[e].instance.tail),
                                index.at(all[e].instance.head)});
      }
    }
    std::vector<std::size_t> last(verts.size(), 0);
    for (std::size_t i = 0; i < groups_.size(); ++i) {
      last[groups_[i].tail] = i;
      last[groups_[i].head] = i;
    }
    closes_.resize(groups_.size());
    for (std::size_t v = 0; v < verts.size(); ++v) closes_[last[v]].push_back(v);
    cut_a_.assign(verts.size(), IntVector(g.system().n(), 0));
    take_a_.assign(groups_.size(), 0);
    for (const auto& grp : groups_) total_ += grp.count;
  }

  PrimalityVerdict run() {
    PrimalityVerdict verdict;
    const bool found = descend(0);
    verdict.nodes = nodes_;
    if (found) {
      verdict.status = PrimalityVerdict::Status::composite;
      verdict.witness = witness_;
    } else {
      verdict.status = exhausted_ ? PrimalityVerdict::Status::unknown
                                  : PrimalityVerdict::Status::prime;
    }
    return verdict;
  }

 private:
  struct Group {
    EdgeInstance edge;
    std::int64_t count;
    std::size_t tail;
    std::size_t head;
  };

  bool descend(std::size_t pos) {
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return false;
    }
    if (pos == groups_.size()) return leaf();
    const Group& grp = groups_[pos];
    // The first copy of the first group is pinned to A.
    for (std::int64_t a = pos == 0 ? 1 : 0; a <= grp.count; ++a) {
      cut_a_[grp.tail][grp.edge.vec_index] += a;
      cut_a_[grp.head][grp.edge.vec_index] -= a;
      take_a_[pos] = a;
      taken_ += a;
      bool ok = true;
      for (std::size_t v : closes_[pos]) ok = ok && in_row_space(cut_a_[v], g_.system());
      if (ok && descend(pos + 1)) return true;
      cut_a_[grp.tail][grp.edge.vec_index] -= a;
      cut_a_[grp.head][grp.edge.vec_index] += a;
      taken_ -= a;
      if (exhausted_) return false;
    }
    return false;
  }

  bool leaf() {
    if (taken_ == total_) return false;
    VectorGraph a(g_.system_ref());
    VectorGraph b(g_.system_ref());
    for (std::size_t i = 0; i < groups_.size(); ++i) {
      a.add_edge(groups_[i].edge.tail, groups_[i].edge.vec_index, take_a_[i]);
      b.add_edge(groups_[i].edge.tail, groups_[i].edge.vec_index, groups_[i].count - take_a_[i]);
    }
    if (!is_kirchhoff(a).ok() || !is_kirchhoff(b).ok()) return false;
    witness_ = std::make_pair(std::move(a), std::move(b));
    return true;
  }

  const VectorGraph& g_;
  std::uint64_t budget_;
  std::vector<Coordinate> verts_;
  std::vector<Group> groups_;
  std::vector<std::vector<std::size_t>> closes_;
  std::vector<IntVector> cut_a_;
  std::vector<std::int64_t> take_a_;
  std::int64_t total_ = 0;
  std::int64_t taken_ = 0;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
  std::optional<std::pair<VectorGraph, VectorGraph>> witness_;
};

}  // namespace

PrimalityVerdict is_prime(const VectorGraph& g, std::uint64_t budget) {
  if (g.empty()) return PrimalityVerdict{};
  return BipartitionSearch(g, budget).run();
}

// ---------------------------------------------------------------------------
// Span membership

bool LatticeBox::contains(const Coordinate& c) const {
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] < lo[i] || c[i] > hi[i]) return false;
  }
  return true;
}

LatticeBox default_window(std::span<const VectorGraph> generators, const VectorGraph& target) {
  const std::size_t k = target.system().k();
  const std::vector<Coordinate> tv = canonicalize(target).vertices();
  LatticeBox box{Coordinate::origin(k), Coordinate::origin(k)};
  if (!tv.empty()) box = LatticeBox{tv.front(), tv.front()};
  for (const Coordinate& v : tv) {
    for (std::size_t i = 0; i < k; ++i) {
      box.lo.components[i] = std::min(box.lo[i], v[i]);
      box.hi.components[i] = std::max(box.hi[i], v[i]);
    }
  }
  std::int64_t diameter = 0;
  for (const VectorGraph& g : generators) {
    const std::vector<Coordinate> gv = g.vertices();
    for (std::size_t i = 0; i < k && !gv.empty(); ++i) {
      auto [lo, hi] = std::minmax_element(gv.begin(), gv.end(),
                                          [i](const auto& a, const auto& b) { return a[i] < b[i]; });
      diameter = std::max(diameter, (*hi)[i] - (*lo)[i]);
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    box.lo.components[i] -= diameter;
    box.hi.components[i] += diameter;
  }
  return box;
}

namespace {

// Residual D = target - positives + negatives; always cover the least edge
// where D is nonzero, with a positive copy if D > 0 and a negative copy if
// D < 0. Any solution has to, so the branching loses nothing.
class SpanSearch {
 public:
  using Residual = VectorGraph::EdgeMap;

  SpanSearch(std::span<const VectorGraph> generators, const VectorGraph& target, int bound,
             LatticeBox window, std::uint64_t budget)
      : bound_(bound), window_(std::move(window)), budget_(budget), n_(target.system().n()) {
    for (const VectorGraph& g : generators) {
      require_same_system(g, target);
      gens_.push_back(canonicalize(g));
    }
    max_count_.assign(n_, 0);
    for (const VectorGraph& g : gens_) {
      const Multiplicity m = multiplicity(g);
      for (std::size_t i = 0; i < n_; ++i) max_count_[i] = std::max(max_count_[i], m.counts[i]);
    }
    residual_ = canonicalize(target).edge_map();
  }

  SpanResult run() {
    SpanResult result;
    result.found = descend(bound_);
    result.nodes = nodes_;
    result.budget_exhausted = exhausted_;
    if (result.found) {
      std::stable_sort(path_.begin(), path_.end(),
                       [](const Placement& a, const Placement& b) { return a.sign > b.sign; });
      result.expression.placements = path_;
    }
    return result;
  }

 private:
  bool descend(int remaining) {
    if (residual_.empty()) return true;
    if (remaining == 0 || lower_bound() > remaining) return false;
    if (auto it = failed_.find(residual_); it != failed_.end() && it->second >= remaining) {
      return false;
    }
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return false;
    }
    const auto [key, value] = *residual_.begin();
    const int sign = value > 0 ? 1 : -1;
    for (std::size_t g = 0; g < gens_.size(); ++g) {
      for (const auto& [gkey, gcount] : gens_[g].edge_map()) {
        if (gkey.vec_index != key.vec_index) continue;
        const Coordinate offset = key.tail - gkey.tail;
        if (!window_.contains(offset)) continue;
        // A copy placed with both signs cancels; never build such expressions.
        auto& net = net_[{g, offset}];
        if (net * sign < 0) continue;
        net += sign;
        apply(g, offset, sign);
        path_.push_back(Placement{g, offset, sign});
        if (descend(remaining - 1)) return true;
        path_.pop_back();
        apply(g, offset, -sign);
        net_[{g, offset}] -= sign;
        if (exhausted_) return false;
      }
    }
    auto& best = failed_[residual_];
    best = std::max(best, remaining);
    return false;
  }

  void apply(std::size_t g, const Coordinate& offset, int sign) {
    for (const auto& [gkey, gcount] : gens_[g].edge_map()) {
      VectorGraph::EdgeKey key{gkey.tail + offset, gkey.vec_index};
      auto& slot = residual_[key];
      slot -= sign * gcount;
      if (slot == 0) residual_.erase(key);
    }
  }

  int lower_bound() const {
    std::vector<std::int64_t> pos(n_, 0), neg(n_, 0);
    for (const auto& [key, value] : residual_) {
      (value > 0 ? pos : neg)[key.vec_index] += std::abs(value);
    }
    std::int64_t need = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      if (pos[i] + neg[i] == 0) continue;
      if (max_count_[i] == 0) return bound_ + 1;
      need = std::max(need, (pos[i] + max_count_[i] - 1) / max_count_[i] +
                                (neg[i] + max_count_[i] - 1) / max_count_[i]);
    }
    return static_cast<int>(std::min<std::int64_t>(need, bound_ + 1));
  }

  int bound_;
  LatticeBox window_;
  std::uint64_t budget_;
  std::size_t n_;
  std::vector<VectorGraph> gens_;
  std::vector<std::int64_t> max_count_;
  Residual residual_;
  std::vector<Placement> path_;
  std::map<Residual, int> failed_;
  std::map<std::pair<std::size_t, Coordinate>, int> net_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
};

}  // namespace

SpanResult span_contains(std::span<const VectorGraph> generators, const VectorGraph& target,
                         int coeff_bound, std::optional<LatticeBox> window,
                         std::uint64_t budget) {
  if (generators.empty()) return SpanResult{target.empty(), {}, 0, false};
  LatticeBox box = window ? *window : default_window(generators, target);
  SpanResult result = SpanSearch(generators, target, coeff_bound, box, budget).run();
  if (result.found) {
    const VectorGraph value = evaluate(result.expression, generators);
    if (!equals_up_to_translation(value, target)) {
      throw TilingError(TilingError::Kind::construction_failure,
                        "span search produced an expression that does not evaluate to the target");
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// The infinite prime family

PrimeFamilyBasis prime_family_basis() {
  auto system = std::make_shared<const RowSystem>(
      build_row_system(RationalMatrix::from_rows({{2, 0, 1, 1}, {0, 2, 1, -1}})));
  VectorGraph square(system);
  square.add_edge({0, 0}, 0);
  square.add_edge({0, 0}, 1);
  square.add_edge({0, 0}, 2);
  square.add_edge({0, 2}, 0);
  square.add_edge({0, 2}, 3);
  square.add_edge({1, 1}, 2);
  square.add_edge({1, 1}, 3);
  square.add_edge({2, 0}, 1);
  VectorGraph diamond(system);
  diamond.add_edge({0, 0}, 0, 2);
  diamond.add_edge({0, 0}, 2);
  diamond.add_edge({0, 0}, 3);
  diamond.add_edge({1, -1}, 1, 2);
  diamond.add_edge({1, -1}, 2);
  diamond.add_edge({1, 1}, 3);
  return PrimeFamilyBasis{system, square, diamond};
}

TilingExpression prime_family_expression(std::size_t j) {
  if (j == 0) throw TilingError(TilingError::Kind::construction_failure, "family index must be >= 1");
  // A diamond anchored at a sits inside the four squares anchored at a,
  // a+(0,-2), a+(1,-1), a+(-1,-1). Consecutive diamonds along (1,-1) share
  // two of those squares, so each step adds two squares.
  std::set<Coordinate> squares;
  std::vector<Coordinate> diamonds;
  for (std::size_t t = 0; t < j; ++t) {
    const auto s = static_cast<std::int64_t>(t);
    const Coordinate a{s, -s};
    diamonds.push_back(a);
    squares.insert(a);
    squares.insert(a + Coordinate{0, -2});
    squares.insert(a + Coordinate{1, -1});
    squares.insert(a + Coordinate{-1, -1});
  }
  TilingExpression expr;
  for (const Coordinate& x : squares) expr.placements.push_back(Placement{0, x, 1});
  for (const Coordinate& x : diamonds) expr.placements.push_back(Placement{1, x, -1});
  return expr;
}

VectorGraph build_infinite_prime_family(std::size_t j) {
  const PrimeFamilyBasis basis = prime_family_basis();
  const TilingExpression expr = prime_family_expression(j);
  VectorGraph acc(basis.system);
  for (const Placement& p : expr.placements) {
    if (p.sign > 0) {
      acc = add(acc, basis.square, p.offset).graph;
      continue;
    }
    const std::vector<Coordinate> spots = find_embeddings(acc, basis.diamond);
    if (!std::binary_search(spots.begin(), spots.end(), p.offset)) {
      throw TilingError(TilingError::Kind::construction_failure,
                        "expected interior diamond at " + to_string(p.offset) + " is missing");
    }
    acc = subtract(acc, basis.diamond, p.offset).graph;
  }
  return canonicalize(acc);
}

// ---------------------------------------------------------------------------
// Fundamental sets

FundamentalSets fundamental_sets(std::span<const VectorGraph> graphs, int coeff_bound,
                                 std::optional<LatticeBox> window) {
  FundamentalSets out;
  out.coeff_bound = coeff_bound;
  if (graphs.empty()) return out;

  std::vector<std::optional<std::int64_t>> ms;
  for (const VectorGraph& g : graphs) ms.push_back(multiplicity(g).m);
  for (const auto& m : ms) {
    if (m && *m > 0 && (out.m_star == 0 || *m < out.m_star)) out.m_star = *m;
  }
  std::vector<std::size_t> tier;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    if (ms[i] && *ms[i] == out.m_star) tier.push_back(i);
  }

  for (std::size_t size = 1; size <= tier.size(); ++size) {
    std::vector<std::size_t> pick(size);
    for (std::size_t i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      std::vector<std::size_t> subset;
      std::vector<VectorGraph> gens;
      for (std::size_t p : pick) {
        subset.push_back(tier[p]);
        gens.push_back(graphs[tier[p]]);
      }
      bool generates = true;
      for (std::size_t t = 0; generates && t < graphs.size(); ++t) {
        if (std::binary_search(subset.begin(), subset.end(), t)) continue;
        generates = span_contains(gens, graphs[t], coeff_bound, window).found;
      }
      if (generates) out.subsets.push_back(subset);

      std::size_t i = size;
      while (i > 0 && pick[i - 1] == tier.size() - size + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t r = i; r < size; ++r) pick[r] = pick[r - 1] + 1;
    }
    if (!out.subsets.empty()) {
      out.cardinality = size;
      break;
    }
  }
  return out;
}

}  // namespace kirchhoff
