#include "oracles.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace kgtest::oracle {

using kirchhoff::BigInt;
using kirchhoff::Coordinate;

namespace {

// Plain Gauss-Jordan elimination; returns pivot columns and leaves m reduced.
std::vector<std::size_t> reduce(Matrix& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  const std::size_t rows = m.size();
  const std::size_t cols = m.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    const Rational inv = 1 / m[r][c];
    for (auto& v : m[r]) v *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rational f = m[i][c];
      for (std::size_t j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

Matrix to_matrix(const kirchhoff::IntMatrix& a) {
  Matrix m(a.rows(), std::vector<Rational>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = a(i, j);
  }
  return m;
}

IntVector scaled_to_integers(const std::vector<Rational>& v) {
  BigInt l = 1;
  for (const Rational& x : v) {
    const BigInt d = boost::multiprecision::denominator(x);
    l = l / boost::multiprecision::gcd(l, d) * d;
  }
  IntVector out;
  for (const Rational& x : v) {
    out.push_back(static_cast<std::int64_t>(boost::multiprecision::numerator(Rational(x * l))));
  }
  return out;
}

}  // namespace

std::size_t rank(Matrix m) { return reduce(m).size(); }

Matrix null_basis(const Matrix& m) {
  if (m.empty()) return {};
  Matrix r = m;
  const std::vector<std::size_t> pivots = reduce(r);
  const std::size_t cols = m.front().size();
  Matrix basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (std::find(pivots.begin(), pivots.end(), free) != pivots.end()) continue;
    std::vector<Rational> v(cols);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -r[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

bool in_row_space_by_rank(const IntVector& x, const RowSystem& sys) {
  Matrix m = to_matrix(sys.row_matrix());
  const std::size_t base = rank(m);
  std::vector<Rational> row(x.begin(), x.end());
  m.push_back(row);
  return rank(m) == base;
}

RowSpaceTest::RowSpaceTest(const RowSystem& sys) {
  for (const auto& v : null_basis(to_matrix(sys.row_matrix()))) {
    null_rows_.push_back(scaled_to_integers(v));
  }
}

bool RowSpaceTest::operator()(const IntVector& x) const {
  for (const IntVector& w : null_rows_) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * x[i];
    if (s != 0) return false;
  }
  return true;
}

std::vector<IntVector> brute_force_cuts(const RowSystem& sys, std::int64_t bound) {
  const std::size_t n = sys.n();
  std::vector<IntVector> out;
  IntVector x(n, -bound);
  while (true) {
    if (in_row_space_by_rank(x, sys)) out.push_back(x);
    std::size_t i = n;
    while (i > 0 && x[i - 1] == bound) {
      x[i - 1] = -bound;
      --i;
    }
    if (i == 0) break;
    ++x[i - 1];
  }
  return out;
}

bool is_kirchhoff(const VectorGraph& g) {
  if (g.empty()) return false;
  const RowSystem& sys = g.system();
  const RowSpaceTest in_row(sys);

  struct E {
    Coordinate tail, head;
    std::size_t vec;
    std::int64_t count;
  };
  std::vector<E> edges;
  std::map<Coordinate, std::size_t> vindex;
  for (const auto& [key, count] : g.edge_map()) {
    Coordinate head = key.tail;
    const IntVector d = sys.row_matrix().column(key.vec_index);
    for (std::size_t i = 0; i < d.size(); ++i) head.components[i] += d[i];
    edges.push_back({key.tail, head, key.vec_index, count});
    vindex.emplace(key.tail, 0);
    vindex.emplace(head, 0);
  }
  std::size_t next = 0;
  for (auto& [v, idx] : vindex) idx = next++;

  std::vector<IntVector> cuts(vindex.size(), IntVector(sys.n(), 0));
  for (const E& e : edges) {
    cuts[vindex[e.tail]][e.vec] += e.count;
    cuts[vindex[e.head]][e.vec] -= e.count;
  }
  for (const IntVector& c : cuts) {
    if (!in_row(c)) return false;
  }

  // Cycle space: flows with zero divergence on the distinct edges.
  Matrix incidence(vindex.size(), std::vector<Rational>(edges.size()));
  for (std::size_t j = 0; j < edges.size(); ++j) {
    incidence[vindex[edges[j].tail]][j] += 1;
    incidence[vindex[edges[j].head]][j] -= 1;
  }
  Matrix chis;
  for (const auto& z : null_basis(incidence)) {
    std::vector<Rational> chi(sys.n());
    for (std::size_t j = 0; j < edges.size(); ++j) chi[edges[j].vec] += z[j];
    for (std::size_t r = 0; r < sys.k(); ++r) {
      Rational dot = 0;
      for (std::size_t c = 0; c < sys.n(); ++c) dot += sys.row_matrix()(r, c) * chi[c];
      if (dot != 0) return false;
    }
    chis.push_back(std::move(chi));
  }
  return rank(chis) == sys.n() - sys.k();
}

std::optional<bool> is_prime_exhaustive(const VectorGraph& g, std::size_t max_edges) {
  struct Copy {
    Coordinate tail;
    std::size_t vec, t, h;
  };
  const RowSystem& sys = g.system();
  std::map<Coordinate, std::size_t> vindex;
  std::vector<Copy> copies;
  for (const auto& [key, count] : g.edge_map()) {
    Coordinate head = key.tail;
    for (std::size_t i = 0; i < head.size(); ++i) head.components[i] += sys.row_matrix()(i, key.vec_index);
    const std::size_t t = vindex.emplace(key.tail, vindex.size()).first->second;
    const std::size_t h = vindex.emplace(head, vindex.size()).first->second;
    for (std::int64_t c = 0; c < count; ++c) copies.push_back({key.tail, key.vec_index, t, h});
  }
  if (copies.size() > max_edges || copies.empty()) return std::nullopt;
  if (!oracle::is_kirchhoff(g)) return std::nullopt;
  const RowSpaceTest in_row(sys);
  const std::size_t e = copies.size();
  // Bit i of mask (for i >= 1) puts copy i into part A; copy 0 is always in A.
  for (std::uint64_t mask = 0; mask + 1 < (std::uint64_t{1} << (e - 1)); ++mask) {
    std::vector<IntVector> cuts(vindex.size(), IntVector(sys.n(), 0));
    for (std::size_t i = 0; i < e; ++i) {
      if (i > 0 && !((mask >> (i - 1)) & 1)) continue;
      cuts[copies[i].t][copies[i].vec] += 1;
      cuts[copies[i].h][copies[i].vec] -= 1;
    }
    // B's cuts are g's minus A's, so one side settles both.
    if (!std::all_of(cuts.begin(), cuts.end(), [&](const IntVector& c) { return in_row(c); })) continue;
    VectorGraph a(g.system_ref()), b(g.system_ref());
    for (std::size_t i = 0; i < e; ++i) {
      VectorGraph& part = i == 0 || ((mask >> (i - 1)) & 1) ? a : b;
      part.add_edge(copies[i].tail, copies[i].vec);
    }
    if (oracle::is_kirchhoff(a) && oracle::is_kirchhoff(b)) return false;
  }
  return true;
}

bool is_connected(const VectorGraph& g) {
  std::map<Coordinate, Coordinate> parent;
  std::function<Coordinate(const Coordinate&)> find = [&](const Coordinate& v) {
    auto it = parent.find(v);
    if (it == parent.end()) return parent[v] = v;
    if (it->second == v) return v;
    return it->second = find(it->second);
  };
  for (const auto& [key, count] : g.edge_map()) {
    Coordinate head = key.tail;
    for (std::size_t i = 0; i < head.size(); ++i) head.components[i] += g.system().row_matrix()(i, key.vec_index);
    parent[find(key.tail)] = find(head);
  }
  std::set<Coordinate> roots;
  for (const auto& [v, p] : parent) roots.insert(find(v));
  return roots.size() <= 1;
}

std::vector<std::tuple<std::vector<std::int64_t>, std::size_t, std::int64_t>> key_of(
    const VectorGraph& g) {
  std::vector<std::tuple<std::vector<std::int64_t>, std::size_t, std::int64_t>> out;
  if (g.empty()) return out;
  const auto& r = g.system().row_matrix();
  std::vector<std::int64_t> least;
  bool first = true;
  for (const auto& [key, count] : g.edge_map()) {
    std::vector<std::int64_t> head = key.tail.components;
    for (std::size_t i = 0; i < head.size(); ++i) head[i] += r(i, key.vec_index);
    for (const std::vector<std::int64_t>* v : std::array<const std::vector<std::int64_t>*, 2>{&key.tail.components, &head}) {
      if (first || *v < least) least = *v;
      first = false;
    }
  }
  for (const auto& [key, count] : g.edge_map()) {
    std::vector<std::int64_t> t = key.tail.components;
    for (std::size_t i = 0; i < t.size(); ++i) t[i] -= least[i];
    out.emplace_back(t, key.vec_index, count);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::set<std::vector<std::tuple<std::vector<std::int64_t>, std::size_t, std::int64_t>>>
graph_scan(const kirchhoff::SystemRef& sys, std::int64_t m_max, std::int64_t side,
           bool connected_only) {
  std::vector<Coordinate> cells;
  for (std::int64_t x = 0; x <= side; ++x) {
    for (std::int64_t y = 0; y <= side; ++y) cells.push_back(Coordinate{x, y});
  }
  const std::size_t n = sys->n();
  std::set<std::vector<std::tuple<std::vector<std::int64_t>, std::size_t, std::int64_t>>> found;

  for (std::int64_t m = 1; m <= m_max; ++m) {
    // All multisets of m cells, as nondecreasing index lists.
    std::vector<std::vector<std::size_t>> multisets;
    std::vector<std::size_t> pick(static_cast<std::size_t>(m), 0);
    std::function<void(std::size_t, std::size_t)> gen = [&](std::size_t pos, std::size_t from) {
      if (pos == pick.size()) {
        multisets.push_back(pick);
        return;
      }
      for (std::size_t c = from; c < cells.size(); ++c) {
        pick[pos] = c;
        gen(pos + 1, c);
      }
    };
    gen(0, 0);

    std::vector<std::size_t> choice(n, 0);
    while (true) {
      VectorGraph g(sys);
      for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t c : multisets[choice[v]]) g.add_edge(cells[c], v);
      }
      if ((!connected_only || oracle::is_connected(g)) && oracle::is_kirchhoff(g)) found.insert(key_of(g));
      std::size_t i = n;
      while (i > 0 && choice[i - 1] + 1 == multisets.size()) {
        choice[i - 1] = 0;
        --i;
      }
      if (i == 0) break;
      ++choice[i - 1];
    }
  }
  return found;
}

}  // namespace kgtest::oracle
