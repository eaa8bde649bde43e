#include "fixtures.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace kgtest {

using namespace kirchhoff;

SystemRef make_system(std::initializer_list<std::initializer_list<Rational>> edge_matrix) {
  return std::make_shared<const RowSystem>(build_row_system(RationalMatrix::from_rows(edge_matrix)));
}

SystemRef r1_system() {
  static const SystemRef s = make_system({{2, 0, 1, 1}, {0, 2, 1, -1}});
  return s;
}

SystemRef r2_system() {
  static const SystemRef s = make_system({{2, 0, 1, 1}, {0, 2, 3, 1}});
  return s;
}

SystemRef r3_system() {
  static const SystemRef s = make_system({{1, 0, 2, 1}, {0, 1, 1, 2}});
  return s;
}

SystemRef triangle_system() {
  static const SystemRef s = make_system({{1, 0, 1}, {0, 1, 1}});
  return s;
}

SystemRef q3_system() {
  static const SystemRef s = make_system({{3, 0, 1, 1}, {0, 3, 1, 2}});
  return s;
}

VectorGraph make_graph(const SystemRef& sys, const std::vector<EdgeSpec>& edges) {
  VectorGraph g(sys);
  for (const EdgeSpec& e : edges) g.add_edge(e.tail, e.vec, e.count);
  return g;
}

VectorGraph square_f1() {
  return make_graph(r1_system(), {{{0, 0}, 0},
                                  {{0, 0}, 1},
                                  {{0, 0}, 2},
                                  {{0, 2}, 0},
                                  {{0, 2}, 3},
                                  {{1, 1}, 2},
                                  {{1, 1}, 3},
                                  {{2, 0}, 1}});
}

VectorGraph diamond_f2() {
  return make_graph(r1_system(), {{{0, 0}, 0, 2},
                                  {{0, 0}, 2},
                                  {{0, 0}, 3},
                                  {{1, -1}, 1, 2},
                                  {{1, -1}, 2},
                                  {{1, 1}, 3}});
}

namespace {

std::vector<VectorGraph> run(const SystemRef& sys, std::int64_t m_max) {
  SearchConfig cfg;
  cfg.m_max = m_max;
  cfg.workers = 2;
  return enumerate_kirchhoff(sys, cfg).graphs;
}

}  // namespace

const std::vector<VectorGraph>& r1_graphs(std::int64_t m_max) {
  static std::mutex mu;
  static std::map<std::int64_t, std::vector<VectorGraph>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(m_max);
  if (it == cache.end()) it = cache.emplace(m_max, run(r1_system(), m_max)).first;
  return it->second;
}

const std::vector<VectorGraph>& r2_graphs() {
  static const std::vector<VectorGraph> g = run(r2_system(), 6);
  return g;
}

const std::vector<VectorGraph>& r3_graphs() {
  static const std::vector<VectorGraph> g = run(r3_system(), 6);
  return g;
}

}  // namespace kgtest
