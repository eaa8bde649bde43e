#ifndef KG_TEST_FIXTURES_HPP
#define KG_TEST_FIXTURES_HPP

#include <cstdint>
#include <tuple>
#include <vector>

#include "kirchhoff/enumerator.hpp"
#include "kirchhoff/exactalg.hpp"
#include "kirchhoff/vgraph.hpp"

namespace kgtest {

using kirchhoff::Coordinate;
using kirchhoff::SystemRef;
using kirchhoff::VectorGraph;

SystemRef r1_system();
SystemRef r2_system();
SystemRef r3_system();
SystemRef triangle_system();
// R = [[3,0,1,1],[0,3,1,2]]: q exceeds small cut bounds.
SystemRef q3_system();

SystemRef make_system(std::initializer_list<std::initializer_list<kirchhoff::Rational>> edge_matrix);

struct EdgeSpec {
  Coordinate tail;
  std::size_t vec;
  std::int64_t count = 1;
};

VectorGraph make_graph(const SystemRef& sys, const std::vector<EdgeSpec>& edges);

// The two multiplicity-2 graphs of R1: the square with both diagonals and the
// diamond with doubled axis edges.
VectorGraph square_f1();
VectorGraph diamond_f2();

// Cached enumerations (computed once per process).
const std::vector<VectorGraph>& r1_graphs(std::int64_t m_max);
const std::vector<VectorGraph>& r2_graphs();
const std::vector<VectorGraph>& r3_graphs();

}  // namespace kgtest

#endif
