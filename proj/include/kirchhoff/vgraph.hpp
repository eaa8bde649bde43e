#ifndef KIRCHHOFF_VGRAPH_HPP
#define KIRCHHOFF_VGRAPH_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kirchhoff/exactalg.hpp"

namespace kirchhoff {

// Lattice position in Z^k.
struct Coordinate {
  std::vector<std::int64_t> components;

  Coordinate() = default;
  explicit Coordinate(std::vector<std::int64_t> c) : components(std::move(c)) {}
  Coordinate(std::initializer_list<std::int64_t> c) : components(c) {}

  static Coordinate origin(std::size_t k) { return Coordinate(std::vector<std::int64_t>(k, 0)); }

  std::size_t size() const noexcept { return components.size(); }
  std::int64_t operator[](std::size_t i) const { return components[i]; }
  std::int64_t sum() const;

  auto operator<=>(const Coordinate&) const = default;
  bool operator==(const Coordinate&) const = default;
};

Coordinate operator+(const Coordinate& a, const Coordinate& b);
Coordinate operator-(const Coordinate& a, const Coordinate& b);
Coordinate operator-(const Coordinate& a);
std::string to_string(const Coordinate& c);

struct EdgeInstance {
  Coordinate tail;
  std::size_t vec_index = 0;
  Coordinate head;

  auto operator<=>(const EdgeInstance&) const = default;
  bool operator==(const EdgeInstance&) const = default;
};

struct VertexCutVector {
  IntVector entries;
  bool operator==(const VertexCutVector&) const = default;
};

struct CycleVector {
  IntVector entries;
  bool operator==(const CycleVector&) const = default;
};

class GraphError : public std::runtime_error {
 public:
  enum class Kind {
    vertex_not_found,
    edge_not_in_graph,
    walk_not_closed,
    walk_not_cycle,
    invalid_edge,
    system_mismatch,
  };
  GraphError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

using SystemRef = std::shared_ptr<const RowSystem>;

// A finite multiset of vector-labeled edges on lattice vertices. Heads are
// derived from tails, so every stored edge is geometrically consistent, and
// the vertex set is exactly the set of edge endpoints.
class VectorGraph {
 public:
  struct EdgeKey {
    Coordinate tail;
    std::size_t vec_index = 0;
    auto operator<=>(const EdgeKey&) const = default;
    bool operator==(const EdgeKey&) const = default;
  };
  struct Edge {
    EdgeInstance instance;
    std::int64_t count = 0;
  };
  using EdgeMap = std::map<EdgeKey, std::int64_t>;

  explicit VectorGraph(SystemRef system);

  const RowSystem& system() const noexcept { return *system_; }
  const SystemRef& system_ref() const noexcept { return system_; }

  void add_edge(const Coordinate& tail, std::size_t vec_index, std::int64_t copies = 1);
  // Returns false (and leaves the graph unchanged) if fewer copies exist.
  bool remove_edge(const Coordinate& tail, std::size_t vec_index, std::int64_t copies = 1);
  std::int64_t edge_count(const Coordinate& tail, std::size_t vec_index) const;

  // Lattice displacement of edge vector i.
  const Coordinate& displacement(std::size_t vec_index) const { return displacement_.at(vec_index); }
  Coordinate head_of(const Coordinate& tail, std::size_t vec_index) const;
  EdgeInstance instance(const Coordinate& tail, std::size_t vec_index) const;

  bool empty() const noexcept { return edges_.empty(); }
  std::size_t distinct_edge_count() const noexcept { return edges_.size(); }
  std::int64_t total_edge_count() const;

  // Sorted lexicographically.
  std::vector<Coordinate> vertices() const;
  bool has_vertex(const Coordinate& v) const;
  // Sorted by (tail, vec_index, head).
  std::vector<Edge> edges() const;
  const EdgeMap& edge_map() const noexcept { return edges_; }

  VectorGraph translated(const Coordinate& offset) const;

  // Same system and identical edge multisets in the same frame.
  bool operator==(const VectorGraph& other) const;
  // Lexicographic order on (tail, vec_index, count) lists; used to number graphs.
  std::strong_ordering compare(const VectorGraph& other) const;

 private:
  void check_index(std::size_t vec_index) const;

  SystemRef system_;
  std::vector<Coordinate> displacement_;
  EdgeMap edges_;
};

struct WalkStep {
  EdgeInstance edge;
  // Which parallel copy of the edge is traversed.
  std::int64_t copy = 0;
};

// vertices[j] and vertices[j+1] are joined by steps[j], in either direction.
struct Walk {
  std::vector<Coordinate> vertices;
  std::vector<WalkStep> steps;
};

struct KirchhoffVerdict {
  enum class Status { ok, bad_vertex, bad_cycle, cycle_space_deficient, trivial };

  Status status = Status::ok;
  std::optional<Coordinate> vertex;
  IntVector cut;
  IntVector cycle;
  std::size_t rank_found = 0;
  std::size_t rank_required = 0;

  bool ok() const noexcept { return status == Status::ok; }
  std::string describe() const;
};

const char* to_string(KirchhoffVerdict::Status status);

struct Multiplicity {
  IntVector counts;
  bool uniform = true;
  std::optional<std::int64_t> m;
};

VertexCutVector vertex_cut(const VectorGraph& g, const Coordinate& v);
CycleVector cycle_vector(const VectorGraph& g, const Walk& walk);
std::vector<Walk> cycle_basis(const VectorGraph& g);
KirchhoffVerdict is_kirchhoff(const VectorGraph& g);
Multiplicity multiplicity(const VectorGraph& g);
bool is_vector_2_connected(const VectorGraph& g);
bool is_connected(const VectorGraph& g);
VectorGraph chiral(const VectorGraph& g);
bool is_self_chiral(const VectorGraph& g);
VectorGraph canonicalize(const VectorGraph& g);
bool equals_up_to_translation(const VectorGraph& a, const VectorGraph& b);

// Cycle vectors of the fundamental cycles from cycle_basis.
std::vector<IntVector> fundamental_cycle_vectors(const VectorGraph& g);

}  // namespace kirchhoff

#endif  // KIRCHHOFF_VGRAPH_HPP
