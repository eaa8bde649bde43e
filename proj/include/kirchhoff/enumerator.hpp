#ifndef KIRCHHOFF_ENUMERATOR_HPP
#define KIRCHHOFF_ENUMERATOR_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "kirchhoff/exactalg.hpp"
#include "kirchhoff/vgraph.hpp"

namespace kirchhoff {

enum class CutOrder { lexicographic, reverse_lexicographic, by_norm };

struct SearchConfig {
  std::int64_t m_max = 1;
  // When set, vertices are visited in (coordinate sum, lexicographic) order
  // and no vertex may have a negative coordinate sum. When clear, the order
  // is purely lexicographic.
  bool prune_negative_sum = true;
  CutOrder cut_order = CutOrder::lexicographic;
  std::optional<std::uint64_t> node_limit;
  unsigned workers = 1;
};

struct SearchStats {
  std::uint64_t nodes_expanded = 0;
  std::uint64_t multiplicity_prunes = 0;
  std::uint64_t coordinate_prunes = 0;
  std::uint64_t graphs_found = 0;
  std::uint64_t backtracks = 0;
  std::uint64_t rejected_leaves = 0;

  SearchStats& operator+=(const SearchStats& other);
};

// Search-time context shared read-only by all workers.
class SearchSpace {
 public:
  SearchSpace(SystemRef system, SearchConfig config);

  const RowSystem& system() const noexcept { return *system_; }
  const SystemRef& system_ref() const noexcept { return system_; }
  const SearchConfig& config() const noexcept { return config_; }
  // The cut list: nonzero bounded row-space vectors in the configured order.
  const std::vector<IntVector>& cuts() const noexcept { return cuts_; }

  // Vertex visiting order; the anchor (origin) is its least element.
  bool precedes(const Coordinate& a, const Coordinate& b) const;

 private:
  SystemRef system_;
  SearchConfig config_;
  std::vector<IntVector> cuts_;
};

enum class AssignStatus {
  ok,
  multiplicity_exceeded,
  negative_sum,
  below_anchor,
  closed_vertex,
  not_pending,
};

const char* to_string(AssignStatus status);

class PartialGraph {
 public:
  struct VertexLess {
    bool by_sum = true;
    bool operator()(const Coordinate& a, const Coordinate& b) const;
  };

  explicit PartialGraph(const SearchSpace& space);

  const VectorGraph& graph() const noexcept { return graph_; }
  const IntVector& counts() const noexcept { return counts_; }
  // Vertices whose incident edges are final, with the cut they were given.
  const std::map<Coordinate, IntVector>& assigned() const noexcept { return assigned_; }
  // Vertices awaiting processing, least first.
  const std::set<Coordinate, VertexLess>& todo() const noexcept { return todo_; }

  IntVector current_cut(const Coordinate& v) const;
  bool is_closed(const Coordinate& v) const { return assigned_.count(v) != 0; }

 private:
  friend AssignStatus assign_cut(PartialGraph&, const Coordinate&, const IntVector&,
                                 const IntVector&, const SearchSpace&);

  VectorGraph graph_;
  IntVector counts_;
  std::map<Coordinate, IntVector> assigned_;
  std::set<Coordinate, VertexLess> todo_;
};

// Gives v the final cut `target`: for each index i with d = target_i - cut_i,
// adds max(d, 0) + passthrough_i copies of s_i leaving v and
// max(-d, 0) + passthrough_i copies entering v. New endpoints join the to-do
// list and v becomes final. On failure the partial graph is unchanged.
AssignStatus assign_cut(PartialGraph& partial, const Coordinate& v, const IntVector& target,
                        const IntVector& passthrough, const SearchSpace& space);

struct CutChoice {
  IntVector target;
  IntVector passthrough;
};

struct VisitPlan {
  Coordinate vertex;
  // Ordered alternatives; the current cut, when already in the row space,
  // comes first. Empty means the branch is dead and the search backtracks.
  std::vector<CutChoice> choices;
};

// Plans the alternatives for the least vertex on the to-do list.
VisitPlan visit_next(const PartialGraph& partial, const SearchSpace& space,
                     SearchStats* stats = nullptr);

struct EnumerationResult {
  // Canonical forms, sorted by VectorGraph::compare.
  std::vector<VectorGraph> graphs;
  SearchStats stats;
  bool complete = true;
};

EnumerationResult enumerate_kirchhoff(SystemRef system, const SearchConfig& config);

std::optional<std::int64_t> min_multiplicity(SystemRef system, std::int64_t m_limit,
                                             unsigned workers = 1);

}  // namespace kirchhoff

#endif  // KIRCHHOFF_ENUMERATOR_HPP
