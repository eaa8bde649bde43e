#ifndef KIRCHHOFF_TILING_HPP
#define KIRCHHOFF_TILING_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kirchhoff/vgraph.hpp"

namespace kirchhoff {

class TilingError : public std::runtime_error {
 public:
  enum class Kind {
    system_mismatch,
    no_embedding_at_offset,
    construction_failure,
    parse_error,
    unknown_graph,
  };
  TilingError(Kind kind, const std::string& what, std::optional<std::size_t> step = {})
      : std::runtime_error(what), kind_(kind), step_(step) {}
  Kind kind() const noexcept { return kind_; }
  // Zero-based placement index at which evaluation failed, if any.
  std::optional<std::size_t> step() const noexcept { return step_; }

 private:
  Kind kind_;
  std::optional<std::size_t> step_;
};

// One signed copy of graphs[graph] with its anchor (canonical origin) placed
// at offset.
struct Placement {
  std::size_t graph = 0;
  Coordinate offset;
  int sign = 1;
  bool operator==(const Placement&) const = default;
};

// Evaluated left to right; every subtraction must find its copy in the
// running result.
struct TilingExpression {
  std::vector<Placement> placements;
  bool operator==(const TilingExpression&) const = default;
};

// Text form: terms like `4*G1@(0,0)` joined by `+` / `-`. The coefficient
// defaults to 1 and the offset to the origin.
std::string to_string(const TilingExpression& expr);
TilingExpression parse_tiling_expression(std::string_view text, std::size_t k);

// Result is in the absolute frame of the placements.
VectorGraph evaluate(const TilingExpression& expr, std::span<const VectorGraph> graphs);

struct TilingStep {
  VectorGraph graph;
  KirchhoffVerdict verdict;
  bool vector_2_connected = false;
};

// g1 stays in its own frame; g2 is anchored at x.
TilingStep add(const VectorGraph& g1, const VectorGraph& g2, const Coordinate& x);
TilingStep subtract(const VectorGraph& g1, const VectorGraph& g2, const Coordinate& x);

// Offsets x at which the anchored pattern is a sub-multiset of host, sorted.
std::vector<Coordinate> find_embeddings(const VectorGraph& host, const VectorGraph& pattern);

struct PrimalityVerdict {
  enum class Status { prime, composite, unknown };
  Status status = Status::unknown;
  // For composite graphs: two nonempty Kirchhoff parts partitioning the edges.
  std::optional<std::pair<VectorGraph, VectorGraph>> witness;
  std::uint64_t nodes = 0;
};

const char* to_string(PrimalityVerdict::Status status);

inline constexpr std::uint64_t kDefaultPrimeBudget = 50'000'000;

PrimalityVerdict is_prime(const VectorGraph& g, std::uint64_t budget = kDefaultPrimeBudget);

struct LatticeBox {
  Coordinate lo;
  Coordinate hi;
  bool contains(const Coordinate& c) const;
};

// Target bounding box dilated by the largest generator extent.
LatticeBox default_window(std::span<const VectorGraph> generators, const VectorGraph& target);

inline constexpr int kDefaultCoeffBound = 8;
inline constexpr std::uint64_t kDefaultSpanBudget = 20'000'000;

struct SpanResult {
  bool found = false;
  // Placements index into the generator list; offsets are relative to the
  // canonical frame of the target.
  TilingExpression expression;
  std::uint64_t nodes = 0;
  bool budget_exhausted = false;
};

// Bounded semi-decision: searches expressions with at most coeff_bound
// placements whose offsets lie in window. A negative answer only means no
// expression exists within the bounds.
SpanResult span_contains(std::span<const VectorGraph> generators, const VectorGraph& target,
                         int coeff_bound = kDefaultCoeffBound,
                         std::optional<LatticeBox> window = std::nullopt,
                         std::uint64_t budget = kDefaultSpanBudget);

// The R = [[2,0,1,1],[0,2,1,-1]] system with its two multiplicity-2 graphs:
// the square with both diagonals and the diamond with doubled axes.
struct PrimeFamilyBasis {
  SystemRef system;
  VectorGraph square;
  VectorGraph diamond;
};

PrimeFamilyBasis prime_family_basis();

// (2j+2) squares along a diagonal chain minus j diamonds from its interior,
// with generators {square, diamond}.
TilingExpression prime_family_expression(std::size_t j);
VectorGraph build_infinite_prime_family(std::size_t j);

struct FundamentalSets {
  std::int64_t m_star = 0;
  std::size_t cardinality = 0;
  // Indices into the input list, each subset sorted, subsets in
  // lexicographic order.
  std::vector<std::vector<std::size_t>> subsets;
  int coeff_bound = kDefaultCoeffBound;
  // Results only hold relative to the search bounds.
  bool bound_relative = true;
};

FundamentalSets fundamental_sets(std::span<const VectorGraph> graphs,
                                 int coeff_bound = kDefaultCoeffBound,
                                 std::optional<LatticeBox> window = std::nullopt);

}  // namespace kirchhoff

#endif  // KIRCHHOFF_TILING_HPP
