#ifndef KIRCHHOFF_CLI_HPP
#define KIRCHHOFF_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kirchhoff/exactalg.hpp"
#include "kirchhoff/tiling.hpp"
#include "kirchhoff/vgraph.hpp"

namespace kirchhoff::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitParseError = 2,
  kExitDegenerateMatrix = 3,
  kExitTruncated = 4,
  kExitNoEmbedding = 5,
};

class CliError : public std::runtime_error {
 public:
  CliError(int exit_code, const std::string& what)
      : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

enum class MatrixMode { edge_vectors, row_matrix };

struct MatrixInput {
  std::string text;
  MatrixMode mode = MatrixMode::edge_vectors;

  static MatrixInput from_file(const std::string& path, MatrixMode mode = MatrixMode::edge_vectors);
};

// Whitespace-separated integers or p/q rationals, one row per line; `#`
// starts a comment. Blank lines are skipped.
RationalMatrix parse_matrix(std::string_view text);

struct LoadedSystem {
  SystemRef system;
  // Columns are s_1..s_n in the user's frame (the identity frame for
  // row-matrix input). Used only for drawing.
  RationalMatrix edge_vectors;
};

// Throws CliError with exit code 2 on malformed text, 3 on a degenerate matrix.
LoadedSystem load_system(const MatrixInput& input);

struct GraphRecord {
  std::size_t id = 0;
  VectorGraph graph;
  // Absent for non-uniform graphs.
  std::optional<std::int64_t> multiplicity;
  bool self_chiral = false;
  std::optional<std::size_t> chiral_of;
  std::string prime = "unknown";

  bool operator==(const GraphRecord&) const = default;
};

inline constexpr std::string_view kSchema = "kg-doc/1";

struct GraphDocument {
  LoadedSystem system;
  std::optional<std::int64_t> m_max;
  bool complete = true;
  std::vector<GraphRecord> graphs;

  bool operator==(const GraphDocument& other) const;
};

// Ids follow the order of `graphs`; chirality partners are looked up among
// them. Primality is classified only when requested.
GraphDocument make_document(const LoadedSystem& system, const std::vector<VectorGraph>& graphs,
                            std::optional<std::int64_t> m_max, bool complete,
                            bool classify_prime);

std::string emit_json(const GraphDocument& doc);
// Throws CliError(2) on anything malformed, including edges whose head is
// not tail + s_i.
GraphDocument parse_json(std::string_view text);
GraphDocument load_document(const std::string& path);

std::string render_dot(const GraphDocument& doc, const GraphRecord& record);
// For k > 2 the drawing is the projection onto the first two coordinates.
std::string render_svg(const GraphDocument& doc, const GraphRecord& record);

struct EnumerateOptions {
  MatrixInput matrix;
  std::int64_t m_max = 1;
  std::optional<std::string> out;
  bool classify_prime = false;
  bool prune_negative_sum = true;
  std::optional<std::uint64_t> node_limit;
  unsigned workers = 1;
};

struct VerifyOptions {
  std::string document;
};

struct TileOptions {
  std::string expression;
  // Either a document to draw graphs from, or a matrix to enumerate first.
  std::optional<std::string> document;
  std::optional<MatrixInput> matrix;
  std::int64_t m_max = 1;
  std::optional<std::string> out;
  bool check_prime = false;
  unsigned workers = 1;
};

struct RenderOptions {
  std::string document;
  std::string format = "svg";
  // Absent means every graph.
  std::optional<std::vector<std::size_t>> selection;
  std::string out_dir = ".";
};

struct FundamentalOptions {
  MatrixInput matrix;
  std::int64_t m_max = 1;
  int coeff_bound = kDefaultCoeffBound;
  bool prune_negative_sum = true;
  unsigned workers = 1;
  std::optional<std::string> out;
};

struct MinMultiplicityOptions {
  MatrixInput matrix;
  std::int64_t m_limit = 1;
  unsigned workers = 1;
};

// Each command reports on `out`, diagnostics on `err`, and returns its exit
// code. Library errors are mapped to the exit-code table.
int cmd_enumerate(const EnumerateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);
int cmd_tile(const TileOptions& opts, std::ostream& out, std::ostream& err);
int cmd_render(const RenderOptions& opts, std::ostream& out, std::ostream& err);
int cmd_fundamental(const FundamentalOptions& opts, std::ostream& out, std::ostream& err);
int cmd_min_multiplicity(const MinMultiplicityOptions& opts, std::ostream& out, std::ostream& err);

// Parses argv with the full flag set and dispatches.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace kirchhoff::cli

#endif  // KIRCHHOFF_CLI_HPP
