#include "kirchhoff/cli.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kirchhoff/enumerator.hpp"

namespace kirchhoff::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(kExitParseError, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError(kExitParseError, "cannot write " + path);
  out << text;
}

Rational parse_rational(const std::string& token) {
  static const std::regex pattern(R"(([+-]?[0-9]+)(?:/([0-9]+))?)");
  std::smatch m;
  if (!std::regex_match(token, m, pattern)) {
    throw CliError(kExitParseError, "not a rational number: '" + token + "'");
  }
  const std::string num = m[1].str();
  BigInt numerator(num[0] == '+' ? num.substr(1) : num);
  BigInt denominator(1);
  if (m[2].matched) {
    denominator = BigInt(m[2].str());
    if (denominator == 0) throw CliError(kExitParseError, "zero denominator in '" + token + "'");
  }
  return Rational(numerator, denominator);
}

std::string rational_text(const Rational& r) { return r.str(); }

std::string plural(std::size_t count, const char* one, const char* many) {
  return std::to_string(count) + " " + (count == 1 ? one : many);
}

std::string graph_name(std::size_t id) { return "G" + std::to_string(id); }

// Maps library exceptions onto the exit-code table.
template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const CliError& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const AlgebraError& e) {
    err << "error: degenerate matrix (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return kExitDegenerateMatrix;
  } catch (const TilingError& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == TilingError::Kind::no_embedding_at_offset ? kExitNoEmbedding
                                                                   : kExitParseError;
  } catch (const GraphError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParseError;
  }
}

SearchConfig search_config(std::int64_t m_max, bool prune, unsigned workers,
                           std::optional<std::uint64_t> node_limit = {}) {
  if (m_max < 1) throw CliError(kExitParseError, "--m-max must be at least 1");
  SearchConfig cfg;
  cfg.m_max = m_max;
  cfg.prune_negative_sum = prune;
  cfg.node_limit = node_limit;
  cfg.workers = std::max(1u, workers);
  return cfg;
}

// --- JSON -----------------------------------------------------------------

Json int_rows(const IntMatrix& m) {
  Json rows = Json::array();
  for (const IntVector& row : m.row_list()) rows.push_back(row);
  return rows;
}

Json record_json(const GraphRecord& rec) {
  const std::vector<Coordinate> vertices = rec.graph.vertices();
  std::map<Coordinate, std::size_t> index;
  Json vjson = Json::array();
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    index.emplace(vertices[i], i);
    vjson.push_back(vertices[i].components);
  }
  Json ejson = Json::array();
  for (const auto& e : rec.graph.edges()) {
    Json edge;
    edge["tail"] = index.at(e.instance.tail);
    edge["head"] = index.at(e.instance.head);
    edge["vec_index"] = e.instance.vec_index;
    edge["count"] = e.count;
    ejson.push_back(std::move(edge));
  }
  Json j;
  j["id"] = rec.id;
  j["multiplicity"] = rec.multiplicity ? Json(*rec.multiplicity) : Json(nullptr);
  j["self_chiral"] = rec.self_chiral;
  j["chiral_of"] = rec.chiral_of ? Json(*rec.chiral_of) : Json(nullptr);
  j["prime"] = rec.prime;
  j["vertices"] = std::move(vjson);
  j["edges"] = std::move(ejson);
  return j;
}

// Indented like dump(2), except that arrays and objects holding only scalars
// stay on one line.
void write_pretty(std::ostream& os, const Json& j, int depth) {
  auto scalar = [](const Json& x) { return !x.is_structured(); };
  const std::string pad(static_cast<std::size_t>(depth + 1) * 2, ' ');
  const std::string close(static_cast<std::size_t>(depth) * 2, ' ');
  if (j.is_array()) {
    if (j.empty()) {
      os << "[]";
    } else if (std::all_of(j.begin(), j.end(), scalar)) {
      os << '[';
      for (std::size_t i = 0; i < j.size(); ++i) os << (i ? ", " : "") << j[i].dump();
      os << ']';
    } else {
      os << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        os << pad;
        write_pretty(os, j[i], depth + 1);
        os << (i + 1 < j.size() ? ",\n" : "\n");
      }
      os << close << ']';
    }
  } else if (j.is_object()) {
    if (j.empty()) {
      os << "{}";
      return;
    }
    const bool flat = std::all_of(j.begin(), j.end(), scalar);
    os << (flat ? "{" : "{\n");
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      if (!flat) os << pad;
      os << Json(it.key()).dump() << ": ";
      write_pretty(os, it.value(), depth + 1);
      if (i + 1 < j.size()) os << (flat ? ", " : ",\n");
    }
    os << (flat ? "}" : "\n" + close + "}");
  } else {
    os << j.dump();
  }
}

std::string pretty(const Json& j) {
  std::ostringstream os;
  write_pretty(os, j, 0);
  os << "\n";
  return os.str();
}

[[noreturn]] void malformed(const std::string& what) {
  throw CliError(kExitParseError, "malformed document: " + what);
}

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string("missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    malformed(std::string("bad value for '") + key + "'");
  }
}

template <typename T>
std::optional<T> nullable(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string("missing '") + key + "'");
  if (j.at(key).is_null()) return std::nullopt;
  return field<T>(j, key);
}

RationalMatrix rational_rows(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::vector<Rational>> out;
  for (const auto& row : rows) {
    std::vector<Rational> r;
    for (const auto& s : row) r.push_back(parse_rational(s));
    if (!out.empty() && r.size() != out.front().size()) malformed("ragged edge_vectors");
    out.push_back(std::move(r));
  }
  return RationalMatrix::from_rows(out);
}

LoadedSystem system_from_json(const Json& s) {
  const auto r = field<std::vector<std::vector<std::int64_t>>>(s, "R");
  std::vector<std::vector<Rational>> rows;
  for (const auto& row : r) rows.emplace_back(row.begin(), row.end());
  if (rows.empty()) malformed("empty R");
  for (const auto& row : rows) {
    if (row.size() != rows.front().size()) malformed("ragged R");
  }
  LoadedSystem out;
  try {
    out.system = std::make_shared<const RowSystem>(
        row_system_from_row_matrix(RationalMatrix::from_rows(rows)));
  } catch (const AlgebraError& e) {
    malformed(std::string("R is not a row matrix: ") + e.what());
  }
  const RowSystem& sys = *out.system;
  if (field<std::int64_t>(s, "q") != sys.q() || field<std::size_t>(s, "k") != sys.k() ||
      field<std::size_t>(s, "n") != sys.n()) {
    malformed("q, k, n disagree with R");
  }
  const auto n = field<std::vector<std::vector<std::int64_t>>>(s, "N");
  if (n != sys.null_matrix().row_list()) malformed("N disagrees with R");
  out.edge_vectors = rational_rows(field<std::vector<std::vector<std::string>>>(s, "edge_vectors"));
  if (out.edge_vectors.rows() != sys.k() || out.edge_vectors.cols() != sys.n()) {
    malformed("edge_vectors must be k x n");
  }
  return out;
}

GraphRecord record_from_json(const Json& j, const SystemRef& system, std::size_t position) {
  const auto id = field<std::size_t>(j, "id");
  if (id != position) malformed("graph ids must count up from 0");
  const auto vertices = field<std::vector<std::vector<std::int64_t>>>(j, "vertices");
  for (const auto& v : vertices) {
    if (v.size() != system->k()) malformed("vertex of wrong dimension in " + graph_name(id));
  }
  VectorGraph g(system);
  if (!j.contains("edges") || !j.at("edges").is_array()) malformed("missing 'edges'");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const Json& e : j.at("edges")) {
    const auto tail = field<std::size_t>(e, "tail");
    const auto head = field<std::size_t>(e, "head");
    const auto vec = field<std::size_t>(e, "vec_index");
    const auto count = field<std::int64_t>(e, "count");
    if (tail >= vertices.size() || head >= vertices.size()) malformed("vertex index out of range");
    if (vec >= system->n()) malformed("vec_index out of range");
    if (count < 1) malformed("edge count must be positive");
    if (!seen.emplace(tail, vec).second) malformed("duplicate edge entry");
    const Coordinate t(vertices[tail]);
    if (g.head_of(t, vec) != Coordinate(vertices[head])) {
      malformed("edge head is not tail + s_" + std::to_string(vec + 1) + " in " + graph_name(id));
    }
    g.add_edge(t, vec, count);
  }
  const auto prime = field<std::string>(j, "prime");
  if (prime != "prime" && prime != "composite" && prime != "unknown") {
    malformed("prime must be prime, composite or unknown");
  }
  return GraphRecord{id,
                     std::move(g),
                     nullable<std::int64_t>(j, "multiplicity"),
                     field<bool>(j, "self_chiral"),
                     nullable<std::size_t>(j, "chiral_of"),
                     prime};
}

// --- drawing ----------------------------------------------------------------

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                                  "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

const char* color(std::size_t vec_index) { return kPalette[vec_index % kPalette.size()]; }

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

struct Point {
  double x = 0;
  double y = 0;
};

// Position of a lattice coordinate in the user's frame: B c / q, with B the
// first k edge vectors. Only the first two components are kept.
Point layout(const GraphDocument& doc, const Coordinate& c) {
  const RowSystem& sys = *doc.system.system;
  std::array<Rational, 2> p;
  const std::size_t dims = std::min<std::size_t>(2, sys.k());
  for (std::size_t r = 0; r < dims; ++r) {
    for (std::size_t j = 0; j < sys.k(); ++j) p[r] += doc.system.edge_vectors(r, j) * c[j];
    p[r] /= sys.q();
  }
  return {p[0].convert_to<double>(), p[1].convert_to<double>()};
}

std::string subscript_label(std::size_t vec_index) { return "s" + std::to_string(vec_index + 1); }

}  // namespace

// --- matrix input -------------------------------------------------------------

MatrixInput MatrixInput::from_file(const std::string& path, MatrixMode mode) {
  return MatrixInput{read_file(path), mode};
}

RationalMatrix parse_matrix(std::string_view text) {
  std::vector<std::vector<Rational>> rows;
  std::istringstream lines{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(lines, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::vector<Rational> row;
    std::string token;
    while (tokens >> token) {
      try {
        row.push_back(parse_rational(token));
      } catch (const CliError& e) {
        throw CliError(kExitParseError, "line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw CliError(kExitParseError, "line " + std::to_string(lineno) + ": expected " +
                                          std::to_string(rows.front().size()) + " entries");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw CliError(kExitParseError, "matrix has no rows");
  return RationalMatrix::from_rows(rows);
}

LoadedSystem load_system(const MatrixInput& input) {
  const RationalMatrix m = parse_matrix(input.text);
  LoadedSystem out;
  try {
    if (input.mode == MatrixMode::edge_vectors) {
      out.system = std::make_shared<const RowSystem>(build_row_system(m));
      out.edge_vectors = m;
    } else {
      out.system = std::make_shared<const RowSystem>(row_system_from_row_matrix(m));
      const RowSystem& sys = *out.system;
      out.edge_vectors = RationalMatrix(sys.k(), sys.n());
      for (std::size_t r = 0; r < sys.k(); ++r) {
        for (std::size_t c = 0; c < sys.n(); ++c) {
          out.edge_vectors(r, c) = Rational(sys.row_matrix()(r, c), sys.q());
        }
      }
    }
  } catch (const AlgebraError& e) {
    throw CliError(kExitDegenerateMatrix, std::string("degenerate matrix (") +
                                              to_string(e.kind()) + "): " + e.what());
  }
  return out;
}

// --- documents ----------------------------------------------------------------

bool GraphDocument::operator==(const GraphDocument& other) const {
  return *system.system == *other.system.system && system.edge_vectors == other.system.edge_vectors &&
         m_max == other.m_max && complete == other.complete && graphs == other.graphs;
}

GraphDocument make_document(const LoadedSystem& system, const std::vector<VectorGraph>& graphs,
                            std::optional<std::int64_t> m_max, bool complete,
                            bool classify_prime) {
  GraphDocument doc{system, m_max, complete, {}};
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const VectorGraph& g = graphs[i];
    GraphRecord rec{i, g, multiplicity(g).m, false, std::nullopt, "unknown"};
    const VectorGraph mirror = chiral(g);
    for (std::size_t j = 0; j < graphs.size(); ++j) {
      if (equals_up_to_translation(mirror, graphs[j])) {
        if (j == i) {
          rec.self_chiral = true;
        } else {
          rec.chiral_of = j;
        }
        break;
      }
    }
    if (classify_prime) rec.prime = to_string(is_prime(g).status);
    doc.graphs.push_back(std::move(rec));
  }
  return doc;
}

std::string emit_json(const GraphDocument& doc) {
  const RowSystem& sys = *doc.system.system;
  Json ev = Json::array();
  for (std::size_t r = 0; r < doc.system.edge_vectors.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < doc.system.edge_vectors.cols(); ++c) {
      row.push_back(rational_text(doc.system.edge_vectors(r, c)));
    }
    ev.push_back(std::move(row));
  }
  Json s;
  s["k"] = sys.k();
  s["n"] = sys.n();
  s["q"] = sys.q();
  s["R"] = int_rows(sys.row_matrix());
  s["N"] = int_rows(sys.null_matrix());
  s["edge_vectors"] = std::move(ev);

  Json graphs = Json::array();
  for (const GraphRecord& rec : doc.graphs) graphs.push_back(record_json(rec));

  Json j;
  j["schema"] = kSchema;
  j["system"] = std::move(s);
  j["m_max"] = doc.m_max ? Json(*doc.m_max) : Json(nullptr);
  j["complete"] = doc.complete;
  j["graphs"] = std::move(graphs);
  return pretty(j);
}

GraphDocument parse_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    malformed(e.what());
  }
  if (field<std::string>(j, "schema") != kSchema) {
    malformed("unsupported schema, expected " + std::string(kSchema));
  }
  if (!j.contains("system")) malformed("missing 'system'");
  GraphDocument doc{system_from_json(j.at("system")), nullable<std::int64_t>(j, "m_max"),
                    field<bool>(j, "complete"), {}};
  if (!j.contains("graphs") || !j.at("graphs").is_array()) malformed("missing 'graphs'");
  for (const Json& g : j.at("graphs")) {
    doc.graphs.push_back(record_from_json(g, doc.system.system, doc.graphs.size()));
  }
  for (const GraphRecord& rec : doc.graphs) {
    if (rec.chiral_of && *rec.chiral_of >= doc.graphs.size()) malformed("chiral_of out of range");
  }
  return doc;
}

GraphDocument load_document(const std::string& path) { return parse_json(read_file(path)); }

// --- rendering ----------------------------------------------------------------

std::string render_dot(const GraphDocument& doc, const GraphRecord& rec) {
  const std::vector<Coordinate> vertices = rec.graph.vertices();
  std::map<Coordinate, std::size_t> index;
  std::ostringstream os;
  os << "digraph " << graph_name(rec.id) << " {\n";
  os << "  // multiplicity " << (rec.multiplicity ? std::to_string(*rec.multiplicity) : "none")
     << "; " << rec.prime << "\n";
  os << "  node [shape=circle, width=0.08, fixedsize=true, label=\"\"];\n";
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    index.emplace(vertices[i], i);
    const Point p = layout(doc, vertices[i]);
    os << "  v" << i << " [pos=\"" << num(p.x) << "," << num(p.y) << "!\", xlabel=\""
       << to_string(vertices[i]) << "\"];\n";
  }
  for (const auto& e : rec.graph.edges()) {
    os << "  v" << index.at(e.instance.tail) << " -> v" << index.at(e.instance.head)
       << " [label=\"" << subscript_label(e.instance.vec_index) << "\", color=\""
       << color(e.instance.vec_index) << "\"";
    if (e.count > 1) os << ", xlabel=\"" << e.count << "\"";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

std::string render_svg(const GraphDocument& doc, const GraphRecord& rec) {
  constexpr double unit = 60;
  constexpr double margin = 30;
  constexpr double legend_row = 18;
  const RowSystem& sys = *doc.system.system;
  const std::vector<Coordinate> vertices = rec.graph.vertices();

  double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Point p = layout(doc, vertices[i]);
    if (i == 0 || p.x < min_x) min_x = p.x;
    if (i == 0 || p.x > max_x) max_x = p.x;
    if (i == 0 || p.y < min_y) min_y = p.y;
    if (i == 0 || p.y > max_y) max_y = p.y;
  }
  const double width = std::max(200.0, (max_x - min_x) * unit + 2 * margin);
  const double plot_h = (max_y - min_y) * unit + 2 * margin;
  const double height = plot_h + legend_row * static_cast<double>(sys.n()) + margin / 2;
  auto screen = [&](const Coordinate& c) {
    const Point p = layout(doc, c);
    return Point{margin + (p.x - min_x) * unit, margin + (max_y - p.y) * unit};
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
     << num(height) << "\" viewBox=\"0 0 " << num(width) << " " << num(height) << "\">\n";
  os << "<title>" << graph_name(rec.id) << "</title>\n";
  os << "<defs>\n";
  for (std::size_t i = 0; i < sys.n(); ++i) {
    os << "<marker id=\"arrow" << i << "\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" "
       << "markerWidth=\"7\" markerHeight=\"7\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" "
       << "fill=\"" << color(i) << "\"/></marker>\n";
  }
  os << "</defs>\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  os << "<g stroke=\"#e6e6e6\" stroke-width=\"1\">\n";
  for (double x = std::floor(min_x); x <= std::ceil(max_x); x += 1) {
    const double sx = margin + (x - min_x) * unit;
    if (sx < 0 || sx > width) continue;
    os << "<line x1=\"" << num(sx) << "\" y1=\"0.00\" x2=\"" << num(sx) << "\" y2=\"" << num(plot_h)
       << "\"/>\n";
  }
  for (double y = std::floor(min_y); y <= std::ceil(max_y); y += 1) {
    const double sy = margin + (max_y - y) * unit;
    if (sy < 0 || sy > plot_h) continue;
    os << "<line x1=\"0.00\" y1=\"" << num(sy) << "\" x2=\"" << num(width) << "\" y2=\"" << num(sy)
       << "\"/>\n";
  }
  os << "</g>\n";

  constexpr double radius = 4;
  os << "<g stroke-width=\"2\">\n";
  for (const auto& e : rec.graph.edges()) {
    const Point a = screen(e.instance.tail);
    const Point b = screen(e.instance.head);
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len = std::hypot(dx, dy);
    const double ux = len > 0 ? dx / len : 0;
    const double uy = len > 0 ? dy / len : 0;
    const char* c = color(e.instance.vec_index);
    os << "<line x1=\"" << num(a.x) << "\" y1=\"" << num(a.y) << "\" x2=\""
       << num(b.x - ux * radius) << "\" y2=\"" << num(b.y - uy * radius) << "\" stroke=\"" << c
       << "\" marker-end=\"url(#arrow" << e.instance.vec_index << ")\"/>\n";
    if (e.count > 1) {
      // Small count beside the midpoint, offset to the left of the direction.
      const double mx = (a.x + b.x) / 2 + uy * 9;
      const double my = (a.y + b.y) / 2 - ux * 9;
      os << "<text class=\"count\" x=\"" << num(mx) << "\" y=\"" << num(my)
         << "\" font-size=\"10\" font-family=\"sans-serif\" text-anchor=\"middle\" "
         << "dominant-baseline=\"middle\" fill=\"" << c << "\">" << e.count << "</text>\n";
    }
  }
  os << "</g>\n";

  os << "<g fill=\"black\">\n";
  for (const Coordinate& v : vertices) {
    const Point p = screen(v);
    os << "<circle cx=\"" << num(p.x) << "\" cy=\"" << num(p.y) << "\" r=\"" << num(radius)
       << "\"/>\n";
  }
  os << "</g>\n";

  os << "<g font-size=\"12\" font-family=\"sans-serif\">\n";
  for (std::size_t i = 0; i < sys.n(); ++i) {
    const double y = plot_h + legend_row * (static_cast<double>(i) + 0.5);
    os << "<line x1=\"" << num(margin) << "\" y1=\"" << num(y) << "\" x2=\"" << num(margin + 24)
       << "\" y2=\"" << num(y) << "\" stroke=\"" << color(i) << "\" stroke-width=\"2\"/>"
       << "<text x=\"" << num(margin + 30) << "\" y=\"" << num(y + 4) << "\">"
       << subscript_label(i) << "</text>\n";
  }
  os << "</g>\n";
  os << "</svg>\n";
  return os.str();
}

// --- commands -------------------------------------------------------------------

int cmd_enumerate(const EnumerateOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const LoadedSystem sys = load_system(opts.matrix);
    const SearchConfig cfg =
        search_config(opts.m_max, opts.prune_negative_sum, opts.workers, opts.node_limit);
    const EnumerationResult res = enumerate_kirchhoff(sys.system, cfg);
    const GraphDocument doc =
        make_document(sys, res.graphs, opts.m_max, res.complete, opts.classify_prime);

    std::size_t self = 0, paired = 0, primes = 0;
    for (const GraphRecord& r : doc.graphs) {
      if (r.self_chiral) ++self;
      if (r.chiral_of) ++paired;
      if (r.prime == "prime") ++primes;
    }
    out << plural(doc.graphs.size(), "graph", "graphs") << "; " << self << " self-chiral; "
        << plural(paired / 2, "chiral pair", "chiral pairs");
    if (opts.classify_prime) out << "; " << primes << " prime";
    out << "\n";
    if (opts.out) write_file(*opts.out, emit_json(doc));
    if (!res.complete) {
      err << "warning: node limit reached after " << res.stats.nodes_expanded
          << " nodes; document marked incomplete\n";
      return static_cast<int>(kExitTruncated);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const GraphDocument doc = load_document(opts.document);
    if (doc.graphs.empty()) {
      out << "trivial: document has no graphs\n";
      return static_cast<int>(kExitOk);
    }
    bool all_ok = true;
    for (const GraphRecord& rec : doc.graphs) {
      const KirchhoffVerdict v = is_kirchhoff(rec.graph);
      out << graph_name(rec.id) << ": " << v.describe() << "\n";
      all_ok = all_ok && v.ok();
    }
    return static_cast<int>(all_ok ? kExitOk : kExitVerifyFailed);
  });
}

int cmd_tile(const TileOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    LoadedSystem sys;
    std::vector<VectorGraph> graphs;
    if (opts.document) {
      GraphDocument doc = load_document(*opts.document);
      sys = doc.system;
      for (GraphRecord& r : doc.graphs) graphs.push_back(std::move(r.graph));
    } else if (opts.matrix) {
      sys = load_system(*opts.matrix);
      const EnumerationResult res =
          enumerate_kirchhoff(sys.system, search_config(opts.m_max, true, opts.workers));
      graphs = res.graphs;
    } else {
      throw CliError(kExitParseError, "tile needs --graphs or --matrix");
    }

    const TilingExpression expr = parse_tiling_expression(opts.expression, sys.system->k());
    const VectorGraph result = evaluate(expr, graphs);
    const KirchhoffVerdict verdict = is_kirchhoff(result);
    const Multiplicity mult = multiplicity(result);

    out << "expression: " << to_string(expr) << "\n";
    out << "result: " << verdict.describe() << "; "
        << (mult.m ? "multiplicity " + std::to_string(*mult.m) : std::string("non-uniform"))
        << "; " << (is_vector_2_connected(result) ? "" : "not ") << "vector 2-connected\n";

    GraphDocument doc = make_document(sys, {canonicalize(result)}, std::nullopt, true, false);
    if (opts.check_prime) {
      const PrimalityVerdict p = is_prime(result);
      doc.graphs.front().prime = to_string(p.status);
      out << "prime: " << to_string(p.status) << "\n";
    }
    if (opts.out) write_file(*opts.out, emit_json(doc));
    return static_cast<int>(verdict.ok() ? kExitOk : kExitVerifyFailed);
  });
}

int cmd_render(const RenderOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.format != "svg" && opts.format != "dot") {
      throw CliError(kExitParseError, "render format must be svg or dot");
    }
    const GraphDocument doc = load_document(opts.document);
    std::vector<std::size_t> ids;
    if (opts.selection) {
      ids = *opts.selection;
      for (std::size_t id : ids) {
        if (id >= doc.graphs.size()) throw CliError(kExitParseError, "no graph " + graph_name(id));
      }
    } else {
      for (const GraphRecord& r : doc.graphs) ids.push_back(r.id);
    }
    if (ids.empty()) return static_cast<int>(kExitOk);
    if (doc.system.system->k() > 2) {
      err << "warning: k = " << doc.system.system->k()
          << "; drawing the projection onto the first two coordinates\n";
    }
    std::filesystem::create_directories(opts.out_dir);
    for (std::size_t id : ids) {
      const GraphRecord& rec = doc.graphs[id];
      const std::string path =
          (std::filesystem::path(opts.out_dir) / (graph_name(id) + "." + opts.format)).string();
      write_file(path, opts.format == "svg" ? render_svg(doc, rec) : render_dot(doc, rec));
      out << path << "\n";
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_fundamental(const FundamentalOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const LoadedSystem sys = load_system(opts.matrix);
    const EnumerationResult res = enumerate_kirchhoff(
        sys.system, search_config(opts.m_max, opts.prune_negative_sum, opts.workers));
    if (opts.coeff_bound < 1) throw CliError(kExitParseError, "--coeff-bound must be at least 1");
    const FundamentalSets fs = fundamental_sets(res.graphs, opts.coeff_bound);

    auto set_text = [](const std::vector<std::size_t>& subset) {
      std::string s = "{";
      for (std::size_t i = 0; i < subset.size(); ++i) s += (i ? ", " : "") + graph_name(subset[i]);
      return s + "}";
    };
    out << plural(res.graphs.size(), "graph", "graphs") << " with m <= " << opts.m_max << "\n";
    if (res.graphs.empty()) {
      out << "nothing to generate\n";
    } else if (fs.subsets.empty()) {
      out << "m* = " << fs.m_star << "; no generating subset found within the bounds\n";
    } else {
      out << "m* = " << fs.m_star << "; " << plural(fs.subsets.size(), "fundamental set",
                                                    "fundamental sets")
          << " of cardinality " << fs.cardinality << ":\n";
      for (const auto& s : fs.subsets) out << "  " << set_text(s) << "\n";
    }
    out << "bound-relative: span searches used at most " << fs.coeff_bound
        << " placements per expression inside the default offset window\n";

    if (opts.out) {
      Json j;
      j["m_max"] = opts.m_max;
      j["graphs"] = res.graphs.size();
      j["m_star"] = fs.m_star;
      j["cardinality"] = fs.cardinality;
      j["subsets"] = fs.subsets;
      j["coeff_bound"] = fs.coeff_bound;
      j["bound_relative"] = fs.bound_relative;
      write_file(*opts.out, pretty(j));
    }
    if (!res.complete) {
      err << "warning: enumeration incomplete\n";
      return static_cast<int>(kExitTruncated);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_min_multiplicity(const MinMultiplicityOptions& opts, std::ostream& out,
                         std::ostream& err) {
  return guarded(err, [&] {
    const LoadedSystem sys = load_system(opts.matrix);
    if (opts.m_limit < 1) throw CliError(kExitParseError, "--m-max must be at least 1");
    const auto m = min_multiplicity(sys.system, opts.m_limit, std::max(1u, opts.workers));
    if (m) {
      out << "minimum multiplicity: " << *m << "\n";
    } else {
      out << "no Kirchhoff graph with multiplicity <= " << opts.m_limit << "\n";
    }
    return static_cast<int>(kExitOk);
  });
}

// --- argument parsing -------------------------------------------------------------

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Enumerate, tile and draw uniform Kirchhoff graphs", "kgraph"};
  app.require_subcommand(1);

  std::string matrix_path;
  bool row_matrix = false;
  std::int64_t m_max = 1;
  std::string out_path;
  std::string format;
  bool classify_prime = false;
  bool no_prune = false;
  std::uint64_t node_limit = 0;
  int coeff_bound = kDefaultCoeffBound;
  unsigned workers = 1;
  std::string document;
  std::string graphs_path;
  std::string expression;
  bool check_prime = false;
  std::vector<std::string> selection;

  auto add_matrix = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("--matrix", matrix_path, "Matrix file (edge vectors as columns)");
    if (required) opt->required();
    sub->add_flag("--row-matrix", row_matrix, "Read the file as a row matrix [qI | C]");
  };
  auto add_workers = [&](CLI::App* sub) {
    sub->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* enumerate = app.add_subcommand("enumerate", "Enumerate uniform Kirchhoff graphs");
  add_matrix(enumerate, true);
  enumerate->add_option("--m-max", m_max, "Multiplicity bound")->required();
  enumerate->add_option("--out", out_path, "Write the JSON document here");
  enumerate->add_option("--format", format, "Output format")->check(CLI::IsMember({"json"}));
  enumerate->add_flag("--classify-prime", classify_prime, "Classify each graph as prime or composite");
  enumerate->add_flag("--no-negative-sum-prune", no_prune, "Search without the coordinate-sum pruning");
  enumerate->add_option("--node-limit", node_limit, "Stop after this many search nodes");
  add_workers(enumerate);

  auto* verify = app.add_subcommand("verify", "Check every graph of a document");
  verify->add_option("document", document, "GraphDocument JSON")->required();

  auto* tile = app.add_subcommand("tile", "Evaluate a tiling expression");
  tile->add_option("expression", expression, "e.g. \"4*G0@(0,0) - 1*G1@(1,1)\"")->required();
  tile->add_option("--graphs", graphs_path, "Document whose graphs G0, G1, ... are referenced");
  add_matrix(tile, false);
  tile->add_option("--m-max", m_max, "Multiplicity bound when enumerating from --matrix");
  tile->add_option("--out", out_path, "Write the result document here");
  tile->add_flag("--check-prime,--classify-prime", check_prime, "Classify the result");
  add_workers(tile);

  auto* render = app.add_subcommand("render", "Draw graphs as SVG or DOT");
  render->add_option("document", document, "GraphDocument JSON")->required();
  render->add_option("--format", format, "svg or dot")->check(CLI::IsMember({"svg", "dot"}));
  render->add_option("--select", selection, "Graph ids to draw (default: all)")->expected(0, -1);
  render->add_option("--out", out_path, "Output directory");

  auto* fundamental = app.add_subcommand("fundamental", "Find minimum generating subsets");
  add_matrix(fundamental, true);
  fundamental->add_option("--m-max", m_max, "Multiplicity bound")->required();
  fundamental->add_option("--coeff-bound", coeff_bound, "Maximum placements per expression");
  fundamental->add_flag("--no-negative-sum-prune", no_prune, "Search without the coordinate-sum pruning");
  fundamental->add_option("--out", out_path, "Write a JSON report here");
  add_workers(fundamental);

  auto* minmult = app.add_subcommand("min-multiplicity", "Smallest multiplicity of any graph");
  add_matrix(minmult, true);
  minmult->add_option("--m-max", m_max, "Largest multiplicity to try")->required();
  add_workers(minmult);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? static_cast<int>(kExitOk) : static_cast<int>(kExitParseError);
  }

  const MatrixMode mode = row_matrix ? MatrixMode::row_matrix : MatrixMode::edge_vectors;
  auto load_matrix = [&](MatrixInput& into) -> int {
    return guarded(err, [&] {
      into = MatrixInput::from_file(matrix_path, mode);
      return static_cast<int>(kExitOk);
    });
  };
  auto optional_out = [&]() -> std::optional<std::string> {
    if (out_path.empty()) return std::nullopt;
    return out_path;
  };

  if (enumerate->parsed()) {
    EnumerateOptions o;
    if (int rc = load_matrix(o.matrix)) return rc;
    o.m_max = m_max;
    o.out = optional_out();
    o.classify_prime = classify_prime;
    o.prune_negative_sum = !no_prune;
    if (enumerate->count("--node-limit")) o.node_limit = node_limit;
    o.workers = workers;
    return cmd_enumerate(o, out, err);
  }
  if (verify->parsed()) return cmd_verify(VerifyOptions{document}, out, err);
  if (tile->parsed()) {
    TileOptions o;
    o.expression = expression;
    if (!graphs_path.empty()) {
      o.document = graphs_path;
    } else if (!matrix_path.empty()) {
      MatrixInput m;
      if (int rc = load_matrix(m)) return rc;
      o.matrix = m;
    }
    o.m_max = m_max;
    o.out = optional_out();
    o.check_prime = check_prime;
    o.workers = workers;
    return cmd_tile(o, out, err);
  }
  if (render->parsed()) {
    RenderOptions o;
    o.document = document;
    if (!format.empty()) o.format = format;
    if (render->count("--select")) {
      // Ids may be written as 3 or G3, separated by spaces or commas.
      std::vector<std::size_t> ids;
      for (std::string token : selection) {
        std::replace(token.begin(), token.end(), ',', ' ');
        std::istringstream parts(token);
        std::string part;
        while (parts >> part) {
          if (part[0] == 'G' || part[0] == 'g') part.erase(0, 1);
          if (part.empty() || !std::all_of(part.begin(), part.end(), ::isdigit)) {
            err << "error: bad graph id '" << part << "' in --select\n";
            return static_cast<int>(kExitParseError);
          }
          ids.push_back(std::stoul(part));
        }
      }
      o.selection = ids;
    }
    if (!out_path.empty()) o.out_dir = out_path;
    return cmd_render(o, out, err);
  }
  if (fundamental->parsed()) {
    FundamentalOptions o;
    if (int rc = load_matrix(o.matrix)) return rc;
    o.m_max = m_max;
    o.coeff_bound = coeff_bound;
    o.prune_negative_sum = !no_prune;
    o.workers = workers;
    o.out = optional_out();
    return cmd_fundamental(o, out, err);
  }
  MinMultiplicityOptions o;
  if (int rc = load_matrix(o.matrix)) return rc;
  o.m_limit = m_max;
  o.workers = workers;
  return cmd_min_multiplicity(o, out, err);
}

}  // namespace kirchhoff::cli
