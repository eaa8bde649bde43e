#include "kirchhoff/vgraph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

namespace kirchhoff {

std::int64_t Coordinate::sum() const {
  return std::accumulate(components.begin(), components.end(), std::int64_t{0});
}

Coordinate operator+(const Coordinate& a, const Coordinate& b) {
  Coordinate out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out.components[i] += b.components[i];
  return out;
}

Coordinate operator-(const Coordinate& a, const Coordinate& b) {
  Coordinate out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out.components[i] -= b.components[i];
  return out;
}

Coordinate operator-(const Coordinate& a) {
  Coordinate out = a;
  for (auto& c : out.components) c = -c;
  return out;
}

std::string to_string(const Coordinate& c) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << ')';
  return os.str();
}

VectorGraph::VectorGraph(SystemRef system) : system_(std::move(system)) {
  for (std::size_t i = 0; i < system_->n(); ++i) {
    displacement_.emplace_back(system_->edge_vector(i));
  }
}

void VectorGraph::check_index(std::size_t vec_index) const {
  if (vec_index >= system_->n()) {
    throw GraphError(GraphError::Kind::invalid_edge, "edge vector index out of range");
  }
}

void VectorGraph::add_edge(const Coordinate& tail, std::size_t vec_index, std::int64_t copies) {
  check_index(vec_index);
  if (tail.size() != system_->k()) {
    throw GraphError(GraphError::Kind::invalid_edge, "coordinate length differs from k");
  }
  if (copies <= 0) return;
  edges_[EdgeKey{tail, vec_index}] += copies;
}

bool VectorGraph::remove_edge(const Coordinate& tail, std::size_t vec_index, std::int64_t copies) {
  auto it = edges_.find(EdgeKey{tail, vec_index});
  if (copies <= 0) return true;
  if (it == edges_.end() || it->second < copies) return false;
  it->second -= copies;
  if (it->second == 0) edges_.erase(it);
  return true;
}

std::int64_t VectorGraph::edge_count(const Coordinate& tail, std::size_t vec_index) const {
  auto it = edges_.find(EdgeKey{tail, vec_index});
  return it == edges_.end() ? 0 : it->second;
}

Coordinate VectorGraph::head_of(const Coordinate& tail, std::size_t vec_index) const {
  check_index(vec_index);
  return tail + displacement_[vec_index];
}

EdgeInstance VectorGraph::instance(const Coordinate& tail, std::size_t vec_index) const {
  return EdgeInstance{tail, vec_index, head_of(tail, vec_index)};
}

std::int64_t VectorGraph::total_edge_count() const {
  std::int64_t total = 0;
  for (const auto& [key, count] : edges_) total += count;
  return total;
}

std::vector<Coordinate> VectorGraph::vertices() const {
  std::set<Coordinate> seen;
  for (const auto& [key, count] : edges_) {
    seen.insert(key.tail);
    seen.insert(key.tail + displacement_[key.vec_index]);
  }
  return {seen.begin(), seen.end()};
}

bool VectorGraph::has_vertex(const Coordinate& v) const {
  if (v.size() != system_->k()) return false;
  for (std::size_t i = 0; i < displacement_.size(); ++i) {
    if (edges_.count(EdgeKey{v, i}) || edges_.count(EdgeKey{v - displacement_[i], i})) {
      return true;
    }
  }
  return false;
}

std::vector<VectorGraph::Edge> VectorGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edges_.size());
  for (const auto& [key, count] : edges_) {
    out.push_back(Edge{instance(key.tail, key.vec_index), count});
  }
  return out;
}

VectorGraph VectorGraph::translated(const Coordinate& offset) const {
  VectorGraph out(system_);
  for (const auto& [key, count] : edges_) {
    out.edges_.emplace(EdgeKey{key.tail + offset, key.vec_index}, count);
  }
  return out;
}

bool VectorGraph::operator==(const VectorGraph& other) const {
  return (system_ == other.system_ || *system_ == *other.system_) && edges_ == other.edges_;
}

std::strong_ordering VectorGraph::compare(const VectorGraph& other) const {
  auto a = edges_.begin();
  auto b = other.edges_.begin();
  for (; a != edges_.end() && b != other.edges_.end(); ++a, ++b) {
    if (auto c = a->first <=> b->first; c != 0) return c;
    if (auto c = a->second <=> b->second; c != 0) return c;
  }
  return edges_.size() <=> other.edges_.size();
}

std::string KirchhoffVerdict::describe() const {
  auto vec = [](const IntVector& v) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ']';
    return os.str();
  };
  std::ostringstream os;
  os << to_string(status);
  switch (status) {
    case Status::bad_vertex:
      os << " at " << to_string(*vertex) << " cut " << vec(cut);
      break;
    case Status::bad_cycle:
      os << " cycle vector " << vec(cycle);
      break;
    case Status::cycle_space_deficient:
      os << " rank " << rank_found << " of " << rank_required;
      break;
    default:
      break;
  }
  return os.str();
}

const char* to_string(KirchhoffVerdict::Status status) {
  switch (status) {
    case KirchhoffVerdict::Status::ok: return "ok";
    case KirchhoffVerdict::Status::bad_vertex: return "bad_vertex";
    case KirchhoffVerdict::Status::bad_cycle: return "bad_cycle";
    case KirchhoffVerdict::Status::cycle_space_deficient: return "cycle_space_deficient";
    case KirchhoffVerdict::Status::trivial: return "trivial";
  }
  return "unknown";
}

VertexCutVector vertex_cut(const VectorGraph& g, const Coordinate& v) {
  if (!g.has_vertex(v)) {
    throw GraphError(GraphError::Kind::vertex_not_found, "vertex " + to_string(v) + " not in graph");
  }
  const std::size_t n = g.system().n();
  VertexCutVector cut{IntVector(n, 0)};
  for (std::size_t i = 0; i < n; ++i) {
    cut.entries[i] = g.edge_count(v, i) - g.edge_count(v - g.displacement(i), i);
  }
  return cut;
}

CycleVector cycle_vector(const VectorGraph& g, const Walk& walk) {
  const auto& vs = walk.vertices;
  if (vs.size() != walk.steps.size() + 1 || walk.steps.empty() || vs.front() != vs.back()) {
    throw GraphError(GraphError::Kind::walk_not_closed, "walk is not closed");
  }
  std::set<Coordinate> interior;
  for (std::size_t j = 0; j + 1 < vs.size(); ++j) {
    if (!interior.insert(vs[j]).second) {
      throw GraphError(GraphError::Kind::walk_not_cycle, "walk repeats vertex " + to_string(vs[j]));
    }
  }
  CycleVector chi{IntVector(g.system().n(), 0)};
  for (std::size_t j = 0; j < walk.steps.size(); ++j) {
    const WalkStep& step = walk.steps[j];
    const EdgeInstance& e = step.edge;
    if (e.vec_index >= g.system().n() || g.head_of(e.tail, e.vec_index) != e.head ||
        step.copy < 0 || step.copy >= g.edge_count(e.tail, e.vec_index)) {
      throw GraphError(GraphError::Kind::edge_not_in_graph, "walk uses an edge not in the graph");
    }
    if (e.tail == vs[j] && e.head == vs[j + 1]) {
      ++chi.entries[e.vec_index];
    } else if (e.head == vs[j] && e.tail == vs[j + 1]) {
      --chi.entries[e.vec_index];
    } else {
      throw GraphError(GraphError::Kind::walk_not_closed,
                       "consecutive walk edges do not share endpoints");
    }
  }
  return chi;
}

namespace {

struct TreeLink {
  std::size_t parent = 0;
  WalkStep step;
  std::size_t depth = 0;
  bool root = true;
};

}  // namespace

std::vector<Walk> cycle_basis(const VectorGraph& g) {
  const std::vector<Coordinate> verts = g.vertices();
  std::map<Coordinate, std::size_t> index;
  for (std::size_t i = 0; i < verts.size(); ++i) index.emplace(verts[i], i);

  struct Incidence {
    std::size_t other;
    std::size_t edge;  // position in the sorted copy list
  };
  struct Copy {
    WalkStep step;
    std::size_t tail;
    std::size_t head;
  };
  std::vector<Copy> copies;
  std::vector<std::vector<Incidence>> adjacency(verts.size());
  for (const auto& e : g.edges()) {
    const std::size_t t = index.at(e.instance.tail);
    const std::size_t h = index.at(e.instance.head);
    for (std::int64_t c = 0; c < e.count; ++c) {
      adjacency[t].push_back({h, copies.size()});
      adjacency[h].push_back({t, copies.size()});
      copies.push_back({WalkStep{e.instance, c}, t, h});
    }
  }

  std::vector<TreeLink> link(verts.size());
  std::vector<bool> visited(verts.size(), false);
  std::vector<bool> tree_edge(copies.size(), false);
  for (std::size_t root = 0; root < verts.size(); ++root) {
    if (visited[root]) continue;
    visited[root] = true;
    std::deque<std::size_t> queue{root};
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (const Incidence& inc : adjacency[u]) {
        if (visited[inc.other]) continue;
        visited[inc.other] = true;
        tree_edge[inc.edge] = true;
        link[inc.other] = TreeLink{u, copies[inc.edge].step, link[u].depth + 1, false};
        queue.push_back(inc.other);
      }
    }
  }

  std::vector<Walk> cycles;
  for (std::size_t e = 0; e < copies.size(); ++e) {
    if (tree_edge[e]) continue;
    // tail -> head along the edge, then head up to the common ancestor and
    // back down to tail.
    std::vector<std::size_t> up_from_head{copies[e].head};
    std::vector<std::size_t> up_from_tail{copies[e].tail};
    std::size_t a = copies[e].head;
    std::size_t b = copies[e].tail;
    std::vector<WalkStep> head_steps;
    std::vector<WalkStep> tail_steps;
    while (link[a].depth > link[b].depth) {
      head_steps.push_back(link[a].step);
      a = link[a].parent;
      up_from_head.push_back(a);
    }
    while (link[b].depth > link[a].depth) {
      tail_steps.push_back(link[b].step);
      b = link[b].parent;
      up_from_tail.push_back(b);
    }
    while (a != b) {
      head_steps.push_back(link[a].step);
      a = link[a].parent;
      up_from_head.push_back(a);
      tail_steps.push_back(link[b].step);
      b = link[b].parent;
      up_from_tail.push_back(b);
    }
    Walk w;
    w.vertices.push_back(verts[copies[e].tail]);
    w.steps.push_back(copies[e].step);
    for (std::size_t j = 0; j < head_steps.size(); ++j) {
      w.vertices.push_back(verts[up_from_head[j]]);
      w.steps.push_back(head_steps[j]);
    }
    w.vertices.push_back(verts[up_from_head.back()]);
    for (std::size_t j = tail_steps.size(); j-- > 0;) {
      w.steps.push_back(tail_steps[j]);
      w.vertices.push_back(verts[up_from_tail[j]]);
    }
    cycles.push_back(std::move(w));
  }
  return cycles;
}

std::vector<IntVector> fundamental_cycle_vectors(const VectorGraph& g) {
  std::vector<IntVector> out;
  for (const Walk& w : cycle_basis(g)) out.push_back(cycle_vector(g, w).entries);
  return out;
}

KirchhoffVerdict is_kirchhoff(const VectorGraph& g) {
  KirchhoffVerdict verdict;
  if (g.empty()) {
    verdict.status = KirchhoffVerdict::Status::trivial;
    return verdict;
  }
  const RowSystem& sys = g.system();
  for (const Coordinate& v : g.vertices()) {
    VertexCutVector cut = vertex_cut(g, v);
    if (!in_row_space(cut.entries, sys)) {
      verdict.status = KirchhoffVerdict::Status::bad_vertex;
      verdict.vertex = v;
      verdict.cut = std::move(cut.entries);
      return verdict;
    }
  }
  const std::vector<IntVector> chis = fundamental_cycle_vectors(g);
  for (const IntVector& chi : chis) {
    if (!in_null_space(chi, sys)) {
      verdict.status = KirchhoffVerdict::Status::bad_cycle;
      verdict.cycle = chi;
      return verdict;
    }
  }
  verdict.rank_found = span_rank(chis);
  verdict.rank_required = sys.n() - sys.k();
  if (verdict.rank_found != verdict.rank_required) {
    verdict.status = KirchhoffVerdict::Status::cycle_space_deficient;
  }
  return verdict;
}

Multiplicity multiplicity(const VectorGraph& g) {
  Multiplicity out{IntVector(g.system().n(), 0), true, std::nullopt};
  for (const auto& [key, count] : g.edge_map()) out.counts[key.vec_index] += count;
  out.uniform = std::adjacent_find(out.counts.begin(), out.counts.end(),
                                   std::not_equal_to<>()) == out.counts.end();
  if (out.uniform) out.m = out.counts.empty() ? 0 : out.counts.front();
  return out;
}

bool is_vector_2_connected(const VectorGraph& g) {
  // A pair (i, j) is covered by the span W of the cycle vectors iff neither
  // coordinate vanishes identically on W: W is not the union of the two
  // proper subspaces {w_i = 0} and {w_j = 0}.
  const std::size_t n = g.system().n();
  if (n < 2) return false;
  std::vector<bool> supported(n, false);
  for (const IntVector& chi : fundamental_cycle_vectors(g)) {
    for (std::size_t i = 0; i < n; ++i) supported[i] = supported[i] || chi[i] != 0;
  }
  return std::all_of(supported.begin(), supported.end(), [](bool b) { return b; });
}

bool is_connected(const VectorGraph& g) {
  const std::vector<Coordinate> verts = g.vertices();
  if (verts.empty()) return true;
  std::set<Coordinate> seen{verts.front()};
  std::deque<Coordinate> queue{verts.front()};
  const std::size_t n = g.system().n();
  while (!queue.empty()) {
    const Coordinate u = queue.front();
    queue.pop_front();
    for (std::size_t i = 0; i < n; ++i) {
      const Coordinate& s = g.displacement(i);
      if (g.edge_count(u, i) > 0 && seen.insert(u + s).second) queue.push_back(u + s);
      if (g.edge_count(u - s, i) > 0 && seen.insert(u - s).second) queue.push_back(u - s);
    }
  }
  return seen.size() == verts.size();
}

VectorGraph canonicalize(const VectorGraph& g) {
  if (g.empty()) return g;
  return g.translated(-g.vertices().front());
}

VectorGraph chiral(const VectorGraph& g) {
  VectorGraph out(g.system_ref());
  for (const auto& [key, count] : g.edge_map()) {
    // u -> v becomes -v -> -u, still labeled with the same edge vector.
    out.add_edge(-g.head_of(key.tail, key.vec_index), key.vec_index, count);
  }
  return canonicalize(out);
}

bool is_self_chiral(const VectorGraph& g) { return equals_up_to_translation(g, chiral(g)); }

bool equals_up_to_translation(const VectorGraph& a, const VectorGraph& b) {
  if (!(a.system() == b.system())) {
    throw GraphError(GraphError::Kind::system_mismatch, "graphs belong to different row systems");
  }
  return canonicalize(a) == canonicalize(b);
}

}  // namespace kirchhoff
