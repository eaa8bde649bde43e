#include "kirchhoff/enumerator.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <thread>

namespace kirchhoff {

SearchStats& SearchStats::operator+=(const SearchStats& other) {
  nodes_expanded += other.nodes_expanded;
  multiplicity_prunes += other.multiplicity_prunes;
  coordinate_prunes += other.coordinate_prunes;
  graphs_found += other.graphs_found;
  backtracks += other.backtracks;
  rejected_leaves += other.rejected_leaves;
  return *this;
}

const char* to_string(AssignStatus status) {
  switch (status) {
    case AssignStatus::ok: return "ok";
    case AssignStatus::multiplicity_exceeded: return "MultiplicityExceeded";
    case AssignStatus::negative_sum: return "NegativeSum";
    case AssignStatus::below_anchor: return "BelowAnchor";
    case AssignStatus::closed_vertex: return "ClosedVertex";
    case AssignStatus::not_pending: return "NotPending";
  }
  return "unknown";
}

namespace {

std::int64_t l1_norm(const IntVector& v) {
  std::int64_t s = 0;
  for (auto x : v) s += std::abs(x);
  return s;
}

}  // namespace

SearchSpace::SearchSpace(SystemRef system, SearchConfig config)
    : system_(std::move(system)), config_(config) {
  if (config_.m_max < 1) throw std::invalid_argument("m_max must be at least 1");
  for (auto& cut : enumerate_bounded_cuts(*system_, config_.m_max)) {
    if (std::any_of(cut.begin(), cut.end(), [](auto x) { return x != 0; })) {
      cuts_.push_back(std::move(cut));
    }
  }
  switch (config_.cut_order) {
    case CutOrder::lexicographic:
      break;
    case CutOrder::reverse_lexicographic:
      std::reverse(cuts_.begin(), cuts_.end());
      break;
    case CutOrder::by_norm:
      std::stable_sort(cuts_.begin(), cuts_.end(), [](const IntVector& a, const IntVector& b) {
        return l1_norm(a) < l1_norm(b);
      });
      break;
  }
}

bool PartialGraph::VertexLess::operator()(const Coordinate& a, const Coordinate& b) const {
  if (by_sum) {
    const auto sa = a.sum();
    const auto sb = b.sum();
    if (sa != sb) return sa < sb;
  }
  return a < b;
}

bool SearchSpace::precedes(const Coordinate& a, const Coordinate& b) const {
  return PartialGraph::VertexLess{config_.prune_negative_sum}(a, b);
}

PartialGraph::PartialGraph(const SearchSpace& space)
    : graph_(space.system_ref()),
      counts_(space.system().n(), 0),
      todo_(VertexLess{space.config().prune_negative_sum}) {
  todo_.insert(Coordinate::origin(space.system().k()));
}

IntVector PartialGraph::current_cut(const Coordinate& v) const {
  IntVector cut(counts_.size(), 0);
  for (std::size_t i = 0; i < cut.size(); ++i) {
    cut[i] = graph_.edge_count(v, i) - graph_.edge_count(v - graph_.displacement(i), i);
  }
  return cut;
}

namespace {

AssignStatus check_neighbor(const PartialGraph& partial, const Coordinate& u,
                            const SearchSpace& space) {
  if (partial.is_closed(u)) return AssignStatus::closed_vertex;
  if (space.config().prune_negative_sum && u.sum() < 0) return AssignStatus::negative_sum;
  if (space.precedes(u, Coordinate::origin(u.size()))) return AssignStatus::below_anchor;
  return AssignStatus::ok;
}

}  // namespace

AssignStatus assign_cut(PartialGraph& partial, const Coordinate& v, const IntVector& target,
                        const IntVector& passthrough, const SearchSpace& space) {
  if (!partial.todo_.count(v) || partial.is_closed(v)) return AssignStatus::not_pending;
  const std::size_t n = space.system().n();
  const IntVector cur = partial.current_cut(v);
  IntVector exits(n), enters(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t d = target[i] - cur[i];
    exits[i] = std::max<std::int64_t>(d, 0) + passthrough[i];
    enters[i] = std::max<std::int64_t>(-d, 0) + passthrough[i];
    if (partial.counts_[i] + exits[i] + enters[i] > space.config().m_max) {
      return AssignStatus::multiplicity_exceeded;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Coordinate& s = partial.graph_.displacement(i);
    if (exits[i] > 0) {
      if (auto st = check_neighbor(partial, v + s, space); st != AssignStatus::ok) return st;
    }
    if (enters[i] > 0) {
      if (auto st = check_neighbor(partial, v - s, space); st != AssignStatus::ok) return st;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Coordinate& s = partial.graph_.displacement(i);
    if (exits[i] > 0) {
      partial.graph_.add_edge(v, i, exits[i]);
      partial.todo_.insert(v + s);
    }
    if (enters[i] > 0) {
      partial.graph_.add_edge(v - s, i, enters[i]);
      partial.todo_.insert(v - s);
    }
    partial.counts_[i] += exits[i] + enters[i];
  }
  partial.todo_.erase(v);
  partial.assigned_.emplace(v, target);
  return AssignStatus::ok;
}

VisitPlan visit_next(const PartialGraph& partial, const SearchSpace& space, SearchStats* stats) {
  const std::size_t n = space.system().n();
  const std::int64_t m_max = space.config().m_max;
  VisitPlan plan{*partial.todo().begin(), {}};
  const Coordinate& v = plan.vertex;
  const IntVector cur = partial.current_cut(v);
  const bool anchor_start = partial.graph().empty();

  std::vector<AssignStatus> forward(n), backward(n);
  std::vector<std::int64_t> remaining(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Coordinate& s = partial.graph().displacement(i);
    forward[i] = check_neighbor(partial, v + s, space);
    backward[i] = check_neighbor(partial, v - s, space);
    remaining[i] = m_max - partial.counts()[i];
  }

  const IntVector zero(n, 0);
  if (!anchor_start && in_row_space(cur, space.system())) plan.choices.push_back({cur, zero});

  auto consider = [&](const IntVector& target) {
    std::vector<std::int64_t> max_pass(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t d = target[i] - cur[i];
      const std::int64_t x = std::max<std::int64_t>(d, 0);
      const std::int64_t y = std::max<std::int64_t>(-d, 0);
      if (x + y > remaining[i]) {
        if (stats) ++stats->multiplicity_prunes;
        return;
      }
      const AssignStatus blocked =
          x > 0 && forward[i] != AssignStatus::ok    ? forward[i]
          : y > 0 && backward[i] != AssignStatus::ok ? backward[i]
                                                     : AssignStatus::ok;
      if (blocked != AssignStatus::ok) {
        if (stats && blocked != AssignStatus::closed_vertex) ++stats->coordinate_prunes;
        return;
      }
      if (forward[i] == AssignStatus::ok && backward[i] == AssignStatus::ok) {
        max_pass[i] = (remaining[i] - x - y) / 2;
      }
    }
    // Pass-through pairs (one copy in, one copy out) leave the cut unchanged.
    IntVector pass(n, 0);
    while (true) {
      const bool keep = target == cur && pass == zero;
      if (!(keep && !plan.choices.empty() && plan.choices.front().target == cur)) {
        plan.choices.push_back({target, pass});
      }
      std::size_t i = 0;
      for (; i < n; ++i) {
        if (pass[i] < max_pass[i]) {
          ++pass[i];
          break;
        }
        pass[i] = 0;
      }
      if (i == n) break;
    }
  };

  for (const IntVector& target : space.cuts()) consider(target);
  if (!anchor_start) consider(zero);
  return plan;
}

namespace {

struct GraphLess {
  bool operator()(const VectorGraph& a, const VectorGraph& b) const { return a.compare(b) < 0; }
};

class Worker {
 public:
  Worker(const SearchSpace& space, std::atomic<std::uint64_t>& nodes,
         std::atomic<bool>& truncated)
      : space_(space), nodes_(nodes), truncated_(truncated) {}

  void descend(const PartialGraph& partial) {
    if (truncated_.load(std::memory_order_relaxed)) return;
    const std::uint64_t seen = nodes_.fetch_add(1, std::memory_order_relaxed) + 1;
    if (space_.config().node_limit && seen > *space_.config().node_limit) {
      truncated_.store(true);
      return;
    }
    ++stats_.nodes_expanded;
    if (partial.todo().empty()) {
      accept(partial.graph());
      return;
    }
    const VisitPlan plan = visit_next(partial, space_, &stats_);
    if (plan.choices.empty()) {
      ++stats_.backtracks;
      return;
    }
    for (const CutChoice& choice : plan.choices) {
      PartialGraph child = partial;
      if (assign_cut(child, plan.vertex, choice.target, choice.passthrough, space_) ==
          AssignStatus::ok) {
        descend(child);
      }
    }
  }

  void accept(const VectorGraph& g) {
    if (!multiplicity(g).uniform || !is_kirchhoff(g).ok()) {
      ++stats_.rejected_leaves;
      return;
    }
    ++stats_.graphs_found;
    found_.insert(canonicalize(g));
  }

  SearchStats& stats() { return stats_; }
  std::set<VectorGraph, GraphLess>& found() { return found_; }

 private:
  const SearchSpace& space_;
  std::atomic<std::uint64_t>& nodes_;
  std::atomic<bool>& truncated_;
  SearchStats stats_;
  std::set<VectorGraph, GraphLess> found_;
};

}  // namespace

EnumerationResult enumerate_kirchhoff(SystemRef system, const SearchConfig& config) {
  const SearchSpace space(std::move(system), config);
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<bool> truncated{false};

  // The anchor's alternatives are independent subtrees.
  const PartialGraph root(space);
  SearchStats root_stats;
  const VisitPlan plan = visit_next(root, space, &root_stats);
  ++root_stats.nodes_expanded;
  nodes.fetch_add(1);

  const unsigned workers = std::max(1u, config.workers);
  std::vector<Worker> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(space, nodes, truncated);
  std::atomic<std::size_t> next{0};
  auto run = [&](Worker& worker) {
    for (std::size_t i = next.fetch_add(1); i < plan.choices.size(); i = next.fetch_add(1)) {
      PartialGraph child = root;
      const CutChoice& choice = plan.choices[i];
      if (assign_cut(child, plan.vertex, choice.target, choice.passthrough, space) ==
          AssignStatus::ok) {
        worker.descend(child);
      }
    }
  };
  if (workers == 1) {
    run(pool.front());
  } else {
    std::vector<std::thread> threads;
    for (auto& worker : pool) threads.emplace_back(run, std::ref(worker));
    for (auto& t : threads) t.join();
  }

  EnumerationResult result;
  result.stats = root_stats;
  std::set<VectorGraph, GraphLess> merged;
  for (auto& worker : pool) {
    result.stats += worker.stats();
    merged.merge(worker.found());
  }
  result.graphs.assign(merged.begin(), merged.end());
  result.complete = !truncated.load();
  return result;
}

std::optional<std::int64_t> min_multiplicity(SystemRef system, std::int64_t m_limit,
                                             unsigned workers) {
  for (std::int64_t m = 1; m <= m_limit; ++m) {
    SearchConfig config;
    config.m_max = m;
    config.workers = workers;
    if (!enumerate_kirchhoff(system, config).graphs.empty()) return m;
  }
  return std::nullopt;
}

}  // namespace kirchhoff
