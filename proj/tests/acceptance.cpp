// Acceptance suite. Prints one PASS/FAIL line per criterion; `--criterion N`
// runs a single one. Exit status is nonzero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kirchhoff/cli.hpp"
#include "kirchhoff/enumerator.hpp"
#include "kirchhoff/tiling.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace kirchhoff;
namespace fs = std::filesystem;

namespace {

// Wall-clock budgets.
constexpr double kR1Seconds = 10.0;
constexpr double kR2Seconds = 30.0 * 60.0;
constexpr double kPrimeSecondsPerJ = 5.0 * 60.0;

const std::string kData = KG_DATA_DIR;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (!pass) detail << "; ";
      pass = false;
      detail << what;
    }
  }
};

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun kgraph(std::vector<std::string> args) {
  args.insert(args.begin(), "kgraph");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  const fs::path p = fs::temp_directory_path() / ("kg_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<VectorGraph> graphs_of(const cli::GraphDocument& doc) {
  std::vector<VectorGraph> out;
  for (const auto& r : doc.graphs) out.push_back(r.graph);
  return out;
}

bool contains_translate(const std::vector<VectorGraph>& set, const VectorGraph& g) {
  return std::any_of(set.begin(), set.end(),
                     [&](const VectorGraph& h) { return equals_up_to_translation(h, g); });
}

std::string subsets_text(const std::vector<std::vector<std::size_t>>& subsets) {
  std::ostringstream s;
  s << "[";
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    s << (i ? " " : "") << "{";
    for (std::size_t j = 0; j < subsets[i].size(); ++j) s << (j ? "," : "") << subsets[i][j];
    s << "}";
  }
  s << "]";
  return s.str();
}

const std::vector<VectorGraph>& basis() {
  static const PrimeFamilyBasis b = prime_family_basis();
  static const std::vector<VectorGraph> g{b.square, b.diamond};
  return g;
}

void criterion1(Outcome& o) {
  const fs::path dir = scratch_dir();
  const auto t0 = Clock::now();
  const auto run = kgraph({"enumerate", "--matrix", kData + "/R1.txt", "--m-max", "2", "--classify-prime",
                           "--out", (dir / "r1.json").string()});
  const double elapsed = seconds_since(t0);
  o.require(run.code == 0, "enumerate exit " + std::to_string(run.code));
  const cli::GraphDocument doc = cli::load_document((dir / "r1.json").string());
  o.require(doc.graphs.size() == 2, "count " + std::to_string(doc.graphs.size()) + " != 2");
  for (const auto& r : doc.graphs) {
    o.require(r.multiplicity == 2, "G" + std::to_string(r.id) + " m != 2");
    o.require(r.prime == "prime", "G" + std::to_string(r.id) + " is " + r.prime);
  }
  const auto fs_r1 = fundamental_sets(graphs_of(doc));
  o.require(fs_r1.subsets == std::vector<std::vector<std::size_t>>{{0, 1}},
            "fundamental sets " + subsets_text(fs_r1.subsets));
  o.require(elapsed < kR1Seconds, "enumeration took " + std::to_string(elapsed) + " s");
  o.detail << (o.pass ? "" : "; ") << "2 graphs, m=2, prime, fundamental; " << elapsed << " s";
  fs::remove_all(dir);
}

void criterion2(Outcome& o) {
  const fs::path dir = scratch_dir();
  const auto t0 = Clock::now();
  const auto run = kgraph({"enumerate", "--matrix", kData + "/R2.txt", "--m-max", "6", "--out",
                           (dir / "r2.json").string()});
  const double elapsed = seconds_since(t0);
  o.require(run.code == 0, "enumerate exit " + std::to_string(run.code));
  const cli::GraphDocument doc = cli::load_document((dir / "r2.json").string());
  std::size_t self = 0, paired = 0;
  for (const auto& r : doc.graphs) {
    if (r.self_chiral) ++self;
    if (r.chiral_of) {
      ++paired;
      o.require(doc.graphs[*r.chiral_of].chiral_of == r.id, "asymmetric chiral pairing");
    }
  }
  o.require(doc.graphs.size() == 16, "count " + std::to_string(doc.graphs.size()) + " != 16");
  o.require(self == 8, "self-chiral " + std::to_string(self) + " != 8");
  o.require(paired == 8, "paired graphs " + std::to_string(paired) + " != 8 (4 pairs)");

  const auto five = kgraph({"enumerate", "--matrix", kData + "/R2.txt", "--m-max", "5", "--out",
                            (dir / "r2m5.json").string()});
  o.require(five.code == 0, "m-max 5 exit " + std::to_string(five.code));
  o.require(cli::load_document((dir / "r2m5.json").string()).graphs.empty(), "m-max 5 is not empty");
  o.require(min_multiplicity(kgtest::r2_system(), 6) == 6, "min_multiplicity != 6");
  o.require(elapsed < kR2Seconds, "enumeration took " + std::to_string(elapsed) + " s");
  o.detail << (o.pass ? "" : "; ") << "16 graphs (8 self-chiral, 4 pairs), none at m<=5; " << elapsed
           << " s";
  fs::remove_all(dir);
}

void criterion3(Outcome& o) {
  const fs::path dir = scratch_dir();
  const auto run = kgraph({"enumerate", "--matrix", kData + "/R3.txt", "--m-max", "6", "--classify-prime",
                           "--out", (dir / "r3.json").string()});
  o.require(run.code == 0, "enumerate exit " + std::to_string(run.code));
  const cli::GraphDocument doc = cli::load_document((dir / "r3.json").string());
  std::size_t primes = 0, self = 0, paired = 0;
  for (const auto& r : doc.graphs) {
    if (r.prime != "prime") continue;
    ++primes;
    if (r.self_chiral) ++self;
    if (r.chiral_of && doc.graphs[*r.chiral_of].prime == "prime") ++paired;
  }
  o.require(primes == 4, "prime count " + std::to_string(primes) + " != 4");
  o.require(self == 2, "self-chiral primes " + std::to_string(self) + " != 2");
  o.require(paired == 2, "primes in a chiral pair " + std::to_string(paired) + " != 2");
  o.detail << (o.pass ? "" : "; ") << primes << " prime (" << self << " self-chiral, " << paired / 2
           << " pair); " << doc.graphs.size() << " graphs total";
  fs::remove_all(dir);
}

void criterion4(Outcome& o) {
  const VectorGraph& f1 = basis()[0];
  const VectorGraph& f2 = basis()[1];
  const TilingStep fig = add(f1, f2, {1, 1});
  o.require(fig.verdict.ok(), "F1 + F2@(1,1): " + fig.verdict.describe());
  o.require(multiplicity(fig.graph).m == 4, "F1 + F2@(1,1) is not uniform with m = 4");

  TilingExpression four;
  for (const Placement& p : prime_family_expression(1).placements)
    if (p.sign > 0) four.placements.push_back(p);
  const VectorGraph c1 = evaluate(four, basis());
  o.require(is_kirchhoff(c1).ok() && multiplicity(c1).m == 8, "4F1 is not Kirchhoff with m = 8");
  o.require(is_prime(c1).status == PrimalityVerdict::Status::composite, "4F1 not composite");

  const TilingStep p1 = subtract(c1, f2, {0, 0});
  o.require(p1.verdict.ok(), "4F1 - F2: " + p1.verdict.describe());
  o.require(is_prime(p1.graph).status == PrimalityVerdict::Status::prime, "4F1 - F2 not prime");

  const std::vector<VectorGraph> pf{p1.graph, f2};
  const SpanResult a = span_contains(pf, c1);
  bool a_shape = a.found && a.expression.placements.size() == 2;
  if (a_shape) {
    a_shape = equals_up_to_translation(evaluate(a.expression, pf), c1);
    for (const Placement& p : a.expression.placements) a_shape = a_shape && p.sign > 0;
  }
  o.require(a_shape, "span_contains({P1,F2}, 4F1) did not find P1 + F2");

  const SpanResult b = span_contains(basis(), p1.graph);
  std::size_t squares = 0, diamonds = 0;
  for (const Placement& p : b.expression.placements) {
    if (p.graph == 0 && p.sign > 0) ++squares;
    if (p.graph == 1 && p.sign < 0) ++diamonds;
  }
  o.require(b.found && squares == 4 && diamonds == 1 && b.expression.placements.size() == 5 &&
                equals_up_to_translation(evaluate(b.expression, basis()), p1.graph),
            "span_contains({F1,F2}, P1) did not find 4F1 - F2");
  if (o.pass) {
    o.detail << "F1 + F2@(1,1) m=4; 4F1 composite; P1 prime; " << to_string(a.expression) << " ; "
             << to_string(b.expression);
  }
}

void criterion5(Outcome& o) {
  std::ostringstream timing;
  for (std::size_t j = 1; j <= 3; ++j) {
    const VectorGraph g = build_infinite_prime_family(j);
    const std::string tag = "j=" + std::to_string(j) + ": ";
    o.require(is_kirchhoff(g).ok(), tag + "not Kirchhoff");
    const auto m = multiplicity(g).m;
    o.require(m == static_cast<std::int64_t>(2 * j + 4), tag + "m != 2j+4");
    const auto t0 = Clock::now();
    const PrimalityVerdict v = is_prime(g);
    const double elapsed = seconds_since(t0);
    o.require(v.status == PrimalityVerdict::Status::prime, tag + "primality " + to_string(v.status));
    o.require(elapsed <= kPrimeSecondsPerJ, tag + "prime check took " + std::to_string(elapsed) + " s");
    timing << (j > 1 ? ", " : "") << "j=" << j << " " << elapsed << " s";
  }
  // 6F1 - 2F2: P1 plus two squares, minus one more diamond.
  const auto e2 = prime_family_expression(2);
  std::size_t squares = 0, diamonds = 0;
  for (const Placement& p : e2.placements) {
    if (p.graph == 0 && p.sign > 0) ++squares;
    if (p.graph == 1 && p.sign < 0) ++diamonds;
  }
  o.require(squares == 6 && diamonds == 2 && e2.placements.size() == 8, "j=2 expression is not 6F1 - 2F2");
  const VectorGraph p1 = evaluate(prime_family_expression(1), basis());
  const VectorGraph& f1 = basis()[0];
  const VectorGraph& f2 = basis()[1];
  const VectorGraph grown =
      subtract(add(add(p1, f1, {1, -3}).graph, f1, {2, -2}).graph, f2, {1, -1}).graph;
  o.require(canonicalize(grown) == build_infinite_prime_family(2), "j=2 differs from the 6F1 - 2F2 construction");
  o.detail << (o.pass ? "" : "; ") << "m = 6, 8, 10; prime checks " << timing.str();
}

void criterion6(Outcome& o) {
  struct Named {
    const char* name;
    const std::vector<VectorGraph>* graphs;
  };
  std::size_t total = 0;
  for (const Named& set : {Named{"R1", &kgtest::r1_graphs(2)}, Named{"R2", &kgtest::r2_graphs()},
                           Named{"R3", &kgtest::r3_graphs()}}) {
    const std::string tag = std::string(set.name) + ": ";
    for (const VectorGraph& g : *set.graphs) {
      ++total;
      o.require(is_kirchhoff(g).ok(), tag + "graph fails is_kirchhoff");
      if (is_vector_2_connected(g)) o.require(multiplicity(g).uniform, tag + "v2c graph not uniform");
      const auto chis = fundamental_cycle_vectors(g);
      for (const Coordinate& v : g.vertices()) {
        const IntVector lambda = vertex_cut(g, v).entries;
        for (const IntVector& chi : chis) o.require(dot(lambda, chi) == 0, tag + "cut not orthogonal to a cycle");
      }
      const VectorGraph c = chiral(g);
      o.require(contains_translate(*set.graphs, c), tag + "chiral missing from the output");
      o.require(equals_up_to_translation(chiral(c), g), tag + "chiral is not an involution");
    }
  }
  o.detail << (o.pass ? "" : "; ") << total << " graphs checked";
}

void criterion7(Outcome& o) {
  std::size_t systems = 0;
  for (const SystemRef& sys : {kgtest::r1_system(), kgtest::r2_system(), kgtest::r3_system(),
                               kgtest::triangle_system(), kgtest::q3_system()}) {
    if (sys->n() > 4) continue;
    ++systems;
    for (std::int64_t b = 1; b <= 3; ++b) {
      o.require(enumerate_bounded_cuts(*sys, b) == kgtest::oracle::brute_force_cuts(*sys, b),
                "bounded cuts differ from the box scan at bound " + std::to_string(b));
    }
  }

  std::vector<VectorGraph> pool = kgtest::r1_graphs(4);
  for (const auto* set : {&kgtest::r2_graphs(), &kgtest::r3_graphs()})
    pool.insert(pool.end(), set->begin(), set->end());
  // Every triangle graph up to m = 5 has at most 15 edges.
  SearchConfig tri;
  tri.m_max = 5;
  tri.workers = 4;
  const auto tri_graphs = enumerate_kirchhoff(kgtest::triangle_system(), tri).graphs;
  pool.insert(pool.end(), tri_graphs.begin(), tri_graphs.end());
  pool.push_back(evaluate(prime_family_expression(1), basis()));
  std::size_t prime_checked = 0;
  for (const VectorGraph& g : pool) {
    const auto expected = kgtest::oracle::is_prime_exhaustive(g, 16);
    if (!expected) continue;
    ++prime_checked;
    const auto got = is_prime(g).status;
    o.require(got == (*expected ? PrimalityVerdict::Status::prime : PrimalityVerdict::Status::composite),
              "is_prime disagrees with the bipartition scan");
  }

  SearchConfig one;
  one.m_max = 1;
  std::set<std::vector<std::tuple<std::vector<std::int64_t>, std::size_t, std::int64_t>>> enumerated;
  for (const VectorGraph& g : enumerate_kirchhoff(kgtest::triangle_system(), one).graphs)
    enumerated.insert(kgtest::oracle::key_of(g));
  const auto scanned = kgtest::oracle::graph_scan(kgtest::triangle_system(), 1, 2);
  o.require(enumerated == scanned, "triangle m_max=1 enumeration differs from the graph scan (" +
                                       std::to_string(enumerated.size()) + " vs " +
                                       std::to_string(scanned.size()) + ")");
  o.detail << (o.pass ? "" : "; ") << systems << " systems x bounds 1..3; " << prime_checked
           << " graphs with <= 16 edges; triangle scan " << scanned.size() << " graphs";
}

void criterion8(Outcome& o) {
  const auto& r3 = kgtest::r3_graphs();
  const FundamentalSets f3 = fundamental_sets(r3);
  const std::vector<std::vector<std::size_t>> threes{{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  o.require(r3.size() == 4, "R3 has " + std::to_string(r3.size()) + " graphs");
  o.require(f3.subsets == threes, "R3 fundamental sets " + subsets_text(f3.subsets) +
                                      " (cardinality " + std::to_string(f3.cardinality) +
                                      ") instead of the four 3-subsets");
  const FundamentalSets f1 = fundamental_sets(kgtest::r1_graphs(2));
  o.require(f1.subsets == std::vector<std::vector<std::size_t>>{{0, 1}},
            "R1 fundamental sets " + subsets_text(f1.subsets));
  if (o.pass) o.detail << "R3 " << subsets_text(f3.subsets) << "; R1 " << subsets_text(f1.subsets);
}

void criterion9(Outcome& o) {
  const fs::path dir = scratch_dir();
  std::vector<std::string> texts;
  for (const char* workers : {"1", "4"}) {
    const fs::path p = dir / (std::string("r2_w") + workers + ".json");
    const auto run = kgraph({"enumerate", "--matrix", kData + "/R2.txt", "--m-max", "6", "--workers", workers,
                             "--out", p.string()});
    o.require(run.code == 0, std::string("workers ") + workers + " exit " + std::to_string(run.code));
    texts.push_back(slurp(p));
  }
  o.require(!texts[0].empty() && texts[0] == texts[1], "JSON differs between 1 and 4 workers");
  o.detail << (o.pass ? "" : "; ") << "workers 1 vs 4: " << texts[0].size() << " bytes, identical="
           << (texts[0] == texts[1]);
  fs::remove_all(dir);
}

const std::vector<std::function<void(Outcome&)>> kCriteria{criterion1, criterion2, criterion3,
                                                           criterion4, criterion5, criterion6,
                                                           criterion7, criterion8, criterion9};

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      selected.push_back(std::stoul(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--criterion N]...\n";
      return 2;
    }
  }
  if (selected.empty())
    for (std::size_t c = 1; c <= kCriteria.size(); ++c) selected.push_back(c);

  int failures = 0;
  for (std::size_t c : selected) {
    if (c < 1 || c > kCriteria.size()) {
      std::cerr << "no criterion " << c << "\n";
      return 2;
    }
    Outcome o;
    try {
      kCriteria[c - 1](o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << c << " " << o.detail.str() << std::endl;
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
