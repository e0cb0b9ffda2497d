// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "gsim/gsim.hpp"

using namespace gsim;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t) {
  return std::chrono::duration<double>(clock_type::now() - t).count();
}

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(double x, int prec = 4) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(prec);
  os << x;
  return os.str();
}

Graph random_graph(std::mt19937_64& rng, VertexId n, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<VertexId, VertexId>> e;
  for (VertexId i = 0; i < n; ++i)
    for (VertexId j = i + 1; j < n; ++j)
      if (coin(rng)) e.emplace_back(i, j);
  return Graph::from_edges(n, e);
}

Graph relabel(const Graph& g, const std::vector<VertexId>& perm) {
  std::vector<std::pair<VertexId, VertexId>> e;
  for (auto [u, v] : g.edges()) e.emplace_back(perm[u], perm[v]);
  return Graph::from_edges(g.n(), e);
}

void graphlet_oracle() {
  auto start = clock_type::now();
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<VertexId> size(4, 12);
  std::uniform_int_distribution<int> tenth(1, 9);
  std::size_t mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    auto g = random_graph(rng, size(rng), tenth(rng) / 10.0);
    for (int l = 3; l <= 5; ++l)
      if (count_graphlets(g, l) != count_graphlets_oracle(g, l)) ++mismatches;
  }
  double secs = seconds_since(start);
  report(1, mismatches == 0 && secs < 60,
         "graphlet counts equal brute force on 200 graphs x l=3,4,5 (mismatches=" +
             std::to_string(mismatches) + ", " + fmt(secs, 2) + "s)");
}

bool isomorphic(const Graph& a, const Graph& b) {
  if (a.m() != b.m()) return false;
  std::vector<VertexId> perm(a.n());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    if (relabel(a, perm) == b) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

void catalog_sizes() {
  bool ok = true;
  std::string detail;
  const std::size_t expected[] = {2, 6, 21};
  for (int l = 3; l <= 5; ++l) {
    // independent count: connected graphs on l labelled vertices up to isomorphism
    std::vector<std::pair<VertexId, VertexId>> pairs;
    for (int i = 0; i < l; ++i)
      for (int j = i + 1; j < l; ++j) pairs.emplace_back(i, j);
    std::vector<Graph> reps;
    for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
      std::vector<std::pair<VertexId, VertexId>> e;
      for (std::size_t b = 0; b < pairs.size(); ++b)
        if (mask >> b & 1u) e.push_back(pairs[b]);
      auto g = Graph::from_edges(static_cast<VertexId>(l), e);
      if (!is_connected(g)) continue;
      if (std::none_of(reps.begin(), reps.end(), [&](const Graph& r) { return isomorphic(r, g); }))
        reps.push_back(g);
    }
    const auto dim = catalog(l).dimension();
    ok = ok && dim == expected[l - 3] && reps.size() == dim;
    detail += " |D_" + std::to_string(l) + "|=" + std::to_string(dim) + " (enumerated " +
              std::to_string(reps.size()) + ")";
  }
  report(2, ok, "catalog cardinalities" + detail);
}

void kernel_properties() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<VertexId> size(5, 30);
  std::uniform_real_distribution<double> dens(0.1, 0.9);
  double worst_self = 0, worst_sym = 0, worst_iso = 0;
  bool bounded = true;
  for (int trial = 0; trial < 40; ++trial) {
    auto a = random_graph(rng, size(rng), dens(rng));
    auto b = random_graph(rng, size(rng), dens(rng));
    for (int l = 3; l <= 5; ++l) {
      auto fa = graphlet_vector(a, l), fb = graphlet_vector(b, l);
      if (!fa.is_zero()) worst_self = std::max(worst_self, std::abs(kernel(fa, fa) - 1.0));
      double ab = kernel(fa, fb), ba = kernel(fb, fa);
      worst_sym = std::max(worst_sym, std::abs(ab - ba));
      bounded = bounded && ab >= 0.0 && ab <= 1.0;
    }
  }
  auto g = random_graph(rng, 18, 0.35);
  std::vector<VertexId> perm(g.n());
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = 0; i < 50; ++i) {
    std::shuffle(perm.begin(), perm.end(), rng);
    auto h = relabel(g, perm);
    for (int l = 3; l <= 5; ++l) {
      auto fg = graphlet_vector(g, l), fh = graphlet_vector(h, l);
      worst_iso = std::max(worst_iso, std::abs(kernel(fg, fh) - 1.0));
      for (std::size_t d = 0; d < fg.dimension(); ++d)
        worst_iso = std::max(worst_iso, std::abs(fg.values[d] - fh.values[d]));
    }
  }
  const double tol = 1e-9;
  report(3, worst_self <= tol && worst_sym <= tol && worst_iso <= tol && bounded,
         "kernel K(G,G)=1, symmetric, in [0,1], invariant under 50 relabelings (max errors " +
             fmt(worst_self, 12) + ", " + fmt(worst_sym, 12) + ", " + fmt(worst_iso, 12) + ")");
}

// Exhaustive optimum over all partial one-to-one assignments (row-by-row DP
// on the set of used columns).
double brute_matching(const std::vector<std::vector<double>>& w, std::size_t nl, std::size_t nr) {
  std::vector<double> best(1u << nr, -1.0);
  best[0] = 0.0;
  for (std::size_t i = 0; i < nl; ++i) {
    auto next = best;
    for (std::uint32_t mask = 0; mask < best.size(); ++mask) {
      if (best[mask] < 0) continue;
      for (std::size_t j = 0; j < nr; ++j)
        if (!(mask >> j & 1u) && w[i][j] >= 0)
          next[mask | 1u << j] = std::max(next[mask | 1u << j], best[mask] + w[i][j]);
    }
    best = std::move(next);
  }
  return *std::max_element(best.begin(), best.end());
}

void matching_oracle() {
  auto start = clock_type::now();
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::size_t> side(1, 8);
  std::uniform_int_distribution<int> weight(0, 1024);
  std::uniform_real_distribution<double> edge_p(0.2, 1.0);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t nl = side(rng), nr = side(rng);
    std::bernoulli_distribution keep(edge_p(rng));
    BipartiteInstance inst;
    std::vector<std::vector<double>> w(nl, std::vector<double>(nr, -1.0));
    for (std::size_t i = 0; i < nl; ++i) inst.left.push_back(static_cast<VertexId>(i));
    for (std::size_t j = 0; j < nr; ++j) inst.right.push_back(static_cast<VertexId>(50 + j));
    for (std::size_t i = 0; i < nl; ++i)
      for (std::size_t j = 0; j < nr; ++j)
        if (keep(rng)) {
          w[i][j] = weight(rng) / 64.0;  // dyadic, so sums are exact
          inst.edges.push_back({inst.left[i], inst.right[j], w[i][j]});
        }
    if (max_weight_bipartite_matching(inst).weight != brute_matching(w, nl, nr)) ++mismatches;
  }
  double secs = seconds_since(start);
  report(4, mismatches == 0 && secs < 30,
         "max-weight matching equals exhaustive optimum on 500 instances up to 8x8 (mismatches=" +
             std::to_string(mismatches) + ", " + fmt(secs, 2) + "s)");
}

void lambda_identity() {
  std::mt19937_64 rng(5);
  double worst = 0;
  std::size_t checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto target = gnp(40, 0.1, rng());
    auto query = gnp(8, 0.4, rng());
    LabelParams p{2, 4};
    auto tl = label_all(target, p), ql = label_all(query, p);
    MatchContext ctx{target, query, tl, ql};
    // Only query vertex v gets candidates, so Q' is empty for every (v, w).
    VertexId v = static_cast<VertexId>(rng() % query.n());
    std::vector<std::vector<VertexId>> lists(query.n());
    for (int i = 0; i < 3; ++i) lists[v].push_back(static_cast<VertexId>(rng() % target.n()));
    std::sort(lists[v].begin(), lists[v].end());
    lists[v].erase(std::unique(lists[v].begin(), lists[v].end()), lists[v].end());
    auto cands = Candidates::from_lists(lists);
    for (double alpha : {0.1, 0.3, 0.5, 0.9})
      for (VertexId w : lists[v]) {
        worst = std::max(worst, std::abs(lambda_weight(ctx, cands, v, w, alpha) - ctx.s(v, w)));
        ++checked;
      }
  }
  report(5, worst <= 1e-12,
         "seed weight equals s(v,w) when no other query vertex is nearby (" +
             std::to_string(checked) + " cases, max error " + fmt(worst, 15) + ")");
}

BenchOptions suite_options(Suite s) {
  BenchOptions opt;
  opt.suite = s;
  opt.repeats = 30;
  opt.seed = 42;
  return opt;
}

void recovery_suites() {
  auto start = clock_type::now();
  auto clean = run_bench(suite_options(Suite::kPlanted));
  double secs = seconds_since(start);
  const auto& a = clean.summary;
  double avg_degree = 0;
  VertexId min_q = 1000, max_q = 0;
  for (std::size_t r = 0; r < 30; ++r) {
    auto c = make_bench_case(clean.options, r);
    avg_degree += 2.0 * static_cast<double>(c.target.m()) / c.target.n() / 30.0;
    min_q = std::min(min_q, c.query.graph.n());
    max_q = std::max(max_q, c.query.graph.n());
  }
  report(6, a.mean_score >= 0.85 && a.mean_score - a.mean_baseline >= 0.05 && secs < 300,
         "planted recovery, 30 graphs n=300 avg degree " + fmt(avg_degree, 2) + ", queries " +
             std::to_string(min_q) + "-" + std::to_string(max_q) + " vertices: mean score " +
             fmt(a.mean_score) + ", random baseline " + fmt(a.mean_baseline) + " (" + fmt(secs, 1) +
             "s)");
  report(7, 2 * a.in_pruned >= a.queries,
         "query vertex set contained in the pruned candidate set in " + std::to_string(a.in_pruned) +
             "/" + std::to_string(a.queries) + " runs (need >= 50%)");

  auto noisy = run_bench(suite_options(Suite::kNoise)).summary;
  double drop = a.mean_score - noisy.mean_score;
  report(8, drop < 0.15 && noisy.mean_score > noisy.mean_baseline,
         "5% edge removal: mean score " + fmt(noisy.mean_score) + " (drop " + fmt(drop) +
             "), random baseline " + fmt(noisy.mean_baseline));
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void determinism() {
  auto opt = suite_options(Suite::kPlanted);
  opt.repeats = 5;
  opt.seed = 7;
  auto first = run_bench(opt);
  opt.run.workers = 4;
  auto second = run_bench(opt);
  bool reports_equal = format_report(first, false) == format_report(second, false) &&
                       report_json(first, false).dump() == report_json(second, false).dump();

  auto dir = std::filesystem::temp_directory_path() / "gsim_acceptance";
  std::filesystem::create_directories(dir);
  bool index_equal = true;
  for (std::uint64_t s = 0; s < 3; ++s) {
    auto g = community_graph({}, s).graph;
    save_index(label_all(g, LabelParams{}, 1), (dir / "w1.gmix").string());
    save_index(label_all(g, LabelParams{}, 8), (dir / "w8.gmix").string());
    index_equal = index_equal && read_file(dir / "w1.gmix") == read_file(dir / "w8.gmix");
  }
  std::filesystem::remove_all(dir);
  report(9, reports_equal && index_equal,
         std::string("identical seeds give byte-identical bench reports (") +
             (reports_equal ? "equal" : "differ") + "); index files with 1 vs 8 workers (" +
             (index_equal ? "equal" : "differ") + ")");
}

void dense_density() {
  auto opt = suite_options(Suite::kDense);
  opt.repeats = 5;
  auto res = run_bench(opt);
  double lowest = 1.0;
  bool all = true;
  for (const auto& r : res.reports) {
    all = all && r.density.has_value();
    if (r.density) lowest = std::min(lowest, *r.density);
  }
  report(10, all && lowest >= 0.7,
         "G(60,0.9) query against planted G(60,0.9) block: match density min " + fmt(lowest) +
             ", mean " + fmt(res.summary.mean_density) + " over " + std::to_string(opt.repeats) +
             " runs");
}

}  // namespace

int main() {
  graphlet_oracle();
  catalog_sizes();
  kernel_properties();
  matching_oracle();
  lambda_identity();
  recovery_suites();
  determinism();
  dense_density();
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
