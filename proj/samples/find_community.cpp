// Cut one community out of a synthetic graph, then search for it again.
//
//   find_community [seed]

#include <cstdlib>
#include <iostream>

#include "gsim/gsim.hpp"

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;

  auto cg = gsim::community_graph({}, seed);
  const auto& planted = cg.communities.front();
  auto query = gsim::induced_subgraph(cg.graph, planted).graph;

  gsim::RunConfig cfg;  // l=4, t=2, k=10, alpha=0.3, h1=0.4, h2=0.95
  auto labels = gsim::label_all(cg.graph, cfg.labels);
  gsim::KdIndex index(labels);
  auto run = gsim::run_query({cg.graph, labels, index}, query, cfg);

  const auto& r = run.result;
  std::cout << "target n=" << cg.graph.n() << " m=" << cg.graph.m() << ", query n=" << query.n()
            << " m=" << query.m() << '\n'
            << "score=" << r.score << " matched=" << r.matched.size()
            << " exact=" << (r.matched == planted) << " candidates=" << r.stats.candidates << '\n';
  for (auto [q, t] : r.mapping) std::cout << q << " -> " << t << '\n';
}
