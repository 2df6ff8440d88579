// Copyright 2026 The Tabfuzz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TABFUZZ_TESTS_TRANSPORT_ORACLE_HPP_
#define TABFUZZ_TESTS_TRANSPORT_ORACLE_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

namespace tabfuzz::testing {

// Minimum-cost transport between two uniform empirical distributions, solved
// as an integer min-cost flow: every point of `a` supplies L/|a| units and
// every point of `b` demands L/|b| units, L = lcm(|a|, |b|). Costs are
// |a_i - b_j|; augmenting paths come from Bellman-Ford on the residual graph.
inline double transport_cost(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size(), m = b.size();
  const long long total = std::lcm(static_cast<long long>(n), static_cast<long long>(m));
  const std::size_t source = n + m, sink = n + m + 1, nodes = n + m + 2;
  struct Edge {
    std::size_t to;
    long long cap;
    double cost;
  };
  std::vector<Edge> edges;
  std::vector<std::vector<std::size_t>> adj(nodes);
  auto add = [&](std::size_t u, std::size_t v, long long cap, double cost) {
    adj[u].push_back(edges.size());
    edges.push_back({v, cap, cost});
    adj[v].push_back(edges.size());
    edges.push_back({u, 0, -cost});
  };
  for (std::size_t i = 0; i < n; ++i) add(source, i, total / static_cast<long long>(n), 0.0);
  for (std::size_t j = 0; j < m; ++j) add(n + j, sink, total / static_cast<long long>(m), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) add(i, n + j, total, std::fabs(a[i] - b[j]));
  }
  double cost = 0.0;
  long long flow = 0;
  while (flow < total) {
    std::vector<double> dist(nodes, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> via(nodes, edges.size());
    dist[source] = 0.0;
    for (std::size_t round = 0; round < nodes; ++round) {
      bool changed = false;
      for (std::size_t u = 0; u < nodes; ++u) {
        if (std::isinf(dist[u])) continue;
        for (std::size_t e : adj[u]) {
          if (edges[e].cap > 0 && dist[u] + edges[e].cost < dist[edges[e].to] - 1e-15) {
            dist[edges[e].to] = dist[u] + edges[e].cost;
            via[edges[e].to] = e;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    long long push = total - flow;
    for (std::size_t v = sink; v != source; v = edges[via[v] ^ 1].to) {
      push = std::min(push, edges[via[v]].cap);
    }
    for (std::size_t v = sink; v != source; v = edges[via[v] ^ 1].to) {
      edges[via[v]].cap -= push;
      edges[via[v] ^ 1].cap += push;
      cost += static_cast<double>(push) * edges[via[v]].cost;
    }
    flow += push;
  }
  return cost / static_cast<double>(total);
}

}  // namespace tabfuzz::testing

#endif  // TABFUZZ_TESTS_TRANSPORT_ORACLE_HPP_
