#include "btrank/connectivity.h"

#include <algorithm>
#include <limits>
#include <queue>
#include <utility>

#include "btrank/errors.h"
#include "fmt/format.h"

namespace btrank {
namespace {

Adjacency DigraphFrom(const CountMatrix& m) {
  const int t = m.size();
  Adjacency graph(t);
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j < t; ++j) {
      if (i != j && m(i, j) > 0) graph[i].push_back(j);
    }
  }
  return graph;
}

PartitionWitness MakeWitness(const std::vector<bool>& in_q1, Condition cond,
                             std::string detail) {
  PartitionWitness w;
  for (int v = 0; v < static_cast<int>(in_q1.size()); ++v) {
    (in_q1[v] ? w.q1 : w.q2).push_back(v);
  }
  w.violated = cond;
  w.detail = std::move(detail);
  return w;
}

// Component (by condensation number) with no edges entering it (`source`)
// or leaving it (otherwise), choosing the one holding the lowest vertex.
int ExtremeComponent(const Adjacency& graph, const StrongComponents& scc,
                     bool source) {
  std::vector<bool> has_edge(scc.count, false);
  for (int v = 0; v < static_cast<int>(graph.size()); ++v) {
    for (int w : graph[v]) {
      const int cv = scc.component[v];
      const int cw = scc.component[w];
      if (cv != cw) has_edge[source ? cw : cv] = true;
    }
  }
  for (int v = 0; v < static_cast<int>(graph.size()); ++v) {
    if (!has_edge[scc.component[v]]) return scc.component[v];
  }
  return scc.component[0];  // unreachable for a finite DAG
}

std::vector<bool> Members(const StrongComponents& scc, int component) {
  std::vector<bool> in(scc.component.size(), false);
  for (size_t v = 0; v < in.size(); ++v) in[v] = scc.component[v] == component;
  return in;
}

bool ValidPartition(const PartitionWitness& w, int t) {
  if (w.q1.empty() || w.q2.empty()) return false;
  std::vector<int> seen(t, 0);
  for (int v : w.q1) {
    if (v < 0 || v >= t || seen[v]++) return false;
  }
  for (int v : w.q2) {
    if (v < 0 || v >= t || seen[v]++) return false;
  }
  return std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
}

}  // namespace

ComparisonGraphs BuildGraphs(const Dataset& dataset) {
  const auto& totals = dataset.totals();
  return {DigraphFrom(totals.wins), DigraphFrom(totals.games),
          DigraphFrom(totals.hosted)};
}

Adjacency PositiveEntryDigraph(const RealMatrix& weights) {
  const int t = weights.size();
  Adjacency graph(t);
  for (int i = 0; i < t; ++i) {
    for (int j = 0; j < t; ++j) {
      if (i != j && weights(i, j) > 0.0) graph[i].push_back(j);
    }
  }
  return graph;
}

// Iterative Tarjan. Tarjan completes components sinks-first, so numbers are
// reversed at the end to put sources first.
StrongComponents FindStrongComponents(const Adjacency& graph) {
  const int n = static_cast<int>(graph.size());
  constexpr int kUnvisited = -1;
  std::vector<int> index(n, kUnvisited), low(n, 0), component(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  std::vector<std::pair<int, size_t>> call;  // (vertex, next edge)
  int next_index = 0;
  int count = 0;

  for (int root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, edge] = call.back();
      if (edge < graph[v].size()) {
        const int w = graph[v][edge++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component[w] = count;
        } while (w != v);
        ++count;
      }
      const int finished = v;
      call.pop_back();
      if (!call.empty()) {
        const int parent = call.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }
  for (int& c : component) c = count - 1 - c;
  return {std::move(component), count};
}

ConditionResult CheckStrongConnectivity(const Adjacency& graph) {
  ConditionResult result{Condition::kA, std::nullopt};
  const StrongComponents scc = FindStrongComponents(graph);
  if (scc.count <= 1) return result;
  const int source = ExtremeComponent(graph, scc, /*source=*/true);
  result.witness = MakeWitness(Members(scc, source), Condition::kA,
                               "no team in q2 has beaten any team in q1");
  return result;
}

ConditionResult CheckConditionA(const Dataset& dataset) {
  return CheckStrongConnectivity(BuildGraphs(dataset).win);
}

ConditionResult CheckConditionB(const Dataset& dataset) {
  ConditionResult result{Condition::kB, std::nullopt};
  const Adjacency graph = BuildGraphs(dataset).comparison;
  const int t = dataset.num_teams();
  std::vector<bool> reached(t, false);
  std::queue<int> frontier;
  frontier.push(0);
  reached[0] = true;
  int count = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int w : graph[v]) {
      if (!reached[w]) {
        reached[w] = true;
        ++count;
        frontier.push(w);
      }
    }
  }
  if (count < t) {
    result.witness = MakeWitness(reached, Condition::kB,
                                 "no comparisons between q1 and q2");
  }
  return result;
}

ConditionResult CheckConditionC(const Dataset& dataset) {
  if (dataset.venueless()) {
    throw VenuelessDataError(
        "condition C needs venue information; the data set has none");
  }
  ConditionResult result{Condition::kC, std::nullopt};
  const Adjacency graph = BuildGraphs(dataset).hosting;
  const StrongComponents scc = FindStrongComponents(graph);
  if (scc.count <= 1) return result;
  const int sink = ExtremeComponent(graph, scc, /*source=*/false);
  result.witness = MakeWitness(Members(scc, sink), Condition::kC,
                               "no team in q1 ever hosts a team in q2");
  return result;
}

bool WitnessHolds(const Dataset& dataset, const PartitionWitness& witness) {
  const int t = dataset.num_teams();
  if (!ValidPartition(witness, t)) return false;
  const auto& totals = dataset.totals();
  auto any_between = [&](const std::vector<int>& from,
                         const std::vector<int>& to, const CountMatrix& m) {
    for (int i : from) {
      for (int j : to) {
        if (m(i, j) > 0) return true;
      }
    }
    return false;
  };
  switch (witness.violated) {
    case Condition::kA:
      return !any_between(witness.q2, witness.q1, totals.wins);
    case Condition::kB:
      return !any_between(witness.q1, witness.q2, totals.games);
    case Condition::kC: {
      if (dataset.venueless()) return false;
      const bool q1_hosts = any_between(witness.q1, witness.q2, totals.hosted);
      const bool q1_visits = any_between(witness.q2, witness.q1, totals.hosted);
      return !(q1_hosts && q1_visits);
    }
  }
  return false;
}

}  // namespace btrank
