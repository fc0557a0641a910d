#ifndef BTRANK_CONNECTIVITY_H_
#define BTRANK_CONNECTIVITY_H_

// Graph conditions that govern whether a fitted ranking exists.
//
//   A: the win digraph (i -> j iff a_ij > 0) is strongly connected.
//   B: the comparison graph ({i, j} iff n_ij > 0) is connected.
//   C: for every split (Q1, Q2), some Q1 team hosts a Q2 team and some Q1
//      team visits a Q2 team. Equivalent to strong connectivity of the
//      hosting digraph (i -> j iff n_{ij.i} > 0).

#include <optional>
#include <vector>

#include "btrank/types.h"

namespace btrank {

using Adjacency = std::vector<std::vector<int>>;

struct ComparisonGraphs {
  Adjacency win;         // i -> j iff a_ij > 0
  Adjacency comparison;  // undirected, i -- j iff n_ij > 0
  Adjacency hosting;     // i -> j iff n_{ij.i} > 0
};

ComparisonGraphs BuildGraphs(const Dataset& dataset);

// Strongly connected components. component[v] numbers components in a
// topological order of the condensation (sources first).
struct StrongComponents {
  std::vector<int> component;
  int count = 0;
};
StrongComponents FindStrongComponents(const Adjacency& graph);

// Digraph of positive off-diagonal entries of `weights`.
Adjacency PositiveEntryDigraph(const RealMatrix& weights);

struct ConditionResult {
  Condition condition = Condition::kA;
  std::optional<PartitionWitness> witness;  // set iff the condition fails
  bool passed() const { return !witness.has_value(); }
};

// On failure the witness q1 is a source component: nobody in q2 has beaten
// anybody in q1.
ConditionResult CheckConditionA(const Dataset& dataset);
// On failure q1 is the connected component of the lowest-indexed team.
ConditionResult CheckConditionB(const Dataset& dataset);
// Throws VenuelessDataError. On failure q1 is a sink component of the
// hosting digraph: no q1 team ever hosts a q2 team.
ConditionResult CheckConditionC(const Dataset& dataset);

// Strong connectivity of an arbitrary digraph, with a source-component
// witness on failure; reported as Condition A.
ConditionResult CheckStrongConnectivity(const Adjacency& graph);

// Re-evaluates the witness against the data: true iff the partition really
// demonstrates a violation of witness.violated.
bool WitnessHolds(const Dataset& dataset, const PartitionWitness& witness);

}  // namespace btrank

#endif  // BTRANK_CONNECTIVITY_H_
