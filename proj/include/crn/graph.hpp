#pragma once

#include <cstddef>
#include <vector>

#include "crn/network.hpp"

namespace crn {

/// Partition of complex indices (ReactionNetwork::complexes() order).
using ComplexPartition = std::vector<std::vector<std::size_t>>;

struct StructureReport {
  std::size_t num_complexes = 0;
  ComplexPartition linkage_classes;
  bool reversible = false;
  bool weakly_reversible = false;
  std::size_t stoich_rank = 0;
  long deficiency = 0;  // not asserted nonnegative
};

/// Connected components of the undirected complex graph; classes ordered by smallest member.
ComplexPartition linkage_classes(const ReactionNetwork& net);

/// Strongly connected components of the directed complex graph (Tarjan).
ComplexPartition strong_components(const ReactionNetwork& net);

bool is_reversible(const ReactionNetwork& net);
bool is_weakly_reversible(const ReactionNetwork& net);

/// Rank of the reaction vectors, exact (fraction-free Bareiss elimination).
std::size_t stoich_rank(const ReactionNetwork& net);
std::size_t exact_rank(std::vector<RationalVector> rows);

long deficiency(const ReactionNetwork& net);
/// Same quantity with the linkage classes counted as the weakly connected components of
/// the condensation (SCC quotient) graph.
long deficiency_via_condensation(const ReactionNetwork& net);

StructureReport analyze_structure(const ReactionNetwork& net);

}  // namespace crn
