#pragma once

#include <tuple>
#include <vector>

#include "dchoice/allocation.hpp"

namespace dchoice {

struct FlowAssignment {
  unsigned object;
  unsigned node;
  double amount;
};

struct FeasibilityVerdict {
  bool feasible = false;
  double max_served = 0.0;                 // total demand servable under m
  std::vector<FlowAssignment> flow;        // feasible witness
  std::vector<unsigned> violating_subset;  // infeasible witness I
  double demand_excess = 0.0;              // sum(rho_I) - m*span(I)
};

// Transportation feasibility: source->object (rho_i), object->node for
// node in C_i (inf), node->sink (m). Feasible iff max-flow covers the whole
// demand within relative tolerance 1e-9.
FeasibilityVerdict check_flow(const StorageAllocation& alloc,
                              const std::vector<double>& rho, double m);

// Exhaustive oracle over all nonempty object subsets (k <= 22).
FeasibilityVerdict check_subsets(const StorageAllocation& alloc,
                                 const std::vector<double>& rho, double m);

// Smallest m (to 1e-6) for which check_flow is feasible.
double min_threshold(const StorageAllocation& alloc, const std::vector<double>& rho);

}  // namespace dchoice
