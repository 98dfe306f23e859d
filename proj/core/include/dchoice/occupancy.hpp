#pragma once

// Occupancy of u independent uniform d-subsets of n cells: sampler, mean
// formula, and an empirical PMF. Feeds the random-design upper bounds.

#include <cstdint>
#include <map>

#include "dchoice/rng.hpp"

namespace dchoice {

struct OccupancyQuery {
  unsigned n = 1;  // cells
  unsigned d = 1;  // complex size, 1 <= d <= n
  unsigned u = 1;  // number of complexes, >= 1
};

// |union of u uniform d-subsets|; always in [d, min(n, u*d)].
unsigned sample_occupancy(const OccupancyQuery& q, Rng& rng);

// n * (1 - (1 - d/n)^u).
double mean_occupancy(const OccupancyQuery& q);

// Empirical PMF over occupancy values; masses sum to 1.
std::map<unsigned, double> occupancy_pmf_mc(const OccupancyQuery& q,
                                            std::uint64_t trials,
                                            std::uint64_t seed);

}  // namespace dchoice
