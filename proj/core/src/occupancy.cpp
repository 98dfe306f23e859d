#include "dchoice/occupancy.hpp"

#include <cmath>
#include <numeric>
#include <vector>

#include "dchoice/errors.hpp"

namespace dchoice {

namespace {

void validate(const OccupancyQuery& q) {
  if (q.d < 1 || q.d > q.n || q.u < 1)
    throw ParameterMismatch("occupancy query needs 1 <= d <= n and u >= 1");
}

}  // namespace

unsigned sample_occupancy(const OccupancyQuery& q, Rng& rng) {
  validate(q);
  std::vector<char> hit(q.n, 0);
  std::vector<unsigned> cells(q.n);
  unsigned occupied = 0;
  for (unsigned c = 0; c < q.u; ++c) {
    // partial Fisher-Yates: the first d entries form a uniform d-subset
    std::iota(cells.begin(), cells.end(), 0u);
    for (unsigned j = 0; j < q.d; ++j) {
      unsigned pick = j + static_cast<unsigned>(rng.next_below(q.n - j));
      std::swap(cells[j], cells[pick]);
      if (!hit[cells[j]]) {
        hit[cells[j]] = 1;
        ++occupied;
      }
    }
  }
  return occupied;
}

double mean_occupancy(const OccupancyQuery& q) {
  validate(q);
  double avoid = 1.0 - static_cast<double>(q.d) / q.n;
  return q.n * (1.0 - std::pow(avoid, static_cast<double>(q.u)));
}

std::map<unsigned, double> occupancy_pmf_mc(const OccupancyQuery& q,
                                            std::uint64_t trials,
                                            std::uint64_t seed) {
  validate(q);
  std::map<unsigned, std::uint64_t> counts;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    ++counts[sample_occupancy(q, rng)];
  }
  std::map<unsigned, double> pmf;
  for (const auto& [value, count] : counts)
    pmf[value] = static_cast<double>(count) / static_cast<double>(trials);
  return pmf;
}

}  // namespace dchoice
