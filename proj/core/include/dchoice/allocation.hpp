#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dchoice {

enum class Design {
  SingleChoice,
  Clustering,
  Cyclic,
  Block,
  Random,
  RandomBlockApprox,
  ConstrainedRandom,
};

struct DesignKind {
  Design design = Design::Cyclic;
  unsigned b = 1;      // objects per node (SingleChoice)
  unsigned v_max = 1;  // overlapping-sibling cap (ConstrainedRandom)

  static DesignKind single_choice(unsigned b = 1) { return {Design::SingleChoice, b, 1}; }
  static DesignKind clustering() { return {Design::Clustering}; }
  static DesignKind cyclic() { return {Design::Cyclic}; }
  static DesignKind block() { return {Design::Block}; }
  static DesignKind random() { return {Design::Random}; }
  static DesignKind random_block_approx() { return {Design::RandomBlockApprox}; }
  static DesignKind constrained_random(unsigned v_max) {
    return {Design::ConstrainedRandom, 1, v_max};
  }

  bool randomized() const {
    return design == Design::Random || design == Design::RandomBlockApprox ||
           design == Design::ConstrainedRandom;
  }

  static DesignKind parse(const std::string& s);
  std::string to_string() const;
};

// Bipartite object -> node incidence. Immutable after construction and safe
// to share across threads. node_contents is the cached transpose of choices.
class StorageAllocation {
 public:
  StorageAllocation(unsigned n_nodes, std::vector<std::vector<unsigned>> choices);

  unsigned n_nodes() const { return n_nodes_; }
  unsigned n_objects() const { return static_cast<unsigned>(choices_.size()); }
  const std::vector<unsigned>& choices(unsigned object) const;
  const std::vector<unsigned>& node_contents(unsigned node) const;
  const std::vector<std::vector<unsigned>>& all_choices() const { return choices_; }

  bool regular(unsigned d) const;   // every |C_i| == d
  bool balanced() const;            // every node stores the same number of objects
  unsigned replication() const;     // |C_0| (choices are nonempty by invariant)

  // Serialization metadata, carried for the plain-text format header.
  std::string kind_label = "custom";
  std::uint64_t seed = 0;

 private:
  unsigned n_nodes_;
  std::vector<std::vector<unsigned>> choices_;
  std::vector<std::vector<unsigned>> contents_;
};

// Exact enumeration cap for cum_overlap / cum_span / span_t_distribution.
inline constexpr std::uint64_t kEnumerationBudget = 10'000'000;

StorageAllocation build(DesignKind kind, unsigned n, unsigned d,
                        std::optional<std::uint64_t> seed = std::nullopt);

unsigned span(const StorageAllocation& alloc, std::span<const unsigned> objects);

// Sum over all t-subsets of |C_i1 .. intersect .. C_it|.
std::uint64_t cum_overlap(const StorageAllocation& alloc, unsigned t);

// Sum over all t-subsets of |C_i1 union ... union C_it|.
std::uint64_t cum_span(const StorageAllocation& alloc, unsigned t);

StorageAllocation move_object(const StorageAllocation& alloc, unsigned object,
                              unsigned from_node, unsigned to_node);

bool is_r_gap(const StorageAllocation& alloc, unsigned r);

// Fraction of unordered object pairs per overlap size, among pairs that
// overlap at all.
std::map<unsigned, double> overlap_profile(const StorageAllocation& alloc);

struct SpanDistMethod {
  bool exact = true;
  std::size_t samples = 100000;
  std::uint64_t seed = 0;
  static SpanDistMethod exact_method() { return {true, 0, 0}; }
  static SpanDistMethod sampled(std::size_t samples, std::uint64_t seed) {
    return {false, samples, seed};
  }
};

std::map<unsigned, double> span_t_distribution(const StorageAllocation& alloc, unsigned t,
                                               const SpanDistMethod& method = {});

// Plain-text format; round-trips bit-exactly.
//   nodes=<n> objects=<k> d=<d> kind=<kind> seed=<seed>
//   <object>: node,node,...
std::string to_text(const StorageAllocation& alloc);
StorageAllocation from_text(const std::string& text);
void write_allocation(std::ostream& os, const StorageAllocation& alloc);
StorageAllocation read_allocation(std::istream& is);

}  // namespace dchoice
