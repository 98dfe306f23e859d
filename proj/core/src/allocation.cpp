#include "dchoice/allocation.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <ostream>
#include <sstream>

#include "dchoice/errors.hpp"
#include "dchoice/rng.hpp"

namespace dchoice {

namespace {

std::uint64_t binomial_or_cap(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    if (result > cap) return cap + 1;
    result = result * (n - k + i) / i;
  }
  return result;
}

void check_budget(unsigned k, unsigned t) {
  if (binomial_or_cap(k, t, kEnumerationBudget) > kEnumerationBudget)
    throw BudgetExceeded("subset enumeration exceeds budget");
}

std::vector<unsigned> sorted_unique(std::vector<unsigned> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

StorageAllocation::StorageAllocation(unsigned n_nodes,
                                     std::vector<std::vector<unsigned>> choices)
    : n_nodes_(n_nodes), choices_(std::move(choices)), contents_(n_nodes) {
  for (unsigned i = 0; i < choices_.size(); ++i) {
    auto& c = choices_[i];
    if (c.empty()) throw IndexOutOfRange("object has no service choices");
    c = sorted_unique(std::move(c));
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (c[j] >= n_nodes_) throw IndexOutOfRange("node index out of range");
      if (j > 0 && c[j] == c[j - 1])
        throw IndexOutOfRange("replicas of one object must be on distinct nodes");
    }
    for (unsigned node : c) contents_[node].push_back(i);
  }
}

const std::vector<unsigned>& StorageAllocation::choices(unsigned object) const {
  if (object >= choices_.size()) throw IndexOutOfRange("object index out of range");
  return choices_[object];
}

const std::vector<unsigned>& StorageAllocation::node_contents(unsigned node) const {
  if (node >= n_nodes_) throw IndexOutOfRange("node index out of range");
  return contents_[node];
}

bool StorageAllocation::regular(unsigned d) const {
  return std::all_of(choices_.begin(), choices_.end(),
                     [d](const auto& c) { return c.size() == d; });
}

bool StorageAllocation::balanced() const {
  if (n_nodes_ == 0) return true;
  std::size_t load = contents_[0].size();
  return std::all_of(contents_.begin(), contents_.end(),
                     [load](const auto& c) { return c.size() == load; });
}

unsigned StorageAllocation::replication() const {
  return choices_.empty() ? 0 : static_cast<unsigned>(choices_[0].size());
}

DesignKind DesignKind::parse(const std::string& s) {
  auto colon = s.find(':');
  std::string head = s.substr(0, colon == std::string::npos ? s.size() : colon);
  std::string params = colon == std::string::npos ? "" : s.substr(colon + 1);
  auto num_param = [&](const std::string& key, unsigned fallback) -> unsigned {
    auto pos = params.find(key + "=");
    if (pos == std::string::npos) return fallback;
    return static_cast<unsigned>(std::stoul(params.substr(pos + key.size() + 1)));
  };
  if (head == "single-choice") return single_choice(num_param("b", 1));
  if (head == "clustering") return clustering();
  if (head == "cyclic") return cyclic();
  if (head == "block") return block();
  if (head == "random") return random();
  if (head == "random-block-approx") return random_block_approx();
  if (head == "constrained-random") return constrained_random(num_param("vmax", 1));
  throw ParseError("unknown design kind: " + s);
}

std::string DesignKind::to_string() const {
  switch (design) {
    case Design::SingleChoice:
      return "single-choice:b=" + std::to_string(b);
    case Design::Clustering:
      return "clustering";
    case Design::Cyclic:
      return "cyclic";
    case Design::Block:
      return "block";
    case Design::Random:
      return "random";
    case Design::RandomBlockApprox:
      return "random-block-approx";
    case Design::ConstrainedRandom:
      return "constrained-random:vmax=" + std::to_string(v_max);
  }
  return "?";
}

namespace {

std::vector<std::vector<unsigned>> build_single_choice(unsigned n, unsigned b) {
  std::vector<std::vector<unsigned>> choices(static_cast<std::size_t>(n) * b);
  for (unsigned i = 0; i < choices.size(); ++i) choices[i] = {i / b};
  return choices;
}

std::vector<std::vector<unsigned>> build_clustering(unsigned n, unsigned d) {
  if (n % d != 0) throw ParameterMismatch("clustering requires d | n");
  std::vector<std::vector<unsigned>> choices(n);
  for (unsigned i = 0; i < n; ++i) {
    unsigned cluster = i / d;
    for (unsigned j = 0; j < d; ++j) choices[i].push_back(cluster * d + j);
  }
  return choices;
}

std::vector<std::vector<unsigned>> build_cyclic(unsigned n, unsigned d) {
  std::vector<std::vector<unsigned>> choices(n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < d; ++j) choices[i].push_back((i + j) % n);
  return choices;
}

// Searches for a perfect difference set D in Z_n with |D| = d, n = d^2-d+1:
// every nonzero residue arises exactly once as a difference of two members.
// C_i = {i + delta mod n} then overlaps every other C_j at exactly one node.
std::optional<std::vector<unsigned>> find_difference_set(unsigned n, unsigned d) {
  if (d == 1) return std::vector<unsigned>{0};
  std::vector<unsigned> set(d);
  set[0] = 0;
  std::vector<char> used(n, 0);
  // DFS over increasing candidates; prune on repeated differences.
  auto mark = [&](unsigned depth, unsigned cand, bool on) -> bool {
    for (unsigned j = 0; j < depth; ++j) {
      unsigned a = (cand - set[j] + n) % n;
      unsigned bdiff = (set[j] - cand + n) % n;
      if (on) {
        if (used[a] || used[bdiff] || a == bdiff) {
          for (unsigned jj = 0; jj < j; ++jj) {
            used[(cand - set[jj] + n) % n] = 0;
            used[(set[jj] - cand + n) % n] = 0;
          }
          return false;
        }
        used[a] = used[bdiff] = 1;
      } else {
        used[a] = used[bdiff] = 0;
      }
    }
    return true;
  };
  // iterative stack of candidate values per depth
  std::vector<unsigned> cand(d, 0);
  unsigned depth = 1;
  cand[1] = 1;
  while (true) {
    if (depth == 0) return std::nullopt;
    if (cand[depth] > n - (d - depth)) {
      --depth;
      if (depth >= 1) {
        mark(depth, set[depth], false);
        cand[depth] = set[depth] + 1;
      }
      continue;
    }
    if (mark(depth, cand[depth], true)) {
      set[depth] = cand[depth];
      if (depth + 1 == d) return set;
      ++depth;
      cand[depth] = set[depth - 1] + 1;
    } else {
      ++cand[depth];
    }
  }
}

std::vector<std::vector<unsigned>> build_block(unsigned n, unsigned d) {
  if (n != d * d - d + 1) throw ParameterMismatch("block requires n = d^2 - d + 1");
  auto ds = find_difference_set(n, d);
  if (!ds) throw NoBlockDesign("no symmetric block design for d=" + std::to_string(d));
  std::vector<std::vector<unsigned>> choices(n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned delta : *ds) choices[i].push_back((i + delta) % n);
  return choices;
}

std::vector<std::vector<unsigned>> build_random(unsigned n, unsigned d, Rng& rng) {
  std::vector<std::vector<unsigned>> choices(n);
  std::vector<unsigned> pool(n);
  for (unsigned i = 0; i < n; ++i) {
    std::iota(pool.begin(), pool.end(), 0u);
    for (unsigned j = 0; j < d; ++j) {  // partial Fisher-Yates
      unsigned pick = j + static_cast<unsigned>(rng.next_below(n - j));
      std::swap(pool[j], pool[pick]);
      choices[i].push_back(pool[j]);
    }
  }
  return choices;
}

// Randomized approximate block construction: shuffle all n*d copies into a
// queue, place each on a random node, linear-probe past nodes that already
// hold the object or are full, and on a full miss evict a random object from
// the first node free of the object back into the queue.
std::vector<std::vector<unsigned>> build_random_block_approx(unsigned n, unsigned d, Rng& rng) {
  std::vector<unsigned> copies;
  copies.reserve(static_cast<std::size_t>(n) * d);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < d; ++j) copies.push_back(i);
  for (std::size_t i = copies.size(); i > 1; --i)
    std::swap(copies[i - 1], copies[rng.next_below(i)]);

  std::deque<unsigned> queue(copies.begin(), copies.end());
  std::vector<std::vector<unsigned>> node_objs(n);
  std::vector<std::vector<char>> holds(n, std::vector<char>(n, 0));

  auto viable = [&](unsigned node, unsigned obj) {
    return !holds[node][obj] && node_objs[node].size() < d;
  };
  while (!queue.empty()) {
    unsigned obj = queue.front();
    queue.pop_front();
    unsigned start = static_cast<unsigned>(rng.next_below(n));
    bool placed = false;
    for (unsigned step = 0; step < n; ++step) {
      unsigned node = (start + step) % n;
      if (viable(node, obj)) {
        node_objs[node].push_back(obj);
        holds[node][obj] = 1;
        placed = true;
        break;
      }
    }
    if (!placed) {
      for (unsigned node = 0; node < n; ++node) {
        if (holds[node][obj]) continue;
        std::size_t victim = rng.next_below(node_objs[node].size());
        unsigned evicted = node_objs[node][victim];
        node_objs[node].erase(node_objs[node].begin() + victim);
        holds[node][evicted] = 0;
        queue.push_back(evicted);
        node_objs[node].push_back(obj);
        holds[node][obj] = 1;
        break;
      }
    }
  }
  std::vector<std::vector<unsigned>> choices(n);
  for (unsigned node = 0; node < n; ++node)
    for (unsigned obj : node_objs[node]) choices[obj].push_back(node);
  return choices;
}

// Constrained random: objects draw d nodes uniformly from the nodes that keep
// every affected d-hop sibling's overlapping-sibling count within v_max.
std::vector<std::vector<unsigned>> build_constrained_random(unsigned n, unsigned d,
                                                            unsigned v_max, Rng& rng) {
  constexpr int kMaxRetries = 64;
  for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
    std::vector<std::vector<unsigned>> choices(n);
    std::vector<std::vector<unsigned>> contents(n);
    // overlap_count[i][j] tracked implicitly via shared-node counts between
    // siblings; v[i] = number of siblings with nonzero overlap.
    std::vector<unsigned> v(n, 0);
    std::vector<std::vector<unsigned>> pair_overlap(n);  // per object: sibling->count
    for (unsigned i = 0; i < n; ++i) pair_overlap[i].assign(n, 0);

    bool failed = false;
    std::vector<unsigned> suitable;
    std::vector<char> in_choice(n, 0);
    for (unsigned i = 0; i < n && !failed; ++i) {
      std::fill(in_choice.begin(), in_choice.end(), 0);
      for (unsigned rep = 0; rep < d; ++rep) {
        suitable.clear();
        for (unsigned node = 0; node < n; ++node) {
          if (in_choice[node]) continue;
          // siblings of i stored on this node that would gain a first overlap
          unsigned new_overlaps = 0;
          bool sibling_blocked = false;
          for (unsigned obj : contents[node]) {
            if (obj == i || obj % d != i % d) continue;
            if (pair_overlap[i][obj] == 0) {
              ++new_overlaps;
              if (v[obj] + 1 > v_max) {
                sibling_blocked = true;
                break;
              }
            }
          }
          if (sibling_blocked || v[i] + new_overlaps > v_max) continue;
          suitable.push_back(node);
        }
        if (suitable.empty()) {
          failed = true;
          break;
        }
        unsigned node = suitable[rng.next_below(suitable.size())];
        for (unsigned obj : contents[node]) {
          if (obj == i || obj % d != i % d) continue;
          if (pair_overlap[i][obj] == 0) {
            ++v[i];
            ++v[obj];
          }
          ++pair_overlap[i][obj];
          ++pair_overlap[obj][i];
        }
        in_choice[node] = 1;
        choices[i].push_back(node);
        contents[node].push_back(i);
      }
    }
    if (!failed) return choices;
  }
  throw InfeasibleConstraint("constrained-random: could not place all objects under v_max");
}

}  // namespace

StorageAllocation build(DesignKind kind, unsigned n, unsigned d,
                        std::optional<std::uint64_t> seed) {
  if (n < 1 || d < 1 || (kind.design != Design::SingleChoice && d > n))
    throw ParameterMismatch("need n >= d >= 1");
  if (kind.randomized() && !seed)
    throw ParameterMismatch("randomized design requires a seed");

  std::vector<std::vector<unsigned>> choices;
  Rng rng(seed.value_or(0));
  switch (kind.design) {
    case Design::SingleChoice:
      if (d != 1) throw ParameterMismatch("single-choice requires d = 1");
      choices = build_single_choice(n, kind.b);
      break;
    case Design::Clustering:
      choices = build_clustering(n, d);
      break;
    case Design::Cyclic:
      choices = build_cyclic(n, d);
      break;
    case Design::Block:
      choices = build_block(n, d);
      break;
    case Design::Random:
      choices = build_random(n, d, rng);
      break;
    case Design::RandomBlockApprox:
      choices = build_random_block_approx(n, d, rng);
      break;
    case Design::ConstrainedRandom:
      choices = build_constrained_random(n, d, kind.v_max, rng);
      break;
  }
  StorageAllocation alloc(n, std::move(choices));
  alloc.kind_label = kind.to_string();
  alloc.seed = seed.value_or(0);
  return alloc;
}

unsigned span(const StorageAllocation& alloc, std::span<const unsigned> objects) {
  if (objects.empty()) throw IndexOutOfRange("span of empty object set");
  std::vector<char> hit(alloc.n_nodes(), 0);
  unsigned count = 0;
  for (unsigned obj : objects)
    for (unsigned node : alloc.choices(obj))
      if (!hit[node]) {
        hit[node] = 1;
        ++count;
      }
  return count;
}

namespace {

// Enumerate t-subsets with an incrementally maintained intersection; prunes
// once the intersection is empty.
std::uint64_t overlap_rec(const StorageAllocation& alloc, unsigned next, unsigned left,
                          const std::vector<unsigned>& current) {
  if (left == 0) return current.size();
  std::uint64_t total = 0;
  unsigned k = alloc.n_objects();
  for (unsigned i = next; i + left <= k; ++i) {
    std::vector<unsigned> inter;
    std::set_intersection(current.begin(), current.end(), alloc.choices(i).begin(),
                          alloc.choices(i).end(), std::back_inserter(inter));
    if (inter.empty() && left > 1) continue;
    total += overlap_rec(alloc, i + 1, left - 1, inter);
  }
  return total;
}

}  // namespace

std::uint64_t cum_overlap(const StorageAllocation& alloc, unsigned t) {
  unsigned k = alloc.n_objects();
  if (t < 2 || t > k) throw IndexOutOfRange("cum_overlap: need 1 < t <= k");
  check_budget(k, t);
  std::uint64_t total = 0;
  for (unsigned i = 0; i + t <= k; ++i)
    total += overlap_rec(alloc, i + 1, t - 1, alloc.choices(i));
  return total;
}

namespace {

void span_rec(const StorageAllocation& alloc, unsigned next, unsigned left,
              std::vector<unsigned>& cover, unsigned covered, std::uint64_t& total_span,
              std::map<unsigned, std::uint64_t>* histogram) {
  unsigned k = alloc.n_objects();
  if (left == 0) {
    total_span += covered;
    if (histogram) ++(*histogram)[covered];
    return;
  }
  for (unsigned i = next; i + left <= k; ++i) {
    unsigned added = 0;
    for (unsigned node : alloc.choices(i))
      if (cover[node]++ == 0) ++added;
    span_rec(alloc, i + 1, left - 1, cover, covered + added, total_span, histogram);
    for (unsigned node : alloc.choices(i))
      --cover[node];
  }
}

}  // namespace

std::uint64_t cum_span(const StorageAllocation& alloc, unsigned t) {
  unsigned k = alloc.n_objects();
  if (t < 1 || t > k) throw IndexOutOfRange("cum_span: need 1 <= t <= k");
  check_budget(k, t);
  std::vector<unsigned> cover(alloc.n_nodes(), 0);
  std::uint64_t total = 0;
  span_rec(alloc, 0, t, cover, 0, total, nullptr);
  return total;
}

StorageAllocation move_object(const StorageAllocation& alloc, unsigned object,
                              unsigned from_node, unsigned to_node) {
  auto choices = alloc.all_choices();
  if (object >= choices.size()) throw IndexOutOfRange("object index out of range");
  if (to_node >= alloc.n_nodes()) throw IndexOutOfRange("node index out of range");
  auto& c = choices[object];
  auto it = std::find(c.begin(), c.end(), from_node);
  if (it == c.end()) throw NotStored("object is not stored on from_node");
  if (std::find(c.begin(), c.end(), to_node) != c.end())
    throw AlreadyStored("object is already stored on to_node");
  *it = to_node;
  StorageAllocation out(alloc.n_nodes(), std::move(choices));
  out.kind_label = "custom";
  return out;
}

bool is_r_gap(const StorageAllocation& alloc, unsigned r) {
  unsigned k = alloc.n_objects();
  for (unsigned i = 0; i < k; ++i) {
    for (unsigned j = i + 1; j < k; ++j) {
      unsigned dist = std::min(j - i, k - (j - i));
      if (dist <= r) continue;
      const auto& a = alloc.choices(i);
      const auto& b = alloc.choices(j);
      std::size_t x = 0, y = 0;
      while (x < a.size() && y < b.size()) {
        if (a[x] == b[y]) return false;
        a[x] < b[y] ? ++x : ++y;
      }
    }
  }
  return true;
}

std::map<unsigned, double> overlap_profile(const StorageAllocation& alloc) {
  // Count pairwise overlaps through node contents: every node holding both
  // members of a pair contributes one to that pair's overlap.
  std::map<std::uint64_t, unsigned> pair_count;
  for (unsigned node = 0; node < alloc.n_nodes(); ++node) {
    const auto& objs = alloc.node_contents(node);
    for (std::size_t a = 0; a < objs.size(); ++a)
      for (std::size_t b = a + 1; b < objs.size(); ++b) {
        unsigned lo = std::min(objs[a], objs[b]), hi = std::max(objs[a], objs[b]);
        ++pair_count[(static_cast<std::uint64_t>(lo) << 32) | hi];
      }
  }
  std::map<unsigned, std::uint64_t> by_size;
  for (const auto& [key, count] : pair_count) ++by_size[count];
  std::uint64_t total = 0;
  for (const auto& [size, count] : by_size) total += count;
  std::map<unsigned, double> out;
  for (const auto& [size, count] : by_size)
    out[size] = static_cast<double>(count) / static_cast<double>(total);
  return out;
}

std::map<unsigned, double> span_t_distribution(const StorageAllocation& alloc, unsigned t,
                                               const SpanDistMethod& method) {
  unsigned k = alloc.n_objects();
  if (t < 1 || t > k) throw IndexOutOfRange("span_t: need 1 <= t <= k");
  std::map<unsigned, double> out;
  if (method.exact) {
    check_budget(k, t);
    std::vector<unsigned> cover(alloc.n_nodes(), 0);
    std::uint64_t total = 0;
    std::map<unsigned, std::uint64_t> histogram;
    span_rec(alloc, 0, t, cover, 0, total, &histogram);
    std::uint64_t subsets = 0;
    for (const auto& [s, c] : histogram) subsets += c;
    for (const auto& [s, c] : histogram)
      out[s] = static_cast<double>(c) / static_cast<double>(subsets);
  } else {
    Rng rng(method.seed);
    std::vector<unsigned> pool(k);
    std::map<unsigned, std::uint64_t> histogram;
    std::vector<unsigned> subset(t);
    for (std::size_t trial = 0; trial < method.samples; ++trial) {
      std::iota(pool.begin(), pool.end(), 0u);
      for (unsigned j = 0; j < t; ++j) {
        unsigned pick = j + static_cast<unsigned>(rng.next_below(k - j));
        std::swap(pool[j], pool[pick]);
        subset[j] = pool[j];
      }
      ++histogram[span(alloc, subset)];
    }
    for (const auto& [s, c] : histogram)
      out[s] = static_cast<double>(c) / static_cast<double>(method.samples);
  }
  return out;
}

std::string to_text(const StorageAllocation& alloc) {
  std::ostringstream os;
  write_allocation(os, alloc);
  return os.str();
}

void write_allocation(std::ostream& os, const StorageAllocation& alloc) {
  os << "nodes=" << alloc.n_nodes() << " objects=" << alloc.n_objects()
     << " d=" << alloc.replication() << " kind=" << alloc.kind_label
     << " seed=" << alloc.seed << "\n";
  for (unsigned i = 0; i < alloc.n_objects(); ++i) {
    os << i << ": ";
    const auto& c = alloc.choices(i);
    for (std::size_t j = 0; j < c.size(); ++j) os << (j ? "," : "") << c[j];
    os << "\n";
  }
}

StorageAllocation from_text(const std::string& text) {
  std::istringstream is(text);
  return read_allocation(is);
}

StorageAllocation read_allocation(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw ParseError("empty allocation file");
  unsigned n = 0, k = 0;
  std::string kind = "custom";
  std::uint64_t seed = 0;
  {
    std::istringstream hs(header);
    std::string tok;
    while (hs >> tok) {
      auto eq = tok.find('=');
      if (eq == std::string::npos) throw ParseError("bad allocation header token: " + tok);
      std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
      if (key == "nodes") n = static_cast<unsigned>(std::stoul(val));
      else if (key == "objects") k = static_cast<unsigned>(std::stoul(val));
      else if (key == "kind") kind = val;
      else if (key == "seed") seed = std::stoull(val);
      // "d" is derivable; accepted and ignored
    }
  }
  std::vector<std::vector<unsigned>> choices(k);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("bad allocation line: " + line);
    unsigned obj = static_cast<unsigned>(std::stoul(line.substr(0, colon)));
    if (obj >= k) throw ParseError("object index out of range in allocation file");
    std::stringstream nodes(line.substr(colon + 1));
    std::string num;
    while (std::getline(nodes, num, ','))
      choices[obj].push_back(static_cast<unsigned>(std::stoul(num)));
  }
  StorageAllocation alloc(n, std::move(choices));
  alloc.kind_label = kind;
  alloc.seed = seed;
  return alloc;
}

}  // namespace dchoice
