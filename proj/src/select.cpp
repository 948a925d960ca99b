#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "airy/errors.hpp"
#include "airy/mpm.hpp"

namespace airy::mpm {
namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

struct PooledPoint {
  Vec2 center;
  double weight;
};

}  // namespace

ParameterEstimate select(std::span<const ParameterEstimate> candidates, double eps1, double eps2) {
  (void)eps2;  // weights are aggregated by median; eps2 only states the guarantee
  if (candidates.empty()) throw std::invalid_argument("select: no candidates");
  const std::size_t k = candidates.front().centers.size();
  for (const auto &c : candidates) {
    if (c.centers.size() != k || c.weights.size() != k) throw std::invalid_argument("select: candidates differ in k");
  }
  const double t = static_cast<double>(candidates.size());

  std::vector<PooledPoint> pool;
  pool.reserve(candidates.size() * k);
  for (const auto &c : candidates) {
    for (std::size_t i = 0; i < k; ++i) pool.push_back({c.centers[i], c.weights[i]});
  }

  // A point survives when at least 2T/3 other pooled points lie within 2 eps1 of it.
  std::vector<std::size_t> kept;
  for (std::size_t a = 0; a < pool.size(); ++a) {
    std::size_t close = 0;
    for (std::size_t b = 0; b < pool.size(); ++b) {
      if (b != a && distance(pool[a].center, pool[b].center) <= 2.0 * eps1) ++close;
    }
    if (3.0 * static_cast<double>(close) >= 2.0 * t) kept.push_back(a);
  }

  DisjointSets sets(kept.size());
  for (std::size_t a = 0; a < kept.size(); ++a) {
    for (std::size_t b = a + 1; b < kept.size(); ++b) {
      if (distance(pool[kept[a]].center, pool[kept[b]].center) <= 6.0 * eps1) sets.unite(a, b);
    }
  }
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::size_t> group_of(kept.size(), static_cast<std::size_t>(-1));
  for (std::size_t a = 0; a < kept.size(); ++a) {
    const std::size_t root = sets.find(a);
    if (group_of[root] == static_cast<std::size_t>(-1)) {
      group_of[root] = groups.size();
      groups.emplace_back();
    }
    groups[group_of[root]].push_back(kept[a]);
  }
  if (groups.size() != k) {
    throw PartitionMismatch("expected " + std::to_string(k) + " groups of dense candidate centers, found " +
                            std::to_string(groups.size()) + " (" + std::to_string(kept.size()) + " of " +
                            std::to_string(pool.size()) + " points dense)");
  }

  ParameterEstimate out;
  for (auto &g : groups) {
    std::stable_sort(g.begin(), g.end(), [&](std::size_t a, std::size_t b) { return pool[a].weight < pool[b].weight; });
    const PooledPoint &median = pool[g[(g.size() - 1) / 2]];
    out.weights.push_back(median.weight);
    out.centers.push_back(median.center);
  }
  return out;
}

}  // namespace airy::mpm
