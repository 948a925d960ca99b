#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "airy/linalg.hpp"

namespace airy::linalg {
namespace {

constexpr std::size_t kExhaustiveLimit = 12;

class BranchAndBound {
 public:
  explicit BranchAndBound(const Eigen::MatrixXd &cost)
      : cost_(cost), n_(static_cast<std::size_t>(cost.rows())), used_(n_, false), current_(n_) {
    order_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      order_[i].resize(n_);
      std::iota(order_[i].begin(), order_[i].end(), 0);
      std::stable_sort(order_[i].begin(), order_[i].end(),
                       [&](std::size_t a, std::size_t b) { return cost_(i, a) < cost_(i, b); });
    }
  }

  Matching solve() {
    descend(0, 0.0);
    if (best_perm_.empty()) {
      // Only reachable with non-finite costs.
      best_perm_.resize(n_);
      std::iota(best_perm_.begin(), best_perm_.end(), 0);
    }
    return {best_perm_, best_};
  }

 private:
  void descend(std::size_t row, double worst) {
    if (row == n_) {
      best_ = worst;
      best_perm_ = current_;
      return;
    }
    for (std::size_t col : order_[row]) {
      if (used_[col]) continue;
      const double w = std::max(worst, cost_(row, col));
      // Columns are visited in ascending cost, so nothing later in this row helps.
      if (w >= best_) break;
      used_[col] = true;
      current_[row] = col;
      descend(row + 1, w);
      used_[col] = false;
    }
  }

  const Eigen::MatrixXd &cost_;
  std::size_t n_;
  std::vector<std::vector<std::size_t>> order_;
  std::vector<bool> used_;
  std::vector<std::size_t> current_;
  std::vector<std::size_t> best_perm_;
  double best_ = std::numeric_limits<double>::infinity();
};

// Kuhn's augmenting paths restricted to edges with cost <= threshold.
bool perfect_matching(const Eigen::MatrixXd &cost, double threshold,
                      std::vector<std::size_t> &row_to_col) {
  const auto n = static_cast<std::size_t>(cost.rows());
  constexpr auto kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> col_to_row(n, kNone);
  std::vector<char> seen(n);
  auto augment = [&](auto &&self, std::size_t row) -> bool {
    for (std::size_t col = 0; col < n; ++col) {
      if (seen[col] || cost(row, col) > threshold) continue;
      seen[col] = 1;
      if (col_to_row[col] == kNone || self(self, col_to_row[col])) {
        col_to_row[col] = row;
        return true;
      }
    }
    return false;
  };
  for (std::size_t row = 0; row < n; ++row) {
    std::fill(seen.begin(), seen.end(), 0);
    if (!augment(augment, row)) return false;
  }
  row_to_col.assign(n, 0);
  for (std::size_t col = 0; col < n; ++col) row_to_col[col_to_row[col]] = col;
  return true;
}

Matching threshold_search(const Eigen::MatrixXd &cost) {
  std::vector<double> levels(cost.data(), cost.data() + cost.size());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::size_t lo = 0, hi = levels.size() - 1;
  std::vector<std::size_t> perm;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (perfect_matching(cost, levels[mid], perm)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  perfect_matching(cost, levels[lo], perm);
  return {perm, levels[lo]};
}

}  // namespace

Matching bottleneck_assignment(const Eigen::MatrixXd &cost) {
  if (cost.rows() != cost.cols()) throw std::invalid_argument("bottleneck_assignment: cost must be square");
  if (cost.rows() == 0) return {};
  if (static_cast<std::size_t>(cost.rows()) <= kExhaustiveLimit) return BranchAndBound(cost).solve();
  return threshold_search(cost);
}

Matching match_points(const std::vector<Vec2> &estimated, const std::vector<Vec2> &truth) {
  if (estimated.size() != truth.size()) throw std::invalid_argument("match_points: length mismatch");
  const auto n = static_cast<Eigen::Index>(truth.size());
  Eigen::MatrixXd cost(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) cost(i, j) = distance(truth[i], estimated[j]);
  }
  return bottleneck_assignment(cost);
}

}  // namespace airy::linalg
