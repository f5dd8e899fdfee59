#include "qmarg/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qmarg/errors.hpp"

namespace qmarg {

BlockSumVector block_sums(std::span<const double> increasing, std::size_t block) {
  if (block == 0 || increasing.size() % block != 0) {
    throw ArgumentError("block_sums: block size " + std::to_string(block) + " does not divide length " +
                        std::to_string(increasing.size()));
  }
  BlockSumVector out;
  out.values.reserve(increasing.size() / block);
  for (std::size_t start = 0; start < increasing.size(); start += block) {
    double s = 0.0;
    for (std::size_t i = start; i < start + block; ++i) s += increasing[i];
    out.values.push_back(s);
  }
  return out;
}

MajorizationResult majorizes(std::span<const double> y, std::span<const double> x, double tol) {
  if (x.size() != y.size()) {
    throw ArgumentError("majorizes: length mismatch " + std::to_string(y.size()) + " vs " +
                        std::to_string(x.size()));
  }
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> ys(y.begin(), y.end());
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());

  MajorizationResult r;
  r.min_prefix_slack = std::numeric_limits<double>::infinity();
  double px = 0.0, py = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    px += xs[k];
    py += ys[k];
    if (k + 1 == xs.size()) break;
    const double slack = px - py;
    r.min_prefix_slack = std::min(r.min_prefix_slack, slack);
    if (slack < -tol && r.outcome == MajorizationOutcome::kHolds) {
      r.outcome = MajorizationOutcome::kFailsAtK;
      r.failed_k = k + 1;
    }
  }
  if (xs.size() == 1) r.min_prefix_slack = 0.0;
  r.total_difference = px - py;
  if (r.outcome == MajorizationOutcome::kHolds && std::abs(r.total_difference) > tol) {
    r.outcome = MajorizationOutcome::kSumMismatch;
  }
  return r;
}

}  // namespace qmarg
