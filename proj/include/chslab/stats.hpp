#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace chslab::stats {

// Compensated accumulator; summation error stays O(eps) independent of the
// term count, which matters for the 1e-10-level algebraic identities.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty sample");
  KahanSum s;
  for (double x : xs) s.add(x);
  return s.value() / static_cast<double>(xs.size());
}

inline double variance(std::span<const double> xs) {
  if (xs.size() < 2) throw std::invalid_argument("variance needs >= 2 samples");
  const double m = mean(xs);
  KahanSum s;
  for (double x : xs) s.add((x - m) * (x - m));
  return s.value() / static_cast<double>(xs.size() - 1);
}

inline double std_error(std::span<const double> xs) {
  return std::sqrt(variance(xs) / static_cast<double>(xs.size()));
}

// Standard error of the mean for a correlated series, by batch means.
inline double batch_means_se(std::span<const double> xs, std::size_t batches = 50) {
  if (xs.size() < 2 * batches) batches = xs.size() / 2;
  if (batches < 2) throw std::invalid_argument("series too short for batch means");
  const std::size_t len = xs.size() / batches;
  std::vector<double> bm(batches);
  for (std::size_t b = 0; b < batches; ++b) {
    KahanSum s;
    for (std::size_t i = b * len; i < (b + 1) * len; ++i) s.add(xs[i]);
    bm[b] = s.value() / static_cast<double>(len);
  }
  return std_error(bm);
}

// Effective sample size implied by the ratio of naive to batch-means error.
inline double effective_sample_size(std::span<const double> xs,
                                    std::size_t batches = 50) {
  const double se_naive = std_error(xs);
  const double se_bm = batch_means_se(xs, batches);
  if (se_bm <= 0.0) return static_cast<double>(xs.size());
  const double ess =
      static_cast<double>(xs.size()) * (se_naive * se_naive) / (se_bm * se_bm);
  return std::min(ess, static_cast<double>(xs.size()));
}

inline double z_score(double a, double se_a, double b, double se_b) {
  const double denom = std::sqrt(se_a * se_a + se_b * se_b);
  if (denom == 0.0) return (a == b) ? 0.0 : INFINITY;
  return (a - b) / denom;
}

}  // namespace chslab::stats
