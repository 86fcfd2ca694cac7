#pragma once

#include <functional>
#include <vector>

namespace sublevy {

/// Neumaier-compensated accumulator; reduction results do not depend on how
/// work was split across threads because partials are merged in fixed order.
class NeumaierSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double compensated_sum(const std::vector<double>& xs);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // sample standard error of the mean
  double variance = 0.0;
};
MeanSe mean_and_se(const std::vector<double>& xs);

double normal_pdf(double x);
double normal_cdf(double x);
/// Upper tail P(Z > x).
double normal_sf(double x);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};
/// Two-sample Kolmogorov-Smirnov with the asymptotic p-value
/// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct HillEstimate {
  double index = 0.0;     // 1 / mean log-excess over the k-th order statistic
  double se = 0.0;        // asymptotic index / sqrt(k)
  int tail_count = 0;
  double threshold = 0.0;
  bool conclusive = true; // false when fewer than 100 tail points
};
/// Hill tail-index estimate from the top `top_fraction` of |values|.
HillEstimate hill_tail_index(std::vector<double> values, double top_fraction);

/// Run `n_chunks` independent work items on up to `threads` threads. Each
/// chunk must write only to its own slots; chunk ids are stable, so results
/// are identical for every thread count.
void parallel_chunks(int n_chunks, int threads,
                     const std::function<void(int)>& work);

/// Number of fixed RNG chunks used by Monte Carlo loops.
inline constexpr int kMcChunks = 64;

/// Row range [begin, end) of chunk `c` when splitting n items into k chunks.
std::pair<long, long> chunk_range(long n, int k, int c);

}  // namespace sublevy
