#include "sublevy/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace sublevy {

void NeumaierSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x))
    compensation_ += (sum_ - t) + x;
  else
    compensation_ += (x - t) + sum_;
  sum_ = t;
}

double compensated_sum(const std::vector<double>& xs) {
  NeumaierSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

MeanSe mean_and_se(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean_and_se: empty sample");
  const double n = static_cast<double>(xs.size());
  const double m = compensated_sum(xs) / n;
  NeumaierSum sq;
  for (double x : xs) sq.add((x - m) * (x - m));
  const double var = xs.size() > 1 ? sq.value() / (n - 1.0) : 0.0;
  return {m, std::sqrt(var / n), var};
}

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

namespace {
double ks_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) *
                        std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}
}  // namespace

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  const double lambda = std::sqrt(na * nb / (na + nb)) * d;
  return {d, ks_q(lambda)};
}

HillEstimate hill_tail_index(std::vector<double> values, double top_fraction) {
  if (!(top_fraction > 0.0) || !(top_fraction < 1.0))
    throw std::invalid_argument("hill_tail_index: top_fraction must be in (0,1)");
  for (auto& v : values) v = std::abs(v);
  std::sort(values.begin(), values.end(), std::greater<>());
  int k = static_cast<int>(top_fraction * static_cast<double>(values.size()));
  HillEstimate out;
  // Order statistics at or below the threshold must stay strictly positive.
  while (k > 0 && !(values[static_cast<std::size_t>(k)] > 0.0)) --k;
  out.tail_count = k;
  if (k < 100) {
    out.conclusive = false;
    return out;
  }
  out.threshold = values[static_cast<std::size_t>(k)];
  NeumaierSum s;
  for (int i = 0; i < k; ++i)
    s.add(std::log(values[static_cast<std::size_t>(i)] / out.threshold));
  const double h = s.value() / k;
  out.index = 1.0 / h;
  out.se = out.index / std::sqrt(static_cast<double>(k));
  return out;
}

void parallel_chunks(int n_chunks, int threads,
                     const std::function<void(int)>& work) {
  threads = std::max(1, std::min(threads, n_chunks));
  if (threads == 1) {
    for (int c = 0; c < n_chunks; ++c) work(c);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (int c = t; c < n_chunks; c += threads) work(c);
    });
  }
  for (auto& th : pool) th.join();
}

std::pair<long, long> chunk_range(long n, int k, int c) {
  const long lo = n * c / k;
  const long hi = n * (c + 1) / k;
  return {lo, hi};
}

}  // namespace sublevy
