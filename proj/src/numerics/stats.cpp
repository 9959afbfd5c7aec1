#include "emolex/numerics/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "emolex/error.hpp"
#include "emolex/numerics/special.hpp"

namespace emolex::numerics {

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && x[order[j]] == x[order[i]]) ++j;
    // Positions i..j-1 (0-based) share rank mean((i+1)..j).
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("pearson: length mismatch");
  if (x.size() < 2) throw DomainError("pearson: need at least two observations");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw DomainError("correlation undefined: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("spearman: length mismatch");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

WelchAnovaResult welch_anova(std::span<const std::vector<double>> groups) {
  const std::size_t k = groups.size();
  if (k < 2) throw DomainError("welch_anova: need at least two groups");
  std::vector<double> weight(k), mean(k);
  std::vector<std::size_t> count(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& g = groups[i];
    if (g.size() < 2) throw DomainError("welch_anova: group " + std::to_string(i) + " has fewer than two values");
    const double n = static_cast<double>(g.size());
    const double m = std::accumulate(g.begin(), g.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : g) ss += (v - m) * (v - m);
    const double var = ss / (n - 1.0);
    if (!(var > 0.0)) throw DomainError("welch_anova: group " + std::to_string(i) + " has zero variance");
    count[i] = g.size();
    mean[i] = m;
    weight[i] = n / var;
  }
  const double w_total = std::accumulate(weight.begin(), weight.end(), 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < k; ++i) grand += weight[i] * mean[i];
  grand /= w_total;
  double between = 0.0;
  double lambda = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    between += weight[i] * (mean[i] - grand) * (mean[i] - grand);
    const double r = 1.0 - weight[i] / w_total;
    lambda += r * r / (static_cast<double>(count[i]) - 1.0);
  }
  const double kd = static_cast<double>(k);
  const double numerator = between / (kd - 1.0);
  const double denominator = 1.0 + 2.0 * (kd - 2.0) / (kd * kd - 1.0) * lambda;
  WelchAnovaResult r;
  r.f = numerator / denominator;
  r.df1 = kd - 1.0;
  r.df2 = (kd * kd - 1.0) / (3.0 * lambda);
  r.p = f_sf(r.f, r.df1, r.df2);
  return r;
}

KruskalWallisResult kruskal_wallis(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) throw DomainError("kruskal_wallis: need at least two groups");
  std::vector<double> pooled;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (groups[i].empty()) throw DomainError("kruskal_wallis: group " + std::to_string(i) + " is empty");
    pooled.insert(pooled.end(), groups[i].begin(), groups[i].end());
  }
  const auto ranks = average_ranks(pooled);
  const double n = static_cast<double>(pooled.size());
  double sum_sq = 0.0;
  std::size_t offset = 0;
  for (const auto& g : groups) {
    double r = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) r += ranks[offset + j];
    sum_sq += r * r / static_cast<double>(g.size());
    offset += g.size();
  }
  // Tie correction 1 - Σ(t³ - t) / (n³ - n).
  auto sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double ties = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    ties += t * t * t - t;
    i = j;
  }
  KruskalWallisResult result{0.0, groups.size() - 1, 1.0};
  const double correction = 1.0 - ties / (n * n * n - n);
  if (!(correction > 0.0)) return result;
  const double h = (12.0 / (n * (n + 1.0)) * sum_sq - 3.0 * (n + 1.0)) / correction;
  result.h = std::max(0.0, h);
  result.p = chi2_sf(result.h, static_cast<double>(result.df));
  return result;
}

}  // namespace emolex::numerics
