#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace emolex::numerics {

// Average ranks (1-based); ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> x);

// Sample correlation. Throws DomainError on length mismatch, n < 2 or zero variance.
double pearson(std::span<const double> x, std::span<const double> y);
// Pearson correlation of average-rank vectors.
double spearman(std::span<const double> x, std::span<const double> y);

struct WelchAnovaResult {
  double f;
  double df1;
  double df2;
  double p;
};

// One-way ANOVA for unequal variances. Every group needs n >= 2 and positive variance.
WelchAnovaResult welch_anova(std::span<const std::vector<double>> groups);

struct KruskalWallisResult {
  double h;
  std::size_t df;
  double p;
};

// Tie-corrected H with chi-squared p-value. All values tied gives H = 0, p = 1.
KruskalWallisResult kruskal_wallis(std::span<const std::vector<double>> groups);

}  // namespace emolex::numerics
