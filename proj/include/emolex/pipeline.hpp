#pragma once

#include <cstdint>

#include "emolex/downstream.hpp"
#include "emolex/features.hpp"

namespace emolex::pipeline {

struct EvalOutcome {
  downstream::EvalReport report;
  downstream::LinearModel model;
};

// Splits (unless the dataset ships a split), fits on train, scores on test.
// Logistic regression for classification, least squares for regression.
EvalOutcome evaluate(const downstream::AnnotatedDataset& dataset, const features::Featurizer& featurizer,
                     std::uint64_t seed, double c = 1.0);

}  // namespace emolex::pipeline
