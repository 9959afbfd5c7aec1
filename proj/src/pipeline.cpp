#include "emolex/pipeline.hpp"

namespace emolex::pipeline {

EvalOutcome evaluate(const downstream::AnnotatedDataset& dataset, const features::Featurizer& featurizer,
                     std::uint64_t seed, double c) {
  using downstream::TaskKind;
  const auto ds = downstream::split(dataset, seed);
  const auto& parts = *ds.split;
  const auto x_train = featurizer.matrix(ds.texts(parts.train));
  const auto y_train = ds.targets(parts.train);
  auto model = ds.task == TaskKind::regression
                   ? downstream::fit_linear(x_train, y_train)
                   : downstream::fit_logistic(x_train, y_train, ds.task, ds.label_names.size(), c);
  const auto predictions = downstream::predict(model, featurizer.matrix(ds.texts(parts.test)));
  auto report = downstream::score(predictions, ds.targets(parts.test), ds.task, ds.label_names);
  report.dataset = ds.name;
  report.strategy = featurizer.spec().name();
  return {std::move(report), std::move(model)};
}

}  // namespace emolex::pipeline
