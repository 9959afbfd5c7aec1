#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace emolex::downstream {

enum class TaskKind { single_label, multi_label, regression };

std::string_view to_string(TaskKind kind);
TaskKind parse_task_kind(std::string_view s);

// Class index, sorted set of class indices, or one real per dimension.
using Target = std::variant<std::size_t, std::vector<std::size_t>, std::vector<double>>;

struct Instance {
  std::string text;
  Target target;
};

struct Split {
  std::vector<std::size_t> train, dev, test;
  friend bool operator==(const Split&, const Split&) = default;
};

struct AnnotatedDataset {
  std::string name;
  TaskKind task = TaskKind::single_label;
  std::vector<std::string> label_names;
  std::vector<Instance> instances;
  std::optional<Split> split;

  // Throws InputError on a target that does not fit the task, or a split that
  // is not a disjoint cover of the instances.
  void validate() const;
  std::vector<std::string> texts(std::span<const std::size_t> indices) const;
  std::vector<Target> targets(std::span<const std::size_t> indices) const;
};

// Canonical TSV: `#task=...` and `#labels=a,b,c` header comments, then
// `text<TAB>target[<TAB>train|dev|test]`. Targets are a class name, comma-joined
// class names (possibly empty), or comma-joined reals. The third column is all
// or nothing and supplies a fixed split.
AnnotatedDataset read_dataset(std::istream& in, const std::string& name);
AnnotatedDataset read_dataset(const std::filesystem::path& file);
void write_dataset(std::ostream& out, const AnnotatedDataset& dataset,
                   const std::vector<std::string>& header_comments = {});

// Seeded 80:20 train/test shuffle split with 10% of train carved out as dev.
// A dataset that already has a split is returned unchanged. Throws InputError
// for fewer than 10 instances.
AnnotatedDataset split(AnnotatedDataset dataset, std::uint64_t seed, double train_ratio = 0.8,
                       double dev_fraction = 0.1);

struct FitInfo {
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
};

// Scores are weight * x + bias, one row per class or dimension.
struct LinearModel {
  TaskKind task = TaskKind::single_label;
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;
  double c = 1.0;
  std::vector<FitInfo> fits;

  Eigen::Index classes() const { return weight.rows(); }
  Eigen::Index features() const { return weight.cols(); }
};

// Class scores softmax-normalized (single-label) or per-class sigmoids (multi-label).
Eigen::VectorXd predict_proba(const LinearModel& model, const Eigen::VectorXd& x);
Target predict(const LinearModel& model, const Eigen::VectorXd& x);
std::vector<Target> predict(const LinearModel& model, const Eigen::MatrixXd& x);

// Objective of the binary problem: 0.5 |w|^2 + C sum log(1 + exp(-s_i (w.x_i + b))),
// s_i = +1 for y_i = 1, -1 otherwise; b is not penalized.
double binary_logistic_objective(const Eigen::MatrixXd& x, std::span<const int> y, const Eigen::VectorXd& w,
                                 double b, double c);
// Multinomial objective 0.5 sum_k |W_k|^2 - C sum log softmax(W x_i + b)_{y_i}.
double multinomial_logistic_objective(const Eigen::MatrixXd& x, std::span<const std::size_t> y,
                                      const Eigen::MatrixXd& w, const Eigen::VectorXd& b, double c);
// The objective a fitted single-label model minimized.
double logistic_objective(const LinearModel& model, const Eigen::MatrixXd& x, std::span<const std::size_t> y);

// L2-regularized logistic regression. Two classes: one binary problem whose
// weight vector w is stored as rows -w/2 and +w/2, so the softmax of the rows is
// the logistic model. More classes: multinomial. Multi-label: one binary
// problem per class. Stops once |grad| <= 1e-6 max(1, |theta|). Throws
// InputError when single-label training data holds fewer than two classes.
LinearModel fit_logistic(const Eigen::MatrixXd& x, std::span<const Target> targets, TaskKind task,
                         std::size_t classes, double c = 1.0);

// Per-dimension least squares with an unpenalized intercept.
LinearModel fit_linear(const Eigen::MatrixXd& x, std::span<const Target> targets);

struct EvalReport {
  std::string dataset;
  std::string strategy;
  std::string metric;  // accuracy, jaccard_accuracy or mean_pearson
  double value = 0.0;
  // Per class (recall) for single-label, per label (binary accuracy) for
  // multi-label, per dimension (Pearson r) for regression. NA cells are nullopt.
  std::vector<std::string> breakdown_labels;
  std::vector<std::optional<double>> breakdown;

  // Values used as data points in significance tests: the headline value for
  // single-label, the defined breakdown cells otherwise.
  std::vector<double> data_points(TaskKind task) const;
};

// Throws InputError on length mismatch or an empty evaluation set.
EvalReport score(std::span<const Target> predictions, std::span<const Target> gold, TaskKind task,
                 const std::vector<std::string>& label_names);

double jaccard(const std::vector<std::size_t>& predicted, const std::vector<std::size_t>& gold);

// |shared labels (case-insensitive)| / |dataset labels|.
double label_overlap(const std::vector<std::string>& lexicon_labels, const std::vector<std::string>& dataset_labels);

// Pearson r; needs equal lengths >= 3 and non-constant inputs.
double overlap_accuracy_correlation(std::span<const double> overlaps, std::span<const double> accuracies);

// `feature<TAB>class...` with one row per feature; biases go in a `# bias` comment.
void export_coefficients(std::ostream& out, const LinearModel& model, const std::vector<std::string>& feature_names,
                         const std::vector<std::string>& class_names,
                         const std::vector<std::string>& header_comments = {});

}  // namespace emolex::downstream
