#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emolex/error.hpp"
#include "emolex/lexica.hpp"
#include "emolex/numerics/random.hpp"

namespace emolex::vae {

enum class EmissionKind { gaussian, bernoulli };

std::string_view to_string(EmissionKind kind);
EmissionKind parse_emission_kind(std::string_view s);
// Binary lexica reconstruct through a Bernoulli, continuous ones through a Gaussian.
EmissionKind emission_for(ValueKind kind);

// Shape-checked exact equality.
template <class A, class B>
bool same_values(const A& a, const B& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

// y = weight * x + bias
struct Dense {
  Eigen::MatrixXd weight;
  Eigen::VectorXd bias;

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return weight * x + bias; }
  friend bool operator==(const Dense& a, const Dense& b) {
    return same_values(a.weight, b.weight) && same_values(a.bias, b.bias);
  }
};

// Maps raw lexicon values to model space: (x - offset) / scale, per label.
struct InputScaling {
  Eigen::VectorXd offset;
  Eigen::VectorXd scale;

  Eigen::VectorXd apply(std::span<const double> raw) const;
  friend bool operator==(const InputScaling& a, const InputScaling& b) {
    return same_values(a.offset, b.offset) && same_values(a.scale, b.scale);
  }
};

// Bounded continuous lexica are min-max scaled with the declared range,
// unbounded ones divided by the per-label max |x| observed. Binary lexica are
// left alone.
InputScaling fit_scaling(const Lexicon& lexicon);

struct ViewParams {
  LexiconSchema schema;
  EmissionKind emission = EmissionKind::gaussian;
  InputScaling scaling;
  Dense enc_hidden;  // L_d -> H
  Dense enc_out;     // H -> N
  Dense dec_hidden;  // N -> H
  Dense dec_out;     // H -> L_d

  friend bool operator==(const ViewParams&, const ViewParams&) = default;
};

struct ModelParams {
  int latent_dim = 0;
  int hidden_width = 0;
  double emission_variance = 0.05;
  std::vector<ViewParams> views;

  // Throws InputError for an unregistered lexicon.
  std::size_t view_index(std::string_view lexicon) const;

  // Every weight and bias tensor in a fixed order, as flat spans.
  std::vector<std::span<double>> tensors();
  std::vector<std::span<const double>> tensors() const;
  std::vector<std::string> tensor_names() const;
  std::size_t parameter_count() const;

  // Same shapes, all weights zero.
  ModelParams zeros_like() const;
  bool all_finite() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct TrainConfig {
  static constexpr double prior_alpha = 1.0;

  int latent_dim = 8;
  int hidden_width = 82;
  int epochs = 200;
  int batch_size = 256;
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double emission_variance = 0.05;
  int mc_samples = 1;
  std::uint64_t seed = 0;

  // Throws InputError.
  void validate() const;
};

// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, one view per lexicon, in order.
ModelParams initialize(std::span<const Lexicon> lexica, const TrainConfig& config);

// One source observation of a word, already scaled.
struct Observation {
  std::size_t view;
  Eigen::VectorXd x;
};

struct WordData {
  std::string word;
  std::vector<Observation> observations;
};

// One WordData per vocabulary word, in vocabulary order. Lexica must be in
// the same order as params.views.
std::vector<WordData> prepare_words(const ModelParams& params, std::span<const Lexicon> lexica,
                                    const Vocabulary& vocabulary);

struct DirichletPosterior {
  Eigen::VectorXd beta;
};

struct LatentSample {
  Eigen::VectorXd z;
  Eigen::VectorXd gamma;
  // d gamma_k / d beta_k; the gamma draws are independent across components.
  Eigen::VectorXd dgamma_dbeta;

  // J(j, k) = d z_j / d beta_k through the normalization.
  Eigen::MatrixXd dz_dbeta() const;
};

struct EmissionParams {
  Eigen::VectorXd rho;
  EmissionKind kind = EmissionKind::gaussian;
  double variance = 0.05;
};

// Hidden layer is rectified-linear, output softmax.
Eigen::VectorXd encode(const ModelParams& params, std::size_t view, const Eigen::VectorXd& x);
Eigen::VectorXd encode(const ModelParams& params, std::string_view lexicon, const Eigen::VectorXd& x);

// beta = 1 + sum of encodings over the word's observations.
DirichletPosterior posterior(const ModelParams& params, std::span<const Observation> observations);

// Source of Gamma(shape, 1) draws with their shape derivatives, addressed by
// (word slot in batch, Monte-Carlo sample, component).
class GammaNoise {
 public:
  virtual ~GammaNoise() = default;
  virtual numerics::GammaDraw draw(std::size_t word, std::size_t sample, std::size_t component,
                                   double shape) = 0;
};

class SampledNoise final : public GammaNoise {
 public:
  explicit SampledNoise(numerics::Rng& rng) : rng_(rng) {}
  numerics::GammaDraw draw(std::size_t, std::size_t, std::size_t, double shape) override;

 private:
  numerics::Rng& rng_;
};

// Fixed CDF levels: the draw is the gamma quantile at a level chosen once, so
// the ELBO becomes a deterministic, differentiable function of the parameters.
class FrozenNoise final : public GammaNoise {
 public:
  FrozenNoise(numerics::Rng& rng, std::size_t words, std::size_t samples, std::size_t components);
  numerics::GammaDraw draw(std::size_t word, std::size_t sample, std::size_t component,
                           double shape) override;

 private:
  std::size_t samples_, components_;
  std::vector<double> levels_;
};

LatentSample sample_posterior(const DirichletPosterior& posterior, GammaNoise& noise,
                              std::size_t word = 0, std::size_t sample = 0);
LatentSample sample_posterior(const DirichletPosterior& posterior, numerics::Rng& rng);

EmissionParams decode(const ModelParams& params, std::size_t view, const Eigen::VectorXd& z);
EmissionParams decode(const ModelParams& params, std::string_view lexicon, const Eigen::VectorXd& z);

// Throws DomainError on dimension mismatch or a Bernoulli target outside {0,1}.
double emission_log_likelihood(const EmissionParams& emission, const Eigen::VectorXd& x);

// KL(Dir(beta) || Dir(1,...,1)) and its gradient in beta.
double kl_dirichlet(const Eigen::VectorXd& beta);
Eigen::VectorXd kl_dirichlet_gradient(const Eigen::VectorXd& beta);

struct ElboTerms {
  double total = 0.0;           // sum over words of reconstruction - kl
  double reconstruction = 0.0;  // Monte-Carlo average, summed over words
  double kl = 0.0;
};

// Sum over the batch of per-word ELBOs. When `gradient` is non-null it must
// have the shape of `params`; the gradient of `total` is accumulated into it.
ElboTerms elbo(const ModelParams& params, std::span<const WordData> batch, GammaNoise& noise,
               ModelParams* gradient = nullptr, int mc_samples = 1);

struct EpochLog {
  int epoch;
  double mean_elbo;
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochLog> log;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

using EpochCallback = std::function<void(const EpochLog&)>;

// Adam on the negated mean ELBO over shuffled minibatches. Throws
// TrainingError when the loss or a parameter goes non-finite.
TrainResult train(std::span<const Lexicon> lexica, const Vocabulary& vocabulary,
                  const TrainConfig& config, const EpochCallback& on_epoch = {});

// Mean ELBO over all words with fresh noise from `rng`.
double mean_elbo(const ModelParams& params, std::span<const WordData> words, numerics::Rng& rng,
                 int mc_samples = 1);

}  // namespace emolex::vae
