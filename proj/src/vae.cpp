#include "emolex/vae.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "emolex/numerics/special.hpp"

namespace emolex::vae {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

VectorXd softmax(const VectorXd& a) {
  const VectorXd e = (a.array() - a.maxCoeff()).exp();
  return e / e.sum();
}

VectorXd relu(const VectorXd& a) { return a.cwiseMax(0.0); }

double softplus(double l) { return std::max(l, 0.0) + std::log1p(std::exp(-std::abs(l))); }

double sigmoid(double l) {
  if (l >= 0) return 1.0 / (1.0 + std::exp(-l));
  const double e = std::exp(l);
  return e / (1.0 + e);
}

void check_view(const ModelParams& params, std::size_t view) {
  if (view >= params.views.size()) {
    throw InputError("unregistered lexicon index " + std::to_string(view));
  }
}

void init_dense(Dense& layer, Eigen::Index out, Eigen::Index in, numerics::Rng rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  layer.weight.resize(out, in);
  layer.bias.resize(out);
  for (Eigen::Index j = 0; j < in; ++j)
    for (Eigen::Index i = 0; i < out; ++i) layer.weight(i, j) = rng.uniform(-bound, bound);
  for (Eigen::Index i = 0; i < out; ++i) layer.bias(i) = rng.uniform(-bound, bound);
}

void zero_dense(Dense& layer) {
  layer.weight.setZero();
  layer.bias.setZero();
}

template <class Params, class Span>
std::vector<Span> collect_tensors(Params& params) {
  std::vector<Span> out;
  for (auto& v : params.views) {
    for (auto* layer : {&v.enc_hidden, &v.enc_out, &v.dec_hidden, &v.dec_out}) {
      out.emplace_back(layer->weight.data(), static_cast<std::size_t>(layer->weight.size()));
      out.emplace_back(layer->bias.data(), static_cast<std::size_t>(layer->bias.size()));
    }
  }
  return out;
}

// Cached forward state of one observation's encoder.
struct EncoderPass {
  VectorXd hidden_pre;
  VectorXd hidden;
  VectorXd omega;
};

EncoderPass run_encoder(const ViewParams& v, const VectorXd& x) {
  EncoderPass p;
  p.hidden_pre = v.enc_hidden(x);
  p.hidden = relu(p.hidden_pre);
  p.omega = softmax(v.enc_out(p.hidden));
  return p;
}

void accumulate(Dense& grad, const VectorXd& dout, const VectorXd& input) {
  grad.weight.noalias() += dout * input.transpose();
  grad.bias += dout;
}

}  // namespace

std::string_view to_string(EmissionKind kind) {
  return kind == EmissionKind::gaussian ? "gaussian" : "bernoulli";
}

EmissionKind parse_emission_kind(std::string_view s) {
  if (s == "gaussian") return EmissionKind::gaussian;
  if (s == "bernoulli") return EmissionKind::bernoulli;
  throw InputError("unknown emission kind '" + std::string(s) + "'");
}

EmissionKind emission_for(ValueKind kind) {
  return kind == ValueKind::binary ? EmissionKind::bernoulli : EmissionKind::gaussian;
}

Eigen::VectorXd InputScaling::apply(std::span<const double> raw) const {
  if (static_cast<Eigen::Index>(raw.size()) != offset.size()) {
    throw DomainError("value vector has " + std::to_string(raw.size()) + " labels, expected " +
                      std::to_string(offset.size()));
  }
  VectorXd x(offset.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) x(j) = (raw[j] - offset(j)) / scale(j);
  return x;
}

InputScaling fit_scaling(const Lexicon& lexicon) {
  const auto& schema = lexicon.schema();
  const auto n = static_cast<Eigen::Index>(schema.size());
  InputScaling s{VectorXd::Zero(n), VectorXd::Ones(n)};
  if (schema.value_kind == ValueKind::binary) return s;
  if (schema.range && schema.range->bounded()) {
    // Per-label observed min-max; the declared range covers labels with no spread.
    VectorXd lo = VectorXd::Constant(n, std::numeric_limits<double>::infinity());
    VectorXd hi = -lo;
    for (const auto& [word, values] : lexicon.entries())
      for (Eigen::Index j = 0; j < n; ++j) lo(j) = std::min(lo(j), values[j]), hi(j) = std::max(hi(j), values[j]);
    const double span = schema.range->hi - schema.range->lo;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (hi(j) > lo(j)) {
        s.offset(j) = lo(j);
        s.scale(j) = hi(j) - lo(j);
      } else if (span > 0) {
        s.offset(j) = schema.range->lo;
        s.scale(j) = span;
      }
    }
    return s;
  }
  VectorXd peak = VectorXd::Zero(n);
  for (const auto& [word, values] : lexicon.entries())
    for (Eigen::Index j = 0; j < n; ++j) peak(j) = std::max(peak(j), std::abs(values[j]));
  for (Eigen::Index j = 0; j < n; ++j) s.scale(j) = peak(j) > 0 ? peak(j) : 1.0;
  return s;
}

std::size_t ModelParams::view_index(std::string_view lexicon) const {
  for (std::size_t d = 0; d < views.size(); ++d)
    if (views[d].schema.name == lexicon) return d;
  throw InputError("lexicon '" + std::string(lexicon) + "' is not registered in the model");
}

std::vector<std::span<double>> ModelParams::tensors() {
  return collect_tensors<ModelParams, std::span<double>>(*this);
}

std::vector<std::span<const double>> ModelParams::tensors() const {
  return collect_tensors<const ModelParams, std::span<const double>>(*this);
}

std::vector<std::string> ModelParams::tensor_names() const {
  std::vector<std::string> names;
  for (const auto& v : views) {
    for (const char* layer : {"enc_hidden", "enc_out", "dec_hidden", "dec_out"}) {
      names.push_back(v.schema.name + "." + layer + ".weight");
      names.push_back(v.schema.name + "." + layer + ".bias");
    }
  }
  return names;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors()) n += t.size();
  return n;
}

ModelParams ModelParams::zeros_like() const {
  ModelParams z = *this;
  for (auto& v : z.views)
    for (auto* layer : {&v.enc_hidden, &v.enc_out, &v.dec_hidden, &v.dec_out}) zero_dense(*layer);
  return z;
}

bool ModelParams::all_finite() const {
  for (const auto& t : tensors())
    for (double x : t)
      if (!std::isfinite(x)) return false;
  return true;
}

void TrainConfig::validate() const {
  if (latent_dim < 2) throw InputError("latent_dim must be >= 2");
  if (hidden_width < 1) throw InputError("hidden_width must be >= 1");
  if (epochs < 0) throw InputError("epochs must be >= 0");
  if (batch_size < 1) throw InputError("batch_size must be >= 1");
  if (!(learning_rate > 0) || !std::isfinite(learning_rate)) throw InputError("learning_rate must be positive");
  if (!(emission_variance > 0) || !std::isfinite(emission_variance))
    throw InputError("emission_variance must be positive");
  if (mc_samples < 1) throw InputError("mc_samples must be >= 1");
  if (!(adam_beta1 >= 0 && adam_beta1 < 1) || !(adam_beta2 >= 0 && adam_beta2 < 1) || !(adam_epsilon > 0))
    throw InputError("invalid Adam hyperparameters");
}

ModelParams initialize(std::span<const Lexicon> lexica, const TrainConfig& config) {
  config.validate();
  if (lexica.empty()) throw InputError("at least one lexicon is required");
  std::set<std::string> names;
  for (const auto& lex : lexica) {
    if (!names.insert(lex.name()).second) throw InputError("duplicate lexicon name '" + lex.name() + "'");
  }
  ModelParams p;
  p.latent_dim = config.latent_dim;
  p.hidden_width = config.hidden_width;
  p.emission_variance = config.emission_variance;
  const auto n = static_cast<Eigen::Index>(config.latent_dim);
  const auto h = static_cast<Eigen::Index>(config.hidden_width);
  const numerics::Rng init = numerics::Rng(config.seed).substream("init");
  for (std::size_t d = 0; d < lexica.size(); ++d) {
    const auto& lex = lexica[d];
    const auto l = static_cast<Eigen::Index>(lex.label_count());
    const auto rng = init.substream(d);
    ViewParams v;
    v.schema = lex.schema();
    v.emission = emission_for(lex.schema().value_kind);
    v.scaling = fit_scaling(lex);
    init_dense(v.enc_hidden, h, l, rng.substream("enc_hidden"));
    init_dense(v.enc_out, n, h, rng.substream("enc_out"));
    init_dense(v.dec_hidden, h, n, rng.substream("dec_hidden"));
    init_dense(v.dec_out, l, h, rng.substream("dec_out"));
    p.views.push_back(std::move(v));
  }
  return p;
}

std::vector<WordData> prepare_words(const ModelParams& params, std::span<const Lexicon> lexica,
                                    const Vocabulary& vocabulary) {
  if (lexica.size() != params.views.size()) {
    throw InputError("model has " + std::to_string(params.views.size()) + " lexica, got " +
                     std::to_string(lexica.size()));
  }
  for (std::size_t d = 0; d < lexica.size(); ++d) {
    if (!(lexica[d].schema() == params.views[d].schema)) {
      throw InputError("schema of lexicon '" + lexica[d].name() + "' does not match the model's '" +
                       params.views[d].schema.name + "'");
    }
  }
  if (vocabulary.lexicon_count() != lexica.size()) {
    throw InputError("vocabulary was built from a different set of lexica");
  }
  std::vector<WordData> out;
  out.reserve(vocabulary.size());
  for (std::size_t i = 0; i < vocabulary.size(); ++i) {
    WordData w{vocabulary.words()[i], {}};
    for (std::size_t d = 0; d < lexica.size(); ++d) {
      if (!vocabulary.contains(i, d)) continue;
      const auto* values = lexica[d].find(w.word);
      if (!values) throw InputError("vocabulary word '" + w.word + "' missing from '" + lexica[d].name() + "'");
      w.observations.push_back({d, params.views[d].scaling.apply(*values)});
    }
    out.push_back(std::move(w));
  }
  return out;
}

Eigen::MatrixXd LatentSample::dz_dbeta() const {
  const double s = gamma.sum();
  const auto n = z.size();
  MatrixXd j(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index k = 0; k < n; ++k) j(r, k) = ((r == k ? 1.0 : 0.0) - z(r)) * dgamma_dbeta(k) / s;
  return j;
}

Eigen::VectorXd encode(const ModelParams& params, std::size_t view, const Eigen::VectorXd& x) {
  check_view(params, view);
  const auto& v = params.views[view];
  if (x.size() != static_cast<Eigen::Index>(v.schema.size())) {
    throw DomainError("input of length " + std::to_string(x.size()) + " for lexicon '" + v.schema.name + "'");
  }
  return run_encoder(v, x).omega;
}

Eigen::VectorXd encode(const ModelParams& params, std::string_view lexicon, const Eigen::VectorXd& x) {
  return encode(params, params.view_index(lexicon), x);
}

DirichletPosterior posterior(const ModelParams& params, std::span<const Observation> observations) {
  VectorXd beta = VectorXd::Constant(params.latent_dim, TrainConfig::prior_alpha);
  for (const auto& o : observations) beta += encode(params, o.view, o.x);
  return {beta};
}

numerics::GammaDraw SampledNoise::draw(std::size_t, std::size_t, std::size_t, double shape) {
  return numerics::sample_gamma(shape, rng_);
}

FrozenNoise::FrozenNoise(numerics::Rng& rng, std::size_t words, std::size_t samples, std::size_t components)
    : samples_(samples), components_(components), levels_(words * samples * components) {
  for (auto& u : levels_) u = rng.uniform();
}

numerics::GammaDraw FrozenNoise::draw(std::size_t word, std::size_t sample, std::size_t component,
                                      double shape) {
  const auto i = (word * samples_ + sample) * components_ + component;
  if (sample >= samples_ || component >= components_ || i >= levels_.size()) {
    throw DomainError("frozen noise table too small");
  }
  const double g = numerics::gamma_quantile(shape, levels_[i]);
  return {g, numerics::gamma_implicit_derivative(shape, g)};
}

LatentSample sample_posterior(const DirichletPosterior& posterior, GammaNoise& noise, std::size_t word,
                              std::size_t sample) {
  const auto n = posterior.beta.size();
  LatentSample s{VectorXd(n), VectorXd(n), VectorXd(n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto d = noise.draw(word, sample, static_cast<std::size_t>(k), posterior.beta(k));
    s.gamma(k) = d.value;
    s.dgamma_dbeta(k) = d.dshape;
  }
  s.z = s.gamma / s.gamma.sum();
  return s;
}

LatentSample sample_posterior(const DirichletPosterior& posterior, numerics::Rng& rng) {
  SampledNoise noise(rng);
  return sample_posterior(posterior, noise);
}

EmissionParams decode(const ModelParams& params, std::size_t view, const Eigen::VectorXd& z) {
  check_view(params, view);
  const auto& v = params.views[view];
  if (z.size() != params.latent_dim) throw DomainError("latent vector has wrong length");
  VectorXd out = v.dec_out(relu(v.dec_hidden(z)));
  if (v.emission == EmissionKind::bernoulli) out = out.unaryExpr([](double l) { return sigmoid(l); });
  return {out, v.emission, params.emission_variance};
}

EmissionParams decode(const ModelParams& params, std::string_view lexicon, const Eigen::VectorXd& z) {
  return decode(params, params.view_index(lexicon), z);
}

double emission_log_likelihood(const EmissionParams& emission, const Eigen::VectorXd& x) {
  if (x.size() != emission.rho.size()) throw DomainError("emission dimension mismatch");
  double ll = 0.0;
  if (emission.kind == EmissionKind::gaussian) {
    const double var = emission.variance;
    const double norm = std::log(2.0 * std::numbers::pi * var);
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      const double r = x(j) - emission.rho(j);
      ll += -0.5 * (r * r / var + norm);
    }
    return ll;
  }
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (x(j) == 1.0) ll += std::log(emission.rho(j));
    else if (x(j) == 0.0) ll += std::log1p(-emission.rho(j));
    else throw DomainError("bernoulli target must be 0 or 1");
  }
  return ll;
}

double kl_dirichlet(const Eigen::VectorXd& beta) {
  const double n = static_cast<double>(beta.size());
  const double b = beta.sum();
  const double psi_b = numerics::digamma(b);
  double kl = numerics::log_gamma(b) - numerics::log_gamma(n);
  for (Eigen::Index k = 0; k < beta.size(); ++k) {
    kl += -numerics::log_gamma(beta(k)) + (beta(k) - 1.0) * (numerics::digamma(beta(k)) - psi_b);
  }
  return std::max(kl, 0.0);
}

Eigen::VectorXd kl_dirichlet_gradient(const Eigen::VectorXd& beta) {
  const double n = static_cast<double>(beta.size());
  const double b = beta.sum();
  const double shared = (b - n) * numerics::trigamma(b);
  VectorXd g(beta.size());
  for (Eigen::Index k = 0; k < beta.size(); ++k) g(k) = (beta(k) - 1.0) * numerics::trigamma(beta(k)) - shared;
  return g;
}

ElboTerms elbo(const ModelParams& params, std::span<const WordData> batch, GammaNoise& noise,
               ModelParams* gradient, int mc_samples) {
  if (mc_samples < 1) throw DomainError("mc_samples must be >= 1");
  const double inv_samples = 1.0 / mc_samples;
  const double var = params.emission_variance;
  const double norm = std::log(2.0 * std::numbers::pi * var);
  ElboTerms terms;
  std::vector<EncoderPass> enc;
  for (std::size_t w = 0; w < batch.size(); ++w) {
    const auto& word = batch[w];
    if (word.observations.empty()) continue;  // beta is the prior: no reconstruction, zero KL
    enc.clear();
    VectorXd beta = VectorXd::Constant(params.latent_dim, TrainConfig::prior_alpha);
    for (const auto& o : word.observations) {
      check_view(params, o.view);
      enc.push_back(run_encoder(params.views[o.view], o.x));
      beta += enc.back().omega;
    }
    VectorXd dbeta = VectorXd::Zero(params.latent_dim);
    double rec = 0.0;
    for (int s = 0; s < mc_samples; ++s) {
      const auto sample = sample_posterior({beta}, noise, w, static_cast<std::size_t>(s));
      const VectorXd& z = sample.z;
      VectorXd dz = VectorXd::Zero(params.latent_dim);
      for (const auto& o : word.observations) {
        const auto& v = params.views[o.view];
        const VectorXd hpre = v.dec_hidden(z);
        const VectorXd h = relu(hpre);
        const VectorXd out = v.dec_out(h);
        VectorXd dout(out.size());
        if (v.emission == EmissionKind::gaussian) {
          for (Eigen::Index j = 0; j < out.size(); ++j) {
            const double r = o.x(j) - out(j);
            rec += -0.5 * (r * r / var + norm);
            dout(j) = r / var;
          }
        } else {
          for (Eigen::Index j = 0; j < out.size(); ++j) {
            rec += o.x(j) * out(j) - softplus(out(j));
            dout(j) = o.x(j) - sigmoid(out(j));
          }
        }
        if (!gradient) continue;
        dout *= inv_samples;
        auto& g = gradient->views[o.view];
        accumulate(g.dec_out, dout, h);
        const VectorXd dh = (v.dec_out.weight.transpose() * dout).cwiseProduct(
            (hpre.array() > 0.0).cast<double>().matrix());
        accumulate(g.dec_hidden, dh, z);
        dz.noalias() += v.dec_hidden.weight.transpose() * dh;
      }
      if (gradient) {
        const double total = sample.gamma.sum();
        const double dz_dot_z = dz.dot(z);
        for (Eigen::Index k = 0; k < dbeta.size(); ++k) {
          dbeta(k) += (dz(k) - dz_dot_z) / total * sample.dgamma_dbeta(k);
        }
      }
    }
    rec *= inv_samples;
    const double kl = kl_dirichlet(beta);
    terms.reconstruction += rec;
    terms.kl += kl;
    terms.total += rec - kl;
    if (!gradient) continue;
    dbeta -= kl_dirichlet_gradient(beta);
    for (std::size_t i = 0; i < word.observations.size(); ++i) {
      const auto& o = word.observations[i];
      const auto& v = params.views[o.view];
      const auto& p = enc[i];
      auto& g = gradient->views[o.view];
      const VectorXd da = p.omega.cwiseProduct((dbeta.array() - p.omega.dot(dbeta)).matrix());
      accumulate(g.enc_out, da, p.hidden);
      const VectorXd dh = (v.enc_out.weight.transpose() * da).cwiseProduct(
          (p.hidden_pre.array() > 0.0).cast<double>().matrix());
      accumulate(g.enc_hidden, dh, o.x);
    }
  }
  return terms;
}

double mean_elbo(const ModelParams& params, std::span<const WordData> words, numerics::Rng& rng,
                 int mc_samples) {
  if (words.empty()) throw DomainError("mean_elbo over no words");
  SampledNoise noise(rng);
  return elbo(params, words, noise, nullptr, mc_samples).total / static_cast<double>(words.size());
}

TrainResult train(std::span<const Lexicon> lexica, const Vocabulary& vocabulary, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
  TrainResult result{initialize(lexica, config), {}};
  if (config.epochs == 0) return result;
  auto& params = result.params;
  auto words = prepare_words(params, lexica, vocabulary);
  if (words.empty()) throw InputError("vocabulary is empty");

  const numerics::Rng root(config.seed);
  auto shuffle_rng = root.substream("shuffle");
  auto noise_rng = root.substream("noise");
  SampledNoise noise(noise_rng);

  ModelParams m = params.zeros_like();
  ModelParams v = params.zeros_like();
  ModelParams grad = params.zeros_like();
  auto p_t = params.tensors();
  auto m_t = m.tensors();
  auto v_t = v.tensors();
  auto g_t = grad.tensors();
  double b1_pow = 1.0, b2_pow = 1.0;
  const auto batch = static_cast<std::size_t>(config.batch_size);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle_rng.shuffle(std::span<WordData>(words));
    double epoch_total = 0.0;
    for (std::size_t start = 0; start < words.size(); start += batch) {
      const auto count = std::min(batch, words.size() - start);
      const std::span<const WordData> slice(words.data() + start, count);
      for (auto& t : g_t) std::fill(t.begin(), t.end(), 0.0);
      const auto terms = elbo(params, slice, noise, &grad, config.mc_samples);
      if (!std::isfinite(terms.total)) {
        std::ostringstream msg;
        msg << "non-finite ELBO at epoch " << epoch << ", batch starting at word " << start << " (reconstruction "
            << terms.reconstruction << ", kl " << terms.kl << ")";
        throw TrainingError(msg.str());
      }
      epoch_total += terms.total;
      b1_pow *= config.adam_beta1;
      b2_pow *= config.adam_beta2;
      const double c1 = 1.0 - b1_pow, c2 = 1.0 - b2_pow;
      const double scale = -1.0 / static_cast<double>(count);  // descend on the negated mean ELBO
      for (std::size_t t = 0; t < p_t.size(); ++t) {
        for (std::size_t i = 0; i < p_t[t].size(); ++i) {
          const double g = scale * g_t[t][i];
          m_t[t][i] = config.adam_beta1 * m_t[t][i] + (1.0 - config.adam_beta1) * g;
          v_t[t][i] = config.adam_beta2 * v_t[t][i] + (1.0 - config.adam_beta2) * g * g;
          p_t[t][i] -= config.learning_rate * (m_t[t][i] / c1) / (std::sqrt(v_t[t][i] / c2) + config.adam_epsilon);
        }
      }
      if (!params.all_finite()) {
        throw TrainingError("non-finite parameter after update at epoch " + std::to_string(epoch));
      }
    }
    const EpochLog entry{epoch, epoch_total / static_cast<double>(words.size())};
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
  }
  return result;
}

}  // namespace emolex::vae
