#include "emolex/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "emolex/error.hpp"
#include "emolex/numerics/random.hpp"

namespace emolex::synth {

void SynthConfig::validate() const {
  if (words < 2) throw InputError("synth: need at least 2 words");
  if (planted_dims < 2) throw InputError("synth: need at least 2 planted dims");
  if (lexica == 0 || lexica > Vocabulary::max_lexica) throw InputError("synth: lexicon count out of range");
  if (binary_lexica > lexica) throw InputError("synth: more binary lexica than lexica");
  if (!identity_maps) {
    if (label_counts.empty()) throw InputError("synth: empty label count list");
    for (auto l : label_counts)
      if (l == 0) throw InputError("synth: label counts must be positive");
  }
  if (!(noise_sigma >= 0)) throw InputError("synth: noise must be non-negative");
  if (!(coverage > 0 && coverage <= 1)) throw InputError("synth: coverage must lie in (0, 1]");
  if (instances == 0 || bag_size == 0) throw InputError("synth: empty dataset");
}

namespace {

std::string word_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "syn%05zu", i);
  return buf;
}

std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + 1));
  return out;
}

}  // namespace

SynthData generate(const SynthConfig& config) {
  config.validate();
  const numerics::Rng root(config.seed);
  const std::size_t p = config.planted_dims;

  std::vector<std::string> words;
  std::vector<std::vector<double>> z(config.words, std::vector<double>(p));
  auto rng = root.substream("planted");
  Lexicon::Entries planted_entries;
  for (std::size_t i = 0; i < config.words; ++i) {
    words.push_back(word_name(i));
    // Uniform on the simplex, the model's own Dir(1) prior.
    double total = 0.0;
    for (auto& v : z[i]) total += (v = -std::log(rng.uniform()));
    for (auto& v : z[i]) v /= total;
    planted_entries[words.back()] = z[i];
  }
  SynthData out{Lexicon(LexiconSchema{"planted", numbered("p", p), ValueKind::continuous, ValueRange{0.0, 1.0}},
                        planted_entries),
                {},
                {}};

  for (std::size_t d = 0; d < config.lexica; ++d) {
    auto lrng = root.substream("lexicon").substream(d);
    const std::size_t labels = config.identity_maps ? p : config.label_counts[d % config.label_counts.size()];
    std::vector<std::vector<double>> a(labels, std::vector<double>(p, 0.0));
    std::vector<double> offset(labels, 0.0);
    for (std::size_t l = 0; l < labels; ++l) {
      if (config.identity_maps) {
        a[l][l] = 1.0;
        continue;
      }
      for (auto& v : a[l]) v = lrng.normal();
      offset[l] = lrng.normal();
    }

    std::vector<std::size_t> members;
    auto crng = lrng.substream("coverage");
    for (std::size_t i = 0; i < config.words; ++i)
      if (config.identity_maps || crng.uniform() < config.coverage) members.push_back(i);
    if (members.empty()) members.push_back(0);

    auto nrng = lrng.substream("noise");
    std::vector<std::vector<double>> values;
    for (auto i : members) {
      std::vector<double> x(labels);
      for (std::size_t l = 0; l < labels; ++l) {
        double s = offset[l];
        for (std::size_t k = 0; k < p; ++k) s += a[l][k] * z[i][k];
        x[l] = s + (config.noise_sigma > 0 ? config.noise_sigma * nrng.normal() : 0.0);
      }
      values.push_back(std::move(x));
    }

    const bool binary = d < config.binary_lexica;
    std::optional<ValueRange> range;
    if (binary) {
      for (std::size_t l = 0; l < labels; ++l) {
        std::vector<double> column;
        for (const auto& x : values) column.push_back(x[l]);
        auto mid = column.begin() + static_cast<std::ptrdiff_t>(column.size() / 2);
        std::nth_element(column.begin(), mid, column.end());
        const double median = *mid;
        for (auto& x : values) x[l] = x[l] > median ? 1.0 : 0.0;
      }
    } else {
      double lo = values[0][0], hi = values[0][0];
      for (const auto& x : values)
        for (double v : x) lo = std::min(lo, v), hi = std::max(hi, v);
      range = ValueRange{lo, hi};
    }

    Lexicon::Entries entries;
    for (std::size_t m = 0; m < members.size(); ++m) entries[words[members[m]]] = std::move(values[m]);
    const std::string name = "lex" + std::to_string(d + 1);
    out.lexica.emplace_back(LexiconSchema{name, numbered(name + "_", labels),
                                          binary ? ValueKind::binary : ValueKind::continuous, range},
                            std::move(entries));
  }

  auto& ds = out.dataset;
  ds.name = "synthetic";
  ds.task = downstream::TaskKind::single_label;
  ds.label_names = numbered("p", p);
  auto drng = root.substream("dataset");
  for (std::size_t n = 0; n < config.instances; ++n) {
    std::vector<double> mean(p, 0.0);
    std::string text;
    for (std::size_t t = 0; t < config.bag_size; ++t) {
      const auto i = static_cast<std::size_t>(drng.below(config.words));
      if (t) text += ' ';
      text += words[i];
      for (std::size_t k = 0; k < p; ++k) mean[k] += z[i][k];
    }
    const auto cls = static_cast<std::size_t>(std::max_element(mean.begin(), mean.end()) - mean.begin());
    ds.instances.push_back({std::move(text), cls});
  }
  return out;
}

}  // namespace emolex::synth
