#pragma once

#include <cstdint>
#include <vector>

#include "emolex/downstream.hpp"
#include "emolex/lexica.hpp"

namespace emolex::synth {

// Planted-latent generator. Each lexicon observes an affine image of the
// planted table plus Gaussian noise over a random subset of the words.
struct SynthConfig {
  std::size_t words = 2000;
  std::size_t planted_dims = 3;
  std::size_t lexica = 3;
  // The first `binary_lexica` lexica are thresholded at each label's median.
  std::size_t binary_lexica = 1;
  // Label counts cycle through this list; ignored with identity maps.
  std::vector<std::size_t> label_counts{4, 3, 2};
  double noise_sigma = 0.1;
  // Fraction of words each lexicon covers.
  double coverage = 0.6;
  // Maps become the identity (labels = planted dims) and coverage becomes 1.
  bool identity_maps = false;
  std::size_t instances = 2000;
  std::size_t bag_size = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthData {
  Lexicon planted;  // labels p1..pP, rows uniform on the probability simplex
  std::vector<Lexicon> lexica;
  // Single-label, one class per planted dim: argmax of the bag's mean planted values.
  downstream::AnnotatedDataset dataset;
};

SynthData generate(const SynthConfig& config);

}  // namespace emolex::synth
