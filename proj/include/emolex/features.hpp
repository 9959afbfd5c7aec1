#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "emolex/lexica.hpp"

namespace emolex::features {

// Lowercase, split on whitespace, strip leading and trailing non-alphanumeric
// bytes, drop empties. Bytes >= 0x80 count as alphanumeric so UTF-8 words
// survive intact.
std::vector<std::string> tokenize(std::string_view text);

enum class Strategy { single, concat, vae, concat_plus_vae };

std::string_view to_string(Strategy s);
// Accepts "single", "concat", "vae", "concat+vae" and "concat_plus_vae".
Strategy parse_strategy(std::string_view s);

struct FeatureSpec {
  Strategy strategy = Strategy::concat;
  std::vector<Lexicon> lexica;   // sources in feature order
  std::optional<Lexicon> joint;  // the VAE joint lexicon

  static FeatureSpec single(Lexicon lexicon);
  static FeatureSpec concat(std::vector<Lexicon> lexica);
  static FeatureSpec vae(Lexicon joint);
  static FeatureSpec concat_plus_vae(std::vector<Lexicon> lexica, Lexicon joint);

  // Throws InputError when the sources do not fit the strategy.
  void validate() const;
  std::size_t dimension() const;
  // `<lexicon>:<label>` per feature.
  std::vector<std::string> feature_names() const;
  // Short display name, e.g. "single:nrc_vad" or "concat+vae".
  std::string name() const;
};

struct FeatureVector {
  Eigen::VectorXd values;
  std::size_t token_count = 0;
};

// Mean over all tokens of each token's concatenated lexicon values. Tokens
// missing from a lexicon contribute zeros and still count in the denominator.
class Featurizer {
 public:
  explicit Featurizer(FeatureSpec spec);

  const FeatureSpec& spec() const { return spec_; }
  std::size_t dimension() const { return dimension_; }

  FeatureVector featurize(std::string_view text) const;
  FeatureVector featurize_tokens(const std::vector<std::string>& tokens) const;
  // One row per text.
  Eigen::MatrixXd matrix(const std::vector<std::string>& texts) const;

 private:
  FeatureSpec spec_;
  std::size_t dimension_;
  std::unordered_map<std::string, Eigen::VectorXd> table_;
};

}  // namespace emolex::features
