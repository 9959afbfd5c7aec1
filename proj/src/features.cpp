#include "emolex/features.hpp"

#include <cctype>
#include <map>

#include "emolex/error.hpp"

namespace emolex::features {

namespace {

bool is_word_byte(unsigned char c) { return c >= 0x80 || std::isalnum(c); }

bool is_space(unsigned char c) { return c < 0x80 && std::isspace(c); }

// Sources in feature order, the joint lexicon last.
std::vector<const Lexicon*> sources_of(const FeatureSpec& spec) {
  std::vector<const Lexicon*> out;
  if (spec.strategy != Strategy::vae)
    for (const auto& l : spec.lexica) out.push_back(&l);
  if (spec.joint && (spec.strategy == Strategy::vae || spec.strategy == Strategy::concat_plus_vae))
    out.push_back(&*spec.joint);
  return out;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(static_cast<unsigned char>(text[i]))) ++i;
    const auto start = i;
    while (i < text.size() && !is_space(static_cast<unsigned char>(text[i]))) ++i;
    auto lo = start, hi = i;
    while (lo < hi && !is_word_byte(static_cast<unsigned char>(text[lo]))) ++lo;
    while (hi > lo && !is_word_byte(static_cast<unsigned char>(text[hi - 1]))) --hi;
    if (lo == hi) continue;
    std::string token(text.substr(lo, hi - lo));
    for (auto& c : token) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    tokens.push_back(std::move(token));
  }
  return tokens;
}

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::single: return "single";
    case Strategy::concat: return "concat";
    case Strategy::vae: return "vae";
    case Strategy::concat_plus_vae: return "concat+vae";
  }
  return "?";
}

Strategy parse_strategy(std::string_view s) {
  if (s == "single") return Strategy::single;
  if (s == "concat") return Strategy::concat;
  if (s == "vae") return Strategy::vae;
  if (s == "concat+vae" || s == "concat_plus_vae") return Strategy::concat_plus_vae;
  throw InputError("unknown strategy '" + std::string(s) + "' (expected single, concat, vae or concat+vae)");
}

FeatureSpec FeatureSpec::single(Lexicon lexicon) { return {Strategy::single, {std::move(lexicon)}, std::nullopt}; }

FeatureSpec FeatureSpec::concat(std::vector<Lexicon> lexica) { return {Strategy::concat, std::move(lexica), std::nullopt}; }

FeatureSpec FeatureSpec::vae(Lexicon joint) { return {Strategy::vae, {}, std::move(joint)}; }

FeatureSpec FeatureSpec::concat_plus_vae(std::vector<Lexicon> lexica, Lexicon joint) {
  return {Strategy::concat_plus_vae, std::move(lexica), std::move(joint)};
}

void FeatureSpec::validate() const {
  switch (strategy) {
    case Strategy::single:
      if (lexica.size() != 1) throw InputError("single strategy needs exactly one lexicon");
      break;
    case Strategy::concat:
      if (lexica.empty()) throw InputError("concat strategy needs at least one lexicon");
      break;
    case Strategy::vae:
      if (!joint) throw InputError("vae strategy needs a joint lexicon");
      break;
    case Strategy::concat_plus_vae:
      if (lexica.empty() || !joint) throw InputError("concat+vae strategy needs lexica and a joint lexicon");
      break;
  }
}

std::size_t FeatureSpec::dimension() const {
  std::size_t n = 0;
  for (const auto* l : sources_of(*this)) n += l->label_count();
  return n;
}

std::vector<std::string> FeatureSpec::feature_names() const {
  std::vector<std::string> names;
  for (const auto* l : sources_of(*this))
    for (const auto& label : l->schema().labels) names.push_back(l->name() + ":" + label);
  return names;
}

std::string FeatureSpec::name() const {
  if (strategy == Strategy::single && lexica.size() == 1) return "single:" + lexica.front().name();
  return std::string(to_string(strategy));
}

Featurizer::Featurizer(FeatureSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  dimension_ = spec_.dimension();
  std::size_t offset = 0;
  for (const auto* lex : sources_of(spec_)) {
    const auto width = lex->label_count();
    for (const auto& [word, values] : lex->entries()) {
      auto [it, fresh] = table_.try_emplace(word);
      if (fresh) it->second = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension_));
      for (std::size_t j = 0; j < width; ++j) it->second(static_cast<Eigen::Index>(offset + j)) = values[j];
    }
    offset += width;
  }
}

FeatureVector Featurizer::featurize_tokens(const std::vector<std::string>& tokens) const {
  FeatureVector f{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension_)), tokens.size()};
  if (tokens.empty()) return f;
  // Summing count * value over distinct words in sorted order makes the
  // result exactly independent of token order and of uniform repetition.
  std::map<std::string_view, std::size_t> counts;
  for (const auto& t : tokens) ++counts[t];
  for (const auto& [word, count] : counts) {
    const auto it = table_.find(std::string(word));
    if (it != table_.end()) f.values += static_cast<double>(count) * it->second;
  }
  f.values /= static_cast<double>(tokens.size());
  return f;
}

FeatureVector Featurizer::featurize(std::string_view text) const { return featurize_tokens(tokenize(text)); }

Eigen::MatrixXd Featurizer::matrix(const std::vector<std::string>& texts) const {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(texts.size()), static_cast<Eigen::Index>(dimension_));
  for (std::size_t i = 0; i < texts.size(); ++i) x.row(static_cast<Eigen::Index>(i)) = featurize(texts[i]).values.transpose();
  return x;
}

}  // namespace emolex::features
