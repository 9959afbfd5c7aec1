#include <doctest.h>

#include "emolex/error.hpp"
#include "emolex/features.hpp"
#include "emolex/numerics/random.hpp"

using namespace emolex;
using features::FeatureSpec;
using features::Featurizer;

namespace {

Lexicon lex_a() {
  return Lexicon(LexiconSchema{"a", {"x", "y"}, ValueKind::continuous, std::nullopt},
                 {{"love", {1.0, 0.0}}, {"snakes", {0.0, 1.0}}, {"calm", {0.25, 0.75}}});
}

Lexicon lex_b() {
  return Lexicon(LexiconSchema{"b", {"joy", "fear", "anger"}, ValueKind::binary, std::nullopt},
                 {{"love", {1, 0, 0}}, {"snakes", {0, 1, 0}}, {"rage", {0, 0, 1}}});
}

Lexicon joint() {
  return Lexicon(LexiconSchema{"vae", {"dim1", "dim2"}, ValueKind::continuous, std::nullopt},
                 {{"love", {2.5, 1.5}}, {"calm", {1.2, 2.8}}, {"snakes", {1.0, 3.0}}});
}

// Per-token summation written directly from the lexica.
Eigen::VectorXd brute_force(const std::vector<const Lexicon*>& sources, const std::vector<std::string>& tokens) {
  std::size_t dim = 0;
  for (const auto* l : sources) dim += l->label_count();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  for (const auto& t : tokens) {
    std::size_t offset = 0;
    for (const auto* l : sources) {
      if (const auto* v = l->find(t))
        for (std::size_t j = 0; j < v->size(); ++j) sum(static_cast<Eigen::Index>(offset + j)) += (*v)[j];
      offset += l->label_count();
    }
  }
  if (!tokens.empty()) sum /= static_cast<double>(tokens.size());
  return sum;
}

}  // namespace

TEST_CASE("tokenize") {
  using V = std::vector<std::string>;
  CHECK(features::tokenize("I LOVE snakes!") == V{"i", "love", "snakes"});
  CHECK(features::tokenize("").empty());
  CHECK(features::tokenize("co-operate") == V{"co-operate"});
  CHECK(features::tokenize("  ...  \"well,\"\tdone!!\n") == V{"well", "done"});
  CHECK(features::tokenize("¡Olé! café") == V{"¡olé", "café"});
}

TEST_CASE("strategies and dimensions") {
  CHECK(features::parse_strategy("concat+vae") == features::Strategy::concat_plus_vae);
  CHECK(features::parse_strategy("concat_plus_vae") == features::Strategy::concat_plus_vae);
  CHECK_THROWS_AS(features::parse_strategy("ngrams"), InputError);
  CHECK(FeatureSpec::single(lex_a()).dimension() == 2);
  CHECK(FeatureSpec::concat({lex_a(), lex_b()}).dimension() == 5);
  CHECK(FeatureSpec::vae(joint()).dimension() == 2);
  const auto both = FeatureSpec::concat_plus_vae({lex_a(), lex_b()}, joint());
  CHECK(both.dimension() == 7);
  CHECK(both.feature_names() == std::vector<std::string>{"a:x", "a:y", "b:joy", "b:fear", "b:anger", "vae:dim1", "vae:dim2"});
  CHECK(FeatureSpec::single(lex_b()).name() == "single:b");
  CHECK(both.name() == "concat+vae");
  CHECK_THROWS_AS(Featurizer(FeatureSpec{features::Strategy::vae, {lex_a()}, std::nullopt}), InputError);
}

TEST_CASE("featurize examples") {
  const Featurizer f(FeatureSpec::single(lex_a()));
  const auto v = f.featurize("love snakes");
  CHECK(v.values(0) == 0.5);
  CHECK(v.values(1) == 0.5);
  CHECK(v.token_count == 2);
  CHECK(f.featurize("nothing known here").values.isZero(0.0));
  CHECK(f.featurize("").values.isZero(0.0));
  const auto one = f.featurize("the calm of a lake");
  CHECK(one.values(0) == 0.25 / 5);
  CHECK(one.values(1) == 0.75 / 5);
}

TEST_CASE("featurize matches per-token summation") {
  const auto a = lex_a(), b = lex_b(), j = joint();
  const Featurizer f(FeatureSpec::concat_plus_vae({a, b}, j));
  const std::vector<std::string> vocab{"love", "snakes", "calm", "rage", "the", "zebra", "x"};
  numerics::Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::string> tokens;
    const auto k = rng.below(12);
    for (std::size_t i = 0; i < k; ++i) tokens.push_back(vocab[rng.below(vocab.size())]);
    const auto got = f.featurize_tokens(tokens).values;
    const auto want = brute_force({&a, &b, &j}, tokens);
    CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("featurize invariants") {
  const auto a = lex_a(), b = lex_b(), j = joint();
  const Featurizer concat(FeatureSpec::concat({a, b}));
  const Featurizer vae(FeatureSpec::vae(j));
  const Featurizer both(FeatureSpec::concat_plus_vae({a, b}, j));
  const std::vector<std::string> vocab{"love", "snakes", "calm", "rage", "sea", "zebra"};
  numerics::Rng rng(4);
  for (int t = 0; t < 300; ++t) {
    std::vector<std::string> tokens;
    const auto k = 1 + rng.below(10);
    for (std::size_t i = 0; i < k; ++i) tokens.push_back(vocab[rng.below(vocab.size())]);
    const auto base = both.featurize_tokens(tokens).values;

    auto shuffled = tokens;
    rng.shuffle(std::span(shuffled));
    CHECK(both.featurize_tokens(shuffled).values == base);

    auto doubled = tokens;
    doubled.insert(doubled.end(), tokens.begin(), tokens.end());
    CHECK(both.featurize_tokens(doubled).values == base);

    Eigen::VectorXd joined(base.size());
    joined << concat.featurize_tokens(tokens).values, vae.featurize_tokens(tokens).values;
    CHECK(joined == base);
  }
  const auto m = both.matrix({"love", "rage rage", ""});
  CHECK(m.rows() == 3);
  CHECK(m.cols() == 7);
  CHECK(m.row(1).transpose() == both.featurize("rage rage").values);
}
