#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "emolex/error.hpp"
#include "emolex/features.hpp"
#include "emolex/synth.hpp"

using namespace emolex;

TEST_CASE("default generator shape") {
  const auto data = synth::generate({});
  CHECK(data.planted.size() == 2000);
  CHECK(data.planted.label_count() == 3);
  REQUIRE(data.lexica.size() == 3);
  CHECK(data.lexica[0].schema().value_kind == ValueKind::binary);
  CHECK(data.lexica[1].schema().value_kind == ValueKind::continuous);
  CHECK(data.lexica[2].schema().value_kind == ValueKind::continuous);
  CHECK(data.lexica[0].label_count() == 4);
  CHECK(data.lexica[2].label_count() == 2);
  CHECK(data.dataset.instances.size() == 2000);
  CHECK(data.dataset.label_names == std::vector<std::string>{"p1", "p2", "p3"});
  CHECK_NOTHROW(data.dataset.validate());
  for (const auto& lex : data.lexica) {
    CHECK(lex.size() > 1000);
    CHECK(lex.size() < 1400);
    for (const auto& [word, values] : lex.entries())
      for (double v : values) CHECK(lex.schema().admits(v));
  }
}

TEST_CASE("planted rows lie on the simplex") {
  const auto data = synth::generate({});
  for (const auto& [word, z] : data.planted.entries()) {
    double total = 0.0;
    for (double v : z) {
      CHECK(v > 0.0);
      total += v;
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("binary lexica hold only 0 and 1, split near the median") {
  synth::SynthConfig c;
  c.binary_lexica = 2;
  const auto data = synth::generate(c);
  for (std::size_t d = 0; d < 2; ++d) {
    const auto& lex = data.lexica[d];
    std::vector<std::size_t> ones(lex.label_count(), 0);
    for (const auto& [word, values] : lex.entries())
      for (std::size_t l = 0; l < values.size(); ++l) {
        CHECK((values[l] == 0.0 || values[l] == 1.0));
        ones[l] += values[l] == 1.0;
      }
    for (auto n : ones) CHECK(std::abs(static_cast<double>(n) - lex.size() / 2.0) <= 1.0);
  }
}

TEST_CASE("identity maps without noise reproduce the planted table") {
  synth::SynthConfig c;
  c.identity_maps = true;
  c.noise_sigma = 0.0;
  c.binary_lexica = 0;
  c.words = 300;
  const auto data = synth::generate(c);
  for (const auto& lex : data.lexica) CHECK(lex.entries() == data.planted.entries());
}

TEST_CASE("dataset class is the argmax of the bag's mean planted values") {
  synth::SynthConfig c;
  c.words = 200;
  c.instances = 300;
  const auto data = synth::generate(c);
  std::vector<std::size_t> counts(3, 0);
  for (const auto& inst : data.dataset.instances) {
    const auto tokens = features::tokenize(inst.text);
    CHECK(tokens.size() == c.bag_size);
    std::vector<double> mean(3, 0.0);
    for (const auto& t : tokens) {
      const auto* z = data.planted.find(t);
      REQUIRE(z);
      for (std::size_t k = 0; k < 3; ++k) mean[k] += (*z)[k];
    }
    const auto cls = static_cast<std::size_t>(std::max_element(mean.begin(), mean.end()) - mean.begin());
    CHECK(std::get<std::size_t>(inst.target) == cls);
    ++counts[cls];
  }
  for (auto n : counts) CHECK(n > 50);
}

TEST_CASE("generator is a pure function of its seed") {
  synth::SynthConfig c;
  c.words = 100;
  c.instances = 20;
  const auto a = synth::generate(c), b = synth::generate(c);
  CHECK(a.planted == b.planted);
  for (std::size_t d = 0; d < 3; ++d) CHECK(a.lexica[d] == b.lexica[d]);
  for (std::size_t i = 0; i < 20; ++i) CHECK(a.dataset.instances[i].text == b.dataset.instances[i].text);
  c.seed = 1;
  CHECK(!(synth::generate(c).planted == a.planted));
}

TEST_CASE("generator rejects bad configurations") {
  synth::SynthConfig c;
  c.coverage = 0.0;
  CHECK_THROWS_AS(synth::generate(c), InputError);
  c = {};
  c.binary_lexica = 4;
  CHECK_THROWS_AS(synth::generate(c), InputError);
  c = {};
  c.noise_sigma = -1;
  CHECK_THROWS_AS(synth::generate(c), InputError);
}
