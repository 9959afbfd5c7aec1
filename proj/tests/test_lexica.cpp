#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "emolex/error.hpp"
#include "emolex/lexica.hpp"
#include "emolex/numerics/random.hpp"
#include "emolex/text.hpp"

using namespace emolex;

namespace {

LexiconSchema vad01() {
  return {"nrc_vad", {"valence", "arousal", "dominance"}, ValueKind::continuous, ValueRange{0.0, 1.0}};
}

LexiconSchema intensity() {
  return {"nrc_affect_intensity", {"anger", "fear", "joy", "sadness"}, ValueKind::continuous, ValueRange{0.0, 1.0}};
}

ParsedLexicon parse(const std::string& body, const LexiconSchema& schema) {
  std::istringstream in(body);
  return parse_lexicon(in, schema, "test.tsv");
}

std::size_t parse_error_line(const std::string& body, const LexiconSchema& schema) {
  try {
    parse(body, schema);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("parse_lexicon reads a VAD row") {
  const auto parsed = parse("word\tvalence\tarousal\tdominance\nalien\t0.41\t0.615\t0.491\n", vad01());
  const auto* v = parsed.lexicon.find("alien");
  REQUIRE(v);
  CHECK(*v == std::vector<double>{0.41, 0.615, 0.491});
  CHECK(parsed.report.imputed.empty());
}

TEST_CASE("parse_lexicon imputes missing cells as zero and reports them") {
  const auto parsed = parse("word\tanger\tfear\tjoy\tsadness\nAlien\t-\t0.422\t\t-\n", intensity());
  const auto* v = parsed.lexicon.find("alien");
  REQUIRE(v);
  CHECK(*v == std::vector<double>{0.0, 0.422, 0.0, 0.0});
  REQUIRE(parsed.report.imputed.size() == 3);
  std::ostringstream out;
  parsed.report.write(out);
  CHECK(out.str() == "IMPUTED alien anger\nIMPUTED alien joy\nIMPUTED alien sadness\n");
}

TEST_CASE("parse_lexicon with only a header is empty") {
  const auto parsed = parse("# comment\nword\tvalence\tarousal\tdominance\n", vad01());
  CHECK(parsed.lexicon.size() == 0);
}

TEST_CASE("parse_lexicon errors name the line") {
  const std::string header = "word\tvalence\tarousal\tdominance\n";
  CHECK(parse_error_line(header + "a\t0.1\t0.2\t0.3\nb\t0.1\t0.2\n", vad01()) == 3);
  CHECK(parse_error_line(header + "a\t0.1\t0.2\t1.3\n", vad01()) == 2);
  CHECK(parse_error_line(header + "a\t0.1\t0.2\t0.3\nA\t0.1\t0.2\t0.3\n", vad01()) == 3);
  CHECK(parse_error_line(header + "a\t0.1\tx\t0.3\n", vad01()) == 2);
  CHECK(parse_error_line("word\tvalence\tdominance\tarousal\n", vad01()) == 1);
  CHECK_THROWS_AS(parse("", vad01()), ParseError);

  const LexiconSchema binary{"wna", {"anger", "joy"}, ValueKind::binary, std::nullopt};
  CHECK(parse_error_line("word\tanger\tjoy\nmad\t1\t0.5\n", binary) == 2);
  CHECK(parse("word\tanger\tjoy\nmad\t1\t0\n", binary).lexicon.size() == 1);
}

TEST_CASE("schema descriptors") {
  std::istringstream in("# hashtag lexicon\nname=nrc_hashtag\nlabels=anger, joy\nvalue_kind=continuous\nrange=0,inf\n");
  const auto schema = parse_schema(in, "hashtag.schema");
  CHECK(schema.name == "nrc_hashtag");
  CHECK(schema.labels == std::vector<std::string>{"anger", "joy"});
  REQUIRE(schema.range);
  CHECK(!schema.range->bounded());
  CHECK(schema.admits(1e9));
  CHECK(!schema.admits(-0.1));

  std::ostringstream out;
  write_schema(out, schema);
  std::istringstream back(out.str());
  CHECK(parse_schema(back, "roundtrip") == schema);

  std::istringstream dup("name=x\nlabels=a,a\nvalue_kind=binary\n");
  CHECK_THROWS_AS(parse_schema(dup, "dup"), InputError);
  std::istringstream missing("name=x\nvalue_kind=binary\n");
  CHECK_THROWS_AS(parse_schema(missing, "missing"), InputError);
  std::istringstream bad_kind("name=x\nlabels=a\nvalue_kind=ordinal\n");
  CHECK_THROWS_AS(parse_schema(bad_kind, "bad"), ParseError);
  CHECK_THROWS_AS(parse_schema(std::filesystem::path("/nonexistent/x.schema")), InputError);
}

TEST_CASE("word normalization is idempotent") {
  for (const char* w : {"  Snake ", "ALIEN", "co-Operate", "já"}) {
    const auto once = normalize_word(w);
    CHECK(normalize_word(once) == once);
  }
  CHECK(normalize_word(" EXCITED\t") == "excited");
}

TEST_CASE("serialize then parse reproduces random lexica") {
  numerics::Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const bool binary = trial % 3 == 0;
    LexiconSchema schema{"lex" + std::to_string(trial), {}, binary ? ValueKind::binary : ValueKind::continuous,
                         std::nullopt};
    const auto labels = 1 + rng.below(6);
    for (std::size_t j = 0; j < labels; ++j) schema.labels.push_back("l" + std::to_string(j));
    if (!binary && trial % 2 == 0) schema.range = ValueRange{1.0, 9.0};
    Lexicon::Entries entries;
    const auto words = rng.below(40);
    for (std::size_t i = 0; i < words; ++i) {
      std::vector<double> values(labels);
      for (auto& v : values) {
        if (binary) v = static_cast<double>(rng.below(2));
        else if (schema.range) v = rng.uniform(1.0, 9.0);
        else v = rng.normal() * 1e3;
      }
      entries["w" + std::to_string(rng.below(1000))] = values;
    }
    const Lexicon original(schema, entries);
    std::ostringstream out;
    write_lexicon(out, original, {"seed=21"});
    const auto parsed = parse(out.str(), schema);
    CHECK(parsed.lexicon == original);
    for (const auto& [word, values] : parsed.lexicon.entries()) CHECK(values.size() == schema.size());
  }
}

TEST_CASE("parse_lexicon from disk") {
  const auto dir = std::filesystem::temp_directory_path() / "emolex_test_lexica";
  std::filesystem::create_directories(dir);
  const auto file = dir / "vad.tsv";
  {
    std::ofstream out(file);
    out << "word\tvalence\tarousal\tdominance\nalien\t0.41\t0.615\t0.491\n";
  }
  {
    std::ofstream out(default_schema_path(file));
    write_schema(out, vad01());
  }
  CHECK(default_schema_path(file) == dir / "vad.schema");
  const auto schema = parse_schema(default_schema_path(file));
  const auto parsed = parse_lexicon(file, schema);
  CHECK(parsed.lexicon.size() == 1);
  CHECK(parsed.lexicon.provenance() == file.string());
}

TEST_CASE("build_vocabulary") {
  const LexiconSchema s{"a", {"x"}, ValueKind::continuous, std::nullopt};
  const LexiconSchema t{"b", {"y"}, ValueKind::continuous, std::nullopt};
  const std::vector<Lexicon> lexica{Lexicon(s, {{"a", {1.0}}, {"b", {2.0}}}),
                                    Lexicon(t, {{"b", {3.0}}, {"c", {4.0}}})};
  const auto vocab = build_vocabulary(lexica);
  CHECK(vocab.words() == std::vector<std::string>{"a", "b", "c"});
  const auto b = vocab.index_of("b");
  REQUIRE(b);
  CHECK(vocab.member_count(*b) == 2);
  CHECK(vocab.contains(0, 0));
  CHECK(!vocab.contains(0, 1));
  CHECK(!vocab.index_of("z"));

  const std::vector<Lexicon> single{Lexicon(s, {{"v", {0.0}}, {"w", {0.0}}, {"x", {1.0}}, {"y", {0.0}}, {"z", {0.0}}})};
  CHECK(build_vocabulary(single).size() == 5);
  CHECK_THROWS_AS(build_vocabulary(std::span<const Lexicon>{}), InputError);
}

TEST_CASE("vocabulary size bounds on random lexica") {
  numerics::Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Lexicon> lexica;
    const auto count = 1 + rng.below(5);
    std::size_t total = 0, largest = 0;
    for (std::size_t d = 0; d < count; ++d) {
      Lexicon::Entries e;
      const auto n = rng.below(50);
      for (std::size_t i = 0; i < n; ++i) e["w" + std::to_string(rng.below(80))] = {1.0};
      lexica.emplace_back(LexiconSchema{"l" + std::to_string(d), {"x"}, ValueKind::binary, std::nullopt}, e);
      total += lexica.back().size();
      largest = std::max(largest, lexica.back().size());
    }
    const auto vocab = build_vocabulary(lexica);
    CHECK(vocab.size() <= total);
    CHECK(vocab.size() >= largest);
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      for (std::size_t d = 0; d < count; ++d) {
        CHECK(vocab.contains(i, d) == (lexica[d].find(vocab.words()[i]) != nullptr));
      }
    }
  }
}
