#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace emolex {

enum class ValueKind { binary, continuous };

std::string_view to_string(ValueKind kind);
ValueKind parse_value_kind(std::string_view s);

// Either bound may be infinite ("unbounded above/below").
struct ValueRange {
  double lo;
  double hi;

  bool bounded() const;
  friend bool operator==(const ValueRange&, const ValueRange&) = default;
};

struct LexiconSchema {
  std::string name;
  std::vector<std::string> labels;
  ValueKind value_kind = ValueKind::continuous;
  std::optional<ValueRange> range;

  std::size_t size() const { return labels.size(); }
  // Throws InputError when the schema itself is ill-formed.
  void validate() const;
  bool admits(double value) const;

  friend bool operator==(const LexiconSchema&, const LexiconSchema&) = default;
};

// Lowercase + surrounding whitespace stripped. Idempotent.
std::string normalize_word(std::string_view word);

class Lexicon {
 public:
  using Entries = std::map<std::string, std::vector<double>>;

  explicit Lexicon(LexiconSchema schema, Entries entries = {}, std::string provenance = {});

  const LexiconSchema& schema() const { return schema_; }
  const std::string& name() const { return schema_.name; }
  const Entries& entries() const { return entries_; }
  const std::string& provenance() const { return provenance_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t label_count() const { return schema_.size(); }

  // nullptr when the word is absent. `word` must already be normalized.
  const std::vector<double>* find(const std::string& word) const;

  friend bool operator==(const Lexicon& a, const Lexicon& b) {
    return a.schema_ == b.schema_ && a.entries_ == b.entries_;
  }

 private:
  LexiconSchema schema_;
  Entries entries_;
  std::string provenance_;
};

struct Imputation {
  std::string word;
  std::string label;
};

struct LoadReport {
  std::vector<Imputation> imputed;

  // One `IMPUTED <word> <label>` line per imputed cell.
  void write(std::ostream& out) const;
};

struct ParsedLexicon {
  Lexicon lexicon;
  LoadReport report;
};

LexiconSchema parse_schema(const std::filesystem::path& file);
LexiconSchema parse_schema(std::istream& in, const std::string& source);
void write_schema(std::ostream& out, const LexiconSchema& schema);

// Canonical TSV: optional leading `#` comment lines, a `word<TAB>label...`
// header in schema order, then one row per word. `-` or an empty cell marks a
// missing value, imputed as 0 and recorded in the report.
ParsedLexicon parse_lexicon(const std::filesystem::path& file, const LexiconSchema& schema);
ParsedLexicon parse_lexicon(std::istream& in, const LexiconSchema& schema, const std::string& source);
void write_lexicon(std::ostream& out, const Lexicon& lexicon,
                   const std::vector<std::string>& header_comments = {});

// Sidecar schema path for a lexicon file: `foo.tsv` -> `foo.schema`.
std::filesystem::path default_schema_path(const std::filesystem::path& lexicon_file);

class Vocabulary {
 public:
  static constexpr std::size_t max_lexica = 64;

  Vocabulary() = default;
  Vocabulary(std::vector<std::string> words, std::vector<std::uint64_t> membership,
             std::size_t lexicon_count);

  const std::vector<std::string>& words() const { return words_; }
  std::size_t size() const { return words_.size(); }
  std::size_t lexicon_count() const { return lexicon_count_; }
  std::uint64_t membership(std::size_t i) const { return membership_[i]; }
  bool contains(std::size_t word_index, std::size_t lexicon_index) const {
    return (membership_[word_index] >> lexicon_index) & 1U;
  }
  std::size_t member_count(std::size_t word_index) const;
  std::optional<std::size_t> index_of(const std::string& word) const;

 private:
  std::vector<std::string> words_;
  std::vector<std::uint64_t> membership_;
  std::size_t lexicon_count_ = 0;
};

Vocabulary build_vocabulary(std::span<const Lexicon> lexica);

}  // namespace emolex
