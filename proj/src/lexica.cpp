#include "emolex/lexica.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <set>

#include "emolex/error.hpp"
#include "emolex/text.hpp"

namespace emolex {

std::string_view to_string(ValueKind kind) {
  return kind == ValueKind::binary ? "binary" : "continuous";
}

ValueKind parse_value_kind(std::string_view s) {
  if (s == "binary") return ValueKind::binary;
  if (s == "continuous") return ValueKind::continuous;
  throw InputError("unknown value_kind '" + std::string(s) + "' (expected binary or continuous)");
}

bool ValueRange::bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

void LexiconSchema::validate() const {
  if (name.empty() || name.find_first_of(" \t\n,=") != std::string::npos) {
    throw InputError("schema name '" + name + "' is not a valid identifier");
  }
  if (labels.empty()) throw InputError("schema '" + name + "' declares no labels");
  std::set<std::string> seen;
  for (const auto& label : labels) {
    if (label.empty() || label.find_first_of("\t\n,") != std::string::npos) {
      throw InputError("schema '" + name + "' has an invalid label '" + label + "'");
    }
    if (!seen.insert(label).second) {
      throw InputError("schema '" + name + "' repeats label '" + label + "'");
    }
  }
  if (range && !(range->lo <= range->hi)) {
    throw InputError("schema '" + name + "' has an empty range");
  }
}

bool LexiconSchema::admits(double value) const {
  if (!std::isfinite(value)) return false;
  if (value_kind == ValueKind::binary) return value == 0.0 || value == 1.0;
  if (range) return value >= range->lo && value <= range->hi;
  return true;
}

std::string normalize_word(std::string_view word) { return text::to_lower(text::trim(word)); }

Lexicon::Lexicon(LexiconSchema schema, Entries entries, std::string provenance)
    : schema_(std::move(schema)), entries_(std::move(entries)), provenance_(std::move(provenance)) {
  schema_.validate();
  for (const auto& [word, values] : entries_) {
    if (word.empty() || normalize_word(word) != word) {
      throw InputError("lexicon '" + schema_.name + "': word '" + word + "' is not normalized");
    }
    if (values.size() != schema_.size()) {
      throw InputError("lexicon '" + schema_.name + "': entry '" + word + "' has " +
                       std::to_string(values.size()) + " values, expected " +
                       std::to_string(schema_.size()));
    }
    for (double v : values) {
      if (!schema_.admits(v)) {
        throw InputError("lexicon '" + schema_.name + "': entry '" + word + "' has inadmissible value " +
                         text::format_double(v));
      }
    }
  }
}

const std::vector<double>* Lexicon::find(const std::string& word) const {
  const auto it = entries_.find(word);
  return it == entries_.end() ? nullptr : &it->second;
}

void LoadReport::write(std::ostream& out) const {
  for (const auto& imp : imputed) out << "IMPUTED " << imp.word << ' ' << imp.label << '\n';
}

namespace {

double parse_bound(std::string_view s) {
  s = text::trim(s);
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return text::parse_double(s, "range bound");
}

std::string format_bound(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return text::format_double(v);
}

std::ifstream open_input(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open '" + file.string() + "'");
  return in;
}

}  // namespace

LexiconSchema parse_schema(std::istream& in, const std::string& source) {
  LexiconSchema schema;
  bool have_name = false, have_labels = false, have_kind = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, line_no, "expected key=value");
    const auto key = text::trim(body.substr(0, eq));
    const auto value = text::trim(body.substr(eq + 1));
    try {
      if (key == "name") {
        schema.name = std::string(value);
        have_name = true;
      } else if (key == "labels") {
        schema.labels.clear();
        for (auto part : text::split(value, ',')) schema.labels.emplace_back(text::trim(part));
        have_labels = true;
      } else if (key == "value_kind") {
        schema.value_kind = parse_value_kind(value);
        have_kind = true;
      } else if (key == "range") {
        const auto parts = text::split(value, ',');
        if (parts.size() != 2) throw InputError("range must be 'lo,hi'");
        schema.range = ValueRange{parse_bound(parts[0]), parse_bound(parts[1])};
      } else {
        throw InputError("unknown key '" + std::string(key) + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  if (!have_name || !have_labels || !have_kind) {
    throw InputError(source + ": schema must declare name, labels and value_kind");
  }
  if (schema.value_kind == ValueKind::binary && schema.range) {
    throw InputError(source + ": binary schemas take no range");
  }
  try {
    schema.validate();
  } catch (const InputError& e) {
    throw InputError(source + ": " + e.what());
  }
  return schema;
}

LexiconSchema parse_schema(const std::filesystem::path& file) {
  auto in = open_input(file);
  return parse_schema(in, file.string());
}

void write_schema(std::ostream& out, const LexiconSchema& schema) {
  out << "name=" << schema.name << '\n';
  out << "labels=" << text::join(schema.labels, ",") << '\n';
  out << "value_kind=" << to_string(schema.value_kind) << '\n';
  if (schema.range) out << "range=" << format_bound(schema.range->lo) << ',' << format_bound(schema.range->hi) << '\n';
}

ParsedLexicon parse_lexicon(std::istream& in, const LexiconSchema& schema, const std::string& source) {
  schema.validate();
  Lexicon::Entries entries;
  LoadReport report;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  const std::size_t columns = schema.size() + 1;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header_seen) {
      if (text::trim(line).empty() || line.front() == '#') continue;
      const auto cells = text::split(line, '\t');
      bool ok = cells.size() == columns && text::trim(cells[0]) == "word";
      for (std::size_t j = 1; ok && j < cells.size(); ++j) ok = text::trim(cells[j]) == schema.labels[j - 1];
      if (!ok) {
        throw ParseError(source, line_no, "header does not match schema '" + schema.name +
                                               "' (expected word\\t" + text::join(schema.labels, "\\t") + ")");
      }
      header_seen = true;
      continue;
    }
    if (text::trim(line).empty()) continue;
    const auto cells = text::split(line, '\t');
    if (cells.size() != columns) {
      throw ParseError(source, line_no, "expected " + std::to_string(columns) + " columns, found " +
                                             std::to_string(cells.size()));
    }
    std::string word = normalize_word(cells[0]);
    if (word.empty()) throw ParseError(source, line_no, "empty word");
    std::vector<double> values(schema.size(), 0.0);
    for (std::size_t j = 0; j < schema.size(); ++j) {
      const auto cell = text::trim(cells[j + 1]);
      if (cell.empty() || cell == "-") {
        report.imputed.push_back({word, schema.labels[j]});
        continue;
      }
      double v = 0.0;
      try {
        v = text::parse_double(cell, "value");
      } catch (const InputError& e) {
        throw ParseError(source, line_no, e.what());
      }
      if (!schema.admits(v)) {
        throw ParseError(source, line_no, "value " + std::string(cell) + " for label '" + schema.labels[j] +
                                               "' is out of range for schema '" + schema.name + "'");
      }
      values[j] = v;
    }
    if (!entries.emplace(word, std::move(values)).second) {
      throw ParseError(source, line_no, "duplicate word '" + word + "'");
    }
  }
  if (!header_seen) throw ParseError(source, line_no, "missing header line");
  return {Lexicon(schema, std::move(entries), source), std::move(report)};
}

ParsedLexicon parse_lexicon(const std::filesystem::path& file, const LexiconSchema& schema) {
  auto in = open_input(file);
  return parse_lexicon(in, schema, file.string());
}

void write_lexicon(std::ostream& out, const Lexicon& lexicon, const std::vector<std::string>& header_comments) {
  for (const auto& c : header_comments) out << "# " << c << '\n';
  out << "word";
  for (const auto& label : lexicon.schema().labels) out << '\t' << label;
  out << '\n';
  for (const auto& [word, values] : lexicon.entries()) {
    out << word;
    for (double v : values) out << '\t' << text::format_double(v);
    out << '\n';
  }
}

std::filesystem::path default_schema_path(const std::filesystem::path& lexicon_file) {
  auto p = lexicon_file;
  p.replace_extension(".schema");
  return p;
}

Vocabulary::Vocabulary(std::vector<std::string> words, std::vector<std::uint64_t> membership,
                       std::size_t lexicon_count)
    : words_(std::move(words)), membership_(std::move(membership)), lexicon_count_(lexicon_count) {}

std::size_t Vocabulary::member_count(std::size_t word_index) const {
  return static_cast<std::size_t>(std::popcount(membership_[word_index]));
}

std::optional<std::size_t> Vocabulary::index_of(const std::string& word) const {
  const auto it = std::lower_bound(words_.begin(), words_.end(), word);
  if (it == words_.end() || *it != word) return std::nullopt;
  return static_cast<std::size_t>(it - words_.begin());
}

Vocabulary build_vocabulary(std::span<const Lexicon> lexica) {
  if (lexica.empty()) throw InputError("build_vocabulary needs at least one lexicon");
  if (lexica.size() > Vocabulary::max_lexica) {
    throw InputError("at most " + std::to_string(Vocabulary::max_lexica) + " lexica are supported");
  }
  std::map<std::string, std::uint64_t> merged;
  for (std::size_t d = 0; d < lexica.size(); ++d) {
    for (const auto& [word, values] : lexica[d].entries()) merged[word] |= std::uint64_t{1} << d;
  }
  std::vector<std::string> words;
  std::vector<std::uint64_t> membership;
  words.reserve(merged.size());
  membership.reserve(merged.size());
  for (auto& [word, mask] : merged) {
    words.push_back(word);
    membership.push_back(mask);
  }
  return Vocabulary(std::move(words), std::move(membership), lexica.size());
}

}  // namespace emolex
