#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "emolex/lexica.hpp"
#include "emolex/vae.hpp"

namespace emolex::fusion {

enum class ExportValue { concentration, mean };

struct JointLexicon {
  int latent_dim = 0;
  ExportValue value = ExportValue::concentration;
  std::map<std::string, std::vector<double>> entries;
  std::string checkpoint_id;
  std::vector<std::string> sources;

  // dim1..dimN
  std::vector<std::string> labels() const;
  // The joint lexicon viewed as an ordinary continuous lexicon named `name`.
  Lexicon as_lexicon(const std::string& name = "vae") const;
};

// One record per vocabulary word; words in no lexicon get the prior (all ones).
// Throws InputError when the lexica do not match the model's schemas.
JointLexicon export_joint_lexicon(const vae::ModelParams& params, std::span<const Lexicon> lexica,
                                  const Vocabulary& vocabulary, ExportValue value = ExportValue::concentration);

// `# latent_dim=`, `# value=`, `# checkpoint=`, `# sources=` comments after the
// caller's header lines, then `word<TAB>dim1...dimN`.
void write_joint_lexicon(std::ostream& out, const JointLexicon& joint,
                         const std::vector<std::string>& header_comments = {});
JointLexicon read_joint_lexicon(std::istream& in, const std::string& source);
JointLexicon read_joint_lexicon(const std::filesystem::path& file);

struct CorrelationReport {
  std::vector<std::string> rows;     // latent dimensions
  std::vector<std::string> columns;  // reference labels
  // Spearman r; nullopt where a column or row has no rank variance.
  std::vector<std::vector<std::optional<double>>> r;
  std::vector<std::vector<std::size_t>> shared;
};

// Spearman r between every latent dimension and every label of a continuous
// reference over the shared words. Binary references and intersections of
// fewer than two words are rejected with InputError.
CorrelationReport correlate(const JointLexicon& joint, const Lexicon& reference);

struct Alignment {
  std::size_t column;
  std::string label;
  double r;
  int sign;
};

// Per latent dimension, the reference label with maximal |r| (lower column
// wins ties). Rows whose cells are all zero or undefined stay unaligned;
// throws InputError when no row aligns.
std::vector<std::optional<Alignment>> align_dimensions(const CorrelationReport& report);

void write_correlation_report(std::ostream& out, const CorrelationReport& report,
                              const std::vector<std::string>& header_comments = {});
void write_alignment(std::ostream& out, const CorrelationReport& report,
                     const std::vector<std::optional<Alignment>>& alignment,
                     const std::vector<std::string>& header_comments = {});

}  // namespace emolex::fusion
