#include "emolex/fusion.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "emolex/error.hpp"
#include "emolex/numerics/stats.hpp"
#include "emolex/text.hpp"

namespace emolex::fusion {

namespace {

std::string_view to_string(ExportValue v) { return v == ExportValue::mean ? "mean" : "concentration"; }

ExportValue parse_export_value(std::string_view s, const std::string& source) {
  if (s == "concentration") return ExportValue::concentration;
  if (s == "mean") return ExportValue::mean;
  throw InputError(source + ": unknown value kind '" + std::string(s) + "'");
}

void write_comments(std::ostream& out, const std::vector<std::string>& lines) {
  for (const auto& line : lines) out << "# " << line << '\n';
}

std::string format_cell(const std::optional<double>& r) { return r ? text::format_double(*r) : "NA"; }

}  // namespace

std::vector<std::string> JointLexicon::labels() const {
  std::vector<std::string> out;
  for (int k = 1; k <= latent_dim; ++k) out.push_back("dim" + std::to_string(k));
  return out;
}

Lexicon JointLexicon::as_lexicon(const std::string& name) const {
  return Lexicon(LexiconSchema{name, labels(), ValueKind::continuous, std::nullopt}, entries, checkpoint_id);
}

JointLexicon export_joint_lexicon(const vae::ModelParams& params, std::span<const Lexicon> lexica,
                                  const Vocabulary& vocabulary, ExportValue value) {
  const auto words = vae::prepare_words(params, lexica, vocabulary);
  JointLexicon joint;
  joint.latent_dim = params.latent_dim;
  joint.value = value;
  for (const auto& v : params.views) joint.sources.push_back(v.schema.name);
  for (const auto& w : words) {
    Eigen::VectorXd beta = vae::posterior(params, w.observations).beta;
    if (value == ExportValue::mean) beta /= beta.sum();
    joint.entries.emplace(w.word, std::vector<double>(beta.data(), beta.data() + beta.size()));
  }
  return joint;
}

void write_joint_lexicon(std::ostream& out, const JointLexicon& joint, const std::vector<std::string>& header_comments) {
  auto comments = header_comments;
  comments.push_back("latent_dim=" + std::to_string(joint.latent_dim));
  comments.push_back("value=" + std::string(to_string(joint.value)));
  comments.push_back("checkpoint=" + joint.checkpoint_id);
  comments.push_back("sources=" + text::join(joint.sources, ","));
  write_lexicon(out, joint.as_lexicon(), comments);
}

JointLexicon read_joint_lexicon(std::istream& in, const std::string& source) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string body = buffer.str();
  JointLexicon joint;
  bool have_dim = false;
  std::istringstream lines(body);
  std::string line;
  while (std::getline(lines, line) && !line.empty() && line[0] == '#') {
    const auto content = text::trim(std::string_view(line).substr(1));
    const auto eq = content.find('=');
    if (eq == std::string_view::npos) continue;
    const auto key = content.substr(0, eq);
    const auto val = content.substr(eq + 1);
    if (key == "latent_dim") {
      joint.latent_dim = static_cast<int>(text::parse_int(val, "latent_dim"));
      have_dim = true;
    } else if (key == "value") {
      joint.value = parse_export_value(val, source);
    } else if (key == "checkpoint") {
      joint.checkpoint_id = std::string(val);
    } else if (key == "sources") {
      for (auto s : text::split(val, ',')) {
        if (!text::trim(s).empty()) joint.sources.emplace_back(text::trim(s));
      }
    }
  }
  if (!have_dim || joint.latent_dim < 1) throw InputError(source + ": joint lexicon lacks a latent_dim header");
  std::istringstream rows(body);
  const auto parsed = parse_lexicon(rows, joint.as_lexicon().schema(), source);
  if (!parsed.report.imputed.empty()) throw InputError(source + ": joint lexicon has missing values");
  joint.entries = parsed.lexicon.entries();
  return joint;
}

JointLexicon read_joint_lexicon(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open joint lexicon " + file.string());
  return read_joint_lexicon(in, file.string());
}

CorrelationReport correlate(const JointLexicon& joint, const Lexicon& reference) {
  if (reference.schema().value_kind == ValueKind::binary) {
    throw InputError("reference lexicon '" + reference.name() + "' is binary; correlation needs continuous values");
  }
  std::vector<const std::vector<double>*> latent, ref;
  for (const auto& [word, values] : reference.entries()) {
    const auto it = joint.entries.find(word);
    if (it == joint.entries.end()) continue;
    latent.push_back(&it->second);
    ref.push_back(&values);
  }
  if (latent.size() < 2) {
    throw InputError("joint lexicon and '" + reference.name() + "' share " + std::to_string(latent.size()) +
                     " word(s); at least 2 are needed");
  }
  CorrelationReport report;
  report.rows = joint.labels();
  report.columns = reference.schema().labels;
  const auto n = latent.size();
  std::vector<double> x(n), y(n);
  for (std::size_t k = 0; k < report.rows.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) x[i] = (*latent[i])[k];
    auto& r_row = report.r.emplace_back();
    report.shared.emplace_back(report.columns.size(), n);
    for (std::size_t j = 0; j < report.columns.size(); ++j) {
      for (std::size_t i = 0; i < n; ++i) y[i] = (*ref[i])[j];
      try {
        r_row.push_back(numerics::spearman(x, y));
      } catch (const DomainError&) {
        r_row.push_back(std::nullopt);
      }
    }
  }
  return report;
}

std::vector<std::optional<Alignment>> align_dimensions(const CorrelationReport& report) {
  std::vector<std::optional<Alignment>> out;
  bool any = false;
  for (const auto& row : report.r) {
    std::optional<Alignment> best;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (!row[j] || *row[j] == 0.0) continue;
      if (!best || std::abs(*row[j]) > std::abs(best->r)) {
        best = Alignment{j, report.columns[j], *row[j], *row[j] > 0 ? 1 : -1};
      }
    }
    any = any || best.has_value();
    out.push_back(best);
  }
  if (!any) throw InputError("no alignment: every correlation is zero or undefined");
  return out;
}

void write_correlation_report(std::ostream& out, const CorrelationReport& report,
                              const std::vector<std::string>& header_comments) {
  write_comments(out, header_comments);
  if (!report.shared.empty() && !report.shared.front().empty()) {
    out << "# shared_words=" << report.shared.front().front() << '\n';
  }
  out << "dim";
  for (const auto& c : report.columns) out << '\t' << c;
  out << '\n';
  for (std::size_t k = 0; k < report.rows.size(); ++k) {
    out << report.rows[k];
    for (const auto& cell : report.r[k]) out << '\t' << format_cell(cell);
    out << '\n';
  }
}

void write_alignment(std::ostream& out, const CorrelationReport& report,
                     const std::vector<std::optional<Alignment>>& alignment,
                     const std::vector<std::string>& header_comments) {
  write_comments(out, header_comments);
  out << "dim\tlabel\tr\tsign\n";
  for (std::size_t k = 0; k < alignment.size(); ++k) {
    const auto& a = alignment[k];
    if (a) out << report.rows[k] << '\t' << a->label << '\t' << text::format_double(a->r) << '\t' << (a->sign > 0 ? "+" : "-") << '\n';
    else out << report.rows[k] << "\tNA\tNA\tNA\n";
  }
}

}  // namespace emolex::fusion
