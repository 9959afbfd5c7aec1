#include "emolex/checkpoint.hpp"

#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <json.hpp>

#include "emolex/error.hpp"
#include "emolex/text.hpp"

namespace emolex {

namespace {

using nlohmann::json;
constexpr const char* format_name = "emolex-checkpoint";

// JSON has no infinities; unbounded range ends are stored as strings.
json bound_to_json(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

double bound_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw InputError("bad range bound '" + s + "'");
  }
  return j.get<double>();
}

json schema_to_json(const LexiconSchema& s) {
  json j{{"name", s.name}, {"labels", s.labels}, {"value_kind", std::string(to_string(s.value_kind))}};
  j["range"] = s.range ? json::array({bound_to_json(s.range->lo), bound_to_json(s.range->hi)}) : json(nullptr);
  return j;
}

LexiconSchema schema_from_json(const json& j) {
  LexiconSchema s;
  s.name = j.at("name").get<std::string>();
  s.labels = j.at("labels").get<std::vector<std::string>>();
  s.value_kind = parse_value_kind(j.at("value_kind").get<std::string>());
  const auto& r = j.at("range");
  if (!r.is_null()) s.range = ValueRange{bound_from_json(r.at(0)), bound_from_json(r.at(1))};
  s.validate();
  return s;
}

json vector_to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vector_from_json(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

// Weights row-major, one array per row.
json dense_to_json(const vae::Dense& d) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < d.weight.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(d.weight.cols()));
    for (Eigen::Index k = 0; k < d.weight.cols(); ++k) row[static_cast<std::size_t>(k)] = d.weight(i, k);
    rows.push_back(row);
  }
  return {{"weight", rows}, {"bias", vector_to_json(d.bias)}};
}

vae::Dense dense_from_json(const json& j, Eigen::Index rows, Eigen::Index cols) {
  vae::Dense d;
  const auto& w = j.at("weight");
  if (static_cast<Eigen::Index>(w.size()) != rows) throw InputError("weight matrix has wrong row count");
  d.weight.resize(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto row = w.at(static_cast<std::size_t>(i)).get<std::vector<double>>();
    if (static_cast<Eigen::Index>(row.size()) != cols) throw InputError("weight matrix has wrong column count");
    for (Eigen::Index k = 0; k < cols; ++k) d.weight(i, k) = row[static_cast<std::size_t>(k)];
  }
  d.bias = vector_from_json(j.at("bias"));
  if (d.bias.size() != rows) throw InputError("bias has wrong length");
  return d;
}

json config_to_json(const vae::TrainConfig& c) {
  return {{"latent_dim", c.latent_dim},     {"hidden_width", c.hidden_width},
          {"epochs", c.epochs},             {"batch_size", c.batch_size},
          {"learning_rate", c.learning_rate}, {"adam_beta1", c.adam_beta1},
          {"adam_beta2", c.adam_beta2},     {"adam_epsilon", c.adam_epsilon},
          {"emission_variance", c.emission_variance}, {"mc_samples", c.mc_samples},
          {"prior_alpha", vae::TrainConfig::prior_alpha}, {"seed", c.seed}};
}

vae::TrainConfig config_from_json(const json& j) {
  vae::TrainConfig c;
  c.latent_dim = j.at("latent_dim").get<int>();
  c.hidden_width = j.at("hidden_width").get<int>();
  c.epochs = j.at("epochs").get<int>();
  c.batch_size = j.at("batch_size").get<int>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.adam_beta1 = j.at("adam_beta1").get<double>();
  c.adam_beta2 = j.at("adam_beta2").get<double>();
  c.adam_epsilon = j.at("adam_epsilon").get<double>();
  c.emission_variance = j.at("emission_variance").get<double>();
  c.mc_samples = j.at("mc_samples").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.validate();
  return c;
}

json params_to_json(const vae::ModelParams& p) {
  json views = json::array();
  for (const auto& v : p.views) {
    views.push_back({{"schema", schema_to_json(v.schema)},
                     {"emission", std::string(vae::to_string(v.emission))},
                     {"scaling", {{"offset", vector_to_json(v.scaling.offset)}, {"scale", vector_to_json(v.scaling.scale)}}},
                     {"enc_hidden", dense_to_json(v.enc_hidden)},
                     {"enc_out", dense_to_json(v.enc_out)},
                     {"dec_hidden", dense_to_json(v.dec_hidden)},
                     {"dec_out", dense_to_json(v.dec_out)}});
  }
  return {{"latent_dim", p.latent_dim},
          {"hidden_width", p.hidden_width},
          {"emission_variance", p.emission_variance},
          {"nonlinearity", "relu"},
          {"views", views}};
}

vae::ModelParams params_from_json(const json& j) {
  vae::ModelParams p;
  p.latent_dim = j.at("latent_dim").get<int>();
  p.hidden_width = j.at("hidden_width").get<int>();
  p.emission_variance = j.at("emission_variance").get<double>();
  if (j.at("nonlinearity").get<std::string>() != "relu") throw InputError("unsupported nonlinearity");
  if (p.latent_dim < 2 || p.hidden_width < 1 || !(p.emission_variance > 0)) throw InputError("bad model dimensions");
  const Eigen::Index n = p.latent_dim, h = p.hidden_width;
  for (const auto& jv : j.at("views")) {
    vae::ViewParams v;
    v.schema = schema_from_json(jv.at("schema"));
    v.emission = vae::parse_emission_kind(jv.at("emission").get<std::string>());
    if (v.emission != vae::emission_for(v.schema.value_kind)) throw InputError("emission does not match value kind");
    const auto l = static_cast<Eigen::Index>(v.schema.size());
    v.scaling.offset = vector_from_json(jv.at("scaling").at("offset"));
    v.scaling.scale = vector_from_json(jv.at("scaling").at("scale"));
    if (v.scaling.offset.size() != l || v.scaling.scale.size() != l) throw InputError("scaling has wrong length");
    v.enc_hidden = dense_from_json(jv.at("enc_hidden"), h, l);
    v.enc_out = dense_from_json(jv.at("enc_out"), n, h);
    v.dec_hidden = dense_from_json(jv.at("dec_hidden"), h, n);
    v.dec_out = dense_from_json(jv.at("dec_out"), l, h);
    p.views.push_back(std::move(v));
  }
  if (p.views.empty()) throw InputError("checkpoint has no lexica");
  if (!p.all_finite()) throw InputError("checkpoint contains non-finite weights");
  return p;
}

}  // namespace

std::string checkpoint_id(const vae::ModelParams& params) {
  return text::hex64(text::fnv1a(params_to_json(params).dump()));
}

void write_checkpoint(std::ostream& out, const Checkpoint& c) {
  json log = json::array();
  for (const auto& e : c.log) log.push_back(json::array({e.epoch, e.mean_elbo}));
  const json j{{"format", format_name},
               {"version", Checkpoint::format_version},
               {"header", c.header},
               {"id", checkpoint_id(c.params)},
               {"config", config_to_json(c.config)},
               {"model", params_to_json(c.params)},
               {"log", log}};
  // The provenance lines also lead the file as `#` comments, like every other artifact.
  for (const auto& line : c.header) out << "# " << line << '\n';
  out << j.dump(1) << '\n';
}

Checkpoint read_checkpoint(std::istream& in, const std::string& source) {
  std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t start = 0;
  while (start < body.size() && body[start] == '#') {
    const auto nl = body.find('\n', start);
    start = nl == std::string::npos ? body.size() : nl + 1;
  }
  try {
    const json j = json::parse(body.begin() + static_cast<std::ptrdiff_t>(start), body.end());
    if (j.at("format").get<std::string>() != format_name) throw InputError(source + ": not an emolex checkpoint");
    const int version = j.at("version").get<int>();
    if (version != Checkpoint::format_version) {
      throw InputError(source + ": unsupported checkpoint version " + std::to_string(version));
    }
    Checkpoint c;
    c.header = j.at("header").get<std::vector<std::string>>();
    c.config = config_from_json(j.at("config"));
    c.params = params_from_json(j.at("model"));
    for (const auto& e : j.at("log")) c.log.push_back({e.at(0).get<int>(), e.at(1).get<double>()});
    return c;
  } catch (const json::exception& e) {
    throw InputError(source + ": malformed checkpoint: " + e.what());
  } catch (const InputError& e) {
    const std::string what = e.what();
    if (what.rfind(source, 0) == 0) throw;
    throw InputError(source + ": " + what);
  }
}

void save_checkpoint(const std::filesystem::path& file, const Checkpoint& checkpoint) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write " + file.string());
  write_checkpoint(out, checkpoint);
  if (!out) throw Error("error while writing " + file.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InputError("cannot open checkpoint " + file.string());
  return read_checkpoint(in, file.string());
}

}  // namespace emolex
