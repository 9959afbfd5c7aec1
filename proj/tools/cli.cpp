#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "emolex/checkpoint.hpp"
#include "emolex/downstream.hpp"
#include "emolex/error.hpp"
#include "emolex/features.hpp"
#include "emolex/fusion.hpp"
#include "emolex/lexica.hpp"
#include "emolex/numerics/stats.hpp"
#include "emolex/pipeline.hpp"
#include "emolex/synth.hpp"
#include "emolex/text.hpp"
#include "emolex/vae.hpp"

namespace emolex::cli {

namespace {

namespace fs = std::filesystem;
using downstream::TaskKind;

struct Options {
  std::vector<std::string> lexica, schemas, datasets, strategies;
  std::string checkpoint, joint, config, value = "concentration";
  std::string out = ".";
  std::uint64_t seed = 0;
  vae::TrainConfig train;
  double c = 1.0;
  std::vector<int> dims{3, 6, 8, 10, 20, 30, 40};
  synth::SynthConfig synth;
};

std::string quote(const std::string& arg) {
  if (!arg.empty() && arg.find_first_of(" \t\"'") == std::string::npos) return arg;
  std::string q = "'";
  for (char ch : arg) q += ch == '\'' ? std::string("'\\''") : std::string(1, ch);
  return q + "'";
}

std::vector<std::string> header_lines(const std::vector<std::string>& args, std::uint64_t seed) {
  std::string cmd = "emolex";
  for (const auto& a : args) cmd += " " + quote(a);
  return {"command: " + cmd, "seed: " + std::to_string(seed), std::string("version: ") + version};
}

struct Context {
  const Options& options;
  const std::vector<std::string>& args;
  std::vector<std::string> header;
  std::ostream& out;
  std::ostream& err;

  // Artifacts derived from a trained model record the training seed.
  Context with_seed(std::uint64_t seed) const {
    Context c = *this;
    c.header = header_lines(args, seed);
    return c;
  }
};

// The `# seed: N` comment of an artifact this tool wrote, if any.
std::optional<std::uint64_t> recorded_seed(const fs::path& file) {
  std::ifstream in(file);
  std::string line;
  while (std::getline(in, line) && !line.empty() && line[0] == '#') {
    const auto body = text::trim(std::string_view(line).substr(1));
    if (body.rfind("seed: ", 0) == 0) return static_cast<std::uint64_t>(text::parse_int(body.substr(6), "seed"));
  }
  return std::nullopt;
}

// Writes through `body` and fails loudly if the file did not come out whole.
template <class Body>
void write_file(const Context& ctx, const fs::path& file, Body&& body) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  std::ofstream f(file, std::ios::binary);
  if (!f) throw Error("cannot write '" + file.string() + "'");
  body(f);
  f.flush();
  if (!f) throw Error("failed writing '" + file.string() + "'");
  ctx.out << "wrote " << file.string() << '\n';
}

void comments(std::ostream& f, const std::vector<std::string>& lines) {
  for (const auto& l : lines) f << "# " << l << '\n';
}

std::vector<Lexicon> load_lexica(const Options& o, std::ostream& err) {
  if (o.lexica.empty()) throw InputError("--lexica: at least one lexicon file is required");
  if (!o.schemas.empty() && o.schemas.size() != o.lexica.size())
    throw InputError("--schemas: expected " + std::to_string(o.lexica.size()) + " schema files, got " +
                     std::to_string(o.schemas.size()));
  std::vector<Lexicon> lexica;
  std::set<std::string> names;
  for (std::size_t i = 0; i < o.lexica.size(); ++i) {
    const fs::path file = o.lexica[i];
    const fs::path schema_file = o.schemas.empty() ? default_schema_path(file) : fs::path(o.schemas[i]);
    if (!fs::exists(schema_file)) throw InputError("missing schema file '" + schema_file.string() + "'");
    if (!fs::exists(file)) throw InputError("missing lexicon file '" + file.string() + "'");
    auto parsed = parse_lexicon(file, parse_schema(schema_file));
    parsed.report.write(err);
    if (!names.insert(parsed.lexicon.name()).second)
      throw InputError("lexicon name '" + parsed.lexicon.name() + "' appears twice");
    lexica.push_back(std::move(parsed.lexicon));
  }
  return lexica;
}

std::vector<downstream::AnnotatedDataset> load_datasets(const Options& o) {
  if (o.datasets.empty()) throw InputError("--datasets: at least one dataset file is required");
  std::vector<downstream::AnnotatedDataset> out;
  for (const auto& d : o.datasets) {
    if (!fs::exists(d)) throw InputError("missing dataset file '" + d + "'");
    out.push_back(downstream::read_dataset(fs::path(d)));
  }
  return out;
}

std::string task_code(TaskKind t) {
  switch (t) {
    case TaskKind::single_label: return "SL";
    case TaskKind::multi_label: return "ML";
    case TaskKind::regression: return "Reg";
  }
  return "?";
}

std::string cell(const std::optional<double>& v) { return v ? text::format_double(*v) : "NA"; }

std::string file_safe(std::string s) {
  for (auto& ch : s)
    if (ch == ':' || ch == '/' || ch == '\\' || ch == ' ') ch = '-';
  return s;
}

// ----------------------------------------------------------------- train

void cmd_train(const Context& ctx) {
  const auto& o = ctx.options;
  const auto lexica = load_lexica(o, ctx.err);
  const auto vocab = build_vocabulary(lexica);
  auto result = vae::train(lexica, vocab, o.train);
  const Checkpoint ck{ctx.header, o.train, std::move(result.params), result.log};
  write_file(ctx, fs::path(o.out) / "model.ckpt", [&](std::ostream& f) { write_checkpoint(f, ck); });
  write_file(ctx, fs::path(o.out) / "elbo.tsv", [&](std::ostream& f) {
    comments(f, ctx.header);
    f << "epoch\tmean_elbo\n";
    for (const auto& e : ck.log) f << e.epoch << '\t' << text::format_double(e.mean_elbo) << '\n';
  });
}

// ---------------------------------------------------------------- export

fusion::ExportValue parse_value(const std::string& v) {
  if (v == "concentration") return fusion::ExportValue::concentration;
  if (v == "mean") return fusion::ExportValue::mean;
  throw InputError("--value: expected concentration or mean, got '" + v + "'");
}

void cmd_export(const Context& base) {
  const auto& o = base.options;
  if (o.checkpoint.empty()) throw InputError("--checkpoint is required");
  const auto ck = load_checkpoint(o.checkpoint);
  const auto ctx = base.with_seed(ck.config.seed);
  const auto lexica = load_lexica(o, ctx.err);
  auto joint = fusion::export_joint_lexicon(ck.params, lexica, build_vocabulary(lexica), parse_value(o.value));
  joint.checkpoint_id = checkpoint_id(ck.params);
  write_file(ctx, fs::path(o.out) / "joint.tsv", [&](std::ostream& f) { fusion::write_joint_lexicon(f, joint, ctx.header); });
}

// ------------------------------------------------------------- correlate

void cmd_correlate(const Context& base) {
  const auto& o = base.options;
  if (o.joint.empty()) throw InputError("--joint is required");
  const auto joint = fusion::read_joint_lexicon(fs::path(o.joint));
  const auto ctx = base.with_seed(recorded_seed(o.joint).value_or(o.seed));
  const auto references = load_lexica(o, ctx.err);
  for (const auto& ref : references) {
    const auto report = fusion::correlate(joint, ref);
    std::vector<std::optional<fusion::Alignment>> alignment(report.rows.size());
    try {
      alignment = fusion::align_dimensions(report);
    } catch (const InputError&) {
      ctx.err << "no latent dimension aligns with '" << ref.name() << "'\n";
    }
    write_file(ctx, fs::path(o.out) / ("correlation_" + ref.name() + ".tsv"),
               [&](std::ostream& f) { fusion::write_correlation_report(f, report, ctx.header); });
    write_file(ctx, fs::path(o.out) / ("alignment_" + ref.name() + ".tsv"),
               [&](std::ostream& f) { fusion::write_alignment(f, report, alignment, ctx.header); });
  }
}

// ------------------------------------------------------------------ eval

std::vector<features::FeatureSpec> feature_specs(const std::vector<std::string>& strategies,
                                                 const std::vector<Lexicon>& lexica,
                                                 const std::optional<Lexicon>& joint) {
  std::vector<features::FeatureSpec> specs;
  for (const auto& name : strategies) {
    const auto s = features::parse_strategy(name);
    const bool needs_joint = s == features::Strategy::vae || s == features::Strategy::concat_plus_vae;
    if (needs_joint && !joint) throw InputError("strategy '" + name + "' needs a joint lexicon (--joint)");
    switch (s) {
      case features::Strategy::single:
        for (const auto& l : lexica) specs.push_back(features::FeatureSpec::single(l));
        break;
      case features::Strategy::concat:
        specs.push_back(features::FeatureSpec::concat(lexica));
        break;
      case features::Strategy::vae:
        specs.push_back(features::FeatureSpec::vae(*joint));
        break;
      case features::Strategy::concat_plus_vae:
        specs.push_back(features::FeatureSpec::concat_plus_vae(lexica, *joint));
        break;
    }
  }
  std::set<std::string> seen;
  for (const auto& s : specs)
    if (!seen.insert(s.name()).second) throw InputError("strategy '" + s.name() + "' requested twice");
  return specs;
}

struct Result {
  const downstream::AnnotatedDataset* dataset;
  features::Strategy strategy;
  pipeline::EvalOutcome outcome;
};

void write_kruskal(const Context& ctx, const std::vector<Result>& results) {
  // Segment 1 compares the individual lexica, segment 2 the combined strategies.
  const std::vector<std::pair<std::string, std::function<bool(features::Strategy)>>> segments{
      {"1", [](features::Strategy s) { return s == features::Strategy::single; }},
      {"2", [](features::Strategy s) { return s != features::Strategy::single; }}};
  write_file(ctx, fs::path(ctx.options.out) / "kruskal.tsv", [&](std::ostream& f) {
    comments(f, ctx.header);
    f << "segment\ttask\tH\tdf\tP\tgroups\tdata_points\n";
    for (const auto& [segment, member] : segments) {
      for (auto task : {TaskKind::single_label, TaskKind::multi_label, TaskKind::regression}) {
        std::vector<std::string> order;
        std::map<std::string, std::vector<double>> points;
        for (const auto& r : results) {
          if (r.dataset->task != task || !member(r.strategy)) continue;
          const auto& name = r.outcome.report.strategy;
          if (!points.count(name)) order.push_back(name);
          for (double v : r.outcome.report.data_points(task)) points[name].push_back(v);
        }
        if (order.size() < 2) continue;
        std::vector<std::vector<double>> groups;
        std::size_t n = 0;
        for (const auto& name : order) {
          groups.push_back(points[name]);
          n += groups.back().size();
        }
        f << segment << '\t' << task_code(task) << '\t';
        try {
          const auto kw = numerics::kruskal_wallis(groups);
          f << text::format_double(kw.h) << '\t' << kw.df << '\t' << text::format_double(kw.p);
        } catch (const DomainError&) {
          f << "NA\t" << order.size() - 1 << "\tNA";
        }
        f << '\t' << text::join(order, ",") << '\t' << n << '\n';
      }
    }
  });
}

void cmd_eval(const Context& ctx) {
  const auto& o = ctx.options;
  const auto lexica = load_lexica(o, ctx.err);
  const auto datasets = load_datasets(o);
  std::optional<Lexicon> joint;
  if (!o.joint.empty()) joint = fusion::read_joint_lexicon(fs::path(o.joint)).as_lexicon();
  auto strategies = o.strategies;
  if (strategies.empty()) {
    strategies = {"single", "concat"};
    if (joint) strategies.insert(strategies.end(), {"vae", "concat+vae"});
  }
  const auto specs = feature_specs(strategies, lexica, joint);
  std::vector<features::Featurizer> featurizers;
  for (const auto& s : specs) featurizers.emplace_back(s);

  std::vector<Result> results;
  for (const auto& ds : datasets)
    for (const auto& fz : featurizers)
      results.push_back({&ds, fz.spec().strategy, pipeline::evaluate(ds, fz, o.seed, o.c)});

  write_file(ctx, fs::path(o.out) / "eval.tsv", [&](std::ostream& f) {
    comments(f, ctx.header);
    f << "dataset\ttask\tstrategy\tmetric\tvalue\n";
    for (const auto& r : results) {
      const auto& rep = r.outcome.report;
      f << rep.dataset << '\t' << downstream::to_string(r.dataset->task) << '\t' << rep.strategy << '\t' << rep.metric
        << '\t' << text::format_double(rep.value) << '\n';
    }
  });
  write_file(ctx, fs::path(o.out) / "breakdown.tsv", [&](std::ostream& f) {
    comments(f, ctx.header);
    f << "dataset\tstrategy\tlabel\tvalue\n";
    for (const auto& r : results) {
      const auto& rep = r.outcome.report;
      for (std::size_t i = 0; i < rep.breakdown.size(); ++i)
        f << rep.dataset << '\t' << rep.strategy << '\t' << rep.breakdown_labels[i] << '\t' << cell(rep.breakdown[i])
          << '\n';
    }
  });
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    const auto& fz = featurizers[i % featurizers.size()];
    const auto file = fs::path(o.out) / "coefficients" /
                      (file_safe(r.outcome.report.dataset) + "__" + file_safe(r.outcome.report.strategy) + ".tsv");
    write_file(ctx, file, [&](std::ostream& f) {
      downstream::export_coefficients(f, r.outcome.model, fz.spec().feature_names(), r.dataset->label_names, ctx.header);
    });
  }
  write_kruskal(ctx, results);
}

// ----------------------------------------------------------------- sweep

void cmd_sweep(const Context& ctx) {
  const auto& o = ctx.options;
  const auto lexica = load_lexica(o, ctx.err);
  const auto datasets = load_datasets(o);
  if (o.dims.empty()) throw InputError("--dims: need at least one latent dimension");
  std::set<int> seen;
  for (int d : o.dims)
    if (d < 2 || !seen.insert(d).second) throw InputError("--dims: dimensions must be distinct and >= 2");
  const std::string strategy = o.strategies.empty() ? "vae" : o.strategies.front();
  if (o.strategies.size() > 1) throw InputError("--strategy: sweep takes a single strategy");
  const auto kind = features::parse_strategy(strategy);
  if (kind != features::Strategy::vae && kind != features::Strategy::concat_plus_vae)
    throw InputError("--strategy: sweep needs vae or concat+vae");

  const auto vocab = build_vocabulary(lexica);
  // reports[d][k]: dims[d] on datasets[k]
  std::vector<std::vector<downstream::EvalReport>> reports;
  std::vector<double> final_elbo;
  for (int dim : o.dims) {
    auto cfg = o.train;
    cfg.latent_dim = dim;
    const auto trained = vae::train(lexica, vocab, cfg);
    final_elbo.push_back(trained.log.empty() ? 0.0 : trained.log.back().mean_elbo);
    const auto joint = fusion::export_joint_lexicon(trained.params, lexica, vocab).as_lexicon();
    const features::Featurizer fz(feature_specs({strategy}, lexica, joint).front());
    auto& row = reports.emplace_back();
    for (const auto& ds : datasets) row.push_back(pipeline::evaluate(ds, fz, o.seed, o.c).report);
  }

  write_file(ctx, fs::path(o.out) / "sweep.tsv", [&](std::ostream& f) {
    comments(f, ctx.header);
    f << "dataset\ttask\tmetric";
    for (int d : o.dims) f << "\tN=" << d;
    f << '\n';
    for (std::size_t k = 0; k < datasets.size(); ++k) {
      f << datasets[k].name << '\t' << task_code(datasets[k].task) << '\t' << reports[0][k].metric;
      for (std::size_t d = 0; d < o.dims.size(); ++d) f << '\t' << text::format_double(reports[d][k].value);
      f << '\n';
    }
  });
  write_file(ctx, fs::path(o.out) / "sweep_training.tsv", [&](std::ostream& f) {
    comments(f, ctx.header);
    f << "N\tfinal_mean_elbo\n";
    for (std::size_t d = 0; d < o.dims.size(); ++d) f << o.dims[d] << '\t' << text::format_double(final_elbo[d]) << '\n';
  });
  write_file(ctx, fs::path(o.out) / "welch.tsv", [&](std::ostream& f) {
    comments(f, ctx.header);
    f << "task\tF\tdf1\tdf2\tP\tgroups\tdata_points\n";
    for (auto task : {TaskKind::single_label, TaskKind::multi_label, TaskKind::regression}) {
      std::vector<std::vector<double>> groups(o.dims.size());
      std::size_t n = 0;
      for (std::size_t d = 0; d < o.dims.size(); ++d)
        for (std::size_t k = 0; k < datasets.size(); ++k)
          if (datasets[k].task == task)
            for (double v : reports[d][k].data_points(task)) groups[d].push_back(v);
      for (const auto& g : groups) n += g.size();
      if (n == 0) continue;
      f << task_code(task) << '\t';
      try {
        const auto w = numerics::welch_anova(groups);
        f << text::format_double(w.f) << '\t' << text::format_double(w.df1) << '\t' << text::format_double(w.df2)
          << '\t' << text::format_double(w.p);
      } catch (const DomainError&) {
        f << "NA\tNA\tNA\tNA";
      }
      f << '\t' << o.dims.size() << '\t' << n << '\n';
    }
  });
}

// ----------------------------------------------------------------- synth

void write_lexicon_files(const Context& ctx, const fs::path& dir, const Lexicon& lex) {
  write_file(ctx, dir / (lex.name() + ".tsv"), [&](std::ostream& f) { write_lexicon(f, lex, ctx.header); });
  write_file(ctx, dir / (lex.name() + ".schema"), [&](std::ostream& f) {
    comments(f, ctx.header);
    write_schema(f, lex.schema());
  });
}

void cmd_synth(const Context& ctx) {
  const auto& o = ctx.options;
  const auto data = synth::generate(o.synth);
  const fs::path dir = o.out;
  for (const auto& lex : data.lexica) write_lexicon_files(ctx, dir, lex);
  write_lexicon_files(ctx, dir, data.planted);
  write_file(ctx, dir / (data.dataset.name + ".tsv"),
             [&](std::ostream& f) { downstream::write_dataset(f, data.dataset, ctx.header); });
}

// ---------------------------------------------------------------- config

// `key = value` lines; keys are long flag names. Values fill flags the
// command line left unset; list flags take whitespace-separated values.
void apply_config(CLI::App& command, const std::string& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open config file '" + file + "'");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = text::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError(file, line_no, "expected key=value");
    const std::string key(text::trim(body.substr(0, eq)));
    const auto value = text::trim(body.substr(eq + 1));
    auto* opt = command.get_option_no_throw("--" + key);
    if (!opt || key == "config") throw ParseError(file, line_no, "unknown key '" + key + "' for " + command.get_name());
    if (opt->count() > 0) continue;
    std::istringstream tokens{std::string(value)};
    std::string tok;
    bool any = false;
    while (tokens >> tok) {
      opt->add_result(tok);
      any = true;
    }
    if (!any) throw ParseError(file, line_no, "empty value for '" + key + "'");
    try {
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ParseError(file, line_no, e.what());
    }
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Multi-view VAE fusion of affect lexica", "emolex"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version));

  const auto add_lexica = [&](CLI::App* c, const std::string& what) {
    c->add_option("--lexica", o.lexica, what);
    c->add_option("--schemas", o.schemas, "Schema files, one per lexicon (default: sidecar .schema)");
  };
  const auto add_common = [&](CLI::App* c) {
    c->add_option("--out", o.out, "Output directory")->capture_default_str();
    c->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    c->add_option("--config", o.config, "key=value file; command-line flags win");
  };
  const auto add_training = [&](CLI::App* c) {
    c->add_option("--latent-dim", o.train.latent_dim, "Latent dimension N")->capture_default_str();
    c->add_option("--hidden", o.train.hidden_width, "Hidden units per layer")->capture_default_str();
    c->add_option("--epochs", o.train.epochs, "Training epochs")->capture_default_str();
    c->add_option("--batch-size", o.train.batch_size, "Minibatch size in words")->capture_default_str();
    c->add_option("--lr", o.train.learning_rate, "Adam learning rate")->capture_default_str();
    c->add_option("--mc-samples", o.train.mc_samples, "Posterior samples per word")->capture_default_str();
  };
  const auto add_eval = [&](CLI::App* c) {
    c->add_option("--datasets", o.datasets, "Annotated dataset TSVs");
    c->add_option("--strategy", o.strategies, "single, concat, vae or concat+vae (repeatable)");
    c->add_option("--c", o.c, "Inverse L2 strength of logistic regression")->capture_default_str();
  };

  auto* train = app.add_subcommand("train", "Train the multi-view VAE");
  add_lexica(train, "Source lexicon TSVs");
  add_training(train);
  add_common(train);

  auto* exp = app.add_subcommand("export", "Export the joint lexicon from a checkpoint");
  add_lexica(exp, "The lexica the checkpoint was trained on, in order");
  exp->add_option("--checkpoint", o.checkpoint, "Model checkpoint");
  exp->add_option("--value", o.value, "concentration or mean")->capture_default_str();
  add_common(exp);

  auto* cor = app.add_subcommand("correlate", "Spearman correlation of latent dims against reference lexica");
  add_lexica(cor, "Continuous reference lexica");
  cor->add_option("--joint", o.joint, "Joint lexicon TSV");
  add_common(cor);

  auto* eval = app.add_subcommand("eval", "Evaluate feature strategies with linear models");
  add_lexica(eval, "Source lexicon TSVs");
  eval->add_option("--joint", o.joint, "Joint lexicon TSV (enables vae strategies)");
  add_eval(eval);
  add_common(eval);

  auto* sweep = app.add_subcommand("sweep", "Train and evaluate across latent dimensions");
  add_lexica(sweep, "Source lexicon TSVs");
  sweep->add_option("--dims", o.dims, "Latent dimensions")->capture_default_str();
  add_training(sweep);
  add_eval(sweep);
  add_common(sweep);

  auto* syn = app.add_subcommand("synth", "Generate planted-latent lexica and a labeled dataset");
  syn->add_option("--words", o.synth.words, "Vocabulary size")->capture_default_str();
  syn->add_option("--planted-dims", o.synth.planted_dims, "Planted latent dimensions")->capture_default_str();
  syn->add_option("--lexicon-count", o.synth.lexica, "Number of lexica")->capture_default_str();
  syn->add_option("--binary-lexica", o.synth.binary_lexica, "How many lexica are binary")->capture_default_str();
  syn->add_option("--noise", o.synth.noise_sigma, "Gaussian noise sigma")->capture_default_str();
  syn->add_option("--coverage", o.synth.coverage, "Fraction of words per lexicon")->capture_default_str();
  syn->add_flag("--identity", o.synth.identity_maps, "Identity maps and full coverage");
  syn->add_option("--instances", o.synth.instances, "Dataset size")->capture_default_str();
  syn->add_option("--bag-size", o.synth.bag_size, "Words per instance")->capture_default_str();
  add_common(syn);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    CLI::App* command = app.get_subcommands().front();
    if (!o.config.empty()) apply_config(*command, o.config);
    o.train.seed = o.seed;
    o.synth.seed = o.seed;
    const Context ctx{o, args, header_lines(args, o.seed), out, err};
    const std::string name = command->get_name();
    if (name == "train") {
      o.train.validate();
      cmd_train(ctx);
    } else if (name == "export") {
      cmd_export(ctx);
    } else if (name == "correlate") {
      cmd_correlate(ctx);
    } else if (name == "eval") {
      cmd_eval(ctx);
    } else if (name == "sweep") {
      o.train.validate();
      cmd_sweep(ctx);
    } else {
      cmd_synth(ctx);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace emolex::cli
