#include "emolex/downstream.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>

#include "emolex/error.hpp"
#include "emolex/numerics/random.hpp"
#include "emolex/numerics/stats.hpp"
#include "emolex/text.hpp"

namespace emolex::downstream {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double softplus(double l) { return std::max(l, 0.0) + std::log1p(std::exp(-std::abs(l))); }

double sigmoid(double l) {
  if (l >= 0) return 1.0 / (1.0 + std::exp(-l));
  const double e = std::exp(l);
  return e / (1.0 + e);
}

VectorXd softmax(const VectorXd& a) {
  const VectorXd e = (a.array() - a.maxCoeff()).exp();
  return e / e.sum();
}

// f(theta, grad) returns the objective and writes the gradient.
using Objective = std::function<double(const VectorXd&, VectorXd&)>;

// Limited-memory BFGS with Armijo backtracking; plain gradient steps when the
// quasi-Newton direction fails to descend.
FitInfo minimize(const Objective& f, VectorXd& theta) {
  constexpr int memory = 10;
  constexpr int max_iterations = 20000;
  constexpr double tolerance = 1e-6;
  std::deque<std::pair<VectorXd, VectorXd>> history;  // (s, y)
  VectorXd g(theta.size());
  double fx = f(theta, g);
  FitInfo info;
  VectorXd g_new(theta.size());
  for (info.iterations = 0; info.iterations < max_iterations; ++info.iterations) {
    info.gradient_norm = g.norm();
    if (info.gradient_norm <= tolerance * std::max(1.0, theta.norm())) {
      info.converged = true;
      return info;
    }
    VectorXd d = -g;
    if (!history.empty()) {
      std::vector<double> alpha(history.size());
      for (std::size_t i = history.size(); i-- > 0;) {
        const auto& [s, y] = history[i];
        alpha[i] = s.dot(d) / y.dot(s);
        d -= alpha[i] * y;
      }
      const auto& [s_last, y_last] = history.back();
      d *= s_last.dot(y_last) / y_last.dot(y_last);
      for (std::size_t i = 0; i < history.size(); ++i) {
        const auto& [s, y] = history[i];
        const double beta = y.dot(d) / y.dot(s);
        d += (alpha[i] - beta) * s;
      }
      if (d.dot(g) >= 0) {
        history.clear();
        d = -g;
      }
    }
    double step = history.empty() ? std::min(1.0, 1.0 / info.gradient_norm) : 1.0;
    const double slope = g.dot(d);
    bool accepted = false;
    VectorXd candidate;
    double f_new = fx;
    for (int k = 0; k < 80; ++k, step *= 0.5) {
      candidate = theta + step * d;
      f_new = f(candidate, g_new);
      if (!std::isfinite(f_new)) continue;
      // Near the optimum objective differences drown in rounding; a flat
      // objective with a smaller gradient still counts as progress.
      const bool armijo = f_new <= fx + 1e-4 * step * slope;
      const bool flat = std::abs(f_new - fx) <= 1e-14 * std::max(1.0, std::abs(fx)) && g_new.norm() < g.norm();
      if (armijo || flat) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (history.empty()) return info;
      history.clear();
      continue;
    }
    VectorXd s = candidate - theta;
    VectorXd y = g_new - g;
    if (s.dot(y) > 1e-16 * s.norm() * y.norm()) {
      history.emplace_back(std::move(s), std::move(y));
      if (static_cast<int>(history.size()) > memory) history.pop_front();
    }
    theta = std::move(candidate);
    fx = f_new;
    g = g_new;
  }
  info.gradient_norm = g.norm();
  info.converged = info.gradient_norm <= tolerance * std::max(1.0, theta.norm());
  return info;
}

// Binary problem with labels in {0,1}; returns (w, b).
std::pair<VectorXd, double> fit_binary(const MatrixXd& x, std::span<const int> y, double c, FitInfo& info) {
  const auto f = x.cols();
  const auto n = x.rows();
  VectorXd sign(n);
  for (Eigen::Index i = 0; i < n; ++i) sign(i) = y[static_cast<std::size_t>(i)] == 1 ? 1.0 : -1.0;
  const Objective objective = [&](const VectorXd& theta, VectorXd& grad) {
    const auto w = theta.head(f);
    const double b = theta(f);
    const VectorXd z = (x * w).array() + b;
    double loss = 0.5 * w.squaredNorm();
    VectorXd coef(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = sign(i) * z(i);
      loss += c * softplus(-m);
      coef(i) = -c * sign(i) * sigmoid(-m);
    }
    grad.resize(f + 1);
    grad.head(f) = w + x.transpose() * coef;
    grad(f) = coef.sum();
    return loss;
  };
  VectorXd theta = VectorXd::Zero(f + 1);
  info = minimize(objective, theta);
  return {theta.head(f), theta(f)};
}

void check_rows(const MatrixXd& x, std::size_t targets) {
  if (static_cast<std::size_t>(x.rows()) != targets) {
    throw InputError("feature matrix has " + std::to_string(x.rows()) + " rows for " + std::to_string(targets) +
                     " targets");
  }
  if (!x.allFinite()) throw InputError("feature matrix has non-finite values");
}

template <class T>
const T& target_as(const Target& t, const char* what) {
  if (const auto* v = std::get_if<T>(&t)) return *v;
  throw InputError(std::string("target is not ") + what);
}

}  // namespace

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::single_label: return "single_label";
    case TaskKind::multi_label: return "multi_label";
    case TaskKind::regression: return "regression";
  }
  return "?";
}

TaskKind parse_task_kind(std::string_view s) {
  if (s == "single_label") return TaskKind::single_label;
  if (s == "multi_label") return TaskKind::multi_label;
  if (s == "regression") return TaskKind::regression;
  throw InputError("unknown task kind '" + std::string(s) + "'");
}

void AnnotatedDataset::validate() const {
  if (label_names.empty()) throw InputError(name + ": no labels declared");
  std::set<std::string> unique(label_names.begin(), label_names.end());
  if (unique.size() != label_names.size()) throw InputError(name + ": duplicate label names");
  const auto k = label_names.size();
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& t = instances[i].target;
    const auto where = name + ": instance " + std::to_string(i + 1);
    switch (task) {
      case TaskKind::single_label: {
        const auto* c = std::get_if<std::size_t>(&t);
        if (!c || *c >= k) throw InputError(where + ": expected one class index");
        break;
      }
      case TaskKind::multi_label: {
        const auto* s = std::get_if<std::vector<std::size_t>>(&t);
        if (!s || !std::is_sorted(s->begin(), s->end()) || std::adjacent_find(s->begin(), s->end()) != s->end() ||
            (!s->empty() && s->back() >= k)) {
          throw InputError(where + ": expected a sorted set of class indices");
        }
        break;
      }
      case TaskKind::regression: {
        const auto* v = std::get_if<std::vector<double>>(&t);
        if (!v || v->size() != k || !std::all_of(v->begin(), v->end(), [](double x) { return std::isfinite(x); })) {
          throw InputError(where + ": expected " + std::to_string(k) + " finite reals");
        }
        break;
      }
    }
  }
  if (split) {
    std::vector<int> seen(instances.size(), 0);
    for (const auto* part : {&split->train, &split->dev, &split->test}) {
      for (auto i : *part) {
        if (i >= instances.size() || seen[i]++) throw InputError(name + ": split is not a disjoint cover");
      }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
      throw InputError(name + ": split does not cover every instance");
    }
  }
}

std::vector<std::string> AnnotatedDataset::texts(std::span<const std::size_t> indices) const {
  std::vector<std::string> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(instances.at(i).text);
  return out;
}

std::vector<Target> AnnotatedDataset::targets(std::span<const std::size_t> indices) const {
  std::vector<Target> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(instances.at(i).target);
  return out;
}

AnnotatedDataset read_dataset(std::istream& in, const std::string& name) {
  AnnotatedDataset ds;
  ds.name = name;
  std::optional<TaskKind> task;
  std::string line;
  std::size_t line_no = 0;
  std::map<std::string, std::size_t> label_index;
  Split fixed;
  std::optional<bool> has_split;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] == '#') {
      const auto content = text::trim(std::string_view(line).substr(1));
      const auto eq = content.find('=');
      if (eq == std::string_view::npos) continue;
      const auto key = content.substr(0, eq);
      const auto value = content.substr(eq + 1);
      try {
        if (key == "task") {
          task = parse_task_kind(text::trim(value));
        } else if (key == "labels") {
          for (auto l : text::split(value, ',')) ds.label_names.emplace_back(text::trim(l));
          for (std::size_t i = 0; i < ds.label_names.size(); ++i) label_index[ds.label_names[i]] = i;
        }
      } catch (const InputError& e) {
        throw ParseError(name, line_no, e.what());
      }
      continue;
    }
    if (text::trim(line).empty()) continue;
    if (!task || ds.label_names.empty()) throw ParseError(name, line_no, "missing #task= or #labels= header");
    const auto fields = text::split(line, '\t');
    if (fields.size() != 2 && fields.size() != 3) {
      throw ParseError(name, line_no, "expected text<TAB>target[<TAB>split], got " + std::to_string(fields.size()) +
                                          " columns");
    }
    const bool row_split = fields.size() == 3;
    if (has_split && *has_split != row_split) throw ParseError(name, line_no, "split column must be on every row or none");
    has_split = row_split;
    Instance inst{std::string(fields[0]), std::size_t{0}};
    const auto target = text::trim(fields[1]);
    auto lookup = [&](std::string_view label) {
      const auto it = label_index.find(std::string(text::trim(label)));
      if (it == label_index.end()) throw ParseError(name, line_no, "unknown label '" + std::string(label) + "'");
      return it->second;
    };
    try {
      switch (*task) {
        case TaskKind::single_label:
          inst.target = lookup(target);
          break;
        case TaskKind::multi_label: {
          std::set<std::size_t> set;
          if (!target.empty())
            for (auto l : text::split(target, ',')) set.insert(lookup(l));
          inst.target = std::vector<std::size_t>(set.begin(), set.end());
          break;
        }
        case TaskKind::regression: {
          std::vector<double> values;
          for (auto v : text::split(target, ',')) values.push_back(text::parse_double(v, "target value"));
          if (values.size() != ds.label_names.size()) {
            throw ParseError(name, line_no, "expected " + std::to_string(ds.label_names.size()) + " target values");
          }
          inst.target = std::move(values);
          break;
        }
      }
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(name, line_no, e.what());
    }
    if (row_split) {
      const auto part = text::trim(fields[2]);
      const auto index = ds.instances.size();
      if (part == "train") fixed.train.push_back(index);
      else if (part == "dev") fixed.dev.push_back(index);
      else if (part == "test") fixed.test.push_back(index);
      else throw ParseError(name, line_no, "split must be train, dev or test");
    }
    ds.instances.push_back(std::move(inst));
  }
  if (!task || ds.label_names.empty()) throw InputError(name + ": missing #task= or #labels= header");
  ds.task = *task;
  if (has_split && *has_split) ds.split = std::move(fixed);
  ds.validate();
  return ds;
}

AnnotatedDataset read_dataset(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open dataset " + file.string());
  return read_dataset(in, file.stem().string());
}

void write_dataset(std::ostream& out, const AnnotatedDataset& ds, const std::vector<std::string>& header_comments) {
  ds.validate();
  for (const auto& line : header_comments) out << "# " << line << '\n';
  out << "# task=" << to_string(ds.task) << '\n';
  out << "# labels=" << text::join(ds.label_names, ",") << '\n';
  std::vector<const char*> part(ds.instances.size(), nullptr);
  if (ds.split) {
    for (auto i : ds.split->train) part[i] = "train";
    for (auto i : ds.split->dev) part[i] = "dev";
    for (auto i : ds.split->test) part[i] = "test";
  }
  for (std::size_t i = 0; i < ds.instances.size(); ++i) {
    const auto& inst = ds.instances[i];
    if (inst.text.find_first_of("\t\n\r") != std::string::npos) {
      throw InputError(ds.name + ": instance text contains a tab or newline");
    }
    out << inst.text << '\t';
    if (const auto* c = std::get_if<std::size_t>(&inst.target)) {
      out << ds.label_names[*c];
    } else if (const auto* s = std::get_if<std::vector<std::size_t>>(&inst.target)) {
      for (std::size_t j = 0; j < s->size(); ++j) out << (j ? "," : "") << ds.label_names[(*s)[j]];
    } else {
      const auto& v = std::get<std::vector<double>>(inst.target);
      for (std::size_t j = 0; j < v.size(); ++j) out << (j ? "," : "") << text::format_double(v[j]);
    }
    if (ds.split) out << '\t' << part[i];
    out << '\n';
  }
}

AnnotatedDataset split(AnnotatedDataset dataset, std::uint64_t seed, double train_ratio, double dev_fraction) {
  if (dataset.split) return dataset;
  const auto n = dataset.instances.size();
  if (n < 10) throw InputError(dataset.name + ": at least 10 instances are needed to split, got " + std::to_string(n));
  if (!(train_ratio > 0 && train_ratio < 1) || !(dev_fraction >= 0 && dev_fraction < 1)) {
    throw InputError("split ratios must lie in (0, 1)");
  }
  const auto n_train = static_cast<std::size_t>(std::floor(train_ratio * static_cast<double>(n) + 1e-9));
  const auto n_dev = static_cast<std::size_t>(std::floor(dev_fraction * static_cast<double>(n_train) + 1e-9));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  auto rng = numerics::Rng(seed).substream("split");
  rng.shuffle(std::span<std::size_t>(order));
  Split s;
  s.dev.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_dev));
  s.train.assign(order.begin() + static_cast<std::ptrdiff_t>(n_dev), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  for (auto* part : {&s.train, &s.dev, &s.test}) std::sort(part->begin(), part->end());
  dataset.split = std::move(s);
  return dataset;
}

Eigen::VectorXd predict_proba(const LinearModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.features()) {
    throw InputError("feature vector has " + std::to_string(x.size()) + " entries, model expects " +
                     std::to_string(model.features()));
  }
  const VectorXd scores = model.weight * x + model.bias;
  switch (model.task) {
    case TaskKind::single_label: return softmax(scores);
    case TaskKind::multi_label: return scores.unaryExpr([](double s) { return sigmoid(s); });
    case TaskKind::regression: break;
  }
  throw InputError("regression models have no class probabilities");
}

Target predict(const LinearModel& model, const Eigen::VectorXd& x) {
  if (model.task == TaskKind::regression) {
    if (x.size() != model.features()) throw InputError("feature vector does not match the model");
    const VectorXd y = model.weight * x + model.bias;
    return std::vector<double>(y.data(), y.data() + y.size());
  }
  const VectorXd p = predict_proba(model, x);
  if (model.task == TaskKind::single_label) {
    // Argmax on raw scores; the lowest index wins ties.
    const VectorXd scores = model.weight * x + model.bias;
    std::size_t best = 0;
    for (Eigen::Index k = 1; k < scores.size(); ++k)
      if (scores(k) > scores(static_cast<Eigen::Index>(best))) best = static_cast<std::size_t>(k);
    return best;
  }
  std::vector<std::size_t> chosen;
  for (Eigen::Index k = 0; k < p.size(); ++k)
    if (p(k) >= 0.5) chosen.push_back(static_cast<std::size_t>(k));
  return chosen;
}

std::vector<Target> predict(const LinearModel& model, const Eigen::MatrixXd& x) {
  std::vector<Target> out;
  out.reserve(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) out.push_back(predict(model, VectorXd(x.row(i).transpose())));
  return out;
}

double binary_logistic_objective(const Eigen::MatrixXd& x, std::span<const int> y, const Eigen::VectorXd& w, double b,
                                 double c) {
  double loss = 0.5 * w.squaredNorm();
  const VectorXd z = (x * w).array() + b;
  for (Eigen::Index i = 0; i < x.rows(); ++i) loss += c * softplus(-(y[static_cast<std::size_t>(i)] == 1 ? 1 : -1) * z(i));
  return loss;
}

double multinomial_logistic_objective(const Eigen::MatrixXd& x, std::span<const std::size_t> y, const Eigen::MatrixXd& w,
                                      const Eigen::VectorXd& b, double c) {
  double loss = 0.5 * w.squaredNorm();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const VectorXd z = w * x.row(i).transpose() + b;
    const double m = z.maxCoeff();
    loss += c * (m + std::log((z.array() - m).exp().sum()) - z(static_cast<Eigen::Index>(y[static_cast<std::size_t>(i)])));
  }
  return loss;
}

double logistic_objective(const LinearModel& model, const Eigen::MatrixXd& x, std::span<const std::size_t> y) {
  if (model.task != TaskKind::single_label) throw InputError("logistic_objective needs a single-label model");
  if (model.classes() == 2) {
    std::vector<int> labels(y.begin(), y.end());
    const VectorXd w = model.weight.row(1).transpose() - model.weight.row(0).transpose();
    return binary_logistic_objective(x, labels, w, model.bias(1) - model.bias(0), model.c);
  }
  return multinomial_logistic_objective(x, y, model.weight, model.bias, model.c);
}

LinearModel fit_logistic(const Eigen::MatrixXd& x, std::span<const Target> targets, TaskKind task, std::size_t classes,
                         double c) {
  check_rows(x, targets.size());
  if (!(c > 0)) throw InputError("C must be positive");
  if (classes < 2) throw InputError("logistic regression needs at least two classes");
  const auto f = x.cols();
  const auto k = static_cast<Eigen::Index>(classes);
  LinearModel model{task, MatrixXd::Zero(k, f), VectorXd::Zero(k), c, {}};

  if (task == TaskKind::multi_label) {
    for (Eigen::Index j = 0; j < k; ++j) {
      std::vector<int> y(targets.size());
      int positives = 0;
      for (std::size_t i = 0; i < targets.size(); ++i) {
        const auto& set = target_as<std::vector<std::size_t>>(targets[i], "a label set");
        y[i] = std::binary_search(set.begin(), set.end(), static_cast<std::size_t>(j)) ? 1 : 0;
        positives += y[i];
      }
      const auto n = static_cast<int>(targets.size());
      if (positives == 0 || positives == n) {
        // No decision boundary to learn: fall back to the smoothed prior.
        const double p = (positives + 0.5) / (n + 1.0);
        model.bias(j) = std::log(p / (1.0 - p));
        model.fits.push_back({0, 0.0, false});
        continue;
      }
      FitInfo info;
      const auto [w, b] = fit_binary(x, y, c, info);
      model.weight.row(j) = w.transpose();
      model.bias(j) = b;
      model.fits.push_back(info);
    }
    return model;
  }
  if (task != TaskKind::single_label) throw InputError("fit_logistic handles classification tasks only");

  std::vector<std::size_t> y(targets.size());
  std::set<std::size_t> present;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    y[i] = target_as<std::size_t>(targets[i], "a class index");
    if (y[i] >= classes) throw InputError("class index out of range");
    present.insert(y[i]);
  }
  if (present.size() < 2) throw InputError("training data holds a single class; logistic regression needs two");

  if (classes == 2) {
    std::vector<int> labels(y.begin(), y.end());
    FitInfo info;
    const auto [w, b] = fit_binary(x, labels, c, info);
    model.weight.row(0) = -0.5 * w.transpose();
    model.weight.row(1) = 0.5 * w.transpose();
    model.bias(0) = -0.5 * b;
    model.bias(1) = 0.5 * b;
    model.fits.push_back(info);
    return model;
  }

  const auto n = x.rows();
  MatrixXd onehot = MatrixXd::Zero(n, k);
  for (Eigen::Index i = 0; i < n; ++i) onehot(i, static_cast<Eigen::Index>(y[static_cast<std::size_t>(i)])) = 1.0;
  const Objective objective = [&](const VectorXd& theta, VectorXd& grad) {
    const Eigen::Map<const MatrixXd> w(theta.data(), k, f);
    const auto b = theta.tail(k);
    MatrixXd z = x * w.transpose();
    z.rowwise() += b.transpose();
    double loss = 0.5 * w.squaredNorm();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = z.row(i).maxCoeff();
      const double target = z(i, static_cast<Eigen::Index>(y[static_cast<std::size_t>(i)]));
      z.row(i) = (z.row(i).array() - m).exp();
      const double total = z.row(i).sum();
      loss += c * (m + std::log(total) - target);
      z.row(i) /= total;
    }
    const MatrixXd g = c * (z - onehot);
    grad.resize(theta.size());
    Eigen::Map<MatrixXd>(grad.data(), k, f) = w + g.transpose() * x;
    grad.tail(k) = g.colwise().sum().transpose();
    return loss;
  };
  VectorXd theta = VectorXd::Zero(k * f + k);
  model.fits.push_back(minimize(objective, theta));
  model.weight = Eigen::Map<const MatrixXd>(theta.data(), k, f);
  model.bias = theta.tail(k);
  return model;
}

LinearModel fit_linear(const Eigen::MatrixXd& x, std::span<const Target> targets) {
  check_rows(x, targets.size());
  if (targets.size() < 2) throw InputError("linear regression needs at least two training rows");
  const auto k = static_cast<Eigen::Index>(target_as<std::vector<double>>(targets[0], "a real vector").size());
  const auto n = x.rows();
  MatrixXd y(n, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& v = target_as<std::vector<double>>(targets[static_cast<std::size_t>(i)], "a real vector");
    if (static_cast<Eigen::Index>(v.size()) != k) throw InputError("regression targets differ in length");
    for (Eigen::Index j = 0; j < k; ++j) y(i, j) = v[static_cast<std::size_t>(j)];
  }
  // Centering removes the intercept from the normal equations, so only the
  // slopes see the 1e-8 stabilizer. Two refinement sweeps against the
  // unstabilized system then remove the bias the stabilizer introduces.
  const VectorXd x_mean = x.colwise().mean().transpose();
  const VectorXd y_mean = y.colwise().mean().transpose();
  const MatrixXd xc = x.rowwise() - x_mean.transpose();
  const MatrixXd yc = y.rowwise() - y_mean.transpose();
  const MatrixXd gram = xc.transpose() * xc;
  const MatrixXd rhs = xc.transpose() * yc;
  const Eigen::LDLT<MatrixXd> solver(gram + 1e-8 * MatrixXd::Identity(x.cols(), x.cols()));
  MatrixXd w = solver.solve(rhs);
  for (int sweep = 0; sweep < 2; ++sweep) w += solver.solve(rhs - gram * w);
  LinearModel model{TaskKind::regression, w.transpose(), y_mean - w.transpose() * x_mean, 0.0, {}};
  model.fits.assign(static_cast<std::size_t>(k), FitInfo{3, 0.0, true});
  return model;
}

std::vector<double> EvalReport::data_points(TaskKind task) const {
  if (task == TaskKind::single_label) return {value};
  std::vector<double> out;
  for (const auto& b : breakdown)
    if (b) out.push_back(*b);
  return out;
}

double jaccard(const std::vector<std::size_t>& predicted, const std::vector<std::size_t>& gold) {
  const std::set<std::size_t> p(predicted.begin(), predicted.end()), g(gold.begin(), gold.end());
  if (p.empty() && g.empty()) return 1.0;
  std::size_t shared = 0;
  for (auto v : p) shared += g.count(v);
  return static_cast<double>(shared) / static_cast<double>(p.size() + g.size() - shared);
}

EvalReport score(std::span<const Target> predictions, std::span<const Target> gold, TaskKind task,
                 const std::vector<std::string>& label_names) {
  if (predictions.size() != gold.size()) throw InputError("predictions and gold differ in length");
  if (gold.empty()) throw InputError("empty evaluation set");
  const auto n = gold.size();
  const auto k = label_names.size();
  EvalReport r;
  r.breakdown_labels = label_names;
  switch (task) {
    case TaskKind::single_label: {
      r.metric = "accuracy";
      std::vector<std::size_t> hits(k, 0), totals(k, 0);
      std::size_t correct = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto g = target_as<std::size_t>(gold[i], "a class index");
        const auto p = target_as<std::size_t>(predictions[i], "a class index");
        if (g >= k) throw InputError("gold class out of range");
        ++totals[g];
        if (p == g) {
          ++correct;
          ++hits[g];
        }
      }
      r.value = static_cast<double>(correct) / static_cast<double>(n);
      for (std::size_t j = 0; j < k; ++j) {
        r.breakdown.push_back(totals[j] ? std::optional<double>(static_cast<double>(hits[j]) / static_cast<double>(totals[j]))
                                        : std::nullopt);
      }
      break;
    }
    case TaskKind::multi_label: {
      r.metric = "jaccard_accuracy";
      std::vector<std::size_t> agree(k, 0);
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& g = target_as<std::vector<std::size_t>>(gold[i], "a label set");
        const auto& p = target_as<std::vector<std::size_t>>(predictions[i], "a label set");
        total += jaccard(p, g);
        for (std::size_t j = 0; j < k; ++j) {
          const bool in_g = std::find(g.begin(), g.end(), j) != g.end();
          const bool in_p = std::find(p.begin(), p.end(), j) != p.end();
          agree[j] += in_g == in_p;
        }
      }
      r.value = total / static_cast<double>(n);
      for (std::size_t j = 0; j < k; ++j) r.breakdown.push_back(static_cast<double>(agree[j]) / static_cast<double>(n));
      break;
    }
    case TaskKind::regression: {
      r.metric = "mean_pearson";
      std::vector<double> p(n), g(n);
      double total = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
          const auto& gv = target_as<std::vector<double>>(gold[i], "a real vector");
          const auto& pv = target_as<std::vector<double>>(predictions[i], "a real vector");
          if (gv.size() != k || pv.size() != k) throw InputError("regression vector has the wrong length");
          g[i] = gv[j];
          p[i] = pv[j];
        }
        // Constant predictions or gold leave r undefined; such a dimension counts as 0.
        double rj = 0.0;
        try {
          rj = numerics::pearson(p, g);
        } catch (const DomainError&) {
        }
        r.breakdown.push_back(rj);
        total += rj;
      }
      r.value = total / static_cast<double>(k);
      break;
    }
  }
  return r;
}

double label_overlap(const std::vector<std::string>& lexicon_labels, const std::vector<std::string>& dataset_labels) {
  if (dataset_labels.empty()) throw InputError("dataset label set is empty");
  std::set<std::string> lex;
  for (const auto& l : lexicon_labels) lex.insert(text::to_lower(text::trim(l)));
  std::set<std::string> data;
  for (const auto& l : dataset_labels) data.insert(text::to_lower(text::trim(l)));
  std::size_t shared = 0;
  for (const auto& l : data) shared += lex.count(l);
  return static_cast<double>(shared) / static_cast<double>(data.size());
}

double overlap_accuracy_correlation(std::span<const double> overlaps, std::span<const double> accuracies) {
  if (overlaps.size() != accuracies.size() || overlaps.size() < 3) {
    throw InputError("overlap/accuracy correlation needs two equal-length series of at least 3 values");
  }
  return numerics::pearson(overlaps, accuracies);
}

void export_coefficients(std::ostream& out, const LinearModel& model, const std::vector<std::string>& feature_names,
                         const std::vector<std::string>& class_names, const std::vector<std::string>& header_comments) {
  if (static_cast<Eigen::Index>(feature_names.size()) != model.features() ||
      static_cast<Eigen::Index>(class_names.size()) != model.classes()) {
    throw InputError("coefficient table labels do not match the model shape");
  }
  for (const auto& line : header_comments) out << "# " << line << '\n';
  out << "# bias";
  for (Eigen::Index k = 0; k < model.classes(); ++k) out << '\t' << text::format_double(model.bias(k));
  out << '\n';
  out << "feature";
  for (const auto& c : class_names) out << '\t' << c;
  out << '\n';
  for (Eigen::Index j = 0; j < model.features(); ++j) {
    out << feature_names[static_cast<std::size_t>(j)];
    for (Eigen::Index k = 0; k < model.classes(); ++k) out << '\t' << text::format_double(model.weight(k, j));
    out << '\n';
  }
}

}  // namespace emolex::downstream
