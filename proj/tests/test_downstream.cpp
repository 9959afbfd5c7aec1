#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "emolex/downstream.hpp"
#include "emolex/error.hpp"
#include "emolex/numerics/random.hpp"

using namespace emolex;
using namespace emolex::downstream;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

AnnotatedDataset numbered(std::size_t n) {
  AnnotatedDataset ds;
  ds.name = "toy";
  ds.task = TaskKind::single_label;
  ds.label_names = {"a", "b"};
  for (std::size_t i = 0; i < n; ++i) ds.instances.push_back({"text " + std::to_string(i), i % 2});
  return ds;
}

std::vector<Target> classes(std::initializer_list<std::size_t> ys) {
  std::vector<Target> out;
  for (auto y : ys) out.emplace_back(y);
  return out;
}

// Two-point objective 0.5 w^2 + log(1 + e^{w - b}) + log(1 + e^{-(w + b)}), written out directly.
double two_point_objective(double w, double b) {
  return 0.5 * w * w + std::log1p(std::exp(-w + b)) + std::log1p(std::exp(-(w + b)));
}

// Gaussian elimination with partial pivoting in long double on [X 1]^T [X 1].
std::vector<long double> normal_equations(const MatrixXd& x, const VectorXd& y) {
  const auto n = x.rows();
  const auto p = x.cols() + 1;
  std::vector<std::vector<long double>> a(p, std::vector<long double>(p + 1, 0.0L));
  for (Eigen::Index i = 0; i < n; ++i) {
    std::vector<long double> row(p);
    for (Eigen::Index j = 0; j < x.cols(); ++j) row[j] = x(i, j);
    row[p - 1] = 1.0L;
    for (Eigen::Index r = 0; r < p; ++r) {
      for (Eigen::Index c = 0; c < p; ++c) a[r][c] += row[r] * row[c];
      a[r][p] += row[r] * y(i);
    }
  }
  for (Eigen::Index c = 0; c < p; ++c) {
    Eigen::Index piv = c;
    for (Eigen::Index r = c + 1; r < p; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    for (Eigen::Index r = 0; r < p; ++r) {
      if (r == c) continue;
      const long double f = a[r][c] / a[c][c];
      for (Eigen::Index k = c; k <= p; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<long double> sol(p);
  for (Eigen::Index r = 0; r < p; ++r) sol[r] = a[r][p] / a[r][r];
  return sol;
}

// Gradient of the multinomial objective, written with explicit loops.
double multinomial_gradient_norm(const MatrixXd& x, const std::vector<std::size_t>& y, const MatrixXd& w,
                                 const VectorXd& b) {
  const auto k = w.rows();
  MatrixXd gw = w;
  VectorXd gb = VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    std::vector<double> z(k);
    double mx = -std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < k; ++c) {
      z[c] = b(c);
      for (Eigen::Index j = 0; j < x.cols(); ++j) z[c] += w(c, j) * x(i, j);
      mx = std::max(mx, z[c]);
    }
    double total = 0.0;
    for (auto& v : z) total += (v = std::exp(v - mx));
    for (Eigen::Index c = 0; c < k; ++c) {
      const double r = z[c] / total - (y[i] == static_cast<std::size_t>(c) ? 1.0 : 0.0);
      gb(c) += r;
      for (Eigen::Index j = 0; j < x.cols(); ++j) gw(c, j) += r * x(i, j);
    }
  }
  return std::sqrt(gw.squaredNorm() + gb.squaredNorm());
}

struct Fixture {
  MatrixXd x;
  std::vector<std::size_t> y;
};

Fixture blobs(numerics::Rng& rng, int n, int f, std::size_t k) {
  Fixture out{MatrixXd(n, f), {}};
  for (int i = 0; i < n; ++i) {
    const auto c = static_cast<std::size_t>(rng.below(k));
    out.y.push_back(c);
    for (int j = 0; j < f; ++j) out.x(i, j) = rng.normal() + (j == static_cast<int>(c % f) ? 1.5 : 0.0);
  }
  return out;
}

std::vector<Target> as_targets(const std::vector<std::size_t>& y) {
  std::vector<Target> out;
  for (auto v : y) out.emplace_back(v);
  return out;
}

}  // namespace

TEST_CASE("split sizes") {
  const auto ds = split(numbered(100), 7);
  REQUIRE(ds.split);
  CHECK(ds.split->train.size() == 72);
  CHECK(ds.split->dev.size() == 8);
  CHECK(ds.split->test.size() == 20);
  CHECK_NOTHROW(ds.validate());
  CHECK(split(numbered(100), 7).split == ds.split);
  CHECK(!(split(numbered(100), 8).split == ds.split));
  CHECK_THROWS_AS(split(numbered(9), 7), InputError);
  const auto small = split(numbered(10), 1);
  CHECK(small.split->train.size() + small.split->dev.size() == 8);
  CHECK(small.split->test.size() == 2);
}

TEST_CASE("a shipped split passes through") {
  auto ds = numbered(12);
  ds.split = Split{{0, 1, 2, 3, 4, 5, 6, 7}, {8}, {9, 10, 11}};
  const auto out = split(ds, 3);
  CHECK(out.split == ds.split);
}

TEST_CASE("dataset TSV") {
  const std::string body =
      "# converted by hand\n#task=multi_label\n#labels=anger,joy,fear\n"
      "I am SO angry\tanger\nwhat a day\tjoy,anger\nnothing\t\n";
  std::istringstream in(body);
  const auto ds = read_dataset(in, "ml");
  CHECK(ds.task == TaskKind::multi_label);
  REQUIRE(ds.instances.size() == 3);
  CHECK(std::get<std::vector<std::size_t>>(ds.instances[1].target) == std::vector<std::size_t>{0, 1});
  CHECK(std::get<std::vector<std::size_t>>(ds.instances[2].target).empty());
  CHECK(!ds.split);

  std::ostringstream out;
  write_dataset(out, ds);
  std::istringstream back(out.str());
  const auto again = read_dataset(back, "ml");
  CHECK(again.instances.size() == 3);
  CHECK(again.instances[1].target == ds.instances[1].target);

  std::istringstream reg("#task=regression\n#labels=v,a\nnice\t0.5,0.25\ttrain\nbad\t-1,2\ttest\n");
  const auto r = read_dataset(reg, "reg");
  REQUIRE(r.split);
  CHECK(r.split->train == std::vector<std::size_t>{0});
  CHECK(r.split->test == std::vector<std::size_t>{1});
  CHECK(std::get<std::vector<double>>(r.instances[1].target) == std::vector<double>{-1.0, 2.0});

  auto line_of = [](const std::string& s) -> std::size_t {
    std::istringstream e(s);
    try {
      read_dataset(e, "bad");
    } catch (const ParseError& err) {
      return err.line();
    }
    return 0;
  };
  CHECK(line_of("#task=single_label\n#labels=a,b\nx\tc\n") == 3);
  CHECK(line_of("#task=single_label\n#labels=a,b\nx\ta\nx\n") == 4);
  CHECK(line_of("#task=regression\n#labels=a,b\nx\t1\n") == 3);
  CHECK(line_of("x\ta\n") == 1);
  CHECK(line_of("#task=single_label\n#labels=a\nx\ta\ttrain\ny\ta\n") == 4);
  CHECK(line_of("#task=ordinal\n") == 1);
}

TEST_CASE("logistic on zero features predicts class priors") {
  const MatrixXd x = MatrixXd::Zero(10, 3);
  const auto y = classes({0, 0, 0, 0, 0, 1, 1, 1, 2, 2});
  const auto model = fit_logistic(x, y, TaskKind::single_label, 3);
  CHECK(model.weight.isZero(1e-12));
  const auto p = predict_proba(model, VectorXd::Zero(3));
  CHECK(p(0) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(p(1) == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(p(2) == doctest::Approx(0.2).epsilon(1e-6));

  const auto binary = fit_logistic(MatrixXd::Zero(4, 2), classes({0, 1, 1, 1}), TaskKind::single_label, 2);
  CHECK(predict_proba(binary, VectorXd::Zero(2))(1) == doctest::Approx(0.75).epsilon(1e-6));
  CHECK_THROWS_AS(fit_logistic(x, classes({1, 1, 1, 1, 1, 1, 1, 1, 1, 1}), TaskKind::single_label, 3), InputError);
}

TEST_CASE("logistic one-dimensional fixture against a grid") {
  const MatrixXd x = (MatrixXd(2, 1) << -1.0, 1.0).finished();
  const auto model = fit_logistic(x, classes({0, 1}), TaskKind::single_label, 2);
  const std::vector<std::size_t> y{0, 1};
  const double at_solution = logistic_objective(model, x, y);
  double grid_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 2000; ++i)
    for (int j = 0; j <= 2000; ++j) grid_min = std::min(grid_min, two_point_objective(-10 + 0.01 * i, -10 + 0.01 * j));
  CHECK(std::abs(at_solution - grid_min) <= 1e-3);
  CHECK(at_solution <= grid_min + 1e-12);
  CHECK(model.fits.at(0).converged);
}

TEST_CASE("logistic solutions are optimal") {
  numerics::Rng rng(31);
  for (std::size_t k : {2, 3, 4}) {
    const auto data = blobs(rng, 60, 3, k);
    const auto model = fit_logistic(data.x, as_targets(data.y), TaskKind::single_label, k);
    const double best = logistic_objective(model, data.x, data.y);
    LinearModel zero = model;
    zero.weight.setZero();
    zero.bias.setZero();
    CHECK(best <= logistic_objective(zero, data.x, data.y));
    for (int probe = 0; probe < 1000; ++probe) {
      LinearModel other = model;
      const double spread = probe % 2 ? 0.05 : 2.0;
      for (Eigen::Index i = 0; i < other.weight.size(); ++i) other.weight.data()[i] += spread * rng.normal();
      for (Eigen::Index i = 0; i < other.bias.size(); ++i) other.bias(i) += spread * rng.normal();
      if (k == 2) {
        // Keep the stored +-w/2 structure the binary objective reads.
        other.weight.row(0) = -other.weight.row(1);
        other.bias(0) = -other.bias(1);
      }
      CHECK(best <= logistic_objective(other, data.x, data.y) + 1e-12);
    }
    REQUIRE(model.fits.size() == 1);
    CHECK(model.fits[0].converged);
    if (k > 2) {
      const double theta = std::sqrt(model.weight.squaredNorm() + model.bias.squaredNorm());
      CHECK(multinomial_gradient_norm(data.x, data.y, model.weight, model.bias) <= 1e-6 * std::max(1.0, theta) * 1.01);
    }
  }
}

TEST_CASE("permuting labels permutes the weights") {
  numerics::Rng rng(17);
  const auto data = blobs(rng, 80, 3, 3);
  const std::vector<std::size_t> perm{2, 0, 1};
  std::vector<std::size_t> permuted;
  for (auto y : data.y) permuted.push_back(perm[y]);
  const auto a = fit_logistic(data.x, as_targets(data.y), TaskKind::single_label, 3);
  const auto b = fit_logistic(data.x, as_targets(permuted), TaskKind::single_label, 3);
  for (std::size_t c = 0; c < 3; ++c) {
    for (Eigen::Index j = 0; j < 3; ++j)
      CHECK(b.weight(static_cast<Eigen::Index>(perm[c]), j) == doctest::Approx(a.weight(static_cast<Eigen::Index>(c), j)).epsilon(1e-4));
  }
  const auto pa = predict(a, data.x);
  const auto pb = predict(b, data.x);
  const std::vector<std::string> names{"a", "b", "c"};
  std::vector<Target> gold_b;
  for (auto y : permuted) gold_b.emplace_back(y);
  CHECK(score(pa, as_targets(data.y), TaskKind::single_label, names).value ==
        score(pb, gold_b, TaskKind::single_label, names).value);

  const auto two = blobs(rng, 50, 2, 2);
  std::vector<std::size_t> flipped;
  for (auto y : two.y) flipped.push_back(1 - y);
  const auto m0 = fit_logistic(two.x, as_targets(two.y), TaskKind::single_label, 2);
  const auto m1 = fit_logistic(two.x, as_targets(flipped), TaskKind::single_label, 2);
  CHECK((m0.weight.row(0) - m1.weight.row(1)).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("multi-label logistic is one-vs-rest") {
  numerics::Rng rng(9);
  MatrixXd x(40, 2);
  std::vector<Target> y;
  for (int i = 0; i < 40; ++i) {
    x(i, 0) = rng.normal();
    x(i, 1) = rng.normal();
    std::vector<std::size_t> set;
    if (x(i, 0) + 0.3 * rng.normal() > 0) set.push_back(0);
    if (x(i, 1) + 0.3 * rng.normal() > 0) set.push_back(1);
    y.emplace_back(set);
  }
  const auto model = fit_logistic(x, y, TaskKind::multi_label, 3);
  CHECK(model.fits.size() == 3);
  CHECK(model.fits[0].converged);
  CHECK(model.fits[1].converged);
  CHECK(!model.fits[2].converged);  // never positive: smoothed prior
  CHECK(model.weight.row(2).isZero(0.0));
  CHECK(model.bias(2) < 0);
  CHECK(model.weight(0, 0) > 0);
  CHECK(model.weight(1, 1) > 0);
}

TEST_CASE("fit_linear") {
  const MatrixXd x = (MatrixXd(2, 1) << 0.0, 1.0).finished();
  std::vector<Target> y{std::vector<double>{0.0}, std::vector<double>{2.0}};
  const auto m = fit_linear(x, y);
  CHECK(std::abs(m.weight(0, 0) - 2.0) <= 1e-8);
  CHECK(std::abs(m.bias(0)) <= 1e-8);

  const MatrixXd xs = (MatrixXd(3, 2) << 1, 2, 3, 5, -1, 0).finished();
  std::vector<Target> flat(3, std::vector<double>{4.5, -1.0});
  const auto c = fit_linear(xs, flat);
  CHECK(c.weight.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(c.bias(0) == doctest::Approx(4.5).epsilon(1e-14));
  CHECK(c.bias(1) == doctest::Approx(-1.0).epsilon(1e-14));

  numerics::Rng rng(44);
  for (int trial = 0; trial < 10; ++trial) {
    MatrixXd a(20, 5);
    VectorXd t(20);
    std::vector<Target> targets;
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 5; ++j) a(i, j) = rng.normal();
      t(i) = rng.normal() * 3;
      targets.emplace_back(std::vector<double>{t(i)});
    }
    const auto fit = fit_linear(a, targets);
    const auto ref = normal_equations(a, t);
    for (int j = 0; j < 5; ++j) CHECK(std::abs(fit.weight(0, j) - static_cast<double>(ref[j])) <= 1e-6);
    CHECK(std::abs(fit.bias(0) - static_cast<double>(ref[5])) <= 1e-6);
  }
  CHECK_THROWS_AS(fit_linear(MatrixXd::Zero(1, 1), std::vector<Target>{std::vector<double>{1.0}}), InputError);
}

TEST_CASE("predict") {
  LinearModel zero{TaskKind::single_label, MatrixXd::Zero(3, 2), VectorXd::Zero(3), 1.0, {}};
  const VectorXd x = (VectorXd(2) << 0.3, -1.2).finished();
  const auto p = predict_proba(zero, x);
  for (int k = 0; k < 3; ++k) CHECK(p(k) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(std::get<std::size_t>(predict(zero, x)) == 0);

  LinearModel m{TaskKind::single_label, (MatrixXd(3, 2) << 1, 2, -1, 0.5, 0, -3).finished(),
                (VectorXd(3) << 0.1, 0.2, -0.3).finished(), 1.0, {}};
  const double s0 = 1 * 0.3 + 2 * -1.2 + 0.1, s1 = -0.3 + 0.5 * -1.2 + 0.2, s2 = -3 * -1.2 - 0.3;
  const double z = std::exp(s0) + std::exp(s1) + std::exp(s2);
  const auto q = predict_proba(m, x);
  CHECK(std::abs(q(0) - std::exp(s0) / z) <= 1e-12);
  CHECK(std::abs(q(1) - std::exp(s1) / z) <= 1e-12);
  CHECK(std::abs(q(2) - std::exp(s2) / z) <= 1e-12);
  CHECK(std::get<std::size_t>(predict(m, x)) == 2);
  for (double shift : {-50.0, 3.0, 1e3}) {
    auto shifted = m;
    shifted.bias.array() += shift;
    CHECK(std::get<std::size_t>(predict(shifted, x)) == 2);
  }

  LinearModel ml{TaskKind::multi_label, MatrixXd::Zero(2, 2), (VectorXd(2) << -0.1, -2.0).finished(), 1.0, {}};
  CHECK(std::get<std::vector<std::size_t>>(predict(ml, x)).empty());
  ml.bias(0) = 0.0;
  CHECK(std::get<std::vector<std::size_t>>(predict(ml, x)) == std::vector<std::size_t>{0});
  CHECK_THROWS_AS(predict(m, VectorXd(VectorXd::Zero(5))), InputError);
}

TEST_CASE("score") {
  const std::vector<std::string> names{"a", "b", "c"};
  const auto r = score(classes({0, 1, 2, 2}), classes({0, 1, 2, 0}), TaskKind::single_label, names);
  CHECK(r.metric == "accuracy");
  CHECK(r.value == 0.75);
  CHECK(*r.breakdown[0] == 0.5);
  CHECK(r.data_points(TaskKind::single_label) == std::vector<double>{0.75});

  CHECK(jaccard({0, 1}, {1, 2}) == 1.0 / 3.0);
  CHECK(jaccard({}, {}) == 1.0);
  CHECK(jaccard({}, {1}) == 0.0);
  const std::vector<Target> pred{std::vector<std::size_t>{0, 1}, std::vector<std::size_t>{}};
  const std::vector<Target> gold{std::vector<std::size_t>{1, 2}, std::vector<std::size_t>{}};
  const auto ml = score(pred, gold, TaskKind::multi_label, names);
  CHECK(ml.metric == "jaccard_accuracy");
  CHECK(ml.value == (1.0 / 3.0 + 1.0) / 2.0);
  CHECK(ml.data_points(TaskKind::multi_label) == std::vector<double>{0.5, 1.0, 0.5});

  const std::vector<Target> reg{std::vector<double>{1, 5}, std::vector<double>{2, 3}, std::vector<double>{4, 4}};
  const auto rr = score(reg, reg, TaskKind::regression, {"v", "a"});
  CHECK(rr.metric == "mean_pearson");
  CHECK(rr.value == doctest::Approx(1.0).epsilon(1e-15));
  const std::vector<Target> constant(3, std::vector<double>{1, 1});
  CHECK(score(constant, reg, TaskKind::regression, {"v", "a"}).value == 0.0);

  CHECK_THROWS_AS(score({}, {}, TaskKind::single_label, names), InputError);
  CHECK_THROWS_AS(score(classes({0}), classes({0, 1}), TaskKind::single_label, names), InputError);
}

TEST_CASE("Jaccard equals accuracy on singleton sets and scores stay in bounds") {
  numerics::Rng rng(13);
  const std::vector<std::string> names{"a", "b", "c", "d"};
  for (int t = 0; t < 200; ++t) {
    const auto n = 1 + rng.below(30);
    std::vector<Target> ps, gs, pm, gm;
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = static_cast<std::size_t>(rng.below(4)), g = static_cast<std::size_t>(rng.below(4));
      ps.emplace_back(p);
      gs.emplace_back(g);
      pm.emplace_back(std::vector<std::size_t>{p});
      gm.emplace_back(std::vector<std::size_t>{g});
    }
    const auto acc = score(ps, gs, TaskKind::single_label, names).value;
    CHECK(score(pm, gm, TaskKind::multi_label, names).value == doctest::Approx(acc).epsilon(1e-15));
    CHECK((acc >= 0.0 && acc <= 1.0));
    std::vector<Target> rp, rg;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::size_t> a, b;
      for (std::size_t k = 0; k < 4; ++k) {
        if (rng.below(2)) a.push_back(k);
        if (rng.below(2)) b.push_back(k);
      }
      rp.emplace_back(a);
      rg.emplace_back(b);
    }
    const auto j = score(rp, rg, TaskKind::multi_label, names).value;
    CHECK((j >= 0.0 && j <= 1.0));
  }
}

TEST_CASE("label overlap") {
  const std::vector<std::string> intensity{"anger", "fear", "sadness", "joy"};
  const std::vector<std::string> electoral{"acceptance", "admiration", "amazement", "anger", "anticipation",
                                           "calmness", "disappointment", "disgust", "dislike", "fear",
                                           "hate", "indifference", "joy", "like", "sadness",
                                           "surprise", "trust", "uncertainty", "vigilance"};
  CHECK(electoral.size() == 19);
  CHECK(label_overlap(intensity, electoral) == 4.0 / 19.0);
  CHECK(std::abs(label_overlap(intensity, electoral) - 0.21) < 0.005);
  CHECK(label_overlap({"Anger", "JOY"}, {"anger", "joy"}) == 1.0);
  CHECK(label_overlap({"x"}, {"anger", "joy"}) == 0.0);
  CHECK_THROWS_AS(label_overlap({"x"}, {}), InputError);
}

TEST_CASE("overlap-accuracy correlation") {
  const std::vector<double> overlaps{0.1, 0.4, 0.2, 0.9, 0.5, 0.0, 0.3, 0.6};
  std::vector<double> acc;
  for (double o : overlaps) acc.push_back(0.3 + 0.5 * o);
  CHECK(overlap_accuracy_correlation(overlaps, acc) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(overlap_accuracy_correlation(overlaps, std::vector<double>(8, 0.5)), DomainError);
  CHECK_THROWS_AS(overlap_accuracy_correlation(std::vector<double>{1, 2}, std::vector<double>{1, 2}), InputError);
}

TEST_CASE("export_coefficients") {
  LinearModel zero{TaskKind::single_label, MatrixXd::Zero(2, 3), VectorXd::Zero(2), 1.0, {}};
  std::ostringstream out;
  export_coefficients(out, zero, {"a:x", "a:y", "b:z"}, {"neg", "pos"});
  CHECK(out.str() == "# bias\t0\t0\nfeature\tneg\tpos\na:x\t0\t0\na:y\t0\t0\nb:z\t0\t0\n");

  const MatrixXd x = (MatrixXd(4, 2) << 1, 0, 0, 1, 2, 1, -1, 0.5).finished();
  const auto m = fit_logistic(x, classes({1, 0, 1, 0}), TaskKind::single_label, 2);
  std::ostringstream table;
  export_coefficients(table, m, {"f1", "f2"}, {"c0", "c1"});
  std::istringstream in(table.str());
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::string name, a, b;
    std::getline(cells, name, '\t');
    std::getline(cells, a, '\t');
    std::getline(cells, b, '\t');
    CHECK(std::stod(a) == m.weight(0, rows));
    CHECK(std::stod(b) == m.weight(1, rows));
    ++rows;
  }
  CHECK(rows == 2);
  CHECK_THROWS_AS(export_coefficients(table, m, {"f1"}, {"c0", "c1"}), InputError);
}
