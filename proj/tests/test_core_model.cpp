#include <doctest.h>

#include <cmath>

#include "pzsc/core_model.hpp"
#include "pzsc/error.hpp"
#include "test_util.hpp"

using namespace pzsc;
using pzsc::testing::random_matrix;
using pzsc::testing::random_model;

namespace {

// d = 1, d_T = 2, d_P = 2, P = 1, Wt = [1 2], Wx = [3 4].
ModelParams tiny_model() {
  ModelParams m;
  m.wt = Matrix{{1.0, 2.0}};
  m.wx = {Matrix{{3.0, 4.0}}};
  m.part_names = {"head"};
  m.vocab = {"red", "wing"};
  return m;
}

ModelParams scalar_model() {
  ModelParams m;
  m.wt = Matrix::Constant(1, 1, 1.0);
  m.wx = {Matrix::Constant(1, 1, 1.0)};
  m.part_names = {"p"};
  m.vocab = {"t"};
  return m;
}

PartFeatureSet single_part(const Matrix& x) {
  PartFeatureSet f;
  f.parts = {"p"};
  f.features = {x};
  f.missing = {std::vector<bool>(static_cast<std::size_t>(x.cols()), false)};
  for (Index n = 0; n < x.cols(); ++n) f.sample_ids.push_back("s" + std::to_string(n));
  return f;
}

}  // namespace

TEST_CASE("synthesize_part_classifiers matches a hand multiply") {
  const auto z = synthesize_part_classifiers(tiny_model(), Vector{{1.0, 1.0}});
  REQUIRE(z.size() == 1);
  // Wt t = 1 + 2 = 3, Wx^T * 3 = (9, 12)
  CHECK(z[0](0) == 9.0);
  CHECK(z[0](1) == 12.0);
}

TEST_CASE("synthesize_part_classifiers is linear in the text") {
  Rng rng(3);
  const auto model = random_model(rng, 4, 6, 5, 3);
  for (const auto& z : synthesize_part_classifiers(model, Vector::Zero(6))) {
    CHECK(z.isZero(0.0));
  }
  const Vector t = random_matrix(rng, 6, 1).col(0);
  const auto base = synthesize_part_classifiers(model, t);
  const auto scaled = synthesize_part_classifiers(model, 2.5 * t);
  for (std::size_t p = 0; p < base.size(); ++p) {
    CHECK((scaled[p] - 2.5 * base[p]).norm() <= 1e-12 * (1.0 + base[p].norm()));
  }
  CHECK_THROWS_AS(synthesize_part_classifiers(model, Vector::Zero(5)), InputError);
}

TEST_CASE("score_classes") {
  const auto model = tiny_model();
  const Matrix text{{1.0}, {1.0}};

  SUBCASE("single class single part is a dot product") {
    const Vector s = score_classes(model, text, {Vector{{1.0, 0.0}}}, {false});
    CHECK(s(0) == 9.0);
  }
  SUBCASE("missing parts contribute nothing") {
    const Vector s = score_classes(model, text, {Vector{{1.0, 0.0}}}, {true});
    CHECK(s(0) == 0.0);
  }
  SUBCASE("duplicated class column gets the same score") {
    const Matrix two{{1.0, 1.0}, {1.0, 1.0}};
    const Vector s = score_classes(model, two, {Vector{{0.3, -0.7}}}, {false});
    CHECK(s(0) == s(1));
  }
  SUBCASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(score_classes(model, Matrix::Ones(3, 1), {Vector{{1.0, 0.0}}}, {false}),
                    InputError);
    CHECK_THROWS_AS(score_classes(model, text, {Vector{{1.0}}}, {false}), InputError);
  }
}

TEST_CASE("score_classes is linear in each part and each class text") {
  Rng rng(11);
  const auto model = random_model(rng, 3, 7, 4, 2);
  const Matrix text = random_matrix(rng, 7, 5).cwiseAbs();
  std::vector<Vector> x = {random_matrix(rng, 4, 1).col(0), random_matrix(rng, 4, 1).col(0)};
  const Vector x0b = random_matrix(rng, 4, 1).col(0);
  const Vector base = score_classes(model, text, x, {false, false});

  auto xa = x;
  xa[0] = 2.0 * x[0] + x0b;
  auto xb = x;
  xb[0] = x0b;
  const Vector lhs = score_classes(model, text, xa, {false, false});
  // f(2a + b) = 2 f(a) + f(b) - f(0) for the affine-in-one-part map
  auto x_zero = x;
  x_zero[0].setZero();
  const Vector rhs = 2.0 * base + score_classes(model, text, xb, {false, false}) -
                     2.0 * score_classes(model, text, x_zero, {false, false});
  CHECK((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));

  Matrix text2 = text;
  text2.col(2) *= 3.0;
  const Vector s2 = score_classes(model, text2, x, {false, false});
  CHECK(std::abs(s2(2) - 3.0 * base(2)) <= 1e-10 * (1.0 + std::abs(base(2))));
  CHECK(s2(0) == base(0));
}

TEST_CASE("score_matrix agrees with per-sample scoring") {
  Rng rng(5);
  const auto model = random_model(rng, 3, 6, 4, 2);
  const auto prob = pzsc::testing::random_problem(rng, 6, 4, 2, 9, 3, true);
  const Matrix all = score_matrix(model, prob.text, prob.features);
  for (Index n = 0; n < 9; ++n) {
    std::vector<Vector> parts;
    std::vector<bool> missing;
    for (Index p = 0; p < 2; ++p) {
      parts.emplace_back(prob.features.features[p].col(n));
      missing.push_back(prob.features.missing[p][n]);
    }
    const Vector s = score_classes(model, prob.text, parts, missing);
    CHECK((all.row(n).transpose() - s).norm() <= 1e-12 * (1.0 + s.norm()));
  }
}

TEST_CASE("predict_label argmax and tie-break") {
  CHECK(argmax_lowest(Vector{{0.2, 0.9, 0.1}}) == 1);
  CHECK(argmax_lowest(Vector{{0.5, 0.5}}) == 0);
  CHECK(argmax_lowest(Vector{{-1.0}}) == 0);
  CHECK_THROWS_AS(argmax_lowest(Vector()), InputError);

  const auto model = tiny_model();
  CHECK(predict_label(model, Matrix{{0.3}, {0.1}}, {Vector{{1.0, 1.0}}}, {false}) == 0);
  CHECK_THROWS_AS(predict_label(model, Matrix(2, 0), {Vector{{1.0, 1.0}}}, {false}),
                  InputError);

  // Positive rescaling of scores never changes the winner.
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector s = random_matrix(rng, 6, 1).col(0);
    CHECK(argmax_lowest(s) == argmax_lowest(Vector(s * (0.1 + rng.uniform() * 10.0))));
  }
}

TEST_CASE("objective_value") {
  HyperParams hyper;
  hyper.lambda1 = 1.0;
  hyper.lambda2 = 1.0;

  SUBCASE("scalar instance") {
    // data (2*1*1 - 1)^2 = 1, variance (1*1*1)^2 = 1, group |1*1| = 1
    const auto obj = objective_value(scalar_model(), hyper, Matrix::Ones(1, 1),
                                     Matrix::Ones(1, 1), single_part(Matrix::Constant(1, 1, 2.0)));
    CHECK(obj.data_term == 1.0);
    CHECK(obj.variance_term == 1.0);
    CHECK(obj.group_term == 1.0);
    CHECK(obj.total == 3.0);
  }

  Rng rng(7);
  auto prob = pzsc::testing::random_problem(rng, 5, 3, 2, 8, 4, false);
  auto model = random_model(rng, 2, 5, 3, 2);

  SUBCASE("zero part transforms leave only ||Y||^2 = N") {
    for (auto& w : model.wx) w.setZero();
    const auto obj = objective_value(model, hyper, prob.text, prob.labels, prob.features);
    CHECK(obj.total == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(obj.variance_term == 0.0);
    CHECK(obj.group_term == 0.0);
  }
  SUBCASE("regularizers off") {
    HyperParams off;
    off.lambda1 = off.lambda2 = 0.0;
    const auto obj = objective_value(model, off, prob.text, prob.labels, prob.features);
    CHECK(obj.total == obj.data_term);
  }
  SUBCASE("nonnegative, components add up") {
    const auto obj = objective_value(model, hyper, prob.text, prob.labels, prob.features);
    CHECK(obj.total >= 0.0);
    CHECK(obj.total == doctest::Approx(obj.data_term + obj.variance_term + obj.group_term));
  }
  SUBCASE("non-finite parameters") {
    model.wt(0, 0) = std::nan("");
    CHECK_THROWS_AS(objective_value(model, hyper, prob.text, prob.labels, prob.features),
                    NumericError);
  }
}

TEST_CASE("group norms match a naive double loop") {
  Rng rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const auto model = random_model(rng, 3, 9, 4, 3);
    const Matrix fast = group_norms(model);
    double total = 0.0;
    for (Index p = 0; p < 3; ++p) {
      for (Index i = 0; i < 9; ++i) {
        double sq = 0.0;
        for (Index r = 0; r < 4; ++r) {
          double v = 0.0;
          for (Index j = 0; j < 3; ++j) v += model.wx[p](j, r) * model.wt(j, i);
          sq += v * v;
        }
        CHECK(std::abs(fast(p, i) - std::sqrt(sq)) <= 1e-12);
        total += std::sqrt(sq);
      }
    }
    HyperParams h;
    h.lambda1 = 0.0;
    h.lambda2 = 1.0;
    auto prob = pzsc::testing::random_problem(rng, 9, 4, 3, 5, 2, false);
    const auto obj = objective_value(model, h, prob.text, prob.labels, prob.features);
    CHECK(obj.group_term == doctest::Approx(total).epsilon(1e-12));
  }
}

TEST_CASE("type invariants") {
  PartFeatureSet f = single_part(Matrix::Ones(2, 3));
  f.missing[0][1] = true;
  CHECK_THROWS_AS(f.validate(), InputError);
  f.mark_missing(0, 1);
  CHECK_NOTHROW(f.validate());

  LabelMatrix y = LabelMatrix::from_indices({0, 1, 1}, {"a", "b"});
  CHECK_NOTHROW(y.validate());
  CHECK(y.indices() == std::vector<Index>{0, 1, 1});
  y.values(0, 1) = 1.0;
  CHECK_THROWS_AS(y.validate(), InputError);

  TfIdfMatrix t{Matrix::Ones(2, 1), {"a", "a"}, {"k"}};
  CHECK_THROWS_AS(t.validate(), InputError);
  t.vocab = {"a", "b"};
  t.values(0, 0) = -1.0;
  CHECK_THROWS_AS(t.validate(), InputError);
}
