#include <doctest.h>

#include "pzsc/analysis.hpp"
#include "pzsc/core_model.hpp"
#include "pzsc/trainer.hpp"
#include "test_util.hpp"

using namespace pzsc;
using pzsc::testing::random_matrix;
using pzsc::testing::random_model;

namespace {

std::vector<Index> ids(const std::vector<RankedTerm>& ranked) {
  std::vector<Index> out;
  for (const auto& r : ranked) out.push_back(r.term);
  return out;
}

}  // namespace

TEST_CASE("connectivity norms match a per-pair loop") {
  Rng rng(41);
  for (int trial = 0; trial < 5; ++trial) {
    const auto model = random_model(rng, 4, 12, 3, 1 + trial % 3);
    const auto report = connectivity(model, 5);
    REQUIRE(report.norms.rows() == model.num_parts());
    for (Index p = 0; p < model.num_parts(); ++p) {
      double mass = 0.0;
      for (Index i = 0; i < model.num_terms(); ++i) {
        double sq = 0.0;
        for (Index c = 0; c < model.part_dim(); ++c) {
          double v = 0.0;
          for (Index r = 0; r < model.latent_dim(); ++r) v += model.wx[p](r, c) * model.wt(r, i);
          sq += v * v;
        }
        CHECK(std::abs(report.norms(p, i) - std::sqrt(sq)) <= 1e-12);
        mass += std::sqrt(sq);
      }
      CHECK(report.part_mass(p) == doctest::Approx(mass));
      REQUIRE(report.top_terms[p].size() == 5);
      double top = 0.0;
      for (std::size_t j = 0; j < 5; ++j) {
        top += report.top_terms[p][j].value;
        if (j > 0) CHECK(report.top_terms[p][j].value <= report.top_terms[p][j - 1].value);
        CHECK(report.top_terms[p][j].name == model.vocab[report.top_terms[p][j].term]);
      }
      CHECK(report.top_k_mass(p) == doctest::Approx(top));
      CHECK(report.overlap(p, p) == 1.0);
    }
  }
}

TEST_CASE("scaling Wt scales norms and keeps rankings") {
  Rng rng(42);
  const auto model = random_model(rng, 4, 20, 3, 3);
  auto scaled = model;
  scaled.wt *= 3.0;
  const auto a = connectivity(model, 6);
  const auto b = connectivity(scaled, 6);
  CHECK((b.norms - 3.0 * a.norms).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(a.overlap == b.overlap);
  for (Index p = 0; p < 3; ++p) CHECK(ids(a.top_terms[p]) == ids(b.top_terms[p]));
}

TEST_CASE("ties rank by vocabulary index and overlap counts shared terms") {
  ModelParams m;
  m.wt = Matrix::Identity(2, 4);
  m.wt(0, 2) = 1.0;   // terms 0 and 2 tie on part 0
  m.wx = {Matrix{{1.0}, {0.0}}, Matrix{{0.0}, {1.0}}};
  m.part_names = {"head", "tail"};
  m.vocab = {"a", "b", "c", "d"};
  const auto report = connectivity(m, 2);
  CHECK(ids(report.top_terms[0]) == std::vector<Index>{0, 2});
  CHECK(ids(report.top_terms[1]) == std::vector<Index>{1, 0});
  CHECK(report.overlap(0, 1) == 0.5);
  CHECK(report.overlap(1, 0) == 0.5);
  CHECK(connectivity(m, 10).k == 4);   // k is capped by d_T
}

TEST_CASE("planted connections are recovered by the report") {
  // term i lives only in part i % 2
  ModelParams m;
  m.wt = Matrix::Zero(4, 6);
  for (Index i = 0; i < 6; ++i) m.wt(i % 2 == 0 ? 0 : 2, i) = 1.0 + i;
  m.wx = {Matrix::Zero(4, 2), Matrix::Zero(4, 2)};
  m.wx[0](0, 0) = 1.0;
  m.wx[1](2, 1) = 1.0;
  m.part_names = {"p0", "p1"};
  m.vocab = {"a", "b", "c", "d", "e", "f"};
  const auto report = connectivity(m, 3);
  for (Index i = 0; i < 6; ++i) {
    Index best;
    report.norms.col(i).maxCoeff(&best);
    CHECK(best == i % 2);
  }
  CHECK(ids(report.top_terms[0]) == std::vector<Index>{4, 2, 0});
}

TEST_CASE("grounding ranks signed contributions to the class score") {
  Rng rng(43);
  const auto model = random_model(rng, 3, 8, 4, 2);
  Vector text = random_matrix(rng, 8, 1).col(0).cwiseAbs();
  text(5) = 0.0;
  const std::vector<Vector> parts{random_matrix(rng, 4, 1).col(0),
                                  random_matrix(rng, 4, 1).col(0)};
  const auto grounded = ground_terms(model, parts, {false, true}, text, 4);
  REQUIRE(grounded.size() == 2);
  CHECK(grounded[1].empty());
  REQUIRE(grounded[0].size() == 4);
  for (const auto& r : grounded[0]) {
    CHECK(r.term != 5);
    const double expected =
        parts[0].dot(model.wx[0].transpose() * model.wt.col(r.term)) * text(r.term);
    CHECK(r.value == doctest::Approx(expected));
  }
  for (std::size_t j = 1; j < grounded[0].size(); ++j) {
    CHECK(grounded[0][j].value <= grounded[0][j - 1].value);
  }
  // summed over every term, the contributions give the part's share of the score
  const auto all = ground_terms(model, parts, {false, true}, text, 8);
  double total = 0.0;
  for (const auto& r : all[0]) total += r.value;
  const Vector score = score_classes(model, text, parts, {false, true});
  CHECK(total == doctest::Approx(score(0)));
}
