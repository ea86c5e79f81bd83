// Shared helpers for the unit tests.

#ifndef PZSC_TEST_UTIL_HPP
#define PZSC_TEST_UTIL_HPP

#include <filesystem>
#include <string>

#include "pzsc/bundle.hpp"
#include "pzsc/rng.hpp"
#include "pzsc/synthetic.hpp"
#include "pzsc/trainer.hpp"

namespace pzsc::testing {

inline Matrix random_matrix(Rng& rng, Index rows, Index cols, double scale = 1.0) {
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) m(r, c) = scale * rng.normal();
  }
  return m;
}

// Random problem with one-hot labels cycling through the classes, nonnegative
// text and, optionally, some missing parts.
inline TrainingProblem random_problem(Rng& rng, Index num_terms, Index part_dim,
                                      Index parts, Index samples, Index classes,
                                      bool with_missing) {
  TrainingProblem prob;
  prob.text = random_matrix(rng, num_terms, classes).cwiseAbs();
  std::vector<Index> labels;
  for (Index n = 0; n < samples; ++n) labels.push_back(n % classes);
  std::vector<std::string> ids;
  for (Index k = 0; k < classes; ++k) ids.push_back("c" + std::to_string(k));
  prob.labels = LabelMatrix::from_indices(labels, ids).values;
  for (Index p = 0; p < parts; ++p) {
    prob.features.parts.push_back("p" + std::to_string(p));
    prob.features.features.push_back(random_matrix(rng, part_dim, samples));
    prob.features.missing.emplace_back(static_cast<std::size_t>(samples), false);
  }
  for (Index n = 0; n < samples; ++n) prob.features.sample_ids.push_back("s" + std::to_string(n));
  if (with_missing) {
    for (Index n = 0; n < samples; n += 3) prob.features.mark_missing(n % parts, n);
  }
  return prob;
}

inline ModelParams random_model(Rng& rng, Index latent, Index num_terms,
                                Index part_dim, Index parts) {
  ModelParams m;
  m.wt = random_matrix(rng, latent, num_terms, 0.5);
  for (Index p = 0; p < parts; ++p) {
    m.wx.push_back(random_matrix(rng, latent, part_dim, 0.5));
    m.part_names.push_back("p" + std::to_string(p));
  }
  for (Index i = 0; i < num_terms; ++i) m.vocab.push_back("t" + std::to_string(i));
  return m;
}

// All samples and classes of a bundle as one training problem.
inline TrainingProblem problem_from_bundle(const DatasetBundle& bundle) {
  TrainingProblem prob;
  prob.text = bundle.text->values;
  prob.labels = bundle.labels.values;
  prob.features = bundle.features;
  return prob;
}

inline SyntheticSpec small_synthetic(std::uint64_t seed) {
  SyntheticSpec spec;
  spec.num_classes = 8;
  spec.num_super_categories = 2;
  spec.samples_per_class = 6;
  spec.num_parts = 2;
  spec.part_dim = 6;
  spec.num_terms = 20;
  spec.planted_terms = 10;
  spec.active_terms_per_class = 3;
  spec.background_terms_per_class = 2;
  spec.seed = seed;
  return spec;
}

// Fresh empty directory under the system temp dir.
inline std::string scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("pzsc_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace pzsc::testing

#endif  // PZSC_TEST_UTIL_HPP
