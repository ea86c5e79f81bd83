// Copyright 2026 The pzsc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "run_config.hpp"

#include <cstdio>

#include "pzsc/container.hpp"
#include "pzsc/error.hpp"

namespace pzsc::cli {

Json default_config() {
  const HyperParams h;
  const LbfgsConfig l;
  const FeaturizerConfig f;
  const SyntheticSpec s;
  Json doc;
  doc["seed"] = 0;
  doc["threads"] = 0;   // 0: one per hardware thread
  doc["paths"] = {{"corpus", nullptr}, {"stopwords", nullptr}, {"bundle", nullptr},
                  {"split", nullptr},  {"text", nullptr},      {"model", nullptr}};
  doc["featurizer"] = {{"lowercase", f.lowercase},
                       {"token_pattern", to_string(f.token_pattern)},
                       {"min_df", f.min_df},
                       {"idf_variant", to_string(f.idf_variant)},
                       {"l2_normalize", f.l2_normalize}};
  doc["model"] = {{"lambda1", h.lambda1},
                  {"lambda2", h.lambda2},
                  {"latent_dim", h.latent_dim},
                  {"max_outer_iters", h.max_outer_iters},
                  {"inner_tol", h.inner_tol},
                  {"inner_max_iters", h.inner_max_iters},
                  {"outer_tol", h.outer_tol},
                  {"group_eps", h.group_eps}};
  doc["lbfgs"] = {{"memory", l.memory},
                  {"c1", l.c1},
                  {"shrink", l.shrink},
                  {"max_backtracks", l.max_backtracks}};
  doc["train"] = {{"block_part_solves", false}, {"checkpoint_every", 0}};
  doc["split"] = {{"mode", "SCS"}, {"fraction", 0.2}};
  doc["synth"] = {{"num_classes", s.num_classes},
                  {"num_super_categories", s.num_super_categories},
                  {"samples_per_class", s.samples_per_class},
                  {"num_parts", s.num_parts},
                  {"part_dim", s.part_dim},
                  {"num_terms", s.num_terms},
                  {"planted_terms", s.planted_terms},
                  {"active_terms_per_class", s.active_terms_per_class},
                  {"background_terms_per_class", s.background_terms_per_class},
                  {"max_term_count", s.max_term_count},
                  {"noise_sigma", s.noise_sigma},
                  {"test_fraction", s.test_fraction},
                  {"missing_rate", s.missing_rate}};
  doc["eval"] = {{"mode", "zsl"}, {"per_class", true}};
  doc["analyze"] = {{"top_k", 30}, {"top_n", 10}, {"sample", nullptr}, {"class", nullptr}};
  return doc;
}

namespace {

const char* kind_name(const Json& v) {
  if (v.is_null()) return "null";
  if (v.is_boolean()) return "boolean";
  if (v.is_number()) return "number";
  if (v.is_string()) return "string";
  if (v.is_array()) return "array";
  return "object";
}

bool compatible(const Json& def, const Json& value) {
  if (def.is_null()) return value.is_null() || value.is_string();
  if (def.is_number_integer()) return value.is_number_integer();
  if (def.is_number()) return value.is_number();
  return std::string(kind_name(def)) == kind_name(value);
}

}  // namespace

void merge_config(Json& base, const Json& user, const std::string& where) {
  if (!user.is_object()) {
    throw InputError("config" + (where.empty() ? "" : " key '" + where + "'") +
                     " must be a JSON object");
  }
  for (const auto& [key, value] : user.items()) {
    const std::string path = where.empty() ? key : where + "." + key;
    if (!base.contains(key)) throw InputError("unknown config key '" + path + "'");
    Json& slot = base[key];
    if (slot.is_object()) {
      merge_config(slot, value, path);
    } else if (!compatible(slot, value)) {
      throw InputError("config key '" + path + "' expects " +
                       (slot.is_number_integer() ? "an integer" : kind_name(slot)) +
                       ", got " + kind_name(value));
    } else {
      slot = value;
    }
  }
}

Json load_config(const std::string& path) {
  Json config = default_config();
  if (path.empty()) return config;
  Json user;
  try {
    user = Json::parse(load_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(IoErrorKind::kParse, path + ": " + e.what());
  }
  merge_config(config, user);
  return config;
}

std::string config_hash(const Json& config) {
  Json copy = config;
  copy.erase("threads");
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : copy.dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

HyperParams hyper_from_config(const Json& config) {
  const Json& m = config.at("model");
  HyperParams h;
  h.lambda1 = m.at("lambda1").get<double>();
  h.lambda2 = m.at("lambda2").get<double>();
  h.latent_dim = m.at("latent_dim").get<int>();
  h.max_outer_iters = m.at("max_outer_iters").get<int>();
  h.inner_tol = m.at("inner_tol").get<double>();
  h.inner_max_iters = m.at("inner_max_iters").get<int>();
  h.outer_tol = m.at("outer_tol").get<double>();
  h.group_eps = m.at("group_eps").get<double>();
  h.seed = config.at("seed").get<std::uint64_t>();
  h.validate();
  return h;
}

LbfgsConfig lbfgs_from_config(const Json& config) {
  const Json& l = config.at("lbfgs");
  LbfgsConfig out;
  out.memory = l.at("memory").get<int>();
  out.c1 = l.at("c1").get<double>();
  out.shrink = l.at("shrink").get<double>();
  out.max_backtracks = l.at("max_backtracks").get<int>();
  out.validate();
  return out;
}

FeaturizerConfig featurizer_from_config(const Json& config) {
  const Json& f = config.at("featurizer");
  FeaturizerConfig out;
  out.lowercase = f.at("lowercase").get<bool>();
  out.token_pattern = parse_token_pattern(f.at("token_pattern").get<std::string>());
  out.min_df = f.at("min_df").get<int>();
  out.idf_variant = parse_idf_variant(f.at("idf_variant").get<std::string>());
  out.l2_normalize = f.at("l2_normalize").get<bool>();
  return out;
}

SyntheticSpec synthetic_from_config(const Json& config) {
  const Json& s = config.at("synth");
  SyntheticSpec out;
  out.num_classes = s.at("num_classes").get<int>();
  out.num_super_categories = s.at("num_super_categories").get<int>();
  out.samples_per_class = s.at("samples_per_class").get<int>();
  out.num_parts = s.at("num_parts").get<int>();
  out.part_dim = s.at("part_dim").get<int>();
  out.num_terms = s.at("num_terms").get<int>();
  out.planted_terms = s.at("planted_terms").get<int>();
  out.active_terms_per_class = s.at("active_terms_per_class").get<int>();
  out.background_terms_per_class = s.at("background_terms_per_class").get<int>();
  out.max_term_count = s.at("max_term_count").get<int>();
  out.noise_sigma = s.at("noise_sigma").get<double>();
  out.test_fraction = s.at("test_fraction").get<double>();
  out.missing_rate = s.at("missing_rate").get<double>();
  out.seed = config.at("seed").get<std::uint64_t>();
  out.validate();
  return out;
}

std::string config_path(const Json& config, const char* key) {
  const Json& v = config.at("paths").at(key);
  return v.is_null() ? std::string() : v.get<std::string>();
}

}  // namespace pzsc::cli
