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

#ifndef PZSC_TOOLS_RUN_CONFIG_HPP
#define PZSC_TOOLS_RUN_CONFIG_HPP

#include <string>

#include <json.hpp>

#include "pzsc/optimizer.hpp"
#include "pzsc/split.hpp"
#include "pzsc/synthetic.hpp"
#include "pzsc/text_featurizer.hpp"
#include "pzsc/types.hpp"

namespace pzsc::cli {

using Json = nlohmann::ordered_json;

// Every key the tool understands, with its default. A run config is this
// document with some values replaced; see README.md for the meaning of each.
Json default_config();

// Overlays `user` onto `base`. Keys that `base` lacks, and values whose JSON
// type differs from the default's, are rejected with their dotted path.
// A null default accepts a string.
void merge_config(Json& base, const Json& user, const std::string& where = "");

// Defaults overlaid with the JSON file at `path` (if non-empty).
Json load_config(const std::string& path);

// FNV-1a 64 of the compact dump, as 16 hex digits. "threads" is left out
// because it never changes results.
std::string config_hash(const Json& config);

HyperParams hyper_from_config(const Json& config);
LbfgsConfig lbfgs_from_config(const Json& config);
FeaturizerConfig featurizer_from_config(const Json& config);
SyntheticSpec synthetic_from_config(const Json& config);

// Optional path entry, empty when null.
std::string config_path(const Json& config, const char* key);

}  // namespace pzsc::cli

#endif  // PZSC_TOOLS_RUN_CONFIG_HPP
