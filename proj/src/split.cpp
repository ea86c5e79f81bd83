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

#include "pzsc/split.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "pzsc/container.hpp"
#include "pzsc/error.hpp"
#include "pzsc/rng.hpp"

namespace pzsc {

namespace {

bool contains(const std::vector<std::string>& items, const std::string& item) {
  return std::find(items.begin(), items.end(), item) != items.end();
}

// `count` items of `pool` chosen by a seeded shuffle.
std::set<std::string> choose(std::vector<std::string> pool, long count, Rng& rng) {
  rng.shuffle(pool);
  return {pool.begin(), pool.begin() + count};
}

}  // namespace

void ClassHierarchy::add(std::string class_id, std::string super_category) {
  classes.push_back(std::move(class_id));
  super_categories.push_back(std::move(super_category));
}

const std::string& ClassHierarchy::super_of(const std::string& class_id) const {
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] == class_id) return super_categories[i];
  }
  throw InputError("class '" + class_id + "' has no super-category");
}

std::vector<std::string> ClassHierarchy::ordered_super_categories() const {
  std::vector<std::string> out;
  for (const auto& s : super_categories) {
    if (!contains(out, s)) out.push_back(s);
  }
  return out;
}

std::vector<std::string> ClassHierarchy::leaves_of(const std::string& super_category) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (super_categories[i] == super_category) out.push_back(classes[i]);
  }
  return out;
}

void ClassHierarchy::validate() const {
  if (classes.size() != super_categories.size()) {
    throw InputError("every class needs exactly one super-category");
  }
  std::set<std::string> unique(classes.begin(), classes.end());
  if (unique.size() != classes.size()) {
    throw InputError("hierarchy lists a class twice");
  }
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (super_categories[i].empty()) {
      throw InputError("class '" + classes[i] + "' has an empty super-category");
    }
  }
}

const char* to_string(SplitMode mode) { return mode == SplitMode::kSCS ? "SCS" : "SCE"; }

SplitMode parse_split_mode(std::string_view name) {
  if (name == "SCS" || name == "scs") return SplitMode::kSCS;
  if (name == "SCE" || name == "sce") return SplitMode::kSCE;
  throw InputError("unknown split mode '" + std::string(name) + "' (expected SCS or SCE)");
}

bool SplitSpec::is_seen(const std::string& class_id) const { return contains(seen, class_id); }

bool SplitSpec::is_unseen(const std::string& class_id) const {
  return contains(unseen, class_id);
}

long round_half_up(double value) { return static_cast<long>(std::floor(value + 0.5)); }

SplitSpec make_split(const ClassHierarchy& hierarchy, SplitMode mode,
                     double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw InputError("split fraction must lie in (0, 1)");
  }
  hierarchy.validate();
  Rng rng(seed);
  std::set<std::string> unseen;
  const auto supers = hierarchy.ordered_super_categories();
  if (mode == SplitMode::kSCS) {
    for (const auto& s : supers) {
      const auto leaves = hierarchy.leaves_of(s);
      const auto n = static_cast<long>(leaves.size());
      const long count = n < 2 ? 0 : std::clamp(round_half_up(fraction * n), 0L, n - 1);
      const auto picked = choose(leaves, count, rng);
      unseen.insert(picked.begin(), picked.end());
    }
  } else {
    const auto n = static_cast<long>(supers.size());
    const long count = std::clamp(round_half_up(fraction * n), 0L, std::max(n - 1, 0L));
    for (const auto& s : choose(supers, count, rng)) {
      for (const auto& leaf : hierarchy.leaves_of(s)) unseen.insert(leaf);
    }
  }
  SplitSpec split;
  split.mode = mode;
  split.seed = seed;
  split.fraction = fraction;
  for (const auto& c : hierarchy.classes) {
    (unseen.contains(c) ? split.unseen : split.seen).push_back(c);
  }
  return split;
}

nlohmann::ordered_json to_json(const SplitSpec& split) {
  nlohmann::ordered_json doc;
  doc["mode"] = to_string(split.mode);
  doc["seed"] = split.seed;
  doc["fraction"] = split.fraction;
  doc["seen"] = split.seen;
  doc["unseen"] = split.unseen;
  return doc;
}

SplitSpec split_from_json(const nlohmann::ordered_json& doc) {
  SplitSpec split;
  try {
    split.mode = parse_split_mode(doc.at("mode").get<std::string>());
    split.seed = doc.value("seed", std::uint64_t{0});
    split.fraction = doc.value("fraction", 0.2);
    split.seen = doc.at("seen").get<std::vector<std::string>>();
    split.unseen = doc.at("unseen").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(IoErrorKind::kParse, std::string("split document: ") + e.what());
  }
  for (const auto& c : split.unseen) {
    if (contains(split.seen, c)) {
      throw InputError("class '" + c + "' is both seen and unseen");
    }
  }
  return split;
}

void save_split(const std::string& path, const SplitSpec& split) {
  save_text(path, to_json(split).dump(2) + "\n");
}

SplitSpec load_split(const std::string& path) {
  try {
    return split_from_json(nlohmann::ordered_json::parse(load_text(path)));
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(IoErrorKind::kParse, path + ": " + e.what());
  }
}

}  // namespace pzsc
