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

#ifndef PZSC_SPLIT_HPP
#define PZSC_SPLIT_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace pzsc {

// Leaf classes with their super-category, in class order.
struct ClassHierarchy {
  std::vector<std::string> classes;
  std::vector<std::string> super_categories;   // parallel to classes

  void add(std::string class_id, std::string super_category);
  const std::string& super_of(const std::string& class_id) const;
  // Distinct super-categories in order of first appearance.
  std::vector<std::string> ordered_super_categories() const;
  std::vector<std::string> leaves_of(const std::string& super_category) const;

  void validate() const;
};

enum class SplitMode {
  kSCS,   // unseen leaves drawn inside every super-category
  kSCE,   // whole super-categories held out
};

const char* to_string(SplitMode mode);
SplitMode parse_split_mode(std::string_view name);

struct SplitSpec {
  SplitMode mode = SplitMode::kSCS;
  std::vector<std::string> seen;     // hierarchy order
  std::vector<std::string> unseen;   // hierarchy order
  std::uint64_t seed = 0;
  double fraction = 0.2;

  bool is_seen(const std::string& class_id) const;
  bool is_unseen(const std::string& class_id) const;
};

/// Rounds half up, e.g. 0.2 * 5 -> 1, 0.25 * 2 -> 1.
long round_half_up(double value);

/// SCS: every super-category with n >= 2 leaves gets
/// min(n - 1, round_half_up(fraction * n)) unseen leaves; single-leaf
/// super-categories stay seen. SCE: min(S - 1, round_half_up(fraction * S))
/// of the S super-categories are unseen with all their leaves. Draws come
/// from Rng(seed), so the split is a pure function of its arguments.
SplitSpec make_split(const ClassHierarchy& hierarchy, SplitMode mode,
                     double fraction, std::uint64_t seed);

nlohmann::ordered_json to_json(const SplitSpec& split);
SplitSpec split_from_json(const nlohmann::ordered_json& doc);
void save_split(const std::string& path, const SplitSpec& split);
SplitSpec load_split(const std::string& path);

}  // namespace pzsc

#endif  // PZSC_SPLIT_HPP
