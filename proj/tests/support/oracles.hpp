// Copyright (c) 2026 pinyinqa authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Test-only oracles. These stay independent of the library implementations
// they check: the edit-distance oracle is a top-down memoized recursion
// written straight from the recurrence, and the golden metric table holds
// hand-computed values frozen as exact fractions.

#pragma once

#include <string>
#include <vector>

namespace pinyinqa::testing {

/// Top-down memoized edit distance (unit-cost substitution / insertion /
/// deletion), defined directly by the recurrence.
int edit_distance_oracle(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// All sequences over `alphabet` with length in [min_len, max_len].
std::vector<std::vector<std::string>> enumerate_sequences(const std::vector<std::string>& alphabet,
                                                          int min_len, int max_len);

/// Hand-computed EM/F1 case: multiset character overlap per the definitions,
/// worked out on paper and frozen.
struct GoldenMetricCase {
  const char* prediction;
  std::vector<std::string> golds;
  int em;
  double f1;
  const char* note;
};

const std::vector<GoldenMetricCase>& golden_metric_table();

}  // namespace pinyinqa::testing
