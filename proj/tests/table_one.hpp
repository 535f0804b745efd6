// Copyright 2026 The IUTQ Authors
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

#ifndef IUTQ_TESTS__TABLE_ONE_HPP_
#define IUTQ_TESTS__TABLE_ONE_HPP_

// Published comparison table: raw counts and the derived rows, in column order.

#include "iutq/evaluation.hpp"

#include <array>
#include <string_view>

namespace iutq::test
{

struct PublishedColumn
{
  std::string_view metric;
  ConfusionCounts counts;
  // ACC, MR, TPR, FPR, TNR, FNR, PRE, CoK, F1S, MCC
  std::array<double, 10> derived;
};

inline constexpr std::array<PublishedColumn, 11> kPublishedTable{{
  {"dist", {1162, 22364, 2942, 3101}, {0.796, 0.204, 0.273, 0.116, 0.884, 0.727, 0.283, 0.159, 0.278, 0.579}},
  {"et", {3700, 6212, 19094, 563}, {0.335, 0.665, 0.868, 0.755, 0.245, 0.132, 0.162, 0.040, 0.273, 0.547}},
  {"gt", {745, 21592, 3714, 3518}, {0.755, 0.245, 0.175, 0.147, 0.853, 0.825, 0.167, 0.027, 0.171, 0.514}},
  {"pet", {2374, 16261, 9045, 1889}, {0.630, 0.370, 0.557, 0.357, 0.643, 0.443, 0.208, 0.117, 0.303, 0.572}},
  {"pttc", {975, 22366, 2940, 3288}, {0.789, 0.211, 0.229, 0.116, 0.884, 0.771, 0.249, 0.116, 0.238, 0.558}},
  {"ttc", {605, 23626, 1680, 3658}, {0.819, 0.181, 0.142, 0.066, 0.934, 0.858, 0.265, 0.094, 0.185, 0.550}},
  {"wttc", {4029, 7373, 17933, 234}, {0.386, 0.614, 0.945, 0.709, 0.291, 0.055, 0.183, 0.086, 0.307, 0.595}},
  {"iutq-rho1", {3083, 16627, 8679, 1180}, {0.667, 0.333, 0.723, 0.343, 0.657, 0.277, 0.262, 0.220, 0.385, 0.636}},
  {"iutq-rho2", {2149, 21475, 3831, 2114}, {0.799, 0.201, 0.504, 0.151, 0.849, 0.496, 0.359, 0.302, 0.419, 0.654}},
  {"iutq-rho3", {3530, 13130, 12176, 733}, {0.563, 0.437, 0.828, 0.481, 0.519, 0.172, 0.225, 0.164, 0.354, 0.622}},
  {"iutq-co", {3041, 13494, 11812, 1222}, {0.559, 0.441, 0.713, 0.467, 0.533, 0.287, 0.205, 0.121, 0.318, 0.587}},
}};

inline constexpr std::array<StatRow, 10> kDerivedRows{
  StatRow::acc, StatRow::mr,  StatRow::tpr, StatRow::fpr, StatRow::tnr,
  StatRow::fnr, StatRow::pre, StatRow::cok, StatRow::f1s, StatRow::mcc};

}  // namespace iutq::test

#endif  // IUTQ_TESTS__TABLE_ONE_HPP_
