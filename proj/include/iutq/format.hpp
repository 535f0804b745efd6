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

#ifndef IUTQ__FORMAT_HPP_
#define IUTQ__FORMAT_HPP_

#include <optional>
#include <string>

namespace iutq
{

/// Shortest decimal form that parses back to the same double.
std::string format_exact(double v);

/// Six significant digits, printf %.6g style. Used for every report value.
std::string format_sig6(double v);

/// format_sig6, or an empty string for an undefined value.
std::string format_sig6(const std::optional<double> & v);

}  // namespace iutq

#endif  // IUTQ__FORMAT_HPP_
