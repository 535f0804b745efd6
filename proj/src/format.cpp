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

#include "iutq/format.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace iutq
{

std::string format_exact(double v)
{
  std::array<char, 64> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), result.ptr);
}

std::string format_sig6(double v)
{
  if (v == 0.0) {
    v = 0.0;  // no "-0"
  }
  std::array<char, 32> buf{};
  const int n = std::snprintf(buf.data(), buf.size(), "%.6g", v);
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

std::string format_sig6(const std::optional<double> & v)
{
  return v ? format_sig6(*v) : std::string{};
}

}  // namespace iutq
