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

#ifndef IUTQ__ERRORS_HPP_
#define IUTQ__ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace iutq
{

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

#define IUTQ_DEFINE_ERROR(Name)        \
  class Name : public Error            \
  {                                    \
  public:                              \
    using Error::Error;                \
  }

IUTQ_DEFINE_ERROR(MissingAgent);
IUTQ_DEFINE_ERROR(EmptyScene);
IUTQ_DEFINE_ERROR(InvalidTrackset);
IUTQ_DEFINE_ERROR(FileError);
IUTQ_DEFINE_ERROR(FormatError);
IUTQ_DEFINE_ERROR(EmptyRecording);
IUTQ_DEFINE_ERROR(DuplicateLabel);
IUTQ_DEFINE_ERROR(MissingPrediction);
IUTQ_DEFINE_ERROR(EmptyCounts);
IUTQ_DEFINE_ERROR(InvalidSpec);
IUTQ_DEFINE_ERROR(UnsupportedMetric);

#undef IUTQ_DEFINE_ERROR

}  // namespace iutq

#endif  // IUTQ__ERRORS_HPP_
