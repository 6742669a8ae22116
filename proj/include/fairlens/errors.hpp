// Copyright 2026 The FairLens Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Exception hierarchy shared by every fairlens module. Each error carries a
// stable kind name so the CLI can report it and map it to an exit code.

#ifndef FAIRLENS_ERRORS_HPP_
#define FAIRLENS_ERRORS_HPP_

#include <exception>
#include <string>
#include <utility>

namespace fairlens {

class Error : public std::exception {
 public:
  Error(std::string kind, std::string message)
      : kind_(std::move(kind)), message_(std::move(message)) {}

  const char* what() const noexcept override { return message_.c_str(); }
  const std::string& kind() const noexcept { return kind_; }

  // Adds location context ("triple 3: ...") before rethrowing with `throw;`,
  // which keeps the dynamic error type intact.
  void Prepend(const std::string& context) {
    message_ = context + ": " + message_;
  }

 private:
  std::string kind_;
  std::string message_;
};

#define FAIRLENS_DEFINE_ERROR(Name)                                      \
  class Name : public Error {                                            \
   public:                                                               \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

// core-math
FAIRLENS_DEFINE_ERROR(DimensionError);
FAIRLENS_DEFINE_ERROR(EmptyCandidateError);
FAIRLENS_DEFINE_ERROR(InvalidVectorError);

// individual-fairness
FAIRLENS_DEFINE_ERROR(MissingLanguageError);
FAIRLENS_DEFINE_ERROR(DomainError);
FAIRLENS_DEFINE_ERROR(DegenerateShuffleError);

// group-fairness
FAIRLENS_DEFINE_ERROR(EmptyCohortError);
FAIRLENS_DEFINE_ERROR(TaxonomyError);
FAIRLENS_DEFINE_ERROR(PartitionError);

// zeroshot
FAIRLENS_DEFINE_ERROR(PromptSpecError);
FAIRLENS_DEFINE_ERROR(ManifestError);

// ingest
FAIRLENS_DEFINE_ERROR(ParseError);
FAIRLENS_DEFINE_ERROR(DuplicateIdError);
FAIRLENS_DEFINE_ERROR(DanglingReferenceError);

// report
FAIRLENS_DEFINE_ERROR(PivotError);

// cli
FAIRLENS_DEFINE_ERROR(UsageError);

#undef FAIRLENS_DEFINE_ERROR

}  // namespace fairlens

#endif  // FAIRLENS_ERRORS_HPP_
