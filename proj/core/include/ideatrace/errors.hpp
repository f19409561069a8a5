#pragma once

#include <stdexcept>
#include <string>

namespace ideatrace {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or inconsistent configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A pipeline stage input file is absent.
class MissingArtifact : public Error {
 public:
  using Error::Error;
};

// Every token was removed by the frequency filters.
class EmptyVocabulary : public Error {
 public:
  using Error::Error;
};

// A token outside the vocabulary reached a vocabulary-indexed stage.
class UnknownToken : public Error {
 public:
  using Error::Error;
};

// Non-positive Dirichlet concentrations or inconsistent sweep counts.
class InvalidHyper : public Error {
 public:
  using Error::Error;
};

// A constitution has no timestamp.
class MissingYear : public Error {
 public:
  using Error::Error;
};

// An edge or transmission query where the destination does not postdate
// the source.
class TimeOrderViolation : public Error {
 public:
  using Error::Error;
};

// Mathematical domain violations (KL with absolutely-discontinuous inputs,
// birth-process pmf below the initial count, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Sample sets no maximum-likelihood fit can represent (zero variance,
// all-zero counts).
class DegenerateSample : public Error {
 public:
  using Error::Error;
};

}  // namespace ideatrace
