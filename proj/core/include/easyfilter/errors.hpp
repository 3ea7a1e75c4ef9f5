#pragma once

#include <stdexcept>
#include <string>

namespace easyfilter {

// Every failure raised by the library derives from Error so callers can map
// categories onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of an operation was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Function id not present in the suite registry.
class RegistrationError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Input data is malformed or non-finite.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Reading or writing the on-disk archive failed.
class ArchiveError : public Error {
 public:
  using Error::Error;
};

/// Required runs or labels are missing from the archive.
class IncompleteArchiveError : public Error {
 public:
  using Error::Error;
};

/// A query exceeded the recorded horizon of a run.
class OutOfHorizonError : public ContractError {
 public:
  using ContractError::ContractError;
};

/// Model training diverged or could not start.
class TrainingError : public Error {
 public:
  using Error::Error;
};

/// Two traces that must be aligned are not.
class AuditError : public Error {
 public:
  using Error::Error;
};

}  // namespace easyfilter
