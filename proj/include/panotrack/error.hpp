#pragma once

#include <stdexcept>
#include <string>

namespace panotrack {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Intrinsics that cannot be inverted or describe an empty image.
class InvalidIntrinsics : public Error {
public:
  using Error::Error;
};

/// Input for which the requested quantity is not uniquely defined
/// (rank-deficient Procrustes input, antipodal mask centroid, empty mask).
class DegenerateInput : public Error {
public:
  using Error::Error;
};

/// Argument outside the documented domain of an operation.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// Malformed file content. `where` names the file and the offending field.
class ParseError : public Error {
public:
  ParseError(const std::string& where, const std::string& what)
      : Error(where + ": " + what), where_(where) {}
  const std::string& where() const noexcept { return where_; }

private:
  std::string where_;
};

/// Filesystem failure (unreadable/unwritable path).
class IoError : public Error {
public:
  using Error::Error;
};

/// Failure inside the dataset pipeline, labelled with the stage that raised it.
class PipelineError : public Error {
public:
  PipelineError(std::string stage, const std::string& what)
      : Error("[" + stage + "] " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

private:
  std::string stage_;
};

}  // namespace panotrack
