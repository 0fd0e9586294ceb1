#pragma once

#include <stdexcept>
#include <string>

namespace nnmf {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ShapeMismatch : public Error {
 public:
  explicit ShapeMismatch(const std::string& what) : Error(what) {}
};

class IndexOutOfRange : public Error {
 public:
  explicit IndexOutOfRange(const std::string& what) : Error(what) {}
};

/// Smallest singular value fell at or below rank_tol times the largest.
class RankDeficient : public Error {
 public:
  explicit RankDeficient(const std::string& what, std::size_t layer = kNoLayer)
      : Error(what), layer_(layer) {}

  /// Layer the failure was detected at, or kNoLayer when not applicable.
  std::size_t layer() const { return layer_; }

  static constexpr std::size_t kNoLayer = static_cast<std::size_t>(-1);

 private:
  std::size_t layer_;
};

class NonConvergence : public Error {
 public:
  explicit NonConvergence(const std::string& what) : Error(what) {}
};

class InvalidRank : public Error {
 public:
  explicit InvalidRank(const std::string& what) : Error(what) {}
};

class InvalidFraction : public Error {
 public:
  explicit InvalidFraction(const std::string& what) : Error(what) {}
};

class InconsistentStack : public Error {
 public:
  explicit InconsistentStack(const std::string& what) : Error(what) {}
};

class Divergence : public Error {
 public:
  explicit Divergence(const std::string& what) : Error(what) {}
};

class NegativeEntry : public Error {
 public:
  explicit NegativeEntry(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace nnmf
