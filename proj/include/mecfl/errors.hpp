#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mecfl {

/// Root of every error raised by the simulator.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Identifies one of the two uplink bandwidth simplices.
enum class Simplex { kOffload, kWeight };

const char* to_string(Simplex s);

class SumExceedsOne : public ValidationError {
 public:
  SumExceedsOne(Simplex simplex, double excess);
  Simplex simplex() const { return simplex_; }
  double excess() const { return excess_; }

 private:
  Simplex simplex_;
  double excess_;
};

class OutOfRange : public ValidationError {
 public:
  OutOfRange(std::size_t index, std::string field, double value);
  std::size_t index() const { return index_; }
  const std::string& field() const { return field_; }

 private:
  std::size_t index_;
  std::string field_;
};

/// A time or energy term would divide a non-zero quantity by zero.
class DegenerateDivisor : public Error {
 public:
  explicit DegenerateDivisor(std::string term);
  const std::string& term() const { return term_; }

 private:
  std::string term_;
};

class AllZeroWeights : public Error {
 public:
  explicit AllZeroWeights(Simplex simplex);
  Simplex simplex() const { return simplex_; }

 private:
  Simplex simplex_;
};

class EmptyDataset : public Error {
 public:
  using Error::Error;
};

class InconsistentSizes : public Error {
 public:
  using Error::Error;
};

class NoFeasiblePoint : public Error {
 public:
  using Error::Error;
};

class NoSignChange : public Error {
 public:
  using Error::Error;
};

class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

class BadMagic : public Error {
 public:
  BadMagic(std::uint32_t expected, std::uint32_t found);
  std::uint32_t found() const { return found_; }

 private:
  std::uint32_t found_;
};

class CountMismatch : public Error {
 public:
  using Error::Error;
};

class TruncatedFile : public Error {
 public:
  TruncatedFile(std::string path, std::uint64_t offset);
  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

/// Wraps an error raised inside one iteration of the resource-management loop.
class IterationFailure : public Error {
 public:
  IterationFailure(std::size_t iteration, const std::string& cause);
  std::size_t iteration() const { return iteration_; }

 private:
  std::size_t iteration_;
};

}  // namespace mecfl
