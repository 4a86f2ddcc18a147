#include "mecfl/errors.hpp"

#include <sstream>

namespace mecfl {

const char* to_string(Simplex s) {
  return s == Simplex::kOffload ? "offload" : "weight";
}

namespace {

std::string hex32(std::uint32_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << v;
  return os.str();
}

}  // namespace

SumExceedsOne::SumExceedsOne(Simplex simplex, double excess)
    : ValidationError(std::string("bandwidth shares of the ") + to_string(simplex) +
                      " simplex exceed 1 by " + std::to_string(excess)),
      simplex_(simplex),
      excess_(excess) {}

OutOfRange::OutOfRange(std::size_t index, std::string field, double value)
    : ValidationError("user " + std::to_string(index) + ": " + field + " = " +
                      std::to_string(value) + " is out of range"),
      index_(index),
      field_(std::move(field)) {}

DegenerateDivisor::DegenerateDivisor(std::string term)
    : Error("degenerate divisor in " + term), term_(std::move(term)) {}

AllZeroWeights::AllZeroWeights(Simplex simplex)
    : Error(std::string("every proportional weight of the ") + to_string(simplex) +
            " simplex is zero"),
      simplex_(simplex) {}

BadMagic::BadMagic(std::uint32_t expected, std::uint32_t found)
    : Error("IDX magic " + hex32(found) + " where " + hex32(expected) + " was expected"),
      found_(found) {}

TruncatedFile::TruncatedFile(std::string path, std::uint64_t offset)
    : Error(path + ": truncated at byte offset " + std::to_string(offset)), offset_(offset) {}

IterationFailure::IterationFailure(std::size_t iteration, const std::string& cause)
    : Error("iteration " + std::to_string(iteration) + ": " + cause), iteration_(iteration) {}

}  // namespace mecfl
