#pragma once

// Reader for the big-endian IDX files the MNIST digits are distributed in.

#include <cstdint>
#include <string>

#include "mecfl/dataset.hpp"

namespace mecfl {

inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

/// Pixels are divided by 255; every label must be below 10. Throws BadMagic,
/// CountMismatch, TruncatedFile (with the byte offset of the short read) and
/// ValidationError for unreadable files.
Dataset load_idx(const std::string& images_path, const std::string& labels_path);

}  // namespace mecfl
