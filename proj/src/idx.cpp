#include "mecfl/idx.hpp"

#include <fstream>
#include <vector>

#include "mecfl/errors.hpp"

namespace mecfl {

namespace {

constexpr std::size_t kDigitClasses = 10;

class BigEndianReader {
 public:
  explicit BigEndianReader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw ValidationError("cannot open " + path);
  }

  std::uint32_t u32() {
    unsigned char b[4];
    read(b, 4);
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
  }

  void read(unsigned char* dst, std::size_t n) {
    in_.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
    const auto got = static_cast<std::uint64_t>(in_.gcount());
    if (got != n) throw TruncatedFile(path_, offset_ + got);
    offset_ += n;
  }

 private:
  std::string path_;
  std::ifstream in_;
  std::uint64_t offset_ = 0;
};

void expect_magic(std::uint32_t expected, std::uint32_t found) {
  if (found != expected) throw BadMagic(expected, found);
}

}  // namespace

Dataset load_idx(const std::string& images_path, const std::string& labels_path) {
  BigEndianReader images(images_path);
  expect_magic(kIdxImagesMagic, images.u32());
  const std::uint32_t n_images = images.u32();
  const std::uint32_t rows = images.u32();
  const std::uint32_t cols = images.u32();

  BigEndianReader labels(labels_path);
  expect_magic(kIdxLabelsMagic, labels.u32());
  const std::uint32_t n_labels = labels.u32();
  if (n_images != n_labels) {
    throw CountMismatch(images_path + " holds " + std::to_string(n_images) + " images but " + labels_path +
                        " holds " + std::to_string(n_labels) + " labels");
  }

  const std::size_t n_features = std::size_t{rows} * cols;
  std::vector<unsigned char> raw(std::size_t{n_images} * n_features);
  if (!raw.empty()) images.read(raw.data(), raw.size());
  std::vector<double> features(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) features[k] = raw[k] / 255.0;

  std::vector<unsigned char> raw_labels(n_labels);
  if (!raw_labels.empty()) labels.read(raw_labels.data(), raw_labels.size());
  std::vector<int> y(raw_labels.begin(), raw_labels.end());

  return Dataset(std::move(features), std::move(y), n_features, kDigitClasses);
}

}  // namespace mecfl
