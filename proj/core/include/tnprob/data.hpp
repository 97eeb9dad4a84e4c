#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tnprob/rng.hpp"

namespace tnprob {

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BinaryImage {
  std::size_t rows = 0, cols = 0;
  std::vector<std::uint8_t> pixels;  // row-major, 0/1

  std::uint8_t at(std::size_t r, std::size_t c) const {
    return pixels[r * cols + c];
  }
};

/// Symbol sequences of uniform length; symbols are 1-based ({1, 2} for
/// binary pixels).
struct SequenceDataset {
  std::vector<std::vector<std::uint8_t>> sequences;
  std::size_t seq_len = 0;
  std::size_t alphabet = 2;
  // provenance
  std::size_t rows = 0, cols = 0, segment_len = 0;
  bool dedup = true;
  std::uint64_t seed = 0;
};

/// All 2^rows bar images (every row constant) plus all 2^cols stripe images
/// (every column constant); dedup removes the two all-constant duplicates.
std::vector<BinaryImage> bars_and_stripes(std::size_t rows, std::size_t cols,
                                          bool dedup = true);

/// Horizontal raster scan, upper left to bottom right; symbol = pixel + 1.
std::vector<std::uint8_t> raster_flatten(const BinaryImage& img);

/// Flattens every image and cuts each raster sequence into segments of
/// segment_len symbols (segment_len must divide rows*cols; segment_len = 0
/// means whole sequences).
SequenceDataset make_sequence_dataset(const std::vector<BinaryImage>& images,
                                      std::size_t segment_len);

/// Deterministic permutation by seed; the first ceil(fraction * M)
/// sequences go to train.
std::pair<SequenceDataset, SequenceDataset> split(const SequenceDataset& ds,
                                                  double fraction,
                                                  std::uint64_t seed);

/// CSV: a header comment line carrying provenance, then one sequence per
/// row. Byte-identical for identical inputs.
std::string dataset_to_csv(const SequenceDataset& ds);
SequenceDataset dataset_from_csv(const std::string& text);
void save_dataset(const SequenceDataset& ds, const std::string& path);
SequenceDataset load_dataset(const std::string& path);

}  // namespace tnprob
