#include "tnprob/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace tnprob {

std::vector<BinaryImage> bars_and_stripes(std::size_t rows, std::size_t cols,
                                          bool dedup) {
  if (rows < 1 || cols < 1) throw DataError("rows and cols must be >= 1");
  if (rows > 20 || cols > 20) throw DataError("image side too large");
  std::vector<BinaryImage> out;
  for (std::uint64_t mask = 0; mask < (1ull << rows); ++mask) {
    BinaryImage img{rows, cols, std::vector<std::uint8_t>(rows * cols)};
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        img.pixels[r * cols + c] = (mask >> r) & 1;
    out.push_back(std::move(img));
  }
  for (std::uint64_t mask = 0; mask < (1ull << cols); ++mask) {
    // Skip all-constant stripe images under dedup; they already appear as
    // bar images.
    if (dedup && (mask == 0 || mask == (1ull << cols) - 1)) continue;
    BinaryImage img{rows, cols, std::vector<std::uint8_t>(rows * cols)};
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        img.pixels[r * cols + c] = (mask >> c) & 1;
    out.push_back(std::move(img));
  }
  return out;
}

std::vector<std::uint8_t> raster_flatten(const BinaryImage& img) {
  std::vector<std::uint8_t> seq(img.pixels.size());
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    seq[i] = static_cast<std::uint8_t>(img.pixels[i] + 1);
  return seq;
}

SequenceDataset make_sequence_dataset(const std::vector<BinaryImage>& images,
                                      std::size_t segment_len) {
  SequenceDataset ds;
  if (images.empty()) throw DataError("empty image list");
  const std::size_t full = images[0].rows * images[0].cols;
  const std::size_t seg = segment_len == 0 ? full : segment_len;
  if (full % seg != 0)
    throw DataError("segment length must divide the raster length");
  ds.seq_len = seg;
  ds.rows = images[0].rows;
  ds.cols = images[0].cols;
  ds.segment_len = seg;
  for (const auto& img : images) {
    if (img.rows != ds.rows || img.cols != ds.cols)
      throw DataError("mixed image shapes");
    auto flat = raster_flatten(img);
    for (std::size_t off = 0; off < full; off += seg)
      ds.sequences.emplace_back(flat.begin() + static_cast<std::ptrdiff_t>(off),
                                flat.begin() + static_cast<std::ptrdiff_t>(off + seg));
  }
  return ds;
}

std::pair<SequenceDataset, SequenceDataset> split(const SequenceDataset& ds,
                                                  double fraction,
                                                  std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw DataError("split fraction must be in (0, 1)");
  if (ds.sequences.empty()) throw DataError("cannot split an empty dataset");
  std::vector<std::size_t> order(ds.sequences.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);
  const auto m = static_cast<double>(ds.sequences.size());
  const auto n_train = static_cast<std::size_t>(std::ceil(fraction * m));
  SequenceDataset train = ds, test = ds;
  train.sequences.clear();
  test.sequences.clear();
  train.seed = seed;
  test.seed = seed;
  for (std::size_t i = 0; i < order.size(); ++i)
    (i < n_train ? train : test).sequences.push_back(ds.sequences[order[i]]);
  return {std::move(train), std::move(test)};
}

std::string dataset_to_csv(const SequenceDataset& ds) {
  std::ostringstream os;
  os << "# rows=" << ds.rows << " cols=" << ds.cols
     << " segment_len=" << ds.segment_len << " dedup=" << (ds.dedup ? 1 : 0)
     << " seed=" << ds.seed << " alphabet=" << ds.alphabet << "\n";
  for (const auto& seq : ds.sequences) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (i) os << ",";
      os << static_cast<unsigned>(seq[i]);
    }
    os << "\n";
  }
  return os.str();
}

SequenceDataset dataset_from_csv(const std::string& text) {
  SequenceDataset ds;
  std::istringstream is(text);
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (first && line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string kv;
      while (hs >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = kv.substr(0, eq);
        const std::uint64_t val = std::stoull(kv.substr(eq + 1));
        if (key == "rows") ds.rows = val;
        else if (key == "cols") ds.cols = val;
        else if (key == "segment_len") ds.segment_len = val;
        else if (key == "dedup") ds.dedup = val != 0;
        else if (key == "seed") ds.seed = val;
        else if (key == "alphabet") ds.alphabet = val;
      }
      first = false;
      continue;
    }
    first = false;
    std::vector<std::uint8_t> seq;
    std::istringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ','))
      seq.push_back(static_cast<std::uint8_t>(std::stoul(tok)));
    if (!ds.sequences.empty() && seq.size() != ds.sequences[0].size())
      throw DataError("ragged sequence lengths in dataset file");
    ds.sequences.push_back(std::move(seq));
  }
  if (ds.sequences.empty()) throw DataError("dataset file has no sequences");
  ds.seq_len = ds.sequences[0].size();
  return ds;
}

void save_dataset(const SequenceDataset& ds, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open for writing: " + path);
  f << dataset_to_csv(ds);
}

SequenceDataset load_dataset(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return dataset_from_csv(os.str());
}

}  // namespace tnprob
