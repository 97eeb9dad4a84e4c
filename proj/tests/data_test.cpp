#include <doctest.h>

#include <cstdio>
#include <set>

#include "tnprob/data.hpp"

using namespace tnprob;

namespace {

bool row_or_column_constant(const BinaryImage& img) {
  bool rows_ok = true, cols_ok = true;
  for (std::size_t r = 0; r < img.rows; ++r)
    for (std::size_t c = 1; c < img.cols; ++c)
      rows_ok &= img.at(r, c) == img.at(r, 0);
  for (std::size_t c = 0; c < img.cols; ++c)
    for (std::size_t r = 1; r < img.rows; ++r)
      cols_ok &= img.at(r, c) == img.at(0, c);
  return rows_ok || cols_ok;
}

}  // namespace

TEST_CASE("bars_and_stripes counts") {
  CHECK(bars_and_stripes(8, 8).size() == 510);  // 2*2^8 - 2
  CHECK(bars_and_stripes(1, 1).size() == 2);
  CHECK(bars_and_stripes(2, 3).size() == 10);
  CHECK(bars_and_stripes(2, 2, false).size() == 8);
  CHECK_THROWS_AS(bars_and_stripes(0, 3), DataError);
}

TEST_CASE("every generated image is a bar or stripe image") {
  auto imgs = bars_and_stripes(3, 4);
  std::set<std::vector<std::uint8_t>> seen;
  for (const auto& img : imgs) {
    CHECK(row_or_column_constant(img));
    seen.insert(img.pixels);
  }
  CHECK(seen.size() == imgs.size());  // dedup means all distinct
}

TEST_CASE("raster_flatten is row-major with one-based symbols") {
  BinaryImage img{2, 2, {1, 0, 0, 1}};
  CHECK(raster_flatten(img) == std::vector<std::uint8_t>{2, 1, 1, 2});
  BinaryImage ones{2, 2, {1, 1, 1, 1}};
  CHECK(raster_flatten(ones) == std::vector<std::uint8_t>{2, 2, 2, 2});
}

TEST_CASE("segmentation divides rasters into independent sequences") {
  auto imgs = bars_and_stripes(8, 8);
  SequenceDataset ds = make_sequence_dataset(imgs, 16);
  CHECK(ds.sequences.size() == 2040);  // 510 * 4
  CHECK(ds.seq_len == 16);
  SequenceDataset whole = make_sequence_dataset(imgs, 0);
  CHECK(whole.sequences.size() == 510);
  CHECK(whole.seq_len == 64);
  CHECK_THROWS_AS(make_sequence_dataset(imgs, 7), DataError);
}

TEST_CASE("split partitions deterministically") {
  SequenceDataset ds;
  ds.seq_len = 2;
  for (std::uint8_t i = 0; i < 10; ++i)
    ds.sequences.push_back({static_cast<std::uint8_t>(1 + i % 2), 1});
  auto [tr, te] = split(ds, 0.7, 3);
  CHECK(tr.sequences.size() == 7);
  CHECK(te.sequences.size() == 3);
  auto [tr2, te2] = split(ds, 0.7, 3);
  CHECK(tr.sequences == tr2.sequences);
  CHECK(te.sequences == te2.sequences);

  // partition: multiset union equals the input
  std::multiset<std::vector<std::uint8_t>> all(ds.sequences.begin(),
                                               ds.sequences.end());
  std::multiset<std::vector<std::uint8_t>> got(tr.sequences.begin(),
                                               tr.sequences.end());
  got.insert(te.sequences.begin(), te.sequences.end());
  CHECK(all == got);

  CHECK_THROWS_AS(split(ds, 1.5, 0), DataError);
}

TEST_CASE("different split seeds give different permutations") {
  auto imgs = bars_and_stripes(4, 4);
  SequenceDataset ds = make_sequence_dataset(imgs, 4);
  std::set<std::vector<std::vector<std::uint8_t>>> trains;
  for (std::uint64_t r = 0; r < 15; ++r)
    trains.insert(split(ds, 0.7, Rng::mix(0, r)).first.sequences);
  CHECK(trains.size() == 15);
}

TEST_CASE("dataset csv round trip is byte identical") {
  auto imgs = bars_and_stripes(2, 2);
  SequenceDataset ds = make_sequence_dataset(imgs, 2);
  ds.seed = 7;
  std::string text = dataset_to_csv(ds);
  CHECK(text == dataset_to_csv(ds));
  SequenceDataset back = dataset_from_csv(text);
  CHECK(back.sequences == ds.sequences);
  CHECK(back.rows == 2);
  CHECK(back.seed == 7);
  CHECK(dataset_to_csv(back) == text);

  const std::string path = "data_test_ds.csv";
  save_dataset(ds, path);
  SequenceDataset loaded = load_dataset(path);
  CHECK(loaded.sequences == ds.sequences);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_dataset("does-not-exist.csv"), DataError);
  CHECK_THROWS_AS(dataset_from_csv("1,2\n1\n"), DataError);
}
