#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "gaze/checkpoint.hpp"
#include "gaze/data.hpp"
#include "gaze/errors.hpp"
#include "test_util.hpp"

namespace {

std::vector<gaze::LabeledSequence> sample_dataset(uint64_t seed) {
  gaze::SynthConfig sc;
  sc.grid_side = 3;
  sc.depth = 4;
  sc.num_sequences = 2;
  sc.frames_per_sequence = 9;
  sc.step_cells = 1;
  sc.noise_sigma = 0.7;
  sc.rng_seed = seed;
  return gaze::synth_generate(sc);
}

}  // namespace

TEST_CASE("dataset save/load round-trips bit-exactly") {
  testutil::TempDir dir("gzds");
  auto data = sample_dataset(1);
  gaze::save_dataset(dir.file("a.gzds"), data);

  auto loaded = gaze::load_dataset(dir.file("a.gzds"));
  REQUIRE(loaded.size() == data.size());
  for (std::size_t s = 0; s < data.size(); ++s) {
    CHECK(loaded[s].name == data[s].name);
    CHECK(loaded[s].labels == data[s].labels);
    for (std::size_t t = 0; t < data[s].frames.size(); ++t) {
      CHECK(loaded[s].frames[t].regions == data[s].frames[t].regions);
    }
  }

  // save(load(x)) is byte-identical to the original file.
  gaze::save_dataset(dir.file("b.gzds"), loaded);
  CHECK(testutil::read_bytes(dir.file("a.gzds")) == testutil::read_bytes(dir.file("b.gzds")));
}

TEST_CASE("dataset loader rejects corruption with positioned errors") {
  testutil::TempDir dir("gzds_bad");
  auto data = sample_dataset(2);
  gaze::save_dataset(dir.file("ok.gzds"), data);
  auto bytes = testutil::read_bytes(dir.file("ok.gzds"));

  SUBCASE("bad magic") {
    auto bad = bytes;
    bad[0] = 'X';
    testutil::write_bytes(dir.file("bad.gzds"), bad);
    CHECK_THROWS_AS(gaze::load_dataset(dir.file("bad.gzds")), gaze::io_error);
  }

  SUBCASE("bad version") {
    auto bad = bytes;
    bad[4] = 9;
    testutil::write_bytes(dir.file("bad.gzds"), bad);
    CHECK_THROWS_AS(gaze::load_dataset(dir.file("bad.gzds")), gaze::io_error);
  }

  SUBCASE("truncation carries a byte offset and returns nothing partial") {
    auto bad = bytes;
    bad.resize(bytes.size() - 11);
    testutil::write_bytes(dir.file("bad.gzds"), bad);
    try {
      gaze::load_dataset(dir.file("bad.gzds"));
      FAIL("expected io_error");
    } catch (const gaze::io_error& e) {
      CHECK(e.offset() > 0);
      CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
  }

  SUBCASE("out-of-range label names the frame") {
    // Header: magic(4) version(4) count(8); sequence: name(4+len) T(8) K(8)
    // D(8) then labels. Patch label of frame 0 to K^2 = 9.
    std::size_t name_len = data[0].name.size();
    std::size_t label_at = 4 + 4 + 8 + 4 + name_len + 8 + 8 + 8;
    auto bad = bytes;
    bad[label_at] = 9;
    bad[label_at + 1] = 0;
    testutil::write_bytes(dir.file("bad.gzds"), bad);
    try {
      gaze::load_dataset(dir.file("bad.gzds"));
      FAIL("expected io_error");
    } catch (const gaze::io_error& e) {
      std::string msg = e.what();
      CHECK(msg.find("label 9") != std::string::npos);
      CHECK(msg.find("frame 0") != std::string::npos);
      CHECK(e.offset() == label_at);
    }
  }

  SUBCASE("trailing garbage is rejected") {
    auto bad = bytes;
    bad.push_back('\0');
    testutil::write_bytes(dir.file("bad.gzds"), bad);
    CHECK_THROWS_AS(gaze::load_dataset(dir.file("bad.gzds")), gaze::io_error);
  }

  SUBCASE("missing file") {
    CHECK_THROWS_AS(gaze::load_dataset(dir.file("nope.gzds")), gaze::io_error);
  }
}

TEST_CASE("checkpoint save/load round-trips bit-exactly") {
  testutil::TempDir dir("gzat");
  for (std::size_t layers : {std::size_t{1}, std::size_t{2}}) {
    auto model = testutil::random_model(5, 6, 7, layers, 99 + layers, 0.25);
    gaze::save_checkpoint(dir.file("m.gzat"), model);
    auto loaded = gaze::load_checkpoint(dir.file("m.gzat"));

    CHECK(loaded.config.grid_side == model.config.grid_side);
    CHECK(loaded.config.depth == model.config.depth);
    CHECK(loaded.config.hidden == model.config.hidden);
    CHECK(loaded.config.num_layers == model.config.num_layers);
    CHECK(loaded.config.dropout_rate == model.config.dropout_rate);

    bool identical = true;
    std::vector<double> a, b;
    model.for_each_param([&](const std::string&, const double* v, std::size_t n) {
      a.insert(a.end(), v, v + n);
    });
    loaded.for_each_param([&](const std::string&, const double* v, std::size_t n) {
      b.insert(b.end(), v, v + n);
    });
    identical = a == b;
    CHECK(identical);

    gaze::save_checkpoint(dir.file("m2.gzat"), loaded);
    CHECK(testutil::read_bytes(dir.file("m.gzat")) == testutil::read_bytes(dir.file("m2.gzat")));
  }
}

TEST_CASE("checkpoint loader rejects corruption") {
  testutil::TempDir dir("gzat_bad");
  auto model = testutil::random_model(3, 4, 5, 2, 7);
  gaze::save_checkpoint(dir.file("m.gzat"), model);
  auto bytes = testutil::read_bytes(dir.file("m.gzat"));

  SUBCASE("bad magic") {
    auto bad = bytes;
    bad[2] = 'q';
    testutil::write_bytes(dir.file("bad.gzat"), bad);
    CHECK_THROWS_AS(gaze::load_checkpoint(dir.file("bad.gzat")), gaze::io_error);
  }

  SUBCASE("truncated tensor payload") {
    auto bad = bytes;
    bad.resize(bytes.size() / 2);
    testutil::write_bytes(dir.file("bad.gzat"), bad);
    try {
      gaze::load_checkpoint(dir.file("bad.gzat"));
      FAIL("expected io_error");
    } catch (const gaze::io_error& e) {
      CHECK(e.offset() > 0);
    }
  }

  SUBCASE("implausible config block") {
    auto bad = bytes;
    for (int i = 0; i < 8; ++i) bad[8 + i] = 0;  // grid_side = 0
    testutil::write_bytes(dir.file("bad.gzat"), bad);
    CHECK_THROWS_AS(gaze::load_checkpoint(dir.file("bad.gzat")), gaze::io_error);
  }

  SUBCASE("non-finite parameter value") {
    // First tensor header: 44-byte prefix, name(4+12) rows(8) cols(8).
    std::size_t payload = 44 + 4 + 12 + 8 + 8;
    auto bad = bytes;
    for (int i = 0; i < 8; ++i) bad[payload + i] = static_cast<char>(0xff);  // -NaN
    testutil::write_bytes(dir.file("bad.gzat"), bad);
    CHECK_THROWS_AS(gaze::load_checkpoint(dir.file("bad.gzat")), gaze::io_error);
  }
}
