#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "dualdi/augment.hpp"
#include "dualdi/error.hpp"
#include "dualdi/synthgen.hpp"
#include "test_support.hpp"

using namespace dualdi;
namespace dt = dualdi::testing;

namespace {

FrameSequence moving_square(int T, int side = 8) {
  FrameSequence s;
  for (int t = 0; t < T; ++t) {
    Frame f(side, side, 1, 0.0);
    for (int y = 2; y < 4; ++y)
      for (int x = t; x < t + 2 && x < side; ++x) f.at(x, y) = 200.0;
    s.frames.push_back(f);
  }
  return s;
}

SynthDataset small_dataset(int n, std::uint64_t seed = 9) {
  SynthJitter j;
  j.width = 24;
  j.height = 24;
  return synth_dataset(n, 3, seed, j);
}

}  // namespace

TEST_SUITE("phase split") {
  TEST_CASE("ranges share the apex") {
    auto [a, b] = split_phases({"s", "p", 5, 12, 30, "x"});
    CHECK(a == FrameRange{5, 12});
    CHECK(b == FrameRange{12, 30});
    std::tie(a, b) = split_phases({"s", "p", 7, 7, 7, "x"});
    CHECK(a == FrameRange{7, 7});
    CHECK(b == FrameRange{7, 7});
    std::tie(a, b) = split_phases({"s", "p", 1, 1, 4, "x"});
    CHECK(a == FrameRange{1, 1});
    CHECK(b == FrameRange{1, 4});
  }
}

TEST_SUITE("phase encoding") {
  TEST_CASE("two-frame rise is the frame difference") {
    const auto seq = moving_square(2);
    const auto di = encode_onset_phase(seq, {"s", "p", 1, 2, 2, "x"});
    REQUIRE(di.has_value());
    CHECK(di->phase == Phase::Onset);
    // Square moves one pixel right: leading column brightens, trailing darkens.
    for (int y = 0; y < 8; ++y)
      for (int x = 0; x < 8; ++x) {
        double want = 0.0;
        if (y >= 2 && y < 4 && x == 2) want = 200.0;
        if (y >= 2 && y < 4 && x == 0) want = -200.0;
        CHECK(di->raw.at(x, y) == want);
      }
  }

  TEST_CASE("degenerate segments are skipped") {
    const auto seq = moving_square(5);
    CHECK_FALSE(encode_onset_phase(seq, {"s", "p", 3, 3, 5, "x"}).has_value());
    CHECK_FALSE(encode_offset_phase(seq, {"s", "p", 1, 5, 5, "x"}).has_value());
  }

  TEST_CASE("constant rise pools to zero") {
    FrameSequence seq;
    seq.frames.assign(6, Frame(4, 4, 3, 17.0));
    const auto di = encode_onset_phase(seq, {"s", "p", 1, 4, 6, "x"});
    REQUIRE(di.has_value());
    for (double v : di->raw.data) CHECK(v == 0.0);
  }

  TEST_CASE("two-frame fall weights the apex positively") {
    std::mt19937_64 gen(8);
    FrameSequence seq;
    for (int t = 0; t < 4; ++t) seq.frames.push_back(dt::random_real_frame(gen, 3, 3, 3));
    const auto di = encode_offset_phase(seq, {"s", "p", 1, 3, 4, "x"});
    REQUIRE(di.has_value());
    CHECK(di->phase == Phase::Offset);
    for (std::size_t i = 0; i < di->raw.data.size(); ++i)
      CHECK(di->raw.data[i] == seq.frames[2].data[i] - seq.frames[3].data[i]);
  }

  TEST_CASE("palindromic clip gives equal onset and offset images") {
    std::mt19937_64 gen(12);
    for (int half = 1; half <= 6; ++half) {
      FrameSequence seq;
      std::vector<Frame> rise;
      for (int t = 0; t <= half; ++t) rise.push_back(dt::random_real_frame(gen, 5, 4, 3));
      seq.frames = rise;
      for (int t = half - 1; t >= 0; --t) seq.frames.push_back(rise[t]);
      const ExpressionAnnotation ann{"s", "p", 1, half + 1, 2 * half + 1, "x"};
      const auto on = encode_onset_phase(seq, ann);
      const auto off = encode_offset_phase(seq, ann);
      REQUIRE(on.has_value());
      REQUIRE(off.has_value());
      CHECK(on->raw == off->raw);
    }
  }
}

TEST_SUITE("spatial transforms") {
  TEST_CASE("flip") {
    ByteImage img(2, 1, 1);
    img.data = {3, 9};
    CHECK(flip_horizontal(img).data == std::vector<std::uint8_t>{9, 3});
    std::mt19937_64 gen(1);
    const Frame f = dt::random_real_frame(gen, 7, 4, 3);
    CHECK(flip_horizontal(flip_horizontal(f)) == f);
    Frame sym(4, 2, 1);
    sym.data = {1, 2, 2, 1, 5, 6, 6, 5};
    CHECK(flip_horizontal(sym) == sym);
  }

  TEST_CASE("flip keeps channel order within a pixel") {
    Frame f(2, 1, 3);
    f.data = {1, 2, 3, 4, 5, 6};
    CHECK(flip_horizontal(f).data == std::vector<double>{4, 5, 6, 1, 2, 3});
  }

  TEST_CASE("zero rotation is the identity") {
    std::mt19937_64 gen(2);
    const Frame f = dt::random_pixel_frame(gen, 9, 7, 3);
    CHECK(rotate(f, 0.0, 128.0) == f);
    const ByteImage b = quantize(f);
    CHECK(rotate(b, 0.0, 128) == b);
  }

  TEST_CASE("constant raster with matching fill is unchanged") {
    const Frame c(11, 8, 1, 64.0);
    for (double a : {-45.0, -10.0, 3.3, 10.0, 45.0}) {
      const Frame r = rotate(c, a, 64.0);
      CHECK(r.width == 11);
      CHECK(r.height == 8);
      CHECK(dt::max_abs_diff(r, c) <= 1e-9);
    }
  }

  TEST_CASE("angle bound") {
    const Frame c(4, 4, 1);
    CHECK_THROWS_AS(rotate(c, 45.01, 0.0), Error);
    CHECK_THROWS_AS(rotate(c, -60.0, 0.0), Error);
    CHECK_NOTHROW(rotate(c, -45.0, 0.0));
  }

  TEST_CASE("quarter-turn direction is counter-clockwise as displayed") {
    // A pixel right of center moves above center.
    Frame f(5, 5, 1, 0.0);
    f.at(4, 2) = 255.0;
    const Frame r = rotate(f, 45.0, 0.0);
    double top = 0.0, bottom = 0.0;
    for (int y = 0; y < 2; ++y)
      for (int x = 0; x < 5; ++x) top += r.at(x, y);
    for (int y = 3; y < 5; ++y)
      for (int x = 0; x < 5; ++x) bottom += r.at(x, y);
    CHECK(top > bottom);
  }

  TEST_CASE("rotate by +10 then -10 stays close on the interior") {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 20; ++trial) {
      const int side = 48 + static_cast<int>(gen() % 32);
      const Frame f = dt::smooth_frame(gen, side, side, 1);
      const Frame back = rotate(rotate(f, 10.0, 128.0), -10.0, 128.0);
      double err = 0.0;
      int n = 0;
      const int m = side / 6;
      for (int y = m; y < side - m; ++y)
        for (int x = m; x < side - m; ++x) {
          err += std::abs(back.at(x, y) - f.at(x, y));
          ++n;
        }
      CHECK(err / n <= 2.0);
    }
  }

  TEST_CASE("drawn angles are bounded, rounded and reproducible") {
    std::set<double> seen;
    for (int i = 0; i < 200; ++i) {
      const std::string id = "s" + std::to_string(i);
      const double a = draw_rotation_angle(42, id, "full", 10.0);
      CHECK(std::abs(a) <= 10.0);
      CHECK(std::round(a * 100.0) / 100.0 == a);
      CHECK(a == draw_rotation_angle(42, id, "full", 10.0));
      seen.insert(a);
    }
    CHECK(seen.size() > 150);
    CHECK(draw_rotation_angle(42, "s1", "full", 10.0) != draw_rotation_angle(43, "s1", "full", 10.0));
  }
}

TEST_SUITE("config") {
  TEST_CASE("names round-trip") {
    for (const char* n : {"none", "flip_rotate", "dual", "dual_flip_rotate"}) {
      CHECK(AugmentConfig::from_name(n).name() == n);
    }
    CHECK_THROWS_AS(AugmentConfig::from_name("bogus"), Error);
    AugmentConfig c = AugmentConfig::from_name("flip_rotate");
    CHECK(c.enable_flip);
    CHECK(c.enable_rotation);
    CHECK_FALSE(c.enable_dual_di);
    c.rotation_limit = 0.0;
    CHECK_THROWS_AS(c.validate(), Error);
  }

  TEST_CASE("file stems") {
    AugmentedSample s;
    s.origin = "s007";
    s.transform_tags = {"offset", "rot-345"};
    CHECK(s.file_stem() == "s007__offset__rot-345");
  }
}

TEST_SUITE("expansion") {
  TEST_CASE("sample counts per configuration") {
    const auto ds = small_dataset(10);
    AugmentConfig none;
    CHECK(expand_training_set(ds.manifest, ds.sequences, none).size() == 10);

    AugmentConfig dual = AugmentConfig::from_name("dual");
    const auto d = expand_training_set(ds.manifest, ds.sequences, dual);
    CHECK(d.size() == 30);
    int eval = 0;
    for (const auto& s : d) eval += s.split_role == SplitRole::Eval;
    CHECK(eval == 10);

    const auto all = expand_training_set(ds.manifest, ds.sequences, AugmentConfig::from_name("dual_flip_rotate"));
    CHECK(all.size() == 90);
    const auto fr = expand_training_set(ds.manifest, ds.sequences, AugmentConfig::from_name("flip_rotate"));
    CHECK(fr.size() == 30);
  }

  TEST_CASE("roles, labels, tags and sizes") {
    const auto ds = small_dataset(6);
    AugmentConfig cfg = AugmentConfig::from_name("dual_flip_rotate");
    cfg.output_side = 40;
    const auto out = expand_training_set(ds.manifest, ds.sequences, cfg, 3);
    std::set<std::string> stems;
    for (const auto& s : out) {
      const auto& e = *std::find_if(ds.manifest.entries.begin(), ds.manifest.entries.end(),
                                    [&](const ManifestEntry& m) { return m.annotation.sequence_id == s.origin; });
      CHECK(s.label == e.annotation.label);
      CHECK(s.image.width == 40);
      CHECK(s.image.height == 40);
      REQUIRE_FALSE(s.transform_tags.empty());
      CHECK(s.transform_tags[0] == phase_name(s.phase));
      int phase_tags = 0;
      for (const auto& t : s.transform_tags) phase_tags += (t == "full" || t == "onset" || t == "offset");
      CHECK(phase_tags == 1);
      const bool plain_full = s.phase == Phase::Full && s.transform_tags.size() == 1;
      CHECK((s.split_role == SplitRole::Eval) == plain_full);
      if (s.phase != Phase::Full) CHECK(s.split_role == SplitRole::TrainOnly);
      CHECK(stems.insert(s.file_stem()).second);
    }
    // Fixed order for the first sequence.
    const std::string id = ds.manifest.entries[0].annotation.sequence_id;
    CHECK(out[0].file_stem() == id + "__full");
    CHECK(out[1].file_stem() == id + "__full__flip");
    CHECK(out[2].transform_tags[1].rfind("rot", 0) == 0);
    CHECK(out[3].file_stem() == id + "__onset");
    CHECK(out[6].file_stem() == id + "__offset");
  }

  TEST_CASE("degenerate fall is skipped with one warning") {
    auto ds = small_dataset(3);
    auto& ann = ds.manifest.entries[1].annotation;
    ann.apex = ann.offset;
    std::vector<std::string> warnings;
    const auto out = expand_training_set(ds.manifest, ds.sequences, AugmentConfig::from_name("dual"), 2,
                                         [&](const std::string& w) { warnings.push_back(w); });
    CHECK(out.size() == 8);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find(ann.sequence_id) != std::string::npos);
    CHECK(warnings[0].find("offset") != std::string::npos);

    ExpressionAnnotation solo = ann;
    const auto one = expand_sequence(ds.sequences[1], solo, AugmentConfig::from_name("dual"),
                                     [](const std::string&) {});
    REQUIRE(one.size() == 2);
    CHECK(one[0].phase == Phase::Full);
    CHECK(one[1].phase == Phase::Onset);
  }

  TEST_CASE("output does not depend on thread count") {
    const auto ds = small_dataset(9, 21);
    const auto cfg = AugmentConfig::from_name("dual_flip_rotate");
    const auto a = expand_training_set(ds.manifest, ds.sequences, cfg, 1);
    const auto b = expand_training_set(ds.manifest, ds.sequences, cfg, 8);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].image == b[i].image);
      CHECK(a[i].file_stem() == b[i].file_stem());
    }
  }

  TEST_CASE("static clip encodes to mid-gray") {
    SynthParams p;
    p.peak_amplitude = 0.0;
    const auto s = synth_sequence(p);
    AugmentConfig cfg;
    cfg.output_side = 16;
    const auto out = expand_sequence(s.sequence, s.annotation, cfg);
    REQUIRE(out.size() == 1);
    for (auto v : out[0].image.data) CHECK(v == 128);
  }
}
