#include "doctest.h"

#include <numeric>

#include "lvs/dataset_io.hpp"
#include "lvs/errors.hpp"
#include "lvs/scenario.hpp"
#include "lvs/tube.hpp"
#include "test_support.hpp"

using namespace lvs;
using lvs::testing::SceneBuilder;
using lvs::testing::make_rect_tube;
using lvs::testing::read_file;
using lvs::testing::scratch_dir;
using lvs::testing::write_file;

TEST_CASE("frame mask run validation") {
  CHECK_NOTHROW(FrameMask::from_runs({{0, 0, 2}, {0, 2, 3}, {1, 0, 1}}));
  CHECK_THROWS_AS(FrameMask::from_runs({{0, 0, 0}}), ValidationError);
  CHECK_THROWS_AS(FrameMask::from_runs({{0, 2, 2}, {0, 0, 2}}), ValidationError);
  CHECK_THROWS_AS(FrameMask::from_runs({{0, 0, 3}, {0, 2, 2}}), ValidationError);
  CHECK_THROWS_AS(FrameMask::from_runs({{1, 0, 1}, {0, 0, 1}}), ValidationError);
}

TEST_CASE("frame mask pixel round trip and intersection") {
  const std::vector<Pixel> px = {{3, 1}, {1, 1}, {2, 1}, {5, 2}, {1, 1}};
  const FrameMask mask = FrameMask::from_pixels(px);
  CHECK(mask.area() == 4);
  CHECK(mask.runs().size() == 2);  // duplicates removed, adjacent merged
  CHECK(mask.pixels() == std::vector<Pixel>{{1, 1}, {2, 1}, {3, 1}, {5, 2}});
  CHECK(mask.contains({2, 1}));
  CHECK_FALSE(mask.contains({4, 1}));

  const FrameMask other = FrameMask::from_pixels(
      std::vector<Pixel>{{2, 1}, {3, 1}, {4, 1}, {0, 0}});
  CHECK(mask.intersection_area(other) == 2);
  CHECK(other.intersection_area(mask) == 2);
  CHECK(mask.intersection_area(FrameMask{}) == 0);
}

TEST_CASE("active_pixels basics") {
  Tube tube;
  tube.id = 7;
  tube.camera = 1;
  tube.masks.push_back(FrameMask::from_pixels(std::vector<Pixel>{{0, 0}, {1, 0}}));

  CHECK(tube.active_pixels(0) == std::vector<Pixel>{{0, 0}, {1, 0}});
  CHECK_THROWS_AS(tube.active_pixels(1), OutOfRangeError);
  CHECK_THROWS_AS(tube.active_pixels(-1), OutOfRangeError);
}

TEST_CASE("active_pixels of a synthetic walker frame") {
  WalkSpec walk;
  walk.x0 = 2.25;
  walk.y0 = 1.0;
  walk.vx = 0.5;
  walk.vy = 0.25;
  walk.width = 3;
  walk.height = 2;
  walk.frames = 10;

  Tube tube;
  tube.id = 0;
  tube.camera = 1;
  for (FrameIndex t = 0; t < walk.frames; ++t) {
    tube.masks.push_back(rasterize_walk_frame(walk, t));
  }

  // Recomputed from the trajectory formula: x = round(2.25 + 0.5*5) = 5,
  // y = round(1.0 + 0.25*5) = 2, rectangle 3x2.
  std::vector<Pixel> expected;
  for (int y = 2; y < 4; ++y) {
    for (int x = 5; x < 8; ++x) expected.push_back({x, y});
  }
  CHECK(tube.active_pixels(5) == expected);
}

TEST_CASE("total active pixels matches per-frame sum") {
  const Tube tube = make_rect_tube(0, 1, 2, 3, 4, 5, 7);
  std::int64_t sum = 0;
  for (FrameIndex t = 0; t < tube.length(); ++t) {
    sum += static_cast<std::int64_t>(tube.active_pixels(t).size());
  }
  CHECK(sum == tube.total_active_pixels());
  CHECK(sum == 4 * 5 * 7);
}

namespace {

const char* kHandManifest = R"({
  "episode_frames": 20,
  "cameras": [
    {"id": 0, "role": "master", "width": 8, "height": 6, "fps": 5, "background": "bg_0.ppm"},
    {"id": 1, "role": "slave", "width": 8, "height": 6, "fps": 5, "background": "bg_1.ppm"}
  ],
  "tubes": [
    {"tube_id": 0, "camera": 1, "source_start": 3, "color": [255, 0, 0],
     "frames": [[[0, 0, 2]], [[1, 1, 1]]]},
    {"tube_id": 1, "camera": 1, "source_start": 9,
     "frames": [[[2, 4, 3]]]}
  ],
  "master_detections": [
    {"frame": 0, "object_ids": [1]},
    {"frame": 10, "object_ids": [1, 2]}
  ],
  "reid": {"0": {"1": 0.75}, "1": {"2": 0.5}}
})";

void write_hand_scene(const std::filesystem::path& dir) {
  write_file(dir / "scene.json", kHandManifest);
  write_ppm(Image(8, 6, Rgb{10, 10, 10}), dir / "bg_0.ppm");
  write_ppm(Image(8, 6, Rgb{12, 12, 12}), dir / "bg_1.ppm");
}

}  // namespace

TEST_CASE("load_dataset round-trips a hand-written fixture") {
  const auto dir = scratch_dir("tube_hand_fixture");
  write_hand_scene(dir);

  const Dataset ds = load_dataset(dir);
  CHECK(ds.cameras.size() == 2);
  CHECK(ds.master_camera().id == 0);
  CHECK(ds.tubes_of(1).size() == 2);  // |B_v| = 2 for the slave
  CHECK(ds.tubes[0].masks.size() == 2);
  CHECK(ds.tubes[0].active_pixels(0) == std::vector<Pixel>{{0, 0}, {1, 0}});
  CHECK(ds.reid.probability(0, 1) == 0.75);
  CHECK(ds.reid.probability(0, 2) == 0.0);
  CHECK(ds.episode_frames == 20);
  CHECK(ds.observations_at(4)->objects == std::vector<ObjectId>{1});
  CHECK(ds.observations_at(10)->objects == std::vector<ObjectId>{1, 2});
  CHECK(ds.observations_at(-1) == nullptr);
}

TEST_CASE("save after load is canonical and byte-stable") {
  const auto dir = scratch_dir("tube_roundtrip");
  write_hand_scene(dir / "orig");

  const Dataset ds = load_dataset(dir / "orig");
  save_dataset(ds, dir / "a");
  const Dataset ds2 = load_dataset(dir / "a");
  save_dataset(ds2, dir / "b");

  CHECK(read_file(dir / "a" / "scene.json") == read_file(dir / "b" / "scene.json"));
  CHECK(read_file(dir / "a" / "bg_1.ppm") == read_file(dir / "b" / "bg_1.ppm"));
}

TEST_CASE("out-of-bounds pixel names the offending tube") {
  const auto dir = scratch_dir("tube_oob");
  std::string manifest = kHandManifest;
  // x0 = 8 == width puts the run outside the camera.
  const std::string needle = "[[2, 4, 3]]";
  manifest.replace(manifest.find(needle), needle.size(), "[[2, 8, 1]]");
  write_file(dir / "scene.json", manifest);
  write_ppm(Image(8, 6, Rgb{10, 10, 10}), dir / "bg_0.ppm");
  write_ppm(Image(8, 6, Rgb{12, 12, 12}), dir / "bg_1.ppm");

  try {
    load_dataset(dir);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("tube 1") != std::string::npos);
  }
}

TEST_CASE("empty frames are trimmed at the edges, rejected inside") {
  const auto dir = scratch_dir("tube_trim");
  std::string manifest = kHandManifest;
  const std::string needle = R"("frames": [[[0, 0, 2]], [[1, 1, 1]]])";
  REQUIRE(manifest.find(needle) != std::string::npos);

  SUBCASE("leading and trailing empties trim and shift source_start") {
    manifest.replace(manifest.find(needle), needle.size(),
                     R"("frames": [[], [[0, 0, 2]], [[1, 1, 1]], []])");
    write_file(dir / "scene.json", manifest);
    write_ppm(Image(8, 6, Rgb{10, 10, 10}), dir / "bg_0.ppm");
    write_ppm(Image(8, 6, Rgb{12, 12, 12}), dir / "bg_1.ppm");
    const Dataset ds = load_dataset(dir);
    CHECK(ds.tubes[0].masks.size() == 2);
    CHECK(ds.tubes[0].source_start == 4);  // one leading empty trimmed
  }

  SUBCASE("interior empty frame is an error naming the tube") {
    manifest.replace(manifest.find(needle), needle.size(),
                     R"("frames": [[[0, 0, 2]], [], [[1, 1, 1]]])");
    write_file(dir / "scene.json", manifest);
    write_ppm(Image(8, 6, Rgb{10, 10, 10}), dir / "bg_0.ppm");
    write_ppm(Image(8, 6, Rgb{12, 12, 12}), dir / "bg_1.ppm");
    try {
      load_dataset(dir);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("tube 0") != std::string::npos);
    }
  }
}

TEST_CASE("load accepts a direct manifest path and ppm comments") {
  const auto dir = scratch_dir("tube_direct_path");
  write_hand_scene(dir);
  // Comment lines between header tokens are legal PPM.
  std::string ppm = read_file(dir / "bg_0.ppm");
  ppm.insert(3, "# a comment\n");
  write_file(dir / "bg_0.ppm", ppm);

  const Dataset ds = load_dataset(dir / "scene.json");
  CHECK(ds.cameras.size() == 2);
  CHECK(ds.backgrounds.at(0).at(0, 0) == Rgb{10, 10, 10});
}

TEST_CASE("malformed manifest raises ParseError") {
  const auto dir = scratch_dir("tube_parse");
  write_file(dir / "scene.json", "{not json");
  CHECK_THROWS_AS(load_dataset(dir), ParseError);

  write_file(dir / "scene.json", R"({"episode_frames": 1})");
  CHECK_THROWS_AS(load_dataset(dir), ParseError);  // missing cameras
}

TEST_CASE("dataset invariants are rejected") {
  SUBCASE("two masters") {
    SceneBuilder builder(16, 12, 10, 1);
    Dataset ds = builder.episode(10).build();
    ds.cameras[1].role = CameraRole::Master;
    CHECK_THROWS_AS(validate(ds), ValidationError);
  }
  SUBCASE("tube on master camera") {
    SceneBuilder builder(16, 12, 10, 1);
    builder.add_tube(make_rect_tube(0, 0, 0, 0, 2, 2, 3));
    CHECK_THROWS_AS(builder.episode(10).build(), ValidationError);
  }
  SUBCASE("dangling reid tube reference") {
    SceneBuilder builder(16, 12, 10, 1);
    builder.reid(99, 0, 0.5);
    CHECK_THROWS_AS(builder.episode(10).build(), ValidationError);
  }
  SUBCASE("non-increasing master timeline") {
    SceneBuilder builder(16, 12, 10, 1);
    builder.observe(5, {0}).observe(5, {1});
    CHECK_THROWS_AS(builder.episode(10).build(), ValidationError);
  }
  SUBCASE("fps mismatch across cameras") {
    SceneBuilder builder(16, 12, 10, 1);
    Dataset ds = builder.episode(10).build();
    ds.cameras[1].fps = 20;
    CHECK_THROWS_AS(validate(ds), ValidationError);
  }
}

TEST_CASE("generated scene round-trips through save/load field by field") {
  ScenarioConfig cfg;
  cfg.seed = 11;
  cfg.num_slaves = 3;  // stadium-like: three slaves, one master
  cfg.num_persons = 2;
  cfg.walks_per_person = 2;
  cfg.canvas_width = 48;
  cfg.canvas_height = 36;
  cfg.episode_frames = 120;
  cfg.walk_frames_min = 20;
  cfg.walk_frames_max = 40;
  cfg.rect_min = 4;
  cfg.rect_max = 8;
  cfg.confusion_temperature = 0.5;
  cfg.top1_recall = 0.7;
  const GeneratedScene scene = generate(cfg);
  CHECK(scene.dataset.slave_ids().size() == 3);
  for (const CameraId cam : scene.dataset.slave_ids()) {
    CHECK(!scene.dataset.tubes_of(cam).empty());  // three candidate pools
  }

  const auto dir = scratch_dir("tube_gen_roundtrip");
  save_dataset(scene.dataset, dir);
  const Dataset loaded = load_dataset(dir);

  CHECK(loaded.episode_frames == scene.dataset.episode_frames);
  REQUIRE(loaded.cameras.size() == scene.dataset.cameras.size());
  for (std::size_t i = 0; i < loaded.cameras.size(); ++i) {
    CHECK(loaded.cameras[i].id == scene.dataset.cameras[i].id);
    CHECK(loaded.cameras[i].role == scene.dataset.cameras[i].role);
    CHECK(loaded.cameras[i].width == scene.dataset.cameras[i].width);
    CHECK(loaded.cameras[i].height == scene.dataset.cameras[i].height);
    CHECK(loaded.cameras[i].fps == scene.dataset.cameras[i].fps);
  }
  REQUIRE(loaded.tubes.size() == scene.dataset.tubes.size());
  for (std::size_t i = 0; i < loaded.tubes.size(); ++i) {
    CHECK(loaded.tubes[i].id == scene.dataset.tubes[i].id);
    CHECK(loaded.tubes[i].camera == scene.dataset.tubes[i].camera);
    CHECK(loaded.tubes[i].source_start == scene.dataset.tubes[i].source_start);
    CHECK(loaded.tubes[i].masks == scene.dataset.tubes[i].masks);
    CHECK(loaded.tubes[i].color == scene.dataset.tubes[i].color);
  }
  REQUIRE(loaded.master_timeline.size() == scene.dataset.master_timeline.size());
  for (std::size_t i = 0; i < loaded.master_timeline.size(); ++i) {
    CHECK(loaded.master_timeline[i].frame == scene.dataset.master_timeline[i].frame);
    CHECK(loaded.master_timeline[i].objects == scene.dataset.master_timeline[i].objects);
  }
  CHECK(loaded.reid.entries() == scene.dataset.reid.entries());
  CHECK(loaded.backgrounds == scene.dataset.backgrounds);
}
