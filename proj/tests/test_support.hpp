#pragma once

// Shared fixtures and independent oracles for the unit and acceptance suites.
// The oracles deliberately avoid the library's summation paths: collisions are
// recounted on a dense voxel grid and the identity term is re-evaluated from
// its definition, so agreement is meaningful.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "lvs/energy.hpp"
#include "lvs/scheduler.hpp"
#include "lvs/tube.hpp"

namespace lvs::testing {

// Discounted co-occupancy recount: rasterize every active placement per frame
// and add C(k, 2) * d^(tau - now) per voxel covered k times.
inline double voxel_collision_oracle(const Selection& sel, const TubeLookup& tubes,
                                     int width, int height, double discount) {
  FrameIndex horizon = sel.now;
  for (const PlacedTube& p : sel.placed) {
    horizon = std::max(horizon, placed_end(p, tubes.at(p.tube)));
  }
  std::vector<int> grid(static_cast<std::size_t>(width) * height, 0);
  double total = 0.0;
  for (FrameIndex tau = sel.now; tau < horizon; ++tau) {
    std::fill(grid.begin(), grid.end(), 0);
    for (const PlacedTube& p : sel.placed) {
      const Tube& tube = tubes.at(p.tube);
      if (!placed_active_at(p, tube, tau)) continue;
      const FrameIndex local = p.local_offset + (tau - p.playback_start);
      for (const Pixel& px : tube.active_pixels(local)) {
        ++grid[static_cast<std::size_t>(px.y) * width + px.x];
      }
    }
    double frame_pairs = 0.0;
    for (const int k : grid) {
      if (k >= 2) frame_pairs += 0.5 * k * (k - 1);
    }
    if (frame_pairs != 0.0) {
      total += frame_pairs * std::pow(discount, static_cast<double>(tau - sel.now));
    }
  }
  return total;
}

// Straight evaluation of the identity objective from its definition.
inline double direct_identity(const std::vector<TubeId>& selected,
                              const std::set<TubeId>& prev,
                              const std::vector<ObjectId>& objects,
                              const ReidMatrix& reid, double beta) {
  double total = 0.0;
  for (const ObjectId o : objects) {
    double inner = 0.0;
    for (const TubeId b : selected) {
      const double w = prev.count(b) != 0 ? 1.0 + beta : 1.0;
      inner += w * reid.probability(b, o);
    }
    total += std::sqrt(inner);
  }
  return total;
}

// A tube whose mask is the same solid rectangle in every frame.
inline Tube make_rect_tube(TubeId id, CameraId camera, int x, int y, int w, int h,
                           int frames, Rgb color = {200, 60, 60}) {
  Tube tube;
  tube.id = id;
  tube.camera = camera;
  tube.color = color;
  std::vector<MaskRun> runs;
  for (int row = 0; row < h; ++row) runs.push_back({y + row, x, w});
  const FrameMask mask = FrameMask::from_runs(std::move(runs));
  tube.masks.assign(static_cast<std::size_t>(frames), mask);
  return tube;
}

// Minimal valid dataset: master camera 0 plus `slaves` slave cameras, flat
// backgrounds, no tubes or detections until added.
class SceneBuilder {
 public:
  explicit SceneBuilder(int width = 32, int height = 24, int fps = 10, int slaves = 1) {
    CameraInfo master;
    master.id = 0;
    master.role = CameraRole::Master;
    master.width = width;
    master.height = height;
    master.fps = fps;
    ds_.cameras.push_back(master);
    ds_.backgrounds[0] = Image(width, height, Rgb{20, 20, 24});
    for (int v = 1; v <= slaves; ++v) {
      CameraInfo cam = master;
      cam.id = v;
      cam.role = CameraRole::Slave;
      ds_.cameras.push_back(cam);
      ds_.backgrounds[v] = Image(width, height, Rgb{20, 20, 24});
    }
  }

  SceneBuilder& add_tube(Tube tube) {
    ds_.tubes.push_back(std::move(tube));
    return *this;
  }

  SceneBuilder& observe(FrameIndex frame, std::vector<ObjectId> objects) {
    std::sort(objects.begin(), objects.end());
    ds_.master_timeline.push_back({frame, std::move(objects)});
    return *this;
  }

  SceneBuilder& reid(TubeId tube, ObjectId object, double p) {
    ds_.reid.set(tube, object, p);
    return *this;
  }

  SceneBuilder& episode(FrameIndex frames) {
    ds_.episode_frames = frames;
    return *this;
  }

  Dataset build() {
    std::sort(ds_.tubes.begin(), ds_.tubes.end(),
              [](const Tube& a, const Tube& b) { return a.id < b.id; });
    std::sort(ds_.master_timeline.begin(), ds_.master_timeline.end(),
              [](const MasterObservationSet& a, const MasterObservationSet& b) {
                return a.frame < b.frame;
              });
    validate(ds_);
    return ds_;
  }

 private:
  Dataset ds_;
};

// Fresh scratch directory under the current working directory (the build
// tree when run via ctest).
inline std::filesystem::path scratch_dir(const std::string& name) {
  const std::filesystem::path dir = std::filesystem::current_path() / "test_tmp" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

#ifdef LVS_CLI_PATH
// Runs the lvs binary; returns its exit code. Output is captured to files in
// `dir` to keep test logs clean.
inline int run_cli(const std::filesystem::path& dir, const std::string& args) {
  const std::string cmd = std::string(LVS_CLI_PATH) + " " + args + " > " +
                          (dir / "stdout.txt").string() + " 2> " +
                          (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}
#endif

}  // namespace lvs::testing
