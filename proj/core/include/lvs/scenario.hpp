#pragma once

#include <cstdint>
#include <vector>

#include "lvs/tube.hpp"

namespace lvs {

// One master-view presence window for a person: [enter, leave).
struct MasterStay {
  int person = 0;
  FrameIndex enter = 0;
  FrameIndex leave = 0;
};

// Synthetic scene parameters. Walks are linear-trajectory rectangles; the
// re-id matrix is ground truth perturbed so the empirical top-1 accuracy
// lands near top1_recall.
// Defaults describe a busy desk-scale scene: slow, long walks on a small
// canvas keep several tubes contending at once, so the collision threshold
// has real work to do.
struct ScenarioConfig {
  std::uint64_t seed = 42;
  int num_slaves = 3;
  int canvas_width = 64;
  int canvas_height = 48;
  int fps = 10;
  int num_persons = 3;
  int walks_per_person = 5;  // per slave
  double speed_min = 0.5;    // pixels per frame
  double speed_max = 1.0;
  int rect_min = 12;  // person rectangle side, pixels
  int rect_max = 18;
  int walk_frames_min = 110;
  int walk_frames_max = 180;
  FrameIndex episode_frames = 450;

  // Empty means auto-generated: one stay per person, biased toward long
  // co-presence.
  std::vector<MasterStay> master_stays;

  double top1_recall = 1.0;
  double confusion_temperature = 0.0;  // 0 selects hard one-hot rows

  // Throws ConfigError when any field is out of bounds.
  void validate() const;
};

struct GeneratedScene {
  Dataset dataset;
  GroundTruth ground_truth;
};

// Deterministic in cfg.seed: identical configs produce identical datasets,
// ground truth included.
GeneratedScene generate(const ScenarioConfig& cfg);

// The trajectory primitive the generator rasterizes: a width x height
// rectangle whose top-left corner sits at (round(x0 + vx*t), round(y0 + vy*t))
// at local frame t.
struct WalkSpec {
  double x0 = 0.0;
  double y0 = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  int width = 1;
  int height = 1;
  FrameIndex frames = 1;
};

FrameMask rasterize_walk_frame(const WalkSpec& walk, FrameIndex t);

}  // namespace lvs
