#pragma once

#include <filesystem>

#include "lvs/energy.hpp"
#include "lvs/scheduler.hpp"
#include "lvs/tube.hpp"

namespace lvs {

struct Contributor {
  TubeId tube = 0;
  FrameIndex local_t = 0;

  friend bool operator==(const Contributor&, const Contributor&) = default;
};

// One rendered output frame plus the tubes painted into it, in paint order.
struct FrameComposite {
  CameraId camera = 0;
  FrameIndex frame = 0;
  Image image;
  std::vector<Contributor> contributors;
};

// Paints every placed tube active at `frame` over the background at its
// original (x, y). Overlaps resolve by z-order: later playback_start on top,
// ties to the higher tube id. Pixels outside the active masks keep the
// background value exactly.
FrameComposite compose_frame(const Image& background,
                             std::span<const PlacedTube> placed,
                             const TubeLookup& tubes, CameraId camera,
                             FrameIndex frame);

enum class Layout { PerSlave, SideBySide };

// Writes numbered frames for the whole episode under out_dir:
//   PerSlave:   <out_dir>/<camera_id>/frame_%06d.ppm, one dir per slave
//   SideBySide: <out_dir>/combined/frame_%06d.ppm, master pane left then
//               slaves in camera-id order, 2px black separator columns.
// The master pane shows the master background (the dataset carries no master
// video). Throws IoError with the offending path.
void render_episode(const Dataset& dataset, const Schedule& schedule,
                    Layout layout, const std::filesystem::path& out_dir);

}  // namespace lvs
