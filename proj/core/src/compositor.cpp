#include "lvs/compositor.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

#include "lvs/errors.hpp"

namespace lvs {

namespace {

std::string frame_filename(FrameIndex frame) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06lld.ppm", static_cast<long long>(frame));
  return buf;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory: " + dir.string());
}

}  // namespace

FrameComposite compose_frame(const Image& background,
                             std::span<const PlacedTube> placed,
                             const TubeLookup& tubes, CameraId camera,
                             FrameIndex frame) {
  FrameComposite out;
  out.camera = camera;
  out.frame = frame;
  out.image = background;

  std::vector<const PlacedTube*> active;
  for (const PlacedTube& p : placed) {
    const Tube& tube = tubes.at(p.tube);
    if (tube.camera != camera) {
      throw ValidationError("tube " + std::to_string(p.tube) + " belongs to camera " +
                            std::to_string(tube.camera) + ", not " +
                            std::to_string(camera));
    }
    if (placed_active_at(p, tube, frame)) active.push_back(&p);
  }
  // Paint order = z-order: later playback_start on top, ties to higher id.
  std::sort(active.begin(), active.end(), [](const PlacedTube* a, const PlacedTube* b) {
    return a->playback_start < b->playback_start ||
           (a->playback_start == b->playback_start && a->tube < b->tube);
  });

  for (const PlacedTube* p : active) {
    const Tube& tube = tubes.at(p->tube);
    const FrameIndex local_t = p->local_offset + (frame - p->playback_start);
    const FrameMask& mask = tube.mask_at(local_t);
    int pixel_index = 0;
    for (const MaskRun& run : mask.runs()) {
      for (int i = 0; i < run.len; ++i) {
        out.image.set(run.x0 + i, run.y, tube.pixel_color(local_t, pixel_index));
        ++pixel_index;
      }
    }
    out.contributors.push_back({p->tube, local_t});
  }
  return out;
}

namespace {

// Active placements for one camera at one output frame, from the schedule.
std::vector<PlacedTube> active_placements(const CameraSchedule& cs, FrameIndex frame) {
  std::vector<PlacedTube> placed;
  for (const ScheduledSegment& seg : cs.segments) {
    if (seg.start <= frame && frame < seg.end) {
      placed.push_back(PlacedTube{seg.tube, seg.start, seg.local_offset});
    }
  }
  return placed;
}

void blit(Image& canvas, const Image& src, int dst_x, int dst_y) {
  for (int y = 0; y < src.height(); ++y) {
    for (int x = 0; x < src.width(); ++x) {
      canvas.set(dst_x + x, dst_y + y, src.at(x, y));
    }
  }
}

}  // namespace

void render_episode(const Dataset& dataset, const Schedule& schedule,
                    Layout layout, const std::filesystem::path& out_dir) {
  const TubeLookup lookup(dataset);

  if (layout == Layout::PerSlave) {
    for (const CameraSchedule& cs : schedule.cameras) {
      const CameraInfo* cam = dataset.camera(cs.camera);
      if (cam == nullptr) {
        throw ValidationError("schedule references unknown camera " +
                              std::to_string(cs.camera));
      }
      const Image& background = dataset.backgrounds.at(cs.camera);
      const std::filesystem::path cam_dir = out_dir / std::to_string(cs.camera);
      ensure_dir(cam_dir);
      for (FrameIndex f = 0; f < schedule.episode_frames; ++f) {
        const FrameComposite composite = compose_frame(
            background, active_placements(cs, f), lookup, cs.camera, f);
        write_ppm(composite.image, cam_dir / frame_filename(f));
      }
    }
    return;
  }

  // SideBySide: master pane (static background; the dataset carries no master
  // video), then each slave pane in camera-id order, 2px black separators.
  const CameraInfo& master = dataset.master_camera();
  const Image& master_bg = dataset.backgrounds.at(master.id);

  int canvas_w = master.width;
  int canvas_h = master.height;
  for (const CameraSchedule& cs : schedule.cameras) {
    const CameraInfo* cam = dataset.camera(cs.camera);
    if (cam == nullptr) {
      throw ValidationError("schedule references unknown camera " +
                            std::to_string(cs.camera));
    }
    canvas_w += 2 + cam->width;
    canvas_h = std::max(canvas_h, cam->height);
  }

  const std::filesystem::path combined_dir = out_dir / "combined";
  ensure_dir(combined_dir);
  for (FrameIndex f = 0; f < schedule.episode_frames; ++f) {
    Image canvas(canvas_w, canvas_h, Rgb{0, 0, 0});
    blit(canvas, master_bg, 0, 0);
    int x_off = master.width;
    for (const CameraSchedule& cs : schedule.cameras) {
      x_off += 2;  // separator
      const FrameComposite composite =
          compose_frame(dataset.backgrounds.at(cs.camera), active_placements(cs, f),
                        lookup, cs.camera, f);
      blit(canvas, composite.image, x_off, 0);
      x_off += composite.image.width();
    }
    write_ppm(canvas, combined_dir / frame_filename(f));
  }
}

}  // namespace lvs
