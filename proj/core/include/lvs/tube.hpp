#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "lvs/image.hpp"

namespace lvs {

using FrameIndex = std::int64_t;
using TubeId = std::int32_t;
using ObjectId = std::int32_t;
using CameraId = std::int32_t;

enum class CameraRole { Master, Slave };

struct CameraInfo {
  CameraId id = 0;
  CameraRole role = CameraRole::Slave;
  int width = 0;
  int height = 0;
  int fps = 0;
};

struct Pixel {
  int x = 0;
  int y = 0;

  friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

// One horizontal run of active pixels: row y, columns [x0, x0 + len).
struct MaskRun {
  int y = 0;
  int x0 = 0;
  int len = 0;

  friend auto operator<=>(const MaskRun&, const MaskRun&) = default;
};

// Per-frame binary mask stored as sorted, non-overlapping row runs.
class FrameMask {
 public:
  FrameMask() = default;

  // Runs must be sorted by (y, x0), non-overlapping, each len >= 1.
  // Throws ValidationError otherwise. Adjacent runs are kept as given so
  // save/load round-trips are byte-stable.
  static FrameMask from_runs(std::vector<MaskRun> runs);

  // Builds merged runs from an arbitrary pixel set (duplicates allowed).
  static FrameMask from_pixels(std::span<const Pixel> pixels);

  bool empty() const { return runs_.empty(); }
  int area() const { return area_; }
  const std::vector<MaskRun>& runs() const { return runs_; }

  // Active pixels in row-major order.
  std::vector<Pixel> pixels() const;
  bool contains(Pixel p) const;

  // Number of pixels active in both masks.
  int intersection_area(const FrameMask& other) const;

  // True when every run fits inside [0, width) x [0, height).
  bool fits_within(int width, int height) const;

  friend bool operator==(const FrameMask&, const FrameMask&) = default;

 private:
  std::vector<MaskRun> runs_;
  int area_ = 0;
};

// A space-time activity mask from one slave camera, one local frame per entry.
struct Tube {
  TubeId id = 0;
  CameraId camera = 0;
  FrameIndex source_start = 0;
  std::vector<FrameMask> masks;

  // Display appearance: solid color unless per-frame pixel colors are given.
  // frame_colors[t], when present, holds one Rgb per mask pixel of frame t in
  // row-major mask order.
  Rgb color{200, 200, 200};
  std::vector<std::vector<Rgb>> frame_colors;

  FrameIndex length() const { return static_cast<FrameIndex>(masks.size()); }
  std::int64_t total_active_pixels() const;

  // Mask of local frame t. Throws OutOfRangeError outside [0, length).
  const FrameMask& mask_at(FrameIndex local_t) const;

  // The active pixel set of local frame t, row-major.
  std::vector<Pixel> active_pixels(FrameIndex local_t) const;

  // Color of the idx-th mask pixel of local frame t.
  Rgb pixel_color(FrameIndex local_t, int pixel_index) const;
};

// The object ids currently detected in the Master stream.
struct MasterObservationSet {
  FrameIndex frame = 0;
  std::vector<ObjectId> objects;  // sorted, unique; may be empty

  bool contains(ObjectId o) const;
};

// Pairwise (tube, object) correspondence probabilities; absent pairs are 0.
class ReidMatrix {
 public:
  // Throws ValidationError when p is outside [0, 1].
  void set(TubeId tube, ObjectId object, double p);

  double probability(TubeId tube, ObjectId object) const;

  const std::map<std::pair<TubeId, ObjectId>, double>& entries() const {
    return entries_;
  }
  bool empty() const { return entries_.empty(); }

 private:
  std::map<std::pair<TubeId, ObjectId>, double> entries_;
};

// Everything the engine consumes for one scene.
struct Dataset {
  std::vector<CameraInfo> cameras;  // sorted by id, exactly one Master
  std::vector<Tube> tubes;          // sorted by id
  std::vector<MasterObservationSet> master_timeline;  // strictly increasing frame
  ReidMatrix reid;
  std::map<CameraId, Image> backgrounds;
  FrameIndex episode_frames = 0;

  const CameraInfo* camera(CameraId id) const;
  const CameraInfo& master_camera() const;
  std::vector<CameraId> slave_ids() const;

  // Candidate pool B_v for one slave camera, ordered by tube id.
  std::vector<const Tube*> tubes_of(CameraId camera) const;
  const Tube* tube(TubeId id) const;

  // Most recent observation record at or before `frame`; nullptr if none.
  const MasterObservationSet* observations_at(FrameIndex frame) const;
};

// Checks every dataset invariant; throws ValidationError naming the offender.
void validate(const Dataset& dataset);

// Sidecar labels for evaluation only; the scheduler never reads these.
struct GroundTruth {
  std::map<TubeId, ObjectId> tube_to_object;
};

}  // namespace lvs
