#include "lvs/tube.hpp"

#include <algorithm>
#include <string>

#include "lvs/errors.hpp"

namespace lvs {

namespace {

std::string run_str(const MaskRun& r) {
  return "(y=" + std::to_string(r.y) + ", x0=" + std::to_string(r.x0) +
         ", len=" + std::to_string(r.len) + ")";
}

}  // namespace

FrameMask FrameMask::from_runs(std::vector<MaskRun> runs) {
  FrameMask mask;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const MaskRun& r = runs[i];
    if (r.len < 1) throw ValidationError("mask run with len < 1: " + run_str(r));
    if (i > 0) {
      const MaskRun& p = runs[i - 1];
      const bool sorted = p.y < r.y || (p.y == r.y && p.x0 < r.x0);
      if (!sorted) {
        throw ValidationError("mask runs not sorted: " + run_str(p) + " then " + run_str(r));
      }
      if (p.y == r.y && p.x0 + p.len > r.x0) {
        throw ValidationError("overlapping mask runs: " + run_str(p) + " and " + run_str(r));
      }
    }
    mask.area_ += r.len;
  }
  mask.runs_ = std::move(runs);
  return mask;
}

FrameMask FrameMask::from_pixels(std::span<const Pixel> pixels) {
  std::vector<Pixel> sorted(pixels.begin(), pixels.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const Pixel& a, const Pixel& b) { return a.y < b.y || (a.y == b.y && a.x < b.x); });
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<MaskRun> runs;
  for (const Pixel& p : sorted) {
    if (!runs.empty() && runs.back().y == p.y && runs.back().x0 + runs.back().len == p.x) {
      ++runs.back().len;
    } else {
      runs.push_back({p.y, p.x, 1});
    }
  }
  return from_runs(std::move(runs));
}

std::vector<Pixel> FrameMask::pixels() const {
  std::vector<Pixel> out;
  out.reserve(static_cast<std::size_t>(area_));
  for (const MaskRun& r : runs_) {
    for (int i = 0; i < r.len; ++i) out.push_back({r.x0 + i, r.y});
  }
  return out;
}

bool FrameMask::contains(Pixel p) const {
  for (const MaskRun& r : runs_) {
    if (r.y == p.y && r.x0 <= p.x && p.x < r.x0 + r.len) return true;
    if (r.y > p.y) break;
  }
  return false;
}

int FrameMask::intersection_area(const FrameMask& other) const {
  int total = 0;
  auto i = runs_.begin();
  auto j = other.runs_.begin();
  while (i != runs_.end() && j != other.runs_.end()) {
    if (i->y != j->y) {
      if (i->y < j->y) {
        ++i;
      } else {
        ++j;
      }
      continue;
    }
    const int lo = std::max(i->x0, j->x0);
    const int hi = std::min(i->x0 + i->len, j->x0 + j->len);
    if (hi > lo) total += hi - lo;
    // Advance whichever run ends first; equal ends advance both.
    const int i_end = i->x0 + i->len;
    const int j_end = j->x0 + j->len;
    if (i_end <= j_end) ++i;
    if (j_end <= i_end) ++j;
  }
  return total;
}

bool FrameMask::fits_within(int width, int height) const {
  for (const MaskRun& r : runs_) {
    if (r.y < 0 || r.y >= height || r.x0 < 0 || r.x0 + r.len > width) return false;
  }
  return true;
}

std::int64_t Tube::total_active_pixels() const {
  std::int64_t total = 0;
  for (const FrameMask& m : masks) total += m.area();
  return total;
}

const FrameMask& Tube::mask_at(FrameIndex local_t) const {
  if (local_t < 0 || local_t >= length()) {
    throw OutOfRangeError("tube " + std::to_string(id) + ": local frame " +
                          std::to_string(local_t) + " outside [0, " +
                          std::to_string(length()) + ")");
  }
  return masks[static_cast<std::size_t>(local_t)];
}

std::vector<Pixel> Tube::active_pixels(FrameIndex local_t) const {
  return mask_at(local_t).pixels();
}

Rgb Tube::pixel_color(FrameIndex local_t, int pixel_index) const {
  if (local_t >= 0 && static_cast<std::size_t>(local_t) < frame_colors.size()) {
    const auto& colors = frame_colors[static_cast<std::size_t>(local_t)];
    if (pixel_index >= 0 && static_cast<std::size_t>(pixel_index) < colors.size()) {
      return colors[static_cast<std::size_t>(pixel_index)];
    }
  }
  return color;
}

bool MasterObservationSet::contains(ObjectId o) const {
  return std::binary_search(objects.begin(), objects.end(), o);
}

void ReidMatrix::set(TubeId tube, ObjectId object, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("reid probability outside [0,1] for tube " +
                          std::to_string(tube) + ", object " + std::to_string(object));
  }
  entries_[{tube, object}] = p;
}

double ReidMatrix::probability(TubeId tube, ObjectId object) const {
  const auto it = entries_.find({tube, object});
  return it == entries_.end() ? 0.0 : it->second;
}

const CameraInfo* Dataset::camera(CameraId id) const {
  for (const CameraInfo& c : cameras) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

const CameraInfo& Dataset::master_camera() const {
  for (const CameraInfo& c : cameras) {
    if (c.role == CameraRole::Master) return c;
  }
  throw ValidationError("dataset has no master camera");
}

std::vector<CameraId> Dataset::slave_ids() const {
  std::vector<CameraId> ids;
  for (const CameraInfo& c : cameras) {
    if (c.role == CameraRole::Slave) ids.push_back(c.id);
  }
  return ids;
}

std::vector<const Tube*> Dataset::tubes_of(CameraId camera) const {
  std::vector<const Tube*> out;
  for (const Tube& t : tubes) {
    if (t.camera == camera) out.push_back(&t);
  }
  return out;
}

const Tube* Dataset::tube(TubeId id) const {
  const auto it = std::lower_bound(
      tubes.begin(), tubes.end(), id,
      [](const Tube& t, TubeId target) { return t.id < target; });
  if (it != tubes.end() && it->id == id) return &*it;
  return nullptr;
}

const MasterObservationSet* Dataset::observations_at(FrameIndex frame) const {
  const MasterObservationSet* best = nullptr;
  for (const MasterObservationSet& rec : master_timeline) {
    if (rec.frame > frame) break;
    best = &rec;
  }
  return best;
}

void validate(const Dataset& ds) {
  if (ds.cameras.empty()) throw ValidationError("dataset has no cameras");
  if (ds.episode_frames < 0) throw ValidationError("episode_frames must be >= 0");

  int masters = 0;
  int fps = 0;
  for (std::size_t i = 0; i < ds.cameras.size(); ++i) {
    const CameraInfo& c = ds.cameras[i];
    if (i > 0 && ds.cameras[i - 1].id >= c.id) {
      throw ValidationError("cameras not sorted by unique id near camera " +
                            std::to_string(c.id));
    }
    if (c.id < 0) throw ValidationError("camera id must be non-negative");
    if (c.width < 1 || c.height < 1 || c.fps < 1) {
      throw ValidationError("camera " + std::to_string(c.id) +
                            ": width, height and fps must be >= 1");
    }
    if (c.role == CameraRole::Master) ++masters;
    if (fps == 0) {
      fps = c.fps;
    } else if (c.fps != fps) {
      throw ValidationError("camera " + std::to_string(c.id) +
                            ": fps differs across cameras (unsupported)");
    }
    const auto bg = ds.backgrounds.find(c.id);
    if (bg == ds.backgrounds.end()) {
      throw ValidationError("camera " + std::to_string(c.id) + ": missing background");
    }
    if (bg->second.width() != c.width || bg->second.height() != c.height) {
      throw ValidationError("camera " + std::to_string(c.id) +
                            ": background size does not match camera size");
    }
  }
  if (masters != 1) {
    throw ValidationError("dataset must have exactly one master camera, found " +
                          std::to_string(masters));
  }

  for (std::size_t i = 0; i < ds.tubes.size(); ++i) {
    const Tube& t = ds.tubes[i];
    if (i > 0 && ds.tubes[i - 1].id >= t.id) {
      throw ValidationError("tubes not sorted by unique id near tube " +
                            std::to_string(t.id));
    }
    if (t.id < 0) throw ValidationError("tube id must be non-negative");
    const CameraInfo* cam = ds.camera(t.camera);
    if (cam == nullptr) {
      throw ValidationError("tube " + std::to_string(t.id) + ": unknown camera " +
                            std::to_string(t.camera));
    }
    if (cam->role != CameraRole::Slave) {
      throw ValidationError("tube " + std::to_string(t.id) +
                            ": camera is not a slave camera");
    }
    if (t.masks.empty()) {
      throw ValidationError("tube " + std::to_string(t.id) + ": zero-length tube");
    }
    for (std::size_t f = 0; f < t.masks.size(); ++f) {
      const FrameMask& m = t.masks[f];
      if (m.empty()) {
        throw ValidationError("tube " + std::to_string(t.id) + ": empty mask at frame " +
                              std::to_string(f));
      }
      if (!m.fits_within(cam->width, cam->height)) {
        throw ValidationError("tube " + std::to_string(t.id) +
                              ": pixel outside camera bounds at frame " + std::to_string(f));
      }
    }
    if (!t.frame_colors.empty()) {
      if (t.frame_colors.size() != t.masks.size()) {
        throw ValidationError("tube " + std::to_string(t.id) +
                              ": frame color count does not match frame count");
      }
      for (std::size_t f = 0; f < t.frame_colors.size(); ++f) {
        if (t.frame_colors[f].size() != static_cast<std::size_t>(t.masks[f].area())) {
          throw ValidationError("tube " + std::to_string(t.id) +
                                ": frame colors do not match mask area at frame " +
                                std::to_string(f));
        }
      }
    }
  }

  FrameIndex prev_frame = -1;
  for (const MasterObservationSet& rec : ds.master_timeline) {
    if (rec.frame <= prev_frame) {
      throw ValidationError("master detection timeline not strictly increasing at frame " +
                            std::to_string(rec.frame));
    }
    if (rec.frame < 0) throw ValidationError("master detection frame must be >= 0");
    prev_frame = rec.frame;
    for (std::size_t i = 0; i < rec.objects.size(); ++i) {
      if (rec.objects[i] < 0) {
        throw ValidationError("master detection object id must be non-negative");
      }
      if (i > 0 && rec.objects[i - 1] >= rec.objects[i]) {
        throw ValidationError("master detection objects must be sorted and unique at frame " +
                              std::to_string(rec.frame));
      }
    }
  }

  for (const auto& [key, p] : ds.reid.entries()) {
    const auto& [tube_id, object_id] = key;
    if (ds.tube(tube_id) == nullptr) {
      throw ValidationError("reid entry references unknown tube " + std::to_string(tube_id));
    }
    if (object_id < 0) {
      throw ValidationError("reid entry references negative object id for tube " +
                            std::to_string(tube_id));
    }
    if (!(p >= 0.0 && p <= 1.0)) {
      throw ValidationError("reid probability outside [0,1] for tube " +
                            std::to_string(tube_id));
    }
  }
}

}  // namespace lvs
