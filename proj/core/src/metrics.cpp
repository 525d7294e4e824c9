#include "lvs/metrics.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <set>

#include "lvs/errors.hpp"

namespace lvs {

double EpisodeMetrics::overall_inclusion() const {
  int relevant = 0;
  int displayed = 0;
  for (const SlaveMetrics& m : slaves) {
    relevant += m.relevant_tubes;
    displayed += m.displayed_relevant;
  }
  return relevant == 0 ? 1.0 : static_cast<double>(displayed) / relevant;
}

namespace {

// True when the union of displayed local-frame ranges covers [0, length).
bool covers_full_tube(std::vector<std::pair<FrameIndex, FrameIndex>> ranges,
                      FrameIndex length) {
  std::sort(ranges.begin(), ranges.end());
  FrameIndex covered_to = 0;
  for (const auto& [lo, hi] : ranges) {
    if (lo > covered_to) return false;
    covered_to = std::max(covered_to, hi);
  }
  return covered_to >= length;
}

}  // namespace

EpisodeMetrics compute_metrics(const Dataset& dataset, const GroundTruth& gt,
                               const Schedule& schedule, const DecisionLog& log,
                               const MetricsOptions& opts) {
  std::set<ObjectId> observed_persons;
  for (const MasterObservationSet& rec : dataset.master_timeline) {
    if (rec.frame >= dataset.episode_frames) continue;
    observed_persons.insert(rec.objects.begin(), rec.objects.end());
  }

  EpisodeMetrics out;
  for (const CameraId cam : dataset.slave_ids()) {
    SlaveMetrics m;
    m.camera = cam;

    const CameraSchedule* cs = schedule.find(cam);
    static const CameraSchedule kEmpty{};
    const CameraSchedule& cam_schedule = cs != nullptr ? *cs : kEmpty;

    std::map<TubeId, std::vector<std::pair<FrameIndex, FrameIndex>>> shown;
    for (const ScheduledSegment& seg : cam_schedule.segments) {
      if (seg.end > seg.start) {
        shown[seg.tube].push_back(
            {seg.local_offset, seg.local_offset + (seg.end - seg.start)});
      }
    }

    for (const Tube* t : dataset.tubes_of(cam)) {
      const auto it = gt.tube_to_object.find(t->id);
      if (it == gt.tube_to_object.end()) {
        throw MissingGroundTruthError("no ground-truth label for tube " +
                                      std::to_string(t->id));
      }
      if (!observed_persons.contains(it->second)) continue;
      ++m.relevant_tubes;
      const auto sh = shown.find(t->id);
      if (sh == shown.end()) continue;
      if (!opts.full_playback || covers_full_tube(sh->second, t->length())) {
        ++m.displayed_relevant;
      }
    }
    m.inclusion_rate = m.relevant_tubes == 0
                           ? 1.0
                           : static_cast<double>(m.displayed_relevant) / m.relevant_tubes;

    // Realized collision voxels, undiscounted: a pixel covered by k tubes in
    // one output frame counts once toward >=1 and once toward >=2 when k >= 2.
    const CameraInfo* cam_info = dataset.camera(cam);
    const std::size_t pixel_count =
        static_cast<std::size_t>(cam_info->width) * cam_info->height;
    std::vector<std::uint16_t> cover(pixel_count, 0);
    std::int64_t covered_once = 0;
    std::int64_t covered_multi = 0;
    for (FrameIndex f = 0; f < schedule.episode_frames; ++f) {
      std::vector<const ScheduledSegment*> active;
      for (const ScheduledSegment& seg : cam_schedule.segments) {
        if (seg.start <= f && f < seg.end) active.push_back(&seg);
      }
      if (active.empty()) continue;
      for (const ScheduledSegment* seg : active) {
        const Tube* tube = dataset.tube(seg->tube);
        const FrameMask& mask =
            tube->masks[static_cast<std::size_t>(seg->local_offset + (f - seg->start))];
        for (const MaskRun& run : mask.runs()) {
          const std::size_t base = static_cast<std::size_t>(run.y) * cam_info->width;
          for (int i = 0; i < run.len; ++i) ++cover[base + run.x0 + i];
        }
      }
      // Second pass over the same runs counts the union and resets the grid.
      for (const ScheduledSegment* seg : active) {
        const Tube* tube = dataset.tube(seg->tube);
        const FrameMask& mask =
            tube->masks[static_cast<std::size_t>(seg->local_offset + (f - seg->start))];
        for (const MaskRun& run : mask.runs()) {
          const std::size_t base = static_cast<std::size_t>(run.y) * cam_info->width;
          for (int i = 0; i < run.len; ++i) {
            const std::size_t idx = base + run.x0 + i;
            if (cover[idx] > 0) {
              ++covered_once;
              if (cover[idx] >= 2) ++covered_multi;
              cover[idx] = 0;
            }
          }
        }
      }
    }
    m.collision_rate =
        covered_once == 0 ? 0.0 : static_cast<double>(covered_multi) / covered_once;

    for (const IntervalRecord& rec : log.intervals) {
      for (const SlaveDecision& dec : rec.slaves) {
        if (dec.camera == cam) {
          m.switches += static_cast<int>(dec.started.size() + dec.terminated.size());
        }
      }
    }
    out.slaves.push_back(m);
  }
  return out;
}

std::vector<TradeoffPoint> sweep_tradeoff(const Dataset& dataset,
                                          const GroundTruth& gt, EngineConfig cfg,
                                          std::span<const double> r_values) {
  if (r_values.empty()) throw ConfigError("sweep requires at least one r value");
  std::vector<TradeoffPoint> points;
  points.reserve(r_values.size());
  for (const double r : r_values) {
    if (!(r >= 0.0)) throw ConfigError("sweep r values must be >= 0");
    cfg.collision_threshold = r;
    const RunResult run = run_episode(dataset, cfg);
    TradeoffPoint point;
    point.r = r;
    point.metrics = compute_metrics(dataset, gt, run.schedule, run.log);
    points.push_back(std::move(point));
  }
  return points;
}

namespace {

void append_rows(std::string& out, const EpisodeMetrics& metrics, double r) {
  char buf[160];
  for (const SlaveMetrics& m : metrics.slaves) {
    std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f,%d\n", m.camera, r,
                  m.inclusion_rate, m.collision_rate, m.switches);
    out += buf;
  }
}

}  // namespace

std::string metrics_csv(const EpisodeMetrics& metrics, double r) {
  std::string out = "slave_id,r,inclusion_rate,collision_rate,switches\n";
  append_rows(out, metrics, r);
  return out;
}

std::string tradeoff_csv(std::span<const TradeoffPoint> points) {
  std::string out = "slave_id,r,inclusion_rate,collision_rate,switches\n";
  for (const TradeoffPoint& p : points) append_rows(out, p.metrics, p.r);
  return out;
}

}  // namespace lvs
