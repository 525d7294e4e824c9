#include "lvs/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "lvs/errors.hpp"
#include "lvs/rng.hpp"

namespace lvs {

namespace {

Rgb hsv_to_rgb(double h, double s, double v) {
  const double c = v * s;
  const double hp = h / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0.0, g = 0.0, b = 0.0;
  if (hp < 1) {
    r = c, g = x;
  } else if (hp < 2) {
    r = x, g = c;
  } else if (hp < 3) {
    g = c, b = x;
  } else if (hp < 4) {
    g = x, b = c;
  } else if (hp < 5) {
    r = x, b = c;
  } else {
    r = c, b = x;
  }
  const double m = v - c;
  const auto to_byte = [m](double value) {
    return static_cast<std::uint8_t>(std::lround((value + m) * 255.0));
  };
  return {to_byte(r), to_byte(g), to_byte(b)};
}

Rgb tube_display_color(TubeId id) {
  const double hue = std::fmod(static_cast<double>(id) * 137.508, 360.0);
  return hsv_to_rgb(hue, 0.65, 0.95);
}

Rgb camera_background_color(CameraId id) {
  const int n = static_cast<int>(id);
  return {static_cast<std::uint8_t>(24 + (n * 13) % 40),
          static_cast<std::uint8_t>(26 + (n * 7) % 40),
          static_cast<std::uint8_t>(30 + (n * 17) % 40)};
}

bool rect_in_bounds(const WalkSpec& w, FrameIndex t, int canvas_w, int canvas_h) {
  const int x = static_cast<int>(std::llround(w.x0 + w.vx * static_cast<double>(t)));
  const int y = static_cast<int>(std::llround(w.y0 + w.vy * static_cast<double>(t)));
  return x >= 0 && y >= 0 && x + w.width <= canvas_w && y + w.height <= canvas_h;
}

// Draw walk parameters until the trajectory stays inside the canvas for an
// acceptable stretch; a stationary walk is the deterministic fallback.
WalkSpec sample_walk(Rng& rng, const ScenarioConfig& cfg) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    WalkSpec walk;
    walk.width = rng.uniform_int(cfg.rect_min, cfg.rect_max);
    walk.height = rng.uniform_int(cfg.rect_min, cfg.rect_max);
    walk.x0 = rng.uniform(0.0, static_cast<double>(cfg.canvas_width - walk.width));
    walk.y0 = rng.uniform(0.0, static_cast<double>(cfg.canvas_height - walk.height));
    const double angle = rng.uniform(0.0, 6.283185307179586);
    const double speed = rng.uniform(cfg.speed_min, cfg.speed_max);
    walk.vx = speed * std::cos(angle);
    walk.vy = speed * std::sin(angle);
    const FrameIndex desired = rng.uniform_int(cfg.walk_frames_min, cfg.walk_frames_max);

    FrameIndex frames = 0;
    while (frames < desired &&
           rect_in_bounds(walk, frames, cfg.canvas_width, cfg.canvas_height)) {
      ++frames;
    }
    if (frames >= std::max<FrameIndex>(1, cfg.walk_frames_min / 2)) {
      walk.frames = frames;
      return walk;
    }
  }
  WalkSpec still;
  still.width = cfg.rect_min;
  still.height = cfg.rect_min;
  still.x0 = 0.0;
  still.y0 = 0.0;
  still.vx = 0.0;
  still.vy = 0.0;
  still.frames = std::max<FrameIndex>(1, cfg.walk_frames_min);
  return still;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (num_slaves < 0) throw ConfigError("num_slaves must be >= 0");
  if (canvas_width < 1 || canvas_height < 1) throw ConfigError("canvas must be >= 1x1");
  if (fps < 1) throw ConfigError("fps must be >= 1");
  if (num_persons < 0) throw ConfigError("num_persons must be >= 0");
  if (walks_per_person < 0) throw ConfigError("walks_per_person must be >= 0");
  if (!(speed_min > 0.0) || !(speed_max >= speed_min)) {
    throw ConfigError("speeds must satisfy 0 < speed_min <= speed_max");
  }
  if (rect_min < 1 || rect_max < rect_min) {
    throw ConfigError("rect sizes must satisfy 1 <= rect_min <= rect_max");
  }
  if (rect_max > canvas_width || rect_max > canvas_height) {
    throw ConfigError("rect_max must fit inside the canvas");
  }
  if (walk_frames_min < 1 || walk_frames_max < walk_frames_min) {
    throw ConfigError("walk frames must satisfy 1 <= min <= max");
  }
  if (episode_frames < 0) throw ConfigError("episode_frames must be >= 0");
  if (!(top1_recall >= 0.0 && top1_recall <= 1.0)) {
    throw ConfigError("top1_recall must be in [0, 1]");
  }
  if (!(confusion_temperature >= 0.0)) {
    throw ConfigError("confusion_temperature must be >= 0");
  }
  for (const MasterStay& stay : master_stays) {
    if (stay.person < 0 || stay.person >= num_persons) {
      throw ConfigError("master stay references unknown person " +
                        std::to_string(stay.person));
    }
    if (stay.enter < 0 || stay.leave < stay.enter) {
      throw ConfigError("master stay window must satisfy 0 <= enter <= leave");
    }
  }
}

FrameMask rasterize_walk_frame(const WalkSpec& walk, FrameIndex t) {
  const int x = static_cast<int>(std::llround(walk.x0 + walk.vx * static_cast<double>(t)));
  const int y = static_cast<int>(std::llround(walk.y0 + walk.vy * static_cast<double>(t)));
  std::vector<MaskRun> runs;
  runs.reserve(static_cast<std::size_t>(walk.height));
  for (int row = 0; row < walk.height; ++row) {
    runs.push_back({y + row, x, walk.width});
  }
  return FrameMask::from_runs(std::move(runs));
}

GeneratedScene generate(const ScenarioConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);

  GeneratedScene scene;
  Dataset& ds = scene.dataset;
  ds.episode_frames = cfg.episode_frames;

  CameraInfo master;
  master.id = 0;
  master.role = CameraRole::Master;
  master.width = cfg.canvas_width;
  master.height = cfg.canvas_height;
  master.fps = cfg.fps;
  ds.cameras.push_back(master);
  for (int v = 1; v <= cfg.num_slaves; ++v) {
    CameraInfo cam = master;
    cam.id = static_cast<CameraId>(v);
    cam.role = CameraRole::Slave;
    ds.cameras.push_back(cam);
  }
  for (const CameraInfo& cam : ds.cameras) {
    ds.backgrounds[cam.id] =
        Image(cam.width, cam.height, camera_background_color(cam.id));
  }

  // Master presence windows, biased toward long co-presence when auto.
  std::vector<MasterStay> stays = cfg.master_stays;
  if (stays.empty() && cfg.episode_frames > 0) {
    for (int p = 0; p < cfg.num_persons; ++p) {
      const FrameIndex quarter = cfg.episode_frames / 4;
      const FrameIndex enter = rng.uniform_int(0, static_cast<int>(quarter));
      const FrameIndex dur =
          rng.uniform_int(static_cast<int>(cfg.episode_frames / 2),
                          static_cast<int>((cfg.episode_frames * 3) / 4));
      stays.push_back({p, enter, std::min(enter + dur, cfg.episode_frames)});
    }
  }

  std::set<FrameIndex> events;
  events.insert(0);
  for (const MasterStay& stay : stays) {
    if (stay.enter < cfg.episode_frames) events.insert(stay.enter);
    if (stay.leave < cfg.episode_frames) events.insert(stay.leave);
  }
  if (cfg.episode_frames > 0) {
    for (const FrameIndex f : events) {
      MasterObservationSet rec;
      rec.frame = f;
      for (const MasterStay& stay : stays) {
        if (stay.enter <= f && f < stay.leave) rec.objects.push_back(stay.person);
      }
      std::sort(rec.objects.begin(), rec.objects.end());
      rec.objects.erase(std::unique(rec.objects.begin(), rec.objects.end()),
                        rec.objects.end());
      ds.master_timeline.push_back(std::move(rec));
    }
  }

  // Walks: one tube per (slave, person, walk), rasterized along a linear
  // trajectory. Source times are synthetic past-recording offsets.
  TubeId next_id = 0;
  for (int v = 1; v <= cfg.num_slaves; ++v) {
    FrameIndex source_clock = 0;
    for (int p = 0; p < cfg.num_persons; ++p) {
      for (int k = 0; k < cfg.walks_per_person; ++k) {
        const WalkSpec walk = sample_walk(rng, cfg);
        Tube tube;
        tube.id = next_id++;
        tube.camera = static_cast<CameraId>(v);
        tube.source_start = source_clock;
        tube.color = tube_display_color(tube.id);
        tube.masks.reserve(static_cast<std::size_t>(walk.frames));
        for (FrameIndex t = 0; t < walk.frames; ++t) {
          tube.masks.push_back(rasterize_walk_frame(walk, t));
        }
        source_clock += walk.frames + rng.uniform_int(10, 50);
        scene.ground_truth.tube_to_object[tube.id] = static_cast<ObjectId>(p);
        ds.tubes.push_back(std::move(tube));
      }
    }
  }

  // Re-id rows: the winner column is the true person with probability
  // top1_recall, otherwise a uniformly drawn impostor; softmax over noisy
  // logits spreads the rest of the mass. Temperature 0 collapses to one-hot.
  for (const Tube& tube : ds.tubes) {
    const ObjectId truth = scene.ground_truth.tube_to_object.at(tube.id);
    if (cfg.num_persons == 0) continue;
    ObjectId winner = truth;
    const double u = rng.next_double();
    if (cfg.num_persons > 1 && u >= cfg.top1_recall) {
      const int k = rng.uniform_int(0, cfg.num_persons - 2);
      winner = static_cast<ObjectId>(k >= truth ? k + 1 : k);
    }
    if (cfg.confusion_temperature == 0.0) {
      ds.reid.set(tube.id, winner, 1.0);
      continue;
    }
    std::vector<double> logits(static_cast<std::size_t>(cfg.num_persons));
    for (double& z : logits) z = rng.normal();
    double other_max = -1e300;
    for (int p = 0; p < cfg.num_persons; ++p) {
      if (p != winner) other_max = std::max(other_max, logits[static_cast<std::size_t>(p)]);
    }
    const double gap = 0.5 + 0.5 * rng.next_double();
    if (cfg.num_persons > 1) logits[static_cast<std::size_t>(winner)] = other_max + gap;

    const double z_max = *std::max_element(logits.begin(), logits.end());
    std::vector<double> expz(logits.size());
    double denom = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
      expz[i] = std::exp((logits[i] - z_max) / cfg.confusion_temperature);
      denom += expz[i];
    }
    for (int p = 0; p < cfg.num_persons; ++p) {
      ds.reid.set(tube.id, static_cast<ObjectId>(p), expz[static_cast<std::size_t>(p)] / denom);
    }
  }

  validate(ds);
  return scene;
}

}  // namespace lvs
