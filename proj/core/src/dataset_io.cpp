#include "lvs/dataset_io.hpp"

#include <algorithm>
#include <fstream>
#include <string>

#include "json.hpp"
#include "lvs/errors.hpp"

namespace lvs {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for read: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return text;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for write: " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

const json& require(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError("manifest: missing key '" + std::string(key) + "' in " + where);
  }
  return *it;
}

std::int64_t as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ParseError("manifest: expected integer in " + where);
  return v.get<std::int64_t>();
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ParseError("manifest: expected number in " + where);
  return v.get<double>();
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw ParseError("manifest: expected string in " + where);
  return v.get<std::string>();
}

std::int32_t parse_id_key(const std::string& key, const std::string& where) {
  try {
    std::size_t pos = 0;
    const long long value = std::stoll(key, &pos);
    if (pos != key.size()) throw std::invalid_argument(key);
    return static_cast<std::int32_t>(value);
  } catch (const std::exception&) {
    throw ParseError("manifest: non-integer id key '" + key + "' in " + where);
  }
}

Rgb parse_rgb(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3) {
    throw ParseError("manifest: expected [r,g,b] in " + where);
  }
  Rgb c;
  const std::int64_t r = as_int(v[0], where);
  const std::int64_t g = as_int(v[1], where);
  const std::int64_t b = as_int(v[2], where);
  if (r < 0 || r > 255 || g < 0 || g > 255 || b < 0 || b > 255) {
    throw ParseError("manifest: color channel outside [0,255] in " + where);
  }
  c.r = static_cast<std::uint8_t>(r);
  c.g = static_cast<std::uint8_t>(g);
  c.b = static_cast<std::uint8_t>(b);
  return c;
}

Tube parse_tube(const json& jt, const std::filesystem::path& /*dir*/) {
  Tube tube;
  tube.id = static_cast<TubeId>(as_int(require(jt, "tube_id", "tube"), "tube_id"));
  const std::string where = "tube " + std::to_string(tube.id);
  tube.camera = static_cast<CameraId>(as_int(require(jt, "camera", where), where + ".camera"));
  tube.source_start = as_int(require(jt, "source_start", where), where + ".source_start");
  if (jt.contains("color")) tube.color = parse_rgb(jt["color"], where + ".color");

  const json& jframes = require(jt, "frames", where);
  if (!jframes.is_array()) throw ParseError("manifest: 'frames' must be an array in " + where);

  std::vector<FrameMask> masks;
  masks.reserve(jframes.size());
  for (std::size_t f = 0; f < jframes.size(); ++f) {
    const json& jmask = jframes[f];
    const std::string fwhere = where + ", frame " + std::to_string(f);
    if (!jmask.is_array()) throw ParseError("manifest: frame must be an array of runs in " + fwhere);
    std::vector<MaskRun> runs;
    runs.reserve(jmask.size());
    for (const json& jrun : jmask) {
      if (!jrun.is_array() || jrun.size() != 3) {
        throw ParseError("manifest: run must be [row, start_col, run_len] in " + fwhere);
      }
      MaskRun run;
      run.y = static_cast<int>(as_int(jrun[0], fwhere));
      run.x0 = static_cast<int>(as_int(jrun[1], fwhere));
      run.len = static_cast<int>(as_int(jrun[2], fwhere));
      runs.push_back(run);
    }
    try {
      masks.push_back(FrameMask::from_runs(std::move(runs)));
    } catch (const ValidationError& e) {
      throw ValidationError(std::string(e.what()) + " in " + fwhere);
    }
  }

  std::vector<std::vector<Rgb>> frame_colors;
  if (jt.contains("pixels")) {
    const json& jp = jt["pixels"];
    if (!jp.is_array() || jp.size() != masks.size()) {
      throw ParseError("manifest: 'pixels' must hold one array per frame in " + where);
    }
    frame_colors.resize(jp.size());
    for (std::size_t f = 0; f < jp.size(); ++f) {
      const json& jcolors = jp[f];
      const std::string fwhere = where + ", pixels frame " + std::to_string(f);
      if (!jcolors.is_array() || jcolors.size() % 3 != 0) {
        throw ParseError("manifest: pixel colors must be a flat r,g,b,... array in " + fwhere);
      }
      frame_colors[f].reserve(jcolors.size() / 3);
      for (std::size_t i = 0; i + 2 < jcolors.size(); i += 3) {
        const std::int64_t r = as_int(jcolors[i], fwhere);
        const std::int64_t g = as_int(jcolors[i + 1], fwhere);
        const std::int64_t b = as_int(jcolors[i + 2], fwhere);
        if (r < 0 || r > 255 || g < 0 || g > 255 || b < 0 || b > 255) {
          throw ParseError("manifest: pixel channel outside [0,255] in " + fwhere);
        }
        frame_colors[f].push_back({static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                                   static_cast<std::uint8_t>(b)});
      }
    }
  }

  // Trim leading/trailing empty frames; interior empties stay and are
  // rejected by validate() with the tube id.
  std::size_t lead = 0;
  while (lead < masks.size() && masks[lead].empty()) ++lead;
  std::size_t tail = masks.size();
  while (tail > lead && masks[tail - 1].empty()) --tail;
  if (lead > 0 || tail < masks.size()) {
    masks = std::vector<FrameMask>(masks.begin() + static_cast<std::ptrdiff_t>(lead),
                                   masks.begin() + static_cast<std::ptrdiff_t>(tail));
    if (!frame_colors.empty()) {
      frame_colors = std::vector<std::vector<Rgb>>(
          frame_colors.begin() + static_cast<std::ptrdiff_t>(lead),
          frame_colors.begin() + static_cast<std::ptrdiff_t>(tail));
    }
    tube.source_start += static_cast<FrameIndex>(lead);
  }
  if (masks.empty()) {
    throw ValidationError("tube " + std::to_string(tube.id) + ": zero-length tube");
  }

  tube.masks = std::move(masks);
  tube.frame_colors = std::move(frame_colors);
  return tube;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path) {
  std::filesystem::path manifest = path;
  if (std::filesystem::is_directory(path)) manifest = path / "scene.json";
  const std::filesystem::path dir = manifest.parent_path();

  json root;
  try {
    root = json::parse(read_text_file(manifest));
  } catch (const json::parse_error& e) {
    throw ParseError("manifest: invalid JSON in " + manifest.string() + ": " + e.what());
  }
  if (!root.is_object()) throw ParseError("manifest: top level must be an object");

  Dataset ds;
  ds.episode_frames = as_int(require(root, "episode_frames", "manifest"), "episode_frames");

  const json& jcams = require(root, "cameras", "manifest");
  if (!jcams.is_array()) throw ParseError("manifest: 'cameras' must be an array");
  std::map<CameraId, std::string> background_paths;
  for (const json& jc : jcams) {
    CameraInfo cam;
    cam.id = static_cast<CameraId>(as_int(require(jc, "id", "camera"), "camera.id"));
    const std::string where = "camera " + std::to_string(cam.id);
    const std::string role = as_string(require(jc, "role", where), where + ".role");
    if (role == "master") {
      cam.role = CameraRole::Master;
    } else if (role == "slave") {
      cam.role = CameraRole::Slave;
    } else {
      throw ParseError("manifest: role must be 'master' or 'slave' in " + where);
    }
    cam.width = static_cast<int>(as_int(require(jc, "width", where), where + ".width"));
    cam.height = static_cast<int>(as_int(require(jc, "height", where), where + ".height"));
    cam.fps = static_cast<int>(as_int(require(jc, "fps", where), where + ".fps"));
    background_paths[cam.id] = as_string(require(jc, "background", where), where + ".background");
    ds.cameras.push_back(cam);
  }
  std::sort(ds.cameras.begin(), ds.cameras.end(),
            [](const CameraInfo& a, const CameraInfo& b) { return a.id < b.id; });

  const json& jtubes = require(root, "tubes", "manifest");
  if (!jtubes.is_array()) throw ParseError("manifest: 'tubes' must be an array");
  for (const json& jt : jtubes) ds.tubes.push_back(parse_tube(jt, dir));
  std::sort(ds.tubes.begin(), ds.tubes.end(),
            [](const Tube& a, const Tube& b) { return a.id < b.id; });

  const json& jdet = require(root, "master_detections", "manifest");
  if (!jdet.is_array()) throw ParseError("manifest: 'master_detections' must be an array");
  for (const json& jd : jdet) {
    MasterObservationSet rec;
    rec.frame = as_int(require(jd, "frame", "master_detections"), "master_detections.frame");
    const json& jobjs = require(jd, "object_ids", "master_detections");
    if (!jobjs.is_array()) {
      throw ParseError("manifest: 'object_ids' must be an array at frame " +
                       std::to_string(rec.frame));
    }
    for (const json& jo : jobjs) {
      rec.objects.push_back(static_cast<ObjectId>(as_int(jo, "object_ids")));
    }
    std::sort(rec.objects.begin(), rec.objects.end());
    ds.master_timeline.push_back(std::move(rec));
  }
  std::sort(ds.master_timeline.begin(), ds.master_timeline.end(),
            [](const MasterObservationSet& a, const MasterObservationSet& b) {
              return a.frame < b.frame;
            });

  const json& jreid = require(root, "reid", "manifest");
  if (!jreid.is_object()) throw ParseError("manifest: 'reid' must be an object");
  for (const auto& [tube_key, jrow] : jreid.items()) {
    const TubeId tube_id = parse_id_key(tube_key, "reid");
    if (!jrow.is_object()) {
      throw ParseError("manifest: reid row must be an object for tube " + tube_key);
    }
    for (const auto& [obj_key, jp] : jrow.items()) {
      const ObjectId object_id = parse_id_key(obj_key, "reid tube " + tube_key);
      const double p = as_number(jp, "reid tube " + tube_key);
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError("reid probability outside [0,1] for tube " + tube_key +
                              ", object " + obj_key);
      }
      ds.reid.set(tube_id, object_id, p);
    }
  }

  for (const auto& [cam_id, rel] : background_paths) {
    ds.backgrounds[cam_id] = read_ppm(dir / rel);
  }

  validate(ds);
  return ds;
}

void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
  validate(ds);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory: " + dir.string());

  ordered_json root;
  root["episode_frames"] = ds.episode_frames;

  ordered_json jcams = ordered_json::array();
  for (const CameraInfo& c : ds.cameras) {
    ordered_json jc;
    jc["id"] = c.id;
    jc["role"] = c.role == CameraRole::Master ? "master" : "slave";
    jc["width"] = c.width;
    jc["height"] = c.height;
    jc["fps"] = c.fps;
    jc["background"] = "bg_" + std::to_string(c.id) + ".ppm";
    jcams.push_back(std::move(jc));
  }
  root["cameras"] = std::move(jcams);

  ordered_json jtubes = ordered_json::array();
  for (const Tube& t : ds.tubes) {
    ordered_json jt;
    jt["tube_id"] = t.id;
    jt["camera"] = t.camera;
    jt["source_start"] = t.source_start;
    jt["color"] = ordered_json::array({t.color.r, t.color.g, t.color.b});
    ordered_json jframes = ordered_json::array();
    for (const FrameMask& m : t.masks) {
      ordered_json jmask = ordered_json::array();
      for (const MaskRun& r : m.runs()) {
        jmask.push_back(ordered_json::array({r.y, r.x0, r.len}));
      }
      jframes.push_back(std::move(jmask));
    }
    jt["frames"] = std::move(jframes);
    if (!t.frame_colors.empty()) {
      ordered_json jpixels = ordered_json::array();
      for (const auto& colors : t.frame_colors) {
        ordered_json jflat = ordered_json::array();
        for (const Rgb& c : colors) {
          jflat.push_back(c.r);
          jflat.push_back(c.g);
          jflat.push_back(c.b);
        }
        jpixels.push_back(std::move(jflat));
      }
      jt["pixels"] = std::move(jpixels);
    }
    jtubes.push_back(std::move(jt));
  }
  root["tubes"] = std::move(jtubes);

  ordered_json jdet = ordered_json::array();
  for (const MasterObservationSet& rec : ds.master_timeline) {
    ordered_json jd;
    jd["frame"] = rec.frame;
    jd["object_ids"] = rec.objects;
    jdet.push_back(std::move(jd));
  }
  root["master_detections"] = std::move(jdet);

  ordered_json jreid = ordered_json::object();
  for (const auto& [key, p] : ds.reid.entries()) {
    jreid[std::to_string(key.first)][std::to_string(key.second)] = p;
  }
  root["reid"] = std::move(jreid);

  write_text_file(dir / "scene.json", root.dump(2) + "\n");
  for (const auto& [cam_id, image] : ds.backgrounds) {
    write_ppm(image, dir / ("bg_" + std::to_string(cam_id) + ".ppm"));
  }
}

GroundTruth load_ground_truth(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw MissingGroundTruthError("ground truth file not found: " + path.string());
  }
  json root;
  try {
    root = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError("ground truth: invalid JSON in " + path.string() + ": " + e.what());
  }
  if (!root.is_object()) throw ParseError("ground truth: top level must be an object");
  GroundTruth gt;
  for (const auto& [key, value] : root.items()) {
    gt.tube_to_object[parse_id_key(key, "ground truth")] =
        static_cast<ObjectId>(as_int(value, "ground truth"));
  }
  return gt;
}

void save_ground_truth(const GroundTruth& gt, const std::filesystem::path& path) {
  ordered_json root = ordered_json::object();
  for (const auto& [tube, object] : gt.tube_to_object) {
    root[std::to_string(tube)] = object;
  }
  write_text_file(path, root.dump(2) + "\n");
}

}  // namespace lvs
