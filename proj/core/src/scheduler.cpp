#include "lvs/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"
#include "lvs/errors.hpp"

namespace lvs {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<TubeId> sorted_ids(const std::vector<PlacedTube>& placed) {
  std::vector<TubeId> ids;
  ids.reserve(placed.size());
  for (const PlacedTube& p : placed) ids.push_back(p.tube);
  std::sort(ids.begin(), ids.end());
  return ids;
}

struct Candidate {
  const Tube* tube = nullptr;
  PlacedTube placement;
};

// Placement rule shared by greedy and oracle: a tube already playing keeps
// its offsets, anything else starts now (resuming past its cut point when a
// resume offset is recorded).
Candidate make_candidate(const Tube* tube, const SelectionState& state) {
  Candidate c;
  c.tube = tube;
  for (const PlacedTube& p : state.playing) {
    if (p.tube == tube->id) {
      c.placement = p;
      return c;
    }
  }
  FrameIndex offset = 0;
  const auto it = state.resume_offsets.find(tube->id);
  if (it != state.resume_offsets.end()) offset = it->second;
  c.placement = PlacedTube{tube->id, state.now, offset};
  return c;
}

std::vector<Candidate> make_candidates(std::span<const Tube* const> pool,
                                       const SelectionState& state) {
  std::vector<Candidate> out;
  out.reserve(pool.size());
  for (const Tube* t : pool) {
    if (t->camera != state.camera) {
      throw ValidationError("pool tube " + std::to_string(t->id) +
                            " does not belong to camera " + std::to_string(state.camera));
    }
    out.push_back(make_candidate(t, state));
  }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    return a.tube->id < b.tube->id;
  });
  return out;
}

double retention_weight(TubeId id, const TubeIdSet& prev, const EngineConfig& cfg) {
  return prev.contains(id) ? 1.0 + cfg.beta : 1.0;
}

}  // namespace

Selection greedy_select(std::span<const Tube* const> pool,
                        const SelectionState& state,
                        const MasterObservationSet& observed,
                        const ReidMatrix& reid, const EngineConfig& cfg,
                        std::vector<GreedyStep>* trace) {
  cfg.validate();

  std::vector<Candidate> remaining = make_candidates(pool, state);
  std::vector<Candidate> admitted;

  // Per-object weighted probability mass of the admitted set, the shared
  // denominator of the approximate gain.
  std::vector<double> admitted_mass(observed.objects.size(), 0.0);

  Selection sel;
  sel.camera = state.camera;
  sel.now = state.now;

  const auto approx_gain = [&](const Candidate& c) {
    const double weight = retention_weight(c.tube->id, state.prev_ids, cfg);
    double gain = 0.0;
    for (std::size_t oi = 0; oi < observed.objects.size(); ++oi) {
      const double p = reid.probability(c.tube->id, observed.objects[oi]);
      gain += weight * p / std::sqrt(cfg.epsilon_gain + admitted_mass[oi]);
    }
    return gain;
  };

  const auto marginal_gain = [&](const Candidate& c) {
    Selection with = sel;
    with.placed.push_back(c.placement);
    std::sort(with.placed.begin(), with.placed.end(),
              [](const PlacedTube& a, const PlacedTube& b) { return a.tube < b.tube; });
    return identity_cost(with, state.prev_ids, observed, reid, cfg) -
           identity_cost(sel, state.prev_ids, observed, reid, cfg);
  };

  while (!remaining.empty()) {
    std::size_t best = 0;
    double best_gain = -1.0;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      const double gain = cfg.gain_mode == GainMode::ApproxRatio
                              ? approx_gain(remaining[i])
                              : marginal_gain(remaining[i]);
      if (gain > best_gain) {  // strict: ties fall to the lower tube id
        best_gain = gain;
        best = i;
      }
    }

    const Candidate picked = remaining[best];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));

    GreedyStep step;
    step.tube = picked.tube->id;
    step.gain = best_gain;

    if (best_gain > 0.0) {
      double collisions = 0.0;
      for (const Candidate& adm : admitted) {
        collisions += pairwise_collision(picked.placement, *picked.tube,
                                         adm.placement, *adm.tube, state.now,
                                         cfg.discount);
      }
      step.collision_sum = collisions;
      // A collision-free candidate always passes, so r = 0 admits exactly
      // the non-colliding tubes rather than nothing.
      if (collisions == 0.0 || collisions < cfg.collision_threshold) {
        step.admitted = true;
        admitted.push_back(picked);
        sel.placed.push_back(picked.placement);
        std::sort(sel.placed.begin(), sel.placed.end(),
                  [](const PlacedTube& a, const PlacedTube& b) { return a.tube < b.tube; });
        const double weight = retention_weight(picked.tube->id, state.prev_ids, cfg);
        for (std::size_t oi = 0; oi < observed.objects.size(); ++oi) {
          admitted_mass[oi] +=
              weight * reid.probability(picked.tube->id, observed.objects[oi]);
        }
      }
    }
    if (trace != nullptr) trace->push_back(step);
  }

  return sel;
}

namespace {

// Shadow hook run after selection but before the state is updated.
using ShadowFn = std::function<void(const SelectionState& pre_state,
                                    std::span<const Tube* const> pool,
                                    const Selection& greedy_sel)>;

SlaveDecision advance_slave(const Dataset& dataset, SelectionState& st,
                            const MasterObservationSet& observed,
                            const EngineConfig& cfg, FrameIndex master_frame,
                            IntervalEvents* events, const ShadowFn& shadow) {
  if (master_frame <= st.now) {
    throw TimelineError("decision frame " + std::to_string(master_frame) +
                        " does not advance past previous decision at " +
                        std::to_string(st.now) + " for camera " +
                        std::to_string(st.camera));
  }
  st.now = master_frame;

  // Retire tubes whose playback finished during the last interval.
  std::vector<PlacedTube> still_playing;
  for (const PlacedTube& p : st.playing) {
    const Tube* tube = dataset.tube(p.tube);
    const FrameIndex end = placed_end(p, *tube);
    if (end <= master_frame) {
      st.played_ids.insert(p.tube);
      if (events != nullptr) events->finished.push_back({st.camera, p.tube, end});
    } else {
      still_playing.push_back(p);
    }
  }
  st.playing = std::move(still_playing);

  std::vector<const Tube*> pool;
  for (const Tube* t : dataset.tubes_of(st.camera)) {
    if (!st.played_ids.contains(t->id)) pool.push_back(t);
  }

  SlaveDecision dec;
  dec.camera = st.camera;
  Selection sel = greedy_select(pool, st, observed, dataset.reid, cfg, &dec.trace);

  if (shadow) shadow(st, pool, sel);

  std::vector<TubeId> playing_before;
  for (const PlacedTube& p : st.playing) playing_before.push_back(p.tube);
  std::sort(playing_before.begin(), playing_before.end());

  dec.selected = sorted_ids(sel.placed);
  std::set_difference(dec.selected.begin(), dec.selected.end(),
                      playing_before.begin(), playing_before.end(),
                      std::back_inserter(dec.started));
  std::set_difference(playing_before.begin(), playing_before.end(),
                      dec.selected.begin(), dec.selected.end(),
                      std::back_inserter(dec.terminated));

  for (const TubeId id : dec.terminated) {
    if (cfg.readmit_cut_tubes) {
      for (const PlacedTube& p : st.playing) {
        if (p.tube == id) {
          st.resume_offsets[id] = p.local_offset + (master_frame - p.playback_start);
          break;
        }
      }
    } else {
      st.played_ids.insert(id);
    }
    if (events != nullptr) events->cut.push_back({st.camera, id, master_frame});
  }

  for (const TubeId id : dec.started) {
    FrameIndex offset = 0;
    for (const PlacedTube& p : sel.placed) {
      if (p.tube == id) {
        offset = p.local_offset;
        break;
      }
    }
    st.resume_offsets.erase(id);
    if (events != nullptr) events->started.push_back({st.camera, id, master_frame, offset});
  }

  st.playing = sel.placed;
  st.prev_ids = TubeIdSet(dec.selected.begin(), dec.selected.end());
  return dec;
}

MasterObservationSet observations_or_empty(const Dataset& dataset, FrameIndex frame) {
  const MasterObservationSet* obs = dataset.observations_at(frame);
  if (obs != nullptr) {
    MasterObservationSet copy = *obs;
    copy.frame = frame;
    return copy;
  }
  return MasterObservationSet{frame, {}};
}

}  // namespace

IntervalRecord step_interval(const Dataset& dataset,
                             std::span<SelectionState> states,
                             FrameIndex master_frame, const EngineConfig& cfg,
                             int interval_index, IntervalEvents* events) {
  cfg.validate();
  const MasterObservationSet observed = observations_or_empty(dataset, master_frame);

  IntervalRecord rec;
  rec.interval = interval_index;
  rec.frame = master_frame;
  rec.objects = observed.objects;
  for (SelectionState& st : states) {
    rec.slaves.push_back(
        advance_slave(dataset, st, observed, cfg, master_frame, events, nullptr));
  }
  return rec;
}

namespace {

struct SegmentAssembler {
  std::map<std::pair<CameraId, TubeId>, ScheduledSegment> open;
  std::map<CameraId, std::vector<ScheduledSegment>> closed;

  void apply(const IntervalEvents& ev) {
    for (const auto& fin : ev.finished) close(fin.camera, fin.tube, fin.end);
    for (const auto& cut : ev.cut) close(cut.camera, cut.tube, cut.at);
    for (const auto& start : ev.started) {
      open[{start.camera, start.tube}] =
          ScheduledSegment{start.tube, start.start, -1, start.local_offset};
    }
  }

  void close(CameraId camera, TubeId tube, FrameIndex end) {
    const auto it = open.find({camera, tube});
    if (it == open.end()) return;
    ScheduledSegment seg = it->second;
    seg.end = end;
    open.erase(it);
    if (seg.end > seg.start) closed[camera].push_back(seg);
  }

  Schedule finish(const Dataset& dataset, const EngineConfig& /*cfg*/) {
    // Close anything still on screen at the end of the episode.
    const TubeLookup lookup(dataset);
    std::vector<std::pair<std::pair<CameraId, TubeId>, ScheduledSegment>> rest(
        open.begin(), open.end());
    for (auto& [key, seg] : rest) {
      const Tube& tube = lookup.at(seg.tube);
      const FrameIndex natural = seg.start + (tube.length() - seg.local_offset);
      close(key.first, key.second, std::min(natural, dataset.episode_frames));
    }

    Schedule schedule;
    schedule.episode_frames = dataset.episode_frames;
    schedule.fps = dataset.master_camera().fps;
    for (const CameraId cam : dataset.slave_ids()) {
      CameraSchedule cs;
      cs.camera = cam;
      auto it = closed.find(cam);
      if (it != closed.end()) {
        cs.segments = std::move(it->second);
        std::sort(cs.segments.begin(), cs.segments.end(),
                  [](const ScheduledSegment& a, const ScheduledSegment& b) {
                    return a.start < b.start || (a.start == b.start && a.tube < b.tube);
                  });
      }
      schedule.cameras.push_back(std::move(cs));
    }
    return schedule;
  }
};

}  // namespace

const CameraSchedule* Schedule::find(CameraId camera) const {
  for (const CameraSchedule& cs : cameras) {
    if (cs.camera == camera) return &cs;
  }
  return nullptr;
}

RunResult run_episode(const Dataset& dataset, const EngineConfig& cfg) {
  cfg.validate();

  std::vector<SelectionState> states;
  for (const CameraId cam : dataset.slave_ids()) {
    SelectionState st;
    st.camera = cam;
    states.push_back(std::move(st));
  }

  RunResult result;
  SegmentAssembler assembler;
  int interval = 0;
  for (FrameIndex f = 0; f < dataset.episode_frames; f += cfg.decision_interval) {
    IntervalEvents events;
    result.log.intervals.push_back(
        step_interval(dataset, states, f, cfg, interval++, &events));
    assembler.apply(events);
  }
  result.schedule = assembler.finish(dataset, cfg);
  return result;
}

RunResult baseline_frame_select(const Dataset& dataset, const EngineConfig& cfg) {
  cfg.validate();

  struct SlaveState {
    CameraId camera = 0;
    std::optional<ScheduledSegment> playing;
    TubeIdSet played;
  };
  std::vector<SlaveState> states;
  for (const CameraId cam : dataset.slave_ids()) states.push_back({cam, {}, {}});

  RunResult result;
  result.schedule.episode_frames = dataset.episode_frames;
  result.schedule.fps = dataset.master_camera().fps;
  std::map<CameraId, std::vector<ScheduledSegment>> segments;

  int interval = 0;
  for (FrameIndex f = 0; f < dataset.episode_frames; f += cfg.decision_interval) {
    const MasterObservationSet observed = observations_or_empty(dataset, f);
    IntervalRecord rec;
    rec.interval = interval++;
    rec.frame = f;
    rec.objects = observed.objects;

    for (SlaveState& st : states) {
      SlaveDecision dec;
      dec.camera = st.camera;

      if (st.playing.has_value() && st.playing->end <= f) st.playing.reset();

      if (!st.playing.has_value() && !observed.objects.empty()) {
        // Highest re-id probability toward any currently observed object;
        // ties fall to the lower tube id.
        const Tube* best = nullptr;
        double best_p = 0.0;
        for (const Tube* t : dataset.tubes_of(st.camera)) {
          if (st.played.contains(t->id)) continue;
          double p = 0.0;
          for (const ObjectId o : observed.objects) {
            p = std::max(p, dataset.reid.probability(t->id, o));
          }
          if (p > best_p) {
            best_p = p;
            best = t;
          }
        }
        if (best != nullptr) {
          ScheduledSegment seg;
          seg.tube = best->id;
          seg.start = f;
          seg.end = std::min<FrameIndex>(f + best->length(), dataset.episode_frames);
          seg.local_offset = 0;
          segments[st.camera].push_back(seg);
          st.playing = seg;
          st.played.insert(best->id);
          dec.started.push_back(best->id);
        }
      }

      if (st.playing.has_value()) dec.selected.push_back(st.playing->tube);
      rec.slaves.push_back(std::move(dec));
    }
    result.log.intervals.push_back(std::move(rec));
  }

  for (const CameraId cam : dataset.slave_ids()) {
    CameraSchedule cs;
    cs.camera = cam;
    const auto it = segments.find(cam);
    if (it != segments.end()) cs.segments = std::move(it->second);
    result.schedule.cameras.push_back(std::move(cs));
  }
  return result;
}

Selection oracle_exhaustive(std::span<const Tube* const> pool,
                            const SelectionState& state,
                            const MasterObservationSet& observed,
                            const ReidMatrix& reid, const EngineConfig& cfg) {
  cfg.validate();
  if (pool.size() > 20) {
    throw PoolTooLargeError("oracle pool of " + std::to_string(pool.size()) +
                            " tubes exceeds the enumeration bound of 20");
  }

  const std::vector<Candidate> cands = make_candidates(pool, state);
  const std::size_t n = cands.size();

  // Pairwise collisions and per-object weighted probabilities, precomputed so
  // subset energies are table sums. Summation order matches total_energy
  // (ascending tube id), so the reported energies are bit-identical.
  std::vector<std::vector<double>> pair_c(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      pair_c[i][j] = pairwise_collision(cands[i].placement, *cands[i].tube,
                                        cands[j].placement, *cands[j].tube,
                                        state.now, cfg.discount);
    }
  }
  const std::size_t num_objects = observed.objects.size();
  std::vector<std::vector<double>> weighted_p(n, std::vector<double>(num_objects, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double weight = retention_weight(cands[i].tube->id, state.prev_ids, cfg);
    for (std::size_t oi = 0; oi < num_objects; ++oi) {
      weighted_p[i][oi] =
          weight * reid.probability(cands[i].tube->id, observed.objects[oi]);
    }
  }

  double best_energy = std::numeric_limits<double>::infinity();
  std::uint32_t best_mask = 0;
  std::vector<TubeId> best_ids;

  const std::uint32_t limit = static_cast<std::uint32_t>(1u << n);
  std::vector<double> mass(num_objects);
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    double collision = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask & (1u << i)) == 0) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if ((mask & (1u << j)) != 0) collision += pair_c[i][j];
      }
    }
    std::fill(mass.begin(), mass.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask & (1u << i)) == 0) continue;
      for (std::size_t oi = 0; oi < num_objects; ++oi) mass[oi] += weighted_p[i][oi];
    }
    double identity = 0.0;
    for (std::size_t oi = 0; oi < num_objects; ++oi) identity += std::sqrt(mass[oi]);

    const double energy = cfg.alpha * collision - identity;
    if (energy < best_energy) {
      best_energy = energy;
      best_mask = mask;
      best_ids.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if ((mask & (1u << i)) != 0) best_ids.push_back(cands[i].tube->id);
      }
    } else if (energy == best_energy) {
      std::vector<TubeId> ids;
      for (std::size_t i = 0; i < n; ++i) {
        if ((mask & (1u << i)) != 0) ids.push_back(cands[i].tube->id);
      }
      if (std::lexicographical_compare(ids.begin(), ids.end(), best_ids.begin(),
                                       best_ids.end())) {
        best_mask = mask;
        best_ids = std::move(ids);
      }
    }
  }

  Selection sel;
  sel.camera = state.camera;
  sel.now = state.now;
  for (std::size_t i = 0; i < n; ++i) {
    if ((best_mask & (1u << i)) != 0) sel.placed.push_back(cands[i].placement);
  }
  return sel;
}

OracleReport run_episode_with_oracle(const Dataset& dataset,
                                     const EngineConfig& cfg) {
  cfg.validate();

  std::vector<SelectionState> states;
  for (const CameraId cam : dataset.slave_ids()) {
    SelectionState st;
    st.camera = cam;
    states.push_back(std::move(st));
  }

  OracleReport report;
  const TubeLookup lookup(dataset);
  SegmentAssembler assembler;
  int interval = 0;

  for (FrameIndex f = 0; f < dataset.episode_frames; f += cfg.decision_interval) {
    const MasterObservationSet observed = observations_or_empty(dataset, f);
    IntervalRecord rec;
    rec.interval = interval;
    rec.frame = f;
    rec.objects = observed.objects;

    IntervalEvents events;
    for (SelectionState& st : states) {
      const int row_interval = interval;
      const ShadowFn shadow = [&](const SelectionState& pre,
                                  std::span<const Tube* const> pool,
                                  const Selection& greedy_sel) {
        if (pool.size() > 20) {
          throw PoolTooLargeError(
              "oracle pool of " + std::to_string(pool.size()) +
              " tubes exceeds the enumeration bound of 20 at interval " +
              std::to_string(row_interval) + ", camera " +
              std::to_string(pre.camera));
        }
        const Selection oracle_sel =
            oracle_exhaustive(pool, pre, observed, dataset.reid, cfg);
        OracleRow row;
        row.interval = row_interval;
        row.camera = pre.camera;
        row.greedy_energy = total_energy(greedy_sel, lookup, pre.prev_ids, observed,
                                         dataset.reid, cfg);
        row.oracle_energy = total_energy(oracle_sel, lookup, pre.prev_ids, observed,
                                         dataset.reid, cfg);
        row.gap = row.greedy_energy - row.oracle_energy;
        row.rel_gap = row.gap / std::max(std::abs(row.oracle_energy), 1e-12);
        report.rows.push_back(row);
      };
      rec.slaves.push_back(
          advance_slave(dataset, st, observed, cfg, f, &events, shadow));
    }
    assembler.apply(events);
    report.greedy_run.log.intervals.push_back(std::move(rec));
    ++interval;
  }

  report.greedy_run.schedule = assembler.finish(dataset, cfg);
  double total_rel = 0.0;
  for (const OracleRow& row : report.rows) total_rel += row.rel_gap;
  report.mean_rel_gap = report.rows.empty() ? 0.0 : total_rel / report.rows.size();
  return report;
}

// ---- serialization ----

namespace {

ordered_json slave_decision_to_json(const SlaveDecision& dec) {
  ordered_json j;
  j["camera"] = dec.camera;
  j["selected"] = dec.selected;
  j["started"] = dec.started;
  j["terminated"] = dec.terminated;
  ordered_json trace = ordered_json::array();
  for (const GreedyStep& step : dec.trace) {
    ordered_json js;
    js["tube"] = step.tube;
    js["gain"] = step.gain;
    js["collision"] = step.collision_sum;
    js["admitted"] = step.admitted;
    trace.push_back(std::move(js));
  }
  j["trace"] = std::move(trace);
  return j;
}

std::vector<TubeId> ids_from_json(const json& arr, const char* what) {
  if (!arr.is_array()) throw ParseError(std::string("decision log: ") + what + " must be an array");
  std::vector<TubeId> out;
  for (const json& v : arr) out.push_back(v.get<TubeId>());
  return out;
}

}  // namespace

std::string decision_log_to_jsonl(const DecisionLog& log) {
  std::string out;
  for (const IntervalRecord& rec : log.intervals) {
    ordered_json j;
    j["interval"] = rec.interval;
    j["frame"] = rec.frame;
    j["objects"] = rec.objects;
    ordered_json slaves = ordered_json::array();
    for (const SlaveDecision& dec : rec.slaves) slaves.push_back(slave_decision_to_json(dec));
    j["slaves"] = std::move(slaves);
    out += j.dump();
    out += '\n';
  }
  return out;
}

DecisionLog decision_log_from_jsonl(const std::string& text) {
  DecisionLog log;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError("decision log: invalid JSON on line " + std::to_string(line_no) +
                       ": " + e.what());
    }
    IntervalRecord rec;
    try {
      rec.interval = j.at("interval").get<int>();
      rec.frame = j.at("frame").get<FrameIndex>();
      for (const json& o : j.at("objects")) rec.objects.push_back(o.get<ObjectId>());
      for (const json& js : j.at("slaves")) {
        SlaveDecision dec;
        dec.camera = js.at("camera").get<CameraId>();
        dec.selected = ids_from_json(js.at("selected"), "selected");
        dec.started = ids_from_json(js.at("started"), "started");
        dec.terminated = ids_from_json(js.at("terminated"), "terminated");
        for (const json& jt : js.at("trace")) {
          GreedyStep step;
          step.tube = jt.at("tube").get<TubeId>();
          step.gain = jt.at("gain").get<double>();
          step.collision_sum = jt.at("collision").get<double>();
          step.admitted = jt.at("admitted").get<bool>();
          dec.trace.push_back(step);
        }
        rec.slaves.push_back(std::move(dec));
      }
    } catch (const json::exception& e) {
      throw ParseError("decision log: bad record on line " + std::to_string(line_no) +
                       ": " + e.what());
    }
    if (!log.intervals.empty() && rec.interval <= log.intervals.back().interval) {
      throw ParseError("decision log: intervals not strictly increasing at line " +
                       std::to_string(line_no));
    }
    log.intervals.push_back(std::move(rec));
  }
  return log;
}

std::string schedule_to_json(const Schedule& schedule) {
  ordered_json j;
  j["episode_frames"] = schedule.episode_frames;
  j["fps"] = schedule.fps;
  ordered_json cams = ordered_json::array();
  for (const CameraSchedule& cs : schedule.cameras) {
    ordered_json jc;
    jc["camera"] = cs.camera;
    ordered_json segs = ordered_json::array();
    for (const ScheduledSegment& s : cs.segments) {
      ordered_json js;
      js["tube"] = s.tube;
      js["start"] = s.start;
      js["end"] = s.end;
      js["local_offset"] = s.local_offset;
      segs.push_back(std::move(js));
    }
    jc["segments"] = std::move(segs);
    cams.push_back(std::move(jc));
  }
  j["cameras"] = std::move(cams);
  return j.dump(2) + "\n";
}

Schedule schedule_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("schedule: invalid JSON: ") + e.what());
  }
  Schedule schedule;
  try {
    schedule.episode_frames = j.at("episode_frames").get<FrameIndex>();
    schedule.fps = j.at("fps").get<int>();
    for (const json& jc : j.at("cameras")) {
      CameraSchedule cs;
      cs.camera = jc.at("camera").get<CameraId>();
      for (const json& js : jc.at("segments")) {
        ScheduledSegment s;
        s.tube = js.at("tube").get<TubeId>();
        s.start = js.at("start").get<FrameIndex>();
        s.end = js.at("end").get<FrameIndex>();
        s.local_offset = js.at("local_offset").get<FrameIndex>();
        cs.segments.push_back(s);
      }
      schedule.cameras.push_back(std::move(cs));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("schedule: bad structure: ") + e.what());
  }
  return schedule;
}

}  // namespace lvs
