#pragma once

#include <map>
#include <string>

#include "lvs/energy.hpp"
#include "lvs/tube.hpp"

namespace lvs {

// Per-slave selection state carried across decision intervals.
struct SelectionState {
  CameraId camera = 0;
  std::vector<PlacedTube> playing;  // currently displayed, sorted by tube id
  TubeIdSet prev_ids;               // S_v^{t-1}
  TubeIdSet played_ids;             // completed (or cut, unless readmitting)
  FrameIndex now = -1;              // last decision frame; -1 before the first

  // Local frame to resume from, for cut tubes awaiting re-admission.
  // Populated only under EngineConfig::readmit_cut_tubes.
  std::map<TubeId, FrameIndex> resume_offsets;
};

// One row of the greedy trace: the candidate picked at this step, its gain,
// the discounted collision sum against tubes admitted earlier in the pass
// (evaluated only when the gain is positive), and the admission verdict.
struct GreedyStep {
  TubeId tube = 0;
  double gain = 0.0;
  double collision_sum = 0.0;
  bool admitted = false;
};

struct SlaveDecision {
  CameraId camera = 0;
  std::vector<TubeId> selected;    // sorted
  std::vector<TubeId> started;     // sorted, playback_start == this frame
  std::vector<TubeId> terminated;  // sorted, cut at this frame
  std::vector<GreedyStep> trace;   // in pick order
};

struct IntervalRecord {
  int interval = 0;
  FrameIndex frame = 0;
  std::vector<ObjectId> objects;  // O at this decision
  std::vector<SlaveDecision> slaves;
};

struct DecisionLog {
  std::vector<IntervalRecord> intervals;
};

// Line-delimited JSON, one interval per line, with a trailing newline.
std::string decision_log_to_jsonl(const DecisionLog& log);
DecisionLog decision_log_from_jsonl(const std::string& text);

// A contiguous displayed stretch of one tube: output frames [start, end),
// showing local frames local_offset + (tau - start).
struct ScheduledSegment {
  TubeId tube = 0;
  FrameIndex start = 0;
  FrameIndex end = 0;
  FrameIndex local_offset = 0;

  friend bool operator==(const ScheduledSegment&, const ScheduledSegment&) = default;
};

struct CameraSchedule {
  CameraId camera = 0;
  std::vector<ScheduledSegment> segments;  // sorted by (start, tube)
};

struct Schedule {
  FrameIndex episode_frames = 0;
  int fps = 0;
  std::vector<CameraSchedule> cameras;  // slaves only, sorted by id

  const CameraSchedule* find(CameraId camera) const;
};

std::string schedule_to_json(const Schedule& schedule);
Schedule schedule_from_json(const std::string& text);

// One pass of the greedy loop: start from the empty set, repeatedly pick the
// highest-gain candidate (ties to the lower tube id), admit it when its
// discounted collision sum against the tubes admitted earlier in the pass is
// below the threshold (collision-free candidates always pass, so r = 0 means
// collision-free admissions), and drop it from the candidate list either way.
// Zero-gain tubes are never admitted. Retained tubes keep their existing
// playback_start; fresh admissions start at state.now.
Selection greedy_select(std::span<const Tube* const> pool,
                        const SelectionState& state,
                        const MasterObservationSet& observed,
                        const ReidMatrix& reid, const EngineConfig& cfg,
                        std::vector<GreedyStep>* trace = nullptr);

// Segment-boundary events one decision produces, for schedule assembly.
struct IntervalEvents {
  struct Finished {
    CameraId camera;
    TubeId tube;
    FrameIndex end;  // natural end, may precede the decision frame
  };
  struct Cut {
    CameraId camera;
    TubeId tube;
    FrameIndex at;
  };
  struct Started {
    CameraId camera;
    TubeId tube;
    FrameIndex start;
    FrameIndex local_offset;
  };
  std::vector<Finished> finished;
  std::vector<Cut> cut;
  std::vector<Started> started;
};

// Advances every slave state to `master_frame` and reselects; observations
// come from the most recent master record at or before the frame. States are
// processed in the order given (per-slave results are order-independent).
// Throws TimelineError when master_frame does not advance past a state's
// previous decision.
IntervalRecord step_interval(const Dataset& dataset,
                             std::span<SelectionState> states,
                             FrameIndex master_frame, const EngineConfig& cfg,
                             int interval_index,
                             IntervalEvents* events = nullptr);

struct RunResult {
  Schedule schedule;
  DecisionLog log;
};

// Drives step_interval across master frames 0, dT, 2*dT, ... < episode_frames
// and assembles the displayed segments. Deterministic in (dataset, cfg).
RunResult run_episode(const Dataset& dataset, const EngineConfig& cfg);

// Frame-based comparator: per slave, plays the original recording segment of
// the single highest-probability tube matching a currently observed object,
// one segment at a time, each running to completion before the next pick.
RunResult baseline_frame_select(const Dataset& dataset, const EngineConfig& cfg);

// Exhaustive subset minimizer of E^T_v over the pool (<= 20 tubes, else
// PoolTooLargeError). Ties resolve to the lexicographically smallest sorted
// id set. Placement rule matches greedy_select.
Selection oracle_exhaustive(std::span<const Tube* const> pool,
                            const SelectionState& state,
                            const MasterObservationSet& observed,
                            const ReidMatrix& reid, const EngineConfig& cfg);

struct OracleRow {
  int interval = 0;
  CameraId camera = 0;
  double greedy_energy = 0.0;
  double oracle_energy = 0.0;
  double gap = 0.0;      // greedy - oracle, >= 0
  double rel_gap = 0.0;  // gap / max(|oracle|, 1e-12)
};

struct OracleReport {
  std::vector<OracleRow> rows;
  double mean_rel_gap = 0.0;
  RunResult greedy_run;  // the episode the rows were sampled from
};

// Runs the greedy episode while shadow-evaluating the exhaustive oracle at
// every interval. State always advances with the greedy selection.
OracleReport run_episode_with_oracle(const Dataset& dataset,
                                     const EngineConfig& cfg);

}  // namespace lvs
