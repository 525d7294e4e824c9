#pragma once

#include <set>
#include <span>
#include <unordered_map>

#include "lvs/tube.hpp"

namespace lvs {

enum class GainMode { ApproxRatio, ExactMarginal };

// All engine knobs. Defaults mirror the reference parameter set
// (beta 0.5, r 15, d 0.978); alpha weighs the collision term when the
// exhaustive objective is evaluated and the decision interval is in frames.
struct EngineConfig {
  double alpha = 1.0;
  double beta = 0.5;
  double collision_threshold = 15.0;  // r, discounted-pixel units
  double discount = 0.978;            // d, per-frame, in (0, 1]
  FrameIndex decision_interval = 1;   // delta T in frames
  double epsilon_gain = 1e-9;         // denominator guard for the greedy gain
  GainMode gain_mode = GainMode::ApproxRatio;

  // When true, a tube cut before finishing stays eligible and is re-admitted
  // with a fresh playback_start showing only its remaining frames. Default:
  // cut tubes join the played ledger and never return.
  bool readmit_cut_tubes = false;

  // Throws ConfigError when any field is out of bounds.
  void validate() const;
};

// A tube scheduled on the output timeline. Active at output frame tau iff
// playback_start <= tau < playback_start + (length - local_offset); the local
// frame shown at tau is local_offset + (tau - playback_start). local_offset is
// nonzero only for cut tubes re-admitted under readmit_cut_tubes.
struct PlacedTube {
  TubeId tube = 0;
  FrameIndex playback_start = 0;
  FrameIndex local_offset = 0;

  friend bool operator==(const PlacedTube&, const PlacedTube&) = default;
};

FrameIndex placed_end(const PlacedTube& placed, const Tube& tube);
bool placed_active_at(const PlacedTube& placed, const Tube& tube, FrameIndex frame);

// The displayed set S_v for one slave camera at one decision instant.
struct Selection {
  CameraId camera = 0;
  std::vector<PlacedTube> placed;  // unique tube ids, sorted by id
  FrameIndex now = 0;
};

using TubeIdSet = std::set<TubeId>;

// Id -> tube resolution for energy evaluation.
class TubeLookup {
 public:
  explicit TubeLookup(const Dataset& dataset);
  explicit TubeLookup(std::span<const Tube> tubes);
  explicit TubeLookup(std::span<const Tube* const> tubes);

  // Throws ValidationError when the id is unknown.
  const Tube& at(TubeId id) const;

 private:
  std::unordered_map<TubeId, const Tube*> by_id_;
};

// Discounted count of co-active pixels between two placements, summed over
// output frames tau >= now with weight d^(tau - now). Frames before `now`
// contribute nothing; disjoint supports yield 0.
double pairwise_collision(const PlacedTube& a, const Tube& tube_a,
                          const PlacedTube& b, const Tube& tube_b,
                          FrameIndex now, double discount);

// E^C_v: sum of pairwise_collision over unordered distinct pairs, each pair
// counted once.
double collision_cost(const Selection& sel, const TubeLookup& tubes,
                      const EngineConfig& cfg);

// E^O_v: per observed object, the square root of the retention-weighted
// probability mass of the selected tubes, summed over objects. `prev` is the
// previous interval's selected id set; membership multiplies a tube's
// probability by (1 + beta).
double identity_cost(const Selection& sel, const TubeIdSet& prev,
                     const MasterObservationSet& observed, const ReidMatrix& reid,
                     const EngineConfig& cfg);

// E^T_v = alpha * E^C_v - E^O_v. Negative when the identity reward dominates.
double total_energy(const Selection& sel, const TubeLookup& tubes,
                    const TubeIdSet& prev, const MasterObservationSet& observed,
                    const ReidMatrix& reid, const EngineConfig& cfg);

}  // namespace lvs
