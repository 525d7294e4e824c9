#include "lvs/energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lvs/errors.hpp"

namespace lvs {

void EngineConfig::validate() const {
  if (!(alpha >= 0.0)) throw ConfigError("alpha must be >= 0");
  if (!(beta >= 0.0)) throw ConfigError("beta must be >= 0");
  if (!(collision_threshold >= 0.0)) throw ConfigError("r must be >= 0");
  if (!(discount > 0.0 && discount <= 1.0)) throw ConfigError("d must be in (0, 1]");
  if (decision_interval < 1) throw ConfigError("delta_t must be >= 1 frame");
  if (!(epsilon_gain > 0.0)) throw ConfigError("epsilon_gain must be > 0");
}

FrameIndex placed_end(const PlacedTube& placed, const Tube& tube) {
  return placed.playback_start + (tube.length() - placed.local_offset);
}

bool placed_active_at(const PlacedTube& placed, const Tube& tube, FrameIndex frame) {
  return placed.playback_start <= frame && frame < placed_end(placed, tube);
}

TubeLookup::TubeLookup(const Dataset& dataset) {
  by_id_.reserve(dataset.tubes.size());
  for (const Tube& t : dataset.tubes) by_id_.emplace(t.id, &t);
}

TubeLookup::TubeLookup(std::span<const Tube> tubes) {
  by_id_.reserve(tubes.size());
  for (const Tube& t : tubes) by_id_.emplace(t.id, &t);
}

TubeLookup::TubeLookup(std::span<const Tube* const> tubes) {
  by_id_.reserve(tubes.size());
  for (const Tube* t : tubes) by_id_.emplace(t->id, t);
}

const Tube& TubeLookup::at(TubeId id) const {
  const auto it = by_id_.find(id);
  if (it == by_id_.end()) {
    throw ValidationError("unknown tube id " + std::to_string(id));
  }
  return *it->second;
}

double pairwise_collision(const PlacedTube& a, const Tube& tube_a,
                          const PlacedTube& b, const Tube& tube_b,
                          FrameIndex now, double discount) {
  const FrameIndex lo = std::max({a.playback_start, b.playback_start, now});
  const FrameIndex hi = std::min(placed_end(a, tube_a), placed_end(b, tube_b));
  if (lo >= hi) return 0.0;

  double weight = std::pow(discount, static_cast<double>(lo - now));
  double sum = 0.0;
  for (FrameIndex tau = lo; tau < hi; ++tau) {
    const FrameIndex la = a.local_offset + (tau - a.playback_start);
    const FrameIndex lb = b.local_offset + (tau - b.playback_start);
    const int overlap = tube_a.masks[static_cast<std::size_t>(la)].intersection_area(
        tube_b.masks[static_cast<std::size_t>(lb)]);
    if (overlap != 0) sum += overlap * weight;
    weight *= discount;
  }
  return sum;
}

double collision_cost(const Selection& sel, const TubeLookup& tubes,
                      const EngineConfig& cfg) {
  double total = 0.0;
  for (std::size_t i = 0; i < sel.placed.size(); ++i) {
    const Tube& tube_i = tubes.at(sel.placed[i].tube);
    for (std::size_t j = i + 1; j < sel.placed.size(); ++j) {
      const Tube& tube_j = tubes.at(sel.placed[j].tube);
      total += pairwise_collision(sel.placed[i], tube_i, sel.placed[j], tube_j,
                                  sel.now, cfg.discount);
    }
  }
  return total;
}

double identity_cost(const Selection& sel, const TubeIdSet& prev,
                     const MasterObservationSet& observed, const ReidMatrix& reid,
                     const EngineConfig& cfg) {
  double total = 0.0;
  for (const ObjectId o : observed.objects) {
    double mass = 0.0;
    for (const PlacedTube& p : sel.placed) {
      const double weight = prev.contains(p.tube) ? 1.0 + cfg.beta : 1.0;
      mass += weight * reid.probability(p.tube, o);
    }
    total += std::sqrt(mass);
  }
  return total;
}

double total_energy(const Selection& sel, const TubeLookup& tubes,
                    const TubeIdSet& prev, const MasterObservationSet& observed,
                    const ReidMatrix& reid, const EngineConfig& cfg) {
  return cfg.alpha * collision_cost(sel, tubes, cfg) -
         identity_cost(sel, prev, observed, reid, cfg);
}

}  // namespace lvs
