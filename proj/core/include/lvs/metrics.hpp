#pragma once

#include <span>
#include <string>

#include "lvs/energy.hpp"
#include "lvs/scheduler.hpp"
#include "lvs/tube.hpp"

namespace lvs {

struct SlaveMetrics {
  CameraId camera = 0;
  int relevant_tubes = 0;      // tubes whose person appears in the master view
  int displayed_relevant = 0;  // of those, displayed for >= 1 frame
  double inclusion_rate = 0.0;
  double collision_rate = 0.0;  // (pixels covered >= 2x) / (pixels covered >= 1x)
  int switches = 0;             // tube starts + cuts summed over intervals
};

struct EpisodeMetrics {
  std::vector<SlaveMetrics> slaves;  // sorted by camera id

  // Pooled inclusion across slaves: sum displayed / sum relevant
  // (1.0 when nothing is relevant).
  double overall_inclusion() const;
};

struct MetricsOptions {
  // Count a tube as displayed only when all of its frames were shown.
  bool full_playback = false;
};

// Pure function of its inputs; collision pixels are counted undiscounted over
// the realized output. Throws MissingGroundTruthError when a tube lacks a
// label.
EpisodeMetrics compute_metrics(const Dataset& dataset, const GroundTruth& gt,
                               const Schedule& schedule, const DecisionLog& log,
                               const MetricsOptions& opts = {});

struct TradeoffPoint {
  double r = 0.0;
  EpisodeMetrics metrics;
};

// One full greedy episode per r value, rows in input order.
std::vector<TradeoffPoint> sweep_tradeoff(const Dataset& dataset,
                                          const GroundTruth& gt,
                                          EngineConfig cfg,
                                          std::span<const double> r_values);

// CSV with header slave_id,r,inclusion_rate,collision_rate,switches and six
// fractional digits on rates.
std::string metrics_csv(const EpisodeMetrics& metrics, double r);
std::string tradeoff_csv(std::span<const TradeoffPoint> points);

}  // namespace lvs
