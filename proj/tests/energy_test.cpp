#include "doctest.h"

#include <cmath>

#include "lvs/energy.hpp"
#include "lvs/errors.hpp"
#include "lvs/rng.hpp"
#include "lvs/scenario.hpp"
#include "test_support.hpp"

using namespace lvs;
using lvs::testing::direct_identity;
using lvs::testing::make_rect_tube;
using lvs::testing::voxel_collision_oracle;

namespace {

Tube one_frame_tube(TubeId id, std::vector<Pixel> pixels) {
  Tube tube;
  tube.id = id;
  tube.camera = 1;
  tube.masks.push_back(FrameMask::from_pixels(pixels));
  return tube;
}

}  // namespace

TEST_CASE("engine config bounds") {
  EngineConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.discount = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.discount = 1.0;
  cfg.decision_interval = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.decision_interval = 1;
  cfg.epsilon_gain = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.epsilon_gain = 1e-9;
  cfg.beta = -0.1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("pairwise collision basics") {
  SUBCASE("disjoint pixel supports give zero at any offsets") {
    const Tube a = one_frame_tube(0, {{0, 0}, {1, 0}});
    const Tube b = one_frame_tube(1, {{5, 5}});
    CHECK(pairwise_collision({0, 0, 0}, a, {1, 0, 0}, b, 0, 0.978) == 0.0);
    CHECK(pairwise_collision({0, 3, 0}, a, {1, 7, 0}, b, 0, 0.978) == 0.0);
  }

  SUBCASE("one shared pixel at the decision instant") {
    const Tube a = one_frame_tube(0, {{0, 0}, {1, 0}});
    const Tube b = one_frame_tube(1, {{1, 0}});
    CHECK(pairwise_collision({0, 0, 0}, a, {1, 0, 0}, b, 0, 0.978) == 1.0);
  }

  SUBCASE("four pixels exactly 50 frames in the future") {
    const Tube a = make_rect_tube(0, 1, 2, 2, 2, 2, 1);
    const Tube b = make_rect_tube(1, 1, 2, 2, 2, 2, 1);
    const double got = pairwise_collision({0, 50, 0}, a, {1, 50, 0}, b, 0, 0.978);
    const double expected = 4.0 * std::pow(0.978, 50.0);
    CHECK(got == doctest::Approx(expected).epsilon(1e-9));
  }

  SUBCASE("past frames are sunk") {
    const Tube a = make_rect_tube(0, 1, 0, 0, 2, 2, 10);
    const Tube b = make_rect_tube(1, 1, 0, 0, 2, 2, 10);
    // Both end at frame 10; from now = 10 nothing remains.
    CHECK(pairwise_collision({0, 0, 0}, a, {1, 0, 0}, b, 10, 1.0) == 0.0);
    // From now = 8 only frames 8 and 9 count.
    CHECK(pairwise_collision({0, 0, 0}, a, {1, 0, 0}, b, 8, 1.0) == 8.0);
  }
}

TEST_CASE("pairwise collision is exactly symmetric") {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const int frames_a = rng.uniform_int(1, 20);
    const int frames_b = rng.uniform_int(1, 20);
    const Tube a = make_rect_tube(0, 1, rng.uniform_int(0, 10), rng.uniform_int(0, 8),
                                  rng.uniform_int(1, 6), rng.uniform_int(1, 6), frames_a);
    const Tube b = make_rect_tube(1, 1, rng.uniform_int(0, 10), rng.uniform_int(0, 8),
                                  rng.uniform_int(1, 6), rng.uniform_int(1, 6), frames_b);
    const PlacedTube pa{0, rng.uniform_int(0, 15), 0};
    const PlacedTube pb{1, rng.uniform_int(0, 15), 0};
    const FrameIndex now = rng.uniform_int(0, 10);
    const double ab = pairwise_collision(pa, a, pb, b, now, 0.978);
    const double ba = pairwise_collision(pb, b, pa, a, now, 0.978);
    CHECK(ab == ba);
  }
}

TEST_CASE("collision cost over pairs") {
  const EngineConfig cfg_d1{.alpha = 1.0, .beta = 0.0, .collision_threshold = 15.0,
                            .discount = 1.0};

  SUBCASE("at most one tube means no pairs") {
    const Tube a = one_frame_tube(0, {{0, 0}});
    const TubeLookup lookup{std::span<const Tube>(&a, 1)};
    Selection sel{1, {}, 0};
    CHECK(collision_cost(sel, lookup, cfg_d1) == 0.0);
    sel.placed.push_back({0, 0, 0});
    CHECK(collision_cost(sel, lookup, cfg_d1) == 0.0);
  }

  SUBCASE("three mutually overlapping single-frame tubes, pairwise 1, 2, 3") {
    // Pair-shared pixel groups are disjoint, so intersections are exactly
    // |p12| = 1, |p13| = 2, |p23| = 3.
    const std::vector<Pixel> p12 = {{0, 0}};
    const std::vector<Pixel> p13 = {{1, 0}, {2, 0}};
    const std::vector<Pixel> p23 = {{3, 0}, {4, 0}, {5, 0}};
    auto concat = [](std::vector<Pixel> a, const std::vector<Pixel>& b) {
      a.insert(a.end(), b.begin(), b.end());
      return a;
    };
    const std::vector<Tube> tubes = {one_frame_tube(0, concat(p12, p13)),
                                     one_frame_tube(1, concat(p12, p23)),
                                     one_frame_tube(2, concat(p13, p23))};
    const TubeLookup lookup{std::span<const Tube>(tubes)};
    const Selection sel{1, {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, 0};
    CHECK(collision_cost(sel, lookup, cfg_d1) == 6.0);
    CHECK(voxel_collision_oracle(sel, lookup, 8, 4, 1.0) == 6.0);
  }
}

TEST_CASE("collision cost equals the voxel-grid recount on random instances") {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Tube> tubes;
    const int n = rng.uniform_int(2, 12);
    for (int i = 0; i < n; ++i) {
      tubes.push_back(make_rect_tube(i, 1, rng.uniform_int(0, 40), rng.uniform_int(0, 30),
                                     rng.uniform_int(2, 10), rng.uniform_int(2, 10),
                                     rng.uniform_int(1, 60)));
    }
    const TubeLookup lookup{std::span<const Tube>(tubes)};
    Selection sel{1, {}, rng.uniform_int(0, 20)};
    for (int i = 0; i < n; ++i) {
      if (rng.next_double() < 0.7) {
        sel.placed.push_back({i, rng.uniform_int(0, 40), 0});
      }
    }
    const EngineConfig cfg{.alpha = 1.0, .beta = 0.5, .collision_threshold = 15.0,
                           .discount = 0.978};
    const double fast = collision_cost(sel, lookup, cfg);
    const double oracle = voxel_collision_oracle(sel, lookup, 64, 48, 0.978);
    CHECK(fast == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("identity cost matches the definition") {
  ReidMatrix reid;
  reid.set(1, 10, 0.64);
  EngineConfig cfg;
  cfg.beta = 0.5;
  const MasterObservationSet obs{0, {10}};
  const Selection sel{1, {{1, 0, 0}}, 0};

  SUBCASE("fresh tube") {
    const double got = identity_cost(sel, {}, obs, reid, cfg);
    CHECK(got == doctest::Approx(0.8).epsilon(1e-12));
  }
  SUBCASE("retained tube carries the beta bonus") {
    const double got = identity_cost(sel, {1}, obs, reid, cfg);
    CHECK(got == doctest::Approx(std::sqrt(0.96)).epsilon(1e-12));
  }
  SUBCASE("empty observation set scores zero") {
    CHECK(identity_cost(sel, {1}, MasterObservationSet{0, {}}, reid, cfg) == 0.0);
  }
  SUBCASE("empty selection scores zero") {
    CHECK(identity_cost(Selection{1, {}, 0}, {}, obs, reid, cfg) == 0.0);
  }
}

TEST_CASE("total energy composes the two terms") {
  ReidMatrix reid;
  reid.set(0, 5, 0.64);
  const Tube a = one_frame_tube(0, {{0, 0}, {1, 0}});
  const Tube b = one_frame_tube(1, {{1, 0}});
  const std::vector<Tube> tubes = {a, b};
  const TubeLookup lookup{std::span<const Tube>(tubes)};
  const MasterObservationSet obs{0, {5}};

  SUBCASE("empty selection is zero") {
    EngineConfig cfg;
    CHECK(total_energy(Selection{1, {}, 0}, lookup, {}, obs, reid, cfg) == 0.0);
  }
  SUBCASE("identity reward alone goes negative") {
    EngineConfig cfg;
    cfg.alpha = 1.0;
    const Selection sel{1, {{0, 0, 0}}, 0};
    CHECK(total_energy(sel, lookup, {}, obs, reid, cfg) ==
          doctest::Approx(-0.8).epsilon(1e-12));
  }
  SUBCASE("alpha-weighted collision against identity") {
    EngineConfig cfg;
    cfg.alpha = 2.0;
    const Selection sel{1, {{0, 0, 0}, {1, 0, 0}}, 0};  // 1 colliding pixel
    CHECK(total_energy(sel, lookup, {}, obs, reid, cfg) ==
          doctest::Approx(2.0 * 1.0 - 0.8).epsilon(1e-12));
  }
}

TEST_CASE("adding a tube never decreases either cost term") {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Tube> tubes;
    ReidMatrix reid;
    const int n = rng.uniform_int(2, 8);
    for (int i = 0; i < n; ++i) {
      tubes.push_back(make_rect_tube(i, 1, rng.uniform_int(0, 20), rng.uniform_int(0, 20),
                                     rng.uniform_int(1, 8), rng.uniform_int(1, 8),
                                     rng.uniform_int(1, 30)));
      for (ObjectId o = 0; o < 3; ++o) reid.set(i, o, rng.next_double());
    }
    const TubeLookup lookup{std::span<const Tube>(tubes)};
    const MasterObservationSet obs{0, {0, 1, 2}};
    EngineConfig cfg;
    cfg.discount = rng.next_double() < 0.5 ? 1.0 : 0.9;

    Selection sel{1, {}, 0};
    TubeIdSet prev;
    for (int i = 0; i < n - 1; ++i) {
      if (rng.next_double() < 0.5) sel.placed.push_back({i, rng.uniform_int(0, 10), 0});
      if (rng.next_double() < 0.3) prev.insert(i);
    }
    const double c0 = collision_cost(sel, lookup, cfg);
    const double i0 = identity_cost(sel, prev, obs, reid, cfg);
    Selection bigger = sel;
    bigger.placed.push_back({n - 1, rng.uniform_int(0, 10), 0});
    CHECK(collision_cost(bigger, lookup, cfg) >= c0);
    CHECK(identity_cost(bigger, prev, obs, reid, cfg) >= i0);
  }
}

TEST_CASE("discounted collision never exceeds the undiscounted one") {
  Rng rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Tube> tubes;
    for (int i = 0; i < 5; ++i) {
      tubes.push_back(make_rect_tube(i, 1, rng.uniform_int(0, 10), rng.uniform_int(0, 10),
                                     rng.uniform_int(2, 8), rng.uniform_int(2, 8),
                                     rng.uniform_int(1, 30)));
    }
    const TubeLookup lookup{std::span<const Tube>(tubes)};
    Selection sel{1, {}, 0};
    for (int i = 0; i < 5; ++i) sel.placed.push_back({i, rng.uniform_int(0, 10), 0});
    EngineConfig discounted;
    discounted.discount = 0.9;
    EngineConfig undiscounted;
    undiscounted.discount = 1.0;
    CHECK(collision_cost(sel, lookup, discounted) <=
          collision_cost(sel, lookup, undiscounted));
  }
}

TEST_CASE("identity gain is non-increasing in accumulated mass") {
  // For one object, the marginal gain of a fixed tube is
  // sqrt(s + w*p) - sqrt(s): decreasing in the already-selected mass s.
  Rng rng(33);
  for (int trial = 0; trial < 100; ++trial) {
    const double wp = rng.uniform(0.01, 1.5);
    const double s1 = rng.uniform(0.0, 3.0);
    const double s2 = s1 + rng.uniform(0.0, 3.0);
    const double gain_small = std::sqrt(s1 + wp) - std::sqrt(s1);
    const double gain_large = std::sqrt(s2 + wp) - std::sqrt(s2);
    CHECK(gain_large <= gain_small + 1e-15);
  }
}

TEST_CASE("identity cost agrees with the independent evaluation") {
  Rng rng(34);
  for (int trial = 0; trial < 20; ++trial) {
    ReidMatrix reid;
    std::vector<Tube> tubes;
    const int n = rng.uniform_int(1, 10);
    std::vector<ObjectId> objects = {0, 1, 2, 3};
    for (int i = 0; i < n; ++i) {
      tubes.push_back(make_rect_tube(i, 1, 0, 0, 1, 1, 1));
      for (const ObjectId o : objects) {
        if (rng.next_double() < 0.7) reid.set(i, o, rng.next_double());
      }
    }
    Selection sel{1, {}, 0};
    TubeIdSet prev;
    std::vector<TubeId> ids;
    for (int i = 0; i < n; ++i) {
      if (rng.next_double() < 0.6) {
        sel.placed.push_back({i, 0, 0});
        ids.push_back(i);
      }
      if (rng.next_double() < 0.4) prev.insert(i);
    }
    EngineConfig cfg;
    cfg.beta = rng.uniform(0.0, 1.0);
    const MasterObservationSet obs{0, objects};
    const double got = identity_cost(sel, prev, obs, reid, cfg);
    const double expected = direct_identity(ids, prev, objects, reid, cfg.beta);
    CHECK(got == doctest::Approx(expected).epsilon(1e-12));
  }
}
