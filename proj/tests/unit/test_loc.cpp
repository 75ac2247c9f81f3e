#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "uak/cloud/map_store.hpp"
#include "uak/loc/localizer.hpp"
#include "uak/loc/registration.hpp"

using namespace uak;
using loc::RegistrationConfig;

namespace {

// Structured environment cloud: straight walls in several orientations, a
// circular boundary wall, and a grid of poles — dense and low-jitter so the
// voxel statistics constrain planar registration in every direction.
cloud::PointCloud environment_cloud(unsigned seed = 2024) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.005, 0.005);
  cloud::PointCloud out;
  out.frame = cloud::Frame::Map;
  for (double s = -20.0; s <= 20.0; s += 0.05) {
    for (double z = 0.0; z <= 2.0; z += 0.5) {
      out.points.push_back({s + jitter(rng), -8.0 + jitter(rng), z, 0.4});
      out.points.push_back({s + jitter(rng), 8.0 + jitter(rng), z, 0.4});
      out.points.push_back({-15.0 + jitter(rng), 0.4 * s + jitter(rng), z, 0.4});
    }
  }
  for (double a = 0.0; a < 2.0 * std::numbers::pi; a += 0.05 / 18.0) {
    for (double z = 0.0; z <= 2.0; z += 0.5) {
      out.points.push_back({18.0 * std::cos(a) + jitter(rng),
                            18.0 * std::sin(a) + jitter(rng), z, 0.6});
    }
  }
  for (double px = -12.0; px <= 12.0; px += 6.0) {
    for (double py = -6.0; py <= 6.0; py += 4.0) {
      for (double z = 0.0; z <= 3.0; z += 0.25) {
        out.points.push_back({px + jitter(rng), py + jitter(rng), z, 0.8});
      }
    }
  }
  return out;
}

geom::Transform2 transform_of(double x, double y, double theta) {
  return geom::Transform2{theta, {x, y}};
}

// Drives the solver well below the 1e-3 comparison tolerances used by the
// transform-recovery properties.
RegistrationConfig precision_config() {
  RegistrationConfig cfg;
  cfg.epsilon_corres = 1e-5;
  cfg.max_iterations = 200;
  return cfg;
}

}  // namespace

TEST_CASE("self-registration returns the identity") {
  const cloud::VoxelGaussianGrid grid = cloud::voxelize(environment_cloud(), 1.0);
  const loc::RegistrationResult r =
      loc::register_grids(grid, grid, geom::Transform2::identity(), {});
  CHECK(r.converged);
  CHECK(std::abs(r.transform.rotation) < 1e-9);
  CHECK(r.transform.translation.norm() < 1e-9);
  CHECK(r.fitness == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("a known perturbation is recovered to its inverse") {
  const cloud::PointCloud env = environment_cloud();
  const geom::Transform2 t_star = transform_of(0.5, -0.3, 0.05);
  const cloud::PointCloud moved = env.transformed(t_star);

  const cloud::VoxelGaussianGrid source = cloud::voxelize(moved, 1.0);
  const cloud::VoxelGaussianGrid target = cloud::voxelize(env, 1.0);
  const loc::RegistrationResult r = loc::register_grids(
      source, target, geom::Transform2::identity(), precision_config());
  CHECK(r.converged);

  const geom::Transform2 expected = geom::inverse(t_star);
  CHECK(std::abs(r.transform.rotation - expected.rotation) < 1e-3);
  CHECK((r.transform.translation - expected.translation).norm() < 1e-3);
}

TEST_CASE("registration is equivariant under source pre-transforms") {
  const cloud::PointCloud env = environment_cloud();
  const geom::Transform2 t_star = transform_of(0.4, 0.2, -0.03);
  const cloud::VoxelGaussianGrid target = cloud::voxelize(env, 1.0);
  const cloud::VoxelGaussianGrid source =
      cloud::voxelize(env.transformed(t_star), 1.0);

  const loc::RegistrationResult base = loc::register_grids(
      source, target, geom::Transform2::identity(), precision_config());

  const geom::Transform2 g = transform_of(0.3, -0.1, 0.02);
  const cloud::VoxelGaussianGrid shifted = cloud::transformed_grid(source, g);
  const loc::RegistrationResult moved = loc::register_grids(
      shifted, target, geom::inverse(g), precision_config());

  // Recovered transform should shift by exactly g^-1 on the right.
  const geom::Transform2 recomposed = geom::compose(moved.transform, g);
  CHECK(std::abs(recomposed.rotation - base.transform.rotation) < 1e-3);
  CHECK((recomposed.translation - base.transform.translation).norm() < 1e-3);
}

TEST_CASE("forward and reverse registration are mutually inverse") {
  const cloud::PointCloud env = environment_cloud();
  const geom::Transform2 t_star = transform_of(0.3, 0.15, 0.02);
  const cloud::VoxelGaussianGrid a = cloud::voxelize(env, 1.0);
  const cloud::VoxelGaussianGrid b =
      cloud::voxelize(env.transformed(t_star), 1.0);

  const loc::RegistrationResult ab = loc::register_grids(
      a, b, geom::Transform2::identity(), precision_config());
  const loc::RegistrationResult ba = loc::register_grids(
      b, a, geom::Transform2::identity(), precision_config());
  const geom::Transform2 combined = geom::compose(ab.transform, ba.transform);
  CHECK(std::abs(combined.rotation) < 1e-3);
  CHECK(combined.translation.norm() < 1e-3);
}

TEST_CASE("registration is bit-identical across worker counts") {
  const cloud::PointCloud env = environment_cloud();
  const cloud::VoxelGaussianGrid target = cloud::voxelize(env, 1.0);
  const cloud::VoxelGaussianGrid source =
      cloud::voxelize(env.transformed(transform_of(0.5, -0.3, 0.05)), 1.0);

  RegistrationConfig one;
  one.worker_count = 1;
  RegistrationConfig six;
  six.worker_count = 6;
  const loc::RegistrationResult a =
      loc::register_grids(source, target, geom::Transform2::identity(), one);
  const loc::RegistrationResult b =
      loc::register_grids(source, target, geom::Transform2::identity(), six);
  CHECK(a.transform.rotation == b.transform.rotation);
  CHECK(a.transform.translation.x() == b.transform.translation.x());
  CHECK(a.transform.translation.y() == b.transform.translation.y());
  CHECK(a.fitness == b.fitness);
  CHECK(a.iterations_used == b.iterations_used);
}

TEST_CASE("disjoint grids raise NoCorrespondences") {
  cloud::PointCloud near;
  near.points = {{0.0, 0.0, 0.0, 0.5}, {1.0, 0.0, 0.0, 0.5}};
  cloud::PointCloud far;
  far.points = {{500.0, 0.0, 0.0, 0.5}, {501.0, 0.0, 0.0, 0.5}};
  const cloud::VoxelGaussianGrid a = cloud::voxelize(near, 1.0);
  const cloud::VoxelGaussianGrid b = cloud::voxelize(far, 1.0);
  CHECK_THROWS_AS(
      loc::register_grids(a, b, geom::Transform2::identity(), {}),
      loc::NoCorrespondences);
}

TEST_CASE("odometry prediction on canonical tracks") {
  SUBCASE("stationary track gives the identity increment") {
    loc::OdometryTrack track;
    track.push(0.0, {2.0, 3.0, 0.7});
    track.push(1.0, {2.0, 3.0, 0.7});
    const geom::Transform2 inc = loc::predict_from_odometry(track, 0.2, 0.5);
    CHECK(std::abs(inc.rotation) < 1e-12);
    CHECK(inc.translation.norm() < 1e-12);
  }
  SUBCASE("straight motion maps to a body-x translation") {
    loc::OdometryTrack track;
    for (int i = 0; i <= 10; ++i) {
      track.push(0.1 * i, {0.1 * i, 0.0, 0.0});
    }
    const geom::Transform2 inc = loc::predict_from_odometry(track, 0.5, 0.1);
    CHECK(inc.translation.x() == doctest::Approx(0.1));
    CHECK(inc.translation.y() == doctest::Approx(0.0));
    CHECK(inc.rotation == doctest::Approx(0.0));
  }
  SUBCASE("extrapolation continues the last motion") {
    loc::OdometryTrack track;
    track.push(0.0, {0.0, 0.0, 0.0});
    track.push(1.0, {1.0, 0.0, 0.0});
    const geom::Transform2 inc = loc::predict_from_odometry(track, 1.0, 0.5);
    CHECK(inc.translation.x() == doctest::Approx(0.5));
  }
  SUBCASE("single-sample track is insufficient") {
    loc::OdometryTrack track;
    track.push(0.0, {0.0, 0.0, 0.0});
    CHECK_THROWS_AS(loc::predict_from_odometry(track, 0.0, 0.1),
                    loc::InsufficientHistory);
  }
}

TEST_CASE("failure detection follows the reachability inequality") {
  loc::RegistrationResult good;
  good.converged = true;
  good.fitness = 0.1;

  RegistrationConfig wide;
  wide.max_iterations = 64;
  wide.epsilon_corres = 0.03;  // reachable correction 1.92 m
  RegistrationConfig narrow;
  narrow.max_iterations = 32;
  narrow.epsilon_corres = 0.01;  // reachable correction 0.32 m

  const geom::Pose2 prev{0.0, 0.0, 0.0};
  const geom::Pose2 next{1.67, 0.0, 0.0};  // 60 kph step at 10 Hz

  CHECK_FALSE(loc::detect_failure(good, prev, next, wide, 0.5));
  CHECK(loc::detect_failure(good, prev, next, narrow, 0.5));

  SUBCASE("perfect match is never a failure") {
    loc::RegistrationResult perfect;
    perfect.converged = true;
    perfect.fitness = 0.0;
    CHECK_FALSE(loc::detect_failure(perfect, prev, prev, wide, 0.5));
  }
  SUBCASE("fitness above threshold fails") {
    loc::RegistrationResult poor = good;
    poor.fitness = 0.9;
    CHECK(loc::detect_failure(poor, prev, prev, wide, 0.5));
  }
  SUBCASE("non-convergence fails") {
    loc::RegistrationResult nc = good;
    nc.converged = false;
    CHECK(loc::detect_failure(nc, prev, prev, wide, 0.5));
  }
}

TEST_CASE("forced failures degrade to bit-exact odometry chaining") {
  const cloud::PointCloud env = environment_cloud();
  const cloud::MapStore store(cloud::voxelize(env, 1.0), geom::Pose2{});

  loc::OdometryTrack odom;
  for (int i = 0; i <= 12; ++i) {
    odom.push(0.1 * i, {0.8 * 0.1 * i, 0.02 * i, 0.01 * i});
  }

  RegistrationConfig cfg;
  cfg.matching_error_threshold = -1.0;  // every fitness exceeds this

  loc::LocalizerState state =
      loc::LocalizerState::initialized(geom::Pose2{0.0, 0.0, 0.0}, 0.0);
  geom::Pose2 expected = state.pose;

  for (int k = 1; k <= 5; ++k) {
    const double t = 0.1 * k;
    const geom::Transform2 inc =
        loc::predict_from_odometry(odom, state.t, t - state.t);
    const cloud::PointCloud scan = env.transformed(
        geom::inverse(geom::to_transform(geom::Pose2{0.08 * k, 0.0, 0.0})));
    const auto [next, result] =
        loc::localization_step(scan, odom, state, store, cfg, 0.8, t);
    expected = geom::advance(expected, inc);

    CHECK(next.last_failed);
    CHECK(next.consecutive_failures == k);
    CHECK(next.pose.x == expected.x);
    CHECK(next.pose.y == expected.y);
    CHECK(next.pose.theta == expected.theta);
    state = next;
  }
}

TEST_CASE("localization_step fuses scans back to the true pose") {
  const cloud::PointCloud env = environment_cloud();
  const cloud::MapStore store(cloud::voxelize(env, 1.0), geom::Pose2{});

  // Truth: gentle forward drive; odometry equals truth here.
  std::vector<geom::Pose2> truth;
  loc::OdometryTrack odom;
  for (int i = 0; i <= 10; ++i) {
    const geom::Pose2 p{0.5 * 0.1 * i, 0.0, 0.0};
    truth.push_back(p);
    odom.push(0.1 * i, p);
  }

  loc::LocalizerState state =
      loc::LocalizerState::initialized(truth[0], 0.0);
  for (int k = 1; k <= 10; ++k) {
    const cloud::PointCloud scan =
        env.transformed(geom::inverse(geom::to_transform(truth[k])));
    const auto [next, result] =
        loc::localization_step(scan, odom, state, store, {}, 0.5, 0.1 * k);
    CHECK_FALSE(next.last_failed);
    CHECK(geom::planar_distance(next.pose, truth[k]) < 0.05);
    CHECK(std::isfinite(next.pose.x));
    CHECK(std::isfinite(next.pose.theta));
    state = next;
  }
}

namespace {

road::RoadGraph two_lane_graph() {
  road::RoadGraph graph;
  graph.add_node({"a0", {0.0, 0.0}});
  graph.add_node({"a1", {60.0, 0.0}});
  graph.add_node({"b0", {0.0, 4.0}});
  graph.add_node({"b1", {60.0, 4.0}});
  road::RoadLink lane_a;
  lane_a.id = "lane_a";
  lane_a.node_ids = {"a0", "a1"};
  lane_a.length = 60.0;
  lane_a.left_link = "lane_b";
  road::RoadLink lane_b;
  lane_b.id = "lane_b";
  lane_b.node_ids = {"b0", "b1"};
  lane_b.length = 60.0;
  lane_b.right_link = "lane_a";
  graph.add_link(lane_a);
  graph.add_link(lane_b);
  graph.validate();
  return graph;
}

}  // namespace

TEST_CASE("health check measures lateral offset to the nearest link") {
  const road::RoadGraph graph = two_lane_graph();
  CHECK(loc::health_check({10.0, 0.0, 0.0}, graph, 1.5));
  CHECK_FALSE(loc::health_check({10.0, 2.0, 0.0}, graph, 1.5));
  // Between the lanes, the nearer one decides: 2.6 m sits 1.4 m from lane_b.
  CHECK(loc::health_check({10.0, 2.6, 0.0}, graph, 1.5));
}

TEST_CASE("resilience machine transitions") {
  loc::LocalizerState nav = loc::LocalizerState::initialized({}, 0.0);

  CHECK(loc::resilience_transition(nav, true, true, true) ==
        loc::Mode::Navigation);
  CHECK(loc::resilience_transition(nav, true, false, true) ==
        loc::Mode::LaneFollow);
  CHECK(loc::resilience_transition(nav, false, true, true) ==
        loc::Mode::LaneFollow);
  CHECK(loc::resilience_transition(nav, false, false, false) ==
        loc::Mode::Stop);

  SUBCASE("lane-follow recovers only after a clean fix") {
    loc::LocalizerState lf = nav;
    lf.mode = loc::Mode::LaneFollow;
    lf.consecutive_failures = 3;
    CHECK(loc::resilience_transition(lf, true, true, true) ==
          loc::Mode::LaneFollow);
    lf.consecutive_failures = 0;
    CHECK(loc::resilience_transition(lf, true, true, true) ==
          loc::Mode::Navigation);
  }

  SUBCASE("stop absorbs until re-initialization") {
    loc::LocalizerState stop = nav;
    stop.mode = loc::Mode::Stop;
    CHECK(loc::resilience_transition(stop, true, true, true) ==
          loc::Mode::Stop);
    CHECK(loc::resilience_transition(stop, false, false, true) ==
          loc::Mode::Stop);
    const loc::LocalizerState fresh =
        loc::reinitialize(geom::Pose2{1.0, 2.0, 0.1}, 5.0);
    CHECK(fresh.mode == loc::Mode::Navigation);
    CHECK(fresh.consecutive_failures == 0);
    CHECK(fresh.pose.x == doctest::Approx(1.0));
  }
}
