#include <gtest/gtest.h>

#include <cmath>

#include "ftmp/barrier.hpp"
#include "ftmp/error.hpp"
#include "ftmp/random.hpp"
#include "oracles.hpp"

using namespace ftmp;
namespace fz = oracle::frozen;

namespace {

RealVec v2(double x, double y) { return RealVec{{x, y}}; }
oracle::P p(const RealVec& v) { return {v(0), v(1)}; }

const BarrierParams kParams{};

struct Sample {
  RealVec x, goal, nb;
};

// Random planar state with |x - nb| >= d_c + margin.
Sample random_safe(Rng& rng, double margin) {
  for (;;) {
    Sample s{v2(rng.uniform(-10, 10), rng.uniform(-10, 10)), v2(rng.uniform(-10, 10), rng.uniform(-10, 10)),
             v2(rng.uniform(-10, 10), rng.uniform(-10, 10))};
    if ((s.x - s.nb).norm() >= kParams.clearance + margin) return s;
  }
}

}  // namespace

TEST(Barrier, ReferenceState) {
  const auto ev = evaluate_barrier(v2(1, 0), v2(0, 0), v2(4, 0), kParams);
  EXPECT_NEAR(ev.value, fz::kBarrierValue, 1e-15);
  EXPECT_NEAR(ev.denominator, fz::kDenominator, 1e-15);
  EXPECT_NEAR(ev.grad_self(0), fz::kGradSelfX, 1e-14);
  EXPECT_NEAR(ev.grad_self(1), 0.0, 1e-15);
  EXPECT_NEAR(ev.grad_neighbor(0), fz::kGradNeighborX, 1e-14);
  EXPECT_TRUE(ev.in_safe_region);
}

TEST(Barrier, ReferenceStateMatchesScalarOracle) {
  const auto ev = evaluate_barrier(v2(1, 0), v2(0, 0), v2(4, 0), kParams);
  EXPECT_NEAR(ev.value, oracle::barrier({1, 0}, {0, 0}, {4, 0}, 2.0, 1e4), 1e-15);
  const auto g = oracle::fd_grad_self({1, 0}, {0, 0}, {4, 0}, 2.0, 1e4, 1e-6);
  EXPECT_NEAR(ev.grad_self(0), g.x, 1e-5);
}

TEST(Barrier, AtGoalIsZero) {
  const auto ev = evaluate_barrier(v2(3, 3), v2(3, 3), v2(9, 3), kParams);
  EXPECT_EQ(ev.value, 0.0);
  EXPECT_TRUE(ev.grad_self.isZero(0.0));
  EXPECT_TRUE(ev.grad_neighbor.isZero(0.0));
}

TEST(Barrier, CoincidentAgentsThrow) {
  try {
    evaluate_barrier(v2(1, 1), v2(0, 0), v2(1, 1), kParams);
    FAIL() << "expected CoincidentAgents";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CoincidentAgents);
  }
}

TEST(Barrier, DenominatorBelowFloorThrows) {
  // |x - nb| = 1 gives x0 = 1 - 2 + 1e-4 < 0.
  try {
    evaluate_barrier(v2(1, 0), v2(0, 0), v2(2, 0), kParams);
    FAIL() << "expected DenominatorUnderflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DenominatorUnderflow);
  }
}

TEST(Barrier, GradientsMatchCentralDifferences) {
  Rng rng(11);
  for (int n = 0; n < 1000; ++n) {
    const Sample s = random_safe(rng, 0.05);
    const auto ev = evaluate_barrier(s.x, s.goal, s.nb, kParams);
    const auto gs = oracle::fd_grad_self(p(s.x), p(s.goal), p(s.nb), 2.0, 1e4, 1e-6);
    const auto gn = oracle::fd_grad_neighbor(p(s.x), p(s.goal), p(s.nb), 2.0, 1e4, 1e-6);
    EXPECT_LE(std::hypot(ev.grad_self(0) - gs.x, ev.grad_self(1) - gs.y), 1e-5 * (1 + ev.grad_self.norm()));
    EXPECT_LE(std::hypot(ev.grad_neighbor(0) - gn.x, ev.grad_neighbor(1) - gn.y),
              1e-5 * (1 + ev.grad_neighbor.norm()));
  }
}

TEST(Barrier, ValueNonNegativeAndZeroOnlyAtGoal) {
  Rng rng(12);
  for (int n = 0; n < 500; ++n) {
    const Sample s = random_safe(rng, 0.0);
    const auto ev = evaluate_barrier(s.x, s.goal, s.nb, kParams);
    EXPECT_GT(ev.value, 0.0);
    EXPECT_TRUE(std::isfinite(ev.grad_self.norm()));
  }
}

TEST(Barrier, RotationEquivariance) {
  Rng rng(13);
  for (int n = 0; n < 200; ++n) {
    const Sample s = random_safe(rng, 0.05);
    const double th = rng.uniform(0, 2 * M_PI);
    Eigen::Matrix2d q;
    q << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    const auto a = evaluate_barrier(s.x, s.goal, s.nb, kParams);
    const auto b = evaluate_barrier(q * s.x, q * s.goal, q * s.nb, kParams);
    EXPECT_NEAR(b.value, a.value, 1e-12 * (1 + std::abs(a.value)));
    EXPECT_LE((b.grad_self - q * a.grad_self).norm(), 1e-12 * (1 + a.grad_self.norm()));
  }
}

TEST(Barrier, TranslationInvariance) {
  Rng rng(14);
  for (int n = 0; n < 200; ++n) {
    const Sample s = random_safe(rng, 0.05);
    const RealVec shift = v2(rng.uniform(-50, 50), rng.uniform(-50, 50));
    const auto a = evaluate_barrier(s.x, s.goal, s.nb, kParams);
    const auto b = evaluate_barrier(s.x + shift, s.goal + shift, s.nb + shift, kParams);
    EXPECT_NEAR(b.value, a.value, 1e-12 * (1 + std::abs(a.value)));
    EXPECT_LE((b.grad_self - a.grad_self).norm(), 1e-12 * (1 + a.grad_self.norm()) * 1e2);
  }
}

TEST(Barrier, DimensionAgnostic) {
  const RealVec x{{1.0, 0.0, 0.0}}, goal{{0.0, 0.0, 0.0}}, nb{{4.0, 0.0, 0.0}};
  const auto ev = evaluate_barrier(x, goal, nb, kParams);
  EXPECT_NEAR(ev.value, fz::kBarrierValue, 1e-15);
  EXPECT_EQ(ev.grad_self.size(), 3);
}

TEST(QuadraticBound, Examples) {
  EXPECT_TRUE(quadratic_bound_holds(v2(1, 0), v2(0, 0), v2(4, 0), kParams));
  EXPECT_TRUE(quadratic_bound_holds(v2(0, 0), v2(0, 0), v2(4, 0), kParams));
  // Contact distance: equality case.
  EXPECT_TRUE(quadratic_bound_holds(v2(2, 0), v2(0, 0), v2(4, 0), kParams));
}

TEST(QuadraticBound, InsideClearanceThrows) {
  try {
    quadratic_bound_holds(v2(3, 0), v2(0, 0), v2(4, 0), kParams);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DomainViolation);
  }
}

TEST(QuadraticBound, HoldsOnRandomSafeStates) {
  Rng rng(15);
  for (int n = 0; n < 1000; ++n) {
    const Sample s = random_safe(rng, 0.0);
    EXPECT_TRUE(quadratic_bound_holds(s.x, s.goal, s.nb, kParams));
  }
}

TEST(StationaryPoints, ReferenceInstance) {
  const auto pts = stationary_points(v2(0, 0), v2(4, 0), kParams);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_NEAR(pts[0].location(0), fz::kFarRoot, 1e-12);
  EXPECT_NEAR(pts[0].location(1), 0.0, 1e-12);
  EXPECT_TRUE(pts[0].in_safe_region);
  EXPECT_LT(pts[0].residual, 1e-10);
  // Independent check with the scalar finite-difference oracle.
  const auto g = oracle::fd_grad_self({fz::kFarRoot, 0}, {0, 0}, {4, 0}, 2.0, 1e4, 1e-6);
  EXPECT_LT(oracle::norm(g), 1e-6);
}

TEST(StationaryPoints, NearCandidateIsNotAZero) {
  // The excluded near-side candidate lies inside the clearance disc; the sign
  // of dB/dx along the axis never changes between the disc and the goal.
  const auto pts = stationary_points(v2(0, 0), v2(4, 0), kParams);
  for (const auto& pt : pts) EXPECT_GT((pt.location - v2(fz::kNearCandidate, 0)).norm(), 1.0);
  int sign_changes = 0;
  double prev = oracle::fd_grad_self({-1.0, 0}, {0, 0}, {4, 0}, 2, 1e4, 1e-7).x;
  for (int i = 1; i <= 1000; ++i) {
    const double x = -1.0 + 2.9 * i / 1000.0;
    if (std::abs(x) < 1e-9) continue;
    const double g = oracle::fd_grad_self({x, 0}, {0, 0}, {4, 0}, 2, 1e4, 1e-7).x;
    if ((g > 0) != (prev > 0)) ++sign_changes;
    prev = g;
  }
  EXPECT_EQ(sign_changes, 1);  // only at the goal
}

TEST(StationaryPoints, ResidualsVerifiedOnRandomInstances) {
  Rng rng(16);
  for (int n = 0; n < 300; ++n) {
    const RealVec goal = v2(rng.uniform(-10, 10), rng.uniform(-10, 10));
    const RealVec nb = v2(rng.uniform(-10, 10), rng.uniform(-10, 10));
    for (const auto& pt : stationary_points(goal, nb, kParams)) {
      EXPECT_LE(pt.residual, 1e-8 * (1 + (pt.location - goal).norm()));
      // Collinear with goal and neighbour.
      const RealVec a = pt.location - nb, b = goal - nb;
      EXPECT_NEAR(a(0) * b(1) - a(1) * b(0), 0.0, 1e-9 * (1 + a.norm() * b.norm()));
    }
  }
}

TEST(StationaryPoints, SafeNearSideRootWhenGoalInsideClearance) {
  // d < d_c - 2/eps admits a near-side zero on the far side of the goal.
  const double d = 0.99995;
  const auto pts = stationary_points(v2(0, 0), v2(d, 0), kParams);
  ASSERT_EQ(pts.size(), 2u);
  for (const auto& pt : pts) {
    EXPECT_TRUE(pt.in_safe_region);
    const auto g = oracle::fd_grad_self(p(pt.location), {0, 0}, {d, 0}, 2, 1e4, 1e-6);
    EXPECT_LT(oracle::norm(g), 1e-5);
  }
}
