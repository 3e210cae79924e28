#include <gtest/gtest.h>

#include <cmath>

#include "cdust/cantor.hpp"
#include "cdust/composite.hpp"
#include "cdust/errors.hpp"
#include "cdust/rng.hpp"

using namespace cdust;

namespace {

const Square kUnit{{0, 0}, 1};

BoxGrid full_grid(int level) {
  BoxGrid g(kUnit, level);
  for (std::size_t j = 0; j < g.cells_per_side(); ++j)
    for (std::size_t i = 0; i < g.cells_per_side(); ++i) g.set(i, j);
  return g;
}

BoxGrid dust_grid(double alpha, std::size_t depth, int level) {
  const auto s = generate_cantor(Alpha(alpha), depth).squares();
  return rasterize(std::span<const Square>(s), kUnit, level);
}

const BoxGrid& working_set() {
  static const BoxGrid g = dust_grid(0.4, 8, 10);
  return g;
}

const CompositeResult& working_run() {
  static const CompositeResult r = [] {
    ConstructConfig c;
    c.placement.seed = 3;
    return run_construction(working_set(), c);
  }();
  return r;
}

}  // namespace

TEST(BuildAnnuli, FullSquareHalvesEveryTime) {
  const BoxGrid g = full_grid(8);
  const std::vector<double> d{1.5, 1.6, 1.7};
  AnnulusConfig config;
  config.initial_half_width = 0.5;
  const auto chain = build_annuli(g, {0.5, 0.5}, d, config);
  EXPECT_EQ(chain.half_widths, (std::vector<double>{0.5, 0.25, 0.125, 0.0625}));
  EXPECT_EQ(chain.size(), 3u);
  EXPECT_DOUBLE_EQ(chain.diameter_bound(2), 0.03125);
  // From the default r_1 = side the first halving leaves R_1 outside the square.
  EXPECT_EQ(build_annuli(g, {0.5, 0.5}, d).half_widths[1], 0.25);
}

TEST(BuildAnnuli, QuarterDustChainMeetsTheSet) {
  const BoxGrid g = dust_grid(0.25, 6, 12);
  const auto p = find_full_dimension_point(g);
  const auto d = default_d_sequence(1.0, 3, 0.15);
  const auto chain = build_annuli(g, p.point, d);
  ASSERT_EQ(chain.size(), 3u);
  for (std::size_t n = 1; n <= 3; ++n) {
    EXPECT_GE(restrict_to_annulus(g, chain, n).count(), 16u) << "annulus " << n;
    EXPECT_LT(chain.inner(n), chain.outer(n));
  }
}

TEST(BuildAnnuli, SinglePointFailsAtTheFirstAnnulus) {
  BoxGrid g(kUnit, 8);
  g.set(100, 100);
  const std::vector<double> d{0.5, 0.6, 0.7};
  try {
    build_annuli(g, g.cell_center(100, 100), d);
    FAIL() << "expected ConstructionError";
  } catch (const ConstructionError& e) {
    EXPECT_EQ(e.index(), 1u);
  }
}

TEST(AnnulusChain, MembershipIsHalfOpen) {
  const AnnulusChain chain{{0.5, 0.5}, {0.5, 0.25, 0.1}};
  EXPECT_TRUE(chain.contains(1, {0.75, 0.5}));
  EXPECT_FALSE(chain.contains(1, {1.0, 0.5}));
  EXPECT_TRUE(chain.contains(2, {0.5, 0.65}));
  EXPECT_TRUE(chain.contains(2, {0.35, 0.5}));
  EXPECT_FALSE(chain.contains(2, {0.5, 0.55}));
  EXPECT_THROW(chain.diameter_bound(2), ParameterError);
}

TEST(DSequence, IncreasingAndBelowTheTarget) {
  const auto d = default_d_sequence(1.5, 9, 0.15);
  ASSERT_EQ(d.size(), 9u);
  EXPECT_DOUBLE_EQ(d[0], 1.35 * 0.75);
  for (std::size_t k = 1; k < d.size(); ++k) EXPECT_GT(d[k], d[k - 1]);
  EXPECT_LT(d.back(), 1.35);
}

TEST(ChooseB, ConstantOne) {
  const std::vector<double> d(5, 1.0);
  EXPECT_DOUBLE_EQ(choose_b_sequence(d)[0], 1.75);
}

TEST(ChooseB, ConstantPointTwo) {
  const std::vector<double> d(8, 0.2);
  const auto b = choose_b_sequence(d);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_DOUBLE_EQ(b[k], 1.9);
  for (std::size_t k = 4; k < 8; ++k) EXPECT_GT(b[k], 1.9);
  EXPECT_TRUE(b_constraints_hold(0.2, 1.9));
}

TEST(ChooseB, ReplayOnRandomSequences) {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> d;
    double x = rng.uniform(0.01, 1.0);
    for (int n = 0; n < 50; ++n) {
      x += rng.uniform(0.0, (1.99 - x) / 10);
      d.push_back(x);
    }
    const auto b = choose_b_sequence(d);
    for (std::size_t n = 0; n < d.size(); ++n) {
      EXPECT_TRUE(b_constraints_hold(d[n], b[n])) << "n = " << n + 1;
      EXPECT_GE(b[n], 1.75);
    }
    EXPECT_GT(b.back(), b.front());
  }
}

TEST(ChooseB, DomainErrors) {
  EXPECT_THROW(choose_b_sequence(std::vector<double>{0.5, 0.0}), DomainError);
  EXPECT_THROW(choose_b_sequence(std::vector<double>{2.0}), DomainError);
  EXPECT_FALSE(b_constraints_hold(0.1, 1.8));
  EXPECT_FALSE(b_constraints_hold(1.0, 1.5));
}

TEST(Placement, FullSquareCarriesTheCopyDimension) {
  const BoxGrid g = full_grid(10);
  const AnnulusChain chain{{0.5, 0.5}, {0.5, 0.25, 0.125, 0.0625}};
  PlacementConfig c;
  c.trials = 10;
  c.seed = 1;
  const auto pl = place_cantor_in_annulus(g, chain, 2, 1.8, c);
  EXPECT_NEAR(pl.estimate.slope, 1.8, 0.15);
  EXPECT_TRUE(chain.contains(2, pl.iso.z));
  EXPECT_LT(pl.diameter, chain.diameter_bound(2));
}

TEST(Placement, WorkingSetMeetsTheTarget) {
  const BoxGrid& g = working_set();
  const auto p = find_full_dimension_point(g);
  const auto d = default_d_sequence(std::min(1.5, p.min_local_slope), 3, 0.15);
  const auto chain = build_annuli(g, p.point, d);
  PlacementConfig c;
  c.seed = 5;
  const auto pl = place_cantor_in_annulus(g, chain, 2, 1.8, c);
  EXPECT_GE(pl.estimate.slope, d[1] + 1.8 - 2.0 - 0.2);
}

TEST(Placement, EmptyAnnulusIsAnError) {
  BoxGrid g(kUnit, 8);
  g.set(0, 0);
  const AnnulusChain chain{{0.5, 0.5}, {0.5, 0.25, 0.125, 0.0625}};
  try {
    place_cantor_in_annulus(g, chain, 2, 1.8, {});
    FAIL() << "expected PlacementError";
  } catch (const PlacementError& e) {
    EXPECT_EQ(e.index(), 2u);
  }
  EXPECT_THROW(place_cantor_in_annulus(g, chain, 1, 1.8, {}), ParameterError);
}

TEST(Assembly, OnePlacementGivesItsOwnSlope) {
  const BoxGrid g = full_grid(10);
  const AnnulusChain chain{{0.5, 0.5}, {0.5, 0.25, 0.125, 0.0625}};
  PlacementConfig c;
  c.trials = 5;
  const std::vector<Placement> pl{place_cantor_in_annulus(g, chain, 2, 1.8, c)};
  const auto a = assemble_composite(g, chain, pl);
  EXPECT_NEAR(a.report.dim_e_prime, pl[0].estimate.slope, 1e-9);
  EXPECT_TRUE(a.report.contained);
}

TEST(Assembly, OverlappingCopiesAreRejected) {
  const BoxGrid g = full_grid(8);
  const AnnulusChain chain{{0.5, 0.5}, {0.5, 0.25, 0.125, 0.0625}};
  Placement p;
  p.annulus = 2;
  p.alpha = alpha_for_dimension(1.8);
  p.depth = 2;
  p.diameter = 0.05;
  p.iso = Isometry::translation({0.7, 0.5});
  const std::vector<Placement> both{p, p};
  EXPECT_FALSE(placements_disjoint(both));
  EXPECT_THROW(assemble_composite(g, chain, both), AssemblyError);
  Placement q = p;
  q.iso = Isometry::translation({0.3, 0.5});
  EXPECT_TRUE(placements_disjoint(std::vector<Placement>{p, q}));
}

TEST(Construction, WorkingSetInvariants) {
  const auto& r = working_run();
  ASSERT_FALSE(r.single_point);
  const auto& rep = r.assembly.report;
  EXPECT_TRUE(replay_plan_constraints(r.plan).empty());
  EXPECT_TRUE(placements_disjoint(r.plan.placements));
  EXPECT_TRUE(rep.disjoint);
  EXPECT_TRUE(is_subset(r.assembly.e_prime, working_set()));
  EXPECT_EQ(rep.e_prime_cells, r.assembly.e_prime.count());
  EXPECT_EQ(r.plan.placements.size(), 3u);
  EXPECT_EQ(r.plan.half_widths.size(), 8u);  // six annuli plus the guard
  EXPECT_LE(rep.dim_e_prime, rep.dim_e.slope + 0.1);
  EXPECT_GE(rep.dim_e_prime, rep.dim_e.slope - 0.2);
}

TEST(Construction, LowerBoundChainOverResolvedPieces) {
  const auto& r = working_run();
  const auto& rep = r.assembly.report;
  ASSERT_EQ(rep.resolved.size(), r.plan.placements.size());
  double target = 0.0;
  for (std::size_t k = 0; k < rep.resolved.size(); ++k) {
    if (!rep.resolved[k]) continue;
    const std::size_t n = r.plan.placements[k].annulus;
    EXPECT_GE(rep.dim_e_prime, rep.annulus_slopes[k] - 0.05) << "annulus " << n;
    target = std::max(target, r.plan.d_seq[n - 1] + r.plan.b_seq[n - 1] - 2.0);
  }
  EXPECT_GE(rep.dim_e_prime, target - 0.2);
}

TEST(Construction, ReplayCatchesTamperedPlans) {
  CompositePlan plan = working_run().plan;
  plan.placements[0].diameter *= 10.0;
  plan.b_seq[0] = 1.2;
  const auto problems = replay_plan_constraints(plan);
  EXPECT_GE(problems.size(), 2u);
}

TEST(Construction, PointRasterShortcut) {
  BoxGrid g(kUnit, 8);
  g.set(3, 250);
  const auto r = run_construction(g, {});
  EXPECT_TRUE(r.single_point);
  EXPECT_EQ(r.assembly.e_prime.count(), 1u);
  EXPECT_TRUE(r.assembly.e_prime.get(3, 250));
}

TEST(Construction, EmptySetIsAnError) {
  EXPECT_THROW(run_construction(BoxGrid(kUnit, 8), {}), DomainError);
}
