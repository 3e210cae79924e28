// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "cdust/cdust.hpp"

using namespace cdust;

namespace {

// Tolerances and budgets.
constexpr double kRoundTripRel = 1e-12;
constexpr double kQuarterSlopeTol = 0.05;
constexpr double kQuarterMinR2 = 0.999;
constexpr double kThreeHalvesSlopeTol = 0.07;
constexpr double kGapTol = 1e-12;
constexpr std::size_t kRingSamples = 10000;
constexpr std::size_t kJohnSamples = 500;
constexpr double kJohnFloor = 0.05;
constexpr double kJohnStability = 2.0;
constexpr std::size_t kMattilaTrials = 200;
constexpr double kMattilaTolerance = 0.15;
constexpr double kMattilaSlack = 0.1;
constexpr double kPipelineBelow = 0.2;
constexpr double kPipelineAbove = 0.1;

constexpr double kLimit1 = 1.0;
constexpr double kLimit2 = 30.0;
constexpr double kLimit3 = 10.0;
constexpr double kLimit4 = 60.0;
constexpr double kLimit5 = 300.0;
constexpr double kLimit6 = 600.0;

constexpr std::uint64_t kJohnSeed = 42;
constexpr std::uint64_t kMattilaSeed = 42;
constexpr std::uint64_t kConstructSeed = 3;

const Square kUnit{{0, 0}, 1};

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [failed]");
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Artifacts kept for the determinism rerun.
struct Artifacts {
  std::string counts_quarter, counts_three_halves, john, mattila, construction;
};
Artifacts first_run;

std::string counts_csv(const DimensionEstimate& e) {
  std::ostringstream s;
  write_counts_csv(s, e);
  return s.str();
}

BoxGrid raster(const CantorApproximant& c, int level) {
  const auto s = c.squares();
  return rasterize(std::span<const Square>(s), kUnit, level);
}

// 1 ---------------------------------------------------------------------------

Outcome dimension_formula() {
  Outcome o;
  o.require(cantor_dimension(Alpha(0.25)) == 1.0, "dim(1/4) == 1 exactly");
  Rng rng(2024);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double d = rng.uniform(0.05, 1.95);
    worst = std::max(worst, std::abs(cantor_dimension(alpha_for_dimension(d)) - d) / d);
  }
  o.require(worst <= kRoundTripRel, "round-trip max rel err " + fmt("%.2e", worst));
  return o;
}

// 2 ---------------------------------------------------------------------------

Artifacts counts_only() {
  Artifacts a;
  {
    const auto s = generate_cantor(Alpha(0.25), 8).squares();
    const auto e = estimate_dimension(box_counts(std::span<const Square>(s), kUnit, ScaleSchedule({2, 4, 6, 8, 10, 12})));
    a.counts_quarter = counts_csv(e);
  }
  {
    const auto s = generate_cantor(alpha_for_dimension(1.5), 7).squares();
    const auto e = estimate_dimension(box_counts(std::span<const Square>(s), kUnit, ScaleSchedule::range(2, 11)));
    a.counts_three_halves = counts_csv(e);
  }
  return a;
}

Outcome box_count_recovery() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto quarter = generate_cantor(Alpha(0.25), 8).squares();
  const auto eq = estimate_dimension(
      box_counts(std::span<const Square>(quarter), kUnit, ScaleSchedule({2, 4, 6, 8, 10, 12})));
  const double t_quarter = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(std::abs(eq.slope - 1.0) <= kQuarterSlopeTol && eq.r2 >= kQuarterMinR2,
            "C(1/4) slope " + fmt("%.4f", eq.slope) + " r2 " + fmt("%.5f", eq.r2));
  o.require(t_quarter < kLimit2, "C(1/4) time " + fmt("%.1fs", t_quarter));

  const auto t1 = std::chrono::steady_clock::now();
  const auto half = generate_cantor(alpha_for_dimension(1.5), 7).squares();
  const auto eh = estimate_dimension(box_counts(std::span<const Square>(half), kUnit, ScaleSchedule::range(2, 11)));
  const double t_half = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
  o.require(std::abs(eh.slope - 1.5) <= kThreeHalvesSlopeTol, "d=1.5 slope " + fmt("%.4f", eh.slope));
  o.require(t_half < kLimit2, "d=1.5 time " + fmt("%.1fs", t_half));

  first_run.counts_quarter = counts_csv(eq);
  first_run.counts_three_halves = counts_csv(eh);
  return o;
}

// 3 ---------------------------------------------------------------------------

double square_gap(const Square& a, const Square& b) {
  const double dx = std::max({0.0, b.corner.x - (a.corner.x + a.side), a.corner.x - (b.corner.x + b.side)});
  const double dy = std::max({0.0, b.corner.y - (a.corner.y + a.side), a.corner.y - (b.corner.y + b.side)});
  return std::hypot(dx, dy);
}

Outcome structure_laws() {
  Outcome o;
  bool counts_ok = true;
  for (std::size_t n = 0; n <= 8; ++n) {
    const auto c = generate_cantor(Alpha(0.3), n);
    std::uint64_t expect = 1;
    for (std::size_t k = 0; k < n; ++k) expect *= 4;
    counts_ok = counts_ok && c.size() == expect && c.squares().size() == expect;
  }
  o.require(counts_ok, "4^n squares for n <= 8");

  bool gaps_ok = true;
  double worst_excess = std::numeric_limits<double>::infinity();
  for (double a : {0.1, 0.25, 0.3, 0.45}) {
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto sq = generate_cantor(Alpha(a), n).squares();
      const double bound = std::pow(a, static_cast<double>(n) - 1.0) * (1.0 - 2.0 * a);
      double min_sibling = std::numeric_limits<double>::infinity();
      double min_any = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < sq.size(); ++i) {
        for (std::size_t j = i + 1; j < sq.size(); ++j) {
          const double d = square_gap(sq[i], sq[j]);
          min_any = std::min(min_any, d);
          if (i / 4 == j / 4) min_sibling = std::min(min_sibling, d);
        }
      }
      gaps_ok = gaps_ok && min_any >= bound - kGapTol && std::abs(min_sibling - bound) <= kGapTol;
      worst_excess = std::min(worst_excess, min_any - bound);
    }
  }
  o.require(gaps_ok, "gap bound exact at n <= 4 (min excess " + fmt("%.1e", worst_excess) + ")");
  return o;
}

// 4 ---------------------------------------------------------------------------

Outcome john_verification() {
  Outcome o;
  const Alpha alpha(0.25);
  std::size_t violations = 0;
  std::string rings;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto check = check_ring_distance_bound(alpha, n, kRingSamples, kJohnSeed + n);
    violations += check.violations;
    rings += (rings.empty() ? "" : ",") + std::to_string(check.ring_samples);
  }
  o.require(violations == 0, "ring bound violations " + std::to_string(violations) + " (ring samples n=1..4: " +
                                 rings + ")");
  const auto r3 = verify_john(alpha, 3, kJohnSamples, kJohnSeed);
  const auto r4 = verify_john(alpha, 4, kJohnSamples, kJohnSeed);
  o.require(r3.epsilon > 0.0 && r4.epsilon > 0.0, "eps n=3 " + fmt("%.4f", r3.epsilon) + ", n=4 " +
                                                      fmt("%.4f", r4.epsilon));
  const double ratio = std::max(r3.epsilon, r4.epsilon) / std::min(r3.epsilon, r4.epsilon);
  o.require(ratio <= kJohnStability, "stability ratio " + fmt("%.3f", ratio));
  o.require(r3.epsilon >= kJohnFloor, "floor " + fmt("%.2f", kJohnFloor));
  std::ostringstream csv;
  write_john_csv(csv, r3);
  first_run.john = csv.str();
  return o;
}

// 5 ---------------------------------------------------------------------------

constexpr int kMattilaLevel = 10;

MattilaSurvey run_survey() {
  const double cell = std::ldexp(1.0, -kMattilaLevel);
  const Alpha a_alpha = alpha_for_dimension(1.2);
  const Alpha b_alpha = alpha_for_dimension(1.7);
  const BoxGrid a = raster(CantorApproximant(a_alpha, depth_for_resolution(a_alpha, 1.0, cell)), kMattilaLevel);
  const CantorApproximant b(b_alpha, depth_for_resolution(b_alpha, 1.0, cell, std::uint64_t{1} << 16));
  MattilaConfig config;
  config.trials = kMattilaTrials;
  config.tolerance = kMattilaTolerance;
  config.seed = kMattilaSeed;
  return mattila_survey(a, b, config);
}

std::string mattila_csv(const MattilaSurvey& s) {
  std::ostringstream csv;
  write_mattila_csv(csv, s);
  return csv.str();
}

Outcome mattila() {
  Outcome o;
  const MattilaSurvey survey = run_survey();
  o.require(survey.hit_fraction > 0.0, "hit fraction " + fmt("%.3f", survey.hit_fraction) + " (s " +
                                           fmt("%.4f", survey.s) + ", t " + fmt("%.4f", survey.t) + ")");
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& r : survey.records) worst = std::max(worst, r.slope);
  o.require(worst <= std::min(survey.s, survey.t) + kMattilaSlack, "max slope " + fmt("%.4f", worst));

  auto rejects = [](double s, double t) {
    try {
      check_mattila_hypotheses(s, t);
    } catch (const ParameterError&) {
      return true;
    }
    return false;
  };
  o.require(rejects(0.25, 1.7) && rejects(1.9, 1.4) && rejects(1.2, 1.5), "gate rejects s+t<=2 and t<=3/2");
  first_run.mattila = mattila_csv(survey);
  return o;
}

// 6 ---------------------------------------------------------------------------

CompositeResult run_pipeline() {
  const BoxGrid e = raster(generate_cantor(Alpha(0.4), 8), 10);
  ConstructConfig config;
  config.annuli = 6;
  config.placement.seed = kConstructSeed;
  return run_construction(e, config);
}

std::string construction_csv(const CompositeResult& r) {
  std::ostringstream csv;
  write_construction_csv(csv, r.plan, r.assembly.report);
  return csv.str();
}

Outcome pipeline() {
  Outcome o;
  const CompositeResult r = run_pipeline();
  const auto problems = replay_plan_constraints(r.plan);
  o.require(problems.empty(), "replay violations " + std::to_string(problems.size()) + " over " +
                                  std::to_string(r.plan.b_seq.size()) + " annuli");
  o.require(placements_disjoint(r.plan.placements),
            "copies disjoint (" + std::to_string(r.plan.placements.size()) + " placed)");
  const auto& rep = r.assembly.report;
  o.require(rep.contained, "E' within E");
  const double lo = rep.dim_e.slope - kPipelineBelow;
  const double hi = rep.dim_e.slope + kPipelineAbove;
  o.require(rep.dim_e_prime >= lo && rep.dim_e_prime <= hi,
            "dim E " + fmt("%.4f", rep.dim_e.slope) + ", dim E' " + fmt("%.4f", rep.dim_e_prime));
  first_run.construction = construction_csv(r);
  return o;
}

// 7 ---------------------------------------------------------------------------

Outcome determinism() {
  Outcome o;
  // The rerun uses several workers; per-trial streams make that irrelevant.
  set_max_jobs(4);
  const Artifacts counts = counts_only();
  o.require(counts.counts_quarter == first_run.counts_quarter &&
                counts.counts_three_halves == first_run.counts_three_halves,
            "counts csv");
  std::ostringstream john;
  write_john_csv(john, verify_john(Alpha(0.25), 3, kJohnSamples, kJohnSeed));
  o.require(john.str() == first_run.john, "john csv");
  o.require(mattila_csv(run_survey()) == first_run.mattila, "mattila csv");
  o.require(construction_csv(run_pipeline()) == first_run.construction, "construction csv");
  set_max_jobs(1);
  return o;
}

}  // namespace

int main() {
  set_max_jobs(1);
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
    double limit;
  };
  const std::vector<Criterion> criteria{
      {1, "dimension formula", dimension_formula, kLimit1},
      {2, "box-count recovery", box_count_recovery, 2 * kLimit2},
      {3, "structure laws", structure_laws, kLimit3},
      {4, "john verification", john_verification, kLimit4},
      {5, "mattila survey", mattila, kLimit5},
      {6, "main-theorem pipeline", pipeline, kLimit6},
      {7, "determinism", determinism, std::numeric_limits<double>::infinity()},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= c.limit) o.require(false, "runtime limit " + fmt("%.0fs", c.limit));
    all = all && o.pass;
    std::printf("criterion %d %-22s %s  %.2fs  %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
