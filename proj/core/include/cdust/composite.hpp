#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdust/boxdim.hpp"
#include "cdust/cantor.hpp"
#include "cdust/geometry.hpp"
#include "cdust/isometry.hpp"

namespace cdust {

/// Nested open squares S_n of half-width r_n centred at p, and the annuli
/// R_n = S_n \ S_{n+1}. Indices are 1-based as in R_1, R_2, ...
struct AnnulusChain {
  Vec2 center;
  std::vector<double> half_widths;  // r_1 > r_2 > ... ; one more entry than annuli

  std::size_t size() const { return half_widths.empty() ? 0 : half_widths.size() - 1; }
  double outer(std::size_t n) const { return half_widths.at(n - 1); }
  double inner(std::size_t n) const { return half_widths.at(n); }
  /// q_n = r_n - r_{n+1}
  double width(std::size_t n) const { return outer(n) - inner(n); }
  bool contains(std::size_t n, Vec2 x) const;
  /// Largest admissible copy diameter for even n: min(q_{n+1}, q_{n-1}) / 2.
  double diameter_bound(std::size_t n) const;
};

/// E restricted to the cells that meet R_n with positive area.
BoxGrid restrict_to_annulus(const BoxGrid& set, const AnnulusChain& chain, std::size_t n);

struct AnnulusConfig {
  double initial_half_width = 0.0;  // r_1; 0 means the bounds side
  std::uint64_t min_mass = 16;      // occupied cells of R_n ∩ E at the working level
  double slope_slack = 0.1;         // R_n ∩ E must reach d_n - slack
  std::size_t max_trials = 8;       // halvings tried per annulus
};

/// Greedy chain: for n = 1..d_seq.size(), try r_{n+1} = r_n / 2, r_n / 4, ...
/// until R_n ∩ E holds at least min_mass cells and its local slope (over the
/// ball S_n) is at least d_n - slack. Throws ConstructionError naming the
/// first annulus for which no trial qualifies.
AnnulusChain build_annuli(const BoxGrid& set, Vec2 p, std::span<const double> d_seq,
                          const AnnulusConfig& config = {});

/// d_n = (d - margin) (1 - 2^-(n+1)) for n = 1..count: increasing, positive
/// for d > margin, and below d.
std::vector<double> default_d_sequence(double d, std::size_t count, double margin = 0.05);

/// b_n = 2 - min(d_n, 1/2, 1/(n+1)) / 2 (n 1-based), which gives
/// 2 - d_n < b_n < 2, b_n >= 7/4 and b_n -> 2. Throws DomainError unless
/// every d_n lies in (0, 2).
std::vector<double> choose_b_sequence(std::span<const double> d_seq);

/// Independent predicate replay of the three b-constraints at index n.
bool b_constraints_hold(double d_n, double b_n);

struct PlacementConfig {
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::uint64_t budget = std::uint64_t{1} << 16;  // addresses per copy
  double diameter_fraction = 0.99;                 // of the admissible bound
};

struct Placement {
  std::size_t annulus = 0;  // even index n
  double b = 0.0;
  Alpha alpha{0.25};
  std::size_t depth = 0;
  double diameter = 0.0;
  Isometry iso;  // acts on the origin-centred copy; iso.z is the copy centre
  DimensionEstimate estimate;

  CantorApproximant copy() const { return CantorApproximant(alpha, depth); }
  std::vector<Quad> quads() const;
};

/// Randomised search for a copy of C_alpha(b) of maximal admissible diameter
/// centred in R_n whose intersection with E has the largest local slope.
/// Throws PlacementError when no trial meets R_n ∩ E.
Placement place_cantor_in_annulus(const BoxGrid& set, const AnnulusChain& chain, std::size_t n, double b,
                                  const PlacementConfig& config);

/// Local box-count estimate of `grid` in the ball covering a placed copy.
DimensionEstimate placement_local_dimension(const BoxGrid& grid, const Placement& placement);

/// Pieces whose local fit spans fewer levels are too small to carry a slope;
/// they stay in G and E' but do not enter the dim E' estimate.
inline constexpr std::size_t kMinPieceLevels = 5;

struct ConstructionReport {
  DimensionEstimate dim_e;
  std::vector<double> annulus_slopes;  // one per placement
  std::vector<bool> resolved;          // piece spans at least kMinPieceLevels fit levels
  double dim_e_prime = 0.0;            // max over resolved pieces of their local slope in E'
  std::optional<DimensionEstimate> dim_e_prime_global;
  bool disjoint = false;
  bool contained = false;
  std::size_t e_cells = 0;
  std::size_t e_prime_cells = 0;
};

struct Assembly {
  BoxGrid g{Square{}, 0};
  BoxGrid e_prime{Square{}, 0};
  ConstructionReport report;
};

/// True iff the copies are pairwise disjoint as closed square unions.
bool placements_disjoint(std::span<const Placement> placements);

/// G = union of placed copies plus the cell of p; E' = G ∩ E. Throws
/// AssemblyError if two copies overlap.
Assembly assemble_composite(const BoxGrid& set, const AnnulusChain& chain, std::span<const Placement> placements);

struct CompositePlan {
  Square bounds;
  int level = 0;
  Vec2 center;
  std::vector<double> half_widths;
  std::vector<double> d_seq;  // one per annulus
  std::vector<double> b_seq;  // one per annulus
  std::vector<Placement> placements;
};

struct ConstructConfig {
  std::size_t annuli = 6;  // even counts get one trailing guard annulus
  AnnulusConfig annulus;
  PlacementConfig placement;
  double zero_dimension_threshold = 0.05;
  double d_margin = 0.15;  // d_n climbs towards min(dim E, local slope at p) - d_margin
};

struct CompositeResult {
  bool single_point = false;
  CompositePlan plan;
  Assembly assembly;
};

/// Full pipeline: estimate dim E, pick p, build the annulus chain, choose d_n
/// and b_n, place a copy in every even annulus and assemble G and E'. A set of
/// dimension estimate below the threshold returns one of its cells as E'.
CompositeResult run_construction(const BoxGrid& set, const ConstructConfig& config);

/// Re-checks b- and diameter constraints of a plan; returns human-readable
/// violations (empty when the plan is valid).
std::vector<std::string> replay_plan_constraints(const CompositePlan& plan);

}  // namespace cdust
