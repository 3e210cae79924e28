#include "cdust/composite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cdust/errors.hpp"
#include "cdust/intersect.hpp"
#include "cdust/rng.hpp"

namespace cdust {

namespace {

double chebyshev(Vec2 a, Vec2 b) { return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)); }

}  // namespace

bool AnnulusChain::contains(std::size_t n, Vec2 x) const {
  const double d = chebyshev(x, center);
  return d < outer(n) && d >= inner(n);
}

double AnnulusChain::diameter_bound(std::size_t n) const {
  if (n < 2 || n + 1 > size()) {
    throw ParameterError("annulus " + std::to_string(n) + " has no odd neighbour on both sides");
  }
  return std::min(width(n + 1), width(n - 1)) / 2.0;
}

BoxGrid restrict_to_annulus(const BoxGrid& set, const AnnulusChain& chain, std::size_t n) {
  BoxGrid out(set.bounds(), set.level());
  const double r_out = chain.outer(n);
  const double r_in = chain.inner(n);
  const Vec2 p = chain.center;
  const double h = set.cell_size();
  for (std::size_t j = 0; j < set.cells_per_side(); ++j) {
    for (std::size_t i = 0; i < set.cells_per_side(); ++i) {
      if (!set.get(i, j)) continue;
      const Vec2 lo = set.cell_square(i, j).corner;
      const Vec2 hi{lo.x + h, lo.y + h};
      const bool meets_outer = lo.x < p.x + r_out && hi.x > p.x - r_out && lo.y < p.y + r_out && hi.y > p.y - r_out;
      const bool inside_inner = lo.x >= p.x - r_in && hi.x <= p.x + r_in && lo.y >= p.y - r_in && hi.y <= p.y + r_in;
      if (meets_outer && !inside_inner) out.set(i, j);
    }
  }
  return out;
}

AnnulusChain build_annuli(const BoxGrid& set, Vec2 p, std::span<const double> d_seq, const AnnulusConfig& config) {
  AnnulusChain chain;
  chain.center = p;
  chain.half_widths.push_back(config.initial_half_width > 0.0 ? config.initial_half_width : set.bounds().side);
  for (std::size_t n = 1; n <= d_seq.size(); ++n) {
    const double r_n = chain.half_widths.back();
    if (local_levels(set, r_n).size() < 3) {
      throw ConstructionError("annulus " + std::to_string(n) + " is below the working resolution", n);
    }
    bool accepted = false;
    double r = r_n;
    for (std::size_t t = 0; t < config.max_trials && !accepted; ++t) {
      r /= 2.0;
      AnnulusChain trial{p, {r_n, r}};
      const BoxGrid ring = restrict_to_annulus(set, trial, 1);
      if (ring.count() < config.min_mass) continue;
      const DimensionEstimate est = local_dimension(OccupancyIndex(ring), p, r_n);
      if (!est.empty && est.slope >= d_seq[n - 1] - config.slope_slack) accepted = true;
    }
    if (!accepted) {
      throw ConstructionError("no trial radius gives annulus " + std::to_string(n) +
                                  " enough mass and local slope",
                              n);
    }
    chain.half_widths.push_back(r);
  }
  return chain;
}

std::vector<double> default_d_sequence(double d, std::size_t count, double margin) {
  std::vector<double> out;
  for (std::size_t n = 1; n <= count; ++n) out.push_back((d - margin) * (1.0 - std::ldexp(1.0, -static_cast<int>(n) - 1)));
  return out;
}

std::vector<double> choose_b_sequence(std::span<const double> d_seq) {
  std::vector<double> out;
  out.reserve(d_seq.size());
  for (std::size_t k = 0; k < d_seq.size(); ++k) {
    const double d = d_seq[k];
    if (!(d > 0.0 && d < 2.0)) throw DomainError("d_n must lie in (0, 2), got " + std::to_string(d));
    const double n = static_cast<double>(k + 1);
    const double c = std::min({d, 0.5, 1.0 / (n + 1.0)}) / 2.0;
    out.push_back(2.0 - c);
  }
  return out;
}

bool b_constraints_hold(double d_n, double b_n) { return 2.0 - d_n < b_n && b_n < 2.0 && b_n > 1.5; }

std::vector<Quad> Placement::quads() const { return place_centered(copy(), diameter, iso); }

namespace {

// Copies smaller than a few cells are measured in the smallest ball the grid
// still resolves over three levels.
double piece_radius(const BoxGrid& grid, double diameter) {
  return std::max(diameter / 2.0, std::ldexp(grid.bounds().side, 1 - grid.level()));
}

}  // namespace

DimensionEstimate placement_local_dimension(const BoxGrid& grid, const Placement& placement) {
  return local_dimension(OccupancyIndex(grid), placement.iso.z, piece_radius(grid, placement.diameter));
}

Placement place_cantor_in_annulus(const BoxGrid& set, const AnnulusChain& chain, std::size_t n, double b,
                                  const PlacementConfig& config) {
  if (n % 2 != 0) throw ParameterError("copies go into even annuli only");
  Placement best;
  best.annulus = n;
  best.b = b;
  best.alpha = alpha_for_dimension(b);
  best.diameter = config.diameter_fraction * chain.diameter_bound(n);
  if (!(best.diameter > 0.0)) throw PlacementError("annulus neighbours leave no room for a copy", n);
  best.depth = depth_for_resolution(best.alpha, best.diameter, set.cell_size(), config.budget);

  const BoxGrid ring = restrict_to_annulus(set, chain, n);
  if (ring.empty()) throw PlacementError("annulus " + std::to_string(n) + " holds no mass of E", n);
  const std::vector<Quad> centred = place_centered(best.copy(), best.diameter, Isometry::identity());
  const double r = chain.outer(n);
  const Square window{{chain.center.x - r, chain.center.y - r}, 2.0 * r};

  bool found = false;
  for (std::size_t k = 0; k < config.trials; ++k) {
    Rng rng = Rng::for_stream(config.seed, k);
    Isometry iso = sample_isometry(rng, window);
    while (!chain.contains(n, iso.z)) {
      iso.z = {window.corner.x + window.side * rng.uniform(), window.corner.y + window.side * rng.uniform()};
    }
    const BoxGrid placed = apply_isometry(std::span<const Quad>(centred), iso, set.bounds(), set.level());
    if (grid_intersection(placed, ring).empty()) continue;
    const BoxGrid piece = grid_intersection(placed, set);
    DimensionEstimate est = local_dimension(OccupancyIndex(piece), iso.z, piece_radius(set, best.diameter));
    if (!found || est.slope > best.estimate.slope) {
      best.iso = iso;
      best.estimate = std::move(est);
      found = true;
    }
  }
  if (!found) {
    throw PlacementError("no trial copy meets R_" + std::to_string(n) + " ∩ E", n);
  }
  return best;
}

bool placements_disjoint(std::span<const Placement> placements) {
  for (std::size_t a = 0; a < placements.size(); ++a) {
    for (std::size_t b = a + 1; b < placements.size(); ++b) {
      const Placement& pa = placements[a];
      const Placement& pb = placements[b];
      if (distance(pa.iso.z, pb.iso.z) > (pa.diameter + pb.diameter) / 2.0) continue;
      const auto qa = pa.quads();
      const auto qb = pb.quads();
      auto box = [](const Quad& q) {
        std::array<double, 4> r{q.v[0].x, q.v[0].x, q.v[0].y, q.v[0].y};
        for (const Vec2& v : q.v) {
          r[0] = std::min(r[0], v.x);
          r[1] = std::max(r[1], v.x);
          r[2] = std::min(r[2], v.y);
          r[3] = std::max(r[3], v.y);
        }
        return r;
      };
      std::vector<std::array<double, 4>> boxes_b;
      boxes_b.reserve(qb.size());
      for (const Quad& q : qb) boxes_b.push_back(box(q));
      for (const Quad& x : qa) {
        const auto bx = box(x);
        for (std::size_t k = 0; k < qb.size(); ++k) {
          const auto& by = boxes_b[k];
          if (bx[1] < by[0] || by[1] < bx[0] || bx[3] < by[2] || by[3] < bx[2]) continue;
          if (quads_overlap(x, qb[k])) return false;
        }
      }
    }
  }
  return true;
}

Assembly assemble_composite(const BoxGrid& set, const AnnulusChain& chain, std::span<const Placement> placements) {
  if (!placements_disjoint(placements)) {
    throw AssemblyError("placed copies overlap; the diameter constraint was not respected", 0);
  }
  BoxGrid g(set.bounds(), set.level());
  for (const Placement& pl : placements) {
    const auto quads = pl.quads();
    rasterize_into(g, std::span<const Quad>(quads));
  }
  if (auto cell = g.cell_of(chain.center)) g.set((*cell)[0], (*cell)[1]);
  BoxGrid e_prime = grid_intersection(g, set);

  ConstructionReport report;
  const ScaleSchedule global = ScaleSchedule::range(1, std::max(set.level(), 3));
  if (set.level() >= 3) {
    report.dim_e = estimate_dimension(box_counts(set, global), set.bounds().side);
    report.dim_e_prime_global = estimate_dimension(box_counts(e_prime, global), set.bounds().side);
  }
  report.dim_e_prime = 0.0;
  std::vector<double> local_slopes;
  for (const Placement& pl : placements) {
    report.annulus_slopes.push_back(pl.estimate.slope);
    report.resolved.push_back(local_levels(set, piece_radius(set, pl.diameter)).size() >= kMinPieceLevels);
    const DimensionEstimate local = placement_local_dimension(e_prime, pl);
    local_slopes.push_back(local.empty ? 0.0 : local.slope);
  }
  const bool any_resolved = std::find(report.resolved.begin(), report.resolved.end(), true) != report.resolved.end();
  for (std::size_t k = 0; k < local_slopes.size(); ++k) {
    if (report.resolved[k] || !any_resolved) report.dim_e_prime = std::max(report.dim_e_prime, local_slopes[k]);
  }
  report.disjoint = true;
  report.contained = is_subset(e_prime, set);
  report.e_cells = set.count();
  report.e_prime_cells = e_prime.count();
  return Assembly{std::move(g), std::move(e_prime), std::move(report)};
}

CompositeResult run_construction(const BoxGrid& set, const ConstructConfig& config) {
  if (set.empty()) throw DomainError("cannot construct a subset of an empty set");
  if (set.level() < 3) throw ParameterError("construction needs a working level of at least 3");
  CompositeResult result;
  CompositePlan& plan = result.plan;
  plan.bounds = set.bounds();
  plan.level = set.level();

  const DimensionEstimate dim_e =
      estimate_dimension(box_counts(set, ScaleSchedule::range(1, set.level())), set.bounds().side);
  if (dim_e.slope < config.zero_dimension_threshold) {
    // A single point is a valid answer in dimension zero.
    result.single_point = true;
    BoxGrid one(set.bounds(), set.level());
    for (std::size_t j = 0; j < set.cells_per_side() && one.empty(); ++j) {
      for (std::size_t i = 0; i < set.cells_per_side(); ++i) {
        if (set.get(i, j)) {
          one.set(i, j);
          plan.center = set.cell_center(i, j);
          break;
        }
      }
    }
    result.assembly.g = one;
    result.assembly.e_prime = one;
    result.assembly.report.dim_e = dim_e;
    result.assembly.report.disjoint = true;
    result.assembly.report.contained = true;
    result.assembly.report.e_cells = set.count();
    result.assembly.report.e_prime_cells = 1;
    return result;
  }

  const FullDimensionPoint p = find_full_dimension_point(set);
  plan.center = p.point;
  const std::size_t count = config.annuli + (config.annuli % 2 == 0 ? 1 : 0);
  // The annulus test measures local slopes around p, so the target cannot
  // exceed what the finder saw there.
  const double d = std::min(dim_e.slope, p.min_local_slope);
  plan.d_seq = default_d_sequence(d, count, std::min(config.d_margin, d / 2.0));
  plan.b_seq = choose_b_sequence(plan.d_seq);
  const AnnulusChain chain = build_annuli(set, p.point, plan.d_seq, config.annulus);
  plan.half_widths = chain.half_widths;

  for (std::size_t n = 2; n + 1 <= chain.size(); n += 2) {
    PlacementConfig pc = config.placement;
    pc.seed = stream_seed(config.placement.seed, n);
    plan.placements.push_back(place_cantor_in_annulus(set, chain, n, plan.b_seq[n - 1], pc));
  }
  result.assembly = assemble_composite(set, chain, plan.placements);
  return result;
}

std::vector<std::string> replay_plan_constraints(const CompositePlan& plan) {
  std::vector<std::string> problems;
  const auto& r = plan.half_widths;
  for (std::size_t k = 1; k < r.size(); ++k) {
    if (!(r[k] < r[k - 1])) problems.push_back("half-widths not strictly decreasing at " + std::to_string(k + 1));
  }
  if (plan.d_seq.size() != plan.b_seq.size()) problems.push_back("d and b sequences differ in length");
  for (std::size_t k = 0; k < plan.d_seq.size() && k < plan.b_seq.size(); ++k) {
    const double d = plan.d_seq[k];
    const double b = plan.b_seq[k];
    const std::string at = " at n = " + std::to_string(k + 1);
    if (k > 0 && !(d > plan.d_seq[k - 1])) problems.push_back("d_n not increasing" + at);
    if (!(2.0 - d < b)) problems.push_back("b_n <= 2 - d_n" + at);
    if (!(b < 2.0)) problems.push_back("b_n >= 2" + at);
    if (!(b > 1.5)) problems.push_back("b_n <= 3/2" + at);
  }
  for (const Placement& pl : plan.placements) {
    const std::size_t n = pl.annulus;
    const std::string at = " for annulus " + std::to_string(n);
    if (n % 2 != 0 || n < 2 || n + 2 > r.size()) {
      problems.push_back("placement index invalid" + at);
      continue;
    }
    const double q_prev = r[n - 2] - r[n - 1];
    const double q_next = r[n] - r[n + 1];
    const double bound = std::min(q_prev / 2.0, q_next / 2.0);
    if (!(pl.diameter < bound)) problems.push_back("diameter not below min(q_{n-1}, q_{n+1}) / 2" + at);
    if (n - 1 < plan.b_seq.size() && pl.b != plan.b_seq[n - 1]) problems.push_back("b differs from b_seq" + at);
    const double dim = -std::log(4.0) / std::log(pl.alpha.value());
    if (std::abs(dim - pl.b) > 1e-9) problems.push_back("copy dimension differs from b" + at);
    const double off = std::max(std::abs(pl.iso.z.x - plan.center.x), std::abs(pl.iso.z.y - plan.center.y));
    if (!(off < r[n - 1] && off >= r[n])) problems.push_back("copy centre outside its annulus" + at);
  }
  return problems;
}

}  // namespace cdust
