#include "cdust/john.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "cdust/errors.hpp"
#include "cdust/parallel.hpp"
#include "cdust/rng.hpp"

namespace cdust {

double ring_margin(Alpha alpha, std::size_t generation) {
  const double a = alpha.value();
  if (generation == 0) return (1.0 - 2.0 * a) / 2.0;
  return std::pow(a, static_cast<double>(generation) - 1.0) * (1.0 - 2.0 * a) / 2.0;
}

Square ring_square(const SquareAddress& q) {
  const Square s = square_of_address(q);
  const double m = ring_margin(q.alpha(), q.generation());
  return Square{{s.corner.x - m, s.corner.y - m}, s.side + 2.0 * m};
}

Square base_square(Alpha alpha) { return ring_square(SquareAddress({}, alpha)); }

namespace {

bool strictly_inside(const Square& s, Vec2 p) {
  return p.x > s.corner.x && p.x < s.corner.x + s.side && p.y > s.corner.y && p.y < s.corner.y + s.side;
}

double square_distance(const Square& s, Vec2 p) {
  const double dx = std::max({s.corner.x - p.x, 0.0, p.x - (s.corner.x + s.side)});
  const double dy = std::max({s.corner.y - p.y, 0.0, p.y - (s.corner.y + s.side)});
  return std::hypot(dx, dy);
}

// Foot of the perpendicular from p (inside s) to the nearest side of s.
Vec2 nearest_side_foot(const Square& s, Vec2 p) {
  const double x0 = s.corner.x, x1 = s.corner.x + s.side;
  const double y0 = s.corner.y, y1 = s.corner.y + s.side;
  const std::array<double, 4> d{p.x - x0, x1 - p.x, p.y - y0, y1 - p.y};
  const auto k = static_cast<std::size_t>(std::min_element(d.begin(), d.end()) - d.begin());
  switch (k) {
    case 0: return {x0, p.y};
    case 1: return {x1, p.y};
    case 2: return {p.x, y0};
    default: return {p.x, y1};
  }
}

double distance_to_base_boundary(const Square& base, Vec2 p) {
  if (!base.contains(p)) return square_distance(base, p);
  return std::min({p.x - base.corner.x, base.corner.x + base.side - p.x, p.y - base.corner.y,
                   base.corner.y + base.side - p.y});
}

}  // namespace

RingLocation ring_of_point(Vec2 z, Alpha alpha, std::size_t depth) {
  RingLocation loc;
  if (!base_square(alpha).contains(z)) {
    loc.exterior = true;
    return loc;
  }
  SquareAddress q({}, alpha);
  while (true) {
    if (q.generation() == depth) {
      if (square_of_address(q).contains(z)) {
        throw UndeterminedError("point lies in a generation-" + std::to_string(depth) +
                                " square; its ring is undetermined at this depth");
      }
      loc.leaf = true;
      break;
    }
    bool descended = false;
    for (int c = 0; c < 4; ++c) {
      SquareAddress child = q.child(static_cast<Quadrant>(c));
      if (strictly_inside(ring_square(child), z)) {
        q = std::move(child);
        descended = true;
        break;
      }
    }
    if (!descended) break;
  }
  loc.generation = q.generation();
  loc.word = q.word();
  return loc;
}

double JohnPath::length() const {
  double total = 0.0;
  for (std::size_t k = 1; k < vertices.size(); ++k) total += distance(vertices[k - 1], vertices[k]);
  return total;
}

JohnPath build_john_path(Vec2 z1, Alpha alpha, std::size_t depth) {
  JohnPath path;
  path.source = z1;
  path.vertices.push_back(z1);
  const RingLocation loc = ring_of_point(z1, alpha, depth);
  if (loc.exterior) {
    const Square base = base_square(alpha);
    const Vec2 target{std::clamp(z1.x, base.corner.x, base.corner.x + base.side),
                      std::clamp(z1.y, base.corner.y, base.corner.y + base.side)};
    path.vertices.push_back(target);
    path.generations.push_back(0);
    return path;
  }
  std::vector<Quadrant> word = loc.word;
  Vec2 x = z1;
  while (true) {
    const Vec2 y = nearest_side_foot(ring_square(SquareAddress(word, alpha)), x);
    if (!(y == x)) {
      path.vertices.push_back(y);
      path.generations.push_back(word.size());
    }
    x = y;
    if (word.empty()) break;
    word.pop_back();
  }
  if (path.vertices.size() == 1) {
    // Source already on the base curve.
    path.generations.clear();
  }
  return path;
}

double distance_to_approximant(Vec2 p, Alpha alpha, std::size_t depth) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<SquareAddress> stack;
  stack.emplace_back(std::vector<Quadrant>{}, alpha);
  while (!stack.empty()) {
    SquareAddress q = std::move(stack.back());
    stack.pop_back();
    const double lb = square_distance(square_of_address(q), p);
    if (lb >= best) continue;
    if (q.generation() == depth) {
      best = lb;
      if (best == 0.0) break;
      continue;
    }
    std::array<std::pair<double, int>, 4> kids{};
    for (int c = 0; c < 4; ++c) {
      kids[c] = {square_distance(square_of_address(q.child(static_cast<Quadrant>(c))), p), c};
    }
    std::sort(kids.begin(), kids.end(), [](auto a, auto b) { return a.first > b.first; });
    for (const auto& [d, c] : kids) {
      if (d < best) stack.push_back(q.child(static_cast<Quadrant>(c)));
    }
  }
  return best;
}

namespace {

Vec2 sample_outside_approximant(Rng& rng, Alpha alpha, std::size_t depth) {
  while (true) {
    const Vec2 z{rng.uniform(), rng.uniform()};
    if (distance_to_approximant(z, alpha, depth) > 0.0) return z;
  }
}

}  // namespace

JohnReport verify_john(Alpha alpha, std::size_t depth, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw ParameterError("verify_john needs at least one sample");
  const double step = std::pow(alpha.value(), static_cast<double>(depth)) / 8.0;
  const Square base = base_square(alpha);
  JohnReport report;
  report.samples.resize(samples);
  parallel_for(samples, [&](std::size_t s) {
    Rng rng = Rng::for_stream(seed, s);
    const Vec2 z1 = sample_outside_approximant(rng, alpha, depth);
    const JohnPath path = build_john_path(z1, alpha, depth);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < path.vertices.size(); ++k) {
      const Vec2 a = path.vertices[k - 1];
      const Vec2 b = path.vertices[k];
      const auto pieces = static_cast<std::size_t>(std::ceil(distance(a, b) / step));
      for (std::size_t t = 1; t <= pieces; ++t) {
        const Vec2 q = a + (static_cast<double>(t) / static_cast<double>(pieces)) * (b - a);
        const double away = distance(q, z1);
        if (away == 0.0) continue;
        worst = std::min(worst, distance_to_approximant(q, alpha, depth) / away);
      }
    }
    const double to_base = distance_to_base_boundary(base, z1);
    JohnSample& out = report.samples[s];
    out.source = z1;
    out.worst_ratio = worst;
    out.generation = ring_of_point(z1, alpha, depth).generation;
    out.length_ratio = to_base > 0.0 ? path.length() / to_base : 0.0;
  });
  report.epsilon = std::numeric_limits<double>::infinity();
  for (const JohnSample& s : report.samples) {
    report.epsilon = std::min(report.epsilon, s.worst_ratio);
    report.max_length_ratio = std::max(report.max_length_ratio, s.length_ratio);
  }
  return report;
}

RingBoundCheck check_ring_distance_bound(Alpha alpha, std::size_t depth, std::size_t samples, std::uint64_t seed) {
  const double a = alpha.value();
  std::vector<double> normalized(samples, std::numeric_limits<double>::infinity());
  std::vector<std::uint8_t> in_ring(samples, 0);
  parallel_for(samples, [&](std::size_t s) {
    Rng rng = Rng::for_stream(seed, s);
    const Vec2 z = sample_outside_approximant(rng, alpha, depth);
    const RingLocation loc = ring_of_point(z, alpha, depth);
    if (loc.exterior || loc.leaf) return;
    in_ring[s] = 1;
    const double bound = std::pow(a, static_cast<double>(loc.generation)) * (1.0 - 2.0 * a) / 2.0;
    normalized[s] = distance_to_approximant(z, alpha, depth) / bound;
  });
  RingBoundCheck out;
  out.samples = samples;
  out.min_normalized_distance = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    if (!in_ring[s]) continue;
    ++out.ring_samples;
    if (!(normalized[s] > 1.0)) ++out.violations;
    out.min_normalized_distance = std::min(out.min_normalized_distance, normalized[s]);
  }
  return out;
}

}  // namespace cdust
