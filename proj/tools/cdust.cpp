// Command-line front end: gen, dim, john, mattila, construct.
//
// Every run prints its resolved configuration as the first line of stdout.
// Exit codes: 0 success, 2 usage or parameter error, 3 construction or
// placement failure, 4 I/O or file-format error.

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cdust/cdust.hpp"

namespace {

using namespace cdust;

constexpr int kExitUsage = 2;
constexpr int kExitConstruction = 3;
constexpr int kExitIo = 4;

// Ordered key=value pairs for the config echo.
class Echo {
 public:
  explicit Echo(std::string command) : line_("cdust " + std::move(command)) {}
  Echo& add(const std::string& key, const std::string& value) {
    line_ += ' ' + key + '=' + value;
    return *this;
  }
  Echo& add(const std::string& key, double value) { return add(key, format_real(value)); }
  Echo& add(const std::string& key, std::uint64_t value) { return add(key, std::to_string(value)); }
  Echo& add(const std::string& key, int value) { return add(key, std::to_string(value)); }
  void print() const { std::cout << line_ << '\n'; }

 private:
  std::string line_;
};

std::string or_dash(const std::string& s) { return s.empty() ? "-" : s; }

struct AlphaArgs {
  std::optional<double> alpha;
  std::optional<double> dim;

  void attach(CLI::App* app, const std::string& prefix = "") {
    auto* a = app->add_option("--" + prefix + "alpha", alpha, "contraction ratio in (0, 1/2)");
    auto* d = app->add_option("--" + prefix + "dim", dim, "target dimension in (0, 2); alpha = 4^(-1/dim)");
    a->excludes(d);
  }
  Alpha resolve(const std::string& what) const {
    if (alpha) return Alpha(*alpha);
    if (dim) return alpha_for_dimension(*dim);
    throw ParameterError(what + ": one of --alpha or --dim is required");
  }
};

struct Common {
  std::optional<std::uint64_t> seed;
  int level = -1;
  std::string out;
  unsigned jobs = 0;

  void attach(CLI::App* app, bool randomized) {
    auto* s = app->add_option("--seed", seed, "master RNG seed");
    if (randomized) s->required();
    app->add_option("--level", level, "grid level m (2^m cells per side)")->check(CLI::Range(0, BoxGrid::kMaxLevel));
    app->add_option("--out", out, "output path");
    app->add_option("--jobs", jobs, "worker threads (0 = all cores); results do not depend on it");
  }
};

std::string seed_text(const Common& c) { return c.seed ? std::to_string(*c.seed) : "-"; }

Square unit() { return Square{{0.0, 0.0}, 1.0}; }

BoxGrid raster_of(const CantorApproximant& c, int level) {
  const auto squares = c.squares();
  return rasterize(std::span<const Square>(squares), unit(), level);
}

// Reads a BGR grid, or rasterizes a CAD file at `level`.
BoxGrid load_grid(const std::string& path, int level) {
  std::istringstream in(load_text(path));
  if (in.str().rfind("cad ", 0) == 0) {
    const CadFile cad = read_cad(in);
    std::vector<Square> squares;
    squares.reserve(cad.addresses.size());
    for (const auto& a : cad.addresses) squares.push_back(square_of_address(a));
    return rasterize(std::span<const Square>(squares), unit(), level < 0 ? 10 : level);
  }
  BoxGrid grid = read_bgr(in);
  if (level >= 0 && level < grid.level()) grid = grid.downsample(level);
  return grid;
}

// gen ------------------------------------------------------------------------

struct GenArgs {
  AlphaArgs alpha;
  std::size_t depth = 0;
  std::string bgr;
  Common common;
};

int run_gen(const GenArgs& g) {
  const Alpha alpha = g.alpha.resolve("gen");
  const int level = g.common.level < 0 ? 10 : g.common.level;
  Echo("gen")
      .add("alpha", alpha.value())
      .add("dim", cantor_dimension(alpha))
      .add("depth", static_cast<std::uint64_t>(g.depth))
      .add("out", or_dash(g.common.out))
      .add("bgr", or_dash(g.bgr))
      .add("level", level)
      .print();
  const CantorApproximant c = generate_cantor(alpha, g.depth);
  if (!g.common.out.empty()) {
    std::ostringstream cad;
    write_cad(cad, c);
    save_text(g.common.out, cad.str());
  }
  std::cout << "squares=" << c.size() << '\n';
  if (!g.bgr.empty()) {
    const BoxGrid grid = raster_of(c, level);
    std::ostringstream bgr;
    write_bgr(bgr, grid);
    save_text(g.bgr, bgr.str());
    std::cout << "occupied=" << grid.count() << '\n';
  }
  return 0;
}

// dim ------------------------------------------------------------------------

struct DimArgs {
  std::string in;
  AlphaArgs alpha;
  std::optional<std::size_t> depth;
  std::vector<int> levels;
  Common common;
};

int run_dim(const DimArgs& d) {
  std::optional<ScaleSchedule> schedule;
  if (!d.levels.empty()) schedule = ScaleSchedule(d.levels);

  BoxCounts counts;
  double side = 1.0;
  if (!d.in.empty()) {
    const BoxGrid grid = load_grid(d.in, d.common.level);
    if (!schedule) schedule = ScaleSchedule::range(1, std::max(grid.level(), 3));
    side = grid.bounds().side;
    Echo echo("dim");
    echo.add("in", d.in).add("level", grid.level());
    std::string lv;
    for (int m : schedule->levels()) lv += (lv.empty() ? "" : ",") + std::to_string(m);
    echo.add("levels", lv).add("out", or_dash(d.common.out)).print();
    counts = box_counts(grid, *schedule);
  } else {
    const Alpha alpha = d.alpha.resolve("dim");
    if (!d.depth) throw ParameterError("dim: --depth is required with --alpha or --dim");
    const int level = d.common.level < 0 ? 12 : d.common.level;
    if (!schedule) schedule = ScaleSchedule::range(1, std::max(level, 3));
    Echo echo("dim");
    echo.add("alpha", alpha.value()).add("depth", static_cast<std::uint64_t>(*d.depth)).add("level", level);
    std::string lv;
    for (int m : schedule->levels()) lv += (lv.empty() ? "" : ",") + std::to_string(m);
    echo.add("levels", lv).add("out", or_dash(d.common.out)).print();
    const CantorApproximant c = generate_cantor(alpha, *d.depth);
    const auto squares = c.squares();
    counts = box_counts(std::span<const Square>(squares), unit(), *schedule);
  }
  const DimensionEstimate est = estimate_dimension(counts, side);
  std::ostringstream csv;
  write_counts_csv(csv, est);
  if (!d.common.out.empty()) save_text(d.common.out, csv.str());
  std::cout << "slope=" << format_real(est.slope) << " r2=" << format_real(est.r2) << " window=" << est.window.lo
            << '-' << est.window.hi << (est.empty ? " empty" : "") << '\n';
  return 0;
}

// john -----------------------------------------------------------------------

struct JohnArgs {
  AlphaArgs alpha;
  std::size_t depth = 3;
  std::size_t samples = 500;
  std::size_t ring_samples = 0;
  Common common;
};

int run_john(const JohnArgs& j) {
  const Alpha alpha = j.alpha.resolve("john");
  Echo("john")
      .add("alpha", alpha.value())
      .add("depth", static_cast<std::uint64_t>(j.depth))
      .add("samples", static_cast<std::uint64_t>(j.samples))
      .add("ring_samples", static_cast<std::uint64_t>(j.ring_samples))
      .add("seed", seed_text(j.common))
      .add("out", or_dash(j.common.out))
      .print();
  if (j.samples == 0) throw ParameterError("john: --samples must be at least 1");
  const JohnReport report = verify_john(alpha, j.depth, j.samples, *j.common.seed);
  std::ostringstream csv;
  write_john_csv(csv, report);
  if (!j.common.out.empty()) save_text(j.common.out, csv.str());
  std::cout << "epsilon=" << format_real(report.epsilon) << " max_length_ratio=" << format_real(report.max_length_ratio)
            << '\n';
  if (j.ring_samples > 0) {
    const RingBoundCheck rc = check_ring_distance_bound(alpha, j.depth, j.ring_samples, *j.common.seed);
    std::cout << "ring_samples=" << rc.ring_samples << " violations=" << rc.violations
              << " min_normalized_distance=" << format_real(rc.min_normalized_distance) << '\n';
  }
  return 0;
}

// mattila --------------------------------------------------------------------

struct MattilaArgs {
  std::string a_file;
  AlphaArgs a;
  AlphaArgs b;
  std::optional<std::size_t> b_depth;
  double b_diameter = 1.0;
  std::size_t trials = 200;
  double tolerance = 0.15;
  std::string reflect = "random";
  Common common;
};

int run_mattila(const MattilaArgs& m) {
  const int level = m.common.level < 0 ? 10 : m.common.level;
  const Alpha b_alpha = m.b.resolve("mattila (B)");
  const double cell = std::ldexp(1.0, -level);
  const std::size_t b_depth =
      m.b_depth ? *m.b_depth : depth_for_resolution(b_alpha, m.b_diameter, cell, std::uint64_t{1} << 16);

  std::optional<BoxGrid> a_grid;
  std::string a_text;
  if (!m.a_file.empty()) {
    a_grid = load_grid(m.a_file, level);
    a_text = m.a_file;
  } else {
    const Alpha a_alpha = m.a.resolve("mattila (A)");
    const std::size_t a_depth = depth_for_resolution(a_alpha, 1.0, cell);
    a_grid = raster_of(CantorApproximant(a_alpha, a_depth), level);
    a_text = "C(" + format_real(a_alpha.value()) + ",depth " + std::to_string(a_depth) + ")";
  }

  ReflectMode mode = ReflectMode::kRandom;
  if (m.reflect == "on") mode = ReflectMode::kForceOn;
  if (m.reflect == "off") mode = ReflectMode::kForceOff;

  Echo("mattila")
      .add("a", a_text)
      .add("level", a_grid->level())
      .add("b_alpha", b_alpha.value())
      .add("t", cantor_dimension(b_alpha))
      .add("b_depth", static_cast<std::uint64_t>(b_depth))
      .add("b_diameter", m.b_diameter)
      .add("trials", static_cast<std::uint64_t>(m.trials))
      .add("tolerance", m.tolerance)
      .add("reflect", m.reflect)
      .add("seed", seed_text(m.common))
      .add("out", or_dash(m.common.out))
      .print();

  MattilaConfig config;
  config.trials = m.trials;
  config.tolerance = m.tolerance;
  config.seed = *m.common.seed;
  config.b_diameter = m.b_diameter;
  config.reflect = mode;
  const MattilaSurvey survey = mattila_survey(*a_grid, CantorApproximant(b_alpha, b_depth), config);
  std::ostringstream csv;
  write_mattila_csv(csv, survey);
  if (!m.common.out.empty()) save_text(m.common.out, csv.str());
  std::cout << "s=" << format_real(survey.s) << " t=" << format_real(survey.t)
            << " threshold=" << format_real(survey.threshold) << " hits=" << survey.hits << '/' << survey.trials
            << " hit_fraction=" << format_real(survey.hit_fraction) << '\n';
  return 0;
}

// construct ------------------------------------------------------------------

struct ConstructArgs {
  std::string in;
  std::size_t annuli = 6;
  std::size_t trials = 100;
  Common common;
};

int run_construct(const ConstructArgs& c) {
  Echo("construct")
      .add("in", c.in)
      .add("level", c.common.level < 0 ? std::string("input") : std::to_string(c.common.level))
      .add("annuli", static_cast<std::uint64_t>(c.annuli))
      .add("trials", static_cast<std::uint64_t>(c.trials))
      .add("seed", seed_text(c.common))
      .add("out", or_dash(c.common.out))
      .print();
  const BoxGrid set = load_grid(c.in, c.common.level);
  ConstructConfig config;
  config.annuli = c.annuli;
  config.placement.trials = c.trials;
  config.placement.seed = *c.common.seed;
  const CompositeResult result = run_construction(set, config);
  const ConstructionReport& report = result.assembly.report;

  if (!c.common.out.empty()) {
    std::ostringstream plan, g, ep, csv;
    write_plan(plan, result.plan);
    write_bgr(g, result.assembly.g);
    write_bgr(ep, result.assembly.e_prime);
    write_construction_csv(csv, result.plan, report);
    save_text(c.common.out + ".plan", plan.str());
    save_text(c.common.out + ".g.bgr", g.str());
    save_text(c.common.out + ".eprime.bgr", ep.str());
    save_text(c.common.out + ".csv", csv.str());
  }
  if (result.single_point) {
    std::cout << "single_point=1 center=" << format_real(result.plan.center.x) << ','
              << format_real(result.plan.center.y) << '\n';
    return 0;
  }
  const auto problems = replay_plan_constraints(result.plan);
  std::cout << "dim_e=" << format_real(report.dim_e.slope) << " dim_e_prime=" << format_real(report.dim_e_prime)
            << " placements=" << result.plan.placements.size() << " disjoint=" << report.disjoint
            << " contained=" << report.contained << " constraint_violations=" << problems.size() << '\n';
  for (const auto& p : problems) std::cout << "violation: " << p << '\n';
  return problems.empty() ? 0 : kExitConstruction;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Four-corner Cantor dust experiments"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a Cantor dust approximant (CAD, optional BGR raster)");
  gen.alpha.attach(gen_cmd);
  gen_cmd->add_option("--depth", gen.depth, "approximation depth n")->required();
  gen_cmd->add_option("--bgr", gen.bgr, "also write a BGR raster at --level (default 10)");
  gen.common.attach(gen_cmd, false);

  DimArgs dim;
  auto* dim_cmd = app.add_subcommand("dim", "box-counting dimension estimate with CSV counts");
  dim_cmd->add_option("--in", dim.in, "BGR or CAD input file");
  dim.alpha.attach(dim_cmd);
  dim_cmd->add_option("--depth", dim.depth, "depth when generating C_alpha directly");
  dim_cmd->add_option("--levels", dim.levels, "comma-separated schedule levels")->delimiter(',');
  dim.common.attach(dim_cmd, false);

  JohnArgs john;
  auto* john_cmd = app.add_subcommand("john", "sample John paths and report the smallest ratio epsilon");
  john.alpha.attach(john_cmd);
  john_cmd->add_option("--depth", john.depth, "approximation depth n");
  john_cmd->add_option("--samples", john.samples, "sampled source points");
  john_cmd->add_option("--ring-samples", john.ring_samples, "also check the ring distance bound on this many points");
  john.common.attach(john_cmd, true);

  MattilaArgs mattila;
  auto* mattila_cmd = app.add_subcommand("mattila", "survey intersection dimensions over random isometries");
  mattila_cmd->add_option("--a", mattila.a_file, "set A as a BGR or CAD file");
  mattila.a.attach(mattila_cmd, "a-");
  mattila.b.attach(mattila_cmd, "b-");
  mattila_cmd->add_option("--b-depth", mattila.b_depth, "depth of B (default: resolved to the grid cell)");
  mattila_cmd->add_option("--b-diameter", mattila.b_diameter, "diameter of the placed copy of B");
  mattila_cmd->add_option("--trials", mattila.trials, "number of sampled isometries");
  mattila_cmd->add_option("--tolerance", mattila.tolerance, "slack below s + t - 2 that still counts as a hit");
  mattila_cmd->add_option("--reflect", mattila.reflect, "reflection draw: random, on or off")
      ->check(CLI::IsMember({"random", "on", "off"}));
  mattila.common.attach(mattila_cmd, true);

  ConstructArgs construct;
  auto* construct_cmd = app.add_subcommand("construct", "build G and E' = G n E for a rasterized set E");
  construct_cmd->add_option("--in", construct.in, "BGR or CAD file holding E")->required();
  construct_cmd->add_option("--annuli", construct.annuli, "annuli in the chain (even counts get a guard annulus)");
  construct_cmd->add_option("--trials", construct.trials, "placement trials per annulus");
  construct.common.attach(construct_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    for (auto* cmd : {gen_cmd, dim_cmd, john_cmd, mattila_cmd, construct_cmd}) {
      if (!cmd->parsed()) continue;
      const Common& common = cmd == gen_cmd       ? gen.common
                             : cmd == dim_cmd     ? dim.common
                             : cmd == john_cmd    ? john.common
                             : cmd == mattila_cmd ? mattila.common
                                                  : construct.common;
      set_max_jobs(common.jobs);
      if (cmd == gen_cmd) return run_gen(gen);
      if (cmd == dim_cmd) return run_dim(dim);
      if (cmd == john_cmd) return run_john(john);
      if (cmd == mattila_cmd) return run_mattila(mattila);
      return run_construct(construct);
    }
  } catch (const ConstructionError& e) {
    std::cerr << "construction failed: " << e.what() << '\n';
    return kExitConstruction;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "parameter error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UndeterminedError& e) {
    std::cerr << "undetermined: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
