#include "cdust/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cdust/errors.hpp"

namespace cdust {

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_real(const std::string& tok, const char* what) {
  double v = 0.0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
    throw FormatError(std::string("bad ") + what + " '" + tok + "'");
  }
  return v;
}

long long parse_int(const std::string& tok, const char* what) {
  long long v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
    throw FormatError(std::string("bad ") + what + " '" + tok + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(t);
  return out;
}

std::string read_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError(std::string("unexpected end of input reading ") + what);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

void expect_end(std::istream& in) {
  std::string rest;
  while (std::getline(in, rest)) {
    if (rest.find_first_not_of(" \t\r") != std::string::npos) throw FormatError("trailing content after data");
  }
}

}  // namespace

void write_bgr(std::ostream& out, const BoxGrid& grid) {
  const Square& b = grid.bounds();
  out << "bgr 1 " << grid.level() << ' ' << format_real(b.corner.x) << ' ' << format_real(b.corner.y) << ' '
      << format_real(b.side) << '\n';
  const std::size_t n = grid.cells_per_side();
  std::string row(n, '0');
  for (std::size_t j = n; j-- > 0;) {
    for (std::size_t i = 0; i < n; ++i) row[i] = grid.get(i, j) ? '1' : '0';
    out << row << '\n';
  }
}

BoxGrid read_bgr(std::istream& in) {
  const auto head = split(read_line(in, "BGR header"));
  if (head.size() != 6 || head[0] != "bgr" || head[1] != "1") throw FormatError("not a BGR v1 header");
  const long long m = parse_int(head[2], "level");
  if (m < 0 || m > BoxGrid::kMaxLevel) throw FormatError("BGR level out of range");
  const Square bounds{{parse_real(head[3], "corner x"), parse_real(head[4], "corner y")},
                      parse_real(head[5], "side")};
  if (!(bounds.side > 0.0)) throw FormatError("BGR side must be positive");
  BoxGrid grid(bounds, static_cast<int>(m));
  const std::size_t n = grid.cells_per_side();
  for (std::size_t r = 0; r < n; ++r) {
    const std::string row = read_line(in, "BGR row");
    if (row.size() != n) throw FormatError("BGR row " + std::to_string(r) + " has wrong length");
    const std::size_t j = n - 1 - r;
    for (std::size_t i = 0; i < n; ++i) {
      if (row[i] == '1') {
        grid.set(i, j);
      } else if (row[i] != '0') {
        throw FormatError("BGR rows may contain only 0 and 1");
      }
    }
  }
  expect_end(in);
  return grid;
}

void write_cad(std::ostream& out, const CantorApproximant& c) {
  out << "cad 1 " << format_real(c.alpha().value()) << ' ' << c.depth() << '\n';
  std::string word(c.depth(), 'A');
  for (std::uint64_t i = 0; i < c.size(); ++i) {
    std::uint64_t idx = i;
    for (std::size_t k = c.depth(); k-- > 0;) {
      word[k] = static_cast<char>('A' + (idx & 3U));
      idx >>= 2;
    }
    out << word << '\n';
  }
}

CadFile read_cad(std::istream& in) {
  const auto head = split(read_line(in, "CAD header"));
  if (head.size() != 4 || head[0] != "cad" || head[1] != "1") throw FormatError("not a CAD v1 header");
  CadFile f;
  try {
    f.alpha = Alpha(parse_real(head[2], "alpha"));
  } catch (const DomainError& e) {
    throw FormatError(e.what());
  }
  const long long n = parse_int(head[3], "depth");
  if (n < 0 || n > 31) throw FormatError("CAD depth out of range");
  f.depth = static_cast<std::size_t>(n);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() != f.depth) {
      if (in.peek() == EOF && line.empty() && f.depth != 0) break;
      throw FormatError("CAD word '" + line + "' does not have length " + std::to_string(f.depth));
    }
    std::vector<Quadrant> word;
    word.reserve(line.size());
    for (char c : line) word.push_back(quadrant_from_letter(c));
    f.addresses.emplace_back(std::move(word), f.alpha);
  }
  return f;
}

void write_counts_csv(std::ostream& out, const DimensionEstimate& est) {
  char buf[64];
  out << "level,delta,count\n";
  for (const auto& [m, n] : est.counts) {
    std::snprintf(buf, sizeof buf, "%.12g", std::ldexp(est.bounds_side, -m));
    out << m << ',' << buf << ',' << n << '\n';
  }
  out << "slope,intercept,r2,window\n";
  std::snprintf(buf, sizeof buf, "%.12g,", est.slope);
  out << buf;
  std::snprintf(buf, sizeof buf, "%.12g,", est.intercept);
  out << buf;
  std::snprintf(buf, sizeof buf, "%.12g,", est.r2);
  out << buf << est.window.lo << '-' << est.window.hi;
  if (est.empty) out << ",empty";
  out << '\n';
}

namespace {

std::string g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

void write_john_csv(std::ostream& out, const JohnReport& report) {
  out << "sample_x,sample_y,worst_ratio\n";
  for (const JohnSample& s : report.samples) {
    out << g12(s.source.x) << ',' << g12(s.source.y) << ',' << g12(s.worst_ratio) << '\n';
  }
  out << "epsilon,max_length_ratio,samples\n";
  out << g12(report.epsilon) << ',' << g12(report.max_length_ratio) << ',' << report.samples.size() << '\n';
}

void write_mattila_csv(std::ostream& out, const MattilaSurvey& survey) {
  out << "trial,theta,reflect,zx,zy,slope,hit\n";
  for (const MattilaTrial& t : survey.records) {
    out << t.index << ',' << g12(t.iso.theta) << ',' << (t.iso.reflect ? 1 : 0) << ',' << g12(t.iso.z.x) << ','
        << g12(t.iso.z.y) << ',' << g12(t.slope) << ',' << (t.hit ? 1 : 0) << '\n';
  }
  out << "s,t,threshold,hit_fraction\n";
  out << g12(survey.s) << ',' << g12(survey.t) << ',' << g12(survey.threshold) << ',' << g12(survey.hit_fraction)
      << '\n';
}

void write_construction_csv(std::ostream& out, const CompositePlan& plan, const ConstructionReport& report) {
  out << "annulus,b,alpha,depth,diameter,slope,resolved\n";
  for (std::size_t k = 0; k < plan.placements.size(); ++k) {
    const Placement& pl = plan.placements[k];
    const bool resolved = k < report.resolved.size() && report.resolved[k];
    out << pl.annulus << ',' << g12(pl.b) << ',' << g12(pl.alpha.value()) << ',' << pl.depth << ','
        << g12(pl.diameter) << ',' << g12(pl.estimate.slope) << ',' << (resolved ? 1 : 0) << '\n';
  }
  out << "dim_e,dim_e_prime,dim_e_prime_global,disjoint,contained,e_cells,e_prime_cells\n";
  out << g12(report.dim_e.slope) << ',' << g12(report.dim_e_prime) << ','
      << (report.dim_e_prime_global ? g12(report.dim_e_prime_global->slope) : std::string("nan")) << ','
      << (report.disjoint ? 1 : 0) << ',' << (report.contained ? 1 : 0) << ',' << report.e_cells << ','
      << report.e_prime_cells << '\n';
}

namespace {

void write_seq(std::ostream& out, const char* key, const std::vector<double>& v) {
  out << key << ' ' << v.size();
  for (double x : v) out << ' ' << format_real(x);
  out << '\n';
}

std::vector<double> read_seq(const std::vector<std::string>& tok, const char* key) {
  if (tok.size() < 2 || tok[0] != key) throw FormatError(std::string("expected '") + key + "' line");
  const long long k = parse_int(tok[1], key);
  if (k < 0 || static_cast<std::size_t>(k) + 2 != tok.size()) throw FormatError(std::string("bad count in ") + key);
  std::vector<double> v;
  for (std::size_t i = 2; i < tok.size(); ++i) v.push_back(parse_real(tok[i], key));
  return v;
}

}  // namespace

void write_plan(std::ostream& out, const CompositePlan& plan) {
  out << "cdust-plan 1\n";
  out << "bounds " << format_real(plan.bounds.corner.x) << ' ' << format_real(plan.bounds.corner.y) << ' '
      << format_real(plan.bounds.side) << '\n';
  out << "level " << plan.level << '\n';
  out << "center " << format_real(plan.center.x) << ' ' << format_real(plan.center.y) << '\n';
  write_seq(out, "half_widths", plan.half_widths);
  write_seq(out, "d_seq", plan.d_seq);
  write_seq(out, "b_seq", plan.b_seq);
  out << "placements " << plan.placements.size() << '\n';
  for (const Placement& pl : plan.placements) {
    out << "placement " << pl.annulus << ' ' << format_real(pl.b) << ' ' << format_real(pl.alpha.value()) << ' '
        << pl.depth << ' ' << format_real(pl.diameter) << ' ' << format_real(pl.iso.theta) << ' '
        << (pl.iso.reflect ? 1 : 0) << ' ' << format_real(pl.iso.z.x) << ' ' << format_real(pl.iso.z.y) << ' '
        << format_real(pl.estimate.slope) << '\n';
  }
}

CompositePlan read_plan(std::istream& in) {
  if (read_line(in, "plan header") != "cdust-plan 1") throw FormatError("not a cdust plan v1");
  CompositePlan plan;
  auto tok = split(read_line(in, "bounds"));
  if (tok.size() != 4 || tok[0] != "bounds") throw FormatError("expected 'bounds' line");
  plan.bounds = Square{{parse_real(tok[1], "bounds"), parse_real(tok[2], "bounds")}, parse_real(tok[3], "bounds")};
  tok = split(read_line(in, "level"));
  if (tok.size() != 2 || tok[0] != "level") throw FormatError("expected 'level' line");
  plan.level = static_cast<int>(parse_int(tok[1], "level"));
  tok = split(read_line(in, "center"));
  if (tok.size() != 3 || tok[0] != "center") throw FormatError("expected 'center' line");
  plan.center = {parse_real(tok[1], "center"), parse_real(tok[2], "center")};
  plan.half_widths = read_seq(split(read_line(in, "half_widths")), "half_widths");
  plan.d_seq = read_seq(split(read_line(in, "d_seq")), "d_seq");
  plan.b_seq = read_seq(split(read_line(in, "b_seq")), "b_seq");
  tok = split(read_line(in, "placements"));
  if (tok.size() != 2 || tok[0] != "placements") throw FormatError("expected 'placements' line");
  const long long k = parse_int(tok[1], "placements");
  for (long long i = 0; i < k; ++i) {
    tok = split(read_line(in, "placement"));
    if (tok.size() != 11 || tok[0] != "placement") throw FormatError("malformed placement line");
    Placement pl;
    pl.annulus = static_cast<std::size_t>(parse_int(tok[1], "annulus"));
    pl.b = parse_real(tok[2], "b");
    try {
      pl.alpha = Alpha(parse_real(tok[3], "alpha"));
    } catch (const DomainError& e) {
      throw FormatError(e.what());
    }
    pl.depth = static_cast<std::size_t>(parse_int(tok[4], "depth"));
    pl.diameter = parse_real(tok[5], "diameter");
    pl.iso.theta = parse_real(tok[6], "theta");
    pl.iso.reflect = parse_int(tok[7], "reflect") != 0;
    pl.iso.z = {parse_real(tok[8], "zx"), parse_real(tok[9], "zy")};
    pl.estimate.slope = parse_real(tok[10], "slope");
    plan.placements.push_back(pl);
  }
  expect_end(in);
  return plan;
}

void save_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot open '" + path.string() + "' for writing");
  f << content;
  if (!f) throw std::ios_base::failure("failed writing '" + path.string() + "'");
}

std::string load_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace cdust
