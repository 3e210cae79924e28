#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cdust/boxdim.hpp"
#include "cdust/cantor.hpp"
#include "cdust/composite.hpp"
#include "cdust/geometry.hpp"
#include "cdust/intersect.hpp"
#include "cdust/john.hpp"

namespace cdust {

/// Shortest decimal text that reads back to the same double.
std::string format_real(double v);

// BGR v1: header "bgr 1 <m> <cx> <cy> <side>" (corner and side of the
// bounds), then 2^m lines of '0'/'1', top row first.
void write_bgr(std::ostream& out, const BoxGrid& grid);
BoxGrid read_bgr(std::istream& in);  // throws FormatError

// CAD v1: header "cad 1 <alpha> <n>", then one n-letter word per line over
// A B C D (= SW SE NW NE).
void write_cad(std::ostream& out, const CantorApproximant& c);
struct CadFile {
  Alpha alpha{0.25};
  std::size_t depth = 0;
  std::vector<SquareAddress> addresses;
};
CadFile read_cad(std::istream& in);  // throws FormatError

/// "level,delta,count" rows (12 significant digits) followed by the fit
/// summary "slope,intercept,r2,window".
void write_counts_csv(std::ostream& out, const DimensionEstimate& est);

/// "sample_x,sample_y,worst_ratio" rows, then "epsilon,max_length_ratio,samples".
void write_john_csv(std::ostream& out, const JohnReport& report);

/// "trial,theta,reflect,zx,zy,slope,hit" rows, then "s,t,threshold,hit_fraction".
void write_mattila_csv(std::ostream& out, const MattilaSurvey& survey);

/// "annulus,b,alpha,depth,diameter,slope,resolved" rows, then
/// "dim_e,dim_e_prime,dim_e_prime_global,disjoint,contained,e_cells,e_prime_cells".
void write_construction_csv(std::ostream& out, const CompositePlan& plan, const ConstructionReport& report);

/// Line-oriented plan text; read_plan is its exact inverse.
void write_plan(std::ostream& out, const CompositePlan& plan);
CompositePlan read_plan(std::istream& in);  // throws FormatError

/// File helpers; failures to open raise std::ios_base::failure.
void save_text(const std::filesystem::path& path, const std::string& content);
std::string load_text(const std::filesystem::path& path);

}  // namespace cdust
