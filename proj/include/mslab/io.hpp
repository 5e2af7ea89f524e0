#pragma once

#include "mslab/dynamics.hpp"
#include "mslab/elliptic.hpp"

#include <string>
#include <vector>

namespace mslab {

std::string format_double(double v); // %.17g, locale-independent

// write-to-temp + rename, so partially written artifacts never appear
void write_text_atomic(const std::string& path, const std::string& content);

// plain-text curve records: header with node count and container radius, one
// coefficient line per mode (k, x-cos, x-sin, y-cos, y-sin)
std::string curve_text(const ReferenceCurve& curve);
void write_curve(const ReferenceCurve& curve, const std::string& path);
ReferenceCurve parse_curve_text(const std::string& text);
ReferenceCurve read_curve(const std::string& path);

// (theta_j, rho_j) table with the base curve embedded in the header
std::string height_field_text(const HeightField& field);
void write_height_field(const HeightField& field, const std::string& path);
HeightField parse_height_field_text(const std::string& text);
HeightField read_height_field(const std::string& path);

// trajectory CSV; interface runs use the monitor channels
// t,perimeter,area,residual,ball_radius,eta,xgamma_norm
//"1d" runs use t,x0_norm,xgamma_norm,residual
std::string trajectory_csv(const Trajectory& traj);

// curve snapshot as a plain polyline with a fixed viewBox spanning the
// container square
std::string curve_svg(const ReferenceCurve& curve, const Container& container);

std::string linearization_report_text(const LinearizationReport& rep);

// probe evaluations of a two-phase solution as x,y,u rows
std::string probe_csv(const TwoPhaseSolution& sol, const std::vector<Vec2>& points);

} // namespace mslab
