#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "anosov/anosov.hpp"
#include "anosov/curvature.hpp"
#include "anosov/profile.hpp"

namespace anosov {

enum class SurfaceKind { Constant, KappaExpression, ConformalChart };

struct SurfaceConfig {
    std::string name;
    SurfaceKind kind = SurfaceKind::Constant;
    std::string expression;  ///< kappa(s), lambda(x, y), or a constant
    std::optional<double> k_lower_bound;
    std::vector<double> domain;  ///< [lo, hi] for profiles, [x0, x1, y0, y1] for charts; empty = default
    DerivativeMode derivative_mode = DerivativeMode::Analytic;
    double fd_step = 1e-5;
    std::optional<Rect> sample_box;
    /// Hypotheses the tool cannot check from a chart; recorded in reports as user assertions.
    bool asserted_complete = false;
    bool asserted_compactly_homogeneous = false;
};

struct RunConfig {
    SurfaceConfig surface;
    Interval window{-64.0, 64.0};
    int samples = 8;
    std::uint64_t seed = 1;
    double shift_span = 10.0;
    double grid_step = 0.05;  ///< uniform grid for CSV exports
    double riccati_s_min = 0.01;
    double growth_R = 10.0;
    CheckConfig check;
};

/// Parses a JSON config document. Syntax errors raise ParseError with the byte offset; invalid
/// values raise ConfigError.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

/// A constant or expression profile, or a chart, built from the surface spec.
struct Surface {
    std::string description;
    std::optional<CurvatureProfile> profile;
    std::optional<ConformalChart> chart;
};

Surface build_surface(const SurfaceConfig& spec, Interval window);

/// The sampled family the checker runs on: profile shifts or chart geodesics.
GeodesicFamily build_family(const RunConfig& run, const Surface& surface);

/// The single profile used by the per-geodesic commands: the profile itself, or the first sampled geodesic.
FamilyMember primary_member(const RunConfig& run, const Surface& surface);

}  // namespace anosov
