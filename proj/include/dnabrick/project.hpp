#pragma once

#include "dnabrick/canvas.hpp"
#include "dnabrick/layout.hpp"
#include "dnabrick/seqgen.hpp"

#include <cstdint>
#include <vector>

namespace dnabrick {

struct GenerationParams {
    std::uint64_t seed = 0;
    ConstraintConfig constraints;

    friend bool operator==(const GenerationParams&, const GenerationParams&) = default;
};

/// Everything needed to reproduce a design: the sculpted canvas plus the
/// generation and strand-plan settings.
struct Project {
    Canvas canvas{CanvasSpec{2, 2, 16}};
    GenerationParams generation;
    PlanOptions options;

    friend bool operator==(const Project&, const Project&) = default;
};

/// Summary reported by the CLI and piggybacked on every service response.
struct ProjectStats {
    CanvasStats canvas;
    BrickCounts bricks;
    std::size_t protected_domains = 0;
    std::size_t warnings = 0;
    CostReport cost;
};

ProjectStats project_stats(const Project& project, const CostConfig& cost = {});

/// Fully evaluated design.
struct Design {
    StrandPlan plan;
    DomainAssignment assignment;
    std::vector<Strand> strands;
};

Design build_design(const Project& project);

/// Same as build_design but reuses an assignment already generated for the
/// project's spec and generation parameters.
Design build_design(const Project& project, const DomainAssignment& assignment);

} // namespace dnabrick
