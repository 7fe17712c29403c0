#include "dnabrick/project.hpp"

#include "dnabrick/error.hpp"

namespace dnabrick {

ProjectStats project_stats(const Project& project, const CostConfig& cost)
{
    const auto plan = build_plan(project.canvas, project.options);
    ProjectStats s;
    s.canvas = stats(project.canvas);
    s.bricks = count_bricks(plan.bricks);
    s.protected_domains = plan.protected_domains.size();
    s.warnings = plan.warnings.size();
    s.cost = estimate_cost(s.bricks.nucleotides, cost);
    return s;
}

Design build_design(const Project& project)
{
    const auto& g = project.generation;
    return build_design(project, generate_domains(project.canvas.spec(), g.seed, g.constraints));
}

Design build_design(const Project& project, const DomainAssignment& assignment)
{
    const auto& g = project.generation;
    if (!(assignment.spec() == project.canvas.spec()) || assignment.seed() != g.seed ||
        !(assignment.config() == g.constraints)) {
        throw Error(ErrorKind::spec_mismatch,
                    "domain assignment does not match the project's generation parameters");
    }
    Design d;
    d.plan = build_plan(project.canvas, project.options);
    d.assignment = assignment;
    d.strands = assemble_strands(d.plan, d.assignment);
    return d;
}

} // namespace dnabrick
