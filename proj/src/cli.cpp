#include "dnabrick/cli.hpp"

#include "dnabrick/error.hpp"
#include "dnabrick/io_formats.hpp"
#include "dnabrick/service.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <unistd.h>

namespace dnabrick {

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::io, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Writes to a sibling temp file, then renames over the target.
void write_file_atomic(const std::string& path, const std::string& bytes)
{
    const fs::path target(path);
    const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorKind::io, "cannot write " + tmp.string());
        out << bytes;
        out.flush();
        if (!out) {
            std::error_code ignore;
            fs::remove(tmp, ignore);
            throw Error(ErrorKind::io, "cannot write " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorKind::io, "cannot replace " + path);
    }
}

Project load(const std::string& path)
{
    return import_project(read_file(path));
}

VoxelCoord parse_voxel(const std::string& text)
{
    VoxelCoord v;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%d,%d,%d%c", &v.x, &v.y, &v.k, &tail) != 3)
        throw Error(ErrorKind::out_of_range, "voxel must be written x,y,k (got '" + text + "')");
    return v;
}

CostConfig cost_config(std::optional<double> rate)
{
    CostConfig c;
    if (rate) {
        c.rate_usd_per_base = *rate;
    } else if (const char* env = std::getenv(kCostRateEnv); env && *env) {
        char* end = nullptr;
        c.rate_usd_per_base = std::strtod(env, &end);
        if (end == env || *end != '\0')
            throw Error(ErrorKind::negative_rate,
                        std::string(kCostRateEnv) + " is not a number: '" + env + "'");
    }
    return c;
}

void print_stats(std::ostream& out, const Project& project, const ProjectStats& st)
{
    const auto& spec = project.canvas.spec();
    char size[96];
    std::snprintf(size, sizeof size, "%.1f x %.1f x %.1f nm", st.canvas.physical_size.x_nm,
                  st.canvas.physical_size.y_nm, st.canvas.physical_size.z_nm);
    out << "canvas         " << spec.width_helices << "H x " << spec.height_helices << "H x "
        << spec.depth_bp << "B\n"
        << "size           " << size << "\n"
        << "voxels         " << st.canvas.selected_voxels << " of " << spec.voxel_count() << "\n"
        << "domains        " << st.bricks.domains << "\n"
        << "strands        " << st.bricks.strands() << "\n"
        << "full bricks    " << st.bricks.full << "\n"
        << "half bricks    " << st.bricks.half << "\n"
        << "boundary       " << st.bricks.boundary << "\n"
        << "fragments      " << st.bricks.fragment << "\n"
        << "protected      " << st.protected_domains << "\n"
        << "nucleotides    " << st.bricks.nucleotides << "\n"
        << "cost           " << st.cost.formatted() << " USD\n";
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"DNA brick canvas designer"};
    app.require_subcommand(1);

    // new
    auto* cmd_new = app.add_subcommand("new", "create a project with a full canvas");
    CanvasSpec new_spec;
    std::string new_out;
    std::uint64_t new_seed = 0;
    cmd_new->add_option("--width", new_spec.width_helices, "helices along x")->required();
    cmd_new->add_option("--height", new_spec.height_helices, "helices along y")->required();
    cmd_new->add_option("--depth", new_spec.depth_bp, "base pairs along z")->required();
    cmd_new->add_option("--seed", new_seed, "generation seed");
    cmd_new->add_option("-o,--output", new_out, "project file")->required();

    // sculpt
    auto* cmd_sculpt = app.add_subcommand("sculpt", "edit the voxel selection");
    std::string sculpt_file, remove_file, resize_to;
    std::vector<std::string> removes, adds, boxes;
    cmd_sculpt->add_option("file", sculpt_file, "project file")->required();
    cmd_sculpt->add_option("--remove", removes, "voxel x,y,k to deselect");
    cmd_sculpt->add_option("--add", adds, "voxel x,y,k to reselect");
    cmd_sculpt->add_option("--remove-box", boxes, "inclusive box x,y,k:x,y,k to deselect");
    cmd_sculpt->add_option("--remove-file", remove_file, "file with one x,y,k per line");
    cmd_sculpt->add_option("--resize", resize_to, "new dimensions W,H,D before edits");

    // generate
    auto* cmd_gen = app.add_subcommand("generate", "set sequence generation parameters");
    std::string gen_file;
    std::optional<std::uint64_t> gen_seed;
    std::optional<double> gc_min, gc_max;
    std::optional<int> max_run, hamming, retries;
    std::optional<bool> check_comp, merge;
    std::optional<std::string> protector;
    cmd_gen->add_option("file", gen_file, "project file")->required();
    cmd_gen->add_option("--seed", gen_seed, "generation seed");
    cmd_gen->add_option("--gc-min", gc_min, "minimum GC fraction");
    cmd_gen->add_option("--gc-max", gc_max, "maximum GC fraction");
    cmd_gen->add_option("--max-run", max_run, "longest allowed homopolymer run");
    cmd_gen->add_option("--hamming", hamming, "target pairwise Hamming distance");
    cmd_gen->add_option("--retries", retries, "candidates tried per domain");
    cmd_gen->add_option("--check-complements", check_comp, "also compare to reverse complements");
    cmd_gen->add_option("--boundary-merge", merge, "merge half bricks into boundary bricks");
    cmd_gen->add_option("--protector", protector, "emit_fragments or suppress_and_protect")
        ->check(CLI::IsMember({"emit_fragments", "suppress_and_protect"}));
    bool gen_print = false;
    cmd_gen->add_flag("--print", gen_print, "print the generated strands as CSV");

    // stats / analyze / cost
    auto* cmd_stats = app.add_subcommand("stats", "print canvas and strand statistics");
    std::string stats_file;
    std::optional<double> stats_rate;
    cmd_stats->add_option("file", stats_file, "project file")->required();
    cmd_stats->add_option("--rate", stats_rate, "USD per base");

    auto* cmd_analyze = app.add_subcommand("analyze", "count similar domain pairs");
    std::string analyze_file;
    cmd_analyze->add_option("file", analyze_file, "project file")->required();

    auto* cmd_cost = app.add_subcommand("cost", "estimate synthesis cost");
    std::string cost_file;
    std::optional<double> cost_rate;
    cmd_cost->add_option("file", cost_file, "project file")->required();
    cmd_cost->add_option("--rate", cost_rate, "USD per base");

    // export
    auto* cmd_export = app.add_subcommand("export", "write sequences or the project");
    std::string export_file, export_format = "csv", export_out;
    bool with_sequences = false;
    cmd_export->add_option("file", export_file, "project file")->required();
    cmd_export->add_option("--format", export_format, "csv, tex, 3dna or txt")
        ->check(CLI::IsMember({"csv", "tex", "latex", "3dna", "txt", "report"}));
    cmd_export->add_option("-o,--output", export_out, "output path (stdout when omitted)");
    cmd_export->add_flag("--with-sequences", with_sequences,
                         "embed checksummed domain sequences in a .3dna export");

    // serve
    auto* cmd_serve = app.add_subcommand("serve", "run the HTTP API");
    int port = 8080;
    std::string host = "127.0.0.1", token, data_dir;
    std::optional<double> serve_rate;
    cmd_serve->add_option("--port", port, "listen port");
    cmd_serve->add_option("--host", host, "listen address");
    cmd_serve->add_option("--token", token, "require this bearer token");
    cmd_serve->add_option("--data-dir", data_dir, "directory for saved projects");
    cmd_serve->add_option("--rate", serve_rate, "USD per base");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (*cmd_new) {
            Project p;
            p.canvas = new_canvas(new_spec);
            p.generation.seed = new_seed;
            write_file_atomic(new_out, export_project(p));
            print_stats(out, p, project_stats(p, cost_config(std::nullopt)));
        } else if (*cmd_sculpt) {
            Project p = load(sculpt_file);
            Canvas canvas = p.canvas;
            if (!resize_to.empty()) {
                CanvasSpec s;
                char tail = 0;
                if (std::sscanf(resize_to.c_str(), "%d,%d,%d%c", &s.width_helices,
                                &s.height_helices, &s.depth_bp, &tail) != 3)
                    throw Error(ErrorKind::dimension_invalid, "--resize expects W,H,D");
                canvas = resize_canvas(canvas, s);
            }
            for (const auto& r : removes)
                canvas.set(parse_voxel(r), false);
            if (!remove_file.empty()) {
                std::istringstream lines(read_file(remove_file));
                std::string line;
                while (std::getline(lines, line)) {
                    if (!line.empty() && line.back() == '\r')
                        line.pop_back();
                    if (line.empty() || line[0] == '#')
                        continue;
                    canvas.set(parse_voxel(line), false);
                }
            }
            for (const auto& b : boxes) {
                const auto colon = b.find(':');
                if (colon == std::string::npos)
                    throw Error(ErrorKind::out_of_range, "--remove-box expects lo:hi");
                canvas.remove_box(parse_voxel(b.substr(0, colon)), parse_voxel(b.substr(colon + 1)));
            }
            for (const auto& a : adds)
                canvas.set(parse_voxel(a), true);
            p.canvas = std::move(canvas);
            write_file_atomic(sculpt_file, export_project(p));
            print_stats(out, p, project_stats(p, cost_config(std::nullopt)));
        } else if (*cmd_gen) {
            Project p = load(gen_file);
            auto& c = p.generation.constraints;
            if (gen_seed) p.generation.seed = *gen_seed;
            if (gc_min) c.gc_min = *gc_min;
            if (gc_max) c.gc_max = *gc_max;
            if (max_run) c.max_run = *max_run;
            if (hamming) c.target_hamming = *hamming;
            if (retries) c.retry_budget = *retries;
            if (check_comp) c.check_complements = *check_comp;
            if (merge) p.options.boundary_merge = *merge;
            if (protector) p.options.protector_policy = parse_protector_policy(*protector);
            validate(c);
            const auto design = build_design(p);
            write_file_atomic(gen_file, export_project(p));
            out << "seed           " << p.generation.seed << "\n"
                << "domains        " << design.assignment.plus_domains().size() << " plus-side\n"
                << "hamming misses " << design.assignment.violations().size() << "\n"
                << "long runs      " << find_long_runs(design.strands, c.max_run).size() << "\n";
            for (const auto& w : design.plan.warnings)
                err << "warning: " << w << "\n";
            if (gen_print)
                out << export_csv(design.strands);
        } else if (*cmd_stats) {
            const Project p = load(stats_file);
            print_stats(out, p, project_stats(p, cost_config(stats_rate)));
        } else if (*cmd_analyze) {
            const Project p = load(analyze_file);
            const auto design = build_design(p);
            const auto h = similarity_histogram(analysis_domains(design.strands, design.plan));
            out << "domains        " << h.total_domains << "\n"
                << "8 identical    " << h.pairs_8 << "\n"
                << "7 identical    " << h.pairs_7 << "\n"
                << "6 identical    " << h.pairs_6 << "\n";
        } else if (*cmd_cost) {
            const Project p = load(cost_file);
            const auto st = project_stats(p, cost_config(cost_rate));
            out << st.cost.formatted() << " USD\n";
        } else if (*cmd_export) {
            const Project p = load(export_file);
            const auto format = parse_export_format(export_format);
            std::string bytes;
            if (format == ExportFormat::project && with_sequences) {
                const auto& g = p.generation;
                const auto a = generate_domains(p.canvas.spec(), g.seed, g.constraints);
                bytes = export_project(p, &a);
            } else {
                bytes = render_export(p, format);
            }
            if (export_out.empty())
                out << bytes;
            else
                write_file_atomic(export_out, bytes);
        } else if (*cmd_serve) {
            ServiceOptions opts;
            opts.cost = cost_config(serve_rate);
            opts.bearer_token = token;
            opts.data_dir = data_dir;
            return run_server(host, port, opts) == 0 ? exit_ok : exit_io;
        }
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return e.kind() == ErrorKind::io ? exit_io : exit_validation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
    return exit_ok;
}

} // namespace dnabrick
