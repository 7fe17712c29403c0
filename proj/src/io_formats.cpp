#include "dnabrick/io_formats.hpp"

#include "dnabrick/error.hpp"

#include <cstdio>
#include <json.hpp>
#include <sstream>

namespace dnabrick {

using nlohmann::json;

std::string checksum_hex(std::string_view data)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::string cache_payload(const std::vector<std::string>& seqs)
{
    std::string out;
    for (const auto& s : seqs) {
        out += s;
        out += '\n';
    }
    return out;
}

[[noreturn]] void malformed(const std::string& what)
{
    throw Error(ErrorKind::malformed, "malformed project file: " + what);
}

const json& field(const json& obj, const char* key)
{
    if (!obj.is_object())
        malformed(std::string("expected an object around '") + key + "'");
    auto it = obj.find(key);
    if (it == obj.end())
        malformed(std::string("missing field '") + key + "'");
    return *it;
}

template <typename T>
T get_as(const json& obj, const char* key)
{
    const auto& v = field(obj, key);
    try {
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean())
                malformed(std::string("field '") + key + "' must be a boolean");
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer())
                malformed(std::string("field '") + key + "' must be an integer");
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number())
                malformed(std::string("field '") + key + "' must be a number");
        } else {
            if (!v.is_string())
                malformed(std::string("field '") + key + "' must be a string");
        }
        return v.get<T>();
    } catch (const json::exception& e) {
        malformed(std::string("field '") + key + "': " + e.what());
    }
}

std::string latex_escape(std::string_view s)
{
    std::string out;
    for (char c : s) {
        if (c == '_' || c == '&' || c == '%' || c == '#' || c == '$')
            out += '\\';
        out += c;
    }
    return out;
}

std::string join_domains(const std::vector<DomainId>& ds)
{
    std::string out;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (i)
            out += ';';
        out += format_domain(ds[i]);
    }
    return out;
}

} // namespace

std::string export_project(const Project& project, const DomainAssignment* cached)
{
    const auto& spec = project.canvas.spec();
    const auto& c = project.generation.constraints;

    json removed = json::array();
    for (const auto& v : project.canvas.removed_voxels())
        removed.push_back({v.x, v.y, v.k});

    json doc = {
        {"format", kProjectFormatTag},
        {"version", kProjectFormatVersion},
        {"canvas",
         {{"width_helices", spec.width_helices},
          {"height_helices", spec.height_helices},
          {"depth_bp", spec.depth_bp}}},
        {"removed_voxels", removed},
        {"generation",
         {{"seed", project.generation.seed},
          {"constraints",
           {{"gc_min", c.gc_min},
            {"gc_max", c.gc_max},
            {"max_run", c.max_run},
            {"target_hamming", c.target_hamming},
            {"retry_budget", c.retry_budget},
            {"check_complements", c.check_complements}}}}},
        {"options",
         {{"boundary_merge", project.options.boundary_merge},
          {"protector_policy", to_string(project.options.protector_policy)}}},
    };

    if (cached) {
        std::vector<std::string> seqs;
        for (auto d : cached->plus_domains())
            seqs.push_back(unpack_domain(d));
        doc["sequences"] = {{"plus_domains", seqs},
                            {"checksum", "fnv1a64:" + checksum_hex(cache_payload(seqs))}};
    }
    return doc.dump(2) + "\n";
}

Project import_project(std::string_view bytes)
{
    json doc;
    try {
        doc = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        malformed(e.what());
    }
    if (!doc.is_object())
        malformed("top level must be an object");
    if (get_as<std::string>(doc, "format") != kProjectFormatTag)
        malformed("format tag must be '3dna-project'");
    const auto version = get_as<long long>(doc, "version");
    if (version != kProjectFormatVersion)
        throw Error(ErrorKind::unsupported_version,
                    "unsupported project version " + std::to_string(version));

    const auto& cv = field(doc, "canvas");
    const CanvasSpec spec{get_as<int>(cv, "width_helices"), get_as<int>(cv, "height_helices"),
                          get_as<int>(cv, "depth_bp")};

    Project p;
    p.canvas = Canvas(spec);

    const auto& removed = field(doc, "removed_voxels");
    if (!removed.is_array())
        malformed("removed_voxels must be an array");
    for (const auto& r : removed) {
        if (!r.is_array() || r.size() != 3 || !r[0].is_number_integer() ||
            !r[1].is_number_integer() || !r[2].is_number_integer())
            malformed("each removed voxel must be [x, y, k]");
        const VoxelCoord v{r[0].get<int>(), r[1].get<int>(), r[2].get<int>()};
        p.canvas.set(v, false); // throws out_of_range
    }

    const auto& gen = field(doc, "generation");
    const auto& seed = field(gen, "seed");
    if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
        malformed("seed must be a nonnegative integer");
    p.generation.seed = seed.get<std::uint64_t>();
    const auto& cj = field(gen, "constraints");
    auto& c = p.generation.constraints;
    c.gc_min = get_as<double>(cj, "gc_min");
    c.gc_max = get_as<double>(cj, "gc_max");
    c.max_run = get_as<int>(cj, "max_run");
    c.target_hamming = get_as<int>(cj, "target_hamming");
    c.retry_budget = get_as<int>(cj, "retry_budget");
    c.check_complements = get_as<bool>(cj, "check_complements");
    validate(c);

    const auto& opts = field(doc, "options");
    p.options.boundary_merge = get_as<bool>(opts, "boundary_merge");
    p.options.protector_policy = parse_protector_policy(get_as<std::string>(opts, "protector_policy"));

    if (auto it = doc.find("sequences"); it != doc.end()) {
        const auto& seqs_j = field(*it, "plus_domains");
        if (!seqs_j.is_array())
            malformed("sequences.plus_domains must be an array");
        std::vector<std::string> seqs;
        for (const auto& s : seqs_j) {
            if (!s.is_string())
                malformed("sequences.plus_domains entries must be strings");
            seqs.push_back(s.get<std::string>());
        }
        const auto expected = "fnv1a64:" + checksum_hex(cache_payload(seqs));
        if (get_as<std::string>(*it, "checksum") != expected)
            throw Error(ErrorKind::checksum_mismatch, "cached sequence block fails its checksum");
        if (seqs.size() != spec.voxel_count())
            throw Error(ErrorKind::checksum_mismatch,
                        "cached sequence block does not cover the canvas");
    }
    return p;
}

std::string export_csv(const std::vector<Strand>& strands)
{
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& s : strands) {
        out += s.id;
        out += ',';
        out += to_string(s.kind);
        out += ',';
        out += to_string(s.orientation);
        out += ',';
        out += std::to_string(s.sequence.size());
        out += ',';
        out += join_domains(s.domains);
        out += ',';
        out += s.sequence;
        out += '\n';
    }
    return out;
}

std::string export_latex(const std::vector<Strand>& strands)
{
    std::string out =
        "\\documentclass{article}\n"
        "\\usepackage[landscape,margin=1cm]{geometry}\n"
        "\\usepackage{longtable}\n"
        "\\usepackage{seqsplit}\n"
        "\\begin{document}\n"
        "\\scriptsize\n"
        "\\begin{longtable}{lllrp{8cm}p{7cm}}\n"
        "strand\\_id & kind & orientation & length\\_nt & domains & sequence \\\\\n"
        "\\hline\n"
        "\\endhead\n";
    for (const auto& s : strands) {
        out += latex_escape(s.id);
        out += " & ";
        out += to_string(s.kind);
        out += " & ";
        out += to_string(s.orientation);
        out += " & ";
        out += std::to_string(s.sequence.size());
        out += " & \\texttt{\\seqsplit{";
        out += join_domains(s.domains);
        out += "}} & \\texttt{\\seqsplit{";
        out += s.sequence;
        out += "}} \\\\\n";
    }
    out += "\\end{longtable}\n\\end{document}\n";
    return out;
}

std::string export_report(const Project& project, const Design& design)
{
    const auto st = project_stats(project);
    const auto& spec = project.canvas.spec();
    const auto hist = similarity_histogram(analysis_domains(design.strands, design.plan));
    const auto runs = find_long_runs(design.strands, project.generation.constraints.max_run);

    std::ostringstream os;
    char size[128];
    std::snprintf(size, sizeof size, "%.1f x %.1f x %.1f nm", st.canvas.physical_size.x_nm,
                  st.canvas.physical_size.y_nm, st.canvas.physical_size.z_nm);
    os << "DNA brick design report\n"
       << "=======================\n"
       << "canvas          " << spec.width_helices << "H x " << spec.height_helices << "H x "
       << spec.depth_bp << "B (" << size << ")\n"
       << "seed            " << project.generation.seed << "\n"
       << "voxels          " << st.canvas.selected_voxels << " of " << spec.voxel_count() << "\n"
       << "domains         " << st.bricks.domains << "\n"
       << "strands         " << st.bricks.strands() << " (full " << st.bricks.full << ", half "
       << st.bricks.half << ", boundary " << st.bricks.boundary << ", fragment "
       << st.bricks.fragment << ")\n"
       << "protected       " << st.protected_domains << "\n"
       << "nucleotides     " << st.bricks.nucleotides << "\n"
       << "cost            " << st.cost.formatted() << " USD @ " << st.cost.rate_usd_per_base
       << "/base\n"
       << "similar pairs   8:" << hist.pairs_8 << " 7:" << hist.pairs_7 << " 6:" << hist.pairs_6
       << " among " << hist.total_domains << " domains\n"
       << "hamming misses  " << design.assignment.violations().size() << "\n"
       << "long runs       " << runs.size() << "\n";
    for (const auto& w : design.plan.warnings)
        os << "warning         " << w << "\n";
    os << "\n";
    for (const auto& s : design.strands) {
        char line[96];
        std::snprintf(line, sizeof line, "%-14s %-9s %-2s %3zu  ", s.id.c_str(),
                      to_string(s.kind), to_string(s.orientation), s.sequence.size());
        os << line << s.sequence << "\n";
    }
    return os.str();
}

ExportFormat parse_export_format(std::string_view name)
{
    if (name == "csv")
        return ExportFormat::csv;
    if (name == "tex" || name == "latex")
        return ExportFormat::tex;
    if (name == "3dna")
        return ExportFormat::project;
    if (name == "txt" || name == "report")
        return ExportFormat::report;
    throw Error(ErrorKind::malformed, "unknown export format '" + std::string(name) + "'");
}

const char* file_extension(ExportFormat format)
{
    switch (format) {
    case ExportFormat::csv: return "csv";
    case ExportFormat::tex: return "tex";
    case ExportFormat::project: return "3dna";
    case ExportFormat::report: return "txt";
    }
    return "bin";
}

const char* mime_type(ExportFormat format)
{
    switch (format) {
    case ExportFormat::csv: return "text/csv";
    case ExportFormat::tex: return "application/x-tex";
    case ExportFormat::project: return "application/json";
    case ExportFormat::report: return "text/plain";
    }
    return "application/octet-stream";
}

std::string render_export(const Project& project, ExportFormat format,
                          const DomainAssignment* assignment)
{
    if (format == ExportFormat::project)
        return export_project(project);
    const auto design = assignment ? build_design(project, *assignment) : build_design(project);
    switch (format) {
    case ExportFormat::csv: return export_csv(design.strands);
    case ExportFormat::tex: return export_latex(design.strands);
    case ExportFormat::report: return export_report(project, design);
    case ExportFormat::project: break;
    }
    return {};
}

} // namespace dnabrick
