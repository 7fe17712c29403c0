#include "dnabrick/service.hpp"

#include "dnabrick/error.hpp"
#include "dnabrick/io_formats.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <httplib.h>
#include <json.hpp>
#include <random>
#include <vector>

namespace dnabrick {

using nlohmann::json;

struct Service::Session {
    std::string id;
    mutable std::shared_mutex mu;
    Project project;
    std::uint64_t revision = 1;
    std::shared_ptr<const DomainAssignment> assignment;
};

namespace {

struct HttpError {
    int status;
    std::string message;
};

int status_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::malformed: return 400;
    case ErrorKind::io: return 500;
    default: return 422;
    }
}

ApiResponse json_response(int status, const json& body)
{
    ApiResponse r;
    r.status = status;
    r.body = body.dump() + "\n";
    return r;
}

ApiResponse error_response(int status, const std::string& kind, const std::string& message)
{
    return json_response(status, {{"error", {{"kind", kind}, {"message", message}}}});
}

json parse_body(const std::string& body)
{
    if (body.empty())
        return json::object();
    try {
        auto j = json::parse(body);
        if (!j.is_object())
            throw HttpError{400, "request body must be a JSON object"};
        return j;
    } catch (const json::parse_error& e) {
        throw HttpError{400, std::string("invalid JSON body: ") + e.what()};
    }
}

VoxelCoord voxel_from(const json& j)
{
    if (!j.is_array() || j.size() != 3 || !j[0].is_number_integer() ||
        !j[1].is_number_integer() || !j[2].is_number_integer())
        throw HttpError{400, "voxel must be [x, y, k]"};
    return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
}

CanvasSpec spec_from(const json& j)
{
    if (!j.is_object())
        throw HttpError{400, "canvas must be an object"};
    auto num = [&](const char* key) {
        auto it = j.find(key);
        if (it == j.end() || !it->is_number_integer())
            throw HttpError{400, std::string("canvas.") + key + " must be an integer"};
        return it->get<int>();
    };
    return {num("width_helices"), num("height_helices"), num("depth_bp")};
}

void apply_constraints(const json& j, ConstraintConfig& c)
{
    if (!j.is_object())
        throw HttpError{400, "constraints must be an object"};
    try {
        if (j.contains("gc_min")) c.gc_min = j.at("gc_min").get<double>();
        if (j.contains("gc_max")) c.gc_max = j.at("gc_max").get<double>();
        if (j.contains("max_run")) c.max_run = j.at("max_run").get<int>();
        if (j.contains("target_hamming")) c.target_hamming = j.at("target_hamming").get<int>();
        if (j.contains("retry_budget")) c.retry_budget = j.at("retry_budget").get<int>();
        if (j.contains("check_complements"))
            c.check_complements = j.at("check_complements").get<bool>();
    } catch (const json::exception& e) {
        throw HttpError{400, std::string("bad constraints: ") + e.what()};
    }
    validate(c);
}

void apply_options(const json& j, PlanOptions& o)
{
    if (!j.is_object())
        throw HttpError{400, "options must be an object"};
    try {
        if (j.contains("boundary_merge"))
            o.boundary_merge = j.at("boundary_merge").get<bool>();
        if (j.contains("protector_policy"))
            o.protector_policy = parse_protector_policy(j.at("protector_policy").get<std::string>());
    } catch (const json::exception& e) {
        throw HttpError{400, std::string("bad options: ") + e.what()};
    }
}

void apply_generation(const json& j, Project& p)
{
    if (auto it = j.find("seed"); it != j.end()) {
        if (!it->is_number_unsigned())
            throw HttpError{400, "seed must be a nonnegative integer"};
        p.generation.seed = it->get<std::uint64_t>();
    }
    if (auto it = j.find("constraints"); it != j.end())
        apply_constraints(*it, p.generation.constraints);
    if (auto it = j.find("options"); it != j.end())
        apply_options(*it, p.options);
}

json stats_json(const ProjectStats& s)
{
    return {
        {"selected_voxels", s.canvas.selected_voxels},
        {"domains", s.bricks.domains},
        {"strands", s.bricks.strands()},
        {"full", s.bricks.full},
        {"half", s.bricks.half},
        {"boundary", s.bricks.boundary},
        {"fragment", s.bricks.fragment},
        {"protected_domains", s.protected_domains},
        {"warnings", s.warnings},
        {"nucleotides", s.bricks.nucleotides},
        {"physical_size_nm",
         {s.canvas.physical_size.x_nm, s.canvas.physical_size.y_nm, s.canvas.physical_size.z_nm}},
        {"cost_usd", s.cost.formatted()},
        {"rate_usd_per_base", s.cost.rate_usd_per_base},
    };
}

json strand_json(const Strand& s)
{
    json domains = json::array();
    for (const auto& d : s.domains)
        domains.push_back(format_domain(d));
    return {{"id", s.id},
            {"kind", to_string(s.kind)},
            {"orientation", to_string(s.orientation)},
            {"length_nt", s.sequence.size()},
            {"domains", domains},
            {"sequence", s.sequence}};
}

std::optional<std::uint64_t> expected_revision(const ApiRequest& req, const json& body)
{
    if (auto it = body.find("if_revision"); it != body.end()) {
        if (!it->is_number_unsigned())
            throw HttpError{400, "if_revision must be a nonnegative integer"};
        return it->get<std::uint64_t>();
    }
    if (auto it = req.headers.find("if-match"); it != req.headers.end()) {
        std::string v = it->second;
        v.erase(std::remove(v.begin(), v.end(), '"'), v.end());
        try {
            return std::stoull(v);
        } catch (const std::exception&) {
            throw HttpError{400, "If-Match must carry a revision number"};
        }
    }
    return std::nullopt;
}

std::size_t query_size(const ApiRequest& req, const char* key, std::size_t fallback)
{
    auto it = req.query.find(key);
    if (it == req.query.end())
        return fallback;
    try {
        std::size_t pos = 0;
        const auto v = std::stoull(it->second, &pos);
        if (pos != it->second.size())
            throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw HttpError{400, std::string("query parameter '") + key + "' must be an integer"};
    }
}

std::vector<std::string> split_path(const std::string& path)
{
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < path.size()) {
        while (i < path.size() && path[i] == '/')
            ++i;
        auto j = path.find('/', i);
        if (j == std::string::npos)
            j = path.size();
        if (j > i)
            out.push_back(path.substr(i, j - i));
        i = j;
    }
    return out;
}

struct Snapshot {
    Project project;
    std::uint64_t revision = 0;
    std::shared_ptr<const DomainAssignment> assignment;
};

} // namespace

Service::Service(ServiceOptions options) : options_(std::move(options))
{
    std::random_device rd;
    id_salt_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

Service::~Service() = default;

std::size_t Service::session_count() const
{
    std::shared_lock lock(store_mutex_);
    return sessions_.size();
}

std::shared_ptr<Service::Session> Service::find(const std::string& id) const
{
    std::shared_lock lock(store_mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end())
        throw HttpError{404, "unknown project '" + id + "'"};
    return it->second;
}

std::shared_ptr<Service::Session> Service::create(Project project)
{
    auto s = std::make_shared<Session>();
    s->project = std::move(project);
    std::unique_lock lock(store_mutex_);
    const auto n = next_id_++;
    char buf[40];
    std::snprintf(buf, sizeof buf, "p%llx-%04llx", static_cast<unsigned long long>(n),
                  static_cast<unsigned long long>((id_salt_ ^ (n * 0x9e3779b97f4a7c15ull)) &
                                                  0xffffu));
    s->id = buf;
    sessions_.emplace(s->id, s);
    return s;
}

ApiResponse Service::handle(const ApiRequest& req)
{
    try {
        if (!options_.bearer_token.empty()) {
            auto it = req.headers.find("authorization");
            if (it == req.headers.end() || it->second != "Bearer " + options_.bearer_token)
                return error_response(401, "unauthorized", "missing or invalid bearer token");
        }

        const auto parts = split_path(req.path);
        const auto& m = req.method;
        if (parts.size() == 2 && parts[0] == "api" && parts[1] == "health" && m == "GET")
            return json_response(200, {{"status", "ok"}});
        if (parts.size() < 2 || parts[0] != "api" || parts[1] != "projects")
            return error_response(404, "not-found", "no route for " + req.path);

        if (parts.size() == 2) {
            if (m == "POST")
                return create_project(req);
            if (m == "GET") {
                json ids = json::array();
                std::shared_lock lock(store_mutex_);
                for (const auto& [id, s] : sessions_)
                    ids.push_back(id);
                return json_response(200, {{"projects", ids}});
            }
            return error_response(405, "method-not-allowed", m + " " + req.path);
        }
        if (parts.size() == 3 && parts[2] == "import") {
            if (m != "POST")
                return error_response(405, "method-not-allowed", m + " " + req.path);
            return import_project(req);
        }

        const auto& id = parts[2];
        if (parts.size() == 3) {
            if (m == "DELETE")
                return delete_project(id);
            if (m == "GET")
                return get_project(*find(id));
            return error_response(405, "method-not-allowed", m + " " + req.path);
        }
        if (parts.size() != 4)
            return error_response(404, "not-found", "no route for " + req.path);

        const auto session = find(id);
        const auto& what = parts[3];
        if (what == "voxels" && m == "POST")
            return edit_voxels(*session, req);
        if (what == "canvas" && m == "PUT")
            return resize(*session, req);
        if (what == "generation" && m == "PUT")
            return set_generation(*session, req);
        if (what == "strands" && m == "GET")
            return get_strands(*session, req);
        if (what == "analysis" && m == "GET")
            return get_analysis(*session);
        if (what == "cost" && m == "GET")
            return get_cost(*session, req);
        if (what == "export" && m == "GET")
            return export_project(*session, req);
        if (what == "save" && m == "POST")
            return save_project(*session);
        return error_response(404, "not-found", "no route for " + m + " " + req.path);
    } catch (const HttpError& e) {
        const char* kind = e.status == 404 ? "not-found" : e.status == 409 ? "stale-revision"
                                                                            : "bad-request";
        return error_response(e.status, kind, e.message);
    } catch (const Error& e) {
        return error_response(status_for(e.kind()), to_string(e.kind()), e.what());
    } catch (const std::exception& e) {
        return error_response(500, "internal", e.what());
    }
}

namespace {

json state_json(const std::string& id, std::uint64_t revision, const Project& p,
                const CostConfig& cost)
{
    return {{"id", id},
            {"revision", revision},
            {"project", json::parse(export_project(p))},
            {"stats", stats_json(project_stats(p, cost))}};
}

} // namespace

ApiResponse Service::create_project(const ApiRequest& req)
{
    const auto body = parse_body(req.body);
    auto it = body.find("canvas");
    if (it == body.end())
        throw HttpError{400, "body must contain 'canvas'"};
    Project p;
    p.canvas = Canvas(spec_from(*it));
    if (auto r = body.find("removed_voxels"); r != body.end()) {
        if (!r->is_array())
            throw HttpError{400, "removed_voxels must be an array"};
        for (const auto& v : *r)
            p.canvas.set(voxel_from(v), false);
    }
    if (auto g = body.find("generation"); g != body.end())
        apply_generation(*g, p);
    if (auto o = body.find("options"); o != body.end())
        apply_options(*o, p.options);

    auto s = create(p);
    return json_response(201, state_json(s->id, s->revision, p, options_.cost));
}

ApiResponse Service::import_project(const ApiRequest& req)
{
    auto p = dnabrick::import_project(req.body);
    auto s = create(p);
    return json_response(201, state_json(s->id, s->revision, p, options_.cost));
}

ApiResponse Service::get_project(Session& s)
{
    std::shared_lock lock(s.mu);
    return json_response(200, state_json(s.id, s.revision, s.project, options_.cost));
}

ApiResponse Service::delete_project(const std::string& id)
{
    std::unique_lock lock(store_mutex_);
    if (sessions_.erase(id) == 0)
        throw HttpError{404, "unknown project '" + id + "'"};
    return json_response(200, {{"deleted", id}});
}

ApiResponse Service::edit_voxels(Session& s, const ApiRequest& req)
{
    const auto body = parse_body(req.body);
    const auto expected = expected_revision(req, body);

    struct Op {
        enum { set, toggle, box } kind;
        VoxelCoord a, b;
        bool present = false;
    };
    std::vector<Op> ops;
    if (auto it = body.find("set"); it != body.end()) {
        if (!it->is_array())
            throw HttpError{400, "'set' must be an array"};
        for (const auto& e : *it) {
            if (!e.is_object() || !e.contains("voxel") || !e.contains("present") ||
                !e["present"].is_boolean())
                throw HttpError{400, "'set' entries need 'voxel' and boolean 'present'"};
            ops.push_back({Op::set, voxel_from(e["voxel"]), {}, e["present"].get<bool>()});
        }
    }
    if (auto it = body.find("toggle"); it != body.end()) {
        if (!it->is_array())
            throw HttpError{400, "'toggle' must be an array"};
        for (const auto& e : *it)
            ops.push_back({Op::toggle, voxel_from(e), {}, false});
    }
    if (auto it = body.find("remove_box"); it != body.end()) {
        if (!it->is_object() || !it->contains("lo") || !it->contains("hi"))
            throw HttpError{400, "'remove_box' needs 'lo' and 'hi'"};
        ops.push_back({Op::box, voxel_from((*it)["lo"]), voxel_from((*it)["hi"]), false});
    }
    if (ops.empty())
        throw HttpError{400, "no voxel edits in request"};

    std::unique_lock lock(s.mu);
    if (expected && *expected != s.revision)
        throw HttpError{409, "project is at revision " + std::to_string(s.revision) +
                                 ", request expected " + std::to_string(*expected)};
    Canvas canvas = s.project.canvas;
    for (const auto& op : ops) {
        switch (op.kind) {
        case Op::set: canvas.set(op.a, op.present); break;
        case Op::toggle: canvas.set(op.a, !canvas.selected(op.a)); break;
        case Op::box: canvas.remove_box(op.a, op.b); break;
        }
    }
    s.project.canvas = std::move(canvas);
    ++s.revision;
    return json_response(200, {{"id", s.id},
                               {"revision", s.revision},
                               {"stats", stats_json(project_stats(s.project, options_.cost))}});
}

ApiResponse Service::resize(Session& s, const ApiRequest& req)
{
    const auto body = parse_body(req.body);
    const auto expected = expected_revision(req, body);
    const auto spec = spec_from(body.contains("canvas") ? body["canvas"] : body);
    std::unique_lock lock(s.mu);
    if (expected && *expected != s.revision)
        throw HttpError{409, "stale revision"};
    s.project.canvas = resize_canvas(s.project.canvas, spec);
    s.assignment.reset();
    ++s.revision;
    return json_response(200, state_json(s.id, s.revision, s.project, options_.cost));
}

ApiResponse Service::set_generation(Session& s, const ApiRequest& req)
{
    const auto body = parse_body(req.body);
    const auto expected = expected_revision(req, body);
    std::unique_lock lock(s.mu);
    if (expected && *expected != s.revision)
        throw HttpError{409, "stale revision"};
    Project p = s.project;
    apply_generation(body, p);
    s.project = std::move(p);
    s.assignment.reset();
    ++s.revision;
    return json_response(200, state_json(s.id, s.revision, s.project, options_.cost));
}

namespace {

// Copies the session state and makes sure a matching domain assignment is
// cached; generation runs outside the session lock.
Snapshot take_snapshot(auto& s)
{
    Snapshot snap;
    {
        std::shared_lock lock(s.mu);
        snap.project = s.project;
        snap.revision = s.revision;
        snap.assignment = s.assignment;
    }
    if (!snap.assignment) {
        const auto& g = snap.project.generation;
        snap.assignment = std::make_shared<const DomainAssignment>(
            generate_domains(snap.project.canvas.spec(), g.seed, g.constraints));
        std::unique_lock lock(s.mu);
        if (!s.assignment && s.project.canvas.spec() == snap.project.canvas.spec() &&
            s.project.generation == snap.project.generation)
            s.assignment = snap.assignment;
    }
    return snap;
}

} // namespace

ApiResponse Service::get_strands(Session& s, const ApiRequest& req)
{
    const auto offset = query_size(req, "offset", 0);
    const auto limit = query_size(req, "limit", 100);
    const auto snap = take_snapshot(s);
    const auto design = build_design(snap.project, *snap.assignment);
    json page = json::array();
    for (std::size_t i = offset; i < design.strands.size() && i < offset + limit; ++i)
        page.push_back(strand_json(design.strands[i]));
    return json_response(200, {{"id", s.id},
                               {"revision", snap.revision},
                               {"total", design.strands.size()},
                               {"offset", offset},
                               {"limit", limit},
                               {"strands", page},
                               {"stats", stats_json(project_stats(snap.project, options_.cost))}});
}

ApiResponse Service::get_analysis(Session& s)
{
    const auto snap = take_snapshot(s);
    const auto design = build_design(snap.project, *snap.assignment);
    const auto h = similarity_histogram(analysis_domains(design.strands, design.plan));
    const auto runs =
        find_long_runs(design.strands, snap.project.generation.constraints.max_run);
    return json_response(200, {{"id", s.id},
                               {"revision", snap.revision},
                               {"histogram",
                                {{"pairs_8", h.pairs_8},
                                 {"pairs_7", h.pairs_7},
                                 {"pairs_6", h.pairs_6},
                                 {"total_domains", h.total_domains}}},
                               {"hamming_violations", snap.assignment->violations().size()},
                               {"long_runs", runs.size()},
                               {"warnings", design.plan.warnings},
                               {"stats", stats_json(project_stats(snap.project, options_.cost))}});
}

ApiResponse Service::get_cost(Session& s, const ApiRequest& req)
{
    CostConfig cost = options_.cost;
    if (auto it = req.query.find("rate"); it != req.query.end()) {
        try {
            std::size_t pos = 0;
            cost.rate_usd_per_base = std::stod(it->second, &pos);
            if (pos != it->second.size())
                throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw HttpError{400, "rate must be a number"};
        }
    }
    Project p;
    std::uint64_t rev;
    {
        std::shared_lock lock(s.mu);
        p = s.project;
        rev = s.revision;
    }
    const auto st = project_stats(p, cost);
    return json_response(200, {{"id", s.id},
                               {"revision", rev},
                               {"total_nt", st.cost.total_nt},
                               {"rate_usd_per_base", st.cost.rate_usd_per_base},
                               {"total_usd", st.cost.formatted()},
                               {"stats", stats_json(project_stats(p, options_.cost))}});
}

ApiResponse Service::export_project(Session& s, const ApiRequest& req)
{
    auto it = req.query.find("format");
    const auto format = parse_export_format(it == req.query.end() ? "csv" : it->second);
    ApiResponse r;
    if (format == ExportFormat::project) {
        std::shared_lock lock(s.mu);
        r.body = render_export(s.project, format);
    } else {
        const auto snap = take_snapshot(s);
        r.body = render_export(snap.project, format, snap.assignment.get());
    }
    r.content_type = mime_type(format);
    r.download_name = s.id + "." + file_extension(format);
    return r;
}

ApiResponse Service::save_project(Session& s)
{
    if (options_.data_dir.empty())
        return error_response(422, "no-data-dir", "server was started without a data directory");
    std::string text;
    std::uint64_t rev;
    {
        std::shared_lock lock(s.mu);
        text = dnabrick::export_project(s.project);
        rev = s.revision;
    }
    namespace fs = std::filesystem;
    const fs::path target = fs::path(options_.data_dir) / (s.id + ".3dna");
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << text;
        if (!out)
            throw Error(ErrorKind::io, "cannot write " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec)
        throw Error(ErrorKind::io, "cannot rename to " + target.string() + ": " + ec.message());
    return json_response(200, {{"id", s.id}, {"revision", rev}, {"path", target.string()}});
}

void Service::mount(httplib::Server& server)
{
    auto dispatch = [this](const httplib::Request& hreq, httplib::Response& hres) {
        ApiRequest req;
        req.method = hreq.method;
        req.path = hreq.path;
        req.body = hreq.body;
        for (const auto& [k, v] : hreq.params)
            req.query.emplace(k, v);
        for (const auto& [k, v] : hreq.headers) {
            std::string lower = k;
            std::transform(lower.begin(), lower.end(), lower.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
            req.headers.emplace(lower, v);
        }
        const auto res = handle(req);
        hres.status = res.status;
        if (!res.download_name.empty())
            hres.set_header("Content-Disposition",
                            "attachment; filename=\"" + res.download_name + "\"");
        hres.set_content(res.body, res.content_type);
    };
    const std::string any = R"(/.*)";
    server.Get(any, dispatch);
    server.Post(any, dispatch);
    server.Put(any, dispatch);
    server.Delete(any, dispatch);
}

int run_server(const std::string& host, int port, ServiceOptions options)
{
    Service service(std::move(options));
    httplib::Server server;
    service.mount(server);
    std::fprintf(stderr, "listening on http://%s:%d\n", host.c_str(), port);
    return server.listen(host, port) ? 0 : 1;
}

} // namespace dnabrick
