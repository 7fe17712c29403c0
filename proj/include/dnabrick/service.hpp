#pragma once

#include "dnabrick/project.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

namespace httplib {
class Server;
}

namespace dnabrick {

struct ServiceOptions {
    CostConfig cost;
    std::string bearer_token;   // empty: no auth
    std::string data_dir;       // empty: save endpoint disabled
};

struct ApiRequest {
    std::string method;
    std::string path;
    std::map<std::string, std::string> query;
    std::map<std::string, std::string> headers; // lower-case names
    std::string body;
};

struct ApiResponse {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
    std::string download_name; // sets Content-Disposition when non-empty
};

/// In-memory project sessions behind a small JSON API. Mutations of one
/// project are serialized; reads see a consistent revision.
class Service {
public:
    explicit Service(ServiceOptions options = {});
    ~Service();

    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    ApiResponse handle(const ApiRequest& request);

    /// Routes every request on `server` through handle().
    void mount(httplib::Server& server);

    std::size_t session_count() const;

private:
    struct Session;

    std::shared_ptr<Session> find(const std::string& id) const;
    std::shared_ptr<Session> create(Project project);

    ApiResponse create_project(const ApiRequest& req);
    ApiResponse import_project(const ApiRequest& req);
    ApiResponse get_project(Session& s);
    ApiResponse delete_project(const std::string& id);
    ApiResponse edit_voxels(Session& s, const ApiRequest& req);
    ApiResponse resize(Session& s, const ApiRequest& req);
    ApiResponse set_generation(Session& s, const ApiRequest& req);
    ApiResponse get_strands(Session& s, const ApiRequest& req);
    ApiResponse get_analysis(Session& s);
    ApiResponse get_cost(Session& s, const ApiRequest& req);
    ApiResponse export_project(Session& s, const ApiRequest& req);
    ApiResponse save_project(Session& s);

    ServiceOptions options_;
    mutable std::shared_mutex store_mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::uint64_t next_id_ = 1;
    std::uint64_t id_salt_ = 0;
};

/// Blocking HTTP server on host:port.
int run_server(const std::string& host, int port, ServiceOptions options);

} // namespace dnabrick
