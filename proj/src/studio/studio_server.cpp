#include "tactile/studio.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <list>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <httplib.h>
#include <json.hpp>

#include "tactile/displacement.hpp"
#include "tactile/extract.hpp"
#include "tactile/heightfield.hpp"
#include "tactile/mesh.hpp"

namespace tactile {

using nlohmann::json;

namespace {

struct Session {
    std::mutex mutex;
    // Normalized, subdivided working mesh with normals and uvs.
    TriMesh prepared;
    UnitCubeTransform transform;
    std::vector<std::uint32_t> active;
    TriMesh original;  // prepared mesh mapped back to upload units
    std::optional<TextureImage> texture;
    std::optional<Heightfield> heightfield;
    std::optional<TriMesh> stylized;
    std::optional<double> magnification;
    double rms_mm = 0.0;
};

std::span<const std::uint8_t> bytes_of(const std::string& body) {
    return {reinterpret_cast<const std::uint8_t*>(body.data()), body.size()};
}

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& kind, const std::string& message) {
    send_json(res, status, {{"error", kind}, {"message", message}});
}

std::string obj_text(const TriMesh& mesh) {
    std::ostringstream out;
    write_obj(mesh, out);
    return out.str();
}

}  // namespace

struct StudioServer::Impl {
    StudioOptions options;
    httplib::Server server;
    mutable std::mutex store_mutex;
    std::list<std::string> lru;  // front = most recent
    std::unordered_map<std::string, std::pair<std::shared_ptr<Session>, std::list<std::string>::iterator>> sessions;
    std::mt19937_64 id_rng{std::random_device{}()};
    std::uint64_t id_counter = 0;

    explicit Impl(StudioOptions opts) : options(std::move(opts)) { routes(); }

    std::string new_id() {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%016llx%08llx", static_cast<unsigned long long>(id_rng()),
                      static_cast<unsigned long long>(++id_counter));
        return buf;
    }

    std::string insert(std::shared_ptr<Session> s) {
        std::lock_guard lock(store_mutex);
        const std::string id = new_id();
        lru.push_front(id);
        sessions.emplace(id, std::make_pair(std::move(s), lru.begin()));
        while (sessions.size() > options.capacity) {
            sessions.erase(lru.back());
            lru.pop_back();
        }
        return id;
    }

    std::shared_ptr<Session> lookup(const std::string& id) {
        std::lock_guard lock(store_mutex);
        const auto it = sessions.find(id);
        if (it == sessions.end()) return nullptr;
        lru.splice(lru.begin(), lru, it->second.second);
        return it->second.first;
    }

    std::shared_ptr<Session> session_or_404(const httplib::Request& req, httplib::Response& res) {
        auto s = lookup(req.matches[1]);
        if (!s) send_error(res, 404, "not_found", "unknown session '" + std::string(req.matches[1]) + "'");
        return s;
    }

    std::shared_ptr<Session> prepare(const std::string& body) {
        std::istringstream in(body);
        Diagnostics diag;
        TriMesh mesh = parse_obj(in, "upload", &diag);
        auto s = std::make_shared<Session>();
        NormalizedMesh norm = normalize_unit_cube(mesh);
        TriMesh work = norm.mesh;
        if (work.face_count() < options.target_faces) work = subdivide_to(work, options.target_faces);
        work = compute_normals(work);
        if (!work.uvs) work = with_planar_uvs(work);
        s->active = default_active_vertices(work);
        s->transform = norm.transform;
        s->original = denormalize(work, s->transform);
        s->prepared = std::move(work);
        return s;
    }

    void stylize(Session& s, double magnification) {
        DisplacementParams params;
        params.magnification = magnification;
        params.amplitude_mm = options.amplitude_mm * s.transform.scale;
        params.active_mask = s.active;
        // Always from the prepared mesh, so repeated calls never accumulate.
        TriMesh displaced = denormalize(apply_heightfield(s.prepared, *s.heightfield, params), s.transform);
        s.rms_mm = raw_displacement_stats(s.original, displaced, s.active).rms_mm;
        s.stylized = std::move(displaced);
        s.magnification = magnification;
    }

    void routes() {
        server.set_payload_max_length(options.payload_limit);
        server.set_post_routing_handler([this](const httplib::Request&, httplib::Response& res) {
            res.set_header("Access-Control-Allow-Origin", options.cors_origin);
            res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type");
        });
        server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
        server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
            try {
                std::rethrow_exception(ep);
            } catch (const GeneratorError& e) {
                send_json(res, 502, {{"error", e.kind()}, {"message", e.what()},
                                     {"endpoint", e.endpoint()}, {"cause", e.cause()}});
            } catch (const Error& e) {
                send_error(res, 400, e.kind(), e.what());
            } catch (const std::exception& e) {
                send_error(res, 500, "internal", e.what());
            }
        });

        server.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
            send_json(res, 200, {{"schema_version", kStudioSchemaVersion},
                                 {"ok", true},
                                 {"generator", describe(options.generator)}});
        });

        server.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
            auto s = prepare(req.body);
            const std::size_t v = s->prepared.vertex_count();
            const std::size_t f = s->prepared.face_count();
            const std::string id = insert(std::move(s));
            send_json(res, 201, {{"schema_version", kStudioSchemaVersion},
                                 {"session_id", id},
                                 {"vertex_count", v},
                                 {"face_count", f}});
        });

        server.Post(R"(/sessions/([0-9a-f]+)/texture)", [this](const httplib::Request& req, httplib::Response& res) {
            auto s = session_or_404(req, res);
            if (!s) return;
            TextureImage texture = decode_texture(bytes_of(req.body), "upload");
            GenerateOptions gen;
            gen.size = std::make_pair(texture.width(), texture.height());
            Heightfield field = generate(options.generator, texture, std::nullopt, gen);
            std::lock_guard lock(s->mutex);
            s->texture = std::move(texture);
            s->heightfield = std::move(field);
            // A new heightfield invalidates any earlier stylization.
            s->stylized.reset();
            s->magnification.reset();
            send_json(res, 200, {{"schema_version", kStudioSchemaVersion},
                                 {"status", "generated"},
                                 {"generator", describe(options.generator)},
                                 {"width", s->heightfield->width()},
                                 {"height", s->heightfield->height()}});
        });

        server.Post(R"(/sessions/([0-9a-f]+)/stylize)", [this](const httplib::Request& req, httplib::Response& res) {
            auto s = session_or_404(req, res);
            if (!s) return;
            double magnification = 1.0;
            if (!req.body.empty()) {
                json body;
                try {
                    body = json::parse(req.body);
                } catch (const json::parse_error& e) {
                    send_error(res, 400, "parse_error", e.what());
                    return;
                }
                if (body.contains("magnification")) {
                    if (!body["magnification"].is_number()) {
                        send_error(res, 400, "invalid_argument", "magnification must be a number");
                        return;
                    }
                    magnification = body["magnification"].get<double>();
                }
            }
            if (!std::isfinite(magnification) || magnification < 0.0) {
                send_error(res, 400, "invalid_argument", "magnification must be a finite value >= 0");
                return;
            }
            std::lock_guard lock(s->mutex);
            if (!s->heightfield) {
                send_error(res, 409, "conflict", "upload a texture before stylizing");
                return;
            }
            if (!(s->stylized && s->magnification == magnification)) stylize(*s, magnification);
            send_json(res, 200, {{"schema_version", kStudioSchemaVersion},
                                 {"magnification", magnification},
                                 {"rms", s->rms_mm},
                                 {"vertex_count", s->stylized->vertex_count()}});
        });

        server.Get(R"(/sessions/([0-9a-f]+)/mesh)", [this](const httplib::Request& req, httplib::Response& res) {
            auto s = session_or_404(req, res);
            if (!s) return;
            const std::string which = req.has_param("which") ? req.get_param_value("which") : "stylized";
            std::lock_guard lock(s->mutex);
            if (which == "original") {
                res.set_content(obj_text(s->original), "model/obj");
            } else if (which == "stylized") {
                if (!s->stylized) {
                    send_error(res, 409, "conflict", "session has not been stylized");
                    return;
                }
                res.set_content(obj_text(*s->stylized), "model/obj");
            } else {
                send_error(res, 400, "invalid_argument", "which must be original or stylized");
            }
        });

        server.Get(R"(/sessions/([0-9a-f]+)/heightfield)", [this](const httplib::Request& req,
                                                                  httplib::Response& res) {
            auto s = session_or_404(req, res);
            if (!s) return;
            std::lock_guard lock(s->mutex);
            if (!s->heightfield) {
                send_error(res, 409, "conflict", "session has no heightfield yet");
                return;
            }
            const auto png = encode_heightfield(*s->heightfield, 16);
            res.set_content(std::string(png.begin(), png.end()), "image/png");
        });
    }
};

StudioServer::StudioServer(StudioOptions options) {
    if (std::holds_alternative<GroundTruthPassthrough>(options.generator)) {
        throw InvalidArgument("the studio cannot serve the groundtruth passthrough generator");
    }
    if (options.capacity == 0) throw InvalidArgument("session capacity must be positive");
    if (!(options.amplitude_mm > 0.0)) throw InvalidArgument("amplitude_mm must be positive");
    impl_ = std::make_unique<Impl>(std::move(options));
}

StudioServer::~StudioServer() { stop(); }

int StudioServer::bind(const std::string& host, int port) {
    if (port == 0) {
        const int bound = impl_->server.bind_to_any_port(host);
        if (bound <= 0) throw IoError("cannot bind " + host);
        return bound;
    }
    if (!impl_->server.bind_to_port(host, port)) {
        throw IoError("cannot bind " + host + ":" + std::to_string(port));
    }
    return port;
}

void StudioServer::listen() { impl_->server.listen_after_bind(); }

void StudioServer::stop() {
    if (impl_) impl_->server.stop();
}

bool StudioServer::wait_until_ready(int timeout_ms) const {
    const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
    while (!impl_->server.is_running()) {
        if (std::chrono::steady_clock::now() > deadline) return false;
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    return true;
}

std::size_t StudioServer::session_count() const {
    std::lock_guard lock(impl_->store_mutex);
    return impl_->sessions.size();
}

}  // namespace tactile
