#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "tactile/generator.hpp"

namespace tactile {

inline constexpr int kStudioSchemaVersion = 1;

struct StudioOptions {
    GeneratorKind generator = BaselineLuminance{};
    // Uploaded meshes are subdivided until they reach this many faces.
    std::size_t target_faces = 25000;
    // Physical height of h = 1 at magnification 1, in the upload's units.
    double amplitude_mm = 1.0;
    // Sessions kept in memory; the least recently used one is evicted.
    std::size_t capacity = 32;
    std::string cors_origin = "*";
    std::size_t payload_limit = 64u << 20;
};

// HTTP facade over one in-memory session store.
//
//   POST /sessions                  OBJ body -> {session_id, vertex_count, face_count}
//   POST /sessions/{id}/texture     PNG body -> generates the heightfield
//   POST /sessions/{id}/stylize     {"magnification": m} -> {rms, vertex_count}
//   GET  /sessions/{id}/mesh?which=original|stylized -> OBJ
//   GET  /sessions/{id}/heightfield -> 16-bit PNG
//   GET  /health                    -> {ok, generator}
//
// Unknown sessions give 404, stylize before a texture gives 409, generator
// failures give 502. Error bodies are {"error": kind, "message": text}.
class StudioServer {
public:
    // Throws InvalidArgument for the passthrough generator, which needs a
    // ground truth the studio never has.
    explicit StudioServer(StudioOptions options);
    ~StudioServer();
    StudioServer(const StudioServer&) = delete;
    StudioServer& operator=(const StudioServer&) = delete;

    // Returns the bound port (an ephemeral one when port == 0); throws
    // IoError if binding fails.
    int bind(const std::string& host, int port);
    // Blocks until stop().
    void listen();
    void stop();
    // Blocks until the server accepts connections or the timeout passes.
    bool wait_until_ready(int timeout_ms = 5000) const;

    std::size_t session_count() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace tactile
