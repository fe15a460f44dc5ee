#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <variant>

#include "tactile/error.hpp"
#include "tactile/heightfield.hpp"

namespace tactile {

struct BaselineLuminance {};
struct GroundTruthPassthrough {};
struct RemoteGenerator {
    std::string endpoint;  // http://host:port[/prefix]
    std::chrono::milliseconds timeout{30000};
};

using GeneratorKind = std::variant<BaselineLuminance, GroundTruthPassthrough, RemoteGenerator>;

inline constexpr const char* kEndpointEnv = "TACTILE_GENERATOR_ENDPOINT";
inline constexpr const char* kTimeoutEnv = "TACTILE_GENERATOR_TIMEOUT_MS";

// "baseline_luminance", "groundtruth_passthrough" or "remote".
std::string kind_name(const GeneratorKind& kind);
// kind_name plus the endpoint for remote generators.
std::string describe(const GeneratorKind& kind);

// Accepts "baseline", "groundtruth", "remote=URL" (and the full kind names).
// A bare "remote" takes its endpoint from TACTILE_GENERATOR_ENDPOINT; the
// timeout comes from TACTILE_GENERATOR_TIMEOUT_MS when set.
GeneratorKind parse_generator(const std::string& text);

// Remote failures: timeout, connection refused, non-200 status, malformed
// or empty payload.
class GeneratorError : public Error {
public:
    GeneratorError(std::string endpoint, std::string cause);

    const std::string& endpoint() const noexcept { return endpoint_; }
    const std::string& cause() const noexcept { return cause_; }

private:
    std::string endpoint_;
    std::string cause_;
};

struct GenerateOptions {
    // Requested output size, sent to remote generators as ?size=WxH.
    std::optional<std::pair<std::size_t, std::size_t>> size;
};

// baseline -> luminance(texture); passthrough -> *context (required);
// remote -> POST {endpoint}/generate with the texture as PNG.
Heightfield generate(const GeneratorKind& kind, const TextureImage& texture,
                     const std::optional<Heightfield>& context = std::nullopt, const GenerateOptions& options = {});

struct HealthStatus {
    bool ok = false;
    std::string model_version;
    std::string error;  // set when !ok
};

// GET {endpoint}/health; never throws for network failures.
HealthStatus health_check(const RemoteGenerator& remote);

}  // namespace tactile
