#include "tactile/generator.hpp"

#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "tactile/png_codec.hpp"

namespace tactile {

namespace {

struct Endpoint {
    std::string host;
    int port = 80;
    std::string prefix;  // no trailing slash
};

Endpoint parse_endpoint(const std::string& url) {
    const std::string scheme = "http://";
    if (url.rfind(scheme, 0) != 0) {
        throw GeneratorError(url, "endpoint must start with http://");
    }
    std::string rest = url.substr(scheme.size());
    Endpoint ep;
    const auto slash = rest.find('/');
    if (slash != std::string::npos) {
        ep.prefix = rest.substr(slash);
        rest = rest.substr(0, slash);
        while (!ep.prefix.empty() && ep.prefix.back() == '/') ep.prefix.pop_back();
    }
    const auto colon = rest.rfind(':');
    if (colon != std::string::npos) {
        const std::string port = rest.substr(colon + 1);
        char* end = nullptr;
        const long value = std::strtol(port.c_str(), &end, 10);
        if (port.empty() || *end != '\0' || value <= 0 || value > 65535) {
            throw GeneratorError(url, "invalid port '" + port + "'");
        }
        ep.port = static_cast<int>(value);
        rest = rest.substr(0, colon);
    }
    if (rest.empty()) throw GeneratorError(url, "endpoint has no host");
    ep.host = rest;
    return ep;
}

httplib::Client make_client(const Endpoint& ep, std::chrono::milliseconds timeout) {
    httplib::Client client(ep.host, ep.port);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    client.set_keep_alive(false);
    return client;
}

std::string describe_failure(httplib::Error err) {
    if (err == httplib::Error::Read) return "timed out or connection dropped while reading response";
    if (err == httplib::Error::Connection) return "connection failed";
    if (err == httplib::Error::ConnectionTimeout) return "connection timed out";
    return httplib::to_string(err);
}

std::optional<std::chrono::milliseconds> env_timeout() {
    const char* raw = std::getenv(kTimeoutEnv);
    if (!raw || !*raw) return std::nullopt;
    char* end = nullptr;
    const long long ms = std::strtoll(raw, &end, 10);
    if (*end != '\0' || ms <= 0) {
        throw InvalidArgument(std::string(kTimeoutEnv) + " must be a positive integer, got '" + raw + "'");
    }
    return std::chrono::milliseconds(ms);
}

Heightfield generate_remote(const RemoteGenerator& remote, const TextureImage& texture,
                            const GenerateOptions& options) {
    const Endpoint ep = parse_endpoint(remote.endpoint);
    auto client = make_client(ep, remote.timeout);
    std::string path = ep.prefix + "/generate";
    if (options.size) {
        path += "?size=" + std::to_string(options.size->first) + "x" + std::to_string(options.size->second);
    }
    const auto png = encode_texture(texture);
    const std::string body(png.begin(), png.end());
    auto res = client.Post(path, body, "image/png");
    if (!res) throw GeneratorError(remote.endpoint, describe_failure(res.error()));
    if (res->status != 200) {
        std::string reason = res->body.substr(0, 200);
        throw GeneratorError(remote.endpoint,
                             "status " + std::to_string(res->status) + (reason.empty() ? "" : ": " + reason));
    }
    const std::span<const std::uint8_t> bytes(reinterpret_cast<const std::uint8_t*>(res->body.data()),
                                              res->body.size());
    RasterImage img;
    try {
        img = decode_png(bytes, remote.endpoint);
    } catch (const Error& e) {
        throw GeneratorError(remote.endpoint, std::string("malformed payload: ") + e.what());
    }
    if (img.width == 0 || img.height == 0) throw GeneratorError(remote.endpoint, "empty heightfield");
    if (img.channels != 1) throw GeneratorError(remote.endpoint, "heightfield must be single-channel");
    if (options.size && (img.width != options.size->first || img.height != options.size->second)) {
        throw GeneratorError(remote.endpoint, "response is " + std::to_string(img.width) + "x" +
                                                  std::to_string(img.height) + ", requested " +
                                                  std::to_string(options.size->first) + "x" +
                                                  std::to_string(options.size->second));
    }
    return decode_heightfield(bytes, remote.endpoint);
}

}  // namespace

GeneratorError::GeneratorError(std::string endpoint, std::string cause)
    : Error("generator_error", "generator " + endpoint + ": " + cause),
      endpoint_(std::move(endpoint)),
      cause_(std::move(cause)) {}

std::string kind_name(const GeneratorKind& kind) {
    if (std::holds_alternative<BaselineLuminance>(kind)) return "baseline_luminance";
    if (std::holds_alternative<GroundTruthPassthrough>(kind)) return "groundtruth_passthrough";
    return "remote";
}

std::string describe(const GeneratorKind& kind) {
    if (const auto* r = std::get_if<RemoteGenerator>(&kind)) return "remote=" + r->endpoint;
    return kind_name(kind);
}

GeneratorKind parse_generator(const std::string& text) {
    if (text == "baseline" || text == "baseline_luminance") return BaselineLuminance{};
    if (text == "groundtruth" || text == "groundtruth_passthrough") return GroundTruthPassthrough{};
    if (text == "remote" || text.rfind("remote=", 0) == 0) {
        RemoteGenerator r;
        if (text == "remote") {
            const char* env = std::getenv(kEndpointEnv);
            if (!env || !*env) {
                throw InvalidArgument("generator 'remote' needs an endpoint (remote=URL or " +
                                      std::string(kEndpointEnv) + ")");
            }
            r.endpoint = env;
        } else {
            r.endpoint = text.substr(7);
        }
        if (auto t = env_timeout()) r.timeout = *t;
        parse_endpoint(r.endpoint);
        return r;
    }
    throw InvalidArgument("unknown generator '" + text + "' (expected baseline, groundtruth or remote=URL)");
}

Heightfield generate(const GeneratorKind& kind, const TextureImage& texture, const std::optional<Heightfield>& context,
                     const GenerateOptions& options) {
    if (std::holds_alternative<BaselineLuminance>(kind)) {
        Heightfield h = luminance(texture);
        if (options.size) h = resample(h, options.size->first, options.size->second);
        return h;
    }
    if (std::holds_alternative<GroundTruthPassthrough>(kind)) {
        if (!context) throw InvalidArgument("groundtruth_passthrough needs a ground-truth heightfield");
        return *context;
    }
    return generate_remote(std::get<RemoteGenerator>(kind), texture, options);
}

HealthStatus health_check(const RemoteGenerator& remote) {
    HealthStatus status;
    Endpoint ep;
    try {
        ep = parse_endpoint(remote.endpoint);
    } catch (const GeneratorError& e) {
        status.error = e.cause();
        return status;
    }
    auto client = make_client(ep, remote.timeout);
    auto res = client.Get(ep.prefix + "/health");
    if (!res) {
        status.error = describe_failure(res.error());
        return status;
    }
    if (res->status != 200) {
        status.error = "status " + std::to_string(res->status);
        return status;
    }
    try {
        const auto doc = nlohmann::json::parse(res->body);
        status.ok = doc.value("ok", false);
        status.model_version = doc.value("model_version", std::string{});
        if (!status.ok) status.error = "service reported not ok";
    } catch (const nlohmann::json::exception& e) {
        status.ok = false;
        status.error = std::string("malformed health document: ") + e.what();
    }
    return status;
}

}  // namespace tactile
