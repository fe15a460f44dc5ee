#include <doctest.h>

#include <sstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "stub_generator.hpp"
#include "tactile/heightfield.hpp"
#include "tactile/mesh.hpp"
#include "tactile/studio.hpp"

using namespace tactile;
using nlohmann::json;

namespace {

class RunningStudio {
public:
    explicit RunningStudio(StudioOptions options) : server_(std::move(options)) {
        port_ = server_.bind("127.0.0.1", 0);
        thread_ = std::thread([this] { server_.listen(); });
        REQUIRE(server_.wait_until_ready());
    }
    ~RunningStudio() {
        server_.stop();
        thread_.join();
    }
    httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }
    StudioServer& server() { return server_; }

private:
    StudioServer server_;
    int port_ = 0;
    std::thread thread_;
};

StudioOptions small_options(GeneratorKind generator = BaselineLuminance{}) {
    StudioOptions o;
    o.generator = std::move(generator);
    o.target_faces = 500;
    o.amplitude_mm = 2.0;
    return o;
}

std::string tile_obj() {
    std::ostringstream out;
    write_obj(make_tile({40, 30, 8}, 12), out);
    return out.str();
}

std::string texture_png() {
    std::vector<Rgb> px(32 * 32);
    for (std::size_t i = 0; i < px.size(); ++i) {
        const double v = 0.5 + 0.4 * std::sin(0.3 * static_cast<double>(i % 32)) * std::cos(0.2 * (i / 32.0));
        px[i] = {v, v, v};
    }
    const auto png = encode_texture(TextureImage(32, 32, std::move(px)));
    return std::string(png.begin(), png.end());
}

std::string new_session(httplib::Client& c) {
    auto res = c.Post("/sessions", tile_obj(), "model/obj");
    REQUIRE(res);
    REQUIRE(res->status == 201);
    return json::parse(res->body)["session_id"];
}

TriMesh fetch_mesh(httplib::Client& c, const std::string& id, const std::string& which) {
    auto res = c.Get("/sessions/" + id + "/mesh?which=" + which);
    REQUIRE(res);
    REQUIRE(res->status == 200);
    std::istringstream in(res->body);
    return parse_obj(in, which);
}

json stylize(httplib::Client& c, const std::string& id, double m, int expected_status = 200) {
    auto res = c.Post("/sessions/" + id + "/stylize", json{{"magnification", m}}.dump(), "application/json");
    REQUIRE(res);
    CHECK(res->status == expected_status);
    return json::parse(res->body);
}

}  // namespace

TEST_SUITE("studio") {
    TEST_CASE("health reports the generator") {
        RunningStudio studio(small_options());
        auto c = studio.client();
        auto res = c.Get("/health");
        REQUIRE(res);
        CHECK(res->status == 200);
        const json body = json::parse(res->body);
        CHECK(body["ok"] == true);
        CHECK(body["generator"] == "baseline_luminance");
        CHECK(body["schema_version"] == kStudioSchemaVersion);
        CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
    }

    TEST_CASE("full session flow") {
        RunningStudio studio(small_options());
        auto c = studio.client();
        auto created = c.Post("/sessions", tile_obj(), "model/obj");
        REQUIRE(created);
        REQUIRE(created->status == 201);
        const json info = json::parse(created->body);
        CHECK(info["face_count"].get<int>() >= 500);
        const std::string id = info["session_id"];

        CHECK(stylize(c, id, 1.0, 409)["error"] == "conflict");
        CHECK(c.Get("/sessions/" + id + "/heightfield")->status == 409);
        CHECK(c.Get("/sessions/" + id + "/mesh?which=stylized")->status == 409);

        auto tex = c.Post("/sessions/" + id + "/texture", texture_png(), "image/png");
        REQUIRE(tex);
        CHECK(tex->status == 200);
        CHECK(json::parse(tex->body)["width"] == 32);

        auto hf = c.Get("/sessions/" + id + "/heightfield");
        REQUIRE(hf);
        CHECK(hf->get_header_value("Content-Type") == "image/png");
        const std::span<const std::uint8_t> bytes(reinterpret_cast<const std::uint8_t*>(hf->body.data()),
                                                  hf->body.size());
        CHECK(decode_heightfield(bytes).width() == 32);

        const TriMesh original = fetch_mesh(c, id, "original");
        const json zero = stylize(c, id, 0.0);
        CHECK(zero["rms"] == 0.0);
        const TriMesh flat = fetch_mesh(c, id, "stylized");
        REQUIRE(flat.vertex_count() == original.vertex_count());
        for (std::size_t i = 0; i < flat.vertex_count(); ++i) {
            CHECK(length(flat.vertices[i] - original.vertices[i]) < 1e-9);
        }

        const json one = stylize(c, id, 1.0);
        const TriMesh m1 = fetch_mesh(c, id, "stylized");
        const json two = stylize(c, id, 2.0);
        const TriMesh m2 = fetch_mesh(c, id, "stylized");
        CHECK(two["rms"].get<double>() == doctest::Approx(2.0 * one["rms"].get<double>()).epsilon(1e-6));
        CHECK(one["rms"].get<double>() > 0.0);
        double max_dz = 0.0;
        for (std::size_t i = 0; i < m1.vertex_count(); ++i) {
            const Vec3 d1 = m1.vertices[i] - original.vertices[i];
            const Vec3 d2 = m2.vertices[i] - original.vertices[i];
            // OBJ text keeps ~9 significant digits.
            CHECK(length(d2 - d1 * 2.0) < 1e-5);
            max_dz = std::max(max_dz, d1.z);
        }
        // Amplitude 2 mm at magnification 1 bounds the displacement.
        CHECK(max_dz > 0.1);
        CHECK(max_dz <= 2.0 + 1e-6);

        CHECK(stylize(c, id, -1.0, 400)["error"] == "invalid_argument");
        CHECK(c.Get("/sessions/" + id + "/mesh?which=both")->status == 400);
    }

    TEST_CASE("unknown sessions and bad uploads") {
        RunningStudio studio(small_options());
        auto c = studio.client();
        CHECK(c.Get("/sessions/deadbeef/mesh")->status == 404);
        CHECK(c.Post("/sessions/deadbeef/stylize", "{}", "application/json")->status == 404);
        auto bad = c.Post("/sessions", "v 0 0 0\nf 1 2 3\n", "model/obj");
        REQUIRE(bad);
        CHECK(bad->status == 400);
        CHECK(json::parse(bad->body)["error"] == "parse_error");
        const std::string id = new_session(c);
        CHECK(c.Post("/sessions/" + id + "/texture", "junk", "image/png")->status == 400);
        CHECK(c.Post("/sessions/" + id + "/stylize", "{nope", "application/json")->status == 400);
    }

    TEST_CASE("generator failures map to 502") {
        const std::string closed = "http://127.0.0.1:" + std::to_string(testing::closed_port());
        RunningStudio studio(small_options(RemoteGenerator{closed, std::chrono::milliseconds(500)}));
        auto c = studio.client();
        const std::string id = new_session(c);
        auto res = c.Post("/sessions/" + id + "/texture", texture_png(), "image/png");
        REQUIRE(res);
        CHECK(res->status == 502);
        const json body = json::parse(res->body);
        CHECK(body["error"] == "generator_error");
        CHECK(body["endpoint"] == closed);
    }

    TEST_CASE("remote generator through the studio") {
        testing::StubGenerator stub;
        RunningStudio studio(small_options(RemoteGenerator{stub.endpoint(), std::chrono::seconds(5)}));
        auto c = studio.client();
        const std::string id = new_session(c);
        auto res = c.Post("/sessions/" + id + "/texture", texture_png(), "image/png");
        REQUIRE(res);
        CHECK(res->status == 200);
        CHECK(stub.requests() == 1);
        CHECK(stub.last_size() == "32x32");
        CHECK(json::parse(c.Get("/health")->body)["generator"] == "remote=" + stub.endpoint());
    }

    TEST_CASE("least recently used sessions are evicted") {
        StudioOptions o = small_options();
        o.capacity = 2;
        RunningStudio studio(o);
        auto c = studio.client();
        const std::string a = new_session(c);
        const std::string b = new_session(c);
        CHECK(c.Get("/sessions/" + a + "/mesh?which=original")->status == 200);
        const std::string d = new_session(c);
        CHECK(studio.server().session_count() == 2);
        CHECK(c.Get("/sessions/" + b + "/mesh?which=original")->status == 404);
        CHECK(c.Get("/sessions/" + a + "/mesh?which=original")->status == 200);
        CHECK(c.Get("/sessions/" + d + "/mesh?which=original")->status == 200);
    }

    TEST_CASE("CORS preflight") {
        RunningStudio studio(small_options());
        auto c = studio.client();
        auto res = c.Options("/sessions");
        REQUIRE(res);
        CHECK(res->status == 204);
        CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
        CHECK_FALSE(res->get_header_value("Access-Control-Allow-Methods").empty());
    }

    TEST_CASE("passthrough generator is rejected") {
        CHECK_THROWS_AS(StudioServer(small_options(GroundTruthPassthrough{})), InvalidArgument);
    }

    TEST_CASE("oversized uploads are refused") {
        StudioOptions o = small_options();
        o.payload_limit = 1024;
        RunningStudio studio(o);
        auto c = studio.client();
        auto res = c.Post("/sessions", std::string(4096, 'v'), "model/obj");
        REQUIRE(res);
        CHECK(res->status == 413);
    }

    TEST_CASE("repeated stylize with the same magnification is idempotent") {
        RunningStudio studio(small_options());
        auto c = studio.client();
        const std::string id = new_session(c);
        REQUIRE(c.Post("/sessions/" + id + "/texture", texture_png(), "image/png")->status == 200);
        const json a = stylize(c, id, 1.5);
        const std::string first = c.Get("/sessions/" + id + "/mesh")->body;
        const json b = stylize(c, id, 1.5);
        CHECK(a == b);
        CHECK(c.Get("/sessions/" + id + "/mesh")->body == first);
    }
}
