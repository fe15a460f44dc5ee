#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <mutex>
#include <string>
#include <thread>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <httplib.h>

#include "tactile/heightfield.hpp"

namespace testing {

// In-process stand-in for a heightfield generation service. The default
// behaviour returns the luminance of the posted texture, resampled to the
// requested size, as a 16-bit PNG.
class StubGenerator {
public:
    enum class Mode { echo, slow, error_500, garbage, rgb, wrong_size };

    explicit StubGenerator(Mode mode = Mode::echo) : mode_(mode) {
        server_.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
            if (mode_ == Mode::slow) std::this_thread::sleep_for(std::chrono::milliseconds(1500));
            res.set_content(R"({"ok": true, "model_version": "test-1"})", "application/json");
        });
        server_.Post("/generate", [this](const httplib::Request& req, httplib::Response& res) { handle(req, res); });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~StubGenerator() {
        server_.stop();
        if (thread_.joinable()) thread_.join();
    }
    StubGenerator(const StubGenerator&) = delete;
    StubGenerator& operator=(const StubGenerator&) = delete;

    std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }
    int requests() const { return requests_.load(); }
    std::string last_size() const {
        std::lock_guard lock(mutex_);
        return last_size_;
    }

private:
    void handle(const httplib::Request& req, httplib::Response& res) {
        ++requests_;
        const std::string size = req.has_param("size") ? req.get_param_value("size") : "";
        {
            std::lock_guard lock(mutex_);
            last_size_ = size;
        }
        switch (mode_) {
            case Mode::slow:
                std::this_thread::sleep_for(std::chrono::milliseconds(1500));
                break;
            case Mode::error_500:
                res.status = 500;
                res.set_content("model exploded", "text/plain");
                return;
            case Mode::garbage:
                res.set_content("not a png", "image/png");
                return;
            default:
                break;
        }
        const std::span<const std::uint8_t> bytes(reinterpret_cast<const std::uint8_t*>(req.body.data()),
                                                  req.body.size());
        const tactile::TextureImage tex = tactile::decode_texture(bytes);
        if (mode_ == Mode::rgb) {
            const auto png = tactile::encode_texture(tex);
            res.set_content(std::string(png.begin(), png.end()), "image/png");
            return;
        }
        std::size_t w = tex.width();
        std::size_t h = tex.height();
        if (!size.empty()) {
            const auto x = size.find('x');
            w = std::stoul(size.substr(0, x));
            h = std::stoul(size.substr(x + 1));
        }
        if (mode_ == Mode::wrong_size) ++w;
        const auto png = tactile::encode_heightfield(tactile::resample(tactile::luminance(tex), w, h));
        res.set_header("X-Model-Version", "test-1");
        res.set_content(std::string(png.begin(), png.end()), "image/png");
    }

    Mode mode_;
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
    std::atomic<int> requests_{0};
    mutable std::mutex mutex_;
    std::string last_size_;
};

// A port on which nothing listens: bound once to learn a free number, then
// closed.
inline int closed_port() {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;
    ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
    socklen_t len = sizeof addr;
    ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
    ::close(fd);
    return ntohs(addr.sin_port);
}

}  // namespace testing
