#pragma once

// Runs an httplib server on an ephemeral loopback port for the lifetime of the object.

#include <httplib.h>

#include <functional>
#include <string>
#include <thread>

namespace provcurate::fuzz {

class LoopbackServer {
public:
    explicit LoopbackServer(const std::function<void(httplib::Server&)>& mount)
    {
        mount(server_);
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~LoopbackServer()
    {
        server_.stop();
        thread_.join();
    }
    LoopbackServer(const LoopbackServer&) = delete;
    LoopbackServer& operator=(const LoopbackServer&) = delete;

    int port() const { return port_; }
    std::string url(const std::string& path) const { return "http://127.0.0.1:" + std::to_string(port_) + path; }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

} // namespace provcurate::fuzz
