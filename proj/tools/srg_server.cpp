// Seed studio API server. Sessions live in memory and vanish on exit.

#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "httplib.h"
#include "srg/server/http_api.hpp"

int main(int argc, char** argv) {
    CLI::App app{"HTTP API for interactive seed placement"};
    std::string host = "127.0.0.1";
    int port = 8080;
    std::size_t max_upload = 64u << 20;
    app.add_option("--host", host, "Address to bind")->capture_default_str();
    app.add_option("--port", port, "Port to listen on (0 picks a free one)")->capture_default_str();
    app.add_option("--max-upload", max_upload, "Largest accepted request body in bytes")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    srg::server::SessionStore store;
    httplib::Server server;
    server.set_payload_max_length(max_upload);
    srg::server::install_routes(server, store);

    const int bound = port == 0 ? server.bind_to_any_port(host) : (server.bind_to_port(host, port) ? port : -1);
    if (bound < 0) {
        std::cerr << "srg-server: cannot bind " << host << ":" << port << "\n";
        return 1;
    }
    std::cout << "listening on http://" << host << ":" << bound << std::endl;
    return server.listen_after_bind() ? 0 : 1;
}
