#pragma once

// JSON-over-HTTP routes for the seed studio. Routes and payload schemas are
// documented in docs/formats.md.
//
//   POST /api/sessions                          body: PGM bytes
//   POST /api/sessions/:id/runs                 body: grow request JSON
//   GET  /api/sessions/:id/runs/:run/overlay    image/png
//   GET  /api/sessions/:id/history
//   GET  /api/sessions/:id/gradient             image/png, X-Gmax / X-Gmin headers
//
// Errors come back as {"error": "...", "field": "..."|null} with 400 for bad
// input and 404 for unknown sessions or runs.

#include <cstdint>
#include <exception>
#include <string>
#include <utility>

#include "httplib.h"
#include "json.hpp"

#include "srg/criterion_text.hpp"
#include "srg/pipeline.hpp"
#include "srg/report_io.hpp"
#include "srg/rle.hpp"
#include "srg/server/session_store.hpp"

namespace srg::server {

// Request body:
//   {"engine": "stack"|"classic", "criterion": "<grammar>", "seeds": [[x,y], ...],
//    "neighborhood": "n4"|"n8"}
// Only "seeds" is required.
[[nodiscard]] inline GrowRequest parse_grow_request(const nlohmann::json& body) {
    if (!body.is_object()) throw FieldError("body", "expected a JSON object");
    GrowRequest req;

    auto string_field = [&](const char* name) -> std::optional<std::string> {
        const auto it = body.find(name);
        if (it == body.end() || it->is_null()) return std::nullopt;
        if (!it->is_string()) throw FieldError(name, "expected a string");
        return it->get<std::string>();
    };
    auto rethrow_as_field = [](const char* name, auto&& fn) {
        try {
            return fn();
        } catch (const Error& e) {
            throw FieldError(name, e.what());
        }
    };

    if (auto e = string_field("engine")) req.engine = rethrow_as_field("engine", [&] { return parse_engine(*e); });
    if (auto c = string_field("criterion")) {
        req.criterion = rethrow_as_field("criterion", [&] { return parse_criterion(*c); });
    }
    if (auto n = string_field("neighborhood")) {
        req.neighborhood = rethrow_as_field("neighborhood", [&] { return parse_neighborhood(*n); });
    }

    const auto seeds = body.find("seeds");
    if (seeds == body.end() || !seeds->is_array() || seeds->empty()) {
        throw FieldError("seeds", "expected a non-empty array of [x, y] pairs");
    }
    for (std::size_t i = 0; i < seeds->size(); ++i) {
        const auto& s = (*seeds)[i];
        const std::string field = "seeds[" + std::to_string(i) + "]";
        if (!s.is_array() || s.size() != 2 || !s[0].is_number_integer() || !s[1].is_number_integer()) {
            throw FieldError(field, "expected [x, y] with integer coordinates");
        }
        req.seeds.push_back(Site{s[0].get<Coord>(), s[1].get<Coord>(), 0});
    }
    return req;
}

[[nodiscard]] inline nlohmann::json rle_json(const LabelMap& labels) {
    auto runs = nlohmann::json::array();
    for (const LabelRun& r : encode_rle(labels.labels())) runs.push_back({r.label, r.count});
    return {{"encoding", "rle"},
            {"width", labels.dims().width()},
            {"height", labels.dims().height()},
            {"runs", std::move(runs)}};
}

[[nodiscard]] inline nlohmann::json run_json(const RunRecord& rec) {
    return {{"run", rec.id}, {"mask", rle_json(rec.labels)}, {"report", grow_report_json(rec.report, rec.labels)}};
}

[[nodiscard]] inline nlohmann::json history_json(const std::vector<RunRecord>& history) {
    auto entries = nlohmann::json::array();
    for (const RunRecord& rec : history) {
        entries.push_back({{"run", rec.id}, {"report", grow_report_json(rec.report, rec.labels)}});
    }
    return entries;
}

namespace detail {

inline void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

inline void send_error(httplib::Response& res, int status, const std::string& message,
                       const std::string* field = nullptr) {
    send_json(res, status, {{"error", message}, {"field", field ? nlohmann::json(*field) : nlohmann::json(nullptr)}});
}

inline std::uint64_t parse_run_id(const std::string& text) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw NotFound("unknown run '" + text + "'");
    }
    return v;
}

// Maps library exceptions onto status codes.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
    try {
        fn();
    } catch (const NotFound& e) {
        send_error(res, 404, e.what());
    } catch (const FieldError& e) {
        send_error(res, 400, e.what(), &e.field());
    } catch (const ParseError& e) {
        send_error(res, 400, e.what());
    } catch (const Error& e) {
        send_error(res, 400, e.what());
    } catch (const nlohmann::json::exception& e) {
        const std::string field = "body";
        send_error(res, 400, std::string("malformed JSON: ") + e.what(), &field);
    } catch (const std::exception& e) {
        send_error(res, 500, e.what());
    }
}

}  // namespace detail

inline void install_routes(httplib::Server& server, SessionStore& store) {
    using detail::guarded;
    using detail::send_json;

    server.set_post_routing_handler([](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", "*");
    });
    server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.status = 204;
    });

    server.Post("/api/sessions", [&store](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const auto* bytes = reinterpret_cast<const std::uint8_t*>(req.body.data());
            const SessionInfo info = store.create(std::span<const std::uint8_t>(bytes, req.body.size()));
            send_json(res, 201,
                      {{"id", info.id},
                       {"width", info.dims.width()},
                       {"height", info.dims.height()},
                       {"min", info.min_intensity},
                       {"max", info.max_intensity}});
        });
    });

    server.Post("/api/sessions/:id/runs", [&store](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const std::string& id = req.path_params.at("id");
            const GrowRequest grow = parse_grow_request(nlohmann::json::parse(req.body));
            send_json(res, 201, run_json(store.run_grow(id, grow)));
        });
    });

    server.Get("/api/sessions/:id/runs/:run/overlay", [&store](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            const Bytes png = store.overlay(req.path_params.at("id"), detail::parse_run_id(req.path_params.at("run")));
            res.set_content(std::string(png.begin(), png.end()), "image/png");
        });
    });

    server.Get("/api/sessions/:id/history", [&store](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] { send_json(res, 200, history_json(store.history(req.path_params.at("id")))); });
    });

    server.Get("/api/sessions/:id/gradient", [&store](const httplib::Request& req, httplib::Response& res) {
        guarded(res, [&] {
            double gmax = 0.0;
            double gmin = 0.0;
            const Bytes png = store.gradient_preview(req.path_params.at("id"), &gmax, &gmin);
            res.set_header("X-Gmax", format_number(gmax));
            res.set_header("X-Gmin", format_number(gmin));
            res.set_content(std::string(png.begin(), png.end()), "image/png");
        });
    });
}

}  // namespace srg::server
