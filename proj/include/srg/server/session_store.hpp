#pragma once

// In-memory sessions behind the seed-studio HTTP API. Each session holds one
// uploaded image, its gradient field (computed on first use and cached) and
// an append-only run history. Nothing persists across process restarts.
//
// Requests for different sessions run concurrently; requests within one
// session are serialized by the session's mutex, which fixes history order.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "srg/error.hpp"
#include "srg/gradient.hpp"
#include "srg/io.hpp"
#include "srg/label_map.hpp"
#include "srg/overlay.hpp"
#include "srg/pipeline.hpp"
#include "srg/region_grow.hpp"

namespace srg::server {

class NotFound : public Error {
public:
    using Error::Error;
};

// A request field that failed validation, e.g. "seeds[2]".
class FieldError : public ConfigError {
public:
    FieldError(std::string field, const std::string& what) : ConfigError(field + ": " + what), field_(std::move(field)) {}
    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

struct SessionInfo {
    std::string id;
    GridDims dims;
    double min_intensity = 0.0;
    double max_intensity = 0.0;
};

struct RunRecord {
    std::uint64_t id = 0;
    GrowRequest request;
    LabelMap labels;
    GrowReport report;
};

class Session {
public:
    Session(std::string id, ScalarGrid grid) : id_(std::move(id)), grid_(std::move(grid)) {}

    [[nodiscard]] const std::string& id() const noexcept { return id_; }
    [[nodiscard]] const ScalarGrid& grid() const noexcept { return grid_; }

    // Callers hold mutex().
    [[nodiscard]] const GradientField& gradient() {
        if (!gradient_) gradient_ = compute_gradient(grid_);
        return *gradient_;
    }
    [[nodiscard]] bool gradient_cached() const noexcept { return gradient_.has_value(); }
    [[nodiscard]] std::vector<RunRecord>& history() noexcept { return history_; }
    [[nodiscard]] std::mutex& mutex() noexcept { return mutex_; }

private:
    std::string id_;
    ScalarGrid grid_;
    std::optional<GradientField> gradient_;
    std::vector<RunRecord> history_;
    std::mutex mutex_;
};

class SessionStore {
public:
    SessionStore() : rng_(std::random_device{}()) {}

    SessionInfo create(std::span<const std::uint8_t> pgm) {
        ScalarGrid grid = decode_pgm(pgm);
        const auto [lo, hi] = grid.range();
        const GridDims dims = grid.dims();
        std::unique_lock lock(mutex_);
        std::string id = new_id();
        sessions_.emplace(id, std::make_shared<Session>(id, std::move(grid)));
        return SessionInfo{std::move(id), dims, lo, hi};
    }

    [[nodiscard]] std::size_t size() const {
        std::shared_lock lock(mutex_);
        return sessions_.size();
    }

    // Runs `fn(Session&)` with the session's mutex held.
    template <typename Fn>
    decltype(auto) with_session(const std::string& id, Fn&& fn) {
        const std::shared_ptr<Session> s = find(id);
        std::lock_guard lock(s->mutex());
        return fn(*s);
    }

    RunRecord run_grow(const std::string& id, const GrowRequest& req) {
        return with_session(id, [&](Session& s) {
            const GridDims& dims = s.grid().dims();
            if (req.seeds.empty()) throw FieldError("seeds", "at least one seed is required");
            for (std::size_t i = 0; i < req.seeds.size(); ++i) {
                if (!dims.contains(req.seeds[i])) {
                    throw FieldError("seeds[" + std::to_string(i) + "]",
                                     "seed " + to_string(req.seeds[i]) + " outside image " + dims.describe());
                }
            }
            const bool wants_gradient =
                req.engine == Engine::Stack && req.criterion.value_or(CriterionConfig::gradient_gn()).needs_gradient();
            const GradientField* grad = wants_gradient ? &s.gradient() : nullptr;
            GrowResult result = execute_grow(s.grid(), grad, req);
            RunRecord rec{s.history().size() + 1, req, std::move(result.labels), std::move(result.report)};
            s.history().push_back(rec);
            return rec;
        });
    }

    Bytes overlay(const std::string& id, std::uint64_t run) {
        return with_session(id, [&](Session& s) {
            const RunRecord& rec = find_run(s, run);
            return render_overlay_png(s.grid(), rec.labels);
        });
    }

    std::vector<RunRecord> history(const std::string& id) {
        return with_session(id, [](Session& s) { return s.history(); });
    }

    Bytes gradient_preview(const std::string& id, double* gmax = nullptr, double* gmin = nullptr) {
        return with_session(id, [&](Session& s) {
            const GradientField& g = s.gradient();
            if (gmax) *gmax = g.gmax();
            if (gmin) *gmin = g.gmin();
            return render_gradient_png(g);
        });
    }

private:
    std::shared_ptr<Session> find(const std::string& id) const {
        std::shared_lock lock(mutex_);
        const auto it = sessions_.find(id);
        if (it == sessions_.end()) throw NotFound("unknown session '" + id + "'");
        return it->second;
    }

    static const RunRecord& find_run(Session& s, std::uint64_t run) {
        if (run == 0 || run > s.history().size()) {
            throw NotFound("unknown run " + std::to_string(run) + " in session '" + s.id() + "'");
        }
        return s.history()[run - 1];
    }

    // 128 random bits as 32 hex digits. Caller holds mutex_.
    std::string new_id() {
        static constexpr char hex[] = "0123456789abcdef";
        std::string id;
        do {
            id.clear();
            for (int word = 0; word < 2; ++word) {
                std::uint64_t bits = rng_();
                for (int i = 0; i < 16; ++i, bits >>= 4) id.push_back(hex[bits & 0xF]);
            }
        } while (sessions_.contains(id));
        return id;
    }

    mutable std::shared_mutex mutex_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::mt19937_64 rng_;
};

}  // namespace srg::server
