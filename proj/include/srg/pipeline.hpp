#pragma once

// The one grow entry point shared by the CLI and the HTTP API, so both
// produce identical label maps and reports for identical requests.

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "srg/criterion_text.hpp"
#include "srg/error.hpp"
#include "srg/gradient.hpp"
#include "srg/grid.hpp"
#include "srg/region_grow.hpp"

namespace srg {

struct GrowRequest {
    Engine engine = Engine::Stack;
    std::vector<Site> seeds;
    std::optional<CriterionConfig> criterion;  // stack engine; defaults to gn:k=0.25
    std::optional<Neighborhood> neighborhood;  // defaults per engine and dimensionality
};

[[nodiscard]] inline Neighborhood effective_neighborhood(const GridDims& dims, const GrowRequest& req) {
    return req.neighborhood.value_or(default_neighborhood(dims, req.engine == Engine::Classic));
}

// `cached_gradient` may be null; it is computed on demand when the
// criterion needs one.
[[nodiscard]] inline GrowResult execute_grow(const ScalarGrid& grid, const GradientField* cached_gradient,
                                             const GrowRequest& req) {
    const SeedSet seeds(req.seeds);
    const Neighborhood nb = effective_neighborhood(grid.dims(), req);
    if (req.engine == Engine::Classic) return grow_classic(grid, seeds, nb);

    const CriterionConfig cfg = req.criterion.value_or(CriterionConfig::gradient_gn());
    if (!cfg.needs_gradient()) return grow_stack(grid, GradientField{}, seeds, nb, cfg);
    if (cached_gradient) return grow_stack(grid, *cached_gradient, seeds, nb, cfg);
    return grow_stack(grid, compute_gradient(grid), seeds, nb, cfg);
}

// "x,y" or "x,y,z".
[[nodiscard]] inline Site parse_site(std::string_view text) {
    std::vector<Coord> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = text.find(',', pos);
        const std::string_view field = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
        Coord v = 0;
        const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
        if (field.empty() || res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
            throw ConfigError("seed '" + std::string(text) + "' is not of the form x,y or x,y,z");
        }
        parts.push_back(v);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (parts.size() != 2 && parts.size() != 3) {
        throw ConfigError("seed '" + std::string(text) + "' is not of the form x,y or x,y,z");
    }
    return Site{parts[0], parts[1], parts.size() == 3 ? parts[2] : 0};
}

}  // namespace srg
