#pragma once

// Admission predicates that gate region growth.
//
//   Gn = G / (k * Gmax)                admitted when Gn < 1
//   Gm = (Gmax - G) / (Gmax - Gmin)    admitted when Gm > tm
//   |g - region mean| <= t             (simple intensity baseline)
//
// G is the gradient magnitude at the candidate site. Degenerate fields are
// treated as perfectly homogeneous: Gn = 0 when Gmax = 0, Gm = 1 when
// Gmax = Gmin.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "srg/error.hpp"
#include "srg/grid.hpp"

namespace srg {

enum class CriterionKind { SimpleIntensity, GradientGn, GradientGm, And };

inline constexpr double kDefaultGnK = 0.25;
inline constexpr double kDefaultGmThreshold = 0.8;

struct CriterionConfig {
    CriterionKind kind = CriterionKind::GradientGn;
    double k = kDefaultGnK;
    double tm = kDefaultGmThreshold;
    double tint = 0.0;
    std::vector<CriterionConfig> terms;

    [[nodiscard]] static CriterionConfig simple_intensity(double t) {
        CriterionConfig c;
        c.kind = CriterionKind::SimpleIntensity;
        c.tint = t;
        c.validate();
        return c;
    }

    [[nodiscard]] static CriterionConfig gradient_gn(double k = kDefaultGnK) {
        CriterionConfig c;
        c.kind = CriterionKind::GradientGn;
        c.k = k;
        c.validate();
        return c;
    }

    [[nodiscard]] static CriterionConfig gradient_gm(double tm = kDefaultGmThreshold) {
        CriterionConfig c;
        c.kind = CriterionKind::GradientGm;
        c.tm = tm;
        c.validate();
        return c;
    }

    [[nodiscard]] static CriterionConfig all_of(std::vector<CriterionConfig> terms) {
        CriterionConfig c;
        c.kind = CriterionKind::And;
        c.terms = std::move(terms);
        c.validate();
        return c;
    }

    void validate() const {
        switch (kind) {
            case CriterionKind::SimpleIntensity:
                if (!(tint >= 0.0) || !std::isfinite(tint)) {
                    throw ConfigError("intensity tolerance t must be finite and >= 0, got " + std::to_string(tint));
                }
                break;
            case CriterionKind::GradientGn:
                if (!(k > 0.0) || !std::isfinite(k)) {
                    throw ConfigError("gn constant k must be finite and > 0, got " + std::to_string(k));
                }
                break;
            case CriterionKind::GradientGm:
                if (!(tm > 0.0 && tm < 1.0)) {
                    throw ConfigError("gm threshold tm must lie in (0,1), got " + std::to_string(tm));
                }
                break;
            case CriterionKind::And:
                if (terms.empty()) throw ConfigError("and() needs at least one criterion");
                for (const auto& t : terms) t.validate();
                break;
        }
    }

    // True when admission reads the growing region's running mean, which
    // makes the grown set depend on visiting order.
    [[nodiscard]] bool depends_on_region_mean() const noexcept {
        if (kind == CriterionKind::SimpleIntensity) return true;
        if (kind == CriterionKind::And) {
            for (const auto& t : terms) {
                if (t.depends_on_region_mean()) return true;
            }
        }
        return false;
    }

    [[nodiscard]] bool needs_gradient() const noexcept {
        switch (kind) {
            case CriterionKind::SimpleIntensity: return false;
            case CriterionKind::GradientGn:
            case CriterionKind::GradientGm: return true;
            case CriterionKind::And:
                for (const auto& t : terms) {
                    if (t.needs_gradient()) return true;
                }
                return false;
        }
        return false;
    }

    friend bool operator==(const CriterionConfig&, const CriterionConfig&) = default;
};

struct AdmissionContext {
    Site candidate;
    double region_mean = 0.0;
    double intensity = 0.0;
    double grad_mag = 0.0;
    double gmax = 0.0;
    double gmin = 0.0;
};

[[nodiscard]] inline double cost_gn(const AdmissionContext& ctx, double k) noexcept {
    if (ctx.gmax == 0.0) return 0.0;
    return ctx.grad_mag / (k * ctx.gmax);
}

[[nodiscard]] inline double cost_gm(const AdmissionContext& ctx) noexcept {
    if (ctx.gmax == ctx.gmin) return 1.0;
    return (ctx.gmax - ctx.grad_mag) / (ctx.gmax - ctx.gmin);
}

[[nodiscard]] inline bool admit(const CriterionConfig& cfg, const AdmissionContext& ctx) noexcept {
    switch (cfg.kind) {
        case CriterionKind::SimpleIntensity:
            return std::abs(ctx.intensity - ctx.region_mean) <= cfg.tint;
        case CriterionKind::GradientGn:
            // Gn < 1 evaluated as G < k * Gmax. Strict: G == k * Gmax is
            // rejected. A flat field (Gmax = 0) admits everything.
            return ctx.gmax == 0.0 || ctx.grad_mag < cfg.k * ctx.gmax;
        case CriterionKind::GradientGm:
            return cost_gm(ctx) > cfg.tm;
        case CriterionKind::And:
            for (const auto& t : cfg.terms) {
                if (!admit(t, ctx)) return false;
            }
            return true;
    }
    return false;
}

}  // namespace srg
