#pragma once

// Serialized forms of GrowReport and PropertyReport. The JSON schemas are
// documented in docs/formats.md; key order is alphabetical and numbers use
// shortest round-trip form, so identical reports serialize to identical bytes.

#include <sstream>
#include <string>

#include "json.hpp"

#include "srg/criterion_text.hpp"
#include "srg/label_map.hpp"
#include "srg/region_grow.hpp"
#include "srg/seg_properties.hpp"

namespace srg {

[[nodiscard]] inline nlohmann::json site_json(const Site& s) { return nlohmann::json::array({s.x, s.y, s.z}); }

[[nodiscard]] inline nlohmann::json region_stats_json(const LabelMap& labels) {
    auto regions = nlohmann::json::array();
    for (Label r = 1; r <= labels.region_count(); ++r) {
        const RegionStats& s = labels.stats(r);
        const auto c = s.centroid();
        regions.push_back({{"id", r},
                           {"size", s.size},
                           {"sum", s.sum},
                           {"mean", s.mean()},
                           {"centroid", {c[0], c[1], c[2]}}});
    }
    return regions;
}

[[nodiscard]] inline nlohmann::json grow_report_json(const GrowReport& report, const LabelMap& labels) {
    nlohmann::json j;
    j["engine"] = std::string(to_string(report.engine));
    j["criterion"] = report.criterion ? nlohmann::json(format_criterion(*report.criterion)) : nlohmann::json(nullptr);
    j["neighborhood"] = std::string(to_string(report.neighborhood));
    auto seeds = nlohmann::json::array();
    for (std::size_t i = 0; i < report.seeds.size(); ++i) {
        seeds.push_back({{"region", report.seeds.region_of(i)}, {"site", site_json(report.seeds.site(i))}});
    }
    j["seeds"] = std::move(seeds);
    j["sites_examined"] = report.sites_examined;
    j["sites_accepted"] = report.sites_accepted;
    j["termination"] = std::string(to_string(report.termination));
    j["dims"] = {labels.dims().width(), labels.dims().height(), labels.dims().depth()};
    j["regions"] = region_stats_json(labels);
    return j;
}

[[nodiscard]] inline nlohmann::json property_report_json(const PropertyReport& r) {
    nlohmann::json j;
    j["covers_domain"] = r.covers_domain;
    j["disjoint"] = r.disjoint;
    auto homog = nlohmann::json::array();
    for (const auto& [region, holds] : r.per_region_homogeneous) homog.push_back({{"region", region}, {"holds", holds}});
    j["per_region_homogeneous"] = std::move(homog);
    auto maximal = nlohmann::json::array();
    for (const auto& [pair, holds] : r.merged_adjacent_inhomogeneous) {
        maximal.push_back({{"regions", {pair.first, pair.second}}, {"holds", holds}});
    }
    j["merged_adjacent_inhomogeneous"] = std::move(maximal);
    auto ces = nlohmann::json::array();
    for (const auto& c : r.counterexamples) {
        nlohmann::json e;
        e["property"] = std::string(1, c.property);
        e["region"] = c.region ? nlohmann::json(*c.region) : nlohmann::json(nullptr);
        e["regions"] = c.pair ? nlohmann::json({c.pair->first, c.pair->second}) : nlohmann::json(nullptr);
        auto sites = nlohmann::json::array();
        for (const auto& s : c.sites) sites.push_back(site_json(s));
        e["sites"] = std::move(sites);
        e["detail"] = c.detail;
        ces.push_back(std::move(e));
    }
    j["counterexamples"] = std::move(ces);
    j["all_hold"] = r.all_hold();
    return j;
}

// One fact per line, e.g.
//   a covers_domain true
//   c region 2 homogeneous false
//   d regions 1 2 merged_inhomogeneous true
//   counterexample c region 2 sites (3,0,0) (4,0,0) : max deviation ...
[[nodiscard]] inline std::string property_report_text(const PropertyReport& r) {
    std::ostringstream out;
    auto b = [](bool v) { return v ? "true" : "false"; };
    out << "a covers_domain " << b(r.covers_domain) << "\n";
    out << "b disjoint " << b(r.disjoint) << "\n";
    for (const auto& [region, holds] : r.per_region_homogeneous) {
        out << "c region " << region << " homogeneous " << b(holds) << "\n";
    }
    for (const auto& [pair, holds] : r.merged_adjacent_inhomogeneous) {
        out << "d regions " << pair.first << " " << pair.second << " merged_inhomogeneous " << b(holds) << "\n";
    }
    for (const auto& c : r.counterexamples) {
        out << "counterexample " << c.property;
        if (c.region) out << " region " << *c.region;
        if (c.pair) out << " regions " << c.pair->first << " " << c.pair->second;
        if (!c.sites.empty()) {
            out << " sites";
            for (const auto& s : c.sites) out << " " << to_string(s);
        }
        out << " : " << c.detail << "\n";
    }
    out << "all_hold " << b(r.all_hold()) << "\n";
    return out.str();
}

}  // namespace srg
