// Batch front end. Exit codes (also in README.md):
//   0 success
//   1 `check --strict` found a violated property
//   2 bad command line
//   3 configuration or bounds error (criterion, seed, dims, predicate)
//   4 data error (unreadable, truncated or mismatched files)
//   5 internal error

#include <charconv>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "srg/srg.hpp"

namespace {

enum ExitCode : int { kOk = 0, kPropertyViolated = 1, kUsage = 2, kConfig = 3, kData = 4, kInternal = 5 };

// Re-throws `fn`'s ConfigError with the offending option named.
template <typename Fn>
auto for_option(const std::string& option, const std::string& value, Fn&& fn) {
    try {
        return fn();
    } catch (const srg::ConfigError& e) {
        throw srg::ConfigError(option + " '" + value + "': " + e.what());
    }
}

srg::GridDims parse_dims(const std::string& text) {
    std::vector<std::size_t> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t x = text.find('x', pos);
        const std::string field = text.substr(pos, x == std::string::npos ? std::string::npos : x - pos);
        std::size_t v = 0;
        const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
        if (field.empty() || res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
            throw srg::ConfigError("--dims '" + text + "': expected WxH or WxHxD");
        }
        parts.push_back(v);
        if (x == std::string::npos) break;
        pos = x + 1;
    }
    if (parts.size() != 2 && parts.size() != 3) throw srg::ConfigError("--dims '" + text + "': expected WxH or WxHxD");
    return for_option("--dims", text,
                      [&] { return srg::GridDims(parts[0], parts[1], parts.size() == 3 ? parts[2] : 1); });
}

struct GrowArgs {
    std::string engine = "stack";
    std::optional<std::string> criterion;
    std::vector<std::string> seeds;
    std::optional<std::string> neighborhood;
    std::optional<std::string> report;
    std::string input;
    std::string output;
};

int run_grow(const GrowArgs& a) {
    srg::GrowRequest req;
    req.engine = for_option("--engine", a.engine, [&] { return srg::parse_engine(a.engine); });
    if (a.criterion) {
        req.criterion = for_option("--criterion", *a.criterion, [&] { return srg::parse_criterion(*a.criterion); });
        if (req.engine == srg::Engine::Classic) {
            throw srg::ConfigError("--criterion applies to the stack engine only");
        }
    }
    if (a.neighborhood) {
        req.neighborhood =
            for_option("--neighborhood", *a.neighborhood, [&] { return srg::parse_neighborhood(*a.neighborhood); });
    }
    for (const auto& s : a.seeds) req.seeds.push_back(for_option("--seed", s, [&] { return srg::parse_site(s); }));

    const srg::ScalarGrid grid = srg::read_grid(a.input);
    const srg::GrowResult result = srg::execute_grow(grid, nullptr, req);
    srg::write_mask(result.labels, a.output);

    const std::string report = srg::grow_report_json(result.report, result.labels).dump(2) + "\n";
    if (a.report) {
        srg::write_text(*a.report, report);
    } else {
        std::cout << report;
    }
    return kOk;
}

struct CheckArgs {
    std::string labels;
    std::string predicate;
    std::optional<std::string> neighborhood;
    std::string format = "text";
    std::optional<std::string> output;
    bool strict = false;
    std::string input;
};

int run_check(const CheckArgs& a) {
    const srg::RegionPredicate pred =
        for_option("--predicate", a.predicate, [&] { return srg::parse_predicate(a.predicate); });
    const srg::ScalarGrid grid = srg::read_grid(a.input);
    const srg::LabelMap labels = srg::read_mask(a.labels, grid);
    const srg::Neighborhood nb =
        a.neighborhood
            ? for_option("--neighborhood", *a.neighborhood, [&] { return srg::parse_neighborhood(*a.neighborhood); })
            : srg::default_neighborhood(grid.dims(), false);

    const srg::PropertyReport report = srg::check_properties(grid, labels, pred, nb);
    const std::string text =
        a.format == "json" ? srg::property_report_json(report).dump(2) + "\n" : srg::property_report_text(report);
    if (a.output) {
        srg::write_text(*a.output, text);
    } else {
        std::cout << text;
    }
    return a.strict && !report.all_hold() ? kPropertyViolated : kOk;
}

struct PhantomArgs {
    std::string kind = "bridged-disks";
    std::string dims = "64x64";
    double fg = 200.0;
    double bg = 20.0;
    std::size_t bridge_width = 3;
    double sigma = 0.0;
    std::uint64_t rng_seed = 0;
    std::string output;
    std::string truth;
};

int run_phantom(const PhantomArgs& a) {
    srg::PhantomSpec spec;
    spec.kind = for_option("--kind", a.kind, [&] { return srg::parse_phantom_kind(a.kind); });
    spec.dims = parse_dims(a.dims);
    spec.fg_intensity = a.fg;
    spec.bg_intensity = a.bg;
    spec.bridge_width = a.bridge_width;
    spec.noise_sigma = a.sigma;
    spec.rng_seed = a.rng_seed;
    const srg::Phantom p = srg::generate_phantom(spec);
    srg::write_grid(p.grid, a.output);
    srg::write_mask(p.truth, a.truth);
    return kOk;
}

struct GradientArgs {
    std::string op = "sobel";
    std::string input;
    std::string output;
};

int run_gradient(const GradientArgs& a) {
    const srg::GradientOperator op =
        for_option("--operator", a.op, [&] { return srg::parse_gradient_operator(a.op); });
    const srg::GradientField field = srg::compute_gradient(srg::read_grid(a.input), op);
    srg::write_grid(srg::normalized_magnitudes(field, 65535.0), a.output);
    std::cout << "gmax " << srg::format_number(field.gmax()) << "\n"
              << "gmin " << srg::format_number(field.gmin()) << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Seeded region growing for 2D images and 3D volumes"};
    app.require_subcommand(1);

    GrowArgs grow;
    auto* g = app.add_subcommand("grow", "Grow regions from seeds and write a label mask");
    g->add_option("--engine", grow.engine, "stack or classic")->capture_default_str();
    g->add_option("--criterion", grow.criterion, "Stack admission criterion, e.g. gn:k=0.25 (default)");
    g->add_option("--seed", grow.seeds, "Seed as x,y or x,y,z; repeat for more regions")->required();
    g->add_option("--neighborhood", grow.neighborhood, "n4, n8 or n6");
    g->add_option("--report", grow.report, "Write the JSON report here instead of stdout");
    g->add_option("input", grow.input, "Image (.pgm) or raw volume with .hdr sidecar")->required();
    g->add_option("output", grow.output, "Label mask (.pgm for 2D, raw u16le otherwise)")->required();

    CheckArgs check;
    auto* c = app.add_subcommand("check", "Validate a label mask against the segmentation properties");
    c->add_option("--labels", check.labels, "Label mask")->required();
    c->add_option("--predicate", check.predicate, "dev:t=<n> or grad:k=<n>")->required();
    c->add_option("--neighborhood", check.neighborhood, "Adjacency for region pairs (default n4 / n6)");
    c->add_option("--format", check.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    c->add_option("--output", check.output, "Write the report here instead of stdout");
    c->add_flag("--strict", check.strict, "Exit 1 if any property fails");
    c->add_option("input", check.input, "Image the mask was grown on")->required();

    PhantomArgs phantom;
    auto* p = app.add_subcommand("phantom", "Generate a synthetic phantom and its ground truth");
    p->add_option("--kind", phantom.kind, "bridged-disks, step-wedge or uniform-noise")->capture_default_str();
    p->add_option("--dims", phantom.dims, "WxH or WxHxD")->capture_default_str();
    p->add_option("--fg", phantom.fg, "Foreground intensity")->capture_default_str();
    p->add_option("--bg", phantom.bg, "Background intensity")->capture_default_str();
    p->add_option("--bridge-width", phantom.bridge_width, "Bridge width in pixels")->capture_default_str();
    p->add_option("--sigma", phantom.sigma, "Gaussian noise standard deviation")->capture_default_str();
    p->add_option("--seed-rng", phantom.rng_seed, "Noise generator seed")->capture_default_str();
    p->add_option("output", phantom.output, "Phantom image")->required();
    p->add_option("truth", phantom.truth, "Ground-truth label mask")->required();

    GradientArgs gradient;
    auto* gr = app.add_subcommand("gradient", "Write the normalized gradient magnitude; print gmax and gmin");
    gr->add_option("--operator", gradient.op, "sobel or central")->capture_default_str();
    gr->add_option("input", gradient.input, "Image or volume")->required();
    gr->add_option("output", gradient.output, "Magnitude image, scaled to 0..65535")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    const CLI::App* sub = app.get_subcommands().front();
    try {
        if (sub == g) return run_grow(grow);
        if (sub == c) return run_check(check);
        if (sub == p) return run_phantom(phantom);
        return run_gradient(gradient);
    } catch (const srg::ConfigError& e) {
        std::cerr << "srg " << sub->get_name() << ": error: " << e.what() << "\n";
        return kConfig;
    } catch (const srg::BoundsError& e) {
        std::cerr << "srg " << sub->get_name() << ": error: " << e.what() << "\n";
        return kConfig;
    } catch (const srg::Error& e) {
        std::cerr << "srg " << sub->get_name() << ": error: " << e.what() << "\n";
        return kData;
    } catch (const std::exception& e) {
        std::cerr << "srg " << sub->get_name() << ": internal error: " << e.what() << "\n";
        return kInternal;
    }
}
