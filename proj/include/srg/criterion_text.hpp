#pragma once

// Text form of CriterionConfig, shared by the CLI and the HTTP API.
//
//   criterion := term | "and(" criterion { "," criterion } ")"
//   term      := "gn" [ ":k=" number ]      default k = 0.25
//              | "gm" [ ":tm=" number ]     default tm = 0.8
//              | "int:t=" number
//
// Whitespace between tokens is ignored. format_criterion always spells out
// every parameter using the shortest round-trip decimal form, so
// parse(format(c)) == c.

#include <array>
#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "srg/error.hpp"
#include "srg/homogeneity.hpp"

namespace srg {

[[nodiscard]] inline std::string format_number(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

namespace detail {

class CriterionParser {
public:
    explicit CriterionParser(std::string_view text) : text_(text) {}

    CriterionConfig parse() {
        CriterionConfig c = criterion();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return c;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw ConfigError("criterion '" + std::string(text_) + "': " + why + " at position " + std::to_string(pos_));
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool consume(std::string_view token) {
        skip_ws();
        if (text_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view token) {
        if (!consume(token)) fail("expected '" + std::string(token) + "'");
    }

    std::string_view word() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return text_.substr(start, pos_ - start);
    }

    double number() {
        skip_ws();
        double v = 0.0;
        const char* first = text_.data() + pos_;
        const char* last = text_.data() + text_.size();
        if (first != last && *first == '+') ++first;
        const auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc{}) fail("expected a number");
        pos_ = static_cast<std::size_t>(res.ptr - text_.data());
        return v;
    }

    // ":name=value", or nothing when the parameter is optional.
    bool parameter(std::string_view name, double& out, bool required) {
        if (!consume(":")) {
            if (required) fail("missing parameter '" + std::string(name) + "'");
            return false;
        }
        const std::size_t at = pos_;
        if (word() != name) {
            pos_ = at;
            fail("expected parameter '" + std::string(name) + "'");
        }
        expect("=");
        out = number();
        return true;
    }

    CriterionConfig criterion() {
        const std::size_t at = pos_;
        const std::string_view head = word();
        try {
            if (head == "and") {
                expect("(");
                std::vector<CriterionConfig> terms;
                terms.push_back(criterion());
                while (consume(",")) terms.push_back(criterion());
                expect(")");
                return CriterionConfig::all_of(std::move(terms));
            }
            if (head == "gn") {
                double k = kDefaultGnK;
                parameter("k", k, false);
                return CriterionConfig::gradient_gn(k);
            }
            if (head == "gm") {
                double tm = kDefaultGmThreshold;
                parameter("tm", tm, false);
                return CriterionConfig::gradient_gm(tm);
            }
            if (head == "int") {
                double t = 0.0;
                parameter("t", t, true);
                return CriterionConfig::simple_intensity(t);
            }
        } catch (const ConfigError& e) {
            if (std::string_view(e.what()).starts_with("criterion '")) throw;
            fail(e.what());
        }
        pos_ = at;
        fail(head.empty() ? "expected a criterion" : "unknown criterion '" + std::string(head) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

[[nodiscard]] inline CriterionConfig parse_criterion(std::string_view text) {
    return detail::CriterionParser(text).parse();
}

[[nodiscard]] inline std::string format_criterion(const CriterionConfig& cfg) {
    switch (cfg.kind) {
        case CriterionKind::SimpleIntensity: return "int:t=" + format_number(cfg.tint);
        case CriterionKind::GradientGn: return "gn:k=" + format_number(cfg.k);
        case CriterionKind::GradientGm: return "gm:tm=" + format_number(cfg.tm);
        case CriterionKind::And: {
            std::string out = "and(";
            for (std::size_t i = 0; i < cfg.terms.size(); ++i) {
                if (i) out += ",";
                out += format_criterion(cfg.terms[i]);
            }
            return out + ")";
        }
    }
    return {};
}

}  // namespace srg
