#pragma once

// Run-length encoding of a label sequence in canonical (x-fastest) order:
// a list of (label, count) runs with count >= 1 and no two adjacent runs
// sharing a label.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "srg/error.hpp"
#include "srg/label_map.hpp"

namespace srg {

struct LabelRun {
    Label label = 0;
    std::size_t count = 0;
    friend bool operator==(const LabelRun&, const LabelRun&) = default;
};

[[nodiscard]] inline std::vector<LabelRun> encode_rle(std::span<const Label> labels) {
    std::vector<LabelRun> runs;
    for (Label l : labels) {
        if (!runs.empty() && runs.back().label == l) {
            ++runs.back().count;
        } else {
            runs.push_back(LabelRun{l, 1});
        }
    }
    return runs;
}

[[nodiscard]] inline std::vector<Label> decode_rle(std::span<const LabelRun> runs, std::size_t expected_size) {
    std::vector<Label> out;
    out.reserve(expected_size);
    for (const auto& r : runs) {
        if (r.count == 0 || r.count > expected_size - out.size()) {
            throw DataError("run-length data does not describe " + std::to_string(expected_size) + " sites");
        }
        out.insert(out.end(), r.count, r.label);
    }
    if (out.size() != expected_size) {
        throw DataError("run-length data covers " + std::to_string(out.size()) + " of " +
                        std::to_string(expected_size) + " sites");
    }
    return out;
}

}  // namespace srg
