// Copyright 2026 The advpinn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace advpinn {

struct Segment {
    std::string name;
    std::size_t offset = 0;
    std::size_t length = 0;
    bool operator==(const Segment&) const = default;
};

/// Ordered map of named, contiguous slices of a flat parameter array.
///
/// Segment names are hierarchical with '.' separators ("theta2.W0"); a group
/// query such as range("theta2") covers every segment under that prefix.
class ParamLayout {
public:
    void append(std::string name, std::size_t length);

    std::size_t size() const noexcept { return total_; }
    const std::vector<Segment>& segments() const noexcept { return segments_; }

    const Segment& segment(std::string_view name) const;
    /// Offset/length of a segment or of a whole group of segments.
    Segment range(std::string_view name_or_group) const;
    bool contains(std::string_view name_or_group) const;
    /// Segment holding the flat index i.
    const Segment& segment_at(std::size_t i) const;

    bool operator==(const ParamLayout&) const = default;

private:
    std::vector<Segment> segments_;
    std::size_t total_ = 0;
};

/// Flat 64-bit parameter (or gradient) storage tied to a layout.
struct ParamVector {
    ParamLayout layout;
    std::vector<double> values;

    ParamVector() = default;
    explicit ParamVector(ParamLayout l) : layout(std::move(l)), values(layout.size(), 0.0) {}

    std::size_t size() const noexcept { return values.size(); }
    std::span<double> view(std::string_view name_or_group);
    std::span<const double> view(std::string_view name_or_group) const;

    /// Copy a structured block into its segment; sizes must match.
    void pack(std::string_view name, std::span<const double> data);
    std::vector<double> unpack(std::string_view name) const;

    /// Name of the first segment holding a non-finite value, empty if none.
    std::string first_non_finite_segment() const;
};

double l2_norm(std::span<const double> v);

} // namespace advpinn
