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

#include "advpinn/param_vector.hpp"

#include "advpinn/error.hpp"

#include <algorithm>
#include <cmath>

namespace advpinn {

namespace {

bool in_group(std::string_view name, std::string_view group) {
    if (name == group)
        return true;
    return name.size() > group.size() && name.starts_with(group) && name[group.size()] == '.';
}

} // namespace

void ParamLayout::append(std::string name, std::size_t length) {
    if (contains(name))
        throw Error("duplicate parameter segment '" + name + "'");
    segments_.push_back({std::move(name), total_, length});
    total_ += length;
}

const Segment& ParamLayout::segment(std::string_view name) const {
    for (const auto& s : segments_)
        if (s.name == name)
            return s;
    throw Error("unknown parameter segment '" + std::string(name) + "'");
}

Segment ParamLayout::range(std::string_view name) const {
    Segment out{std::string(name), 0, 0};
    bool found = false;
    for (const auto& s : segments_) {
        if (!in_group(s.name, name))
            continue;
        if (!found) {
            out.offset = s.offset;
            found = true;
        } else if (s.offset != out.offset + out.length) {
            throw Error("parameter group '" + std::string(name) + "' is not contiguous");
        }
        out.length += s.length;
    }
    if (!found)
        throw Error("unknown parameter segment '" + std::string(name) + "'");
    return out;
}

bool ParamLayout::contains(std::string_view name) const {
    return std::any_of(segments_.begin(), segments_.end(), [&](const Segment& s) { return in_group(s.name, name); });
}

const Segment& ParamLayout::segment_at(std::size_t i) const {
    for (const auto& s : segments_)
        if (i >= s.offset && i < s.offset + s.length)
            return s;
    throw Error("parameter index out of range");
}

std::span<double> ParamVector::view(std::string_view name) {
    const Segment s = layout.range(name);
    return std::span<double>(values).subspan(s.offset, s.length);
}

std::span<const double> ParamVector::view(std::string_view name) const {
    const Segment s = layout.range(name);
    return std::span<const double>(values).subspan(s.offset, s.length);
}

void ParamVector::pack(std::string_view name, std::span<const double> data) {
    auto dst = view(name);
    if (dst.size() != data.size())
        throw Error("size mismatch packing segment '" + std::string(name) + "'");
    std::copy(data.begin(), data.end(), dst.begin());
}

std::vector<double> ParamVector::unpack(std::string_view name) const {
    auto src = view(name);
    return {src.begin(), src.end()};
}

std::string ParamVector::first_non_finite_segment() const {
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!std::isfinite(values[i]))
            return layout.segment_at(i).name;
    return {};
}

double l2_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v)
        s += x * x;
    return std::sqrt(s);
}

} // namespace advpinn
