#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "sjg/group.hpp"

namespace sjg {

using Json = nlohmann::ordered_json;

// Input document: a point of the space plus metric parameters.
//
//   {
//     "n": 2,
//     "x": [x11, x12, x22],          // symmetric, upper triangle row-major
//     "y": [y11, y12, y22],
//     "p": [p1, p2],
//     "q": [q1, q2],
//     "kappa": 0.25,                 // optional; presence selects the extended space
//     "params": {"alpha": 1.0, "gamma": 1.0, "delta": 1.0},
//     "velocity": [ ... ]            // optional, chart-ordered, for geodesics
//   }
struct PointDocument {
    ExtendedJacobiPoint point;
    MetricParams params;
    std::optional<Vec> velocity;

    int n() const { return point.n(); }
    bool extended() const { return point.extended(); }
};

// Throws ValidationError naming the violated invariant.
PointDocument parse_point_document(const std::string& text);
PointDocument load_point_document(std::istream& in);

Json to_json(const Mat& m);
Json to_json(const Vec& v);
Mat mat_from_json(const Json& j);

// Serializer with full 17-significant-digit decimal floats so that every
// emitted value re-parses bit-for-bit.
std::string dump_document(const Json& doc);
void write_document(std::ostream& out, const Json& doc);

}  // namespace sjg
