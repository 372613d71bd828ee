#include "sjg/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace sjg {

namespace {

Vec vec_from_array(const Json& j, const std::string& field, int expect) {
    if (!j.is_array()) throw ValidationError("field '" + field + "' must be an array");
    if (expect >= 0 && static_cast<int>(j.size()) != expect)
        throw ValidationError("field '" + field + "' must have length " + std::to_string(expect));
    Vec v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) throw ValidationError("field '" + field + "' must be numeric");
        v[static_cast<int>(i)] = j[i].get<double>();
    }
    if (!v.allFinite()) throw ValidationError("field '" + field + "' has non-finite entries");
    return v;
}

SymMat sym_from_packed(const Vec& packed, int n, const std::string& field) {
    if (packed.size() != n * (n + 1) / 2)
        throw ValidationError("field '" + field + "' must pack the upper triangle, length n(n+1)/2");
    SymMat s(n);
    s.packed() = packed;
    return s;
}

}  // namespace

PointDocument parse_point_document(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("document is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("document must be a JSON object");
    if (!j.contains("n") || !j["n"].is_number_integer())
        throw ValidationError("field 'n' must be a positive integer");
    const int n = j["n"].get<int>();
    if (n < 1 || n > 16) throw ValidationError("field 'n' must lie in [1, 16]");

    PointDocument doc;
    doc.point.base.x = sym_from_packed(vec_from_array(j.at("x"), "x", -1), n, "x");
    doc.point.base.y = sym_from_packed(vec_from_array(j.at("y"), "y", -1), n, "y");
    doc.point.p = vec_from_array(j.at("p"), "p", n).transpose();
    doc.point.q = vec_from_array(j.at("q"), "q", n).transpose();
    if (j.contains("kappa")) {
        if (!j["kappa"].is_number()) throw ValidationError("field 'kappa' must be numeric");
        doc.point.kappa = j["kappa"].get<double>();
    }
    if (j.contains("params")) {
        const Json& p = j["params"];
        if (!p.is_object()) throw ValidationError("field 'params' must be an object");
        if (p.contains("alpha")) doc.params.alpha = p["alpha"].get<double>();
        if (p.contains("gamma")) doc.params.gamma = p["gamma"].get<double>();
        if (p.contains("delta")) doc.params.delta = p["delta"].get<double>();
    }
    validate(doc.params);
    validate(doc.point);
    if (!is_positive_definite(doc.point.base.y.dense()))
        throw ValidationError("y is not positive definite");
    if (j.contains("velocity")) doc.velocity = vec_from_array(j["velocity"], "velocity", -1);
    return doc;
}

PointDocument load_point_document(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_point_document(ss.str());
}

Json to_json(const Mat& m) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json to_json(const Vec& v) {
    Json arr = Json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Mat mat_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) throw ValidationError("matrix field must be a 2-D array");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    Mat m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j[i].size()) != cols)
            throw ValidationError("matrix rows have inconsistent lengths");
        for (int c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
    }
    return m;
}

namespace {

void append_number(std::string& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

void append_json(std::string& out, const Json& j, int indent) {
    const std::string pad(indent, ' ');
    const std::string pad2(indent + 2, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) { out += "{}"; return; }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad2 + Json(it.key()).dump() + ": ";
                append_json(out, it.value(), indent + 2);
            }
            out += "\n" + pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) { out += "[]"; return; }
            const bool flat = std::all_of(j.begin(), j.end(),
                                          [](const Json& e) { return e.is_number() || e.is_string(); });
            if (flat) {
                out += "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) out += ", ";
                    append_json(out, j[i], indent);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ",\n";
                out += pad2;
                append_json(out, j[i], indent + 2);
            }
            out += "\n" + pad + "]";
            return;
        }
        case Json::value_t::number_float:
            append_number(out, j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

}  // namespace

std::string dump_document(const Json& doc) {
    std::string out;
    append_json(out, doc, 0);
    out += "\n";
    return out;
}

void write_document(std::ostream& out, const Json& doc) { out << dump_document(doc); }

}  // namespace sjg
