#include "json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace grassgeo::cli {

namespace {

void write(std::ostringstream& os, const OrderedJson& v, int indent, int depth) {
    const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
    const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
    const char* nl = indent > 0 ? "\n" : "";
    switch (v.type()) {
        case OrderedJson::value_t::object: {
            if (v.empty()) {
                os << "{}";
                return;
            }
            os << '{' << nl;
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) os << ',' << nl;
                first = false;
                os << pad << OrderedJson(it.key()).dump() << (indent > 0 ? ": " : ":");
                write(os, it.value(), indent, depth + 1);
            }
            os << nl << close_pad << '}';
            return;
        }
        case OrderedJson::value_t::array: {
            if (v.empty()) {
                os << "[]";
                return;
            }
            // Arrays of scalars stay on one line; [re, im] pairs and index
            // lists read better that way.
            const bool flat = std::all_of(v.begin(), v.end(), [](const OrderedJson& e) { return e.is_primitive(); });
            if (flat || indent == 0) {
                os << '[';
                for (std::size_t i = 0; i < v.size(); ++i) {
                    if (i) os << (indent > 0 ? ", " : ",");
                    write(os, v[i], 0, 0);
                }
                os << ']';
                return;
            }
            os << '[' << nl;
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) os << ',' << nl;
                os << pad;
                write(os, v[i], indent, depth + 1);
            }
            os << nl << close_pad << ']';
            return;
        }
        case OrderedJson::value_t::number_float: {
            const double x = v.get<double>();
            os << (std::isfinite(x) ? format_double(x) : "null");
            return;
        }
        default:
            os << v.dump();
    }
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        // e.byte is 1-based and points one past the last byte read.
        const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        int line = 1, column = 1;
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        // Keep only the reason; the position is restated in our own terms.
        std::string reason = e.what();
        if (const auto pos = reason.find(": ", reason.find("parse error")); pos != std::string::npos) {
            reason = reason.substr(pos + 2);
        }
        std::ostringstream os;
        os << "malformed JSON at line " << line << ", column " << column << ": " << reason;
        throw UsageError(os.str(), line, column);
    }
}

ComplexMatrix matrix_from_json(const Json& doc, const std::string& what) {
    if (!doc.is_object() || !doc.contains("rows") || !doc.contains("cols") || !doc.contains("data")) {
        throw UsageError(what + ": expected a matrix document {\"rows\", \"cols\", \"data\"}");
    }
    if (!doc["rows"].is_number_integer() || !doc["cols"].is_number_integer() || !doc["data"].is_array()) {
        throw UsageError(what + ": rows and cols must be integers and data an array");
    }
    const long rows = doc["rows"].get<long>();
    const long cols = doc["cols"].get<long>();
    const Json& data = doc["data"];
    if (rows < 1 || cols < 1 || static_cast<long>(data.size()) != rows * cols) {
        throw UsageError(what + ": data must hold rows * cols entries");
    }
    ComplexMatrix M(rows, cols);
    for (long k = 0; k < rows * cols; ++k) {
        const Json& e = data[static_cast<std::size_t>(k)];
        double re = 0, im = 0;
        if (e.is_number()) {
            re = e.get<double>();
        } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
            re = e[0].get<double>();
            im = e[1].get<double>();
        } else {
            throw UsageError(what + ": each entry must be [re, im] or a real number");
        }
        if (!std::isfinite(re) || !std::isfinite(im)) throw UsageError(what + ": entries must be finite");
        M(k / cols, k % cols) = Complex(re, im);
    }
    return M;
}

OrderedJson matrix_to_json(const ComplexMatrix& M) {
    OrderedJson data = OrderedJson::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) data.push_back({M(i, j).real(), M(i, j).imag()});
    }
    OrderedJson doc;
    doc["rows"] = M.rows();
    doc["cols"] = M.cols();
    doc["data"] = std::move(data);
    return doc;
}

ComplexMatrix matrix_field(const Json& doc, const std::string& key, bool bare_ok) {
    if (doc.is_object() && doc.contains(key)) return matrix_from_json(doc[key], key);
    if (bare_ok && doc.is_object() && doc.contains("rows")) return matrix_from_json(doc, key);
    throw UsageError("input is missing the matrix field \"" + key + "\"");
}

std::string dump(const OrderedJson& value, int indent) {
    std::ostringstream os;
    write(os, value, indent, 0);
    return os.str();
}

}  // namespace grassgeo::cli
