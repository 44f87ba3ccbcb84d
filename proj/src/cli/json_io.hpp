#pragma once

// JSON plumbing for the command-line tool: matrix documents, a serializer
// that writes every float with 17 significant digits, and parse errors that
// carry a line and column.

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "grassgeo/numeric.hpp"

namespace grassgeo::cli {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

/// Bad command line or malformed input; maps to exit status 2.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& message, int line = 0, int column = 0)
        : std::runtime_error(message), line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

/// Parses text as JSON. Syntax errors become UsageError with 1-based line and
/// column of the offending byte.
Json parse_json(const std::string& text);

/// {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major order.
ComplexMatrix matrix_from_json(const Json& doc, const std::string& what);
OrderedJson matrix_to_json(const ComplexMatrix& M);

/// Fetches doc[key] as a matrix document. A bare matrix document is accepted
/// in place of an object when `bare_ok` is set.
ComplexMatrix matrix_field(const Json& doc, const std::string& key, bool bare_ok = false);

/// Serializes with 17 significant digits per float; non-finite values become
/// null. Keys keep insertion order.
std::string dump(const OrderedJson& value, int indent = 2);

/// %.17g formatting shared with the CSV writer.
std::string format_double(double x);

}  // namespace grassgeo::cli
