#pragma once

#include <json.hpp>

#include <string>
#include <string_view>

#include "mtmorph/errors.hpp"
#include "mtmorph/model.hpp"

namespace mtmorph::detail {

using json = nlohmann::json;

/// Parses JSON text, mapping syntax errors to ParseError with line/column.
json parse_json(std::string_view text, std::string_view what);

/// Pretty serialization used by every file format (two-space indent,
/// sorted keys, trailing newline).
std::string dump(const json& j);

// Schema helpers. `where` is a JSON-pointer-like location for messages.
const json& member(const json& obj, const char* key, std::string_view where);
/// Missing key yields null.
const json* optional_member(const json& obj, const char* key);
std::string as_string(const json& j, std::string_view where);
bool as_bool(const json& j, std::string_view where);
std::int64_t as_int(const json& j, std::string_view where);
void expect_object(const json& j, std::string_view where);
void expect_array(const json& j, std::string_view where);

json value_to_json(const Value& v);
/// Throws ParseError when `j` is not a string, integer or boolean.
Value value_from_json(const json& j, std::string_view where);

}  // namespace mtmorph::detail
