#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Deterministic report serialization: insertion-ordered JSON with doubles
// printed at 17 significant digits, so identical inputs always produce
// byte-identical files.

namespace maqa::cli {

class JsonValue {
public:
    static JsonValue object();
    static JsonValue array();
    static JsonValue str(std::string s);
    static JsonValue num(double v);
    static JsonValue integer(std::int64_t v);
    static JsonValue uinteger(std::uint64_t v);
    static JsonValue boolean(bool v);

    JsonValue& set(const std::string& key, JsonValue v);  // object only
    JsonValue& push(JsonValue v);                         // array only

    std::string dump(int indent = 2) const;

private:
    enum class Kind { Object, Array, String, Double, Int, UInt, Bool };
    Kind kind_ = Kind::Object;
    std::string string_;
    double double_ = 0.0;
    std::int64_t int_ = 0;
    std::uint64_t uint_ = 0;
    bool bool_ = false;
    std::vector<std::pair<std::string, JsonValue>> members_;
    std::vector<JsonValue> elements_;

    void write(std::string& out, int indent, int depth) const;
};

/// %.17g with a guaranteed numeric JSON token (adds ".0" to bare integers).
std::string format_double(double v);

std::string escape_json(std::string_view s);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace maqa::cli
