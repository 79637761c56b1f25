#include "maqa/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace maqa::cli {

JsonValue JsonValue::object() {
    JsonValue v;
    v.kind_ = Kind::Object;
    return v;
}

JsonValue JsonValue::array() {
    JsonValue v;
    v.kind_ = Kind::Array;
    return v;
}

JsonValue JsonValue::str(std::string s) {
    JsonValue v;
    v.kind_ = Kind::String;
    v.string_ = std::move(s);
    return v;
}

JsonValue JsonValue::num(double value) {
    if (!std::isfinite(value))
        throw std::invalid_argument("reports may only contain finite numbers");
    JsonValue v;
    v.kind_ = Kind::Double;
    v.double_ = value;
    return v;
}

JsonValue JsonValue::integer(std::int64_t value) {
    JsonValue v;
    v.kind_ = Kind::Int;
    v.int_ = value;
    return v;
}

JsonValue JsonValue::uinteger(std::uint64_t value) {
    JsonValue v;
    v.kind_ = Kind::UInt;
    v.uint_ = value;
    return v;
}

JsonValue JsonValue::boolean(bool value) {
    JsonValue v;
    v.kind_ = Kind::Bool;
    v.bool_ = value;
    return v;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
    if (kind_ != Kind::Object) throw std::logic_error("set() on a non-object");
    members_.emplace_back(key, std::move(v));
    return *this;
}

JsonValue& JsonValue::push(JsonValue v) {
    if (kind_ != Kind::Array) throw std::logic_error("push() on a non-array");
    elements_.push_back(std::move(v));
    return *this;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    std::string s(buf);
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

std::string escape_json(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

void JsonValue::write(std::string& out, int indent, int depth) const {
    const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    switch (kind_) {
        case Kind::Object: {
            if (members_.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            for (std::size_t i = 0; i < members_.size(); ++i) {
                out += pad_in + "\"" + escape_json(members_[i].first) + "\": ";
                members_[i].second.write(out, indent, depth + 1);
                if (i + 1 < members_.size()) out += ",";
                out += "\n";
            }
            out += pad + "}";
            return;
        }
        case Kind::Array: {
            if (elements_.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < elements_.size(); ++i) {
                out += pad_in;
                elements_[i].write(out, indent, depth + 1);
                if (i + 1 < elements_.size()) out += ",";
                out += "\n";
            }
            out += pad + "]";
            return;
        }
        case Kind::String: out += "\"" + escape_json(string_) + "\""; return;
        case Kind::Double: out += format_double(double_); return;
        case Kind::Int: out += std::to_string(int_); return;
        case Kind::UInt: out += std::to_string(uint_); return;
        case Kind::Bool: out += bool_ ? "true" : "false"; return;
    }
}

std::string JsonValue::dump(int indent) const {
    std::string out;
    write(out, indent, 0);
    out += "\n";
    return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << contents;
    if (!out) throw std::runtime_error("failed writing " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace maqa::cli
