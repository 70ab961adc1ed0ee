#include "canonical_json.hpp"

#include <cmath>
#include <cstdio>

namespace bertini::cli {

namespace {

void dump(const nlohmann::json& j, std::string& out, int depth) {
    const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
    switch (j.type()) {
    case nlohmann::json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad + nlohmann::json(it.key()).dump() + ": ";
            dump(it.value(), out, depth + 1);
        }
        out += "\n" + close + "}";
        return;
    }
    case nlohmann::json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out += ",\n";
            out += pad;
            dump(j[i], out, depth + 1);
        }
        out += "\n" + close + "]";
        return;
    }
    case nlohmann::json::value_t::number_float: {
        const double v = j.get<double>();
        if (!std::isfinite(v)) {
            out += "null";
            return;
        }
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", v == 0 ? 0.0 : v);
        out += buf;
        return;
    }
    default:
        out += j.dump();
    }
}

}  // namespace

std::string canonical_dump(const nlohmann::json& j) {
    std::string out;
    dump(j, out, 0);
    out += '\n';
    return out;
}

}  // namespace bertini::cli
