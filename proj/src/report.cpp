#include "ontolab/report.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ontolab {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string format_vector(const BlochVector& v) {
    return format_double(v.x) + " " + format_double(v.y) + " " + format_double(v.z);
}

namespace {

std::string value_text(const Report::Value& v) {
    if (std::holds_alternative<std::string>(v)) return std::get<std::string>(v);
    if (std::holds_alternative<double>(v)) return format_double(std::get<double>(v));
    if (std::holds_alternative<long long>(v)) return std::to_string(std::get<long long>(v));
    return std::get<bool>(v) ? "true" : "false";
}

}  // namespace

std::string Report::to_text() const {
    std::ostringstream out;
    for (const auto& [k, v] : items_) out << k << " = " << value_text(v) << "\n";
    return out.str();
}

std::string Report::to_json() const {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : items_) {
        if (std::holds_alternative<std::string>(v))
            j[k] = std::get<std::string>(v);
        else if (std::holds_alternative<double>(v))
            j[k] = std::get<double>(v);
        else if (std::holds_alternative<long long>(v))
            j[k] = std::get<long long>(v);
        else
            j[k] = std::get<bool>(v);
    }
    return j.dump(2) + "\n";
}

std::string Report::to_csv() const {
    std::ostringstream out;
    out << "key,value\n";
    for (const auto& [k, v] : items_) out << k << "," << value_text(v) << "\n";
    return out.str();
}

std::string Report::render(const std::string& format) const {
    if (format == "text") return to_text();
    if (format == "json") return to_json();
    if (format == "csv") return to_csv();
    throw std::invalid_argument("unknown report format: " + format);
}

}  // namespace ontolab
