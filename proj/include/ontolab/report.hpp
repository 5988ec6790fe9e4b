// Flat ordered key-value reports with three serializations (text, json, csv)
// that mirror each other one-to-one. Doubles are formatted with "%.12g"
// everywhere so repeated runs emit identical bytes.
#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ontolab/bloch.hpp"

namespace ontolab {

std::string format_double(double v);            // "%.12g"
std::string format_vector(const BlochVector&);  // "x y z" (no commas: csv-safe)

class Report {
  public:
    using Value = std::variant<std::string, double, long long, bool>;

    void add(const std::string& key, const char* v) { items_.emplace_back(key, std::string(v)); }
    void add(const std::string& key, const std::string& v) { items_.emplace_back(key, v); }
    void add(const std::string& key, double v) { items_.emplace_back(key, v); }
    void add(const std::string& key, long long v) { items_.emplace_back(key, v); }
    void add(const std::string& key, int v) { items_.emplace_back(key, static_cast<long long>(v)); }
    void add(const std::string& key, bool v) { items_.emplace_back(key, v); }
    void add(const std::string& key, const BlochVector& v) {
        items_.emplace_back(key, format_vector(v));
    }

    const std::vector<std::pair<std::string, Value>>& items() const { return items_; }

    std::string to_text() const;  // "key = value" lines
    std::string to_json() const;  // one flat object, keys in insertion order
    std::string to_csv() const;   // "key,value" rows with a header

    std::string render(const std::string& format) const;  // "text" | "json" | "csv"

  private:
    std::vector<std::pair<std::string, Value>> items_;
};

}  // namespace ontolab
