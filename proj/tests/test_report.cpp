// Flat key-value reports: the three serializations mirror each other.
#include "doctest.h"

#include "ontolab/report.hpp"

#include "json.hpp"

#include <string>

using namespace ontolab;

TEST_CASE("format_double uses fixed 12-significant-digit formatting") {
    CHECK(format_double(0.25) == "0.25");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1e-6) == "1e-06");
    CHECK(format_double(0.42360654239698947) == "0.423606542397");
    CHECK(format_double(-1.0) == "-1");
}

TEST_CASE("format_vector is comma-free") {
    const std::string s = format_vector(BlochVector{0.5, -0.25, 1.0});
    CHECK(s == "0.5 -0.25 1");
    CHECK(s.find(',') == std::string::npos);
}

TEST_CASE("text output lists keys in insertion order") {
    Report r;
    r.add("command", "verify");
    r.add("pairs", 100);
    r.add("max_deviation", 1e-6);
    r.add("pass", true);
    CHECK(r.to_text() ==
          "command = verify\n"
          "pairs = 100\n"
          "max_deviation = 1e-06\n"
          "pass = true\n");
}

TEST_CASE("csv output mirrors the text rows") {
    Report r;
    r.add("model", "ks");
    r.add("residual", 0.414213562373);
    r.add("ok", false);
    CHECK(r.to_csv() ==
          "key,value\n"
          "model,ks\n"
          "residual,0.414213562373\n"
          "ok,false\n");
}

TEST_CASE("json output carries the same keys with native types") {
    Report r;
    r.add("model", "bb");
    r.add("pairs", 100);
    r.add("deviation", 0.25);
    r.add("pass", true);
    r.add("axis", BlochVector{0, 0, 1});

    const auto parsed = nlohmann::json::parse(r.to_json());
    CHECK(parsed["model"] == "bb");
    CHECK(parsed["pairs"] == 100);
    CHECK(parsed["deviation"] == 0.25);
    CHECK(parsed["pass"] == true);
    CHECK(parsed["axis"] == "0 0 1");
    CHECK(parsed.size() == 5);
}

TEST_CASE("render dispatches on the format name") {
    Report r;
    r.add("a", 1);
    CHECK(r.render("text") == r.to_text());
    CHECK(r.render("json") == r.to_json());
    CHECK(r.render("csv") == r.to_csv());
    CHECK_THROWS_AS(r.render("xml"), std::invalid_argument);
}

TEST_CASE("repeated rendering emits identical bytes") {
    Report r;
    r.add("value", 0.1 + 0.2);
    r.add("vec", BlochVector{1.0 / 3.0, 2.0 / 3.0, -1});
    CHECK(r.to_text() == r.to_text());
    CHECK(r.to_json() == r.to_json());
}
