#include <doctest.h>

#include <json.hpp>

#include "trigfront/acceptance.hpp"

using namespace trigfront;

TEST_CASE("a corrupted closed-form constant fails A1") {
  auto corrupted = [](double alpha) {
    auto cf = closed_form_spreading(alpha);
    cf.c_lin *= 1 + 1e-6;
    return cf;
  };
  auto bad = criterion_a1(corrupted);
  CHECK_FALSE(bad.passed);
  CHECK(criterion_a1().passed);
}

TEST_CASE("report lines and JSON") {
  auto r = criterion_a4();
  auto line = report_line(r);
  CHECK(line.rfind("A4 PASS", 0) == 0);
  CHECK(line.find("measured:") != std::string::npos);
  CHECK(line.find("expected:") != std::string::npos);
  auto j = nlohmann::json::parse(report_json({r}).dump());
  CHECK(j["all_passed"] == true);
  CHECK(j["criteria"][0]["id"] == "A4");
  CHECK_THROWS(run_criterion("A10"));
}
