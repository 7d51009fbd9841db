#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cvinfer/csv_input.hpp"
#include "cvinfer/error.hpp"
#include "cvinfer/fixtures.hpp"
#include "cvinfer/summary.hpp"

using namespace cvinfer;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::InvalidParameter;
}

}  // namespace

TEST_CASE("summarize matches direct moments") {
  const auto s = summarize({{176, 105, 266, 227, 66}});
  CHECK(s.n == 5);
  CHECK(s.mean == doctest::Approx(168.0));
  // sum of squared deviations = 27522
  CHECK(s.sd == doctest::Approx(std::sqrt(27522.0 / 4)).epsilon(1e-14));
  CHECK(s.mean_sq == doctest::Approx((176.0 * 176 + 105 * 105 + 266 * 266 + 227 * 227 + 66 * 66) / 5).epsilon(1e-14));
  CHECK(s.cross(0.0, 0.0) == doctest::Approx(5 * s.mean_sq).epsilon(1e-13));
  CHECK(s.cross(s.mean, s.mean) == doctest::Approx(27522.0).epsilon(1e-13));
}

TEST_CASE("summary from moments agrees with summarize") {
  const auto a = summarize({{1.0, 2.0, 4.0, 7.0}});
  const auto b = summary_from_moments(a.n, a.mean, a.sd);
  CHECK(b.mean_sq == doctest::Approx(a.mean_sq).epsilon(1e-14));
}

TEST_CASE("invalid groups are rejected") {
  CHECK(kind_of([] { summarize({{3.0}}); }) == ErrorKind::TooFewObservations);
  CHECK(kind_of([] { summarize({{3.0, 3.0, 3.0}}); }) == ErrorKind::ZeroVariance);
  CHECK(kind_of([] { Dataset::from_raw({{{-1.0, -2.0, -4.0}}}); }) == ErrorKind::NegativeMeanGroup);
  CHECK(kind_of([] { Dataset(std::vector<SampleSummary>{}); }) == ErrorKind::InvalidParameter);
}

TEST_CASE("hospital fixture") {
  const auto d = fixtures::hospital_dataset();
  CHECK(d.k() == 4);
  CHECK(d.total_n() == 22);
  CHECK(d.has_raw());
  CHECK(d.group(3).mean == doctest::Approx(158.2));
  CHECK(d.group(3).sd * d.group(3).sd == doctest::Approx(9127.5111).epsilon(1e-6));
}

TEST_CASE("blood fixtures carry the published summaries") {
  const auto& wbc = fixtures::blood_column("wbc");
  CHECK(wbc.n[0] == 65);
  CHECK(wbc.n[1] == 73);
  CHECK(wbc.mean[0] == 17.68);
  CHECK(wbc.mean[1] == 18.93);
  CHECK(wbc.sd[0] == 1.067);
  CHECK(wbc.sd[1] == 1.211);
  CHECK(fixtures::blood_columns().size() == 5);
}

TEST_CASE("CSV round trip through the fixtures") {
  std::istringstream raw(fixtures::hospital_csv());
  const auto d = read_dataset_csv(raw);
  CHECK(d.has_raw());
  CHECK(d.total_n() == 22);
  CHECK(d.labels().front() == "hospital1");

  std::istringstream wide(fixtures::blood_csv("rbc"));
  const auto b = read_dataset_csv(wide);
  CHECK_FALSE(b.has_raw());
  CHECK(b.group(0).n == 65);
  CHECK(b.group(1).sd == 0.0838);
}

TEST_CASE("hospital CSV has one data row per patient") {
  std::istringstream in(fixtures::hospital_csv());
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) rows += !line.empty();
  CHECK(rows == 22);
}

TEST_CASE("malformed CSV names the line") {
  std::istringstream bad("group,value\na,1\na,2\nb,x\n");
  try {
    read_dataset_csv(bad);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }
  std::istringstream wrong_header("grp,val\n");
  CHECK_THROWS_AS(read_dataset_csv(wrong_header), Error);
  std::istringstream forced("group,n,mean,sd\na,5,1,1\n");
  CHECK_THROWS_AS(read_dataset_csv(forced, InputKind::RawLong), Error);
}

TEST_CASE("scaled datasets scale the summaries") {
  const auto d = fixtures::hospital_dataset();
  const std::vector<double> c{2.0, 0.5, 10.0, 3.0};
  const auto s = d.scaled(c);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(s.group(i).mean == doctest::Approx(c[i] * d.group(i).mean).epsilon(1e-14));
    CHECK(s.group(i).sd == doctest::Approx(c[i] * d.group(i).sd).epsilon(1e-14));
  }
}
