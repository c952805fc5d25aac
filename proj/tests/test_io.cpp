#include <gtest/gtest.h>

#include <sstream>

#include "bergman/io.hpp"

using namespace bergman;

TEST(ParseGrid, Geometric) {
  EXPECT_EQ(io::parse_grid("100:3200:x2"), (std::vector<std::uint32_t>{100, 200, 400, 800, 1600, 3200}));
  const auto g = io::parse_grid("200:6400:x1.41421356237");
  EXPECT_EQ(g.size(), 11u);
  EXPECT_EQ(g.front(), 200u);
  EXPECT_EQ(g.back(), 6400u);
  EXPECT_EQ(io::parse_grid("1:4:x1.1"), (std::vector<std::uint32_t>{1, 2, 3, 4}));
}

TEST(ParseGrid, ArithmeticAndLists) {
  EXPECT_EQ(io::parse_grid("0:10:+5"), (std::vector<std::uint32_t>{0, 5, 10}));
  EXPECT_EQ(io::parse_grid("7"), (std::vector<std::uint32_t>{7}));
  EXPECT_EQ(io::parse_grid("1,5,9"), (std::vector<std::uint32_t>{1, 5, 9}));
}

TEST(ParseGrid, Errors) {
  for (const char* bad : {"", "a", "1,,2", "5,3", "10:1:x2", "1:10:x1", "0:10:x2", "1:10:+0", "1:10:*2", "1:10",
                          "1:10:x", "-1:10:+1"})
    EXPECT_THROW(io::parse_grid(bad), usage_error) << bad;
}

TEST(Formats, Digits) {
  EXPECT_EQ(io::format_machine(0.1), "0.10000000000000001");
  EXPECT_EQ(io::format_human(2.0 / 3.0), "0.666667");
}

TEST(TraceOutput, CsvAndJson) {
  const auto trace = diagonal_trace(DomainSpec::polydisc(2), MultiIndex{1, 1}, {1, 2});
  std::ostringstream csv;
  io::write_trace_csv(csv, trace);
  const double v1 = trace.points[0].value;
  const double v2 = trace.points[1].value;
  EXPECT_EQ(csv.str(), "N,value,alpha,domain,kind\n1," + io::format_machine(v1) + ",\"1,1\",\"polydisc:2\",DiagonalSum\n" +
                           "2," + io::format_machine(v2) + ",\"1,1\",\"polydisc:2\",DiagonalSum\n");

  const auto j = io::to_json(trace);
  EXPECT_EQ(j["alpha"], "1,1");
  EXPECT_EQ(j["domain"], "polydisc:2");
  EXPECT_EQ(j["points"][1]["N"], 2);
  // values round-trip exactly through the JSON text
  EXPECT_EQ(io::json::parse(j.dump())["points"][0]["value"].get<double>(), v1);
}

TEST(OracleOutput, CarriesAllFields) {
  const auto e = monte_carlo_c_squared(DomainSpec::disc(), MultiIndex{0}, 20000, 9, ExecOptions{1});
  const auto j = io::to_json(e);
  EXPECT_EQ(j["method"], "MonteCarlo");
  EXPECT_EQ(j["sample_count"], 20000);
  EXPECT_EQ(j["seed"], 9);
  EXPECT_EQ(j["value"].get<double>(), e.value);
  EXPECT_EQ(j["abs_error"].get<double>(), e.abs_error);
}
