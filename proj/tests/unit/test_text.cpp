#include "doctest.h"

#include "sparsetag/text.hpp"
#include "synthetic.hpp"

using namespace sparsetag;

TEST_CASE("whitespace splitting and trimming") {
  const auto parts = split_whitespace("  a\tbb  c \n");
  REQUIRE(parts.size() == 3);
  CHECK(parts[0] == "a");
  CHECK(parts[2] == "c");
  CHECK(trim("  x y \t") == "x y");
  CHECK(split_on("a,,b", ',').size() == 3);
}

TEST_CASE("numeric parsing rejects trailing junk") {
  double d = 0;
  CHECK(parse_double("1.5e-3", d));
  CHECK(d == doctest::Approx(1.5e-3));
  CHECK_FALSE(parse_double("1.5x", d));
  CHECK_FALSE(parse_double("", d));
  long l = 0;
  CHECK(parse_long("-42", l));
  CHECK(l == -42);
  CHECK_FALSE(parse_long("4.2", l));
}

TEST_CASE("format_exact round-trips doubles") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.125, 0.0}) {
    double back = 0;
    REQUIRE(parse_double(format_exact(v), back));
    CHECK(back == v);
  }
  CHECK(format_sig(0.123456789, 6) == "0.123457");
}

TEST_CASE("utf8 codepoints and sanitizing") {
  const auto cps = utf8_codepoints("a\xc3\xa9z");
  REQUIRE(cps.size() == 3);
  CHECK(cps[1] == "\xc3\xa9");
  CHECK(ascii_lower("AbC") == "abc");
  CHECK(sanitize_field("a b\tc") == "a_b_c");
}

TEST_CASE("atomic write replaces file content") {
  testing::TempDir dir;
  const auto p = dir.file("out.txt");
  write_atomic(p, "one\n");
  write_atomic(p, "two\r\nthree\n");
  const auto lines = read_lines(p);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "two");
  CHECK_FALSE(std::filesystem::exists(dir.file("out.txt.tmp")));
}
