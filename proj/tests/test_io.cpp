#include "hfp/errors.hpp"
#include "hfp/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace hfp;
namespace fs = std::filesystem;

namespace {

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("hfp_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  fs::path dir_;
};

}  // namespace

TEST(Json, VectorRoundTrip) {
  CVector v(3);
  v << cplx(0.1, -0.2), cplx(1e-17, 3.0), cplx(-5, 0);
  const auto j = io::to_json(v);
  EXPECT_EQ(io::vector_from_json(j), v);
  EXPECT_EQ(io::vector_from_json(io::json{{"amplitudes", j}}), v);
  EXPECT_THROW(io::vector_from_json(io::json::array()), ConfigError);
  EXPECT_THROW(io::vector_from_json(io::json::parse("[[1, 2, 3]]")), ConfigError);
  CMatrix m(2, 2);
  m << 1, cplx(0, 1), 2, 3;
  const auto jm = io::to_json(m);
  EXPECT_DOUBLE_EQ(jm[0][1][1].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(jm[1][0][0].get<double>(), 2.0);
}

TEST(Numbers, FormatRoundTrips) {
  for (double x : {0.1, 1.0 / 3, 5.249791234567891, -1e-300, 0.0041666666666666666}) {
    EXPECT_EQ(std::stod(io::format_double(x)), x);
  }
}

TEST(CsvTable, WidthIsChecked) {
  io::Csv csv({"a", "b"});
  csv.row({"1", "2"});
  EXPECT_EQ(csv.str(), "a,b\n1,2\n");
  EXPECT_THROW(csv.row({"1"}), Error);
}

TEST_F(TempDir, AtomicWriteReplacesContent) {
  io::write_atomic(path("sub/x.txt"), "one");
  io::write_atomic(path("sub/x.txt"), "two");
  std::ifstream in(path("sub/x.txt"));
  std::string s;
  in >> s;
  EXPECT_EQ(s, "two");
  EXPECT_FALSE(fs::exists(path("sub/x.txt.tmp")));
  io::write_json(path("j.json"), io::json{{"k", 1}});
  EXPECT_EQ(io::json::parse(std::ifstream(path("j.json")))["k"], 1);
}

TEST_F(TempDir, ReadsStatesInBothFormats) {
  write("s.json", R"({"amplitudes": [[3, 0], [0, 4]]})");
  const auto a = io::read_state(path("s.json"));
  EXPECT_NEAR(std::abs(a[0] - cplx(0.6, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(a[1] - cplx(0, 0.8)), 0.0, 1e-15);
  write("s.csv", "re,im\n3,0\n0,4\n");
  EXPECT_EQ(io::read_state(path("s.csv")).amplitudes(), a.amplitudes());
  write("bad.csv", "1,0\nx,y\n");
  EXPECT_THROW(io::read_state(path("bad.csv")), ConfigError);
  write("bad.json", "{\"amplitudes\": [[1, 0]");
  EXPECT_THROW(io::read_state(path("bad.json")), ConfigError);
  EXPECT_THROW(io::read_state(path("missing.csv")), ConfigError);
}

TEST_F(TempDir, ReadsStateTables) {
  write("t.csv", "re_0,im_0,re_1,im_1,defect\n1,0,0,0,1e-12\n0,0,0,2,3e-13\n");
  const auto states = io::read_states_csv(path("t.csv"));
  ASSERT_EQ(states.size(), 2u);
  EXPECT_EQ(states[0].dim(), 2);
  EXPECT_NEAR(std::abs(states[1][1] - cplx(0, 1)), 0.0, 1e-15);
  write("bad.csv", "1,0\nfoo\n");
  EXPECT_THROW(io::read_states_csv(path("bad.csv")), ConfigError);
}
