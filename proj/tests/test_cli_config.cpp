#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "divdiv/study.hpp"

using namespace divdiv;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("divdiv_test_" + name);
  fs::remove_all(p);
  return p;
}
}  // namespace

TEST(StudyConfig, ParsesKeyValueTextAndOverrides) {
  std::istringstream in(
      "# comment\n"
      "l = 2\n"
      "k=3\n"
      "levels = 2, 4 ,8   # trailing comment\n"
      "hybrid = yes\n"
      "postprocess = off\n"
      "seed = 42\n");
  StudyConfig c;
  c.read(in);
  EXPECT_EQ(c.l, 2);
  EXPECT_EQ(c.k, 3);
  EXPECT_EQ(c.meshes, (std::vector<std::string>{"square:2", "square:4", "square:8"}));
  EXPECT_TRUE(c.hybrid);
  EXPECT_FALSE(c.postprocess);
  EXPECT_EQ(c.seed, 42u);
  c.set("l=3");
  c.set("meshes", "square:3,mesh.txt");
  EXPECT_EQ(c.l, 3);
  EXPECT_EQ(c.meshes.back(), "mesh.txt");
}

TEST(StudyConfig, RejectsInvalidSettings) {
  StudyConfig c;
  EXPECT_THROW(c.set("bogus", "1"), std::invalid_argument);
  EXPECT_THROW(c.set("hybrid", "maybe"), std::invalid_argument);
  EXPECT_THROW(c.set("l", "3x"), std::invalid_argument);
  EXPECT_THROW(c.set("no equals sign"), std::invalid_argument);
  c.k = 2;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.k = 4;
  c.l = 2;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.l = 4;
  c.meshes = {"square:2"};
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(StudyConfig, WriteReadRoundTrip) {
  StudyConfig a;
  a.l = 4;
  a.k = 4;
  a.hybrid = true;
  a.meshes = {"square:1", "square:2"};
  std::stringstream ss;
  a.write(ss);
  StudyConfig b;
  b.read(ss);
  EXPECT_EQ(b.l, 4);
  EXPECT_EQ(b.meshes, a.meshes);
  EXPECT_TRUE(b.hybrid);
}

TEST(RunStudy, WritesArtifactsWithOneRateRowPerPair) {
  StudyConfig c;
  c.set("levels", "2,4,8");
  c.hybrid = true;
  c.out_dir = scratch_dir("study").string();
  std::ostringstream log;
  EXPECT_EQ(run_study(c, log), 0) << log.str();
  const std::string errors = slurp(fs::path(c.out_dir) / "errors.csv");
  const std::string rates = slurp(fs::path(c.out_dir) / "rates.csv");
  const std::string manifest = slurp(fs::path(c.out_dir) / "manifest.txt");
  EXPECT_EQ(count_lines(errors), 4);
  EXPECT_EQ(count_lines(rates), 3);
  EXPECT_EQ(errors.substr(0, errors.find('\n')),
            "mesh,h,dofs,err_sigma_L2,err_divdiv,err_u_L2,err_Qhu_L2,err_Qhu_2h,err_ustar_2h,hybrid_dev_sigma,hybrid_dev_u");
  EXPECT_NE(manifest.find("seed = 1"), std::string::npos);
  EXPECT_NE(manifest.find(DIVDIV_VERSION), std::string::npos);
  EXPECT_NE(manifest.find("status = pass"), std::string::npos);

  // deterministic output for an identical config
  StudyConfig c2 = c;
  c2.out_dir = scratch_dir("study2").string();
  EXPECT_EQ(run_study(c2, log), 0);
  EXPECT_EQ(slurp(fs::path(c2.out_dir) / "errors.csv"), errors);
  EXPECT_EQ(slurp(fs::path(c2.out_dir) / "rates.csv"), rates);
}

TEST(RunStudy, ComplexChecksAreReported) {
  StudyConfig c;
  c.set("levels", "1,2");
  c.check_complexes = true;
  c.postprocess = false;
  c.out_dir = scratch_dir("complexes").string();
  std::ostringstream log;
  EXPECT_EQ(run_study(c, log), 0) << log.str();
  EXPECT_NE(slurp(fs::path(c.out_dir) / "complexes.txt").find("global complex"), std::string::npos);
}

TEST(ElementCard, ListsCounts) {
  std::ostringstream out;
  describe_element(out, 3, 3, 3);
  const std::string s = out.str();
  EXPECT_NE(s.find("dimension 30"), std::string::npos);
  EXPECT_NE(s.find("per edge:   5"), std::string::npos);
  EXPECT_NE(s.find("= 30"), std::string::npos);
}
