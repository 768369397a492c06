#include <gtest/gtest.h>

#include "gsprk/errors.hpp"
#include "gsprk/verify.hpp"

using namespace gsprk;

namespace {

void expect_all_pass(const std::string& scope) {
  const auto checks = run_verification(scope);
  EXPECT_FALSE(checks.empty());
  for (const auto& c : checks) {
    EXPECT_TRUE(c.passed) << c.suite << "/" << c.name << " measured " << c.measured << " "
                          << c.detail;
  }
}

}  // namespace

TEST(Verify, Tableaux) { expect_all_pass("tableaux"); }
TEST(Verify, Symplecticity) { expect_all_pass("symplecticity"); }
TEST(Verify, Equivalence) { expect_all_pass("equivalence"); }
TEST(Verify, Noether) { expect_all_pass("noether"); }
TEST(Verify, Generating) { expect_all_pass("generating"); }
TEST(Verify, HamiltonJacobi) { expect_all_pass("hj"); }

TEST(Verify, AllCoversEverySuite) {
  const auto checks = run_verification("all");
  for (const auto& scope : verify_scopes()) {
    if (scope == "all") continue;
    bool found = false;
    for (const auto& c : checks) found = found || c.suite == scope;
    EXPECT_TRUE(found) << scope;
  }
}

TEST(Verify, UnknownScope) { EXPECT_THROW(run_verification("energy"), InvalidSpecError); }

TEST(Verify, RenderMarksFailures) {
  std::vector<CheckResult> checks = {{"s", "ok", 1e-15, 1e-12, true, {}},
                                     {"s", "bad", 1.0, 1e-12, false, "boom"}};
  const std::string text = render_checks(checks);
  EXPECT_NE(text.find("PASS s/ok"), std::string::npos);
  EXPECT_NE(text.find("FAIL s/bad"), std::string::npos);
  EXPECT_NE(text.find("error=\"boom\""), std::string::npos);
  EXPECT_NE(text.find("1/2 checks passed"), std::string::npos);
}
