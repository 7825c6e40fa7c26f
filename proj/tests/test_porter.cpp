#include <doctest.h>

#include <fstream>
#include <string>

#include "ctxabuse/porter.hpp"

using namespace ctxabuse;

// The voc/output pair is the published test vocabulary distributed with
// the reference implementation (23,531 words).
TEST_CASE("porter_stem agrees with the published test vocabulary") {
  std::ifstream voc(std::string(CTXABUSE_TEST_DATA_DIR) + "/porter/voc.txt");
  std::ifstream ref(std::string(CTXABUSE_TEST_DATA_DIR) + "/porter/output.txt");
  REQUIRE(voc.good());
  REQUIRE(ref.good());
  std::string word, expected;
  long n = 0, mismatches = 0;
  while (std::getline(voc, word) && std::getline(ref, expected)) {
    ++n;
    if (porter_stem(word) != expected) {
      ++mismatches;
      if (mismatches <= 5)
        MESSAGE(word, " -> ", porter_stem(word), " (expected ", expected, ")");
    }
  }
  CHECK(n == 23531);
  CHECK(mismatches == 0);
}

TEST_CASE("porter_stem leaves short and non-lowercase-alpha input unchanged") {
  CHECK(porter_stem("") == "");
  CHECK(porter_stem("a") == "a");
  CHECK(porter_stem("as") == "as");
  CHECK(porter_stem("Dog") == "Dog");
  CHECK(porter_stem("caf\xC3\xA9") == "caf\xC3\xA9");
}
