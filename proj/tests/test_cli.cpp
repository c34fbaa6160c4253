#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "support.hpp"

using grapes::testing::data_path;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = grapes::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string golden(const std::string& name) {
  std::ifstream in(std::string(GRAPES_TEST_GOLDEN) + "/" + name);
  REQUIRE(in);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string grape(const std::string& name) { return data_path(name + ".grape"); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("hilbert golden output") {
    CHECK(run({"hilbert", grape("dumbbell")}).out == golden("hilbert_dumbbell.txt"));
    CHECK(run({"hilbert", grape("circle")}).out == golden("hilbert_circle.txt"));
    CHECK(run({"hilbert", grape("elem_0_3")}).out == golden("hilbert_elem_0_3.txt"));
    Result j = run({"hilbert", "--json", grape("circle")});
    CHECK(j.code == grapes::cli::kOk);
    auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["residual"][0] == nlohmann::json::array({1, 0, -1}));
  }

  TEST_CASE("betti and enumerate golden output") {
    CHECK(run({"betti", "--kmax", "3", grape("dumbbell")}).out == golden("betti_dumbbell.txt"));
    CHECK(run({"enumerate", "-i", "2", "-k", "2", grape("dumbbell")}).out == golden("enumerate_dumbbell.txt"));
    CHECK(run({"enumerate", "-i", "1", "-j", "1", "--count-only", grape("dumbbell")}).out == "2\n");
  }

  TEST_CASE("betti agrees between fields") {
    Result q = run({"betti", "--kmax", "3", grape("random_1")});
    Result p = run({"betti", "--kmax", "3", "--field", "p:1000000007", "--threads", "2", grape("random_1")});
    CHECK(q.code == 0);
    CHECK(q.out == p.out);
  }

  TEST_CASE("verify") {
    Result r = run({"verify", "--kmax", "5", "--basis-kmax", "4", grape("dumbbell")});
    CHECK(r.code == grapes::cli::kOk);
    CHECK(r.out.find("summary oracle 18/18") != std::string::npos);
    CHECK(r.out.ends_with("PASS\n"));
    Result capped = run({"verify", "--kmax", "5", "--basis-kmax", "5", "--cap", "3", grape("dumbbell")});
    CHECK(capped.code == grapes::cli::kResourceLimit);
  }

  TEST_CASE("cycles") {
    Result r = run({"cycles", "-i", "1", "-k", "2", grape("elem_0_3")});
    CHECK(r.code == 0);
    CHECK(r.out.find("count=1 rank=1 betti=1 equal=true") != std::string::npos);
  }

  TEST_CASE("recover") {
    Result a = run({"recover", data_path("recover_dumbbell.poly")});
    CHECK(a.code == 0);
    CHECK(a.out == "{(1,1) x 2}\n");
    CHECK(run({"recover", data_path("recover_mixed.poly")}).out == "{(1,1) x 1, (0,3) x 1}\n");
    CHECK(run({"recover", data_path("recover_bad.poly")}).code == grapes::cli::kInverseFailed);
  }

  TEST_CASE("series") {
    Result u = run({"series", "--kmax", "4", "--union", grape("interval"), grape("interval")});
    CHECK(u.out == "P0 = C(k,1) + 1\n");
    Result b = run({"series", "--kmax", "3", "--bridge", grape("elem_1_1"), grape("elem_1_1")});
    CHECK(b.out == golden("hilbert_dumbbell.txt"));
  }

  TEST_CASE("input errors") {
    CHECK(run({"hilbert", data_path("missing.grape")}).code == grapes::cli::kInputError);
    CHECK(run({"betti", "--field", "p:100", grape("dumbbell")}).code == grapes::cli::kInputError);
    CHECK(run({"nonsense"}).code == grapes::cli::kInputError);
    CHECK(run({"enumerate", "-i", "1", "-k", "1", "-j", "1", grape("dumbbell")}).code == grapes::cli::kInputError);
  }

  TEST_CASE("corpus mode prints a header per file") {
    Result r = run({"hilbert", "--corpus", GRAPES_TEST_DATA});
    CHECK(r.code == 0);
    CHECK(r.out.find("== dumbbell.grape ==") != std::string::npos);
    CHECK(r.out.find("== paper_example.grape ==") != std::string::npos);
  }
}
