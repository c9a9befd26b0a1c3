#include "selcalc/cli.hpp"

#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace selcalc;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class Files {
 public:
  Files() : dir_(fs::temp_directory_path() / ("selcalc-cli-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)))) {
    fs::create_directories(dir_);
  }
  ~Files() { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

 private:
  fs::path dir_;
};

const char* kE2 = "mode prob;\n(1 . tt) +[1/2] ((2 . ff) +[2/5] (3 . tt))\n";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("evaluation") {
    Files f;
    std::string ex1 = f.write("ex1.sel", "(5 . tt) or (6 . ff)\n");
    Run r = run({"eval", "--semantics", "selection", ex1});
    CHECK(r.code == kExitOk);
    CHECK(r.out == "reward 6, value ff\n");
    CHECK(run({"eval", ex1}).out == "reward 6, value ff\n");
    CHECK(run({"eval", "--semantics", "ordinary", ex1}).out == "5 . tt or 6 . ff\n");
    CHECK(run({"eval", "--semantics", "denotational", ex1}).out == "reward 6, value ff\n");
    CHECK(run({"eval", "--oracle", ex1}).out == "reward 6, value ff\n");

    std::string gamma = f.write("gamma.json", R"({"tt":"2"})");
    CHECK(run({"eval", "--semantics", "denotational", "--gamma", gamma, ex1}).out == "reward 5, value tt\n");

    std::string e2 = f.write("e2.sel", kE2);
    CHECK(run({"eval", e2}).out ==
          "1/2: reward 1, value tt\n1/5: reward 2, value ff\n3/10: reward 3, value tt\nexpected reward 9/5\n");
    CHECK(run({"eval", "--semantics", "observe", "--monad", "T3", e2}).out == "<4/5 tt + 1/5 ff, 9/5>\n");
    CHECK(run({"eval", "--semantics", "observe", "--monad", "T2", e2}).out == "<4/5 tt + 1/5 ff, {tt -> 7/4, ff -> 2}>\n");
  }

  TEST_CASE("json output is versioned") {
    Files f;
    std::string ex1 = f.write("ex1.sel", "(5 . tt) or (6 . ff)\n");
    Run r = run({"--json", "eval", ex1});
    REQUIRE(r.code == kExitOk);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["version"] == 1);
    CHECK(j["outcome"][0]["reward"] == "6");
    CHECK(j["outcome"][0]["value"] == "ff");

    auto p = nlohmann::json::parse(run({"--json", "pure", ex1}).out);
    CHECK(p["pure"] == false);
    CHECK(p["version"] == 1);
  }

  TEST_CASE("decisions and exit codes") {
    Files f;
    std::string ex1 = f.write("ex1.sel", "(5 . tt) or (6 . ff)\n");
    std::string swapped = f.write("swapped.sel", "(6 . ff) or (5 . tt)\n");
    std::string absorbed = f.write("absorbed.sel", "(5 . tt) or (6 . ff) or (4 . tt)\n");
    std::string pure = f.write("pure.sel", "0 . tt or (-1) . tt\n");

    Run impure = run({"pure", ex1});
    CHECK(impure.code == kExitNegative);
    CHECK(impure.out.rfind("impure", 0) == 0);
    Run is_pure = run({"pure", pure});
    CHECK(is_pure.code == kExitOk);
    CHECK(is_pure.out == "pure tt\n");

    CHECK(run({"equiv", ex1, absorbed}).code == kExitOk);
    Run diff = run({"equiv", ex1, swapped});
    CHECK(diff.code == kExitNegative);
    CHECK(diff.out.find("[-]") != std::string::npos);
    CHECK(run({"distinguish", ex1, swapped}).code == kExitOk);
    CHECK(run({"distinguish", ex1, absorbed}).code == kExitNegative);

    CHECK(run({"canon", absorbed}).out == "5 . tt or 6 . ff\n");

    std::string e2 = f.write("e2.sel", kE2);
    std::string e2_flat = f.write("e2flat.sel", "mode prob;\n(1 . tt) +[1/2] ((2 . ff) +[2/5] (3 . tt)) or (1 . tt +[1/2] (2 . ff +[2/5] 3 . tt))\n");
    CHECK(run({"equiv", "--monad", "T1", e2, e2_flat}).code == kExitOk);
    CHECK(run({"pure", "--monad", "T3", e2}).code == kExitNegative);
    std::string counter = f.write("counter.sel", "mode prob;\nff or ((-1) . (tt +[1/2] ff))\n");
    Run c = run({"--json", "pure", "--monad", "T2", counter});
    CHECK(c.code == kExitNegative);
    auto j = nlohmann::json::parse(c.out);
    CHECK(j["witness"]["tt"] == "4");
  }

  TEST_CASE("usage errors") {
    Files f;
    std::string ex1 = f.write("ex1.sel", "(5 . tt) or (6 . ff)\n");
    std::string bad = f.write("bad.sel", "tt or\n");
    std::string ill = f.write("ill.sel", "tt . tt\n");
    std::string prob = f.write("prob.sel", "mode prob;\ntt +[1/2] ff\n");
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"eval", "missing.sel"}).code == kExitUsage);
    Run syntax = run({"eval", bad});
    CHECK(syntax.code == kExitUsage);
    CHECK(syntax.err.find("2:1") != std::string::npos);
    CHECK(run({"eval", ill}).code == kExitUsage);
    CHECK(run({"eval", "--monad", "T1", ex1}).code == kExitUsage);
    CHECK(run({"eval", "--semantics", "nonsense", ex1}).code == kExitUsage);
    CHECK(run({"eval", "--mode", "rewards", prob}).code == kExitUsage);
    CHECK(run({"--structure", "nonsense", "eval", ex1}).code == kExitUsage);
    CHECK(run({"check", "--suite", "no-such-suite"}).code == kExitUsage);
  }

  TEST_CASE("generation") {
    Run a = run({"gen", "--seed", "3", "--count", "5", "--size", "12"});
    Run b = run({"gen", "--seed", "3", "--count", "5", "--size", "12"});
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
    CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 5);
    Run p = run({"gen", "--mode", "prob", "--type", "Bool * Bool", "--count", "3"});
    CHECK(p.code == kExitOk);
  }

  TEST_CASE("suites") {
    Run list = run({"check", "--list"});
    CHECK(list.code == kExitOk);
    CHECK(list.out.find("mr-fullab") != std::string::npos);
    Run vacuous = run({"check", "--suite", "genax-or", "--cases", "0"});
    CHECK(vacuous.code == kExitOk);
    CHECK(vacuous.out.find("0/0 OK") != std::string::npos);
    CHECK(vacuous.err.find("warning") != std::string::npos);
    Run small = run({"check", "--suite", "adequacy", "--mode", "rewards", "--cases", "20"});
    CHECK(small.code == kExitOk);
    CHECK(small.out.find("adequacy-rewards: 20/20 OK") != std::string::npos);
  }
}
