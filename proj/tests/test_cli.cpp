#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path out_dir(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / "hillbloch-cli-tests" / name;
    fs::remove_all(d);
    return d;
}

int run(const std::string& args) {
    const std::string cmd = std::string("\"") + HILLBLOCH_CLI + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

}  // namespace

TEST_CASE("cli: usage errors exit with 1") {
    CHECK(run("") == 1);
    CHECK(run("nonsense") == 1);
    CHECK(run("spectrum --bogus 3") == 1);
    CHECK(run("verify -p mathieu --k-min 2 -o " + out_dir("k2").string()) == 1);
    CHECK(run("spectrum -p mathieu --grid 16") == 1);
    CHECK(run("spectrum -p no-such-potential") == 1);
    const fs::path cfg = out_dir("cfg");
    fs::create_directories(cfg);
    std::ofstream(cfg / "c.json") << R"({"lambda_maximum": 3})";
    CHECK(run("spectrum --config " + (cfg / "c.json").string()) == 1);
    CHECK(run("--help") == 0);
}

TEST_CASE("cli: computation errors exit with 2") {
    CHECK(run("spectrum -p mathieu -K 5 --lambda-max 10000 -o " + out_dir("cut").string()) == 2);
}

TEST_CASE("cli: free potential has an empty gap list") {
    const fs::path d = out_dir("free");
    REQUIRE(run("spectrum -p free --lambda-max 300 --grid 64 -o " + d.string()) == 0);
    const json g = load(d / "gaps.json");
    CHECK(g["gap_report"]["gaps"].empty());
    CHECK(fs::exists(d / "bands.csv"));
    CHECK(fs::exists(d / "bands.svg"));
    CHECK(load(d / "census.json")["census"]["vacuous"] == true);
}

TEST_CASE("cli: Mathieu gaps and oracle-checked edges; output is deterministic") {
    const fs::path a = out_dir("mathieu-a"), b = out_dir("mathieu-b");
    const std::string args = "spectrum -p mathieu --lambda-max 200 --grid 64 -o ";
    REQUIRE(run(args + a.string()) == 0);
    REQUIRE(run(args + b.string() + " -j 2") == 0);
    const json g = load(a / "gaps.json");
    CHECK(g["gap_report"]["gaps"].size() >= 2);
    for (const auto& e : g["edge_checks"]) {
        CHECK(e["counts_match"] == true);
        CHECK(e["max_deviation"].get<double>() < 1e-6);
    }
    CHECK(slurp(a / "bands.csv") == slurp(b / "bands.csv"));
    CHECK(slurp(a / "gaps.json") == slurp(b / "gaps.json"));
    CHECK(slurp(a / "bands.svg") == slurp(b / "bands.svg"));
}

TEST_CASE("cli: config file values and flag precedence") {
    const fs::path d = out_dir("precedence");
    fs::create_directories(d);
    std::ofstream(d / "c.json") << R"({"potential": "free", "lambda_max": 150, "grid_size": 64})";
    REQUIRE(run("spectrum --config " + (d / "c.json").string() + " --lambda-max 90 -o " + d.string()) == 0);
    const json g = load(d / "gaps.json");
    CHECK(g["potential"]["source"] == "free");
    CHECK(g["gap_report"]["lambda_max"] == 90.0);
}

TEST_CASE("cli: demo potential emits a census report") {
    const fs::path d = out_dir("demo");
    REQUIRE(run("spectrum -p demo-d-holds --lambda-max 400 --grid 64 --no-edge-check -o " + d.string()) == 0);
    const json c = load(d / "census.json")["census"];
    CHECK(c["label"] == "consistency demonstration, not a proof");
    CHECK(c["condition"]["holds"] == true);
}

TEST_CASE("cli: verify on a constant potential passes trivially") {
    const fs::path d = out_dir("verify-const");
    REQUIRE(run("verify -p const-diag14 --k-max 20 --census-pairs 5 --census-k-max 12 -o " + d.string()) == 0);
    const json r = load(d / "verify.json")["report"];
    CHECK(r["residual"]["sup_over_j"]["exact"] == true);
    CHECK(r["residual"]["status"] == "PASS");
    CHECK(r["uniqueness"]["status"] == "PASS");
    CHECK(r["c8"]["calibrated"] == false);
}

TEST_CASE("cli: condition and oracle-check") {
    const fs::path d = out_dir("condition");
    REQUIRE(run("condition -p demo-d-holds -o " + d.string()) == 0);
    const json v = load(d / "condition.json")["verdict"];
    CHECK(v["holds"] == true);
    CHECK(v["witness"] == json::array({1, 2, 3}));
    REQUIRE(run("condition -p mathieu -o " + d.string()) == 0);
    CHECK(load(d / "condition.json")["verdict"]["holds"] == false);

    const fs::path o = out_dir("oracle");
    REQUIRE(run("oracle-check -p mathieu -t 1.0 -o " + o.string()) == 0);
    const json j = load(o / "oracle.json");
    CHECK(j["status"] == "PASS");
    CHECK(j["comparison"].size() == 5);
}
