#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

namespace {

struct CliResult {
    int code = -1;
    std::string out;
};

const char* cli_path() {
    const char* bin = std::getenv("JSR2_CLI");
    REQUIRE_MESSAGE(bin != nullptr, "JSR2_CLI must point at the jsr2 binary");
    return bin;
}

CliResult run_cli(const std::string& args) {
    std::string cmd = std::string(cli_path()) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult res;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0)
        res.out.append(buf, n);
    int status = pclose(pipe);
    res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string write_fixture(const std::string& name, const std::string& body) {
    auto path = std::filesystem::temp_directory_path() / ("jsr2_cli_" + name + ".json");
    std::ofstream out(path);
    out << body;
    return path.string();
}

const std::string kIdentity = R"({"matrices":[[[1,0],[0,1]]]})";
const std::string kTriple =
    R"({"matrices":[[[1.7320508075688772,1],[2,1.3]],)"
    R"([[1.4142135623730951,10],[20,2.6457513110645907]],)"
    R"([[-1,0.1],[0.2,2.23606797749979]]]})";
const std::string kMixedPair = R"({"matrices":[[[-3,3.5],[-4,4.5]],[[0.5,0],[0,1]]]})";
const std::string kMarginal = R"({"matrices":[[[1,0],[0,0.5]]]})";
const std::string kScaledPair =
    R"({"matrices":[[[-1.65,1.925],[-2.2,2.475]],[[0.275,0],[0,0.55]]]})";

} // namespace

TEST_CASE("check reports the pattern and exits 0") {
    std::string path = write_fixture("identity", kIdentity);
    CliResult res = run_cli("check " + path + " --format json");
    CHECK(res.code == 0);
    auto doc = nlohmann::json::parse(res.out);
    CHECK(doc["schema_version"] == 1);
    CHECK(doc["holds"] == true);
    CHECK(doc["all_diagonal"] == true);
    CHECK(doc["sign_class"] == "zero");
    CHECK(doc["tol"]["rtol"] == 1e-9);
}

TEST_CASE("symmetrize emits an infeasibility certificate") {
    std::string path = write_fixture("mixed", kMixedPair);
    CliResult res = run_cli("symmetrize " + path + " --format json");
    CHECK(res.code == 0);
    auto doc = nlohmann::json::parse(res.out);
    CHECK(doc["feasible"] == false);
    CHECK(doc["certificate"]["dimension"] == 1);
    CHECK(doc["certificate"]["reason"].get<std::string>().size() > 0);

    std::string triple = write_fixture("triple", kTriple);
    res = run_cli("symmetrize " + triple + " --format json");
    CHECK(res.code == 0);
    doc = nlohmann::json::parse(res.out);
    CHECK(doc["feasible"] == true);
    CHECK(doc["conjugated"].size() == 3);
}

TEST_CASE("stability exit codes track the verdict") {
    CHECK(run_cli("stability " + write_fixture("triple", kTriple)).code == 1);
    CHECK(run_cli("stability " + write_fixture("marginal", kMarginal)).code == 2);
    CliResult res =
        run_cli("stability " + write_fixture("scaled", kScaledPair) + " --depth 4 --format json");
    CHECK(res.code == 3);
    auto doc = nlohmann::json::parse(res.out);
    CHECK(doc["verdict"] == "undecided");

    // scaled to rho / 17 < 1: stable via the exact route
    std::string stable = write_fixture(
        "stable", R"({"matrices":[[[0.101885341621,0.058823529411],[0.117647058823,0.076470588235]],)"
                  R"([[0.083189700305,0.588235294117],[1.176470588235,0.155632358519]],)"
                  R"([[-0.058823529411,0.005882352941],[0.011764705882,0.131533410339]]]})");
    res = run_cli("stability " + stable + " --format json");
    CHECK(res.code == 0);
    doc = nlohmann::json::parse(res.out);
    CHECK(doc["verdict"] == "stable");
    CHECK(doc["method"] == "exact-pattern");
}

TEST_CASE("jsr reports the exact value on the fast path") {
    CliResult res = run_cli("jsr " + write_fixture("triple", kTriple) + " --format json");
    CHECK(res.code == 0);
    auto doc = nlohmann::json::parse(res.out);
    CHECK(doc["exact"] == true);
    CHECK(doc["method"] == "exact-pattern");
    CHECK(doc["witness"] == nlohmann::json::array({1}));
    CHECK(doc["lower"].get<double>() == doctest::Approx(16.185517442737268));
    CHECK(doc["lower"] == doc["upper"]);
}

TEST_CASE("jsr honors the budget with exit 70") {
    CliResult res = run_cli("jsr " + write_fixture("mixed", kMixedPair) +
                            " --depth 30 --budget 1000 --format json");
    CHECK(res.code == 70);
    auto doc = nlohmann::json::parse(res.out);
    CHECK(doc["budget_exceeded"] == true);
    CHECK(doc["depth"] == 8);
}

TEST_CASE("simulate produces CSV and deterministic seeded runs") {
    std::string path = write_fixture("decay", R"({"matrices":[[[0.9,0],[0,0.5]],[[0,2],[0.3,0]]]})");
    CliResult res = run_cli("simulate " + path + " --blocks 0^1,1^1,0^1,1^1");
    CHECK(res.code == 0);
    CHECK(res.out.rfind("step,block,log10_norm\n", 0) == 0);
    CHECK(res.out.find("4,1^1,") != std::string::npos);

    CliResult a = run_cli("simulate " + path + " --seed 42 --length 50 --format json");
    CliResult b = run_cli("simulate " + path + " --seed 42 --length 50 --format json");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CliResult c = run_cli("simulate " + path + " --seed 43 --length 50 --format json");
    CHECK(a.out != c.out);

    // a sequence spec is required
    CHECK(run_cli("simulate " + path).code == 64);
}

TEST_CASE("flags command") {
    std::string path = write_fixture("rank1", R"({"matrices":[[[1,1],[1,1]],[[1,0],[0,1]]]})");
    CliResult res = run_cli("flags " + path + " --format json");
    CHECK(res.code == 0);
    auto doc = nlohmann::json::parse(res.out);
    CHECK(doc["transpose_closed"] == true);
    CHECK(doc["rank_one_member"] == true);
}

TEST_CASE("json output is byte-stable across runs") {
    std::string path = write_fixture("triple", kTriple);
    for (const std::string& cmd :
         {std::string("check "), std::string("jsr "), std::string("stability ")}) {
        CliResult a = run_cli(cmd + path + " --format json");
        CliResult b = run_cli(cmd + path + " --format json");
        CHECK(a.out == b.out);
    }
    // thread count must not change the bytes either
    CliResult t1 = run_cli("jsr " + write_fixture("mixed", kMixedPair) +
                           " --depth 8 --threads 1 --format json");
    CliResult t4 = run_cli("jsr " + write_fixture("mixed", kMixedPair) +
                           " --depth 8 --threads 4 --format json");
    CHECK(t1.out == t4.out);
}

TEST_CASE("usage and parse failures use the documented exit codes") {
    CHECK(run_cli("").code == 64);
    CHECK(run_cli("frobnicate x.json").code == 64);
    CHECK(run_cli("check").code == 64);
    CHECK(run_cli("check /nonexistent/family.json").code == 65);
    std::string bad = write_fixture("bad", R"({"matrices":[[[1,0],[0]]]})");
    CHECK(run_cli("check " + bad).code == 65);
    CHECK(run_cli("--help").code == 0);
}

TEST_CASE("tolerance overrides flow into the report") {
    std::string path = write_fixture("identity", kIdentity);
    CliResult res = run_cli("check " + path + " --rtol 1e-6 --atol 1e-9 --format json");
    auto doc = nlohmann::json::parse(res.out);
    CHECK(doc["tol"]["rtol"] == 1e-6);
    CHECK(doc["tol"]["atol"] == 1e-9);
}
