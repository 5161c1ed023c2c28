#include "abc/bigrat.hpp"

#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("abclab_cli_" + std::to_string(::getpid()));
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int abclab(const std::string& args) {
    const std::string cmd = "cd '" + workdir().string() + "' && " + std::string(ABCLAB_EXE) + " " + args + " > last.log 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(workdir() / p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void put(const fs::path& p, const std::string& text) { std::ofstream(workdir() / p, std::ios::binary) << text; }

nlohmann::json echoed_config(const fs::path& file) {
    std::istringstream in(slurp(file));
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("# config: ", 0) == 0) return nlohmann::json::parse(line.substr(10));
    return {};
}

const char* kDesk = R"js({"schema_version":"1.0","construction":"untwisted",
 "profile":{"regime":"custom","q1":"8","custom":[{"l":"64","l_prime":"1","eps":"1/8"}]},
 "stages":{"from":1,"to":1},"grid":24,"horizons":["1","q_n","q_next"],"eps":[0.125],
 "families":[{"family":"pol","t":[0.5,1]},{"family":"int1(4;8)","t":[1]}],
 "hamming":{"enabled":true,"nx":4,"ny":4,"eps":0.125,"samples":2000}})js";

} // namespace

TEST_CASE("params: intermediate chain with exact big integers") {
    REQUIRE(abclab("params --from 2 --to 4 -o chain1") == 0);
    auto j = nlohmann::json::parse(slurp("chain1/chain.json"));
    CHECK(j["schema_version"] == "1.0");
    const auto& chain = j["chain"];
    REQUIRE(chain.size() == 4);
    CHECK(chain[1]["q"] == "4");
    CHECK(chain[2]["q"] == abc::to_decimal(abc::pow_big(abc::BigInt(2), 32)));
    // q_4 = q_3^81 = 2^2592
    CHECK(chain[3]["q"] == abc::to_decimal(abc::pow_big(abc::BigInt(2), 2592)));
    CHECK(slurp("chain1/validation.txt").find("overall: pass") != std::string::npos);

    REQUIRE(abclab("params --chain chain1/chain.json -o chain1") == 0);
    auto body = [](const std::string& s) { return s.substr(s.find("stage 1")); };
    CHECK(body(slurp("chain1/revalidation.txt")) == body(slurp("chain1/validation.txt")));
}

TEST_CASE("params: eps violation fails with exit code 2") {
    put("epsbad.json", R"({"schema_version":"1.0","profile":{"regime":"custom","q1":"8",
        "custom":[{"l":"64","l_prime":"4","eps":"1/4"}]},"stages":{"from":1,"to":2}})");
    CHECK(abclab("params -c epsbad.json -o epsbad") == 2);
    CHECK(slurp("epsbad/validation.txt").find("eps_n <= 1/n^4 violated") != std::string::npos);
}

TEST_CASE("run: untwisted desk witnesses and determinism") {
    put("desk.json", kDesk);
    REQUIRE(abclab("run -c desk.json -o deskA") == 0);
    const std::string witness = slurp("deskA/witness.csv");
    CHECK(witness.find("\n1,0.125,12,12,true,false,4096,") != std::string::npos);

    std::set<std::string> hashes;
    for (const char* f : {"counts.csv", "packing.csv", "witness.csv", "summary.txt"}) {
        const std::string text = slurp(fs::path("deskA") / f);
        REQUIRE(text.rfind("# config_hash: ", 0) == 0);
        hashes.insert(text.substr(0, text.find('\n')));
        CHECK(echoed_config(fs::path("deskA") / f)["grid"] == 24);
    }
    CHECK(hashes.size() == 1);

    std::map<std::string, std::string> first;
    for (const auto& e : fs::directory_iterator(workdir() / "deskA")) first[e.path().filename()] = slurp(e.path());
    REQUIRE(abclab("run -c desk.json -o deskA") == 0);
    for (const auto& [name, text] : first) {
        CAPTURE(name);
        CHECK(slurp(fs::path("deskA") / name) == text);
    }
}

TEST_CASE("run: flags override the file, the file overrides defaults") {
    put("desk.json", kDesk);
    REQUIRE(abclab("run -c desk.json --grid 20 --seed 9 -o prec") == 0);
    auto cfg = echoed_config("prec/summary.txt");
    CHECK(cfg["grid"] == 20);
    CHECK(cfg["seed"] == 9);
    CHECK(cfg["hamming"]["samples"] == 2000);
    CHECK(cfg["max_samples"] == 4096);
}

TEST_CASE("run: error classes map to distinct exit codes") {
    put("unknown.json", R"({"schema_version":"1.0","bogus":1})");
    CHECK(abclab("run -c unknown.json -o x") == 2);
    put("v2.json", R"({"schema_version":"2.0"})");
    CHECK(abclab("run -c v2.json -o x") == 2);
    put("ctor.json", R"({"schema_version":"1.0","profile":{"regime":"custom","q1":"2",
        "custom":[{"l":"4","l_prime":"2","eps":"1/8"}]},"stages":{"from":1,"to":1}})");
    CHECK(abclab("run -c ctor.json -o x") == 4);
    CHECK(slurp("last.log").find("q_n >= 4") != std::string::npos);
    put("big.json", R"({"schema_version":"1.0","profile":{"regime":"intermediate","r":4,"q1":"2"},
        "stages":{"from":2,"to":2},"grid":512,"horizons":["q_n","q_next","1099511627776"],"witness":false})");
    CHECK(abclab("run -c big.json -o x") == 3);
}

TEST_CASE("plotdata: curves and manifest") {
    put("desk.json", kDesk);
    REQUIRE(abclab("run -c desk.json -o plotsrc") == 0);
    REQUIRE(abclab("plotdata plotsrc/counts.csv --family pol -o plots") == 0);
    const std::string manifest = slurp("plots/manifest.csv");
    CHECK(manifest.rfind("file,family,t,count_kind,rows\n", 0) == 0);
    CHECK(manifest.find("int1") == std::string::npos);
    CHECK(manifest.find("curve_0.dat,pol,0.5,cover_upper,3") != std::string::npos);
    // bare header line plus three (horizon, log-ratio) rows
    std::istringstream c0(slurp("plots/curve_0.dat"));
    std::string line;
    int rows = 0;
    while (std::getline(c0, line))
        if (!line.empty() && line[0] != '#') ++rows;
    CHECK(rows == 3);

    REQUIRE(abclab("plotdata plotsrc/counts.csv -o plots_all") == 0);
    CHECK(slurp("plots_all/manifest.csv").find("int1(4;8)") != std::string::npos);

    put("empty.csv", "stage,horizon,eps,count_kind,count,family,t,log_ratio\n");
    CHECK(abclab("plotdata empty.csv -o plots_empty") == 0);
    CHECK(slurp("plots_empty/manifest.csv") == "file,family,t,count_kind,rows\n");

    put("bad.csv", "stage,horizon\n1,2\n");
    CHECK(abclab("plotdata bad.csv -o plots_bad") != 0);
    const std::string log = slurp("last.log");
    CHECK(log.find("bad.csv") != std::string::npos);
    CHECK(log.find("count_kind") != std::string::npos);
}

TEST_CASE("words: sample then verify") {
    REQUIRE(abclab("words --s 4 --k 64 --N 4 --eps 0.1 --seed 3 -o sel.txt") == 0);
    CHECK(slurp("sel.txt").rfind("4 64 4 0.1 3\n", 0) == 0);
    CHECK(abclab("words --verify sel.txt") == 0);
    CHECK(slurp("last.log").find("verified: yes") != std::string::npos);
    put("periodic.txt", "2 8 1 0.05 0\n01010101\n");
    CHECK(abclab("words --verify periodic.txt") != 0);
}

TEST_CASE("norms and describe") {
    put("desk.json", kDesk);
    REQUIRE(abclab("norms -c desk.json --norm-grid 32 -o norms") == 0);
    const std::string csv = slurp("norms/norms.csv");
    CHECK(csv.find("node,k,estimate,grid,fd_step,excluded_fraction\n") != std::string::npos);
    REQUIRE(abclab("describe -c desk.json") == 0);
    CHECK(slurp("last.log").find("q") != std::string::npos);
}
