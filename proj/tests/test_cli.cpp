#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path work = fs::temp_directory_path() / "valleyqed_cli_test";

struct Result {
    int code = -1;
    std::string out;
};

Result run(const std::string& args) {
    fs::create_directories(work);
    const auto log = work / "stdout.txt";
    const std::string cmd = std::string(VALLEYQED_BIN) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

fs::path write_file(const std::string& name, const std::string& text) {
    fs::create_directories(work);
    const auto p = work / name;
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST_CASE("list-scenarios") {
    const auto r = run("list-scenarios");
    CHECK(r.code == 0);
    for (const char* s : {"bands", "bulk", "ribbon", "chiral", "custom"}) CHECK(r.out.find(s) != std::string::npos);
}

TEST_CASE("usage and config errors exit with 1") {
    CHECK(run("").code == 1);
    CHECK(run("frobnicate").code == 1);
    CHECK(run("run --scenario nowhere").code == 1);
    CHECK(run("run --scenario bulk --phase banana").code == 1);
    CHECK(run("sweep --scenario ribbon").code == 1);
    const auto bad = write_file("bad.json", "{\"scenario\": \"bulk\",\n \"lattice\": {\"size\": }\n}");
    const auto r = run("validate " + bad.string());
    CHECK(r.code == 1);
    CHECK(r.out.find(":2:") != std::string::npos);
    const auto unknown = write_file("unknown.json", R"({"scenario": "bulk", "atom": {"gg": 1}})");
    CHECK(run("validate " + unknown.string()).out.find("atom.gg") != std::string::npos);
}

TEST_CASE("validate warns about strong coupling") {
    const auto cfg = write_file("strong.json", R"({"scenario": "bulk", "atom": {"g": 2.0}})");
    const auto r = run("validate " + cfg.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("warning") != std::string::npos);
    const auto ok = write_file("ok.json", R"({"scenario": "chiral", "atom": {"phase": "pi/3"}})");
    const auto v = run("validate " + ok.string());
    CHECK(v.code == 0);
    CHECK(v.out.find("warning") == std::string::npos);
    const auto outside = write_file("outside.json", R"({"scenario": "bulk", "lattice": {"size": 4}, "atom": {"separation": [0, 9]}})");
    CHECK(run("validate " + outside.string()).code == 1);
}

TEST_CASE("empty sweep yields an empty table") {
    const auto out = work / "sweep_empty";
    fs::remove_all(out);
    const auto r = run("sweep --scenario ribbon --size 20 --parameter lambda --values '' --output " + out.string());
    CHECK(r.code == 0);
    std::ifstream in(out / "sweep_lambda.csv");
    std::string header, row;
    std::getline(in, header);
    CHECK(header.rfind("lambda", 0) == 0);
    CHECK_FALSE(std::getline(in, row));
}

TEST_CASE("run writes a manifest and flags override the file") {
    const auto out = work / "bands_run";
    fs::remove_all(out);
    const auto cfg = write_file("bands.json", R"({"scenario": "bands", "lattice": {"delta": 0.1}, "run": {"grid": 48}})");
    const auto r = run("run --config " + cfg.string() + " --delta 0.3 --output " + out.string());
    CHECK(r.code == 0);
    std::ifstream in(out / "manifest.json");
    const auto m = nlohmann::json::parse(in);
    CHECK(m.at("schema_version") == 1);
    CHECK(m.at("config").at("lattice").at("delta") == 0.3);
    CHECK(m.at("config").at("run").at("grid") == 48);
    CHECK(m.at("metrics").at("min_gap").get<double>() == doctest::Approx(0.6));

    // The manifest alone reproduces the run.
    const auto again = run("run --config " + (out / "manifest.json").string() + " --output " + (work / "bands_again").string());
    CHECK(again.code == 0);
    std::ifstream in2(work / "bands_again" / "manifest.json");
    CHECK(nlohmann::json::parse(in2).at("metrics") == m.at("metrics"));
}

TEST_CASE("--check reports acceptance failures with exit code 3") {
    // The lattice valley Chern number stays below 1/2 at Delta = 0.3.
    const auto r = run("run --scenario bands --output " + (work / "bands_check").string() + " --check");
    CHECK(r.code == 3);
    CHECK(r.out.find("FAIL [acceptance]") != std::string::npos);
}
