#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string env(const char* name) {
    const char* v = std::getenv(name);
    REQUIRE_MESSAGE(v != nullptr, name << " is not set");
    return v;
}

fs::path scratch() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("pwlab_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

struct Run {
    int code;
    std::string out, err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Run run(const std::string& args) {
    const fs::path o = scratch() / "stdout", e = scratch() / "stderr";
    const std::string cmd = "\"" + env("PWLAB_BIN") + "\" " + args + " >\"" + o.string() + "\" 2>\"" + e.string() + "\"";
    const int st = std::system(cmd.c_str());
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, slurp(o), slurp(e)};
}

std::string data(const char* name) { return "\"" + (fs::path(env("PWLAB_DATA")) / name).string() + "\""; }

fs::path write_file(const char* name, const std::string& text) {
    const fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST_CASE("toeplitz of the zero example") {
    const Run r = run("toeplitz --symbol " + data("zero_example.json") + " --band 1");
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("norm").at("upper").get<double>() <= 1e-8);
    CHECK(j.at("operator").at("band").get<double>() == 1.0);
}

TEST_CASE("split of a gaussian") {
    const fs::path bumps = scratch() / "bumps.csv";
    const Run r = run("split --symbol " + data("gaussian.json") + " --band 1 --emit-bumps \"" + bumps.string() + "\"");
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    for (const char* k : {"left", "central", "right"}) CHECK(j.at("l1").at(k).get<double>() >= 1.0);
    CHECK(j.at("partition_residual").get<double>() <= 1e-8);
    CHECK(slurp(bumps).rfind("x,psi_L,psi_C,psi_R\n", 0) == 0);
}

TEST_CASE("identical inputs give identical bytes") {
    const std::string args = "toeplitz --symbol " + data("gaussian.json") + " --band 1 --window 32";
    const Run a = run(args), b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("operator round trip through the commutator test") {
    const fs::path T = scratch() / "T.json";
    REQUIRE(run("toeplitz --symbol " + data("gaussian.json") + " --band 1 --out \"" + T.string() + "\"").code == 0);
    const json full = json::parse(slurp(T));
    const fs::path op = write_file("op.json", full.at("operator").dump());
    const Run r = run("commutator-test --matrix \"" + op.string() + "\" --band 1 --p 2");
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("is_toeplitz").get<bool>());
    CHECK(j.at("deviation").get<double>() <= 1e-6);
    CHECK(run("commutator-test --matrix \"" + op.string() + "\" --band 2").code == 1);
}

TEST_CASE("input errors exit 1 with a diagnostic") {
    const fs::path bad = write_file("bad.json", "{\"gaussian\": ");
    Run r = run("toeplitz --symbol \"" + bad.string() + "\" --band 1");
    CHECK(r.code == 1);
    CHECK(r.err.find("malformed JSON") != std::string::npos);

    r = run("toeplitz --symbol \"" + (scratch() / "missing.json").string() + "\" --band 1");
    CHECK(r.code == 1);
    CHECK(r.err.find("cannot open") != std::string::npos);

    const fs::path frac = write_file("frac.json", R"({"mod_poly": {"n": 1.5, "freq": 0.0}})");
    r = run("toeplitz --symbol \"" + frac.string() + "\" --band 1");
    CHECK(r.code == 1);
    CHECK(r.err.find("symbol:") != std::string::npos);

    r = run("toeplitz --symbol " + data("gaussian.json") + " --band 1 --p 1");
    CHECK(r.code == 1);

    const fs::path h = write_file("h.json", R"({"grid": {"start": -4.0, "step": 0.5, "count": 16}, "values": []})");
    r = run("factorize --input \"" + h.string() + "\" --band 1");
    CHECK(r.code == 1);
    CHECK(r.err.find("input:") != std::string::npos);

    CHECK(run("no-such-command").code == 1);
    CHECK(run("verify --check no_such_check").code == 1);
}

TEST_CASE("verify subset writes the report") {
    const fs::path dir = scratch() / "report";
    fs::create_directories(dir);
    const Run r = run("verify --band 1 --p 2 --check zero_symbol --check sinc_constant --out-dir \"" + dir.string() + "\"");
    CHECK(r.code == 0);
    CHECK(r.err.find("PASS zero_symbol") != std::string::npos);
    const json rep = json::parse(slurp(dir / "report.json"));
    CHECK(rep.at("checks").size() == 2);
    CHECK(slurp(dir / "report.csv").rfind("check_id,paper_ref,measured,bound,pass\n", 0) == 0);

    const Run f = run("verify --check zero_symbol --tol zero_symbol.norm=-1 --out-dir \"" + dir.string() + "\"");
    CHECK(f.code == 2);
    CHECK(f.err.find("FAIL zero_symbol") != std::string::npos);
}
