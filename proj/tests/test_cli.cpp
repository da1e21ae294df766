#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include "linforms/certify.hpp"
#include "linforms/serialize.hpp"

using namespace linforms;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args, bool merge_stderr = false) {
    std::string cmd = std::string(LINFORMS_CLI_PATH) + " " + args +
                      (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    char buf[4096];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::filesystem::path scratch(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("linforms_cli_" + name);
}

std::string write_scratch(const std::string& name, const std::string& text) {
    auto path = scratch(name);
    std::ofstream out(path);
    out << text;
    return path.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("lemma generation matches the small chain") {
    RunResult r = run_cli("generate --m 2 --n 2 --mode lemma --d 3 --H 1");
    CHECK(r.code == 0);
    MatrixSpec mat = matrix_from_json(r.out);
    auto flat = mat.flatten_explicit();
    REQUIRE(flat.size() == 4);
    CHECK(flat[0] == 2);
    CHECK(flat[1] == 16);
    CHECK(flat[2] == 8192);
    CHECK(flat[3] == BigInt("1099511627776"));
}

TEST_CASE("symbolic generation round trips into a structural certificate") {
    std::string path = scratch("theorem1.json").string();
    RunResult gen = run_cli("generate --m 2 --n 2 --mode theorem1 -o " + path);
    CHECK(gen.code == 0);

    MatrixSpec read_back = matrix_from_json(slurp(path));
    MatrixSpec expected = canonical_structural_matrix(2, 2);
    REQUIRE(read_back.m == 2);
    REQUIRE(read_back.n == 2);
    for (unsigned s = 0; s < 2; ++s)
        for (unsigned t = 0; t < 2; ++t)
            CHECK(std::get<PowerExpr>(read_back.entries[s][t])
                      .structurally_equal(std::get<PowerExpr>(expected.entries[s][t])));

    RunResult cert = run_cli("certify " + path);
    CHECK(cert.code == 0);
    CHECK(cert.out == "structural (conditional on the windowed-matrix theorem)\n");
}

TEST_CASE("certify summaries for the pinned matrices") {
    std::string a = write_scratch("a.json", "{\"m\":2,\"n\":2,\"entries\":[[\"1\",\"1\"],[\"1\",\"2\"]]}");
    std::string b = write_scratch("b.json", "{\"m\":2,\"n\":2,\"entries\":[[\"1\",\"1\"],[\"2\",\"2\"]]}");

    RunResult ra = run_cli("certify " + a);
    CHECK(ra.code == 0);
    CHECK(ra.out == "C = 2 (exhaustive)\n");

    std::string cert_path = scratch("b.cert.json").string();
    RunResult rb = run_cli("certify " + b + " -o " + cert_path);
    CHECK(rb.code == 0);
    CHECK(rb.out == "C = 1 (exhaustive)\n");

    Certificate cert = certificate_from_json(slurp(cert_path));
    CHECK(cert.kind == CertificateKind::Exhaustive);
    CHECK(cert.target == 1);
    CHECK(recheck_certificate(cert));
}

TEST_CASE("usage and parse failures use distinct exit codes") {
    CHECK(run_cli("generate --m 0 --n 2", true).code == 1);
    CHECK(run_cli("generate --m 2 --n 2 --mode lemma", true).code == 1);
    CHECK(run_cli("frobnicate", true).code == 1);

    std::string bad = write_scratch("bad.json", "{\"m\": 1,");
    RunResult r = run_cli("certify " + bad, true);
    CHECK(r.code == 2);
    CHECK(r.out.find("line") != std::string::npos);

    CHECK(run_cli("certify " + scratch("does_not_exist.json").string(), true).code == 2);
    CHECK(run_cli("annihilate \"u1<-(x1\" --n 2", true).code == 2);
}

TEST_CASE("synthesize prints the found program") {
    std::string b = write_scratch("b2.json", "{\"m\":2,\"n\":2,\"entries\":[[\"1\",\"1\"],[\"2\",\"2\"]]}");
    RunResult r = run_cli("synthesize " + b);
    CHECK(r.code == 0);
    CHECK(r.out.find("topology: u1<-(x1,x2)|out:u1,u1") != std::string::npos);
    CHECK(r.out.find("u1 = 1*x1 + 1*x2") != std::string::npos);
    CHECK(r.out.find("y2 = 2*u1") != std::string::npos);

    RunResult none = run_cli("synthesize " + b + " --budget 0");
    CHECK(none.code == 0);
    CHECK(none.out == "no algorithm within budget 0\n");
}

TEST_CASE("annihilate reports the determinant relation") {
    RunResult r = run_cli("annihilate \"u1<-(x1,x2)|out:u1,u1\" --n 2");
    CHECK(r.code == 0);
    CHECK(r.out.find("1*x1^1 x4^1 + -1*x2^1 x3^1") != std::string::npos);
    CHECK(r.out.find("perron degree bound: 4") != std::string::npos);
}

TEST_CASE("check-bounds verifies windows and the explicit chain") {
    RunResult r = run_cli("check-bounds --m 2 --n 2 --d 3 --H 1");
    CHECK(r.code == 0);
    CHECK(r.out.find("explicit sequence admissible (4 entries)") != std::string::npos);
    CHECK(r.out.find("all bounds hold (N=4)") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("selftest is deterministic and passes") {
    RunResult first = run_cli("selftest --seed 0");
    RunResult second = run_cli("selftest --seed 0");
    CHECK(first.code == 0);
    CHECK(first.out == second.out);
    CHECK(first.out.find("selftest: pass (seed=0, scale=quick)") != std::string::npos);
    CHECK(first.out.find("FAIL") == std::string::npos);
}
