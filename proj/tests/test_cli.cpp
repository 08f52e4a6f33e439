#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"

namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int exit_code;
    std::string out;
};

CmdResult run_cli(const std::string& args) {
    std::string cmd = std::string(CONFL_BIN) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[512];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

fs::path sandbox() {
    fs::path dir = fs::temp_directory_path() / "confl-cli-test";
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_CASE("prove prints the answer on the first line") {
    fs::path dir = sandbox();
    write(dir / "gramlich.trs", "(VAR x)\n(RULES f(g(x),h(x)) -> a\n g(b) -> d\n h(c) -> d)");
    CmdResult r = run_cli("prove " + (dir / "gramlich.trs").string() + " --timeout 10");
    CHECK(r.exit_code == 0);
    CHECK(r.out.substr(0, 3) == "NO\n");

    write(dir / "empty.trs", "(VAR)\n(RULES)");
    CmdResult e = run_cli("prove " + (dir / "empty.trs").string() + " --timeout 5");
    CHECK(e.out.substr(0, 4) == "YES\n");
}

TEST_CASE("prove writes a certificate sidecar on request") {
    fs::path dir = sandbox();
    write(dir / "g.trs", "(VAR x)\n(RULES f(g(x),h(x)) -> a\n g(b) -> d\n h(c) -> d)");
    fs::path cert = dir / "g.cert";
    fs::remove(cert);
    run_cli("prove " + (dir / "g.trs").string() + " --timeout 10 --cert " + cert.string());
    REQUIRE(fs::exists(cert));
    std::string text = slurp(cert);
    CHECK(text.find("PEAK") != std::string::npos);
    CHECK(text.find("NONJOIN") != std::string::npos);
}

TEST_CASE("malformed input exits 2") {
    fs::path dir = sandbox();
    write(dir / "bad.trs", "(VAR x)\n(RULES x -> a)");
    CmdResult r = run_cli("prove " + (dir / "bad.trs").string());
    CHECK(r.exit_code == 2);

    // MAYBE is still exit 0
    write(dir / "hard.trs", "(VAR x y)\n(RULES f(x) -> g(f(x))\n g(y) -> f(g(y)))");
    CmdResult m = run_cli("prove " + (dir / "hard.trs").string() +
                          " --strategy-file /dev/null --timeout 1");
    // /dev/null has no definitions: expect a clean error, not a crash
    CHECK(m.exit_code == 1);
}

TEST_CASE("gen is byte-deterministic for a fixed seed") {
    fs::path a = sandbox() / "gen-a";
    fs::path b = sandbox() / "gen-b";
    fs::remove_all(a);
    fs::remove_all(b);
    run_cli("gen --count 5 --seed 99 --out " + a.string() + " --F 3 --C 2 --V 2 --R 3");
    run_cli("gen --count 5 --seed 99 --out " + b.string() + " --F 3 --C 2 --V 2 --R 3");
    for (int i = 0; i < 5; ++i) {
        std::string name = "gen-99-" + std::to_string(i) + ".trs";
        CHECK(slurp(a / name) == slurp(b / name));
    }
    CHECK(slurp(a / "manifest.jsonl") == slurp(b / "manifest.jsonl"));
}

TEST_CASE("bench reports a summary and answers are job-count invariant") {
    fs::path dir = sandbox() / "bench-problems";
    fs::remove_all(dir);
    fs::create_directories(dir);
    write(dir / "solvable1.trs", "(VAR x)\n(RULES f(x) -> x)");
    write(dir / "solvable2.trs", "(VAR x)\n(RULES f(g(x),h(x)) -> a\n g(b) -> d\n h(c) -> d)");
    write(dir / "open.trs",
          "(VAR x y)\n(RULES f(f(x,y),x) -> f(x,f(y,f(x,y))))");  // hard within the budget

    fs::path out1 = sandbox() / "bench1.jsonl";
    fs::path out4 = sandbox() / "bench4.jsonl";
    CmdResult r1 = run_cli("bench --problems " + dir.string() + " --timeout 2 --jobs 1 --out " +
                           out1.string());
    CmdResult r4 = run_cli("bench --problems " + dir.string() + " --timeout 2 --jobs 4 --out " +
                           out4.string());
    CHECK(r1.out.find("yes    ") != std::string::npos);
    CHECK(r1.out.find("no     ") != std::string::npos);
    CHECK(r1.out.find("solved ") != std::string::npos);

    // same answers regardless of parallelism (timings differ)
    auto answers = [](const std::string& jsonl) {
        std::map<std::string, std::string> m;
        std::istringstream in(jsonl);
        std::string line;
        while (std::getline(in, line)) {
            auto p = line.find("\"problem\":\"");
            auto a = line.find("\"answer\":\"");
            if (p == std::string::npos || a == std::string::npos) continue;
            std::string prob = line.substr(p + 11, line.find('"', p + 11) - p - 11);
            std::string ans = line.substr(a + 10, line.find('"', a + 10) - a - 10);
            m[prob] = ans;
        }
        return m;
    };
    CHECK(answers(slurp(out1)) == answers(slurp(out4)));
}

TEST_CASE("seeded subcommands produce identical artifacts on repeat") {
    fs::path dir = sandbox();
    // a small label log to balance twice with the same seed
    fs::path labels = dir / "labels.jsonl";
    std::ostringstream log;
    for (int i = 0; i < 40; ++i)
        log << "{\"problem\":\"p" << i << "\",\"strategy_index\":0,\"answer\":\""
            << (i < 30 ? "YES" : "MAYBE") << "\",\"millis\":5}\n";
    write(labels, log.str());
    fs::path out_a = dir / "sel-a.txt";
    fs::path out_b = dir / "sel-b.txt";
    run_cli("balance --labels " + labels.string() + " --cap 10 --unsolved 5 --seed 77 --out " +
            out_a.string());
    run_cli("balance --labels " + labels.string() + " --cap 10 --unsolved 5 --seed 77 --out " +
            out_b.string());
    CHECK(slurp(out_a) == slurp(out_b));
    CHECK(slurp(out_a).find('p') != std::string::npos);

    // combine: same matrix + seed, same schedule bytes
    fs::path matrix = dir / "matrix.jsonl";
    std::ostringstream m;
    for (int s = 0; s < 3; ++s)
        for (int p = 0; p < 6; ++p)
            if ((s + p) % 2 == 0)
                m << "{\"strategy\":\"s" << s << "\",\"problem\":\"p" << p
                  << "\",\"answer\":\"YES\",\"millis\":" << (500 + 700 * s)
                  << ",\"workers\":1}\n";
    write(matrix, m.str());
    fs::path sched_a = dir / "sched-a.tsv";
    fs::path sched_b = dir / "sched-b.tsv";
    run_cli("combine --matrix " + matrix.string() + " --budget 6 --shuffles 20 --seed 5 --out " +
            sched_a.string());
    run_cli("combine --matrix " + matrix.string() + " --budget 6 --shuffles 20 --seed 5 --out " +
            sched_b.string());
    CHECK(slurp(sched_a) == slurp(sched_b));
    CHECK(!slurp(sched_a).empty());
}

TEST_CASE("dedup command writes classes and survivors") {
    fs::path dir = sandbox() / "dedup-problems";
    fs::path human = sandbox() / "dedup-human";
    fs::remove_all(dir);
    fs::remove_all(human);
    fs::create_directories(dir);
    fs::create_directories(human);
    write(dir / "gen-1.trs", "(VAR x)\n(RULES f(x) -> x)");
    write(dir / "gen-2.trs", "(VAR y)\n(RULES g(y) -> y)");  // variant of gen-1
    write(human / "hand-1.trs", "(VAR z)\n(RULES h(z) -> z)");  // also a variant

    fs::path classes = sandbox() / "classes.tsv";
    fs::path survivors = sandbox() / "survivors.txt";
    CmdResult r = run_cli("dedup --dir " + dir.string() + " --human " + human.string() +
                          " --classes " + classes.string() + " --survivors " + survivors.string());
    CHECK(r.exit_code == 0);
    std::string s = slurp(survivors);
    CHECK(s == "hand-1\n");  // the human problem wins the merged class
}
