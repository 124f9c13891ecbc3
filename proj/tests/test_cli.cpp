#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run cli(const std::string& args) {
    const std::string cmd = std::string("\"") + REVLINK_CLI + "\" " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string demo(const char* name) { return std::string(REVLINK_DEMO_DIR) + "/" + name; }

std::filesystem::path tmpfile(const std::string& name) {
    auto d = std::filesystem::temp_directory_path() / "revlink_cli_tests";
    std::filesystem::create_directories(d);
    return d / name;
}

void write_figure_eight(const std::filesystem::path& p) {
    std::ofstream os(p);
    for (int i = 0; i < 400; ++i) {
        const double t = 2 * M_PI * (i + 0.5) / 400, lat = 0.5 * std::sin(t), lon = 2 * t;
        os << std::cos(lat) * std::cos(lon) << ',' << std::cos(lat) * std::sin(lon) << ',' << std::sin(lat) << '\n';
    }
}

} // namespace

TEST(Cli, AnalyzeLeftHanded) {
    const auto r = cli("analyze --surface ellipsoid:b=1.5 --format csv");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("status,LeftHanded"), std::string::npos);
    EXPECT_NE(r.out.find("# revlink"), std::string::npos);
}

TEST(Cli, AnalyzeNotLeftHanded) {
    const auto r = cli("analyze --surface ellipsoid:b=2.5 --format json");
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.out.find("\"type\": \"(2,1)\""), std::string::npos);
}

TEST(Cli, ValidationFailureExitsTwo) {
    const auto r = cli("analyze --surface file:" + demo("peanut_samples.csv"));
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.out.find("ValidationFailed"), std::string::npos);
}

TEST(Cli, SampledSurface) {
    const auto r = cli("analyze --surface file:" + demo("ellipsoid_b2.5_samples.csv") + " --format csv");
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.out.find("verdict.witness.type,(2,1)"), std::string::npos);
}

TEST(Cli, InconclusiveExitsFour) { EXPECT_EQ(cli("analyze --surface ellipsoid:b=2 --verdict-tol 1e-13").code, 4); }

TEST(Cli, InvalidInputExitsOne) {
    EXPECT_EQ(cli("analyze --surface torus:r=2").code, 1);
    EXPECT_EQ(cli("analyze").code, 1);
    EXPECT_EQ(cli("analyze --surface sphere --grid 10").code, 1);
    EXPECT_EQ(cli("link --type 2,0 --equator plus").code, 1);
    EXPECT_EQ(cli("oracle --diagram /nonexistent/file.txt --type 2,1 --equator plus").code, 1);
}

TEST(Cli, LinkValues) {
    EXPECT_EQ(cli("link --type 8,1 --equator plus").out, "3\n");
    EXPECT_EQ(cli("link --type 0,1 --equator minus").out, "-1/2\n");
    EXPECT_EQ(cli("link --equator plus --equator minus").out, "-1/2\n");
    EXPECT_EQ(cli("link --type 3,1 --type -2,1 --outer first").out, "-3\n");
}

TEST(Cli, CriticalB) {
    const auto r = cli("critical-b --b-tol 1e-4");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("b_star,b_tol\n2.0000,0.0001"), std::string::npos);
}

TEST(Cli, SweepRange) {
    const auto r = cli("sweep --range b=1.5..2.5:0.5");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("b,delta,equator_limit,verdict"), std::string::npos);
    EXPECT_NE(r.out.find("1.5,0.197530864197531,4.71238898038"), std::string::npos);
    EXPECT_NE(r.out.find("2.5,0.0256,7.85398163397"), std::string::npos);
}

TEST(Cli, WorkersDoNotChangeOutput) {
    EXPECT_EQ(cli("sweep --surface ellipsoid:b=1.7 --levels 16 --workers 1").out,
              cli("sweep --surface ellipsoid:b=1.7 --levels 16 --workers 3").out);
}

TEST(Cli, OracleSweep) {
    const auto r = cli("oracle --surface ellipsoid:b=2.5 --max-p 4 --max-q 2");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("e+,2:1,0,0,1"), std::string::npos);
}

TEST(Cli, OracleDiagram) {
    const auto p = tmpfile("figure_eight.txt");
    write_figure_eight(p);
    const auto ok = cli("oracle --diagram " + p.string() + " --type 2,1 --equator plus");
    EXPECT_EQ(ok.code, 0);
    EXPECT_NE(ok.out.find("e+,2:1,0,0,1"), std::string::npos);
    EXPECT_EQ(cli("oracle --diagram " + p.string() + " --type 3,1 --equator plus").code, 5);
    const auto bad = tmpfile("bad.txt");
    std::ofstream(bad) << "1,0\n";
    EXPECT_EQ(cli("oracle --diagram " + bad.string() + " --type 2,1 --equator plus").code, 5);
}

TEST(Cli, TraceCsv) {
    const auto r = cli("trace --surface sphere --c 0.5 --length 1 --stride 0.5");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("t,u,s,du,ds\n0,0,0,0.5,"), std::string::npos);
    EXPECT_EQ(cli("trace --surface sphere --c -0.5 --length 1 --stride 0.5").code, 0);
}

TEST(Cli, OutputFile) {
    const auto p = tmpfile("out.json");
    std::filesystem::remove(p);
    EXPECT_EQ(cli("analyze --surface sphere --out " + p.string()).code, 0);
    EXPECT_TRUE(std::filesystem::exists(p));
    std::ifstream in(p);
    std::string first;
    std::getline(in, first);
    EXPECT_EQ(first, "{");
}

TEST(Cli, Version) {
    const auto r = cli("--version");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("0.1.0"), std::string::npos);
}
