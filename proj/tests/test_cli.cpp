#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cspt/io.hpp"

namespace {

struct CliRun {
    int code;
    std::string out;
};

CliRun cli(const std::string& args) {
    const std::string cmd = std::string(CSPT_BINARY) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string fixture(const char* name) { return std::string(CSPT_FIXTURES) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string c; std::getline(in, c, ',');) out.push_back(c);
    return out;
}

using json = nlohmann::ordered_json;

} // namespace

TEST(Cli, BoundsSinglePoint) {
    const CliRun r = cli("bounds --delta 0.5 --rho 0.1");
    ASSERT_EQ(r.code, 0);
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 2u);
    EXPECT_EQ(l[0], "delta,rho,L,U");
    const auto cells = split(l[1]);
    EXPECT_NEAR(std::stod(cells[2]), 0.89239555178679666247, 1e-12);
    EXPECT_NEAR(std::stod(cells[3]), 2.50343906698198, 1e-6);
}

TEST(Cli, BoundsGridRowCount) {
    const CliRun r = cli("bounds --delta 0.2,0.5,0.9 --rho-linspace 0.1,0.4,4");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(lines(r.out).size(), 1u + 12u);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(cli("bounds --delta abc --rho 0.1").code, 1);
    EXPECT_EQ(cli("bounds --nonsense").code, 1);
    EXPECT_EQ(cli("").code, 1);
    EXPECT_EQ(cli("bounds --rho 0.1").code, 1);
    EXPECT_EQ(cli("--help").code, 0);
}

TEST(Cli, DomainErrorExitTwo) {
    const CliRun r = cli("bounds --delta 1.5 --rho 0.1");
    EXPECT_EQ(r.code, 2);
    EXPECT_EQ(cli("bounds --delta 0.5 --rho 1").code, 2);
}

TEST(Cli, JsonAndCsvAgree) {
    const CliRun c = cli("bounds --delta 0.3 --rho 0.05,0.2");
    const CliRun j = cli("bounds --delta 0.3 --rho 0.05,0.2 --format json");
    ASSERT_EQ(j.code, 0);
    const json env = json::parse(j.out);
    EXPECT_EQ(env["command"], "bounds");
    EXPECT_EQ(env["checksum"], cspt::io::checksum(env["payload"].dump()));
    const auto l = lines(c.out);
    for (std::size_t i = 0; i < 2; ++i) {
        const auto cells = split(l[i + 1]);
        EXPECT_EQ(env["payload"][i]["L"].dump(), cells[2]);
        EXPECT_EQ(env["payload"][i]["U"].dump(), cells[3]);
    }
}

TEST(Cli, TransitionIht) {
    const CliRun r = cli("transition --alg iht --delta 1.0");
    ASSERT_EQ(r.code, 0);
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 2u);
    EXPECT_EQ(l[0], "delta,rho_star,oversampling,residual");
    EXPECT_NEAR(std::stod(split(l[1])[2]), 907.0, 9.07);
}

TEST(Cli, TransitionFourAlgorithmsOrdered) {
    const CliRun r = cli("transition --delta-logspace 0.001,1,5 --format json");
    ASSERT_EQ(r.code, 0);
    const json p = json::parse(r.out)["payload"];
    for (std::size_t i = 0; i < 5; ++i) {
        const double c = p["cosamp"]["points"][i]["rho_star"], s = p["sp"]["points"][i]["rho_star"],
                     h = p["iht"]["points"][i]["rho_star"], l = p["l1"]["points"][i]["rho_star"];
        EXPECT_LT(c, s);
        EXPECT_LT(s, h);
        EXPECT_LT(h, l);
    }
}

TEST(Cli, TransitionPerAlgorithmFiles) {
    const std::string base = testing::TempDir() + "/curve.csv";
    ASSERT_EQ(cli("transition --alg sp,l1 --delta 0.5 --out " + base).code, 0);
    const std::string sp = testing::TempDir() + "/curve_sp.csv";
    const std::string l1 = testing::TempDir() + "/curve_l1.csv";
    EXPECT_EQ(lines(slurp(sp)).size(), 2u);
    EXPECT_EQ(lines(slurp(l1)).size(), 2u);
    const json meta = json::parse(slurp(sp + ".meta.json"));
    EXPECT_EQ(meta["checksum"], cspt::io::checksum(slurp(sp)));
}

TEST(Cli, TransitionLowerTarget) {
    const CliRun half = cli("transition --alg cosamp --delta 0.1,0.6 --target 0.5");
    const CliRun one = cli("transition --alg cosamp --delta 0.1,0.6 --target 1");
    const auto a = lines(half.out), b = lines(one.out);
    for (std::size_t i = 1; i < 3; ++i) EXPECT_LT(std::stod(split(a[i])[1]), std::stod(split(b[i])[1]));
}

TEST(Cli, FactorsTrivial) {
    struct Case {
        const char* alg;
        double mu, xi, kappa;
    };
    for (const Case c : {Case{"cosamp", 0, 6, 1}, Case{"sp", 0, 5, 1}, Case{"iht", 0, 2, 1}}) {
        const CliRun r = cli(std::string("factors --alg ") + c.alg + " --uniform-bounds 0,0");
        ASSERT_EQ(r.code, 0);
        const auto cells = split(lines(r.out)[1]);
        EXPECT_DOUBLE_EQ(std::stod(cells[1]), c.mu);
        EXPECT_DOUBLE_EQ(std::stod(cells[2]), c.xi);
        EXPECT_DOUBLE_EQ(std::stod(cells[3]), c.kappa);
    }
}

TEST(Cli, FactorsRompAndUndefined) {
    const CliRun r = cli("factors --alg romp --n 100");
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(std::stod(split(lines(r.out)[1])[2]), 0.14758, 1e-5);
    const CliRun u = cli("factors --alg l1 --uniform-bounds 0.5,0.9");
    ASSERT_EQ(u.code, 0);
    EXPECT_EQ(split(lines(u.out)[1])[5], "undefined");
    const CliRun d = cli("factors --alg iht --uniform-bounds 0.1,0.1");
    EXPECT_NE(split(lines(d.out)[1])[5], "undefined");
}

TEST(Cli, FactorsFromMatrixAndAsymptotic) {
    EXPECT_EQ(cli("factors --alg sp --matrix " + fixture("gauss_6x10.txt") + " --k 1").code, 0);
    EXPECT_EQ(cli("factors --alg sp --matrix " + fixture("gauss_6x10.txt") + " --k 1 --mode estimate --trials 20").code, 0);
    EXPECT_EQ(cli("factors --alg l1 --delta 0.5 --rho 0.001").code, 0);
    EXPECT_EQ(cli("factors --alg l1 --delta 0.5 --rho 0.001 --uniform-bounds 0,0").code, 1);
}

TEST(Cli, RecoverIdentity) {
    const CliRun r = cli("recover --matrix " + fixture("identity_8.txt") + " --y " +
                      fixture("identity_8_y.txt") + " --k 3 --format json");
    ASSERT_EQ(r.code, 0);
    const json p = json::parse(r.out)["payload"];
    EXPECT_EQ(p["termination"], "residual-zero");
    EXPECT_EQ(p["support"], json::array({1, 4, 6}));
    EXPECT_EQ(p["estimate"][1], 2.0);
    EXPECT_EQ(p["estimate"][4], -1.5);
}

TEST(Cli, RecoverMatchesGolden) {
    const cspt::Vector golden = cspt::io::read_vector(fixture("gauss_8x16_l0.txt"));
    for (const char* alg : {"cosamp", "sp", "iht"}) {
        const CliRun r = cli("recover --matrix " + fixture("gauss_8x16.txt") + " --y " +
                          fixture("gauss_8x16_y.txt") + " --k 2 --format json --alg " + alg);
        ASSERT_EQ(r.code, 0);
        const json est = json::parse(r.out)["payload"]["estimate"];
        for (cspt::Index i = 0; i < golden.size(); ++i) {
            EXPECT_NEAR(est[i].get<double>(), golden(i), 1e-8) << alg << " " << i;
        }
    }
}

TEST(Cli, RecoverErrors) {
    EXPECT_EQ(cli("recover --matrix " + fixture("gauss_8x16.txt") + " --y " +
                  fixture("identity_8_y.txt") + " --k 2")
                  .code,
              0);
    EXPECT_EQ(cli("recover --matrix " + fixture("gauss_6x10.txt") + " --y " +
                  fixture("identity_8_y.txt") + " --k 2")
                  .code,
              2);
    EXPECT_EQ(cli("recover --matrix /nonexistent.txt --y " + fixture("identity_8_y.txt") + " --k 2").code, 3);
}

TEST(Cli, ExperimentReproducible) {
    const std::string args = "experiment --alg sp --delta 0.3,0.6 --rho 0.1,0.2 --n 30 --trials 3 --seed 5";
    const CliRun a = cli(args), b = cli(args);
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(lines(a.out)[0], "delta,rho,k,n,N,trials,successes");
    EXPECT_EQ(lines(a.out).size(), 5u);
    const CliRun ja = cli(args + " --format json"), jb = cli(args + " --format json");
    EXPECT_EQ(json::parse(ja.out)["checksum"], json::parse(jb.out)["checksum"]);
}

TEST(Cli, RipExactAndEstimate) {
    const CliRun id = cli("rip exact --matrix " + fixture("identity_8.txt") + " --order 1,2,3");
    ASSERT_EQ(id.code, 0);
    for (std::size_t i = 1; i <= 3; ++i) {
        const auto c = split(lines(id.out)[i]);
        EXPECT_EQ(std::stod(c[1]), 0.0);
        EXPECT_EQ(std::stod(c[2]), 0.0);
    }
    const CliRun ex = cli("rip-exact --matrix " + fixture("gauss_6x10.txt") + " --order 1,2,3,4");
    const CliRun es = cli("rip-estimate --matrix " + fixture("gauss_6x10.txt") + " --order 1,2,3,4 --trials 30");
    ASSERT_EQ(ex.code, 0);
    ASSERT_EQ(es.code, 0);
    const cspt::Matrix golden = cspt::io::read_matrix(fixture("gauss_6x10_arip.txt"));
    for (std::size_t i = 1; i <= 4; ++i) {
        const auto e = split(lines(ex.out)[i]), m = split(lines(es.out)[i]);
        EXPECT_NEAR(std::stod(e[1]), golden(i - 1, 0), 1e-10);
        EXPECT_NEAR(std::stod(e[2]), golden(i - 1, 1), 1e-10);
        EXPECT_LE(std::stod(m[1]), std::stod(e[1]) + 1e-12);
        EXPECT_LE(std::stod(m[2]), std::stod(e[2]) + 1e-12);
        EXPECT_EQ(m[3], "monte-carlo-lower");
    }
    EXPECT_EQ(cli("rip exact --matrix " + fixture("gauss_6x10.txt") + " --order 7").code, 2);
}
