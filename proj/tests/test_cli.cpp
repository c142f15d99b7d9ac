#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(DCHE_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe)
        return {-1, {}};
    std::string out;
    std::array<char, 4096> buf{};
    while (const std::size_t n = fread(buf.data(), 1, buf.size(), pipe))
        out.append(buf.data(), n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

const std::string kPoly = "--alpha -1 --gamma 3 --delta 2 --epsilon 1 --q 1 --family three-term-a";

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);)
        out.push_back(l);
    return out;
}

} // namespace

TEST(Cli, CoefficientTableExact) {
    const auto r = run("coeffs " + kPoly + " --terms 3 --mode exact --format csv");
    ASSERT_EQ(r.code, 0);
    const auto ls = lines(r.out);
    ASSERT_EQ(ls.size(), 5u);
    EXPECT_EQ(ls[0], "n,a_n,R_n,Q_n,P_n");
    EXPECT_EQ(ls[1], "0,1,0,-1,2/3");
    EXPECT_EQ(ls[2], "1,-1/3,-3,2,0");
    EXPECT_EQ(ls[3], "2,0,-8,7,-2/5");
}

TEST(Cli, ExactModeIsDeterministic) {
    const auto a = run("coeffs " + kPoly + " --terms 12 --mode exact --format json");
    const auto b = run("coeffs " + kPoly + " --terms 12 --mode exact --format json");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("\"-1/3\""), std::string::npos);
}

TEST(Cli, VerifyPassesOnExactCase) {
    const auto r = run("verify " + kPoly + " --terms 6 --mode exact --z-grid 0.5:3:6 --format csv");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
}

TEST(Cli, VerifyDetectsCorruption) {
    const auto r = run("verify " + kPoly + " --terms 6 --mode exact --z-grid 0.5:3:6 --inject-corruption --format csv");
    EXPECT_EQ(r.code, 6);
    EXPECT_NE(r.out.find("recurrence-rows,FAIL"), std::string::npos) << r.out;
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("coeffs " + kPoly.substr(0, kPoly.find("--family")) + "--family three-term-deg --terms 3").code, 2);
    EXPECT_EQ(run("eval " + kPoly + " --terms 6 --z-grid 0:2:3").code, 5);
    EXPECT_EQ(run("coeffs --alpha 1/2 --gamma 1/2 --delta 1 --epsilon 1 --q 0 --family five-term --terms 3 --gamma0 1/2")
                  .code,
              3);
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("coeffs " + kPoly + " --terms 3 --format yaml").code, 1);
    EXPECT_EQ(run("coeffs " + kPoly + " --terms 3 --family nope").code, 1);
    EXPECT_EQ(run("coeffs " + kPoly + " --terms 3 --gamma x").code, 1);
    EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, EvalFormats) {
    const auto csv = run("eval " + kPoly + " --terms 6 --z-grid 0.5:2:3 --format csv");
    ASSERT_EQ(csv.code, 0);
    const auto ls = lines(csv.out);
    ASSERT_EQ(ls.size(), 4u);
    EXPECT_EQ(ls[0].rfind("z,u,", 0), 0u);
    EXPECT_EQ(ls[1].rfind("0.5,0.8333333333333", 0), 0u) << ls[1];

    const auto table = run("eval " + kPoly + " --terms 6 --z-grid 0.5:2:3 --format table");
    ASSERT_EQ(table.code, 0);
    EXPECT_EQ(lines(table.out).size(), 4u);
    for (const auto& l : lines(table.out))
        EXPECT_TRUE(l.empty() || l.back() != ' ') << "trailing blank: '" << l << "'";

    const auto json = run("eval " + kPoly + " --terms 6 --z-grid 0.5:2:3 --format json");
    ASSERT_EQ(json.code, 0);
    EXPECT_EQ(json.out.front(), '{');
}

TEST(Cli, TerminateExact) {
    const auto r = run("terminate --alpha -1 --gamma 3 --delta 2 --epsilon 1 --family three-term-a --order 1 --mode exact "
                       "--format csv");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("(2/3) + (1/3)*z"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("(1/3) + (1/3)*z"), std::string::npos) << r.out;
}

TEST(Cli, DeriveAndCompare) {
    const auto d = run("derive --gamma 3 --delta 2 --epsilon 1 --q 1 --family three-term-a --terms 2 --format json");
    EXPECT_EQ(d.code, 0);
    EXPECT_NE(d.out.find("\"row_names\""), std::string::npos);

    const auto c = run("oracle-compare " + kPoly + " --terms 6 --z 1 --z-grid 0.5:3:6 --format csv");
    EXPECT_EQ(c.code, 0) << c.out;
    EXPECT_EQ(lines(c.out).size(), 7u) << c.out;
}

TEST(Cli, OutputFile) {
    const std::string path = testing::TempDir() + "dche_cli_out.json";
    ASSERT_EQ(run("coeffs " + kPoly + " --terms 2 --output " + path).code, 0);
    FILE* f = std::fopen(path.c_str(), "r");
    ASSERT_NE(f, nullptr);
    std::fclose(f);
    std::remove(path.c_str());
}
