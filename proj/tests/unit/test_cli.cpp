#include <gtest/gtest.h>

#include <sstream>

#include "commands.hpp"
#include "io.hpp"

using namespace ncho;
using namespace ncho::cli;

namespace {

const std::string fixtures = NCHO_FIXTURES;

struct Run {
    int code;
    std::string out, err;
};

Run run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "ncho");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

ErrorKind parse_kind(const std::string& text) {
    try {
        parse_problem_text(text);
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "parsed: " << text;
    return ErrorKind::DegenerateInput;
}

}  // namespace

TEST(Parse, ScalarAndHarmonicWeight) {
    const auto pf = parse_problem_text(R"({"p":1,"mu":{"n":2,"k":1},"A":[[[1,0]]],"B":[[[0.25,0]]],"C0":[[[0,0]]],"M":32})");
    EXPECT_DOUBLE_EQ(pf.problem.mu, mu_from_harmonic(2, 1));
    EXPECT_EQ(*pf.M, 32);
    EXPECT_FALSE(pf.lambda.has_value());
}

TEST(Parse, A123Form) {
    const auto pf = parse_problem_text(
        R"({"p":1,"mu":0.5,"a123":{"A1":[[[0.5,0]]],"A2":[[[0,0]]],"A3":[[[0.5,0]]]},"C0":[[[0,0]]]})");
    EXPECT_NEAR(pf.problem.A(0, 0).real(), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(pf.problem.B(0, 0)), 0.0, 1e-15);
}

TEST(Parse, SchemaErrors) {
    EXPECT_EQ(parse_kind("{"), ErrorKind::Schema);
    EXPECT_EQ(parse_kind("[]"), ErrorKind::Schema);
    EXPECT_EQ(parse_kind(R"({"p":1,"mu":0.5,"A":[[[1,0]]],"C0":[[[0,0]]]})"), ErrorKind::Schema);
    EXPECT_EQ(parse_kind(R"({"p":1,"mu":0.5,"A":[[[1,0]]],"B":[[[0,0]]],"C0":[[[0,0]]],"extra":1})"), ErrorKind::Schema);
    EXPECT_EQ(parse_kind(R"({"p":0,"mu":0.5,"A":[],"B":[],"C0":[]})"), ErrorKind::Schema);
    EXPECT_EQ(parse_kind(R"({"p":1,"mu":-1,"A":[[[1,0]]],"B":[[[0,0]]],"C0":[[[0,0]]]})"), ErrorKind::Schema);
    EXPECT_EQ(parse_kind(R"({"p":1,"mu":0.5,"A":[[[1,0]]],"B":[[[0,0]]],"C0":[[[0,0]]],"M":4})"), ErrorKind::Schema);
    EXPECT_EQ(parse_kind(R"({"p":1,"mu":0.5,"A":[[1]],"B":[[[0,0]]],"C0":[[[0,0]]]})"), ErrorKind::Schema);
}

TEST(Parse, MissingBReportsPath) {
    try {
        parse_problem_text(R"({"p":1,"mu":0.5,"A":[[[1,0]]],"C0":[[[0,0]]]})");
        FAIL();
    } catch (const SchemaError& e) {
        EXPECT_EQ(e.path(), "/B");
    }
}

TEST(Parse, ShapeAndHermiticity) {
    EXPECT_EQ(parse_kind(R"({"p":2,"mu":0.5,"A":[[[1,0]]],"B":[[[0,0]]],"C0":[[[0,0]]]})"), ErrorKind::Dimension);
    EXPECT_EQ(parse_kind(R"({"p":1,"mu":0.5,"A":[[[1,1]]],"B":[[[0,0]]],"C0":[[[0,0]]]})"), ErrorKind::ContractViolation);
}

TEST(Format, Rounding) {
    EXPECT_EQ(round12(1e-14), 0.0);
    EXPECT_EQ(round12(0.1 + 0.2), 0.3);
    EXPECT_EQ(format12(2.0 / 3.0), "0.666666666667");
    EXPECT_TRUE(num(std::nan("")).is_null());
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_cli({"verify-pencil", fixtures + "/scalar.json"}).code, 0);
    EXPECT_EQ(run_cli({"verify-pencil", fixtures + "/missing_b.json"}).code, 2);
    EXPECT_EQ(run_cli({"verify-pencil", fixtures + "/non_hermitian.json"}).code, 3);
    EXPECT_EQ(run_cli({"spectrum", fixtures + "/not_positive.json"}).code, 4);
    EXPECT_EQ(run_cli({"no-such-command"}).code, 2);
    EXPECT_EQ(run_cli({"heun-params", fixtures + "/scalar.json", "--lambda", "1"}).code, 3);
}

TEST(Cli, ErrorDocument) {
    const auto r = run_cli({"spectrum", fixtures + "/missing_b.json"});
    const auto doc = json::parse(r.out);
    EXPECT_EQ(doc["error"]["kind"], "SchemaError");
    EXPECT_EQ(doc["error"]["path"], "/B");
    EXPECT_EQ(doc["error"]["exit_code"], 2);
}

TEST(Cli, SpectrumBothAgree) {
    const auto r = run_cli({"spectrum", fixtures + "/scalar.json", "--method", "both", "--count", "4"});
    ASSERT_EQ(r.code, 0) << r.out << r.err;
    const auto doc = json::parse(r.out);
    EXPECT_LT(doc["max_difference"].get<double>(), 1e-8);
}

TEST(Cli, Deterministic) {
    for (const char* cmd : {"verify-pencil", "positivity", "fuchsian", "spectrum"}) {
        std::vector<std::string> args{cmd, fixtures + "/ncho_eta01.json"};
        EXPECT_EQ(run_cli(args).out, run_cli(args).out) << cmd;
    }
}
