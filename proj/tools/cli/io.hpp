#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "ncho/problem.hpp"

namespace ncho::cli {

using json = nlohmann::ordered_json;

class SchemaError : public Error {
public:
    SchemaError(const std::string& path, const std::string& what)
        : Error(ErrorKind::Schema, path.empty() ? what : path + ": " + what), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct ProblemFile {
    NchoProblem problem;
    std::optional<double> lambda;
    std::optional<int> M;
    std::optional<double> tol;
};

ProblemFile parse_problem(const json& doc);
ProblemFile parse_problem_text(const std::string& text);
// "-" reads stdin.
ProblemFile parse_problem_file(const std::string& path);

// Rounds to 12 significant digits and flushes |x| < 1e-13 to zero, so output does
// not depend on the last bits.
double round12(double x);
json num(double x);
json num(cplx z);  // [re, im]
json num(const CMatrix& m);
json num(const std::vector<cplx>& v);
json num(const std::vector<double>& v);

std::string format12(double x);  // for CSV

}  // namespace ncho::cli
