#include "io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

namespace ncho::cli {

namespace {

const json& require(const json& obj, const std::string& key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(path + "/" + key, "required field is missing");
    return *it;
}

double as_real(const json& v, const std::string& path) {
    if (!v.is_number()) throw SchemaError(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw SchemaError(path, "expected a finite number");
    return x;
}

int as_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw SchemaError(path, "expected an integer");
    return v.get<int>();
}

cplx as_complex(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) throw SchemaError(path, "expected a [re, im] pair");
    return {as_real(v[0], path + "/0"), as_real(v[1], path + "/1")};
}

CMatrix as_matrix(const json& v, int p, const std::string& path) {
    if (!v.is_array()) throw SchemaError(path, "expected a matrix as nested arrays of [re, im] pairs");
    if (static_cast<int>(v.size()) != p)
        throw Error(ErrorKind::Dimension, path + ": expected " + std::to_string(p) + " rows, got " +
                                              std::to_string(v.size()));
    CMatrix m(p, p);
    for (int r = 0; r < p; ++r) {
        const std::string rp = path + "/" + std::to_string(r);
        const json& row = v[static_cast<size_t>(r)];
        if (!row.is_array()) throw SchemaError(rp, "expected a row array");
        if (static_cast<int>(row.size()) != p)
            throw Error(ErrorKind::Dimension, rp + ": expected " + std::to_string(p) + " columns, got " +
                                                  std::to_string(row.size()));
        for (int c = 0; c < p; ++c) m(r, c) = as_complex(row[static_cast<size_t>(c)], rp + "/" + std::to_string(c));
    }
    return m;
}

}  // namespace

ProblemFile parse_problem(const json& doc) {
    if (!doc.is_object()) throw SchemaError("", "problem file must be a JSON object");
    static const char* known[] = {"p", "mu", "A", "B", "C0", "a123", "lambda", "M", "tol"};
    for (const auto& [key, _] : doc.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) throw SchemaError("/" + key, "unknown field");
    }

    const int p = as_int(require(doc, "p", ""), "/p");
    if (p < 1 || p > 8) throw SchemaError("/p", "p must be between 1 and 8");

    double mu = 0.0;
    const json& jm = require(doc, "mu", "");
    if (jm.is_object()) {
        const int n = as_int(require(jm, "n", "/mu"), "/mu/n");
        const int k = as_int(require(jm, "k", "/mu"), "/mu/k");
        if (n < 1 || k < 0) throw SchemaError("/mu", "need n >= 1 and k >= 0");
        mu = mu_from_harmonic(n, k);
    } else {
        mu = as_real(jm, "/mu");
    }
    if (!(mu > 0.0)) throw SchemaError("/mu", "mu must be positive");

    const bool has_ab = doc.contains("A") || doc.contains("B");
    const bool has_a123 = doc.contains("a123");
    if (has_ab && has_a123) throw SchemaError("/a123", "give either A and B or a123, not both");
    if (!has_ab && !has_a123) throw SchemaError("/B", "either A and B or a123 is required");

    CMatrix A, B;
    if (has_a123) {
        const json& t = doc.at("a123");
        if (!t.is_object()) throw SchemaError("/a123", "expected an object with A1, A2, A3");
        const CMatrix A1 = as_matrix(require(t, "A1", "/a123"), p, "/a123/A1");
        const CMatrix A2 = as_matrix(require(t, "A2", "/a123"), p, "/a123/A2");
        const CMatrix A3 = as_matrix(require(t, "A3", "/a123"), p, "/a123/A3");
        const ABPair ab = ab_from_a123(A1, A2, A3);
        A = ab.A;
        B = ab.B;
    } else {
        A = as_matrix(require(doc, "A", ""), p, "/A");
        B = as_matrix(require(doc, "B", ""), p, "/B");
    }
    const CMatrix C0 = as_matrix(require(doc, "C0", ""), p, "/C0");

    ProblemFile pf;
    pf.problem = make_problem(mu, A, B, C0);
    if (doc.contains("lambda")) pf.lambda = as_real(doc.at("lambda"), "/lambda");
    if (doc.contains("M")) {
        pf.M = as_int(doc.at("M"), "/M");
        if (*pf.M < 8) throw SchemaError("/M", "M must be at least 8");
    }
    if (doc.contains("tol")) {
        pf.tol = as_real(doc.at("tol"), "/tol");
        if (!(*pf.tol > 0.0)) throw SchemaError("/tol", "tol must be positive");
    }
    return pf;
}

ProblemFile parse_problem_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError("", std::string("malformed JSON: ") + e.what());
    }
    return parse_problem(doc);
}

ProblemFile parse_problem_file(const std::string& path) {
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    } else {
        std::ifstream in(path);
        if (!in) throw SchemaError("", "cannot open problem file " + path);
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    return parse_problem_text(text);
}

double round12(double x) {
    if (!std::isfinite(x)) return x;
    if (std::abs(x) < 1e-13) return 0.0;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", x);
    const double r = std::strtod(buf, nullptr);
    return r == 0.0 ? 0.0 : r;
}

json num(double x) {
    if (!std::isfinite(x)) return nullptr;
    return round12(x);
}

json num(cplx z) { return json::array({num(z.real()), num(z.imag())}); }

json num(const CMatrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(num(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json num(const std::vector<cplx>& v) {
    json a = json::array();
    for (const auto& z : v) a.push_back(num(z));
    return a;
}

json num(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(num(x));
    return a;
}

std::string format12(double x) {
    if (!std::isfinite(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", round12(x));
    return buf;
}

}  // namespace ncho::cli
