#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "cli.hpp"
#include "json_io.hpp"

using grassgeo::cli::Json;

namespace {

struct Run {
    int status;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args, const std::string& input = "") {
    args.insert(args.begin(), "grassgeo");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::istringstream in(input);
    std::ostringstream out, err;
    const int status = grassgeo::cli::run(static_cast<int>(argv.size()), argv.data(), in, out, err);
    return {status, out.str(), err.str()};
}

const char* kScalarOne = R"({"B": {"rows": 1, "cols": 1, "data": [[1, 0]]}})";

}  // namespace

TEST_CASE("exp on the CP^1 example") {
    const Run r = invoke({"exp", "--space", "1", "1", "compact", "--t", "0.7"}, kScalarOne);
    REQUIRE(r.status == 0);
    const Json doc = Json::parse(r.out);
    const Json& z = doc["result"]["Z"];
    CHECK(z["rows"] == 1);
    CHECK(z["data"][0][0].get<double>() == doctest::Approx(std::tan(0.7)).epsilon(1e-15));
    CHECK(z["data"][0][1].get<double>() == 0.0);
}

TEST_CASE("exp --verify reports the ODE discrepancy") {
    const Run r = invoke({"exp", "--space", "2", "2", "--random", "3", "--seed", "5", "--verify"});
    REQUIRE(r.status == 0);
    const Json doc = Json::parse(r.out);
    REQUIRE(doc["results"].size() == 3);
    for (const auto& item : doc["results"]) {
        CHECK(item.contains("input"));
        CHECK(item["verify"]["max_abs_diff"].get<double>() < 1e-6);
    }
}

TEST_CASE("overlap --verify agrees with Cauchy-Binet") {
    for (const char* kind : {"compact", "noncompact"}) {
        const Run r = invoke({"overlap", "--space", "2", "3", kind, "--random", "4", "--verify"});
        REQUIRE(r.status == 0);
        for (const auto& item : Json::parse(r.out)["results"]) {
            const double scale = std::hypot(item["raw"][0].get<double>(), item["raw"][1].get<double>());
            CHECK(item["verify"]["abs_diff"].get<double>() < 1e-12 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("char-numbers and conjugate-times examples") {
    const Run c = invoke({"char-numbers", "--space", "2", "2"});
    REQUIRE(c.status == 0);
    const Json r = Json::parse(c.out)["result"];
    for (const char* key : {"euler", "weyl_ratio", "cell_count", "fundamental_rep_dim", "kodaira_N", "critical_count",
                            "max_orthogonal_coherent"}) {
        CHECK(r[key] == 6);
    }

    const Run t = invoke({"conjugate-times", "--space", "2", "2", "--h", "0.8", "0.6", "--tmax", "3"});
    REQUIRE(t.status == 0);
    const Json times = Json::parse(t.out)["result"]["times"];
    REQUIRE(times.size() == 3);
    CHECK(times[0]["t"].get<double>() == doctest::Approx(1.9634954084936207));
    CHECK(times[1]["t"].get<double>() == doctest::Approx(2.2439947525641379));
    CHECK(times[2]["t"].get<double>() == doctest::Approx(2.6179938779914944));
}

TEST_CASE("batch output keeps input order") {
    const std::string input = R"([
        {"B": {"rows": 1, "cols": 1, "data": [[0.1, 0]]}},
        {"B": {"rows": 1, "cols": 1, "data": [[0.2, 0]]}},
        {"B": {"rows": 1, "cols": 1, "data": [[0.3, 0]]}}
    ])";
    const Run r = invoke({"exp", "--space", "1", "1"}, input);
    REQUIRE(r.status == 0);
    const Json res = Json::parse(r.out)["results"];
    for (int i = 0; i < 3; ++i) {
        CHECK(res[static_cast<std::size_t>(i)]["Z"]["data"][0][0].get<double>() ==
              doctest::Approx(std::tan(0.1 * (i + 1))).epsilon(1e-15));
    }
}

TEST_CASE("malformed JSON is a usage error with a position") {
    const Run r = invoke({"exp", "--space", "1", "1"}, "{\n  \"B\": [1,\n}");
    CHECK(r.status == 2);
    const Json e = Json::parse(r.err)["error"];
    CHECK(e["type"] == "usage");
    CHECK(e["line"] == 3);
    CHECK(e["column"] == 1);
}

TEST_CASE("usage errors") {
    CHECK(invoke({"exp"}, kScalarOne).status == 2);
    CHECK(invoke({"exp", "--space", "1"}, kScalarOne).status == 2);
    CHECK(invoke({"exp", "--space", "1", "1", "sideways"}, kScalarOne).status == 2);
    CHECK(invoke({"exp", "--space", "1", "1", "--output", "xml"}, kScalarOne).status == 2);
    CHECK(invoke({"exp", "--space", "1", "1", "--output", "csv"}, kScalarOne).status == 2);
    CHECK(invoke({"exp", "--space", "1", "1"}, "").status == 2);
    CHECK(invoke({"exp", "--space", "1", "1"}, R"({"Q": 1})").status == 2);
    CHECK(invoke({"conjugate-times", "--space", "2", "2", "--h", "1"}).status == 2);
    CHECK(invoke({"--help"}).status == 0);
}

TEST_CASE("domain errors carry a machine-readable object") {
    const std::string pair = R"({"Z1": {"rows": 1, "cols": 1, "data": [[1, 0]]},
                                 "Z2": {"rows": 1, "cols": 1, "data": [[-1, 0]]}})";
    const Run r = invoke({"diastasis", "--space", "1", "1"}, pair);
    CHECK(r.status == 1);
    CHECK(Json::parse(r.out)["error"]["type"] == "diastasis_undefined");

    const Run outside = invoke({"log", "--space", "1", "1", "noncompact"},
                               R"({"Z": {"rows": 1, "cols": 1, "data": [[1.5, 0]]}})");
    CHECK(outside.status == 1);
    CHECK(Json::parse(outside.out)["error"]["type"] == "domain");

    const Run unsupported = invoke({"cut-test", "--space", "1", "1", "noncompact", "--random", "1"});
    CHECK(unsupported.status == 1);
    CHECK(Json::parse(unsupported.out)["results"][0]["error"]["type"] == "unsupported_space");
}

TEST_CASE("matrix documents round-trip bit for bit") {
    const Run r = invoke({"log", "--space", "3", "2", "--random", "5", "--seed", "11"});
    REQUIRE(r.status == 0);
    for (const auto& item : Json::parse(r.out)["results"]) {
        const auto B = grassgeo::cli::matrix_from_json(item["B"], "B");
        grassgeo::cli::OrderedJson again = grassgeo::cli::matrix_to_json(B);
        const auto B2 = grassgeo::cli::matrix_from_json(Json::parse(grassgeo::cli::dump(again)), "B");
        CHECK(B == B2);
        CHECK(grassgeo::cli::dump(again) == grassgeo::cli::dump(grassgeo::cli::OrderedJson::parse(item["B"].dump())));
    }
    CHECK(grassgeo::cli::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("fixed seeds give byte-identical output") {
    const std::vector<std::string> scan = {"conjugate-scan", "--space", "2", "2", "--h", "0.8", "0.6",
                                           "--points", "40", "--output", "csv"};
    const Run a = invoke(scan), b = invoke(scan);
    REQUIRE(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("t,min_singular_normalized,predicted_flag\n", 0) == 0);

    const Run c = invoke({"distance", "--space", "2", "3", "--random", "6", "--seed", "9"});
    const Run d = invoke({"distance", "--space", "2", "3", "--random", "6", "--seed", "9"});
    const Run e = invoke({"distance", "--space", "2", "3", "--random", "6", "--seed", "10"});
    CHECK(c.out == d.out);
    CHECK(c.out != e.out);
}

TEST_CASE("GRASSGEO_TOL overrides the default tolerance") {
    // |det| = cos(pi/2 - 1e-6) ~ 1e-6: off the divisor at 1e-9, on it at 1e-5
    const double c = std::cos(M_PI / 2 - 1e-6), s = std::sin(M_PI / 2 - 1e-6);
    std::ostringstream in;
    in.precision(17);
    in << R"({"F": {"rows": 2, "cols": 1, "data": [)" << c << ", " << s << "]}}";
    const Run plain = invoke({"cut-test", "--space", "1", "1"}, in.str());
    CHECK(Json::parse(plain.out)["result"]["on_cut_locus"] == false);
    setenv("GRASSGEO_TOL", "1e-5", 1);
    const Run env = invoke({"cut-test", "--space", "1", "1"}, in.str());
    const Run flag = invoke({"cut-test", "--space", "1", "1", "--tol", "1e-9"}, in.str());
    unsetenv("GRASSGEO_TOL");
    CHECK(Json::parse(env.out)["result"]["on_cut_locus"] == true);
    CHECK(Json::parse(flag.out)["result"]["on_cut_locus"] == false);
}

TEST_CASE("schubert membership through the CLI") {
    const Run r = invoke({"schubert", "--space", "2", "2", "--flag", "complement", "--wong", "2", "1"},
                         R"({"F": {"rows": 4, "cols": 2, "data": [0, 0, 1, 0, 0, 1, 0, 0]}})");
    REQUIRE(r.status == 0);
    const Json res = Json::parse(r.out)["result"];
    CHECK(res["in_Z"] == true);
    CHECK(res["omega"] == Json::array({1, 2}));
}
