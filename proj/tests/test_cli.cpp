#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hochkit/cli.hpp"
#include "hochkit/errors.hpp"
#include "hochkit/io.hpp"

using namespace hochkit;
namespace fs = std::filesystem;

namespace {

const std::string corpus = HOCHKIT_CORPUS_DIR;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "hochkit");
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string path(const std::string& name)
{
    return corpus + "/" + name;
}

fs::path scratch()
{
    fs::path dir = fs::temp_directory_path() / "hochkit_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string write_scratch(const std::string& name, const std::string& contents)
{
    fs::path p = scratch() / name;
    std::ofstream(p) << contents;
    return p.string();
}

std::string slurp(const std::string& p)
{
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

} // namespace

TEST_CASE("hh writes a loday table")
{
    std::string out = (scratch() / "b.json").string();
    Result r = run({"hh", "--algebra", path("dual.json"), "--space", "circle:min", "--smax", "4", "--out", out});
    CHECK(r.code == cli::ok);
    CHECK(r.out.find("provenance: loday") != std::string::npos);
    auto j = nlohmann::json::parse(slurp(out));
    CHECK(j["provenance"] == "loday");
    CHECK(j["s_valid"] == 4);
    std::vector<int> dims;
    for (const auto& e : j["entries"])
        dims.push_back(e["dim"].get<int>());
    CHECK(dims == std::vector<int>{2, 1, 1, 1, 1});
}

TEST_CASE("artifacts are byte-identical across runs")
{
    std::vector<std::vector<std::string>> commands = {
        {"hh", "--algebra", path("exterior.json"), "--smax", "3"},
        {"compare", "--left", "loday", "--right", "oracle", "--algebra", path("dual.json"), "--smax", "3"},
        {"sseq", "--source", "bar", "--algebra", path("qxq.json"), "--smax", "2"},
        {"poset-hh", "--arcs", "3", "--algebra", path("dual.json"), "--edge", "e0"},
        {"cohomology", "--algebra", path("dual.json"), "--nmax", "3"},
    };
    for (std::size_t i = 0; i < commands.size(); ++i) {
        std::string a = (scratch() / ("a" + std::to_string(i) + ".json")).string();
        std::string b = (scratch() / ("b" + std::to_string(i) + ".json")).string();
        auto first = commands[i], second = commands[i];
        first.insert(first.end(), {"--out", a});
        second.insert(second.end(), {"--out", b});
        Result ra = run(first), rb = run(second);
        CHECK(ra.code == rb.code);
        CHECK(ra.out == rb.out);
        CHECK(slurp(a) == slurp(b));
        CHECK_FALSE(slurp(a).empty());
    }
}

TEST_CASE("compare reports agreement and mismatch")
{
    Result agree = run({"compare", "--left", "loday", "--right", "oracle", "--algebra", path("dual.json"), "--smax", "4"});
    CHECK(agree.code == cli::ok);
    CHECK(agree.out.find("verdict: agree") != std::string::npos);

    Result json = run({"compare", "--left", "bar", "--right", "oracle", "--algebra", path("q3.json"), "--smax", "3",
                       "--json"});
    CHECK(json.code == cli::ok);
    auto j = nlohmann::json::parse(json.out);
    CHECK(j["verdict"] == "agree");
    CHECK(j["window"] == 3);
    CHECK(j["first_mismatch"].is_null());

    Result differ = run({"compare", "--left", "loday", "--right", "poset", "--algebra", path("qxq.json"), "--smax", "1",
                         "--json"});
    CHECK(differ.code == cli::mismatch);
    auto d = nlohmann::json::parse(differ.out);
    CHECK(d["verdict"] == "disagree");
    CHECK(d["first_mismatch"]["s"] == 1);

    Result susp = run({"compare", "--left", "suspension", "--right", "loday", "--sphere", "2", "--space", "sphere:2",
                       "--algebra", path("dual.json"), "--smax", "2"});
    CHECK(susp.code == cli::ok);
}

TEST_CASE("comparison window is bounded by both tables")
{
    BettiTable a{"x", 2, {{{0, 0}, 1}}};
    BettiTable b{"y", 4, {{{0, 0}, 1}, {{3, 0}, 1}}};
    cli::ComparisonReport r = cli::compare_tables(a, b, 5);
    CHECK(r.window == 2);
    CHECK(r.agree);
    b.entries[{1, 2}] = 1;
    r = cli::compare_tables(a, b, 5);
    CHECK_FALSE(r.agree);
    CHECK(r.first_mismatch == std::pair<int, int>{1, 2});
}

TEST_CASE("etale-check")
{
    Result r = run({"etale-check", "--algebra", path("qxq.json"), "--sphere", "2", "--smax", "3"});
    CHECK(r.code == cli::ok);
    CHECK(r.out.find("étale: true; HH^{S^2} ≅ A: true") != std::string::npos);
    Result d = run({"etale-check", "--algebra", path("dual.json"), "--sphere", "1", "--smax", "2"});
    CHECK(d.out.find("étale: false; HH^{S^1} ≅ A: false") != std::string::npos);
}

TEST_CASE("every pipeline subcommand runs")
{
    auto provenance = [](const Result& r) { return nlohmann::json::parse(r.out)["provenance"].get<std::string>(); };
    CHECK(provenance(run({"hh-bar", "--algebra", path("dual.json"), "--sphere", "1", "--smax", "2", "--json"})) ==
          "bar-suspension");
    CHECK(provenance(run({"oracle-hh", "--algebra", path("mat2.json"), "--smax", "2", "--json"})) == "oracle");
    CHECK(provenance(run({"cohomology", "--algebra", path("mat2.json"), "--nmax", "2", "--json"})) ==
          "hochschild-cohomology");
    Result rhom = run({"rhom", "--algebra", path("mat2.json"), "--left", "regular", "--right", path("mat2_column.json"),
                       "--nmax", "2", "--json"});
    CHECK(provenance(rhom) == "cobar");
    CHECK(nlohmann::json::parse(rhom.out)["entries"][0]["dim"] == 2);
    Result poset = run({"poset-hh", "--poset", path("arcs2.json"), "--algebra", path("dual.json"), "--edge", "V1",
                        "--json"});
    CHECK(provenance(poset) == "poset");
    CHECK(nlohmann::json::parse(poset.out)["edge_map"]["iso"] == true);
    Result constant = run({"poset-hh", "--arcs", "2", "--json"});
    CHECK(nlohmann::json::parse(constant.out)["entries"].size() == 1);

    for (const std::string& source : {"bar", "suspension", "poset"}) {
        Result s = run({"sseq", "--source", source, "--algebra", path("dual.json"), "--smax", "2", "--json"});
        CHECK(s.code == cli::ok);
        auto j = nlohmann::json::parse(s.out);
        CHECK(j["converges"] == true);
        CHECK(j["pages"].back()["r"] == "infinity");
    }
}

TEST_CASE("relative homology from files")
{
    Result rel = run({"compare", "--left", "loday", "--right", "oracle", "--algebra", path("dual_x_dual.json"), "--base",
                      path("qxq.json"), "--base-map", path("dual_x_dual_over_qxq.json"), "--smax", "3"});
    CHECK(rel.code == cli::ok);
}

TEST_CASE("validate accepts the shipped corpus")
{
    for (const char* f : {"q.json", "dual.json", "qxq.json", "q3.json", "f4.json", "exterior.json", "mat2.json",
                          "dual_x_dual.json"})
        CHECK(run({"validate", "--algebra", path(f)}).code == cli::ok);
    CHECK(run({"validate", "--algebra", path("dual_x_dual.json"), "--base", path("qxq.json"), "--base-map",
               path("dual_x_dual_over_qxq.json")})
              .code == cli::ok);
    CHECK(run({"validate", "--poset", path("arcs2.json"), "--algebra", path("qxq.json")}).code == cli::ok);
    CHECK(run({"validate", "--space", path("circle.json")}).code == cli::ok);
    CHECK(run({"validate", "--algebra", path("mat2.json"), "--module", path("mat2_column.json")}).code == cli::ok);
}

TEST_CASE("usage errors exit 1")
{
    CHECK(run({}).code == cli::usage);
    CHECK(run({"frobnicate"}).code == cli::usage);
    CHECK(run({"hh", "--smax", "2"}).code == cli::usage);
    CHECK(run({"hh", "--algebra", path("dual.json"), "--smax", "-1"}).code == cli::usage);
    CHECK(run({"hh", "--algebra", path("dual.json"), "--space", "torus:9"}).code == cli::usage);
    CHECK(run({"compare", "--left", "loday", "--right", "nothing", "--algebra", path("dual.json")}).code == cli::usage);
    CHECK(run({"hh", "--algebra", path("dual.json"), "--field", "Fp:4"}).code == cli::usage);
    CHECK(run({"poset-hh", "--arcs", "2", "--smax", "2", "--edge", "nowhere"}).code == cli::usage);
    CHECK(run({"hh", "--help"}).code == cli::ok);
}

TEST_CASE("input validation errors exit 2")
{
    // x·x = 1 and x·1 = 0 breaks the unit
    std::string broken = write_scratch("broken.json", R"({"field": "Q",
        "basis": [{"name": "1", "degree": 0}, {"name": "x", "degree": 0}], "unit": ["1", "0"],
        "table": [[["1", "0"], ["0", "1"]], [["0", "0"], ["1", "0"]]], "commutative": true})");
    Result r = run({"validate", "--algebra", broken});
    CHECK(r.code == cli::invalid);
    CHECK(r.err.find("invalid input") != std::string::npos);

    std::string half = write_scratch("half.json", R"({"field": "Q",
        "basis": [{"name": "1", "degree": 0}], "unit": ["1"], "table": [[["1"]]], "commutative": true})");
    CHECK(run({"validate", "--algebra", half, "--field", "Fp:2"}).code == cli::ok);
    std::string halves = write_scratch("halves.json", R"({"field": "Q",
        "basis": [{"name": "e", "degree": 0}], "unit": ["2"], "table": [[["1/2"]]], "commutative": true})");
    CHECK(run({"validate", "--algebra", halves}).code == cli::ok);
    CHECK(run({"validate", "--algebra", halves, "--field", "Fp:2"}).code == cli::invalid);
    CHECK(run({"validate", "--algebra", halves, "--field", "Fp:3"}).code == cli::ok);

    std::string cycle = write_scratch("cycle.json", R"({"objects": [{"name": "a"}, {"name": "b"}],
        "relations": [["a", "b"], ["b", "a"]]})");
    CHECK(run({"validate", "--poset", cycle}).code == cli::invalid);

    std::string bad_space = write_scratch("bad_space.json", R"({"cells": [{"dim": 0, "name": "v"},
        {"dim": 1, "name": "e", "faces": [{"base": "w", "word": []}, {"base": "v", "word": []}]}]})");
    CHECK(run({"validate", "--space", bad_space}).code == cli::invalid);

    std::string bad_module = write_scratch("bad_module.json", R"({"degrees": [0], "action": [["1"], ["1"]]})");
    CHECK(run({"validate", "--algebra", path("dual.json"), "--module", bad_module}).code == cli::invalid);

    std::string not_json = write_scratch("not.json", "{ nope");
    CHECK(run({"validate", "--algebra", not_json}).code == cli::invalid);

    CHECK(run({"hh", "--algebra", path("mat2.json"), "--smax", "1"}).code == cli::invalid);
}

TEST_CASE("algebra files round-trip")
{
    for (const char* f : {"dual.json", "f4.json", "exterior.json", "mat2.json"}) {
        GradedAlgebra a = io::load_algebra(path(f));
        GradedAlgebra b = io::algebra_from_json(nlohmann::json::parse(io::algebra_to_json(a).dump()));
        CHECK(io::algebra_to_json(a) == io::algebra_to_json(b));
    }
    GradedAlgebra f4 = io::load_algebra(path("f4.json"));
    CHECK(f4.field().characteristic() == 2);
}
