#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dtaoi/analyzer.hpp"
#include "dtaoi/cli.hpp"
#include "dtaoi/config.hpp"
#include "dtaoi/errors.hpp"

using namespace dtaoi;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args)
{
    std::ostringstream out;
    std::ostringstream err;
    Run r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path scratch()
{
    const fs::path dir = fs::temp_directory_path() / "dtaoi_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string write_file(const std::string& name, const std::string& text)
{
    const fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* kFigureConfig = R"({
  "sources": [0.007142857142857143, 0.014285714285714285, 0.02857142857142857],
  "q": 0.1,
  "discipline": "npsbr",
  "tagged_source": 1,
  "solver": {"tol": 1e-12, "max_iter": 100000},
  "sim": {"horizon": 1000000, "warmup": 10000, "seed": 1}
})";

} // namespace

TEST_CASE("configuration parsing")
{
    const Config c = parse_config(kFigureConfig);
    CHECK(c.scenario.p.size() == 3);
    CHECK(c.scenario.discipline == Discipline::npsbr);
    CHECK(c.sim.seed == 1);
    CHECK(c.hash.size() == 16);
    CHECK(c.hash == fnv1a_hex(kFigureConfig));
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");

    const auto error_of = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const InvalidInput& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(error_of(R"({"q":0.1,"discipline":"pb"})").find("sources") != std::string::npos);
    CHECK(error_of(R"({"sources":[0.5],"q":"x","discipline":"pb"})").find("q:") != std::string::npos);
    CHECK(error_of(R"({"sources":[0.5],"q":0.1,"discipline":"pb","sim":{"horizon":-1}})").find("sim.horizon")
          != std::string::npos);
    CHECK(error_of(R"({"sources":[0.5],"q":0.1,"discipline":"pb","search":{"alpha":3}})").find("search.alpha")
          != std::string::npos);
    CHECK(error_of(R"({"sources":[0.5],"q":0.1,"discipline":"pb","solvr":{}})").find("solvr")
          != std::string::npos);
    CHECK(error_of(R"({"sources":[0.5, 0.2],"q":0.1,"discipline":"xx"})").find("discipline")
          != std::string::npos);
    CHECK(error_of("{").find("malformed") != std::string::npos);
}

TEST_CASE("number formatting")
{
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.25) == "0.25");
    CHECK(std::stod(format_double(1e-20)) == 1e-20);
}

TEST_CASE("analyze: CSV and JSON")
{
    const std::string cfg = write_file("fig1.json", kFigureConfig);
    Run r = run({"analyze", cfg, "--format", "csv", "--tail-eps", "1e-6"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# tool=dtaoi") != std::string::npos);
    CHECK(r.out.find("# config_hash=" + parse_config(kFigureConfig).hash) != std::string::npos);
    CHECK(r.out.find("# solver_tol=") != std::string::npos);
    CHECK(r.out.find("\nell,aoi_pmf,aoi_cdf,paoi_pmf,paoi_cdf\n0,") != std::string::npos);

    r = run({"analyze", cfg, "--source", "4"});
    CHECK(r.code == 2);
    CHECK(r.err.find("tagged_source out of range") != std::string::npos);

    const std::string json_out = (scratch() / "fig1.json.out").string();
    r = run({"analyze", cfg, "--format", "json", "--out", json_out, "--source", "2"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(slurp(json_out));
    Config c = load_config(cfg);
    c.scenario.tagged_source = 2;
    const AgeResult direct = analyze(c.scenario, c.solver);
    CHECK(j["mean_aoi"].get<double>() == direct.mean_aoi);
    CHECK(j["mean_paoi"].get<double>() == direct.mean_paoi);
    CHECK(j["source"].get<int>() == 2);
    CHECK(j["rows"].size() > 10);
}

TEST_CASE("simulate")
{
    const std::string cfg = write_file("fig1.json", kFigureConfig);
    CHECK(run({"simulate", cfg, "--slots", "0"}).code == 2);

    const std::string a = (scratch() / "sim_a.csv").string();
    const std::string b = (scratch() / "sim_b.csv").string();
    REQUIRE(run({"simulate", cfg, "--slots", "200000", "--seed", "9", "--out", a}).code == 0);
    REQUIRE(run({"simulate", cfg, "--slots", "200000", "--seed", "9", "--out", b}).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).find("# seed=9") != std::string::npos);

    const Run r = run({"simulate", cfg, "--compare", "--out", a});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("max |F_emp - F_analytic| = ") != std::string::npos);
    CHECK(slurp(a).find("aoi_cdf_analytic") != std::string::npos);
}

TEST_CASE("optimize")
{
    const std::string q25 = write_file("q25.json", R"({"sources":[1,1],"q":0.25,"discipline":"pb"})");
    Run r = run({"optimize", q25, "--alpha", "1", "--step", "0.01"});
    CHECK(r.code == 0);
    CHECK(r.out == "p1*=1.00 p2*=1.00 C*=16.0\n");

    const std::string q05 = write_file("q05.json", R"({"sources":[1,1],"q":0.05,"discipline":"npsbr"})");
    const std::string table = (scratch() / "grid.csv").string();
    r = run({"optimize", q05, "--alpha", "1", "--beta", "0.1", "--step", "0.001", "--table", table});
    CHECK(r.code == 0);
    CHECK(r.out == "p1*=0.050 p2*=0.050 C*=131.9\n");
    CHECK(slurp(table).find("p1,p2,mean_aoi_1,mean_aoi_2,cost\n") != std::string::npos);

    r = run({"optimize", q05, "--beta", "0.001", "--step", "0.001"});
    CHECK(r.code == 2);
    CHECK(r.err.find("empty") != std::string::npos);
}

TEST_CASE("exit codes")
{
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"analyze"}).code == 2);
    CHECK(run({"analyze", (scratch() / "missing.json").string()}).code == 2);
    CHECK(run({"--help"}).code == 0);
    const std::string stiff = write_file(
        "stiff.json", R"({"sources":[0.1,0.3,0.2],"q":0.2,"discipline":"npsbr","solver":{"tol":1e-300,"max_iter":3}})");
    const Run r = run({"analyze", stiff});
    CHECK(r.code == 3);
    CHECK(r.err.find("converge") != std::string::npos);
}

TEST_CASE("reproduce: trace")
{
    const Run r = run({"reproduce", "--only", "trace"});
    CHECK(r.out.find("ok   trace npb") != std::string::npos);
    CHECK(r.out.find("ok   trace pb") != std::string::npos);
    CHECK(r.code == (r.out.find("DIFF") == std::string::npos ? 0 : 1));
}
