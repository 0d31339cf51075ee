#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "output.hpp"
#include "rhlab/error.hpp"
#include "run.hpp"

using namespace rhlab;
using namespace rhlab::cli;

namespace {

RunConfig small_dynamics() {
    RunConfig c;
    c.command = "dynamics";
    c.params = json::parse(R"({
        "model": {"spin_freq": 2.0, "site_freqs": [4.0, 4.0], "hopping": {"nearest": -3.0}},
        "g": 5.0, "t_max_us": 40, "dt_us": 10, "basis": {"cutoff": 4}
    })");
    return c;
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("rhlab_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

}  // namespace

TEST_SUITE("cli") {
TEST_CASE("FNV-1a reference values") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("run configs round-trip and hash command, parameters and seed only") {
    RunConfig c = small_dynamics();
    c.seed = 17;
    c.out_dir = "somewhere";
    const RunConfig back = RunConfig::from_json(json::parse(c.to_json().dump()));
    CHECK(back.command == c.command);
    CHECK(back.params == c.params);
    CHECK(back.seed == 17);
    CHECK(back.hash() == c.hash());
    RunConfig moved = c;
    moved.out_dir = "elsewhere";
    CHECK(moved.hash() == c.hash());
    RunConfig reseeded = c;
    reseeded.seed = 18;
    CHECK(reseeded.hash() != c.hash());
    CHECK_THROWS_AS(RunConfig::from_json(json::object()), DomainError);
}

TEST_CASE("scan strings") {
    CHECK(parse_scan("0:1:0.25") == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(parse_scan("2:1:0.5").empty());
    CHECK(parse_scan("3:3:1") == std::vector<double>{3.0});
    CHECK_THROWS_AS(parse_scan("0:1"), DomainError);
    CHECK_THROWS_AS(parse_scan("0:1:0"), DomainError);
    CHECK_THROWS_AS(parse_scan("0:x:1"), DomainError);
    CHECK(parse_linspace("0:3:4") == std::vector<double>{0.0, 1.0, 2.0, 3.0});
    CHECK(parse_linspace("5:9:0").empty());
    CHECK_THROWS_AS(parse_linspace("0:1:2.5"), DomainError);
}

TEST_CASE("model documents and unit conventions") {
    const RHModel m = parse_model(json::parse(R"({"spin_freq": 2.0, "site_freqs": [1.0, 3.0], "hoppings": [[0, 0.5], [0.5, 0]]})"));
    CHECK(m.spin_freq == doctest::Approx(khz(2.0)));
    CHECK(m.hoppings(0, 1) == doctest::Approx(khz(0.5)));
    const RHModel r = parse_model(json::parse(R"({"unit": "Hz", "two_pi": false, "spin_freq": 5.0, "site_freqs": [1.0], "hoppings": [[0]]})"));
    CHECK(r.spin_freq == doctest::Approx(5.0));
    const RHModel p = parse_model(json{{"preset", "dynamics-N4"}});
    CHECK(p.n_sites() == 4);
    CHECK(p.spin_freq == doctest::Approx(khz(2.0)));
    CHECK_THROWS_AS(parse_model(json{{"preset", "dynamics-N5"}}), DomainError);
    CHECK_THROWS_AS(parse_model(json{{"spin_freq", 1.0}}), DomainError);
    CHECK_THROWS_AS(parse_basis(json{{"sector", "sideways"}}, 2), DomainError);
    CHECK(parse_basis(json{{"cutoffs", {3, 4}}, {"representation", "collective"}}, 2).cutoffs == std::vector<int>{3, 4});
}

TEST_CASE("identical config and seed give byte-identical artifacts") {
    const RunBundle a = run(small_dynamics());
    const RunBundle b = run(small_dynamics());
    REQUIRE(a.files.size() == b.files.size());
    for (std::size_t k = 0; k < a.files.size(); ++k) {
        CHECK(a.files[k].first == b.files[k].first);
        CHECK(a.files[k].second == b.files[k].second);
    }
    std::istringstream csv(a.file("trajectory.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "# config_hash=" + small_dynamics().hash());
    std::getline(csv, line);
    CHECK(line == "# version=" + artifact_version());
    std::getline(csv, line);
    CHECK(line == "# seed=0");
    std::getline(csv, line);
    CHECK(line == "t_us,site,observable,value");
    const json summary = json::parse(a.file("summary.json"));
    CHECK(summary.at("max_norm_error").get<double>() < 1e-10);
}

TEST_CASE("bundles written to disk re-run to the same hash") {
    const auto dir = scratch("bundle");
    const RunBundle a = run(small_dynamics());
    write_bundle(a, dir.string());
    for (const char* f : {"trajectory.csv", "summary.json", "config.json", "log.txt"}) CHECK(std::filesystem::exists(dir / f));
    const RunConfig saved = RunConfig::from_json(read_json_file((dir / "config.json").string()));
    CHECK(saved.hash() == small_dynamics().hash());
    CHECK(run(saved).file("trajectory.csv") == a.file("trajectory.csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("measure reads pair moments back from a trajectory") {
    const auto dir = scratch("measure");
    write_bundle(run(small_dynamics()), dir.string());
    const std::string path = (dir / "trajectory.csv").string();
    const json fwd = moments_from_trajectory(path, 0, 1, -1.0);
    const json rev = moments_from_trajectory(path, 1, 0, -1.0);
    CHECK(fwd.at("time_us").get<double>() == doctest::Approx(40.0));
    CHECK(fwd.at("xy").get<double>() == rev.at("yx").get<double>());
    CHECK(fwd.at("sx_i").get<double>() == rev.at("sx_j").get<double>());
    CHECK(moments_from_trajectory(path, 0, 1, 12.0).at("time_us").get<double>() == doctest::Approx(10.0));
    CHECK_THROWS_AS(moments_from_trajectory(path, 0, 0, -1.0), DomainError);
    CHECK_THROWS_AS(moments_from_trajectory(path, 0, 5, -1.0), DomainError);

    RunConfig m;
    m.command = "measure";
    m.params = json{{"moments", fwd}, {"pair", {0, 1}}, {"shots", 0}};
    const json fit = json::parse(run(m).file("fit.json"));
    CHECK(fit.at("measured").at("amplitude").get<double>() ==
          doctest::Approx(fit.at("ideal").at("amplitude").get<double>()));
    std::filesystem::remove_all(dir);
}

TEST_CASE("unknown commands and figures are configuration errors") {
    RunConfig c;
    c.command = "teleport";
    CHECK_THROWS_AS(run(c), DomainError);
    try {
        reproduce("fig9");
        FAIL("expected an error");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("fig2f-smallN") != std::string::npos);
    }
}

TEST_CASE("estimate and meanfield commands") {
    RunConfig e;
    e.command = "estimate";
    e.params = json{{"n_ions", 16}, {"cutoff", 6}};
    const json est = json::parse(run(e).file("estimate.json"));
    CHECK(est.at("log2_dimension").get<double>() == doctest::Approx(16 * std::log2(14.0)));

    RunConfig mf;
    mf.command = "meanfield";
    mf.params = json{{"model", {{"preset", "uniform-N2"}}}, {"g_scan", "0:10:1"}};
    const RunBundle b = run(mf);
    CHECK(b.file("meanfield.csv").find("broken") != std::string::npos);
    mf.params["g_scan"] = "5:1:1";
    const std::string empty = run(mf).file("meanfield.csv");
    CHECK(empty.substr(empty.rfind("g_khz")) == "g_khz,b0,mean_sigma_x,branch,mean_abs_sigma_x\n");
}
}
