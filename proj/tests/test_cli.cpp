#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("loewner_cli_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

fs::path write_config(const TempDir& dir, const json& config) {
    const fs::path p = dir.path / "config.json";
    std::ofstream os(p);
    os << config.dump(2);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

json radial_field_json() {
    return json{{"variant", "radial"},
                {"domain", {{"kind", "unit_disc"}, {"dim", 1}}},
                {"order", "inf"},
                {"c", {{"pieces", json::array({{{"begin", 0.0}, {"end", "inf"}, {"kind", "constant"}, {"value", 1.0}}})}}}};
}

int run_cmd(const std::string& command, const fs::path& config, const fs::path& out) {
    loewner::cli::Options opt;
    opt.command = command;
    opt.config_path = config.string();
    opt.out_dir = out.string();
    return loewner::cli::run(opt);
}

} // namespace

TEST_CASE("cli solve writes trajectory artifacts with the expected endpoint") {
    TempDir dir;
    json cfg{{"version", 1},
             {"command", "solve"},
             {"field", radial_field_json()},
             {"s", 0.0},
             {"t_end", 1.0},
             {"z0", json::array({json::array({0.5, 0.0})})}};
    const int code = run_cmd("solve", write_config(dir, cfg), dir.path / "out");
    CHECK(code == 0);
    const std::string csv = slurp(dir.path / "out" / "trajectory.csv");
    REQUIRE(!csv.empty());
    const auto last_nl = csv.find_last_of('\n', csv.size() - 2);
    const std::string last = csv.substr(last_nl + 1);
    const auto c1 = last.find(',');
    const auto c2 = last.find(',', c1 + 1);
    CHECK(std::stod(last.substr(c1 + 1, c2 - c1 - 1)) ==
          doctest::Approx(0.1839397).epsilon(1e-6));
}

TEST_CASE("cli solve treats escape as a result, not an error") {
    TempDir dir;
    json field = radial_field_json();
    field["c"]["pieces"][0]["value"] = -1.0; // expanding
    json cfg{{"version", 1}, {"command", "solve"}, {"field", field},
             {"t_end", 2.0}, {"z0", json::array({json::array({0.5, 0.0})})}};
    const int code = run_cmd("solve", write_config(dir, cfg), dir.path / "out");
    CHECK(code == 0);
    const auto meta = json::parse(slurp(dir.path / "out" / "trajectory_meta.json"));
    CHECK(meta.at("status") == "escaped");
    CHECK(std::fabs(meta.at("escape_time").get<double>() - std::log(2.0)) < 1e-4);
}

TEST_CASE("cli picard reports agreement with the integrator") {
    TempDir dir;
    json cfg{{"version", 1},
             {"field", radial_field_json()},
             {"s", 0.0},
             {"z0", json::array({json::array({0.25, 0.0})})},
             {"picard", {{"delta", 0.5}}}};
    const int code = run_cmd("picard", write_config(dir, cfg), dir.path / "out");
    CHECK(code == 0);
    const auto agreement = json::parse(slurp(dir.path / "out" / "agreement.json"));
    CHECK(agreement.at("sup_difference").get<double>() < 1e-6);
}

TEST_CASE("cli herglotz-check exit codes: pass, fail, advisory") {
    {
        TempDir dir;
        json cfg{{"version", 1}, {"field", radial_field_json()}};
        CHECK(run_cmd("herglotz-check", write_config(dir, cfg), dir.path / "o") == 0);
    }
    {
        TempDir dir;
        json field = radial_field_json();
        field["c"]["pieces"][0]["value"] = -1.0;
        json cfg{{"version", 1}, {"field", field}};
        CHECK(run_cmd("herglotz-check", write_config(dir, cfg), dir.path / "o") == 1);
    }
    {
        TempDir dir;
        // polydisc domain: advisory only
        json field{{"variant", "linear"},
                   {"domain", {{"kind", "polydisc"}, {"dim", 2}}},
                   {"matrix", json::array({json::array({json::array({-1.0, 0.0}), json::array({0.0, 0.0})}),
                                           json::array({json::array({0.0, 0.0}), json::array({-1.0, 0.0})})})}};
        json cfg{{"version", 1}, {"field", field}};
        CHECK(run_cmd("herglotz-check", write_config(dir, cfg), dir.path / "o") == 2);
    }
}

TEST_CASE("cli verify-family fails on the broken closed-form composition") {
    TempDir dir;
    json cfg{{"version", 1},
             {"family", {{"type", "closed_form"}, {"name", "broken_composition"}}}};
    const int code = run_cmd("verify-family", write_config(dir, cfg), dir.path / "out");
    CHECK(code == 1);
    const auto report = json::parse(slurp(dir.path / "out" / "verification_report.json"));
    CHECK(report.at("overall") == false);
    bool composition_failed = false;
    for (const auto& c : report.at("checks"))
        if (c.at("name") == "composition" && c.at("passed") == false) composition_failed = true;
    CHECK(composition_failed);
}

TEST_CASE("cli verify-family passes for a field-backed radial family") {
    TempDir dir;
    json cfg{{"version", 1},
             {"family", {{"type", "field_backed"}, {"field", radial_field_json()}}},
             {"samples", {{"grid", 6}, {"horizon", 1.0}}}};
    CHECK(run_cmd("verify-family", write_config(dir, cfg), dir.path / "out") == 0);
}

TEST_CASE("cli recover crosschecks against a candidate") {
    TempDir dir;
    json cfg{{"version", 1},
             {"family", {{"type", "field_backed"}, {"field", radial_field_json()}}},
             {"recover",
              {{"z_grid", json::array({json::array({json::array({0.3, 0.0})}),
                                       json::array({json::array({0.0, 0.4})})})},
               {"t_grid", json::array({0.2, 0.6})},
               {"candidate", radial_field_json()}}}};
    CHECK(run_cmd("recover", write_config(dir, cfg), dir.path / "out") == 0);

    // 2x candidate must fail
    json bad = cfg;
    bad["recover"]["candidate"]["c"]["pieces"][0]["value"] = 2.0;
    TempDir dir2;
    CHECK(run_cmd("recover", write_config(dir2, bad), dir2.path / "out") == 1);
}

TEST_CASE("cli variational exports the transport path") {
    TempDir dir;
    json cfg{{"version", 1},
             {"field", radial_field_json()},
             {"s", 0.0},
             {"t_end", 1.0},
             {"z0", json::array({json::array({0.3, 0.0})})}};
    CHECK(run_cmd("variational", write_config(dir, cfg), dir.path / "out") == 0);
    const auto deriv = json::parse(slurp(dir.path / "out" / "flow_derivative.json"));
    CHECK(deriv.at("matrix")[0][0][0].get<double>() ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-8));
}

TEST_CASE("cli input errors exit with code 3 and a diagnostic") {
    TempDir dir;
    // missing version
    json cfg{{"command", "solve"}};
    CHECK(run_cmd("", write_config(dir, cfg), dir.path / "out") == 3);

    // malformed field
    json cfg2{{"version", 1}, {"field", {{"variant", "warp"}}},
              {"t_end", 1.0}, {"z0", json::array({json::array({0.1, 0.0})})}};
    CHECK(run_cmd("solve", write_config(dir, cfg2), dir.path / "out") == 3);

    // missing config file
    loewner::cli::Options opt;
    opt.command = "solve";
    opt.config_path = (dir.path / "nope.json").string();
    CHECK(loewner::cli::run(opt) == 3);

    // unknown command
    json cfg3{{"version", 1}};
    CHECK(run_cmd("warp", write_config(dir, cfg3), dir.path / "out") == 3);
}

TEST_CASE("cli demo runs the radial pipeline end to end") {
    TempDir dir;
    loewner::cli::Options opt;
    opt.command = "demo";
    opt.out_dir = (dir.path / "demo").string();
    CHECK(loewner::cli::run(opt) == 0);
    CHECK(fs::exists(dir.path / "demo" / "trajectory.csv"));
    CHECK(fs::exists(dir.path / "demo" / "verification_report.json"));
    CHECK(fs::exists(dir.path / "demo" / "herglotz_report.json"));
    CHECK(fs::exists(dir.path / "demo" / "uniqueness_report.json"));
}

TEST_CASE("cli reports are byte-identical across reruns") {
    TempDir dir;
    json cfg{{"version", 1}, {"field", radial_field_json()}, {"seed", 424242}};
    const fs::path config = write_config(dir, cfg);
    CHECK(run_cmd("herglotz-check", config, dir.path / "a") == 0);
    CHECK(run_cmd("herglotz-check", config, dir.path / "b") == 0);
    CHECK(slurp(dir.path / "a" / "herglotz_report.json") ==
          slurp(dir.path / "b" / "herglotz_report.json"));
}
