#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "pursuit/plot.hpp"
#include "pursuit/run.hpp"
#include "pursuit/scenario.hpp"

using namespace pursuit;
namespace fs = std::filesystem;

namespace {

std::string tmp_dir(const std::string& leaf) {
    const fs::path p = fs::temp_directory_path() / ("pursuit_test_" + leaf);
    fs::remove_all(p);
    fs::create_directories(p);
    return p.string();
}

// Minimal valid scenario; waypoint program avoids any maneuver randomness.
std::string tiny_scenario_json(double duration = 2.0) {
    char buf[1024];
    std::snprintf(buf, sizeof buf, R"({
      "name": "tiny",
      "uas": {"position": [0, 0], "speed": 31.31, "heading": 0, "altitude": 150},
      "vehicle": {"position": [40, -20], "speed": 22.0, "heading": 0},
      "duration": %g,
      "dt": 0.033333333333333333,
      "seed": 3,
      "program": {"type": "waypoints", "waypoints": [[40, -20], [4000, -20]],
                  "waypoint_speed": 22.0}
    })", duration);
    return buf;
}

}  // namespace

TEST_CASE("scenario parsing rejects unknown keys and bad values") {
    CHECK_THROWS_WITH_AS(parse_scenario(R"({"durration": 5})", "t"),
                         doctest::Contains("unknown key"), std::runtime_error);
    CHECK_THROWS_AS(parse_scenario("{not json", "t"), std::runtime_error);
    // heading and heading_deg are mutually exclusive.
    CHECK_THROWS_AS(parse_scenario(R"({
        "uas": {"position": [0,0], "heading": 1.0, "heading_deg": 30}})", "t"),
                    std::runtime_error);
    // Negative guidance gain.
    CHECK_THROWS_AS(parse_scenario(R"({"guidance": {"k1": -1}})", "t"),
                    std::runtime_error);
    // y1d must stay negative.
    CHECK_THROWS_AS(parse_scenario(R"({"guidance": {"y1d": 10}})", "t"),
                    std::runtime_error);
}

TEST_CASE("scenario parsing fills defaults and converts heading degrees") {
    const Scenario sc = parse_scenario(tiny_scenario_json());
    CHECK(sc.name == "tiny");
    CHECK(sc.uas.altitude == 150.0);
    CHECK(sc.dt == doctest::Approx(1.0 / 30.0));
    CHECK(sc.guidance.k1 == 0.5);      // defaults untouched
    CHECK(sc.tracker.num_points == 10);

    const Scenario deg = parse_scenario(R"({
        "uas": {"position": [0,0], "heading_deg": 90, "altitude": 150},
        "vehicle": {"position": [10, 0]}})");
    CHECK(deg.uas.heading == doctest::Approx(M_PI / 2.0));
}

TEST_CASE("csv round trip is bit exact at full precision") {
    CsvTable t;
    t.columns = {"a", "b", "c"};
    t.rows = {{1.0 / 3.0, -2.718281828459045e-12, 6.02214076e23},
              {0.1 + 0.2, 1e-300, -0.0}};
    const std::string dir = tmp_dir("csv");
    write_csv(t, dir + "/x.csv");
    const CsvTable back = read_csv(dir + "/x.csv");
    REQUIRE(back.columns == t.columns);
    REQUIRE(back.rows.size() == t.rows.size());
    for (size_t i = 0; i < t.rows.size(); ++i)
        for (size_t j = 0; j < t.columns.size(); ++j)
            CHECK(back.rows[i][j] == t.rows[i][j]);  // bit identical
    CHECK(t.column_index("b") == 1);
    CHECK(t.column_index("zzz") == -1);
    CHECK(t.column("c")[0] == 6.02214076e23);
    CHECK_THROWS(t.column("zzz"));
}

TEST_CASE("compare_tables classifies identical, differing, and mismatched") {
    CsvTable a;
    a.columns = {"x", "y"};
    a.rows = {{1.0, 2.0}, {3.0, 4.0}};
    CsvTable b = a;
    const CompareReport same = compare_tables(a, b);
    CHECK(same.schema_match);
    CHECK(same.row_count_match);
    CHECK(same.identical);
    CHECK(same.worst_diff == 0.0);

    b.rows[1][1] = 4.5;
    const CompareReport diff = compare_tables(a, b);
    CHECK(!diff.identical);
    CHECK(diff.worst_diff == doctest::Approx(0.5));
    CHECK(diff.worst_column == "y");
    CHECK(!format_report(diff).empty());

    CsvTable c;
    c.columns = {"x", "z"};
    c.rows = {{1.0, 2.0}};
    CHECK_THROWS(compare_tables(a, c));
}

TEST_CASE("truth-mode run: schema complete, finite, and deterministic") {
    RunConfig cfg;
    cfg.scenario = parse_scenario(tiny_scenario_json(3.0));
    cfg.mode = RunMode::Truth;
    cfg.seed = 3;
    const CsvTable log = run(cfg);
    CHECK(log.columns == run_log_columns());
    CHECK(log.columns.size() == 52);
    REQUIRE(log.rows.size() == size_t(std::lround(3.0 * 30.0)));
    for (const auto& row : log.rows)
        for (double v : row) CHECK(std::isfinite(v));
    // Truth mode bypasses the measurement path entirely.
    for (double v : log.column("meas_valid")) CHECK(v == 0.0);
    // Time axis is the frame index over the rate.
    const auto t = log.column("t");
    CHECK(t.front() == 0.0);
    CHECK(t[1] == doctest::Approx(1.0 / 30.0));

    const CsvTable again = run(cfg);
    CHECK(compare_tables(log, again).identical);
}

TEST_CASE("vision-mode run: tracking produces measurements and closes the loop") {
    RunConfig cfg;
    cfg.scenario = parse_scenario(tiny_scenario_json(2.0));
    cfg.mode = RunMode::Vision;
    cfg.seed = 3;
    const CsvTable log = run(cfg);
    REQUIRE(log.rows.size() == 60);
    for (const auto& row : log.rows)
        for (double v : row) CHECK(std::isfinite(v));

    int valid = 0;
    const auto mv = log.column("meas_valid");
    const auto mx = log.column("meas_x");
    const auto vx = log.column("veh_x");
    const auto occ = log.column("occlusion");
    for (size_t i = 0; i < mv.size(); ++i) {
        if (mv[i] == 1.0) {
            ++valid;
            // Unoccluded world-frame measurement lands on the vehicle.
            CHECK(std::abs(mx[i] - vx[i]) < 1.0);
        }
        CHECK(occ[i] == 0.0);  // no bars in the tiny scenario
    }
    CHECK(valid >= 58);  // everything after the first frame pair
    // The commanded accelerations respect the configured limits.
    for (double v : log.column("a_lat")) CHECK(std::abs(v) <= 10.0 + 1e-12);
    for (double v : log.column("a_long")) CHECK(std::abs(v) <= 10.0 + 1e-12);

    const CsvTable again = run(cfg);
    CHECK(compare_tables(log, again).identical);
}

TEST_CASE("run with out_dir writes the log; emit_plots renders 13 panels") {
    RunConfig cfg;
    cfg.scenario = parse_scenario(tiny_scenario_json(2.0));
    cfg.mode = RunMode::Truth;
    cfg.seed = 3;
    const std::string dir = tmp_dir("runout");
    cfg.out_dir = dir;
    const CsvTable log = run(cfg);
    REQUIRE(fs::exists(dir + "/run.csv"));
    const CsvTable disk = read_csv(dir + "/run.csv");
    CHECK(compare_tables(log, disk).identical);

    const std::string plots = tmp_dir("plots");
    const int n = emit_plots(log, plots);
    CHECK(n == 13);
    int pngs = 0;
    for (const auto& e : fs::directory_iterator(plots)) {
        CHECK(e.path().extension() == ".png");
        // PNG signature.
        std::ifstream f(e.path(), std::ios::binary);
        unsigned char sig[8] = {};
        f.read(reinterpret_cast<char*>(sig), 8);
        CHECK(sig[0] == 0x89);
        CHECK(sig[1] == 'P');
        CHECK(sig[2] == 'N');
        CHECK(sig[3] == 'G');
        ++pngs;
    }
    CHECK(pngs == 13);
}

TEST_CASE("render_chart handles degenerate inputs without crashing") {
    // Empty series, single point, non-finite values.
    const RgbImage empty = render_chart("t", "x", "y", {});
    CHECK(empty.width == 900);
    Series s;
    s.name = "s";
    s.x = {1.0, 2.0, 3.0};
    s.y = {1.0, std::nan(""), 2.0};
    const RgbImage img = render_chart("t", "x", "y", {s}, {{1.5, 2.5}});
    CHECK(img.width == 900);
    CHECK(img.height == 540);
}
