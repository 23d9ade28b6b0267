#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hansim/report.hpp"
#include "testutil.hpp"

using namespace hansim;
using namespace hansim::report;

#ifndef HANSIM_SCENARIO_DIR
#define HANSIM_SCENARIO_DIR "scenarios"
#endif

namespace {

namespace fs = std::filesystem;

std::string scenario_path(const char* name) {
    return std::string(HANSIM_SCENARIO_DIR) + "/" + name;
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("hansim_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::size_t line_count(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) n += c == '\n';
    return n;
}

}  // namespace

TEST_CASE("cmd_run writes one row per tick into every load csv") {
    const auto dir = fresh_dir("rowcount");
    CmdOptions opts;
    opts.out_dir = dir.string();
    const auto report = cmd_run_file(scenario_path("oracle4.han"), opts);

    const auto total = slurp(dir / "load_total.csv");
    CHECK(line_count(total) == 18000 + 1);  // header + one row per second
    const auto stream = slurp(dir / "load_stream_900_1800.csv");
    CHECK(line_count(stream) == 18000 + 1);
    CHECK(total.substr(0, 15) == "time_s,load_kw\n");
    CHECK(!report.csv_paths.empty());
}

TEST_CASE("cmd_compare on the four-device scenario reports exactly 50% peak cut") {
    const auto dir = fresh_dir("compare4");
    CmdOptions opts;
    opts.out_dir = dir.string();
    const auto report = cmd_compare_file(scenario_path("oracle4.han"), opts);
    REQUIRE(report.peak_reduction_pct.has_value());
    CHECK(*report.peak_reduction_pct == 50.0);
    REQUIRE(report.modes.size() == 2);
    CHECK(report.modes[0].summary.peak_kw == 2.0);
    CHECK(report.modes[1].summary.peak_kw == 4.0);
}

TEST_CASE("zero-load scenarios report reductions as n/a") {
    const auto dir = fresh_dir("empty");
    CmdOptions opts;
    opts.out_dir = dir.string();
    const auto report = cmd_compare_file(scenario_path("empty.han"), opts);
    CHECK_FALSE(report.peak_reduction_pct.has_value());
    CHECK(report.modes[0].summary.peak_kw == 0.0);
    const auto summary = slurp(dir / "summary.txt");
    CHECK(summary.find("peak = n/a") != std::string::npos);
}

TEST_CASE("a single-value sweep matches cmd_run for that value") {
    const auto dir_sweep = fresh_dir("sweep1");
    const auto dir_run = fresh_dir("sweep1run");
    CmdOptions opts;
    opts.out_dir = dir_sweep.string();
    const auto sweep = cmd_sweep_file(scenario_path("mindcd-sweep.han"), opts,
                                      SweepParam::MinDcd, {900.0});
    opts.out_dir = dir_run.string();
    const auto run = cmd_run_file(scenario_path("mindcd-sweep.han"), opts);

    REQUIRE(sweep.rows.size() == 2);  // coordinated + baseline
    REQUIRE(run.modes.size() == 2);
    CHECK(sweep.rows[0].peak_kw == run.modes[0].summary.peak_kw);
    CHECK(sweep.rows[0].mean_kw == run.modes[0].summary.mean_kw);
    CHECK(sweep.rows[1].peak_kw == run.modes[1].summary.peak_kw);
}

TEST_CASE("a min_dcd sweep shows the coordinated peak growing with min_dcd") {
    const auto dir = fresh_dir("sweep5");
    CmdOptions opts;
    opts.out_dir = dir.string();
    const auto sweep = cmd_sweep_file(scenario_path("mindcd-sweep.han"), opts, SweepParam::MinDcd,
                                      {300, 600, 900, 1200, 1500});
    std::vector<double> coordinated_peaks;
    for (const auto& row : sweep.rows) {
        if (row.mode == "coordinated") coordinated_peaks.push_back(row.peak_kw);
    }
    REQUIRE(coordinated_peaks.size() == 5);
    for (std::size_t i = 1; i < coordinated_peaks.size(); ++i) {
        CHECK(coordinated_peaks[i] >= coordinated_peaks[i - 1]);
    }
    // at min_dcd = 15 min the stream splits cleanly in two halves
    CHECK(coordinated_peaks[2] <= 0.5 * 30.0);
    const auto csv = slurp(dir / "sweep.csv");
    CHECK(csv.rfind("value,mode,peak_kw,mean_kw,std_kw,avg_delay_s\n", 0) == 0);
    CHECK(line_count(csv) == 1 + 10);  // header + 5 values x 2 modes
}

TEST_CASE("an r sweep shows the average delay falling as r grows") {
    const auto dir = fresh_dir("sweepr");
    CmdOptions opts;
    opts.out_dir = dir.string();
    const auto sweep = cmd_sweep_file(scenario_path("delay-sweep.han"), opts,
                                      SweepParam::DutyRatio,
                                      {1.0 / 6.0, 1.0 / 3.0, 1.0 / 2.0, 2.0 / 3.0});
    std::vector<double> delays;
    for (const auto& row : sweep.rows) {
        REQUIRE(row.avg_delay_s.has_value());
        delays.push_back(*row.avg_delay_s);
    }
    REQUIRE(delays.size() == 4);  // scenario runs coordinated mode only
    for (std::size_t i = 1; i < delays.size(); ++i) CHECK(delays[i] <= delays[i - 1]);
}

TEST_CASE("sweep transforms apply to the right knob") {
    const auto base = workload::load_scenario_file(scenario_path("dcube.han"));

    const auto swept = apply_sweep_value(base, SweepParam::MinDcd, 300.0);
    for (const auto& d : swept.devices) CHECK(*d.min_dcd_s == 300);

    const auto ratio = apply_sweep_value(base, SweepParam::DutyRatio, 1.0 / 3.0);
    for (const auto& d : ratio.devices) CHECK(*d.min_dcd_s == 600);

    const auto lossy = apply_sweep_value(base, SweepParam::DeliveryP, 0.9);
    const auto* loss = std::get_if<stnet::IidLoss>(&lossy.round.delivery);
    REQUIRE(loss != nullptr);
    CHECK(loss->p == 0.9);

    const auto fewer = apply_sweep_value(base, SweepParam::Contenders, 10.0);
    CHECK(fewer.devices.size() == 10);
    for (const auto& proc : fewer.arrivals) CHECK(proc.targets.size() == 10);
}

TEST_CASE("seed and mode overrides reach the simulation") {
    const auto dir = fresh_dir("overrides");
    CmdOptions opts;
    opts.out_dir = dir.string();
    opts.seed = 123;
    opts.mode = workload::RunMode::Baseline;
    const auto report = cmd_run_file(scenario_path("dcube.han"), opts);
    CHECK(report.seed == 123);
    REQUIRE(report.modes.size() == 1);
    CHECK(report.modes[0].mode == "baseline");
    CHECK(fs::exists(dir / "delays.csv"));
}

TEST_CASE("the skip window trims warm-up from the metrics") {
    const auto dir = fresh_dir("skip");
    CmdOptions opts;
    opts.out_dir = dir.string();
    opts.mode = workload::RunMode::Coordinated;

    // two devices, one slot apart: the full-horizon mean differs from the
    // steady state, skipping the first slot does not change the peak
    opts.skip_s = 0;
    const auto full = cmd_run(testutil::saturated_stream(2, 1.0, 900, 1800, 5400), opts);
    opts.skip_s = 900;
    const auto skipped = cmd_run(testutil::saturated_stream(2, 1.0, 900, 1800, 5400), opts);
    CHECK(full.modes[0].summary.peak_kw == skipped.modes[0].summary.peak_kw);
    CHECK(skipped.skip_s == 900);
}

TEST_CASE("missing scenario files surface as scenario errors") {
    CmdOptions opts;
    opts.out_dir = fresh_dir("missing").string();
    CHECK_THROWS_AS(cmd_run_file("scenarios/definitely-not-here.han", opts), ScenarioError);
}
