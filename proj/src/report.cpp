#include "hansim/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

namespace hansim::report {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v, int decimals = 3) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    if (!out) throw Error("short write to " + path.string());
}

std::string load_csv(const metrics::LoadTrace& trace) {
    std::ostringstream out;
    out << "time_s,load_kw\n";
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        out << i * static_cast<std::size_t>(trace.tick_s) << "," << fmt(trace.samples[i]) << "\n";
    }
    return out.str();
}

std::string delays_csv(const std::vector<metrics::DelayRecord>& delays) {
    std::ostringstream out;
    out << "device,request_time_s,first_on_s,delay_s\n";
    for (const auto& r : delays) {
        out << r.device << "," << r.request_s << "," << r.first_on_s << "," << r.delay_s()
            << "\n";
    }
    return out.str();
}

const char* mode_name(workload::RunMode m) {
    return m == workload::RunMode::Coordinated ? "coordinated" : "baseline";
}

workload::Scenario prepare(workload::Scenario scenario, const CmdOptions& options) {
    if (options.seed) scenario.seed = *options.seed;
    if (options.mode) scenario.mode = *options.mode;
    return scenario;
}

std::vector<workload::RunMode> modes_to_run(workload::RunMode m) {
    if (m == workload::RunMode::Both) {
        return {workload::RunMode::Coordinated, workload::RunMode::Baseline};
    }
    return {m};
}

}  // namespace

std::string render_summary(const RunReport& report) {
    std::ostringstream out;
    out << "scenario: " << report.scenario << "\n";
    out << "seed: " << report.seed << "\n";
    out << "skip_s: " << report.skip_s << "\n";
    for (const ModeResult& mr : report.modes) {
        out << "\n[" << mr.mode << "]\n";
        out << "peak_kw = " << fmt(mr.summary.peak_kw) << "\n";
        out << "mean_kw = " << fmt(mr.summary.mean_kw) << "\n";
        out << "std_kw = " << fmt(mr.summary.std_kw) << "\n";
        out << "avg_delay_s = "
            << (mr.summary.avg_delay_s ? fmt(*mr.summary.avg_delay_s) : "n/a") << "\n";
        for (const auto& st : mr.summary.streams) {
            out << st.label << ": peak " << fmt(st.peak_kw) << " kW, mean " << fmt(st.mean_kw)
                << " kW, std " << fmt(st.std_kw) << " kW\n";
        }
    }
    if (report.modes.size() == 2) {
        out << "\n[reduction]\n";
        out << "peak = "
            << (report.peak_reduction_pct ? fmt(*report.peak_reduction_pct, 1) + "%" : "n/a")
            << "\n";
        out << "std = "
            << (report.std_reduction_pct ? fmt(*report.std_reduction_pct, 1) + "%" : "n/a")
            << "\n";
    }
    return out.str();
}

RunReport cmd_run(const workload::Scenario& base, const CmdOptions& options) {
    const workload::Scenario scenario = prepare(base, options);
    RunReport report;
    report.scenario = scenario.name;
    report.seed = scenario.seed;
    report.skip_s = options.skip_s;

    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    if (ec) throw Error("cannot create output directory " + options.out_dir);

    engine::SimOptions sim_opts;
    sim_opts.scheduler_mode =
        options.literal_p3 ? scheduler::Mode::LiteralP3 : scheduler::Mode::SlotBoundary;

    std::optional<metrics::Summary> coordinated, baseline;
    for (workload::RunMode mode : modes_to_run(scenario.mode)) {
        const engine::SimResult sim = engine::simulate(scenario, mode, sim_opts);
        const metrics::Summary summary =
            metrics::summarize(sim.stream_traces, sim.total, sim.delays, options.skip_s);
        report.modes.push_back({mode_name(mode), summary});
        if (mode == workload::RunMode::Coordinated) coordinated = summary;
        else baseline = summary;

        const std::string suffix =
            scenario.mode == workload::RunMode::Both && mode == workload::RunMode::Baseline
                ? "_baseline"
                : "";
        for (const auto& trace : sim.stream_traces) {
            const fs::path p = fs::path(options.out_dir) / ("load_" + trace.label + suffix + ".csv");
            write_file(p, load_csv(trace));
            report.csv_paths.push_back(p.string());
        }
        const fs::path total_path = fs::path(options.out_dir) / ("load_total" + suffix + ".csv");
        write_file(total_path, load_csv(sim.total));
        report.csv_paths.push_back(total_path.string());

        if (mode != workload::RunMode::Baseline || scenario.mode == workload::RunMode::Baseline) {
            const fs::path delays_path = fs::path(options.out_dir) / "delays.csv";
            write_file(delays_path, delays_csv(sim.delays));
            report.csv_paths.push_back(delays_path.string());
        }
    }

    if (coordinated && baseline) {
        if (baseline->peak_kw > 0.0) {
            report.peak_reduction_pct =
                (baseline->peak_kw - coordinated->peak_kw) / baseline->peak_kw * 100.0;
        }
        if (baseline->std_kw > 0.0) {
            report.std_reduction_pct =
                (baseline->std_kw - coordinated->std_kw) / baseline->std_kw * 100.0;
        }
    }

    const fs::path summary_path = fs::path(options.out_dir) / "summary.txt";
    write_file(summary_path, render_summary(report));
    report.csv_paths.push_back(summary_path.string());
    return report;
}

RunReport cmd_run_file(const std::string& scenario_path, const CmdOptions& options) {
    return cmd_run(workload::load_scenario_file(scenario_path), options);
}

RunReport cmd_compare_file(const std::string& scenario_path, const CmdOptions& options) {
    CmdOptions forced = options;
    forced.mode = workload::RunMode::Both;
    return cmd_run_file(scenario_path, forced);
}

workload::Scenario apply_sweep_value(const workload::Scenario& base, SweepParam param,
                                     double value) {
    workload::Scenario sc = base;
    switch (param) {
        case SweepParam::MinDcd: {
            const auto min_dcd = static_cast<Seconds>(std::llround(value));
            for (auto& d : sc.devices) {
                if (d.kind == ApplianceKind::Type2) d.min_dcd_s = min_dcd;
            }
            break;
        }
        case SweepParam::DutyRatio: {
            for (auto& d : sc.devices) {
                if (d.kind == ApplianceKind::Type2) {
                    d.min_dcd_s = static_cast<Seconds>(
                        std::llround(value * static_cast<double>(*d.max_dcp_s)));
                }
            }
            break;
        }
        case SweepParam::DeliveryP:
            sc.round.delivery = stnet::IidLoss{value};
            break;
        case SweepParam::Contenders: {
            const auto keep = static_cast<std::size_t>(std::llround(value));
            std::vector<domain::ApplianceSpec> devices;
            std::size_t type2 = 0;
            for (const auto& d : sc.devices) {
                if (d.kind == ApplianceKind::Type2) {
                    if (type2 >= keep) continue;
                    ++type2;
                }
                devices.push_back(d);
            }
            sc.devices = std::move(devices);
            // re-resolve arrival targets against the reduced device set
            std::vector<workload::ArrivalProcess> arrivals;
            for (auto proc : sc.arrivals) {
                std::erase_if(proc.targets, [&sc](const std::string& id) {
                    return std::none_of(sc.devices.begin(), sc.devices.end(),
                                        [&id](const auto& d) { return d.id == id; });
                });
                if (!proc.targets.empty()) arrivals.push_back(std::move(proc));
            }
            sc.arrivals = std::move(arrivals);
            if (!sc.devices.empty() &&
                std::none_of(sc.devices.begin(), sc.devices.end(), [&sc](const auto& d) {
                    return d.id == sc.round.initiator;
                })) {
                sc.round.initiator = sc.devices.front().id;
            }
            break;
        }
    }
    return sc;
}

SweepReport cmd_sweep(const workload::Scenario& base, const CmdOptions& options,
                      SweepParam param, const std::vector<double>& values) {
    const workload::Scenario scenario = prepare(base, options);

    engine::SimOptions sim_opts;
    sim_opts.scheduler_mode =
        options.literal_p3 ? scheduler::Mode::LiteralP3 : scheduler::Mode::SlotBoundary;

    struct Point {
        double value;
        workload::RunMode mode;
    };
    std::vector<Point> points;
    for (double v : values) {
        for (workload::RunMode mode : modes_to_run(scenario.mode)) points.push_back({v, mode});
    }

    std::vector<std::future<SweepRow>> futures;
    futures.reserve(points.size());
    for (const Point& point : points) {
        futures.push_back(std::async(std::launch::async, [&, point]() {
            const workload::Scenario sc = apply_sweep_value(scenario, param, point.value);
            const engine::SimResult sim = engine::simulate(sc, point.mode, sim_opts);
            const metrics::Summary s =
                metrics::summarize(sim.stream_traces, sim.total, sim.delays, options.skip_s);
            SweepRow row;
            row.value = point.value;
            row.mode = mode_name(point.mode);
            row.peak_kw = s.peak_kw;
            row.mean_kw = s.mean_kw;
            row.std_kw = s.std_kw;
            row.avg_delay_s = s.avg_delay_s;
            return row;
        }));
    }

    SweepReport report;
    for (auto& f : futures) report.rows.push_back(f.get());

    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    if (ec) throw Error("cannot create output directory " + options.out_dir);

    std::ostringstream csv;
    csv << "value,mode,peak_kw,mean_kw,std_kw,avg_delay_s\n";
    for (const SweepRow& row : report.rows) {
        char value_buf[64];
        std::snprintf(value_buf, sizeof value_buf, "%g", row.value);
        csv << value_buf << "," << row.mode << "," << fmt(row.peak_kw) << ","
            << fmt(row.mean_kw) << "," << fmt(row.std_kw) << ","
            << (row.avg_delay_s ? fmt(*row.avg_delay_s) : "n/a") << "\n";
    }
    const fs::path path = fs::path(options.out_dir) / "sweep.csv";
    write_file(path, csv.str());
    report.csv_path = path.string();
    return report;
}

SweepReport cmd_sweep_file(const std::string& scenario_path, const CmdOptions& options,
                           SweepParam param, const std::vector<double>& values) {
    return cmd_sweep(workload::load_scenario_file(scenario_path), options, param, values);
}

}  // namespace hansim::report
