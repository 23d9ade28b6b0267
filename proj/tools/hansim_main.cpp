#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hansim/report.hpp"
#include "hansim/types.hpp"
#include "hansim/workload.hpp"

namespace {

using hansim::report::CmdOptions;
using hansim::report::SweepParam;

hansim::Seconds parse_duration_arg(const std::string& token) {
    return hansim::workload::parse_duration_token(token);
}

double parse_sweep_value(SweepParam param, const std::string& token) {
    if (param == SweepParam::MinDcd) {
        return static_cast<double>(parse_duration_arg(token));
    }
    if (param == SweepParam::DutyRatio) {
        if (const auto slash = token.find('/'); slash != std::string::npos) {
            const double num = std::stod(token.substr(0, slash));
            const double den = std::stod(token.substr(slash + 1));
            return num / den;
        }
    }
    return std::stod(token);
}

void print_report(const hansim::report::RunReport& report) {
    std::cout << hansim::report::render_summary(report);
    std::cout << "\nwrote:\n";
    for (const auto& p : report.csv_paths) std::cout << "  " << p << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hansim - decentralized home-area-network load-management simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = "out";
    std::string mode_str;
    std::string skip_str = "0";
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool literal = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("scenario", scenario_path, "scenario file")->required();
        cmd->add_option("--out", out_dir, "output directory (default: out)");
        cmd->add_option("--seed", seed, "override the scenario seed")
            ->each([&](const std::string&) { seed_set = true; });
        cmd->add_option("--mode", mode_str, "coordinated | baseline | both");
        cmd->add_option("--skip", skip_str, "warm-up window excluded from metrics");
        cmd->add_flag("--compat-literal-p3", literal,
                      "run the scheduler in the pseudocode-faithful mode");
    };

    CLI::App* run = app.add_subcommand("run", "simulate one scenario and write traces");
    add_common(run);

    CLI::App* compare =
        app.add_subcommand("compare", "run coordinated and baseline, report reductions");
    add_common(compare);

    CLI::App* sweep = app.add_subcommand("sweep", "one simulation per parameter value");
    add_common(sweep);
    std::string param_str;
    std::vector<std::string> value_strs;
    sweep->add_option("--param", param_str, "min_dcd | r | delivery_p | contenders")->required();
    sweep->add_option("--values", value_strs, "comma separated values")
        ->required()
        ->delimiter(',');

    CLI11_PARSE(app, argc, argv);

    try {
        CmdOptions options;
        options.out_dir = out_dir;
        if (seed_set) options.seed = seed;
        options.skip_s = parse_duration_arg(skip_str);
        options.literal_p3 = literal;
        if (!mode_str.empty()) {
            if (mode_str == "coordinated") options.mode = hansim::workload::RunMode::Coordinated;
            else if (mode_str == "baseline") options.mode = hansim::workload::RunMode::Baseline;
            else if (mode_str == "both") options.mode = hansim::workload::RunMode::Both;
            else throw hansim::ScenarioError(hansim::ScenarioError::Kind::Validation, 0,
                                             "unknown mode '" + mode_str + "'");
        }

        if (run->parsed()) {
            print_report(hansim::report::cmd_run_file(scenario_path, options));
        } else if (compare->parsed()) {
            print_report(hansim::report::cmd_compare_file(scenario_path, options));
        } else if (sweep->parsed()) {
            SweepParam param;
            if (param_str == "min_dcd") param = SweepParam::MinDcd;
            else if (param_str == "r") param = SweepParam::DutyRatio;
            else if (param_str == "delivery_p") param = SweepParam::DeliveryP;
            else if (param_str == "contenders") param = SweepParam::Contenders;
            else throw hansim::ScenarioError(hansim::ScenarioError::Kind::Validation, 0,
                                             "unknown sweep parameter '" + param_str + "'");
            std::vector<double> values;
            for (const auto& v : value_strs) values.push_back(parse_sweep_value(param, v));
            const auto report = hansim::report::cmd_sweep_file(scenario_path, options, param, values);
            std::cout << "wrote " << report.csv_path << " (" << report.rows.size() << " rows)\n";
        }
    } catch (const hansim::ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const hansim::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
