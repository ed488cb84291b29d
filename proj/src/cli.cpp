#include "nilmeval/cli.hpp"

#include "nilmeval/errors.hpp"
#include "nilmeval/experiment.hpp"
#include "nilmeval/io.hpp"
#include "nilmeval/synth.hpp"
#include "nilmeval/transfer.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace nilmeval {

namespace {

namespace fs = std::filesystem;

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << content;
    if (!out) {
        throw IoError("write failed for " + path.string());
    }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

struct CliOptions {
    std::string config;
    std::string data_dir;
    std::string out_dir;
    std::string format = "table";
    std::optional<std::int64_t> seed;
};

int cmd_synth(const CliOptions& opt) {
    SynthJob job = synth_job_from_json(load_json_file(opt.config));
    if (opt.seed) {
        job.house.seed = static_cast<std::uint64_t>(*opt.seed);
    }
    const auto records = run_synth_job(job);
    for (const auto& record : records) {
        const fs::path dir = fs::path(opt.out_dir) / record.house_id;
        write_bundle(dir, record);
        std::cout << "wrote " << dir.string() << "\n";
    }
    std::cout << records.size() << " bundle(s) under " << opt.out_dir << "\n";
    return 0;
}

int cmd_run(const CliOptions& opt) {
    ExperimentConfig config = ExperimentConfig::from_json(load_json_file(opt.config));
    if (opt.seed) {
        config.seed = static_cast<std::uint64_t>(*opt.seed);
    }
    const ExperimentRun run = run_experiment(config, opt.data_dir);

    if (!opt.out_dir.empty()) {
        std::error_code ec;
        fs::create_directories(opt.out_dir, ec);
        if (ec) {
            throw IoError("cannot create directory " + opt.out_dir + ": " + ec.message());
        }
        write_text_file(fs::path(opt.out_dir) / "run.json", dump_json(run.to_json()));
        write_score_csv(fs::path(opt.out_dir) / "scores.csv", score_rows_from_run(run));
    }
    if (opt.format == "json") {
        std::cout << dump_json(run.to_json());
    } else {
        std::cout << render_run_table(run);
    }
    return 0;
}

int cmd_score(const CliOptions& opt) {
    const auto rows = load_score_csv(opt.config);
    const auto reports = reports_from_scores(rows);
    Json j;
    j["reports"] = Json::array();
    for (const auto& r : reports) j["reports"].push_back(r.to_json());
    if (!opt.out_dir.empty()) {
        std::error_code ec;
        fs::create_directories(opt.out_dir, ec);
        if (ec) {
            throw IoError("cannot create directory " + opt.out_dir + ": " + ec.message());
        }
        write_text_file(fs::path(opt.out_dir) / "reports.json", dump_json(j));
    }
    if (opt.format == "json") {
        std::cout << dump_json(j);
    } else {
        std::cout << render_transfer_table(reports);
    }
    return 0;
}

int cmd_report(const CliOptions& opt) {
    const ExperimentRun run = ExperimentRun::from_json(load_json_file(opt.config));
    if (opt.format == "json") {
        std::cout << dump_json(run.to_json());
    } else {
        std::cout << render_run_table(run);
    }
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"transferability evaluation for energy disaggregation"};
    app.set_version_flag("--version", std::string(kToolName) + " " + std::string(kToolVersion));
    app.require_subcommand(1);

    CliOptions synth_opt, run_opt, score_opt, report_opt;

    auto* synth = app.add_subcommand("synth", "generate synthetic household bundles");
    synth->add_option("--config", synth_opt.config, "synth job JSON")->required();
    synth->add_option("--out", synth_opt.out_dir, "output directory for bundles")->required();
    synth->add_option("--seed", synth_opt.seed, "override the base house seed");

    auto* run = app.add_subcommand("run", "run a transferability experiment");
    run->add_option("--config", run_opt.config, "experiment JSON")->required();
    run->add_option("--data", run_opt.data_dir, "directory holding house bundles")->required();
    run->add_option("--out", run_opt.out_dir, "directory for run.json and scores.csv");
    run->add_option("--format", run_opt.format, "stdout format")
        ->check(CLI::IsMember({"table", "json"}));
    run->add_option("--seed", run_opt.seed, "override the config seed");

    auto* score = app.add_subcommand("score", "build transfer reports from a scores CSV");
    score->add_option("--config", score_opt.config, "scores CSV")->required();
    score->add_option("--out", score_opt.out_dir, "directory for reports.json");
    score->add_option("--format", score_opt.format, "stdout format")
        ->check(CLI::IsMember({"table", "json"}));

    auto* report = app.add_subcommand("report", "re-render a stored run");
    report->add_option("--config", report_opt.config, "run JSON from a previous run")->required();
    report->add_option("--format", report_opt.format, "stdout format")
        ->check(CLI::IsMember({"table", "json"}));

    try {
        app.parse(argc, argv);
        if (synth->parsed()) return cmd_synth(synth_opt);
        if (run->parsed()) return cmd_run(run_opt);
        if (score->parsed()) return cmd_score(score_opt);
        if (report->parsed()) return cmd_report(report_opt);
        return 1; // unreachable with require_subcommand(1)
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForVersion& e) {
        std::cout << app.version() << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        std::cerr << "run with --help for usage\n";
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("nilmeval");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

} // namespace nilmeval
