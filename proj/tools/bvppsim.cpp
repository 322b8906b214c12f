// Command-line front door: generate synthetic fleets, run the market case,
// run the clustering/recommendation case, or just validate a config.
// Exit code 0 means every stage succeeded.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "bvpp/config.hpp"
#include "bvpp/log.hpp"
#include "bvpp/pipeline.hpp"
#include "bvpp/version.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;
    bool strict = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "scenario config JSON")->required();
    cmd->add_option("--out", args.out_dir, "output directory (overrides the config)");
    cmd->add_option("--seed", args.seed, "seed override")->each([&](const std::string&) {
        args.seed_set = true;
    });
    cmd->add_option("--threads", args.threads, "worker threads for per-household stages")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--strict", args.strict, "treat warnings as errors");
}

bvpp::ScenarioConfig load(const CommonArgs& args) {
    bvpp::ScenarioConfig config = bvpp::load_scenario_config(args.config_path);
    if (args.seed_set) bvpp::apply_seed_override(config, args.seed);
    return config;
}

bvpp::RunOptions options(const CommonArgs& args) {
    bvpp::RunOptions opts;
    opts.out_dir = args.out_dir;
    opts.threads = args.threads;
    opts.strict = args.strict;
    return opts;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"building virtual power plant simulation toolkit"};
    app.require_subcommand(1);

    CommonArgs gen_args;
    CLI::App* gen = app.add_subcommand("generate", "write household profile CSVs and tariffs");
    add_common(gen, gen_args);

    CommonArgs case1_args;
    CLI::App* case1 =
        app.add_subcommand("case1", "schedule buildings, bid the battery, settle the market");
    add_common(case1, case1_args);

    CommonArgs case2_args;
    CLI::App* case2 =
        app.add_subcommand("case2", "cluster households, flag inefficiency, recommend plans");
    add_common(case2, case2_args);

    CommonArgs validate_args;
    CLI::App* validate =
        app.add_subcommand("validate-config", "parse and validate a config, write nothing");
    add_common(validate, validate_args);

    CLI::App* version = app.add_subcommand("version", "print the toolkit version");

    CLI11_PARSE(app, argc, argv);

    try {
        if (version->parsed()) {
            std::printf("bvppsim %s\n", bvpp::kToolkitVersion);
            return 0;
        }
        if (gen->parsed()) {
            bvpp::run_generate(load(gen_args), options(gen_args));
            return 0;
        }
        if (case1->parsed()) {
            bvpp::run_case1(load(case1_args), options(case1_args));
            return 0;
        }
        if (case2->parsed()) {
            bvpp::run_case2(load(case2_args), options(case2_args));
            return 0;
        }
        if (validate->parsed()) {
            const bvpp::ScenarioConfig config = load(validate_args);
            std::printf("ok %s\n", bvpp::config_hash_hex(config).c_str());
            return 0;
        }
    } catch (const bvpp::Error& e) {
        bvpp::log_error(e.what());
        return 1;
    } catch (const std::exception& e) {
        bvpp::log_error(e.what());
        return 1;
    }
    return 1;
}
