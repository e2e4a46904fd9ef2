// Copyright 2026 The critsense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "critsense/error.hpp"
#include "critsense_cli/config.hpp"
#include "critsense_cli/runner.hpp"

namespace cli = critsense::cli;

int main(int argc, char** argv) {
    CLI::App app{"Criticality-enhanced frequency estimation toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::string out_dir;

    for (const char* name : {"sweep", "scaling", "precision", "traces", "calibrate", "classical"}) {
        CLI::App* sub = app.add_subcommand(name, std::string("run the ") + name + " command");
        sub->add_option("--config", config_path, "configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "random seed (overrides the config)");
        sub->add_option("--threads", threads, "worker threads (overrides the config)")->check(CLI::PositiveNumber);
        sub->add_option("--out", out_dir, "output directory");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kExitUsageError;
    }
    const std::string command_name = app.get_subcommands().front()->get_name();

    cli::RunConfig config;
    try {
        std::ifstream in(config_path);
        std::ostringstream text;
        text << in.rdbuf();
        config = cli::parse_config(text.str(), cli::parse_command(command_name));
    } catch (const critsense::Error& e) {
        std::cerr << config_path << ": " << e.what() << '\n';
        return cli::kExitUsageError;
    }
    if (seed) {
        config.seed = *seed;
    }
    if (threads) {
        config.threads = *threads;
    }
    if (!out_dir.empty()) {
        config.output_dir = out_dir;
    } else if (config.output_dir.empty()) {
        const char* env = std::getenv(cli::kOutDirEnv);
        config.output_dir = env != nullptr && *env != '\0' ? env : "critsense_out";
    }

    try {
        const cli::RunResult result = cli::run(config, std::cerr);
        if (result.point_errors > 0) {
            std::cerr << result.point_errors << " point(s) failed; see " << (config.output_dir / "errors.csv").string()
                      << '\n';
        }
        return result.exit_code;
    } catch (const critsense::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kExitDomainError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kExitDomainError;
    }
}
