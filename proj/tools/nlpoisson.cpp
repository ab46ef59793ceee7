// nlpoisson <check-kernel|mass-report|solve|study|eigen> --config <path> [--out <dir>] [--threads <k>]
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "nlpoisson/cli.hpp"
#include "nlpoisson/config.hpp"
#include "nlpoisson/error.hpp"

namespace {

void fail(nlpoisson::ErrorCode code, const std::string& message) {
    std::cerr << "ERROR " << nlpoisson::code_name(code) << ' ' << message << '\n';
}

// NLPOISSON_THREADS wins over --threads.
std::optional<int> thread_count(std::optional<int> flag) {
    if (const char* env = std::getenv("NLPOISSON_THREADS"); env && *env) {
        char* end = nullptr;
        const long k = std::strtol(env, &end, 10);
        if (*end != '\0' || k < 1 || k > 4096) {
            throw nlpoisson::Error(nlpoisson::ErrorCode::InvalidArgument,
                                   std::string("NLPOISSON_THREADS must be a positive integer, got '") + env + "'");
        }
        return static_cast<int>(k);
    }
    return flag;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlocal point-integral Poisson solver"};
    std::string command_text;
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<int> threads;
    app.add_option("command", command_text, "check-kernel | mass-report | solve | study | eigen")->required();
    app.add_option("--config", config_path, "key = value configuration file")->required();
    app.add_option("--out", out_dir, "output directory (overrides the config 'output' key)");
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        fail(nlpoisson::ErrorCode::InvalidArgument, e.what());
        return 2;
    }

    try {
        const auto command = nlpoisson::parse_command(command_text);
        if (!command) {
            throw nlpoisson::Error(nlpoisson::ErrorCode::InvalidArgument, "unknown command '" + command_text + "'");
        }
        if (const auto k = thread_count(threads)) omp_set_num_threads(*k);
        const auto config = nlpoisson::load_config(config_path);
        const std::string out = out_dir.value_or(config.output.value_or("."));
        return nlpoisson::run(config, *command, out, std::cout, std::cerr);
    } catch (const nlpoisson::Error& e) {
        fail(e.code(), e.what());
    } catch (const std::exception& e) {
        fail(nlpoisson::ErrorCode::Invariant, e.what());
    }
    return 1;
}
