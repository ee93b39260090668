#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "convspec/runner.hpp"

namespace {

// Flag beats environment beats config; empty string means "not given".
std::string env_or(const std::string& flag_value, const char* env_name) {
    if (!flag_value.empty()) return flag_value;
    const char* env = std::getenv(env_name);
    return env != nullptr ? env : "";
}

int run_command(const std::string& config_path, const std::string& example_name,
                const std::string& out_flag, const std::string& cap_flag,
                const std::vector<int>& radii, bool fail_fast) {
    convspec::AnalysisConfig cfg;
    try {
        if (!example_name.empty()) {
            const convspec::BundledExample* found = nullptr;
            for (const auto& ex : convspec::bundled_examples()) {
                if (ex.name == example_name) found = &ex;
            }
            if (found == nullptr) {
                std::cerr << "no bundled example named '" << example_name
                          << "'; run 'convspec examples' for the list\n";
                return convspec::kExitConfig;
            }
            cfg = convspec::parse_config_text(found->config_text);
        } else {
            cfg = convspec::parse_config_file(config_path);
        }
    } catch (const convspec::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return convspec::kExitConfig;
    }

    convspec::RunOptions opts;
    opts.fail_fast = fail_fast;
    opts.out_override = env_or(out_flag, "CONVSPEC_OUT");
    opts.radii_override = radii;
    std::string cap_text = env_or(cap_flag, "CONVSPEC_CAP");
    if (!cap_text.empty()) {
        try {
            std::size_t pos = 0;
            long long cap = std::stoll(cap_text, &pos);
            if (pos != cap_text.size() || cap <= 0) throw std::invalid_argument(cap_text);
            opts.cap_override = static_cast<std::size_t>(cap);
        } catch (const std::exception&) {
            std::cerr << "config error: cap must be a positive integer, got '" << cap_text
                      << "'\n";
            return convspec::kExitConfig;
        }
    }

    convspec::RunResult result = convspec::run(cfg, opts);
    for (const auto& row : result.report["tasks"]) {
        std::cout << "  " << row["status"].get<std::string>() << "  "
                  << row["name"].get<std::string>() << " (" << row["type"].get<std::string>()
                  << ")";
        if (row.contains("error")) std::cout << ": " << row["error"].get<std::string>();
        std::cout << "\n";
    }
    for (const std::string& f : result.required_failures) {
        std::cout << "required check failed: " << f << "\n";
    }
    if (!result.written_files.empty()) {
        std::cout << "report: " << result.written_files.back() << "\n";
    }
    return result.exit_code;
}

int validate_command(const std::string& config_path) {
    try {
        convspec::AnalysisConfig cfg = convspec::parse_config_file(config_path);
        std::cout << "config ok: " << cfg.tasks.size() << " task(s) on "
                  << cfg.group.describe() << "\n";
        return convspec::kExitOk;
    } catch (const convspec::Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return convspec::kExitConfig;
    }
}

int examples_command(const std::string& write_dir) {
    if (write_dir.empty()) {
        for (const auto& ex : convspec::bundled_examples()) {
            std::cout << ex.name << "\n    " << ex.description << "\n";
        }
        return convspec::kExitOk;
    }
    std::filesystem::create_directories(write_dir);
    for (const auto& ex : convspec::bundled_examples()) {
        std::filesystem::path path = std::filesystem::path(write_dir) / (ex.name + ".json");
        std::ofstream os(path);
        if (!os) {
            std::cerr << "cannot write " << path.string() << "\n";
            return convspec::kExitConfig;
        }
        os << ex.config_text << "\n";
        std::cout << "wrote " << path.string() << "\n";
    }
    return convspec::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"convolution operator analysis on finitely generated groups"};
    app.require_subcommand(1);

    std::string config_path;
    std::string example_name;
    std::string out_flag;
    std::string cap_flag;
    std::vector<int> radii;
    bool fail_fast = false;

    CLI::App* run_cmd = app.add_subcommand("run", "execute the tasks of a config");
    CLI::Option* cfg_opt = run_cmd->add_option("--config,-c", config_path, "config file (JSON)");
    CLI::Option* ex_opt =
        run_cmd->add_option("--example", example_name, "run a bundled example instead");
    cfg_opt->excludes(ex_opt);
    run_cmd->add_option("--out", out_flag, "output directory (overrides CONVSPEC_OUT and config)");
    run_cmd->add_option("--radius", radii, "truncation radius, repeatable (overrides config)")
        ->check(CLI::Range(0, 64));
    run_cmd->add_option("--cap", cap_flag, "ball size cap (overrides CONVSPEC_CAP and config)");
    run_cmd->add_flag("--fail-fast", fail_fast, "stop after the first task error");

    std::string validate_path;
    CLI::App* validate_cmd = app.add_subcommand("validate", "parse a config and report problems");
    validate_cmd->add_option("--config,-c", validate_path, "config file (JSON)")->required();

    std::string write_dir;
    CLI::App* examples_cmd = app.add_subcommand("examples", "list bundled example configs");
    examples_cmd->add_option("--write", write_dir, "write each example config into this directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? convspec::kExitOk : convspec::kExitConfig;
    }

    if (run_cmd->parsed()) {
        if (config_path.empty() && example_name.empty()) {
            std::cerr << "run needs --config or --example\n";
            return convspec::kExitConfig;
        }
        return run_command(config_path, example_name, out_flag, cap_flag, radii, fail_fast);
    }
    if (validate_cmd->parsed()) return validate_command(validate_path);
    if (examples_cmd->parsed()) return examples_command(write_dir);
    return convspec::kExitConfig;
}
