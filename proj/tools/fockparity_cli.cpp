// fockparity: batch runner for parity-heralded teleportation scenarios.
//
//   fockparity run --scenario s.json [--scenario t.json ...] [--out path] [--quiet]
//   fockparity validate --scenario s.json
//   fockparity list-protocols
//
// Exit codes: 0 success, 1 assertion failure, 2 schema/validation error,
// 3 internal error. With several scenarios the most severe code wins.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fockparity/scenario.hpp"

namespace fs = std::filesystem;
using fockparity::json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_assertion = 1;
constexpr int exit_invalid = 2;
constexpr int exit_internal = 3;

struct FileResult {
    int code = exit_ok;
    json document;
    std::string summary;
};

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_atomically(const fs::path& target, const std::string& text) {
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << text << '\n';
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

json invalid_document(const fockparity::ScenarioInvalid& e) {
    json errors = json::array();
    for (const auto& f : e.errors()) errors.push_back({{"kind", f.kind}, {"path", f.path}, {"message", f.message}});
    return {{"status", "error"}, {"errors", errors}};
}

FileResult process(const fs::path& scenario_path) {
    FileResult r;
    const std::string name = scenario_path.filename().string();
    try {
        const auto scenario = fockparity::validate_scenario(std::string_view(read_file(scenario_path)));
        auto run = fockparity::run_scenario(scenario);
        r.document = std::move(run.document);
        r.summary = name + ": " + run.summary;
        r.code = run.status == "ok" ? exit_ok : run.status == "assertion_failure" ? exit_assertion : exit_invalid;
    } catch (const fockparity::ScenarioInvalid& e) {
        r.code = exit_invalid;
        r.document = invalid_document(e);
        r.summary = name + ": invalid scenario: " + e.what();
    } catch (const std::exception& e) {
        r.code = exit_internal;
        r.document = {{"status", "error"}, {"errors", json::array({{{"kind", "InternalError"}, {"message", e.what()}}})}};
        r.summary = name + ": internal error: " + e.what();
    }
    return r;
}

int run_command(const std::vector<std::string>& scenarios, const std::string& out, bool quiet) {
    std::vector<std::future<FileResult>> jobs;
    for (const auto& s : scenarios) jobs.push_back(std::async(std::launch::async, process, fs::path(s)));

    const bool many = scenarios.size() > 1;
    if (many && !out.empty()) fs::create_directories(out);

    int code = exit_ok;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        FileResult r = jobs[i].get();
        try {
            const std::string text = r.document.dump(2);
            if (out.empty()) {
                std::cout << text << '\n';
            } else {
                fs::path target = many ? fs::path(out) / (fs::path(scenarios[i]).stem().string() + ".results.json")
                                       : fs::path(out);
                write_atomically(target, text);
            }
        } catch (const std::exception& e) {
            r.code = exit_internal;
            r.summary += std::string(" (output failed: ") + e.what() + ")";
        }
        if (!quiet) (out.empty() ? std::cerr : std::cout) << r.summary << '\n';
        code = std::max(code, r.code);
    }
    return code;
}

int validate_command(const std::string& path) {
    try {
        const auto scenario = fockparity::validate_scenario(std::string_view(read_file(path)));
        std::cout << path << ": valid " << fockparity::to_string(scenario.protocol) << " scenario\n";
        return exit_ok;
    } catch (const fockparity::ScenarioInvalid& e) {
        for (const auto& f : e.errors()) std::cout << path << ": " << f.kind << " at " << f.path << ": " << f.message << '\n';
        return exit_invalid;
    } catch (const std::exception& e) {
        std::cerr << path << ": " << e.what() << '\n';
        return exit_internal;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parity-heralded teleportation and quantum scissors simulator"};
    app.require_subcommand(1);

    std::vector<std::string> scenarios;
    std::string out;
    bool quiet = false;
    auto* run = app.add_subcommand("run", "Run scenario files and write results documents");
    run->add_option("--scenario", scenarios, "Scenario file (repeatable)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out, "Results file, or directory when several scenarios are given");
    run->add_flag("--quiet", quiet, "Suppress the one-line summary");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Check a scenario file without running it");
    validate->add_option("--scenario", validate_path, "Scenario file")->required()->check(CLI::ExistingFile);

    auto* list = app.add_subcommand("list-protocols", "Print the protocol names accepted in scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_invalid;
    }

    if (*run) return run_command(scenarios, out, quiet);
    if (*validate) return validate_command(validate_path);
    if (*list) {
        for (const auto& [kind, name] : fockparity::protocol_names) std::cout << name << '\n';
        return exit_ok;
    }
    return exit_internal;
}
