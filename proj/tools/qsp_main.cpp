/// qsp: invariant reports and verification suites for quantum symmetric
/// pairs at odd roots of unity. Exit codes: 0 success, 1 a verification
/// check failed, 2 invalid configuration or input.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qsp/cli.hpp"

namespace {

std::vector<long> parse_levels(const std::string& csv) {
    std::vector<long> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t used = 0;
        long v = std::stol(item, &used);
        if (used != item.size() || v < 1) throw qsp::DomainError("--ell: expected positive integers, got \"" + item + "\"");
        out.push_back(v);
    }
    if (out.empty()) throw qsp::DomainError("--ell: empty level list");
    return out;
}

qsp::Word parse_word(const std::string& csv) {
    qsp::Word out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        size_t used = 0;
        long v = std::stol(item, &used);
        if (used != item.size() || v < 1) throw qsp::DomainError("--word: expected node numbers, got \"" + item + "\"");
        out.push_back(static_cast<int>(v - 1));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact invariants and verification suites for quantum symmetric pairs at roots of unity"};
    app.require_subcommand(1);

    std::string diagram, ell_csv, word_csv, out_path, suite;
    int jobs = 1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--diagram", diagram, "path to a Satake diagram JSON file");
        cmd->add_option("--ell", ell_csv, "comma-separated odd levels, e.g. 3,5,7");
        cmd->add_option("--word", word_csv, "comma-separated 1-indexed reduced word for w_0 w_bullet");
        cmd->add_option("--out", out_path, "write the report to this file instead of stdout");
        cmd->add_option("--jobs", jobs, "worker threads for independent cases")->check(CLI::PositiveNumber);
    };

    CLI::App* inv = app.add_subcommand("invariants", "print the invariant report for a diagram or the catalog");
    add_common(inv);

    CLI::App* verify = app.add_subcommand("verify", "run a named verification suite");
    verify->add_option("suite", suite, "one of: unity, kernel, frobenius, braid, smalldim, rewrite")->required();
    add_common(verify);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        qsp::RunConfig cfg;
        cfg.command = inv->parsed() ? "invariants" : "verify";
        cfg.suite = suite;
        cfg.diagram_path = diagram;
        if (!ell_csv.empty()) cfg.ells = parse_levels(ell_csv);
        if (!word_csv.empty()) cfg.word_override = parse_word(word_csv);
        cfg.jobs = jobs;

        if (!out_path.empty()) {
            std::ofstream out(out_path);
            if (!out) throw qsp::DomainError("--out: cannot open " + out_path);
            return qsp::run_command(cfg, out);
        }
        return qsp::run_command(cfg, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":\"" << e.what() << "\"}\n";
        return 2;
    }
}
