#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "labelpeg/cli.hpp"

int main(int argc, char** argv) {
    using namespace labelpeg;
    CLI::App app{"Match an input file against a parsing expression grammar"};
    app.option_defaults()->always_capture_default();

    RunConfig cfg;
    std::string mode = "expected", strategy = "join", transform = "none", start;
    bool no_eof = false;

    app.add_option("--grammar", cfg.grammar_path, "grammar file")->required();
    app.add_option("--input", cfg.input_path, "input file");
    app.add_option("--mode", mode, "plain, farthest, expected or labeled")
        ->check(CLI::IsMember({"plain", "farthest", "expected", "labeled"}));
    app.add_option("--start", start, "start rule (default: first rule in the file)");
    app.add_flag("--no-require-eof", no_eof, "accept a match that leaves input unconsumed");
    app.add_option("--var-strategy", strategy, "join or propagate")->check(CLI::IsMember({"join", "propagate"}));
    app.add_option("--transform", transform, "none or four-values")->check(CLI::IsMember({"none", "four-values"}));
    app.add_flag("--validate-only", cfg.validate_only, "check the grammar and stop");
    app.add_option("--steps", cfg.steps, "step budget of the matcher")->check(CLI::PositiveNumber);
    app.add_option("--source-name", cfg.source_name, "file name shown in diagnostics (default: --input)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e, std::cout, std::cerr);
        return 2;
    }
    if (!cfg.validate_only && cfg.input_path.empty()) {
        std::cerr << "labelpeg: --input is required unless --validate-only is given\n";
        return 2;
    }
    cfg.mode = *parse_mode(mode);
    cfg.var_strategy = *parse_var_strategy(strategy);
    cfg.transform = *parse_transform(transform);
    cfg.require_eof = !no_eof;
    if (!start.empty()) cfg.start_rule = start;
    return run(cfg, std::cout, std::cerr);
}
