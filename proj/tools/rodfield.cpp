// rodfield: forward solves, closed-form fields, comparisons, inversion and
// the self-check suite for a thin conductive rod in a uniform or quadratic
// background potential.

#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <omp.h>

#include "rodfield/commands.hpp"

using namespace rodfield;

namespace {

struct Globals {
    std::string config;
    std::string model;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
    std::string out;
    bool verbose = false;
};

RunConfig load(const Globals& g) {
    RunConfig cfg = g.config.empty() ? RunConfig{} : load_config(g.config);
    if (g.seed_set) cfg.seed = g.seed;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thin conductive rod: field maps, asymptotic comparison, inversion, self-checks"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand
    Globals g;
    app.add_option("--config", g.config, "YAML config file (flat key: value)");
    app.add_option("--model", g.model, "forward model for fieldmap")->check(CLI::IsMember({"bem", "asymptotic"}));
    app.add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t s) { g.seed = s; g.seed_set = true; }, "RNG seed (overrides config)");
    app.add_option("--threads", g.threads, "OpenMP thread count")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "output file (default stdout)");
    app.add_flag("-v,--verbose", g.verbose, "more detail");

    auto* fieldmap = app.add_subcommand("fieldmap", "|u - H| and |grad u - grad H| on the config grid");
    auto* forward = app.add_subcommand("forward", "BEM u and grad u on the config grid");
    auto* asymptotic = app.add_subcommand("asymptotic", "closed-form u and grad u on the config grid");
    auto* compare = app.add_subcommand("compare", "BEM vs closed form over the config delta sweep (JSON)");
    auto* validate = app.add_subcommand("validate", "run the built-in invariant suite");
    auto* invert = app.add_subcommand("invert", "fit rod endpoints and strength to measurements (JSON)");

    std::string fault;
    validate->add_option("--inject-fault", fault, "deliberately corrupt the suite meshes")
        ->check(CLI::IsMember({"zero-weights"}));
    InvertRequest inv;
    invert->add_option("--data", inv.data_file, "measurement CSV x1,x2,u (written when --synthesize)");
    invert->add_flag("--synthesize", inv.synthesize, "simulate measurements from the config rod first");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_usage;
    }

    if (g.threads > 0) omp_set_num_threads(g.threads);

    std::unique_ptr<std::ofstream> file;
    if (!g.out.empty()) {
        file = std::make_unique<std::ofstream>(g.out);
        if (!*file) {
            std::cerr << "error: cannot open output file '" << g.out << "'\n";
            return exit_usage;
        }
    }
    std::ostream& out = file ? *file : std::cout;

    try {
        if (validate->parsed()) {
            ValidateRequest req;
            req.verbose = g.verbose;
            req.zero_weights = fault == "zero-weights";
            return cmd_validate(req, out);
        }
        const RunConfig cfg = load(g);
        if (fieldmap->parsed()) return cmd_fieldmap(cfg, g.model.empty() ? cfg.model : parse_forward_model(g.model), out);
        if (forward->parsed()) return cmd_forward(cfg, out);
        if (asymptotic->parsed()) return cmd_asymptotic(cfg, out);
        if (compare->parsed()) return cmd_compare(cfg, out);
        if (invert->parsed()) {
            const int code = cmd_invert(cfg, inv, out);
            if (code != exit_ok) std::cerr << "warning: fit did not converge\n";
            return code;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_usage;
    } catch (const ValidationError& e) {
        std::cerr << "invalid input (" << e.field() << "): " << e.what() << '\n';
        return exit_usage;
    } catch (const ParseError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << "\nusage: " << argv[0] << " invert --config FILE --data FILE\n";
        return exit_usage;
    } catch (const IdentifiabilityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return exit_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
    return exit_usage;
}
