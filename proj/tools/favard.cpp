#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "favard/cli.hpp"

int main(int argc, char** argv)
{
    using namespace favard;
    cli::RunConfig cfg;
    std::string mode = "independent", model = "disk", format = "csv", seed = "0";
    std::optional<int> gen, theta_grid;
    std::optional<std::size_t> samples;

    CLI::App app{"Random Favard length experiments"};
    app.require_subcommand(1, 1);
    for (const char* name : {"generate", "project", "favard", "estimate", "decay", "verify", "render"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("-n,--depth", cfg.depth, "tree height n");
        sub->add_option("-k,--gen", gen, "generation k <= n (default n)");
        sub->add_option("--theta", cfg.theta, "projection direction");
        sub->add_option("--theta-grid", theta_grid, "number of quadrature/search directions");
        sub->add_option("--samples", samples, "Monte Carlo samples");
        sub->add_option("--seed", seed, "master seed (decimal or 0x hex)");
        sub->add_option("--mode", mode, "independent | per-level");
        sub->add_option("--model", model, "disk | quarter-corner");
        sub->add_option("--format", format, "csv | json | svg");
        sub->add_option("--out", cfg.out, "output path (default stdout)");
        sub->add_option("--check", cfg.check, "all | at-most-two | shift | jacobian | nesting | triple-hit");
        sub->add_option("--quantity", cfg.quantity, "estimate: dk | favard | recursion | overlap");
        sub->add_option("--workers", cfg.workers, "worker threads (0 = hardware)");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::kUsage;
    }

    try {
        cfg.command = app.get_subcommands().front()->get_name();
        cfg.gen = gen;
        cfg.theta_grid = theta_grid;
        cfg.samples = samples;
        cfg.seed = parse_seed(seed);
        cfg.mode = parse_tree_mode(mode);
        cfg.model = cli::parse_model(model);
        cfg.format = cli::parse_format(format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kUsage;
    }

    if (cfg.out.empty()) return cli::run(cfg, std::cout, std::cerr);

    std::ostringstream buf;
    const int status = cli::run(cfg, buf, std::cerr);
    if (status == cli::kUsage) return status;
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) {
        std::cerr << "error: cannot open " << cfg.out << '\n';
        return cli::kUsage;
    }
    f << buf.str();
    return status;
}
