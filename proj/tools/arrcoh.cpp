#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "arrcoh/cli.hpp"

int main(int argc, char** argv)
{
    using namespace arrcoh::cli;

    CLI::App app{"Betti numbers of hyperplane arrangement complements via the relative Mayer-Vietoris "
                 "spectral sequence, and spectral-sequence pages of double complexes."};
    app.require_subcommand(1);

    RunConfig cfg;
    std::size_t infinity = 0;
    bool no_oracle = false;

    struct Entry
    {
        const char* name;
        const char* help;
    };
    const Entry entries[] = {
        {"betti", "print b_0..b_n and the Poincare polynomial"},
        {"poset", "dump the intersection poset with codimensions and Moebius values"},
        {"e1", "print the first page of the spectral sequence"},
        {"e2", "print the second page of the spectral sequence"},
        {"oracle", "print the Moebius and Whitney oracle Betti numbers"},
        {"check", "run every consistency check; exit 3 on any failure"},
        {"ss", "read a double-complex file and print both spectral sequences"},
    };
    for (const auto& e : entries)
    {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        sub->add_option("input", cfg.input_path, "input file ('-' for stdin)")->required();
        sub->add_flag("--json", cfg.json, "machine-readable output");
        sub->add_flag("-v,--verbose", cfg.verbose, "extra detail");
        if (std::string(e.name) != "ss")
        {
            sub->add_option("--infinity", infinity, "1-based index of the hyperplane at infinity (projective input)")
                ->check(CLI::PositiveNumber);
            sub->add_option("--cap", cfg.enumeration_cap, "maximum number of hyperplanes for subset enumeration")
                ->check(CLI::PositiveNumber);
            sub->add_flag("--no-oracle", no_oracle, "skip the combinatorial oracles");
        }
        sub->callback([&cfg, name = std::string(e.name)] { cfg.subcommand = *parse_subcommand(name); });
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_invalid;
    }

    for (CLI::App* sub : app.get_subcommands())
        if (cfg.subcommand != Subcommand::Ss && sub->count("--infinity") > 0)
            cfg.infinity_index = infinity - 1;
    cfg.oracles = !no_oracle;

    if (cfg.input_path == "-")
        return run(cfg, std::cin, std::cout, std::cerr);

    std::ifstream file(cfg.input_path);
    if (!file)
    {
        std::cerr << "error: cannot open " << cfg.input_path << '\n';
        return exit_invalid;
    }
    return run(cfg, file, std::cout, std::cerr);
}
