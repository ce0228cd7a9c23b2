#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rhpw/cli.hpp"
#include "rhpw/parallel.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Long-time asymptotics of defocusing NLS with time-periodic boundary data"};
    std::string command, config, out = ".";
    int threads = 0;
    app.add_option("subcommand", command, "validate | asymptotics | oracle | compare | cross-check")
        ->required()
        ->check(CLI::IsMember({"validate", "asymptotics", "oracle", "compare", "cross-check"}));
    app.add_option("--config", config, "JSON run configuration")->required();
    app.add_option("--out", out, "output directory");
    app.add_option("--threads", threads, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : rhpw::exit_config;
    }

    std::ifstream f(config);
    if (!f) {
        std::cerr << "config error: cannot read " << config << '\n';
        return rhpw::exit_config;
    }
    std::stringstream text;
    text << f.rdbuf();

    rhpw::set_thread_count(threads);
    try {
        const rhpw::RunConfig cfg = rhpw::parse_config(text.str(), command);
        std::cout << cfg.resolved << '\n';
        return rhpw::run(cfg, out, std::cout);
    } catch (const rhpw::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return rhpw::exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
