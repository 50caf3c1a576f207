#include "gqed/commands.hpp"
#include "gqed/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

gqed::RunConfig load(const std::string& path) { return gqed::parse_config_file(path); }

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw gqed::ConfigError("cannot write output file '" + path + "'");
    return out;
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw gqed::ConfigError("cannot parse number '" + tok + "'");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"giant-atom waveguide QED toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format = "csv";

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config)
            cmd->add_option("--config", config_path, "config file")->required();
        cmd->add_option("--out", out_path, "output file (default: stdout)");
        cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"csv"}));
    };

    auto* coeffs = app.add_subcommand("coeffs", "master-equation coefficients");
    add_common(coeffs, true);

    auto* scan = app.add_subcommand("scan", "coefficients vs common gap phase");
    add_common(scan, true);

    auto* simulate = app.add_subcommand("simulate", "time-evolve the master equation");
    add_common(simulate, true);

    auto* spectrum = app.add_subcommand("spectrum", "probe transmission/reflection");
    add_common(spectrum, true);

    auto* classify = app.add_subcommand("classify", "pair topologies and protected pairs");
    add_common(classify, true);

    auto* design = app.add_subcommand("design", "decoherence-free inverse design");
    design->require_subcommand(1);

    auto* chain = design->add_subcommand("chain", "1D chain with nearest-neighbor couplings");
    int chain_n = 0;
    std::string chain_g;
    std::string chain_gammas;
    chain->add_option("--n", chain_n, "number of atoms");
    chain->add_option("--g", chain_g, "comma-separated nearest-neighbor couplings")->required();
    chain->add_option("--gammas", chain_gammas, "comma-separated per-atom rates (default 1)");
    chain->add_option("--out", out_path, "write geometry config here");

    auto* all3 = design->add_subcommand("all3", "three atoms, all-to-all couplings");
    std::string pattern = "all-equal";
    double all3_gamma = 1.0;
    all3->add_option("--pattern", pattern, "all-equal or one-flipped")
        ->check(CLI::IsMember({"all-equal", "one-flipped"}));
    all3->add_option("--gamma", all3_gamma, "per-point rate (default 1)");
    all3->add_option("--out", out_path, "write geometry config here");

    CLI11_PARSE(app, argc, argv);

    try {
        std::ofstream file;
        std::ostream* out = &std::cout;
        if (!out_path.empty() && !design->parsed()) {
            file = open_out(out_path);
            out = &file;
        }

        if (coeffs->parsed()) {
            const auto cfg = load(config_path);
            if (!out_path.empty())
                gqed::cmd_coeffs(cfg, std::cout, out);
            else
                gqed::cmd_coeffs(cfg, std::cout, nullptr);
        } else if (scan->parsed()) {
            gqed::cmd_scan(load(config_path), *out);
        } else if (simulate->parsed()) {
            gqed::cmd_simulate(load(config_path), *out);
        } else if (spectrum->parsed()) {
            gqed::cmd_spectrum(load(config_path), *out);
        } else if (classify->parsed()) {
            gqed::cmd_classify(load(config_path), *out);
        } else if (chain->parsed()) {
            const std::vector<double> targets = parse_list(chain_g);
            const int n = chain_n > 0 ? chain_n : static_cast<int>(targets.size()) + 1;
            std::vector<double> gammas =
                chain_gammas.empty() ? std::vector<double>(static_cast<size_t>(n), 1.0)
                                     : parse_list(chain_gammas);
            if (static_cast<int>(gammas.size()) != n)
                throw gqed::ConfigError("design chain: --gammas needs one rate per atom");
            gqed::cmd_design_chain(gammas, targets,
                                   out_path.empty() ? std::nullopt
                                                    : std::make_optional(out_path),
                                   std::cout);
        } else if (all3->parsed()) {
            const auto p = pattern == "all-equal" ? gqed::SignPattern::AllEqual
                                                  : gqed::SignPattern::OneFlipped;
            gqed::cmd_design_all3(all3_gamma, p,
                                  out_path.empty() ? std::nullopt
                                                   : std::make_optional(out_path),
                                  std::cout);
        }
    } catch (const gqed::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
