#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "blockade/io.hpp"

// Exit contract: 0 success, 1 validation/config error, 2 numerical failure.
int main(int argc, char** argv) {
    CLI::App app{"Two-mode blockade simulator and coupling synthesizer"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out;
    std::uint64_t seed = 0;
    double step = 0.0;

    static const char* kVerbs[] = {"simulate",  "replay",     "optimize", "sweep",
                                   "baseline",  "robustness", "twotime"};
    static const char* kHelp[] = {
        "integrate a waveform and write the observable trace",
        "integrate a shipped waveform record and write trace plus residual report",
        "search harmonic coefficients minimizing the final two-photon weight",
        "one optimize run per (tau_T, p) cell",
        "constant-coupling reference: locate the deepest correlation dip",
        "rescan a fixed waveform under a range of mode-2 nonlinearities",
        "delayed second-order correlation after an emission at a chosen time"};
    for (int i = 0; i < 7; ++i) {
        auto* sub = app.add_subcommand(kVerbs[i], kHelp[i]);
        sub->add_option("--config", config_path, "JSON config document")->required();
        sub->add_option("--out", out, "output directory (overrides config)");
        sub->add_option("--seed", seed, "RNG seed (overrides config)");
        sub->add_option("--step", step, "integration step (overrides config)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    auto* sub = app.get_subcommands().front();
    blockade::CliOverrides ov;
    ov.mode = sub->get_name();
    if (sub->count("--out")) ov.output = out;
    if (sub->count("--seed")) ov.seed = seed;
    if (sub->count("--step")) ov.step = step;

    try {
        return blockade::run(blockade::load_config(config_path, ov));
    } catch (const blockade::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const blockade::NumericalError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
