// Regenerates the bundled sample capture (data/sample.csv by default).
#include <cstdio>
#include <exception>

#include "CLI11.hpp"

#include "advids/synth/generator.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Deterministic sample traffic capture generator"};
    advids::synth::SynthConfig cfg;
    std::string out = "data/sample.csv";
    app.add_option("--out", out, "Output CSV path");
    app.add_option("--rows-per-class", cfg.rows_per_class,
                   "Rows generated for each of the 15 classes");
    app.add_option("--seed", cfg.seed, "Generator seed");
    app.add_option("--class-step", cfg.class_step,
                   "Raw-scale distance between adjacent class levels");
    app.add_option("--noise-sigma", cfg.noise_sigma,
                   "Gaussian noise on signal columns");
    app.add_option("--burst-prob", cfg.burst_prob,
                   "Chance a signal cell becomes a wide-range burst");
    app.add_option("--duplicate-rows", cfg.duplicate_rows,
                   "Duplicate rows appended to exercise cleaning");
    app.add_option("--corrupt-rows", cfg.corrupt_rows,
                   "Corrupt rows appended to exercise cleaning");
    CLI11_PARSE(app, argc, argv);

    try {
        advids::synth::write_sample_csv(cfg, out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    std::printf("wrote %s\n", out.c_str());
    return 0;
}
