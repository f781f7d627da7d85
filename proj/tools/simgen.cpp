#include <CLI11.hpp>
#include <iostream>

#include "fdaprog/error.hpp"
#include "fdaprog/sim.hpp"

// Writes a synthetic C-MAPSS-style fleet (train.txt, test.txt, rul.txt) so
// the pipeline can be exercised end to end without the real dataset.
int main(int argc, char** argv) {
    CLI::App app{"Synthetic turbofan degradation data generator (C-MAPSS file layout)"};
    std::string out_dir = "data/sim";
    fdaprog::sim::SimConfig cfg;
    app.add_option("-o,--out", out_dir, "output directory");
    app.add_option("--train", cfg.n_train, "number of training engines");
    app.add_option("--test", cfg.n_test, "number of test engines");
    app.add_option("--seed", cfg.seed, "RNG seed");
    CLI11_PARSE(app, argc, argv);

    try {
        fdaprog::sim::SimData data = fdaprog::sim::generate(cfg);
        fdaprog::sim::write_files(data, out_dir);
        std::cerr << "wrote " << data.train.size() << " training and " << data.test.size() << " test units to "
                  << out_dir << "\n";
        return 0;
    } catch (const fdaprog::Error& e) {
        std::cerr << "error " << e.what() << "\n";
        return 2;
    }
}
