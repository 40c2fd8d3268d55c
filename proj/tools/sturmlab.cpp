#include <cstdlib>
#include <string>

#include "CLI11.hpp"
#include "sturm/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"spectral laboratory for Sturmian Hamiltonians"};
    app.require_subcommand(1);

    sturm::RunConfig cfg;
    if (const char* env = std::getenv("STURMLAB_CACHE")) cfg.cache_dir = env;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--lambda", cfg.lambda_str, "coupling constant (decimal string)");
        sub->add_option("--cf", cfg.cf_literal,
                        "frequency as CF literal, e.g. \"(1)\" or \"1,2:(3,4)\"");
        sub->add_option("--bits", cfg.mantissa_bits, "working mantissa bits (>= 53)");
        sub->add_option("--seed", cfg.seed, "random seed");
        sub->add_option("--threads", cfg.threads, "worker threads");
        sub->add_option("--out", cfg.out_path, "JSON output path (default stdout)");
        sub->add_option("--cache-dir", cfg.cache_dir,
                        "band-tree cache root (also via STURMLAB_CACHE)");
    };

    CLI::App* bands = app.add_subcommand("bands", "emit the band-tree JSON");
    add_common(bands);
    bands->add_option("--depth", cfg.depth, "hierarchy depth");

    CLI::App* dim = app.add_subcommand("dim", "per-level Moran exponents and tails");
    add_common(dim);
    dim->add_option("--depth", cfg.depth, "hierarchy depth");
    dim->add_option("--tail", cfg.tail_window, "tail window");
    dim->add_option("--csv", cfg.csv_path, "CSV output path");

    CLI::App* inv = app.add_subcommand("invariance",
                                       "compare dimensions of a frequency and its shift");
    add_common(inv);
    inv->add_option("--depth", cfg.depth, "hierarchy depth");
    inv->add_option("--tail", cfg.tail_window, "tail window");

    CLI::App* cov = app.add_subcommand("covariance", "relative band-length stability");
    add_common(cov);
    cov->add_option("--depth", cfg.depth, "hierarchy depth");
    cov->add_option("--pairs", cfg.pairs, "sampled word pairs");

    CLI::App* loc = app.add_subcommand("localdim", "subtree dimension homogeneity");
    add_common(loc);
    loc->add_option("--depth", cfg.depth, "subtree depth below the probes");
    loc->add_option("--probes", cfg.probes, "probe bands at level 2");
    loc->add_option("--tail", cfg.tail_window, "tail window");

    CLI::App* cont = app.add_subcommand("continuity",
                                        "Hausdorff distance between two covers");
    add_common(cont);
    cont->add_option("--cf2", cfg.cf2_literal, "second frequency (shared prefix)")
        ->required();
    cont->add_option("--level", cfg.level, "cover level");

    CLI::App* mc = app.add_subcommand("mc-sweep",
                                      "Monte Carlo over sampled frequencies");
    add_common(mc);
    mc->add_option("--depth", cfg.depth, "hierarchy depth");
    mc->add_option("--count", cfg.count, "number of sampled frequencies");
    mc->add_option("--cf-depth", cfg.cf_depth, "quotients per sampled frequency");
    mc->add_option("--tail", cfg.tail_window, "tail window");
    mc->add_option("--csv", cfg.csv_path, "CSV output path");

    CLI::App* eig = app.add_subcommand("oracle-eig",
                                       "eigenvalues of a finite Dirichlet truncation");
    add_common(eig);
    eig->add_option("--size", cfg.size, "truncation size");
    eig->add_option("--omega", cfg.omega, "phase");

    CLI::App* per = app.add_subcommand("oracle-periodic",
                                       "bands of the periodic approximant");
    add_common(per);
    per->add_option("--k", cfg.k, "approximant level (period q_k)");

    CLI11_PARSE(app, argc, argv);
    cfg.command = app.get_subcommands().front()->get_name();
    return sturm::run(cfg);
}
