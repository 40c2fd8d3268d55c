#ifndef STURM_CLI_HPP
#define STURM_CLI_HPP

#include <cstdint>
#include <string>

namespace sturm {

// One batch run. Identical config + seed produces byte-identical artifacts,
// independent of the thread count.
struct RunConfig {
    std::string command;
    std::string lambda_str = "24";
    std::string cf_literal = "(1)";
    std::string cf2_literal;  // continuity: the perturbed frequency
    int depth = 6;
    int level = 6;        // continuity: cover level
    int k = 4;            // oracle-periodic: approximant level
    int size = 89;        // oracle-eig: truncation size
    unsigned mantissa_bits = 192;
    std::uint64_t seed = 1;
    int tail_window = 3;
    long long pairs = 200;  // covariance: sampled word pairs
    int probes = 4;         // localdim: probe bands
    int count = 30;         // mc-sweep: sampled frequencies
    int cf_depth = 12;      // mc-sweep: quotients per sampled frequency
    double omega = 0.0;     // oracle-eig: phase
    int threads = 1;
    std::string out_path;   // JSON artifact; empty writes to stdout
    std::string csv_path;   // optional CSV artifact
    std::string cache_dir;  // band-tree cache root; empty disables caching
};

// Exit codes: 0 ok, 2 config error, 3 precision exhausted, 4 internal
// invariant violation. Module errors come back as machine-readable error
// JSON on the configured output.
int run(const RunConfig& config);

} // namespace sturm

#endif
