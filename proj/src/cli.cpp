#include "sturm/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "sturm/bands.hpp"
#include "sturm/dimension.hpp"
#include "sturm/errors.hpp"
#include "sturm/experiments.hpp"
#include "sturm/operator_oracle.hpp"

using ojson = nlohmann::ordered_json;

namespace sturm {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_artifact(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file " + path);
    out << text;
}

ojson header(const RunConfig& c, const Real& lambda) {
    ojson j;
    j["command"] = c.command;
    j["lambda"] = c.lambda_str;
    j["cf"] = c.cf_literal;
    j["mantissa_bits"] = c.mantissa_bits;
    j["seed"] = c.seed;
    ojson warnings = ojson::array();
    if (lambda < 24)
        warnings.push_back("lambda below 24: the dimension identities backing "
                           "these quantities are only established for lambda >= 24");
    j["warnings"] = warnings;
    return j;
}

ojson moran_levels_json(const std::vector<MoranLevel>& levels) {
    ojson arr = ojson::array();
    for (const MoranLevel& lv : levels) {
        ojson e;
        e["k"] = lv.k;
        e["defined"] = lv.defined;
        if (lv.defined) {
            e["s"] = lv.s;
            e["residual"] = lv.residual;
            e["s_err"] = lv.s_err;
            e["out_of_theory_range"] = lv.out_of_theory_range;
        }
        e["max_len"] = lv.max_len;
        e["count"] = lv.count;
        arr.push_back(e);
    }
    return arr;
}

ojson moran_result_json(const MoranResult& r) {
    ojson j;
    j["s_by_level"] = moran_levels_json(r.s_by_level);
    j["tail_min"] = r.tail_min;
    j["tail_max"] = r.tail_max;
    j["tail_window"] = r.tail_window;
    return j;
}

std::string moran_csv(const std::vector<MoranLevel>& levels) {
    std::ostringstream os;
    os << "k,s_k,residual,s_err,max_len,count\n";
    for (const MoranLevel& lv : levels) {
        os << lv.k << ",";
        if (lv.defined)
            os << fmt_double(lv.s) << "," << fmt_double(lv.residual) << ","
               << fmt_double(lv.s_err);
        else
            os << "nan,nan,nan";
        os << "," << fmt_double(lv.max_len) << "," << lv.count << "\n";
    }
    return os.str();
}

BandTree obtain_tree(const RunConfig& c, const Real& lambda,
                     const ContinuedFraction& cf, int depth, const Precision& prec) {
    if (!c.cache_dir.empty()) {
        auto cached = cache_load(c.cache_dir, c.lambda_str, cf, prec, depth);
        if (cached) return std::move(*cached);
    }
    BandTree tree = BandTree::build(lambda, cf, depth, prec, c.threads);
    if (!c.cache_dir.empty()) cache_store(c.cache_dir, c.lambda_str, tree);
    return tree;
}

int dispatch(const RunConfig& c) {
    Precision prec{c.mantissa_bits};
    if (prec.mantissa_bits < 53) throw ConfigError("mantissa_bits must be >= 53");
    Real lambda = make_real(c.lambda_str, prec);
    if (!(lambda > 0)) throw ConfigError("lambda must be positive");
    ContinuedFraction cf = ContinuedFraction::parse(c.cf_literal);

    if (c.command == "bands") {
        BandTree tree = obtain_tree(c, lambda, cf, c.depth, prec);
        if (lambda < 24)
            tree.add_warning("lambda below 24: the dimension identities backing "
                             "these quantities are only established for lambda >= 24");
        write_artifact(c.out_path, tree.to_json(c.lambda_str));
        return 0;
    }
    if (c.command == "dim") {
        BandTree tree = obtain_tree(c, lambda, cf, c.depth, prec);
        MoranResult res = pre_dimensions(tree, 1, c.depth, c.tail_window);
        ojson j = header(c, lambda);
        j["depth"] = c.depth;
        j["result"] = moran_result_json(res);
        write_artifact(c.out_path, j.dump(2) + "\n");
        if (!c.csv_path.empty()) write_artifact(c.csv_path, moran_csv(res.s_by_level));
        return 0;
    }
    if (c.command == "invariance") {
        InvarianceReport rep = gauss_experiment(lambda, cf, c.depth, prec,
                                                c.tail_window, c.threads);
        ojson j = header(c, lambda);
        j["depth"] = c.depth;
        j["w"] = rep.w_id;
        j["alpha"] = moran_result_json(rep.alpha);
        j["shifted"] = moran_result_json(rep.shifted);
        j["tail_gap"] = rep.tail_gap;
        j["tail_gap_min"] = rep.tail_gap_min;
        j["tail_gap_max"] = rep.tail_gap_max;
        j["eta_emp"] = rep.eta_emp;
        j["correspondence_samples"] = rep.correspondence_samples;
        j["correspondence_in_bounds"] = rep.correspondence_in_bounds;
        j["correspondence_min"] = rep.correspondence_min;
        j["correspondence_max"] = rep.correspondence_max;
        write_artifact(c.out_path, j.dump(2) + "\n");
        return 0;
    }
    if (c.command == "covariance") {
        CovarianceReport rep =
            covariance_check(lambda, cf, c.depth, c.pairs, c.seed, prec, c.threads);
        ojson j = header(c, lambda);
        j["depth"] = c.depth;
        j["pairs_tested"] = rep.pairs_tested;
        j["max_ratio"] = rep.max_ratio;
        ojson pd = ojson::array();
        for (auto& [lvl, r] : rep.per_depth_max) {
            ojson e;
            e["level"] = lvl;
            e["max_ratio"] = r;
            pd.push_back(e);
        }
        j["per_depth_max"] = pd;
        j["max_pair_w"] = rep.max_pair_w;
        j["max_pair_w_tilde"] = rep.max_pair_w_tilde;
        j["max_suffix"] = rep.max_suffix;
        write_artifact(c.out_path, j.dump(2) + "\n");
        return 0;
    }
    if (c.command == "localdim") {
        LocalDimensionReport rep = local_dimension_experiment(
            lambda, cf, c.depth, c.probes, c.seed, prec, c.tail_window, c.threads);
        ojson j = header(c, lambda);
        j["depth"] = c.depth;
        ojson probes = ojson::array();
        for (auto& p : rep.probes) {
            ojson e;
            e["word"] = p.word;
            e["type"] = p.type;
            e["result"] = moran_result_json(p.result);
            probes.push_back(e);
        }
        j["probes"] = probes;
        j["max_pairwise_gap"] = rep.max_pairwise_gap;
        write_artifact(c.out_path, j.dump(2) + "\n");
        return 0;
    }
    if (c.command == "continuity") {
        if (c.cf2_literal.empty()) throw ConfigError("continuity needs --cf2");
        ContinuedFraction cf2 = ContinuedFraction::parse(c.cf2_literal);
        ContinuityReport rep =
            continuity_experiment(lambda, cf, cf2, c.level, prec, c.threads);
        ojson j = header(c, lambda);
        j["cf2"] = c.cf2_literal;
        j["level"] = c.level;
        j["hausdorff_distance"] = rep.hausdorff_distance;
        j["alpha_gap"] = rep.alpha_gap;
        write_artifact(c.out_path, j.dump(2) + "\n");
        return 0;
    }
    if (c.command == "mc-sweep") {
        McReport rep = mc_sweep(lambda, c.count, c.depth, c.cf_depth, c.seed, prec,
                                c.tail_window, c.threads);
        ojson j = header(c, lambda);
        j["count"] = c.count;
        j["depth"] = c.depth;
        j["depths"] = rep.depths;
        ojson disp = ojson::array();
        for (double d : rep.dispersion) disp.push_back(d);
        j["dispersion"] = disp;
        j["histogram_lo"] = rep.histogram_lo;
        j["histogram_hi"] = rep.histogram_hi;
        j["histogram"] = rep.histogram;
        ojson entries = ojson::array();
        for (auto& e : rep.entries) {
            ojson je;
            je["cf"] = e.cf_literal;
            je["levels"] = moran_levels_json(e.levels);
            je["tail_min_by_depth"] = e.tail_min_by_depth;
            entries.push_back(je);
        }
        j["frequencies"] = entries;
        write_artifact(c.out_path, j.dump(2) + "\n");
        if (!c.csv_path.empty()) {
            std::ostringstream os;
            os << "index,cf";
            for (int d : rep.depths) os << ",tail_min_d" << d;
            os << "\n";
            for (std::size_t i = 0; i < rep.entries.size(); ++i) {
                os << i << ",\"" << rep.entries[i].cf_literal << "\"";
                for (double v : rep.entries[i].tail_min_by_depth)
                    os << "," << fmt_double(v);
                os << "\n";
            }
            write_artifact(c.csv_path, os.str());
        }
        return 0;
    }
    if (c.command == "oracle-eig") {
        PotentialSpec spec =
            PotentialSpec::from_cf(lambda, cf, make_real(c.omega, prec), prec);
        std::vector<double> eigs = finite_eigenvalues(c.size, spec);
        ojson j = header(c, lambda);
        j["size"] = c.size;
        j["omega"] = c.omega;
        j["eigenvalues"] = eigs;
        write_artifact(c.out_path, j.dump(2) + "\n");
        return 0;
    }
    if (c.command == "oracle-periodic") {
        auto bands = periodic_band_edges(c.k, lambda, cf, prec);
        ojson j = header(c, lambda);
        j["k"] = c.k;
        j["count"] = bands.size();
        ojson arr = ojson::array();
        bool any_merged = false;
        for (auto& b : bands) {
            ojson e;
            e["lo"] = to_decimal(b.lo);
            e["hi"] = to_decimal(b.hi);
            e["merged_touching"] = b.merged_touching;
            any_merged = any_merged || b.merged_touching;
            arr.push_back(e);
        }
        j["merged_any"] = any_merged;
        j["bands"] = arr;
        write_artifact(c.out_path, j.dump(2) + "\n");
        return 0;
    }
    throw ConfigError("unknown command '" + c.command + "'");
}

} // namespace

int run(const RunConfig& config) {
    try {
        return dispatch(config);
    } catch (const Error& e) {
        ojson j;
        j["error"]["code"] = e.code;
        j["error"]["message"] = e.what();
        try {
            write_artifact(config.out_path, j.dump(2) + "\n");
        } catch (...) {
            std::cerr << j.dump(2) << "\n";
        }
        return static_cast<int>(e.cls);
    } catch (const std::exception& e) {
        ojson j;
        j["error"]["code"] = "InternalError";
        j["error"]["message"] = e.what();
        try {
            write_artifact(config.out_path, j.dump(2) + "\n");
        } catch (...) {
            std::cerr << j.dump(2) << "\n";
        }
        return 4;
    }
}

} // namespace sturm
