// Experiment driver. Three subcommands:
//   quantize  one codec operating point, distortion + rate + bounds
//   sweep     a correlation grid, one row per point
//   netsim    transport audit plus the spatial coding chain
// Exit codes: 0 success, 2 invalid input, 3 internal invariant violated.

#include <CLI11.hpp>
#include <json.hpp>

#include "wzlq/analysis.hpp"
#include "wzlq/codec.hpp"
#include "wzlq/netsim.hpp"
#include "wzlq/sources.hpp"

#include <atomic>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

using json = nlohmann::json;
using namespace wzlq;

namespace {

struct InvalidInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvariantFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open config file: " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const std::exception& e) {
        throw InvalidInput(std::string("config is not valid JSON: ") + e.what());
    }
    if (!cfg.is_object()) throw InvalidInput("config root must be an object");
    return cfg;
}

template <typename T>
T require(const json& cfg, const std::string& key) {
    if (!cfg.contains(key)) throw InvalidInput("config is missing key: " + key);
    try {
        return cfg.at(key).get<T>();
    } catch (const std::exception&) {
        throw InvalidInput("config key has the wrong type: " + key);
    }
}

template <typename T>
T optional_of(const json& cfg, const std::string& key, T fallback) {
    if (!cfg.contains(key)) return fallback;
    try {
        return cfg.at(key).get<T>();
    } catch (const std::exception&) {
        throw InvalidInput("config key has the wrong type: " + key);
    }
}

struct CodecConfig {
    std::string lattice; // "z" or "a2"
    int k = 0;           // z scaling index
    int a = 0, b = 0;    // a2 Eisenstein multiplier
    long long index_n = 0;
    double sigma_x = 1.0;
};

CodecConfig parse_codec(const json& cfg) {
    CodecConfig cc;
    cc.lattice = require<std::string>(cfg, "lattice");
    cc.sigma_x = optional_of<double>(cfg, "sigma_x", 1.0);
    if (cc.sigma_x <= 0.0) throw InvalidInput("sigma_x must be positive");
    if (cc.lattice == "z") {
        cc.k = require<int>(cfg, "k");
        if (cc.k < 1) throw InvalidInput("k must be >= 1");
        cc.index_n = cc.k;
    } else if (cc.lattice == "a2") {
        cc.a = require<int>(cfg, "a");
        cc.b = require<int>(cfg, "b");
        cc.index_n = static_cast<long long>(cc.a) * cc.a -
                     static_cast<long long>(cc.a) * cc.b +
                     static_cast<long long>(cc.b) * cc.b;
        if (cc.index_n < 1) throw InvalidInput("(a, b) must give a nonzero multiplier");
    } else {
        throw InvalidInput("lattice must be \"z\" or \"a2\"");
    }
    return cc;
}

WzLvq build_codec(const CodecConfig& cc, double s) {
    if (cc.lattice == "z") {
        auto z1 = make_zn(1);
        return make_codec(z1, scaling_similarity(z1, cc.k), s);
    }
    auto a2 = make_a2(false);
    return make_codec(a2, eisenstein_similarity(a2, cc.a, cc.b), s);
}

double resolve_scale(const json& cfg, const CodecConfig& cc, double rho) {
    if (cfg.contains("s") && cfg.at("s").is_number())
        return cfg.at("s").get<double>();
    std::string mode = optional_of<std::string>(cfg, "s", "schedule");
    if (mode != "schedule")
        throw InvalidInput("s must be a number or \"schedule\"");
    return scale_schedule(rho, cc.sigma_x);
}

struct PointResult {
    double rho = 0.0, s = 0.0, rate_nats = 0.0;
    DistortionReport rep;
    double wyner = 0.0, fom = 0.0, beta_bound = 0.0;
};

PointResult run_point(const json& cfg, const CodecConfig& cc, double rho,
                      long long trials, uint64_t seed) {
    if (!(rho >= 0.0 && rho < 1.0)) throw InvalidInput("rho must be in [0, 1)");
    if (trials < 10000) throw InvalidInput("trials must be at least 10000");
    PointResult pr;
    pr.rho = rho;
    pr.s = resolve_scale(cfg, cc, rho);
    if (!(pr.s > 0.0)) throw InvalidInput("scale s must be positive");
    WzLvq q = build_codec(cc, pr.s);
    pr.rate_nats = std::log(static_cast<double>(cc.index_n)) / q.lattice.dim;
    CodecVariant cv{&q, nullptr};
    pr.rep = mc_distortion(cv, cc.sigma_x, cc.sigma_x, rho, trials, seed,
                           SideInfoMode::Joint);
    pr.wyner = wyner_bound(cc.sigma_x, rho, pr.rate_nats);
    pr.fom = figure_of_merit(pr.rep.d_bar, cc.sigma_x, rho, pr.rate_nats);
    BetaBoundParams bp;
    bp.n = q.lattice.dim;
    bp.N = cc.index_n;
    bp.s = pr.s;
    bp.sigma_x = cc.sigma_x;
    bp.rho = rho;
    bp.coarse_cell_volume = voronoi_volume(q.coarse);
    pr.beta_bound = beta_upper_bound(bp);
    // the closed-form error-distortion estimate is asymptotic in rho, so a
    // measurement above it is data, not an internal failure
    if (!std::isfinite(pr.rep.d_bar) || pr.rep.d_bar < 0.0 || pr.rep.alpha < 0.0 ||
        pr.rep.beta < 0.0)
        throw InvariantFailure("distortion estimate is not a finite nonnegative number");
    return pr;
}

json point_to_json(const PointResult& pr) {
    return json{{"rho", pr.rho},
                {"s", pr.s},
                {"rate_nats", pr.rate_nats},
                {"d_bar", pr.rep.d_bar},
                {"d_bar_stderr", pr.rep.d_bar_stderr},
                {"alpha", pr.rep.alpha},
                {"beta", pr.rep.beta},
                {"p_err", pr.rep.p_err},
                {"wyner", pr.wyner},
                {"figure_of_merit", pr.fom},
                {"beta_bound", pr.beta_bound},
                {"trials", pr.rep.trials}};
}

const char* kCsvHeader =
    "rho,s,rate_nats,d_bar,alpha,beta,p_err,wyner,figure_of_merit,beta_bound\n";

void point_to_csv(std::ostream& os, const PointResult& pr) {
    os.precision(12);
    os << pr.rho << ',' << pr.s << ',' << pr.rate_nats << ',' << pr.rep.d_bar << ','
       << pr.rep.alpha << ',' << pr.rep.beta << ',' << pr.rep.p_err << ',' << pr.wyner
       << ',' << pr.fom << ',' << pr.beta_bound << '\n';
}

void write_out(const std::string& out_path, const std::string& body) {
    if (out_path.empty() || out_path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream os(out_path);
    if (!os) throw InvalidInput("cannot open output file: " + out_path);
    os << body;
}

json make_envelope(const std::string& command, const json& cfg, uint64_t seed) {
    return json{{"schema_version", 1},
                {"command", command},
                {"seed", seed},
                {"config_hash", hex64(fnv1a(cfg.dump()))}};
}

int cmd_quantize(const json& cfg, uint64_t seed, const std::string& out,
                 const std::string& format) {
    auto cc = parse_codec(cfg);
    double rho = require<double>(cfg, "rho");
    long long trials = optional_of<long long>(cfg, "trials", 200000);
    auto pr = run_point(cfg, cc, rho, trials, seed);

    if (format == "json") {
        json rec = make_envelope("quantize", cfg, seed);
        rec["result"] = point_to_json(pr);
        write_out(out, rec.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << kCsvHeader;
        point_to_csv(os, pr);
        write_out(out, os.str());
    }
    return 0;
}

int cmd_sweep(const json& cfg, uint64_t seed, const std::string& out,
              const std::string& format, int threads) {
    auto cc = parse_codec(cfg);
    auto grid = require<std::vector<double>>(cfg, "rho_grid");
    if (grid.empty()) throw InvalidInput("rho_grid must be non-empty");
    long long trials = optional_of<long long>(cfg, "trials", 200000);

    std::vector<PointResult> results(grid.size());
    std::vector<std::string> errors(grid.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= grid.size()) return;
            // per-point seed fixed by the grid index, not the thread
            uint64_t state = seed + 0x9e3779b97f4a7c15ULL * (i + 1);
            uint64_t pseed = splitmix64(state);
            try {
                results[i] = run_point(cfg, cc, grid[i], trials, pseed);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    int nt = std::max(1, threads);
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (size_t i = 0; i < grid.size(); ++i)
        if (!errors[i].empty()) throw InvalidInput("grid point " + std::to_string(i) +
                                                   ": " + errors[i]);

    if (format == "json") {
        json rec = make_envelope("sweep", cfg, seed);
        rec["results"] = json::array();
        for (const auto& pr : results) rec["results"].push_back(point_to_json(pr));
        write_out(out, rec.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << kCsvHeader;
        for (const auto& pr : results) point_to_csv(os, pr);
        write_out(out, os.str());
    }
    return 0;
}

int cmd_netsim(const json& cfg, uint64_t seed, const std::string& out,
               const std::string& format) {
    int n = require<int>(cfg, "n");
    int bits = require<int>(cfg, "bits");
    double t_factor = require<double>(cfg, "t_factor");
    int slots = optional_of<int>(cfg, "slots", 1000);
    double sigma = optional_of<double>(cfg, "sigma", 1.0);
    int periods = optional_of<int>(cfg, "periods", 4);
    bool error_free = optional_of<bool>(cfg, "error_free", false);
    int stride = optional_of<int>(cfg, "stride", 1);
    if (slots < 1 || periods < 1) throw InvalidInput("slots and periods must be >= 1");
    if (!(t_factor > 0.0)) throw InvalidInput("t_factor must be positive");

    NetworkLayout lay;
    try {
        lay = build_layout(n);
    } catch (const std::invalid_argument& e) {
        throw InvalidInput(e.what());
    }
    // one packet per flow per period carries the whole per-period budget
    int r_bits = bits * 6 * lay.ell;
    auto audit = run_transport(lay, r_bits, periods);
    if (audit.collisions != 0 || audit.queue_violations != 0)
        throw InvariantFailure("schedule produced collisions or queue overflow");
    if (!audit.exact_rate)
        throw InvariantFailure("schedule missed the exact per-node rate");

    BrownianField field;
    ChainRunReport rep;
    try {
        field = gen_brownian_field(n * stride, sigma, slots, seed);
        ChainCodecSpec spec;
        spec.bits = bits;
        spec.t_factor = t_factor;
        rep = chain_code(field, stride, bits, spec, error_free);
    } catch (const std::invalid_argument& e) {
        throw InvalidInput(e.what());
    }
    for (double d : rep.distortion)
        if (!std::isfinite(d) || d < 0.0)
            throw InvariantFailure("chain distortion is not a finite nonnegative number");

    if (format == "json") {
        json rec = make_envelope("netsim", cfg, seed);
        rec["transport"] = {{"slots", audit.slots},
                            {"collisions", audit.collisions},
                            {"queue_violations", audit.queue_violations},
                            {"per_node_rate_bits", audit.per_node_rate_bits},
                            {"exact_rate", audit.exact_rate}};
        rec["chain"] = {{"n", rep.n},
                        {"budget_bits", rep.budget_bits},
                        {"error_free", rep.error_free},
                        {"total_errors", rep.total_errors},
                        {"mean_sq_jump", rep.mean_sq_jump},
                        {"distortion", rep.distortion},
                        {"distortion_stderr", rep.distortion_stderr},
                        {"p_err", rep.p_err}};
        if (!rep.d_mid.empty()) rec["chain"]["d_mid"] = rep.d_mid;
        write_out(out, rec.dump(2) + "\n");
    } else {
        std::ostringstream os;
        os << "node,distortion,distortion_stderr,p_err,errors\n";
        os.precision(12);
        for (int m = 0; m < rep.n; ++m)
            os << (m + 1) << ',' << rep.distortion[m] << ',' << rep.distortion_stderr[m]
               << ',' << rep.p_err[m] << ',' << rep.errors[m] << '\n';
        write_out(out, os.str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lattice quantization with side information: experiment driver"};
    app.require_subcommand(1);

    std::string config_path, out_path, format = "json";
    uint64_t seed = 1;
    int threads = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--seed", seed, "master seed");
        sub->add_option("--out", out_path, "output path ('-' or empty for stdout)");
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--threads", threads, "worker threads")
            ->check(CLI::Range(1, 256));
    };

    auto* quantize = app.add_subcommand("quantize", "one operating point");
    auto* sweep = app.add_subcommand("sweep", "correlation grid");
    auto* netsim = app.add_subcommand("netsim", "transport audit and coding chain");
    add_common(quantize);
    add_common(sweep);
    add_common(netsim);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        json cfg = load_config(config_path);
        if (quantize->parsed()) return cmd_quantize(cfg, seed, out_path, format);
        if (sweep->parsed()) return cmd_sweep(cfg, seed, out_path, format, threads);
        if (netsim->parsed()) return cmd_netsim(cfg, seed, out_path, format);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvariantFailure& e) {
        std::cerr << "invariant failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "invariant failure: " << e.what() << "\n";
        return 3;
    }
}
