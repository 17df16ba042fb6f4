// permbound: exact and approximate permanents, k-best hypotheses and
// truncation-mass reports from the command line.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "permbound/assignment.hpp"
#include "permbound/bench.hpp"
#include "permbound/exact_permanent.hpp"
#include "permbound/matrix_io.hpp"
#include "permbound/roos.hpp"
#include "permbound/serialize.hpp"
#include "permbound/truncation.hpp"

namespace {

using namespace permbound;
using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void emit(const std::string& payload, const std::string& output) {
    if (output.empty() || output == "-") {
        std::cout << payload;
        return;
    }
    std::ofstream out(output, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + output);
    out << payload;
}

void emit_json(const json& j, const std::string& output) { emit(j.dump(2) + "\n", output); }

ApproxOrder order_from(int order) {
    if (order == 1) return ApproxOrder::first;
    if (order == 2) return ApproxOrder::second;
    throw UsageError("--order must be 1 or 2");
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Matrix permanents, Roos bounds and data-association truncation analysis"};
    app.require_subcommand(1);

    std::string output;
    std::string format_text = "auto";
    unsigned threads = 1;

    // gen
    auto* gen = app.add_subcommand("gen", "generate a seeded random likelihood matrix");
    std::size_t gen_targets = 4;
    std::size_t gen_meas = 4;
    std::uint64_t seed = 1;
    bool dense = false;
    std::string dist_text = "uniform";
    gen->add_option("--targets", gen_targets, "number of targets T")->required();
    gen->add_option("--measurements", gen_meas, "number of measurements M")->required();
    gen->add_option("--seed", seed, "PRNG seed");
    gen->add_option("--distribution", dist_text,
                    "uniform | uniform:LO:HI | exponential | exponential:RATE");
    gen->add_flag("--dense", dense, "fill every entry instead of the diagonal block layout");
    gen->add_option("--output,-o", output, "output path (default stdout)");
    gen->add_option("--format", format_text, "auto | json | csv");

    // permanent
    auto* perm = app.add_subcommand("permanent", "exact permanent of a matrix file");
    std::string input;
    std::string method = "auto";
    double bf_cap = 1e8;
    std::size_t ryser_cols = 24;
    perm->add_option("input", input, "matrix file")->required();
    perm->add_option("--method", method, "auto | ryser | bruteforce");
    perm->add_option("--bruteforce-cap", bf_cap, "max injections for brute force");
    perm->add_option("--ryser-max-cols", ryser_cols, "max short-side size for the subset method");
    perm->add_option("--threads", threads, "worker threads");
    perm->add_option("--format", format_text, "auto | json | csv");
    perm->add_option("--output,-o", output, "output path");

    // approx
    auto* apx = app.add_subcommand("approx", "Roos approximation with error interval");
    int order = 2;
    bool with_diag = false;
    apx->add_option("input", input, "matrix file")->required();
    apx->add_option("--order", order, "1 or 2");
    apx->add_flag("--diagnostics", with_diag, "include every intermediate quantity");
    apx->add_option("--threads", threads, "worker threads");
    apx->add_option("--format", format_text, "auto | json | csv");
    apx->add_option("--output,-o", output, "output path");

    // kbest
    auto* kb = app.add_subcommand("kbest", "K best association hypotheses (Murty)");
    std::size_t k = 10;
    kb->add_option("input", input, "matrix file")->required();
    kb->add_option("--k", k, "number of hypotheses")->check(CLI::PositiveNumber);
    kb->add_option("--format", format_text, "auto | json | csv");
    kb->add_option("--output,-o", output, "output path");

    // truncation
    auto* tr = app.add_subcommand("truncation", "captured-mass bracket for the top-K hypotheses");
    std::size_t k_max = 100;
    bool with_exact = false;
    bool as_csv = false;
    tr->add_option("input", input, "matrix file")->required();
    tr->add_option("--k-max", k_max, "largest K")->check(CLI::PositiveNumber);
    tr->add_option("--order", order, "1 or 2");
    tr->add_flag("--exact", with_exact, "also compute the exact permanent");
    tr->add_flag("--csv", as_csv, "write the plot-ready CSV instead of JSON");
    tr->add_option("--threads", threads, "worker threads");
    tr->add_option("--format", format_text, "auto | json | csv");
    tr->add_option("--output,-o", output, "output path");

    // bench
    auto* bn = app.add_subcommand("bench", "time exact and approximate methods");
    std::string bench_targets = "5..8";
    std::string bench_meas = "8..16";
    std::size_t trials = 3;
    std::string methods = "ryser,roos1,roos2";
    bn->add_option("--targets", bench_targets, "target range a..b");
    bn->add_option("--measurements", bench_meas, "measurement range a..b");
    bn->add_option("--trials", trials, "matrices per size");
    bn->add_option("--seed", seed, "PRNG seed");
    bn->add_option("--methods", methods, "comma list of ryser,bruteforce,roos1,roos2");
    bn->add_option("--distribution", dist_text, "entry distribution");
    bn->add_option("--threads", threads, "worker threads");
    bn->add_option("--output,-o", output, "output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const FileFormat format = parse_file_format(format_text);

        if (*gen) {
            const Distribution dist = parse_distribution(dist_text);
            const json meta{{"seed", seed}, {"rng", kRngAlgorithm}, {"distribution", to_string(dist)}};
            LoadedMatrix m = dense ? LoadedMatrix(gen_random_dense(gen_targets, gen_meas, seed, dist)
                                                      .matrix())
                                   : LoadedMatrix(gen_random(gen_targets, gen_meas, seed, dist));
            const bool csv = format == FileFormat::csv ||
                             (format == FileFormat::automatic && output.size() > 4 &&
                              output.ends_with(".csv"));
            if (csv) {
                const Matrix& grid = std::holds_alternative<LikelihoodMatrix>(m)
                                         ? std::get<LikelihoodMatrix>(m).matrix()
                                         : std::get<Matrix>(m);
                emit(matrix_to_csv(grid), output);
            } else {
                json doc = std::visit([](const auto& x) { return matrix_to_json(x); }, m);
                for (const auto& [key, v] : meta.items()) doc[key] = v;
                emit_json(doc, output);
            }
            return 0;
        }

        if (*bn) {
            BenchConfig cfg;
            cfg.targets = parse_range(bench_targets);
            cfg.measurements = parse_range(bench_meas);
            cfg.trials = trials;
            cfg.seed = seed;
            cfg.methods.clear();
            for (const auto& m : split_list(methods)) cfg.methods.push_back(parse_bench_method(m));
            cfg.distribution = parse_distribution(dist_text);
            cfg.threads = threads;
            const BenchResult res = run_bench(cfg);
            emit(bench_csv(res.records), output);
            for (const auto& s : res.skipped) std::cerr << "skipped (cap exceeded): " << s << '\n';
            for (const auto& v : res.violations) std::cerr << "interval violation: " << v << '\n';
            return res.violations.empty() ? 0 : 1;
        }

        const LoadedMatrix loaded = load_matrix(input, format);

        if (*perm) {
            PermanentOptions opts;
            opts.bruteforce_cap = bf_cap;
            opts.ryser_max_cols = ryser_cols;
            opts.threads = threads;
            const ThinMatrix thin = as_thin(loaded);
            PermanentValue v;
            if (method == "auto") {
                v = permanent_exact(thin, opts);
            } else if (method == "ryser") {
                v = permanent_ryser(thin, opts);
            } else if (method == "bruteforce") {
                v = permanent_bruteforce(thin, opts);
            } else {
                throw UsageError("--method must be auto, ryser or bruteforce");
            }
            json j = to_json(v);
            j["rows"] = thin.num_rows();
            j["cols"] = thin.num_cols();
            emit_json(j, output);
        } else if (*apx) {
            RoosOptions opts;
            opts.threads = threads;
            const ApproxOrder ord = order_from(order);
            const ThinMatrix thin = as_thin(loaded);
            const RoosDiagnostics d = diagnostics(thin, opts, ord);
            const BoundedEstimate b = ord == ApproxOrder::first ? approx_first(d) : approx_second(d);
            json j = to_json(b);
            if (with_diag) j["diagnostics"] = to_json(d);
            emit_json(j, output);
        } else if (*kb) {
            emit_json(to_json(murty_kbest(as_wide(loaded), k)), output);
        } else if (*tr) {
            TruncationOptions opts;
            opts.order = order_from(order);
            opts.with_exact = with_exact;
            opts.roos.threads = threads;
            opts.permanent.threads = threads;
            const TruncationReport rep = truncation_report(as_wide(loaded), k_max, opts);
            if (as_csv) {
                emit(to_csv(rep), output);
            } else {
                emit_json(to_json(rep), output);
            }
        }
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const MatrixError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
