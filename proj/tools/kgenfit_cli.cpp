// kgenfit — fit daily log returns with kappa-generalised / stable / normal
// laws, compare by KS, and run the Monte-Carlo goodness-of-fit test.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "kgenfit/errors.hpp"
#include "kgenfit/fitters.hpp"
#include "kgenfit/gof.hpp"
#include "kgenfit/kappa.hpp"
#include "kgenfit/report.hpp"
#include "kgenfit/returns.hpp"
#include "kgenfit/svg_plot.hpp"
#include "kgenfit/version.hpp"

namespace {

using namespace kgenfit;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitConvergence = 3;

std::string ticker_of(const std::string& csv_path) {
    return std::filesystem::path(csv_path).stem().string();
}

void emit(const nlohmann::ordered_json& j, const std::string& out_path) {
    if (out_path.empty())
        std::cout << report::dump_json(j);
    else
        report::write_json_atomic(out_path, j);
}

std::set<Family> parse_families(const std::string& csv) {
    std::set<Family> out;
    std::string token;
    std::istringstream stream(csv);
    while (std::getline(stream, token, ',')) {
        if (token == "kappa")
            out.insert(Family::kappa);
        else if (token == "stable")
            out.insert(Family::stable);
        else if (token == "normal")
            out.insert(Family::normal);
        else
            throw ValidationError("unknown family '" + token + "'");
    }
    if (out.empty()) throw ValidationError("no families requested");
    return out;
}

std::set<TailSide> parse_tails(const std::string& csv) {
    std::set<TailSide> out;
    std::string token;
    std::istringstream stream(csv);
    while (std::getline(stream, token, ',')) {
        if (token == "neg")
            out.insert(TailSide::neg);
        else if (token == "pos")
            out.insert(TailSide::pos);
        else
            throw ValidationError("unknown tail '" + token + "' (use neg or pos)");
    }
    if (out.empty()) throw ValidationError("no tails requested");
    return out;
}

int cmd_fit(const std::string& csv, const std::string& families,
            const std::string& tails, const std::string& out_path, unsigned threads) {
    report::AnalysisOptions opts;
    opts.families = parse_families(families);
    opts.tails = parse_tails(tails);
    opts.run_gof = false;
    opts.n_threads = threads;
    const PriceSeries ps = load_prices(csv, ticker_of(csv));
    const report::InstrumentReport rep = report::analyze_instrument(ps, opts);
    emit(report::to_json(rep, opts), out_path);
    return rep.any_convergence_failure ? kExitConvergence : kExitOk;
}

int cmd_gof(const std::string& csv, const std::string& tail, int n_boot, double level,
            std::uint64_t seed, const std::string& out_path, unsigned threads) {
    const PriceSeries ps = load_prices(csv, ticker_of(csv));
    const ReturnSeries rs = compute_returns(ps);
    const TailSamples ts = split_tails(rs);
    const TailSide side = parse_tails(tail).count(TailSide::neg) ? TailSide::neg : TailSide::pos;
    const std::vector<double>& sample = tail_or_throw(ts, side);

    gof::GofOptions gopts;
    gopts.n_boot = n_boot;
    gopts.alpha_level = level;
    gopts.seed = seed;
    gopts.n_threads = threads;
    const gof::GofResult res = gof::mc_gof_test(sample, gopts);

    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["tool_version"] = kVersion;
    j["ticker"] = ps.ticker;
    j["tail"] = tail_name(side);
    j["n_tail"] = sample.size();
    j["gof"] = report::to_json(res);
    emit(j, out_path);
    return kExitOk;
}

int cmd_batch(const std::string& dir, int n_boot, double level, std::uint64_t seed,
              const std::string& out_dir, unsigned threads) {
    report::AnalysisOptions opts;
    opts.run_gof = true;
    opts.n_boot = n_boot;
    opts.level = level;
    opts.seed = seed;
    opts.n_threads = threads;
    const report::BatchResult batch = report::run_batch(dir, opts);
    if (batch.summary.attempted == 0)
        throw ValidationError(dir + ": every instrument failed; see skipped list");
    const nlohmann::ordered_json j = report::to_json(batch, opts);
    std::cout << report::dump_json(j);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const std::filesystem::path base(out_dir);
        report::write_json_atomic(base / "summary.json", j);
        for (const auto& rep : batch.instruments)
            report::write_json_atomic(base / (rep.ticker + ".json"),
                                      report::to_json(rep, opts));
    }
    return kExitOk;
}

int cmd_plot(const std::string& csv, const std::string& out_svg, unsigned threads) {
    report::AnalysisOptions opts;
    opts.run_gof = false;
    opts.n_threads = threads;
    const PriceSeries ps = load_prices(csv, ticker_of(csv));
    const ReturnSeries rs = compute_returns(ps);
    const TailSamples ts = split_tails(rs);
    const report::InstrumentReport rep = report::analyze_instrument(ps, opts);
    const std::string svg = report::render_tail_plot(rep, ts);

    const std::filesystem::path tmp = out_svg + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
        if (!out) throw ValidationError("cannot write " + tmp.string());
        out << svg;
    }
    std::filesystem::rename(tmp, out_svg);
    return rep.any_convergence_failure ? kExitConvergence : kExitOk;
}

int cmd_sample(double kappa_v, double alpha_v, double beta_v, std::size_t n,
               std::uint64_t seed, const std::string& out_path) {
    const kappa::KappaParams p(kappa_v, alpha_v, beta_v);
    const std::vector<double> draws = kappa::sample(n, p, seed);
    std::string csv = "value\n";
    char buf[40];
    for (double v : draws) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", v);
        csv += buf;
    }
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(out_path, std::ios::trunc);
        if (!out) throw ValidationError("cannot write " + out_path);
        out << csv;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kappa-generalised / stable / normal return-distribution fitting"};
    app.set_version_flag("--version", kgenfit::kVersion);
    app.require_subcommand(1);
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = hardware)")->capture_default_str();

    std::string csv, families = "kappa,stable,normal", tails = "neg,pos", out_path;
    auto* fit = app.add_subcommand("fit", "fit one instrument and compare families by KS");
    fit->add_option("csv", csv, "price CSV (date,close)")->required();
    fit->add_option("--families", families, "comma list of kappa,stable,normal")
        ->capture_default_str();
    fit->add_option("--tails", tails, "comma list of neg,pos")->capture_default_str();
    fit->add_option("--out", out_path, "write JSON here instead of stdout");

    std::string gof_tail;
    int n_boot = 100;
    double level = 0.1;
    std::uint64_t seed = 0;
    auto* gof_cmd = app.add_subcommand("gof", "Monte-Carlo KS goodness-of-fit for one tail");
    gof_cmd->add_option("csv", csv, "price CSV")->required();
    gof_cmd->add_option("--tail", gof_tail, "neg or pos")->required();
    gof_cmd->add_option("--n-boot", n_boot, "bootstrap replicates")->capture_default_str();
    gof_cmd->add_option("--level", level, "rejection level alpha")->capture_default_str();
    gof_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
    gof_cmd->add_option("--out", out_path, "write JSON here instead of stdout");

    std::string dir, out_dir;
    auto* batch = app.add_subcommand("batch", "fit + GOF every CSV in a directory");
    batch->add_option("dir", dir, "directory of price CSVs")->required();
    batch->add_option("--n-boot", n_boot, "bootstrap replicates")->capture_default_str();
    batch->add_option("--level", level, "rejection level alpha")->capture_default_str();
    batch->add_option("--seed", seed, "RNG seed")->capture_default_str();
    batch->add_option("--out-dir", out_dir, "also write per-instrument JSON files here");

    std::string out_svg;
    auto* plot = app.add_subcommand("plot", "two-panel tail plot with fitted curves");
    plot->add_option("csv", csv, "price CSV")->required();
    plot->add_option("--out", out_svg, "output SVG path")->required();

    double s_kappa = 0.5, s_alpha = 1.0, s_beta = 1.0;
    std::size_t s_n = 1;
    auto* sample = app.add_subcommand("sample", "draw from a kappa-generalised law");
    sample->add_option("--kappa", s_kappa, "kappa in (0,1)")->required();
    sample->add_option("--alpha", s_alpha, "shape alpha > 0")->required();
    sample->add_option("--beta", s_beta, "rate beta > 0")->required();
    sample->add_option("-n,--n", s_n, "number of draws")->required();
    sample->add_option("--seed", seed, "RNG seed")->capture_default_str();
    sample->add_option("--out", out_path, "write CSV here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (fit->parsed()) return cmd_fit(csv, families, tails, out_path, threads);
        if (gof_cmd->parsed())
            return cmd_gof(csv, gof_tail, n_boot, level, seed, out_path, threads);
        if (batch->parsed()) return cmd_batch(dir, n_boot, level, seed, out_dir, threads);
        if (plot->parsed()) return cmd_plot(csv, out_svg, threads);
        if (sample->parsed()) return cmd_sample(s_kappa, s_alpha, s_beta, s_n, seed, out_path);
    } catch (const kgenfit::ConvergenceError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitConvergence;
    } catch (const kgenfit::ParseError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitInput;
    } catch (const kgenfit::ValidationError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitInput;
    } catch (const kgenfit::DegenerateInputError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitInput;
    } catch (const std::domain_error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitInput;
    } catch (const kgenfit::QuadratureError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return kExitConvergence;
    }
    return kExitOk;
}
