#include "kgenfit/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "kgenfit/errors.hpp"
#include "kgenfit/kernels.hpp"
#include "kgenfit/parallel.hpp"
#include "kgenfit/rng.hpp"
#include "kgenfit/version.hpp"

namespace kgenfit::report {

double composite_ks(std::span<const double> returns, double q,
                    const kappa::KappaParams& neg, const kappa::KappaParams& pos) {
    if (returns.empty()) throw std::domain_error("composite_ks: empty sample");
    std::vector<double> sorted(returns.begin(), returns.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());

    // model tails evaluated in batch on the magnitudes
    std::vector<double> mag(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) mag[i] = std::abs(sorted[i]);
    std::vector<double> surv_neg(sorted.size()), surv_pos(sorted.size());
    const auto& ops = kernels::active_ops();
    ops.kappa_survival(mag.data(), mag.size(), neg.kappa, neg.alpha, neg.beta, surv_neg.data());
    ops.kappa_survival(mag.data(), mag.size(), pos.kappa, pos.alpha, pos.beta, surv_pos.data());

    double s = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;  // tie block [i, j)
        const double r = sorted[i];
        if (r != 0.0) {
            const double below = static_cast<double>(i) / n;
            const double at_or_below = static_cast<double>(j) / n;
            if (r < 0.0) {
                // lower tail: empirical P(R < r) has limits below and at_or_below
                const double model = q * surv_neg[i];
                s = std::max(s, std::abs(below - model));
                s = std::max(s, std::abs(at_or_below - model));
            } else {
                // upper tail: empirical P(R > r) has limits 1-below and 1-at_or_below
                const double model = (1.0 - q) * surv_pos[i];
                s = std::max(s, std::abs((1.0 - below) - model));
                s = std::max(s, std::abs((1.0 - at_or_below) - model));
            }
        }
        i = j;
    }
    return s;
}

namespace {

const kappa::KappaParams* kappa_fit_of(const InstrumentReport& rep, const char* key) {
    auto it = rep.fits.find(key);
    if (it == rep.fits.end()) return nullptr;
    return std::get_if<kappa::KappaParams>(&it->second.params);
}

}  // namespace

InstrumentReport analyze_instrument(const PriceSeries& ps, const AnalysisOptions& opts) {
    const ReturnSeries rs = compute_returns(ps);
    const TailSamples ts = split_tails(rs);

    InstrumentReport rep;
    rep.ticker = ps.ticker;
    rep.n_returns = rs.returns.size();
    rep.q = ts.q;
    rep.zero_count = ts.zero_count;

    if (opts.families.count(Family::kappa) != 0) {
        for (TailSide side : opts.tails) {
            const std::vector<double>& tail = tail_or_throw(ts, side);
            const std::string key = std::string("kappa_") + tail_name(side);
            try {
                FitResult fit = fit_kappa(tail);
                if (!fit.converged) rep.any_convergence_failure = true;
                rep.fits.emplace(key, std::move(fit));
            } catch (const ConvergenceError& ex) {
                rep.errors.push_back(key + ": " + ex.what());
                rep.any_convergence_failure = true;
            }
        }
    }
    if (opts.families.count(Family::normal) != 0) {
        FitResult fit = fit_normal(rs.returns);
        rep.ks_comparison["normal"] = fit.ks;
        rep.fits.emplace("normal", std::move(fit));
    }
    if (opts.families.count(Family::stable) != 0) {
        try {
            FitResult fit = fit_stable(rs.returns, /*heavy_tailed=*/true);
            if (!fit.converged) rep.any_convergence_failure = true;
            rep.ks_comparison["stable"] = fit.ks;
            rep.fits.emplace("stable", std::move(fit));
        } catch (const ConvergenceError& ex) {
            rep.errors.push_back(std::string("stable: ") + ex.what());
            rep.any_convergence_failure = true;
        }
    }

    // full-sample KS for the kappa family through the composite two-tail model
    const kappa::KappaParams* kn = kappa_fit_of(rep, "kappa_neg");
    const kappa::KappaParams* kp = kappa_fit_of(rep, "kappa_pos");
    if (kn && kp)
        rep.ks_comparison["kappa"] = composite_ks(rs.returns, ts.q, *kn, *kp);

    if (opts.run_gof && opts.families.count(Family::kappa) != 0) {
        std::size_t tail_index = 0;
        for (TailSide side : opts.tails) {
            const std::vector<double>& tail = tail_or_throw(ts, side);
            gof::GofOptions gopts;
            gopts.n_boot = opts.n_boot;
            gopts.alpha_level = opts.level;
            gopts.seed = child_seed(opts.seed, tail_index++);
            gopts.n_threads = opts.n_threads;
            rep.gof.emplace(tail_name(side), gof::mc_gof_test(tail, gopts));
        }
    }
    return rep;
}

// --- JSON ---------------------------------------------------------------

nlohmann::ordered_json to_json(const gof::GofResult& g) {
    nlohmann::ordered_json j;
    j["s_data"] = g.s_data;
    j["p_value"] = g.p_value;
    j["n_boot"] = g.n_boot;
    j["alpha_level"] = g.alpha_level;
    j["reject"] = g.reject;
    j["seed"] = g.seed;
    j["s_boot"] = g.s_boot;  // infinities (failed refits) serialise as null
    return j;
}

namespace {

nlohmann::ordered_json fit_to_json(const FitResult& fit) {
    nlohmann::ordered_json j;
    j["family"] = family_name(fit.family);
    j["converged"] = fit.converged;
    j["iterations"] = fit.iterations;
    j["loglik"] = fit.loglik;
    j["ks"] = fit.ks;
    j["low_sample"] = fit.low_sample;
    nlohmann::ordered_json params;
    if (const auto* k = std::get_if<kappa::KappaParams>(&fit.params)) {
        params["kappa"] = k->kappa;
        params["alpha"] = k->alpha;
        params["beta"] = k->beta;
    } else if (const auto* s = std::get_if<stable::StableParams>(&fit.params)) {
        params["alpha"] = s->alpha;
        params["beta"] = s->beta;
        params["gamma"] = s->gamma;
        params["delta"] = s->delta;
    } else if (const auto* n = std::get_if<NormalParams>(&fit.params)) {
        params["mu"] = n->mu;
        params["sigma"] = n->sigma;
    }
    j["params"] = std::move(params);
    return j;
}

nlohmann::ordered_json options_to_json(const AnalysisOptions& opts) {
    nlohmann::ordered_json j;
    std::vector<std::string> fams;
    for (Family f : opts.families) fams.emplace_back(family_name(f));
    std::sort(fams.begin(), fams.end());
    j["families"] = fams;
    std::vector<std::string> tails;
    for (TailSide t : opts.tails) tails.emplace_back(tail_name(t));
    std::sort(tails.begin(), tails.end());
    j["tails"] = tails;
    j["run_gof"] = opts.run_gof;
    j["n_boot"] = opts.n_boot;
    j["level"] = opts.level;
    j["seed"] = opts.seed;
    return j;
}

}  // namespace

nlohmann::ordered_json to_json(const InstrumentReport& rep, const AnalysisOptions& opts) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["tool_version"] = kVersion;
    j["ticker"] = rep.ticker;
    j["n_returns"] = rep.n_returns;
    j["q"] = rep.q;
    j["zero_count"] = rep.zero_count;
    j["options"] = options_to_json(opts);
    nlohmann::ordered_json fits = nlohmann::ordered_json::object();
    for (const auto& [key, fit] : rep.fits) fits[key] = fit_to_json(fit);
    j["fits"] = std::move(fits);
    if (!rep.gof.empty()) {
        nlohmann::ordered_json g = nlohmann::ordered_json::object();
        for (const auto& [key, res] : rep.gof) g[key] = to_json(res);
        j["gof"] = std::move(g);
    }
    j["ks_comparison"] = rep.ks_comparison;
    j["errors"] = rep.errors;
    return j;
}

BatchResult run_batch(const std::filesystem::path& dir, const AnalysisOptions& opts) {
    if (!std::filesystem::is_directory(dir))
        throw ValidationError(dir.string() + " is not a directory");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    if (files.empty())
        throw ValidationError(dir.string() + ": no CSV files found");
    std::sort(files.begin(), files.end());

    struct Slot {
        std::optional<InstrumentReport> report;
        std::string skip_reason;
    };
    std::vector<Slot> slots(files.size());

    // Per-instrument seeds hash the ticker, so results do not depend on
    // directory order or scheduling; GOF replicates inside each
    // instrument run single-threaded.
    parallel_for_index(files.size(), opts.n_threads, [&](std::size_t i) {
        const std::string ticker = files[i].stem().string();
        AnalysisOptions inst = opts;
        inst.seed = opts.seed ^ splitmix64_mix(fnv1a64(ticker.data(), ticker.size()));
        inst.n_threads = 1;
        try {
            const PriceSeries ps = load_prices(files[i], ticker);
            slots[i].report = analyze_instrument(ps, inst);
        } catch (const ParseError& ex) {
            slots[i].skip_reason = ticker + ": " + ex.what();
        } catch (const ValidationError& ex) {
            slots[i].skip_reason = ticker + ": " + ex.what();
        } catch (const DegenerateInputError& ex) {
            slots[i].skip_reason = ticker + ": " + ex.what();
        }
    });

    BatchResult out;
    for (auto& slot : slots) {
        if (!slot.report.has_value()) {
            out.summary.skipped.push_back(slot.skip_reason);
            continue;
        }
        InstrumentReport& rep = *slot.report;
        const auto gneg = rep.gof.find("neg");
        const auto gpos = rep.gof.find("pos");
        const bool sig_neg = gneg != rep.gof.end() && !gneg->second.reject;
        const bool sig_pos = gpos != rep.gof.end() && !gpos->second.reject;
        if (sig_neg) out.summary.significant_neg.push_back(rep.ticker);
        if (sig_pos) out.summary.significant_pos.push_back(rep.ticker);
        if (sig_neg && sig_pos) out.summary.significant_both.push_back(rep.ticker);
        if (sig_neg || sig_pos) out.summary.significant_either.push_back(rep.ticker);
        ++out.summary.attempted;
        out.instruments.push_back(std::move(rep));
    }
    std::sort(out.instruments.begin(), out.instruments.end(),
              [](const InstrumentReport& a, const InstrumentReport& b) {
                  return a.ticker < b.ticker;
              });
    for (auto* v : {&out.summary.significant_neg, &out.summary.significant_pos,
                    &out.summary.significant_both, &out.summary.significant_either})
        std::sort(v->begin(), v->end());
    return out;
}

nlohmann::ordered_json to_json(const BatchResult& batch, const AnalysisOptions& opts) {
    const auto& s = batch.summary;
    auto category = [&](const std::vector<std::string>& tickers) {
        nlohmann::ordered_json c;
        c["count"] = tickers.size();
        c["percent"] = s.attempted == 0
                           ? 0.0
                           : 100.0 * static_cast<double>(tickers.size()) /
                                 static_cast<double>(s.attempted);
        c["tickers"] = tickers;
        return c;
    };
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["tool_version"] = kVersion;
    j["options"] = options_to_json(opts);
    nlohmann::ordered_json summary;
    summary["instruments_attempted"] = s.attempted;
    summary["skipped"] = s.skipped;
    nlohmann::ordered_json sig;
    sig["negative"] = category(s.significant_neg);
    sig["positive"] = category(s.significant_pos);
    sig["both"] = category(s.significant_both);
    sig["either"] = category(s.significant_either);
    summary["significant"] = std::move(sig);
    j["summary"] = std::move(summary);
    nlohmann::ordered_json instruments = nlohmann::ordered_json::array();
    for (const auto& rep : batch.instruments) instruments.push_back(to_json(rep, opts));
    j["instruments"] = std::move(instruments);
    return j;
}

std::string dump_json(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

void write_json_atomic(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw ValidationError("cannot write " + tmp.string());
        out << dump_json(j);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace kgenfit::report
