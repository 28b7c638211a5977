// Regenerates the synthetic fixture instruments committed under
// tests/fixtures/. Usage: gen_fixtures <output-dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include <json.hpp>

#include "kgenfit/kappa.hpp"
#include "kgenfit/rng.hpp"

namespace {

using namespace kgenfit;

constexpr std::size_t kReturnsPerInstrument = 5000;

std::string iso_date(std::chrono::sys_days day) {
    const std::chrono::year_month_day ymd(day);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

void write_prices(const std::filesystem::path& path, const std::vector<double>& returns) {
    std::ofstream out(path, std::ios::trunc);
    out << "date,close\n";
    std::chrono::sys_days day{std::chrono::year{2005} / 1 / 3};
    double price = 100.0;
    char buf[48];
    out << iso_date(day) << ",100\n";
    for (double r : returns) {
        day += std::chrono::days{1};
        price *= std::exp(r);
        std::snprintf(buf, sizeof(buf), "%.12g", price);
        out << iso_date(day) << "," << buf << "\n";
    }
}

// Composite two-tail kappa-generalised returns: side by a q coin, magnitude
// by inverse transform on that side's law.
std::vector<double> kappa_returns(double q, const kappa::KappaParams& neg,
                                  const kappa::KappaParams& pos, std::uint64_t seed) {
    SplitMix64 coin(child_seed(seed, 1));
    const std::vector<double> mag_neg =
        kappa::sample(kReturnsPerInstrument, neg, child_seed(seed, 2));
    const std::vector<double> mag_pos =
        kappa::sample(kReturnsPerInstrument, pos, child_seed(seed, 3));
    std::vector<double> out;
    out.reserve(kReturnsPerInstrument);
    std::size_t i_neg = 0, i_pos = 0;
    for (std::size_t i = 0; i < kReturnsPerInstrument; ++i) {
        if (coin.next_unit() < q)
            out.push_back(-mag_neg[i_neg++]);
        else
            out.push_back(mag_pos[i_pos++]);
    }
    return out;
}

std::vector<double> normal_returns(double sigma, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> out;
    out.reserve(kReturnsPerInstrument);
    while (out.size() < kReturnsPerInstrument) {
        // Box-Muller
        const double u1 = std::max(rng.next_unit(), 1e-300);
        const double u2 = rng.next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        out.push_back(sigma * r * std::cos(2.0 * std::numbers::pi * u2));
        if (out.size() < kReturnsPerInstrument)
            out.push_back(sigma * r * std::sin(2.0 * std::numbers::pi * u2));
    }
    return out;
}

double jitter(SplitMix64& rng, double base, double rel) {
    return base * (1.0 + rel * (2.0 * rng.next_unit() - 1.0));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: gen_fixtures <output-dir>\n";
        return 1;
    }
    const std::filesystem::path base(argv[1]);
    std::filesystem::create_directories(base / "synthetic");
    std::filesystem::create_directories(base / "normal");

    nlohmann::ordered_json manifest;
    manifest["returns_per_instrument"] = kReturnsPerInstrument;

    // Heavy-tailed instruments: tail exponent alpha/kappa around 3.2-3.9,
    // body scale ~1% daily moves, slight negative/positive asymmetry.
    nlohmann::ordered_json synth = nlohmann::ordered_json::array();
    for (int i = 0; i < 10; ++i) {
        const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(i);
        SplitMix64 rng(child_seed(seed, 99));
        const double q = 0.47 + 0.06 * rng.next_unit();
        const kappa::KappaParams neg(jitter(rng, 0.42, 0.08), jitter(rng, 1.35, 0.05),
                                     jitter(rng, 520.0, 0.10));
        const kappa::KappaParams pos(jitter(rng, 0.38, 0.08), jitter(rng, 1.42, 0.05),
                                     jitter(rng, 640.0, 0.10));
        char name[32];
        std::snprintf(name, sizeof(name), "kgen_%02d", i);
        write_prices(base / "synthetic" / (std::string(name) + ".csv"),
                     kappa_returns(q, neg, pos, seed));
        nlohmann::ordered_json entry;
        entry["ticker"] = name;
        entry["seed"] = seed;
        entry["q"] = q;
        entry["neg"] = {{"kappa", neg.kappa}, {"alpha", neg.alpha}, {"beta", neg.beta}};
        entry["pos"] = {{"kappa", pos.kappa}, {"alpha", pos.alpha}, {"beta", pos.beta}};
        synth.push_back(entry);
    }
    manifest["synthetic"] = synth;

    nlohmann::ordered_json normals = nlohmann::ordered_json::array();
    for (int i = 0; i < 5; ++i) {
        const std::uint64_t seed = 9000 + static_cast<std::uint64_t>(i);
        char name[32];
        std::snprintf(name, sizeof(name), "norm_%02d", i);
        write_prices(base / "normal" / (std::string(name) + ".csv"),
                     normal_returns(0.01, seed));
        normals.push_back({{"ticker", name}, {"seed", seed}, {"sigma", 0.01}});
    }
    manifest["normal"] = normals;

    std::ofstream mf(base / "manifest.json", std::ios::trunc);
    mf << manifest.dump(2) << "\n";
    std::cout << "fixtures written to " << base << "\n";
    return 0;
}
