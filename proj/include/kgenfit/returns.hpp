#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "kgenfit/kappa.hpp"

namespace kgenfit {

// Dated, strictly positive daily close prices for one instrument.
struct PriceSeries {
    std::string ticker;
    std::vector<std::string> dates;  // ISO-8601, strictly increasing
    std::vector<double> closes;      // > 0, same length as dates
};

// Daily log returns r_i = log(close_{i+1} / close_i).
struct ReturnSeries {
    std::string ticker;
    std::vector<double> returns;  // length = len(closes) - 1
};

// The two tails of a return sample, both mapped onto (0, inf).
struct TailSamples {
    std::vector<double> neg;  // -r for every r < 0
    std::vector<double> pos;  //  r for every r > 0
    std::size_t zero_count = 0;
    double q = 0.0;           // len(neg) / (len(neg) + len(pos) + zero_count)
};

enum class TailSide { neg, pos };

const char* tail_name(TailSide side);

// Loads `date,close` CSV (extra columns ignored), sorts ascending by date.
// Throws ParseError on malformed rows, ValidationError on nonpositive
// prices, duplicate dates, or fewer than 2 rows.
PriceSeries load_prices(const std::filesystem::path& path, const std::string& ticker);

// Throws ValidationError if the series is shorter than 2 prices.
ReturnSeries compute_returns(const PriceSeries& ps);

// Splits returns into the two tails. Zeros land in neither tail but count
// in q's denominator. Throws DegenerateInputError when every return is zero.
TailSamples split_tails(const ReturnSeries& rs);

// The requested tail sample; throws DegenerateInputError when it is empty.
const std::vector<double>& tail_or_throw(const TailSamples& ts, TailSide side);

// Composite two-tail model over the real line:
//   r < 0: P(R < r) = q * P(X_neg > -r)
//   r > 0: P(R > r) = (1 - q) * P(X_pos > r)
// r = 0 is a domain error.
double composite_tail(double r, double q, const kappa::KappaParams& neg,
                      const kappa::KappaParams& pos);

}  // namespace kgenfit
