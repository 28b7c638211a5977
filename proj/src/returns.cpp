#include "kgenfit/returns.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "kgenfit/errors.hpp"

namespace kgenfit {

const char* tail_name(TailSide side) { return side == TailSide::neg ? "neg" : "pos"; }

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) out.push_back(trim(field));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

bool all_digits(const std::string& s) {
    return !s.empty() &&
           std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isdigit(c); });
}

// YYYY-MM-DD -> sortable integer key; throws ParseError on malformed dates.
int date_key(const std::string& date, std::size_t line_no) {
    const auto fail = [&] {
        throw ParseError("line " + std::to_string(line_no) + ": bad date '" + date +
                         "' (expected YYYY-MM-DD)");
    };
    if (date.size() != 10 || date[4] != '-' || date[7] != '-') fail();
    const std::string ys = date.substr(0, 4), ms = date.substr(5, 2), ds = date.substr(8, 2);
    if (!all_digits(ys) || !all_digits(ms) || !all_digits(ds)) fail();
    const int y = std::stoi(ys), m = std::stoi(ms), d = std::stoi(ds);
    if (m < 1 || m > 12 || d < 1 || d > 31) fail();
    return y * 10000 + m * 100 + d;
}

double parse_close(const std::string& field, std::size_t line_no) {
    if (field.empty())
        throw ParseError("line " + std::to_string(line_no) + ": empty close value");
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ParseError("line " + std::to_string(line_no) + ": unparseable close '" +
                         field + "'");
    return value;
}

}  // namespace

PriceSeries load_prices(const std::filesystem::path& path, const std::string& ticker) {
    std::ifstream file(path);
    if (!file)
        throw ParseError("cannot open " + path.string());

    std::string line;
    if (!std::getline(file, line))
        throw ParseError(path.string() + ": empty file");

    // header: locate the date and close columns; extra columns are ignored
    if (!line.empty() && line.front() == '\xEF') line = line.substr(3);  // UTF-8 BOM
    const auto header = split_csv_line(line);
    std::ptrdiff_t date_col = -1, close_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        std::string name = header[i];
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return std::tolower(c); });
        if (name == "date" && date_col < 0) date_col = static_cast<std::ptrdiff_t>(i);
        if (name == "close" && close_col < 0) close_col = static_cast<std::ptrdiff_t>(i);
    }
    if (date_col < 0 || close_col < 0)
        throw ParseError(path.string() + ": header must contain date and close columns");

    struct Row {
        int key;
        std::string date;
        double close;
    };
    std::vector<Row> rows;
    std::size_t line_no = 1;
    while (std::getline(file, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        const std::size_t need = static_cast<std::size_t>(std::max(date_col, close_col)) + 1;
        if (fields.size() < need)
            throw ParseError("line " + std::to_string(line_no) + ": expected at least " +
                             std::to_string(need) + " columns");
        const std::string& date = fields[static_cast<std::size_t>(date_col)];
        const double close = parse_close(fields[static_cast<std::size_t>(close_col)], line_no);
        if (!std::isfinite(close) || !(close > 0.0))
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": close must be positive and finite, got " +
                                  std::to_string(close));
        rows.push_back({date_key(date, line_no), date, close});
    }
    if (rows.empty()) throw ParseError(path.string() + ": no data rows");
    if (rows.size() < 2)
        throw ValidationError(path.string() + ": need at least 2 price rows, got " +
                              std::to_string(rows.size()));

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.key < b.key; });
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].key == rows[i - 1].key)
            throw ValidationError(path.string() + ": duplicate date " + rows[i].date);

    PriceSeries ps;
    ps.ticker = ticker;
    ps.dates.reserve(rows.size());
    ps.closes.reserve(rows.size());
    for (auto& row : rows) {
        ps.dates.push_back(std::move(row.date));
        ps.closes.push_back(row.close);
    }
    return ps;
}

ReturnSeries compute_returns(const PriceSeries& ps) {
    if (ps.closes.size() < 2)
        throw ValidationError("compute_returns: need at least 2 prices");
    ReturnSeries rs;
    rs.ticker = ps.ticker;
    rs.returns.reserve(ps.closes.size() - 1);
    for (std::size_t i = 1; i < ps.closes.size(); ++i)
        rs.returns.push_back(std::log(ps.closes[i] / ps.closes[i - 1]));
    return rs;
}

TailSamples split_tails(const ReturnSeries& rs) {
    TailSamples ts;
    for (double r : rs.returns) {
        if (r < 0.0)
            ts.neg.push_back(-r);
        else if (r > 0.0)
            ts.pos.push_back(r);
        else
            ++ts.zero_count;
    }
    const std::size_t total = ts.neg.size() + ts.pos.size() + ts.zero_count;
    if (ts.neg.empty() && ts.pos.empty())
        throw DegenerateInputError(rs.ticker + ": every return is zero");
    ts.q = static_cast<double>(ts.neg.size()) / static_cast<double>(total);
    return ts;
}

const std::vector<double>& tail_or_throw(const TailSamples& ts, TailSide side) {
    const std::vector<double>& tail = side == TailSide::neg ? ts.neg : ts.pos;
    if (tail.empty())
        throw DegenerateInputError(std::string("the ") + tail_name(side) +
                                   " tail is empty; cannot fit it");
    return tail;
}

double composite_tail(double r, double q, const kappa::KappaParams& neg,
                      const kappa::KappaParams& pos) {
    if (!(q >= 0.0) || !(q <= 1.0))
        throw std::domain_error("composite_tail: q must lie in [0, 1]");
    if (r == 0.0 || !std::isfinite(r))
        throw std::domain_error("composite_tail: r must be nonzero and finite");
    if (r < 0.0) return q * kappa::survival(-r, neg);
    return (1.0 - q) * kappa::survival(r, pos);
}

}  // namespace kgenfit
