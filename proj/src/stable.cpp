#include "kgenfit/stable.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "kgenfit/errors.hpp"
#include "kgenfit/kernels.hpp"
#include "kgenfit/optimize.hpp"
#include "kgenfit/quadrature.hpp"

namespace kgenfit::stable {

namespace {

using std::numbers::pi;
using Complex = std::complex<double>;

constexpr double kAlphaOneBand = 1e-8;  // |alpha-1| below this uses the log branch
constexpr double kEnvelopeCut = 36.0;   // exp(-T^alpha) <= 2.4e-16 at the cutoff
constexpr std::size_t kPanelCap = 6000;
constexpr double kPdfAbsTol = 1e-9;     // contract: quadrature must reach this

// Standardised view (gamma = 1, delta = 0) of the CF exponent.
struct StdSpec {
    double alpha;
    double beta;
    bool alpha_one;
    double tau;    // tan(pi alpha / 2), unused on the alpha = 1 branch
    double drift;  // -beta tau: coefficient of the linear phase term
    double T;      // envelope cutoff
};

StdSpec make_spec(double alpha, double beta) {
    StdSpec s;
    s.alpha = alpha;
    s.beta = beta;
    s.alpha_one = std::abs(alpha - 1.0) < kAlphaOneBand;
    s.tau = s.alpha_one ? 0.0 : std::tan(pi * alpha / 2.0);
    s.drift = s.alpha_one ? 0.0 : -beta * s.tau;
    s.T = std::pow(kEnvelopeCut, 1.0 / alpha);
    return s;
}

StdSpec reflect(const StdSpec& s) { return make_spec(s.alpha, -s.beta); }

// CF exponent W with phi(t) = exp(W(t)) for t > 0, extended to Re z > 0
// by the principal branches (used by the rotated contour).
Complex cf_exponent(const StdSpec& s, Complex z) {
    if (s.alpha_one)
        return -z - Complex(0.0, 2.0 * s.beta / pi) * z * std::log(z);
    return -std::pow(z, s.alpha) * Complex(1.0, -s.beta * s.tau) -
           Complex(0.0, s.beta * s.tau) * z;
}

// phi(t) for real t > 0 without complex pow.
Complex cf_std_real(const StdSpec& s, double t) {
    double re, im;
    if (s.alpha_one) {
        re = -t;
        im = -(2.0 * s.beta / pi) * t * std::log(t);
    } else {
        const double ta = std::pow(t, s.alpha);
        re = -ta;
        im = s.beta * s.tau * (ta - t);
    }
    const double mag = std::exp(re);
    return {mag * std::cos(im), mag * std::sin(im)};
}

// Pointwise bound on the phase-derivative contribution of Im W. The
// combination beta*tau*(alpha t^(alpha-1) - 1) stays modest even where tau
// blows up near alpha = 1.
double phase_rate(const StdSpec& s, double t) {
    if (s.alpha_one)
        return (2.0 * std::abs(s.beta) / pi) * std::abs(std::log(t) + 1.0);
    return std::abs(s.beta * s.tau * (s.alpha * std::pow(t, s.alpha - 1.0) - 1.0));
}

// Octave count so the truncated [0, t_min] piece of integrands with a
// t^(alpha-1) singular part stays below ~1e-13.
int octaves_needed(const StdSpec& s) {
    const double c = std::abs(s.beta) * (s.alpha_one ? 2.0 / pi : std::abs(s.tau)) + 1.0;
    const double ln_eps = std::log(1e-13 * s.alpha / c) / s.alpha;
    const double octs = std::log2(s.T) - ln_eps / std::numbers::ln2;
    return static_cast<int>(std::clamp(std::ceil(octs), 46.0, 500.0));
}

// Panel boundaries on [0, T]: geometric refinement toward 0 merged with
// half-period-style steps against the oscillation rate |z| + phase_rate(t).
// Returns false when the cap is hit before reaching T.
bool make_panel_bounds(const StdSpec& s, double T, double freq_const, int octaves,
                       std::size_t cap, std::vector<double>& out) {
    out.clear();
    out.push_back(0.0);
    double t = T * std::exp2(static_cast<double>(-octaves));
    out.push_back(t);
    while (t < T) {
        if (out.size() >= cap) return false;
        const double h = std::min(t, pi / std::max(freq_const + phase_rate(s, t), 1e-3));
        t = std::min(t + h, T);
        out.push_back(t);
    }
    return true;
}

void require_accuracy(double err, const char* what) {
    if (!(err <= kPdfAbsTol))
        throw QuadratureError(std::string(what) +
                              ": quadrature error estimate " + std::to_string(err) +
                              " exceeds 1e-9");
}

// --- direct inversion (moderate |z|) -------------------------------------

bool direct_bounds(const StdSpec& s, double z, int octaves, std::vector<double>& bounds) {
    return make_panel_bounds(s, s.T, std::abs(z), octaves, kPanelCap, bounds);
}

double pdf_direct(const StdSpec& s, double z, const std::vector<double>& bounds) {
    auto f = [&](double t) { return cf_std_real(s, t) * std::polar(1.0, -t * z); };
    auto res = quad::integrate_panels<Complex>(f, bounds, 1e-12);
    require_accuracy(res.error, "stable pdf");
    return res.value.real() / pi;
}

double cdf_direct(const StdSpec& s, double z, const std::vector<double>& bounds) {
    auto f = [&](double t) {
        return (cf_std_real(s, t) * std::polar(1.0, -t * z)).imag() / t;
    };
    auto res = quad::integrate_panels<double>(f, bounds, 1e-12);
    require_accuracy(res.error, "stable cdf");
    return 0.5 - res.value / pi;
}

// --- rotated contour (far tails) ------------------------------------------
//
// For x_tilde = z - drift > 0 the ray t = u exp(-i theta) turns the
// oscillatory factor into decay exp(-u x_tilde sin theta). Deforming the
// Gil-Pelaez integrand (which has a simple pole at 0) leaves the arc
// contribution theta/pi behind:
//   P(X > z) = 1/2 - theta/pi + (1/pi) Int_0^inf Im[phi(u e^-it) e^(-i u e^-it z)] / u du

struct Rotation {
    double theta;
    double U;
};

Rotation choose_rotation(const StdSpec& s, double z, double x_tilde) {
    double theta;
    if (s.alpha_one) {
        theta = pi / 4.0;
    } else {
        const double limit = std::atan2(1.0, s.beta * s.tau) / s.alpha;
        theta = std::min(pi / 4.0, 0.85 * limit);
    }
    for (int attempt = 0; attempt < 8; ++attempt, theta *= 0.5) {
        const double st = std::sin(theta);
        double U = 45.0 / (x_tilde * st);
        if (!s.alpha_one) {
            const double g = std::cos(s.alpha * theta) -
                             s.beta * s.tau * std::sin(s.alpha * theta);
            if (g > 1e-3) U = std::min(U, std::pow(45.0 / g, 1.0 / s.alpha));
        }
        bool ok = true;
        for (double frac : {0.03125, 0.125, 0.25, 0.5, 0.75, 1.0}) {
            const double u = frac * U;
            const Complex zc = std::polar(u, -theta);
            const double expo = (cf_exponent(s, zc) - Complex(0.0, 1.0) * zc * z).real();
            if (expo > -0.2 * std::min(u * x_tilde * st, 45.0) + 1e-9) {
                ok = false;
                break;
            }
        }
        if (ok) return {theta, U};
    }
    throw QuadratureError("stable tail: no valid contour rotation found");
}

std::vector<double> rotated_bounds(const StdSpec& s, const Rotation& rot, double x_tilde) {
    std::vector<double> bounds;
    if (!make_panel_bounds(s, rot.U, x_tilde * std::cos(rot.theta), octaves_needed(s),
                           64 * kPanelCap, bounds))
        throw QuadratureError("stable tail: panel cap exceeded on rotated contour");
    return bounds;
}

double pdf_rotated(const StdSpec& s, double z, double x_tilde) {
    const Rotation rot = choose_rotation(s, z, x_tilde);
    const Complex ray = std::polar(1.0, -rot.theta);
    auto f = [&](double u) {
        const Complex zc = u * ray;
        return std::exp(cf_exponent(s, zc) - Complex(0.0, 1.0) * zc * z);
    };
    auto res = quad::integrate_panels<Complex>(f, rotated_bounds(s, rot, x_tilde), 1e-13);
    require_accuracy(res.error, "stable pdf (tail)");
    return (ray * res.value).real() / pi;
}

double surv_rotated(const StdSpec& s, double z, double x_tilde) {
    const Rotation rot = choose_rotation(s, z, x_tilde);
    const Complex ray = std::polar(1.0, -rot.theta);
    auto f = [&](double u) {
        const Complex zc = u * ray;
        return std::exp(cf_exponent(s, zc) - Complex(0.0, 1.0) * zc * z).imag() / u;
    };
    auto res = quad::integrate_panels<double>(f, rotated_bounds(s, rot, x_tilde), 1e-13);
    require_accuracy(res.error, "stable cdf (tail)");
    return 0.5 - rot.theta / pi + res.value / pi;
}

// --- single-point dispatch -------------------------------------------------

double x_tilde_of(const StdSpec& s, double z) { return z - s.drift; }

double pdf_std(const StdSpec& s, double z) {
    const double xt = x_tilde_of(s, z);
    if (xt < 0.0) return pdf_std(reflect(s), -z);
    std::vector<double> bounds;
    if (direct_bounds(s, z, 46, bounds)) return pdf_direct(s, z, bounds);
    return pdf_rotated(s, z, xt);
}

double cdf_std(const StdSpec& s, double z);

// cdf for x_tilde >= 0
double cdf_core(const StdSpec& s, double z, double xt) {
    std::vector<double> bounds;
    if (make_panel_bounds(s, s.T, std::abs(z), octaves_needed(s), kPanelCap, bounds))
        return cdf_direct(s, z, bounds);
    return 1.0 - surv_rotated(s, z, xt);
}

double cdf_std(const StdSpec& s, double z) {
    const double xt = x_tilde_of(s, z);
    if (xt < 0.0) {
        const StdSpec r = reflect(s);
        return 1.0 - cdf_core(r, -z, -xt);
    }
    return cdf_core(s, z, xt);
}

// --- shared quadrature tables for batch evaluation --------------------------

struct MixTable {
    std::vector<double> t, a, b;
    double z_ref = 0.0;
    double constant = 0.0;  // added to the cosine mixture
    bool valid = false;
};

enum class TableKind { density, distribution };

MixTable build_table(const StdSpec& s, double z_ref_request, TableKind kind) {
    MixTable table;
    const int octaves = kind == TableKind::density ? 46 : octaves_needed(s);
    std::vector<double> bounds;
    double z_ref = std::max(z_ref_request, 1.0);
    while (!make_panel_bounds(s, s.T, z_ref, octaves, kPanelCap, bounds)) {
        z_ref *= 0.5;
        if (z_ref < 1.0) return table;  // invalid; caller falls back per point
    }
    const quad::GaussRule& rule = quad::gauss_legendre(15);
    const std::size_t n_nodes = (bounds.size() - 1) * rule.x.size();
    table.t.reserve(n_nodes);
    table.a.reserve(n_nodes);
    table.b.reserve(n_nodes);
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
        const double mid = 0.5 * (bounds[i] + bounds[i + 1]);
        const double half = 0.5 * (bounds[i + 1] - bounds[i]);
        for (std::size_t j = 0; j < rule.x.size(); ++j) {
            const double t = mid + half * rule.x[j];
            const double w = rule.w[j] * half / pi;
            const Complex phi = cf_std_real(s, t);
            table.t.push_back(t);
            if (kind == TableKind::density) {
                // (1/pi) Int Re[phi e^-itz] = sum w Re(phi) cos(tz) + w Im(phi) sin(tz)
                table.a.push_back(w * phi.real());
                table.b.push_back(w * phi.imag());
            } else {
                // 1/2 - (1/pi) Int Im[phi e^-itz]/t
                table.a.push_back(-w * phi.imag() / t);
                table.b.push_back(w * phi.real() / t);
            }
        }
    }
    table.z_ref = z_ref;
    table.constant = kind == TableKind::density ? 0.0 : 0.5;
    table.valid = true;
    return table;
}

double eval_table(const MixTable& table, double z) {
    return table.constant + kernels::active_ops().cos_mix(table.t.data(), table.a.data(),
                                                          table.b.data(), table.t.size(), z);
}

std::vector<double> batch_eval(std::span<const double> xs, const StableParams& p,
                               TableKind kind) {
    const StdSpec s = make_spec(p.alpha, p.beta);
    std::vector<double> z(xs.size());
    double z_abs_max = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        z[i] = (xs[i] - p.delta) / p.gamma;
        z_abs_max = std::max(z_abs_max, std::abs(z[i]));
    }
    MixTable table = build_table(s, std::min(z_abs_max, 48.0), kind);
    if (table.valid) {
        // one-point spot check against the adaptive path
        const double probe = std::min(table.z_ref, z_abs_max);
        const double want = kind == TableKind::density ? pdf_std(s, probe) : cdf_std(s, probe);
        if (std::abs(eval_table(table, probe) - want) > 1e-8) table.valid = false;
    }
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        double v;
        if (table.valid && std::abs(z[i]) <= table.z_ref)
            v = eval_table(table, z[i]);
        else
            v = kind == TableKind::density ? pdf_std(s, z[i]) : cdf_std(s, z[i]);
        if (kind == TableKind::density) {
            v = std::max(v, 0.0) / p.gamma;
        } else {
            v = std::clamp(v, 0.0, 1.0);
        }
        out[i] = v;
    }
    return out;
}

double interp_quantile(const std::vector<double>& sorted, double u) {
    const double pos = u * (static_cast<double>(sorted.size()) - 1.0);
    const std::size_t lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

// --- McCulloch-style quantile initialiser ----------------------------------
// Frozen forward tables of nu_alpha = (x95-x05)/(x75-x25),
// nu_beta = (x95+x05-2 x50)/(x95-x05) and nu_gamma = (x75-x25)/gamma on an
// (alpha, beta) grid; inverted by a short fixed-point iteration. Only an
// initialiser; the simplex refines from here.

constexpr int kNA = 17;
constexpr int kNB = 5;
constexpr double kGridAlpha[kNA] = {0.50, 0.60, 0.70, 0.80, 0.90, 1.00, 1.10, 1.20, 1.30,
                                    1.40, 1.50, 1.60, 1.70, 1.80, 1.90, 1.95, 2.00};
constexpr double kGridBeta[kNB] = {0.00, 0.25, 0.50, 0.75, 1.00};

constexpr double kNuAlpha[kNA][kNB] = {
    {44.635118, 40.427572, 33.195022, 29.304367, 27.937931},
    {23.612189, 21.880266, 18.407061, 16.279165, 15.642783},
    {14.893767, 14.009232, 12.079458, 10.752676, 10.400063},
    {10.479083, 9.965299, 8.801883, 7.918240, 7.704644},
    {7.928492, 7.608806, 6.874376, 6.270575, 6.134886},
    {6.313752, 6.109509, 5.635172, 5.225937, 5.135825},
    {5.222869, 5.092535, 4.785625, 4.517752, 4.456054},
    {4.450851, 4.369468, 4.175875, 4.010192, 3.968464},
    {3.886470, 3.838126, 3.724014, 3.629411, 3.603164},
    {3.465625, 3.439854, 3.380818, 3.332943, 3.319158},
    {3.149795, 3.138836, 3.114597, 3.095422, 3.091285},
    {2.914029, 2.911176, 2.905241, 2.901634, 2.903890},
    {2.739382, 2.739543, 2.740429, 2.742935, 2.747783},
    {2.609914, 2.610456, 2.612094, 2.614856, 2.618753},
    {2.512818, 2.513012, 2.513593, 2.514557, 2.515894},
    {2.473342, 2.473395, 2.473552, 2.473813, 2.474179},
    {2.438664, 2.438664, 2.438664, 2.438664, 2.438664},
};

constexpr double kNuBeta[kNA][kNB] = {
    {0.000000, 0.509586, 0.838143, 0.970060, 0.984745},
    {0.000000, 0.440892, 0.767731, 0.936158, 0.962011},
    {0.000000, 0.386527, 0.699387, 0.890017, 0.926906},
    {0.000000, 0.341476, 0.634347, 0.833970, 0.880466},
    {0.000000, 0.302639, 0.572566, 0.769905, 0.824670},
    {0.000000, 0.268033, 0.513429, 0.699185, 0.761653},
    {0.000000, 0.236280, 0.456018, 0.624141, 0.693285},
    {0.000000, 0.206288, 0.399237, 0.547287, 0.621021},
    {0.000000, 0.177093, 0.342164, 0.470342, 0.545892},
    {0.000000, 0.147892, 0.284798, 0.394341, 0.468577},
    {0.000000, 0.118444, 0.228152, 0.319927, 0.389523},
    {0.000000, 0.089525, 0.173629, 0.247655, 0.309138},
    {0.000000, 0.062561, 0.122688, 0.178327, 0.228118},
    {0.000000, 0.038632, 0.076566, 0.113168, 0.147915},
    {0.000000, 0.017940, 0.035799, 0.053499, 0.070965},
    {0.000000, 0.008671, 0.017333, 0.025976, 0.034589},
    {0.000000, 0.000000, 0.000000, 0.000000, 0.000000},
};

constexpr double kNuGamma[kNA][kNB] = {
    {2.567666, 3.051464, 4.507601, 6.600270, 9.093520},
    {2.324208, 2.621975, 3.527840, 4.789851, 6.222852},
    {2.180128, 2.382507, 2.994907, 3.832951, 4.761422},
    {2.091069, 2.237293, 2.669868, 3.257615, 3.903464},
    {2.035167, 2.143917, 2.456015, 2.881128, 3.349932},
    {2.000000, 2.081036, 2.307843, 2.620058, 2.968580},
    {1.977705, 2.037127, 2.201459, 2.431559, 2.693246},
    {1.963074, 2.005556, 2.123201, 2.291603, 2.487683},
    {1.952758, 1.982222, 2.064681, 2.185765, 2.330636},
    {1.944735, 1.964446, 2.020433, 2.104896, 2.208984},
    {1.937866, 1.950446, 1.986724, 2.042924, 2.114325},
    {1.931547, 1.939037, 1.960933, 1.995681, 2.041151},
    {1.925476, 1.929453, 1.941207, 1.960244, 1.985825},
    {1.919513, 1.921209, 1.926262, 1.934574, 1.945985},
    {1.913606, 1.914020, 1.915261, 1.917321, 1.920191},
    {1.910670, 1.910773, 1.911082, 1.911597, 1.912317},
    {1.907745, 1.907745, 1.907745, 1.907745, 1.907745},
};

double beta_interp(const double row[kNB], double b_abs) {
    b_abs = std::clamp(b_abs, 0.0, 1.0);
    const double pos = b_abs * (kNB - 1);
    const int lo = std::min(static_cast<int>(pos), kNB - 2);
    const double frac = pos - lo;
    return row[lo] * (1.0 - frac) + row[lo + 1] * frac;
}

// nu_alpha is decreasing in alpha; invert the interpolated column.
double alpha_from_nu(double va, double b_abs) {
    double col[kNA];
    for (int i = 0; i < kNA; ++i) col[i] = beta_interp(kNuAlpha[i], b_abs);
    if (va >= col[0]) return kGridAlpha[0];
    if (va <= col[kNA - 1]) return kGridAlpha[kNA - 1];
    for (int i = 0; i + 1 < kNA; ++i) {
        if (va <= col[i] && va >= col[i + 1]) {
            const double frac = (col[i] - va) / (col[i] - col[i + 1]);
            return kGridAlpha[i] + frac * (kGridAlpha[i + 1] - kGridAlpha[i]);
        }
    }
    return 1.5;
}

double row_interp_alpha(const double table[kNA][kNB], double alpha, double b_abs) {
    alpha = std::clamp(alpha, kGridAlpha[0], kGridAlpha[kNA - 1]);
    int lo = 0;
    while (lo + 2 < kNA && kGridAlpha[lo + 1] <= alpha) ++lo;
    const double span = kGridAlpha[lo + 1] - kGridAlpha[lo];
    const double frac = (alpha - kGridAlpha[lo]) / span;
    const double v0 = beta_interp(table[lo], b_abs);
    const double v1 = beta_interp(table[lo + 1], b_abs);
    return v0 * (1.0 - frac) + v1 * frac;
}

// nu_beta is increasing in |beta| for fixed alpha.
double beta_from_nu(double vb_abs, double alpha) {
    double col[kNB];
    for (int j = 0; j < kNB; ++j) {
        alpha = std::clamp(alpha, kGridAlpha[0], kGridAlpha[kNA - 1]);
        int lo = 0;
        while (lo + 2 < kNA && kGridAlpha[lo + 1] <= alpha) ++lo;
        const double frac = (alpha - kGridAlpha[lo]) / (kGridAlpha[lo + 1] - kGridAlpha[lo]);
        col[j] = kNuBeta[lo][j] * (1.0 - frac) + kNuBeta[lo + 1][j] * frac;
    }
    if (vb_abs <= col[0]) return 0.0;
    if (vb_abs >= col[kNB - 1]) return 1.0;
    for (int j = 0; j + 1 < kNB; ++j) {
        if (vb_abs >= col[j] && vb_abs <= col[j + 1]) {
            const double frac = (vb_abs - col[j]) / (col[j + 1] - col[j]);
            return kGridBeta[j] + frac * (kGridBeta[j + 1] - kGridBeta[j]);
        }
    }
    return 0.0;
}

struct QuantileInit {
    double alpha, beta, gamma, delta;
};

QuantileInit quantile_init(const std::vector<double>& sorted) {
    const double x05 = interp_quantile(sorted, 0.05);
    const double x25 = interp_quantile(sorted, 0.25);
    const double x50 = interp_quantile(sorted, 0.50);
    const double x75 = interp_quantile(sorted, 0.75);
    const double x95 = interp_quantile(sorted, 0.95);
    const double iqr = std::max(x75 - x25, 1e-300);
    const double range = std::max(x95 - x05, 1e-300);
    const double va = range / iqr;
    const double vb = (x95 + x05 - 2.0 * x50) / range;

    double a = 1.5, b_abs = 0.0;
    for (int iter = 0; iter < 4; ++iter) {
        a = alpha_from_nu(va, b_abs);
        b_abs = beta_from_nu(std::abs(vb), a);
    }
    QuantileInit init;
    init.alpha = std::clamp(a, 0.5, 1.95);
    init.beta = std::clamp((vb >= 0.0 ? b_abs : -b_abs), -0.9, 0.9);
    const double nug = row_interp_alpha(kNuGamma, init.alpha, std::abs(init.beta));
    init.gamma = std::max(iqr / nug, 1e-300);
    init.delta = x50;
    return init;
}

// --- MLE transforms ---------------------------------------------------------

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

struct StableTransform {
    double alpha_max;

    StableParams to_params(std::span<const double> th) const {
        return StableParams(alpha_max * logistic(th[0]), std::tanh(th[1]),
                            std::exp(th[2]), th[3]);
    }
    std::array<double, 4> to_theta(const QuantileInit& init) const {
        const double a = std::clamp(init.alpha / alpha_max, 0.05, 0.995);
        const double b = std::clamp(init.beta, -0.95, 0.95);
        return {logit(a), std::atanh(b), std::log(init.gamma), init.delta};
    }
};

}  // namespace

// --- public surface ---------------------------------------------------------

StableParams::StableParams(double alpha_, double beta_, double gamma_, double delta_)
    : alpha(alpha_), beta(beta_), gamma(gamma_), delta(delta_) {
    if (!std::isfinite(alpha) || !(alpha > 0.0) || !(alpha <= 2.0))
        throw std::domain_error("stable alpha must lie in (0, 2], got " + std::to_string(alpha));
    if (!std::isfinite(beta) || !(beta >= -1.0) || !(beta <= 1.0))
        throw std::domain_error("stable beta must lie in [-1, 1], got " + std::to_string(beta));
    if (!std::isfinite(gamma) || !(gamma > 0.0))
        throw std::domain_error("stable gamma must be positive, got " + std::to_string(gamma));
    if (!std::isfinite(delta))
        throw std::domain_error("stable delta must be finite");
}

std::complex<double> char_fn(double t, const StableParams& p) {
    if (!std::isfinite(t)) throw std::domain_error("char_fn: t must be finite");
    if (t == 0.0) return {1.0, 0.0};
    const double at = std::abs(t);
    const double sgn = t > 0.0 ? 1.0 : -1.0;
    Complex expo;
    if (std::abs(p.alpha - 1.0) < kAlphaOneBand) {
        expo = Complex(-p.gamma * at, 0.0) *
                   Complex(1.0, p.beta * (2.0 / pi) * sgn * std::log(p.gamma * at)) +
               Complex(0.0, p.delta * t);
    } else {
        const double tau = std::tan(pi * p.alpha / 2.0);
        const double ga = std::pow(p.gamma, p.alpha);
        const double ta = std::pow(at, p.alpha);
        expo = Complex(-ga * ta, 0.0) *
                   Complex(1.0, p.beta * tau * sgn *
                                    (std::pow(p.gamma * at, 1.0 - p.alpha) - 1.0)) +
               Complex(0.0, p.delta * t);
    }
    return std::exp(expo);
}

double c_alpha(double alpha) {
    if (!(alpha > 0.0) || !(alpha < 2.0))
        throw std::domain_error("c_alpha requires alpha in (0, 2), got " + std::to_string(alpha));
    return std::sin(pi * alpha / 2.0) * std::tgamma(alpha) / pi;
}

double tail_asymptote(double x, const StableParams& p, TailSide side) {
    if (!(p.alpha < 2.0))
        throw std::domain_error("tail_asymptote requires alpha < 2");
    if (!(x > 0.0)) throw std::domain_error("tail_asymptote requires x > 0");
    const double skew = side == TailSide::upper ? 1.0 + p.beta : 1.0 - p.beta;
    return std::pow(p.gamma, p.alpha) * c_alpha(p.alpha) * skew * std::pow(x, -p.alpha);
}

double pdf(double x, const StableParams& p) {
    if (!std::isfinite(x)) throw std::domain_error("stable pdf: x must be finite");
    const StdSpec s = make_spec(p.alpha, p.beta);
    return std::max(pdf_std(s, (x - p.delta) / p.gamma), 0.0) / p.gamma;
}

double cdf(double x, const StableParams& p) {
    if (!std::isfinite(x)) throw std::domain_error("stable cdf: x must be finite");
    const StdSpec s = make_spec(p.alpha, p.beta);
    return std::clamp(cdf_std(s, (x - p.delta) / p.gamma), 0.0, 1.0);
}

std::vector<double> pdf_batch(std::span<const double> xs, const StableParams& p) {
    return batch_eval(xs, p, TableKind::density);
}

std::vector<double> cdf_batch(std::span<const double> xs, const StableParams& p) {
    return batch_eval(xs, p, TableKind::distribution);
}

double loglik(std::span<const double> data, const StableParams& p) {
    const std::vector<double> dens = pdf_batch(data, p);
    double acc = 0.0;
    for (double d : dens) acc += std::log(std::max(d, 1e-300));
    return acc;
}

double upper_quantile(double prob, const StableParams& p) {
    if (!(prob > 0.0) || !(prob <= 0.5))
        throw std::domain_error("upper_quantile requires p in (0, 0.5]");
    double lo = p.delta;
    double step = p.gamma;
    while (1.0 - cdf(lo, p) < prob) {
        lo -= step;
        step *= 2.0;
        if (!(step < 1e18 * p.gamma))
            throw QuadratureError("upper_quantile: bracketing failed (low side)");
    }
    double hi = lo + step;
    while (1.0 - cdf(hi, p) > prob) {
        lo = hi;
        hi += step;
        step *= 2.0;
        if (!(step < 1e18 * p.gamma))
            throw QuadratureError("upper_quantile: bracketing failed (high side)");
    }
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (1.0 - cdf(mid, p) > prob)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-10 * (std::abs(hi) + p.gamma)) break;
    }
    return 0.5 * (lo + hi);
}

StableFit fit_mle(std::span<const double> data, bool heavy_tailed) {
    if (data.size() < 20)
        throw ValidationError("stable fit needs at least 20 observations, got " +
                              std::to_string(data.size()));
    std::vector<double> sorted(data.begin(), data.end());
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back())
        throw DegenerateInputError("stable fit: sample has zero spread");

    const StableTransform transform{heavy_tailed ? 2.0 - 1e-6 : 2.0};
    const QuantileInit init = quantile_init(sorted);
    const std::array<double, 4> th0 = transform.to_theta(init);

    auto objective = [&](std::span<const double> th) -> double {
        try {
            return loglik(data, transform.to_params(th));
        } catch (const QuadratureError&) {
            return -std::numeric_limits<double>::infinity();
        }
    };

    opt::NelderMeadOptions opts;
    opts.ftol = 1e-7;
    opts.xtol = 1e-8;
    opts.max_iter = 1200;
    opts.step_rel = 0.15;
    opts.step_abs = 0.1;
    const auto res = opt::nelder_mead_maximize(objective, th0, opts);
    if (!std::isfinite(res.value))
        throw ConvergenceError("stable fit: likelihood not finite at optimum");
    return {transform.to_params(res.x), res.value, res.converged, res.iterations};
}

}  // namespace kgenfit::stable
