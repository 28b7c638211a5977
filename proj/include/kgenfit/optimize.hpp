#pragma once

#include <functional>
#include <span>
#include <vector>

namespace kgenfit::opt {

using Objective = std::function<double(std::span<const double>)>;

struct MaximizeResult {
    std::vector<double> x;
    double value;
    int iterations;
    bool converged;
};

struct NelderMeadOptions {
    double ftol = 1e-10;       // stop when best-worst value spread is below
    double xtol = 1e-9;        // ... or the simplex diameter is below
    int max_iter = 2000;
    double step_rel = 0.05;    // initial simplex step, relative to |x0_i|
    double step_abs = 0.00025; // ... or absolute when x0_i == 0
    bool restart = true;       // rebuild the simplex once from the best vertex
};

// Derivative-free Nelder-Mead maximiser with the standard coefficients
// (reflection 1, expansion 2, contraction 0.5, shrink 0.5).
// The objective must be finite at x0; non-finite values elsewhere are
// treated as -inf (the vertex is rejected).
MaximizeResult nelder_mead_maximize(const Objective& f, std::span<const double> x0,
                                    const NelderMeadOptions& opts);

// Convenience wrapper with a single tolerance for both criteria.
MaximizeResult maximize(const Objective& f, std::span<const double> x0,
                        double tol, int max_iter);

}  // namespace kgenfit::opt
