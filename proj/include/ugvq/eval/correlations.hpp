#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ugvq::eval {

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Average ranks (ties get the midrank), 1-based.
std::vector<double> average_ranks(std::span<const double> x);

// Spearman rank correlation. Degenerate inputs (a constant vector) yield
// nullopt rather than a silent zero. Throws EvalError on length mismatch
// or fewer than 2 points.
std::optional<double> srcc(std::span<const double> x, std::span<const double> y);

// Kendall tau-b via the O(n log n) merge-sort formulation; exact pair
// semantics are cross-checked against an O(n^2) counting oracle in tests.
std::optional<double> krcc(std::span<const double> x, std::span<const double> y);

std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

struct PlccResult {
    std::optional<double> value;
    bool logistic_requested = false;
    bool logistic_applied = false;  // false + requested => fit fell back to raw
};

// Pearson correlation, optionally preceded by a monotone 4-parameter
// logistic regression of x onto y. A failed fit falls back to the raw
// coefficient and reports it in the result.
PlccResult plcc(std::span<const double> x, std::span<const double> y, bool logistic = false);

struct Logistic4 {
    // f(x) = b2 + (b1 - b2) / (1 + exp(-(x - b3) / b4))
    double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 1.0;
    double operator()(double x) const;
};

// Least-squares fit of the 4-parameter logistic mapping x -> y
// (Levenberg-Marquardt). nullopt when the fit does not converge or the
// inputs are degenerate.
std::optional<Logistic4> fit_logistic4(std::span<const double> x, std::span<const double> y);

}  // namespace ugvq::eval
