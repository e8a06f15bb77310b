#include "ugvq/eval/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

namespace ugvq::eval {

namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw EvalError("correlation inputs differ in length");
    if (x.size() < 2) throw EvalError("correlation requires at least 2 points");
    for (double v : x)
        if (!std::isfinite(v)) throw EvalError("non-finite value in correlation input");
    for (double v : y)
        if (!std::isfinite(v)) throw EvalError("non-finite value in correlation input");
}

bool is_constant(std::span<const double> x) {
    for (double v : x)
        if (v != x[0]) return false;
    return true;
}

// Counts pairs (i<j) with v[i] > v[j] (strict), iterative merge sort.
long long count_inversions(std::vector<double>& v) {
    std::vector<double> buf(v.size());
    long long inversions = 0;
    for (std::size_t width = 1; width < v.size(); width *= 2) {
        for (std::size_t lo = 0; lo + width < v.size(); lo += 2 * width) {
            std::size_t mid = lo + width;
            std::size_t hi = std::min(lo + 2 * width, v.size());
            std::size_t i = lo, j = mid, k = lo;
            while (i < mid && j < hi) {
                if (v[j] < v[i]) {
                    inversions += static_cast<long long>(mid - i);
                    buf[k++] = v[j++];
                } else {
                    buf[k++] = v[i++];
                }
            }
            while (i < mid) buf[k++] = v[i++];
            while (j < hi) buf[k++] = v[j++];
            std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
                      buf.begin() + static_cast<std::ptrdiff_t>(hi),
                      v.begin() + static_cast<std::ptrdiff_t>(lo));
        }
    }
    return inversions;
}

long long tie_pairs(const std::vector<double>& sorted) {
    long long total = 0;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= sorted.size(); ++i) {
        if (i < sorted.size() && sorted[i] == sorted[i - 1]) {
            ++run;
        } else {
            total += static_cast<long long>(run) * static_cast<long long>(run - 1) / 2;
            run = 1;
        }
    }
    return total;
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y);
    if (is_constant(x) || is_constant(y)) return std::nullopt;
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

std::optional<double> srcc(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y);
    if (is_constant(x) || is_constant(y)) return std::nullopt;
    auto rx = average_ranks(x);
    auto ry = average_ranks(y);
    return pearson(rx, ry);
}

std::optional<double> krcc(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y);
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (x[a] != x[b]) return x[a] < x[b];
        return y[a] < y[b];
    });

    // ties in x and joint (x,y) ties over the sorted sequence
    long long n1 = 0, n3 = 0;
    {
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
            long long t = static_cast<long long>(j - i + 1);
            n1 += t * (t - 1) / 2;
            std::size_t k = i;
            while (k <= j) {
                std::size_t l = k;
                while (l + 1 <= j && y[order[l + 1]] == y[order[k]]) ++l;
                long long u = static_cast<long long>(l - k + 1);
                n3 += u * (u - 1) / 2;
                k = l + 1;
            }
            i = j + 1;
        }
    }

    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
    std::vector<double> ys_for_ties = ys;
    std::sort(ys_for_ties.begin(), ys_for_ties.end());
    long long n2 = tie_pairs(ys_for_ties);

    long long discordant = count_inversions(ys);
    long long n0 = static_cast<long long>(n) * static_cast<long long>(n - 1) / 2;
    long long con_minus_dis = n0 - n1 - n2 + n3 - 2 * discordant;

    double denom_x = static_cast<double>(n0 - n1);
    double denom_y = static_cast<double>(n0 - n2);
    if (denom_x <= 0.0 || denom_y <= 0.0) return std::nullopt;  // all ties on one side
    return static_cast<double>(con_minus_dis) / std::sqrt(denom_x * denom_y);
}

double Logistic4::operator()(double x) const {
    return b2 + (b1 - b2) / (1.0 + std::exp(-(x - b3) / b4));
}

std::optional<Logistic4> fit_logistic4(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y);
    if (is_constant(x) || is_constant(y)) return std::nullopt;
    const std::size_t n = x.size();

    auto r0 = pearson(x, y);
    double ymin = *std::min_element(y.begin(), y.end());
    double ymax = *std::max_element(y.begin(), y.end());
    double xmean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double xvar = 0.0;
    for (double v : x) xvar += (v - xmean) * (v - xmean);
    double xstd = std::sqrt(xvar / static_cast<double>(n));
    if (xstd == 0.0) return std::nullopt;

    Logistic4 p;
    p.b1 = (r0 && *r0 < 0.0) ? ymin : ymax;
    p.b2 = (r0 && *r0 < 0.0) ? ymax : ymin;
    p.b3 = xmean;
    p.b4 = xstd;

    Eigen::Vector4d beta(p.b1, p.b2, p.b3, p.b4);
    auto sse = [&](const Eigen::Vector4d& b) {
        Logistic4 q{b[0], b[1], b[2], b[3]};
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double r = q(x[i]) - y[i];
            s += r * r;
        }
        return s;
    };

    double lambda = 1e-3;
    double current = sse(beta);
    const double min_b4 = 1e-9 * xstd;
    for (int iter = 0; iter < 200; ++iter) {
        Eigen::Matrix4d jtj = Eigen::Matrix4d::Zero();
        Eigen::Vector4d jtr = Eigen::Vector4d::Zero();
        Logistic4 q{beta[0], beta[1], beta[2], beta[3]};
        for (std::size_t i = 0; i < n; ++i) {
            double t = (x[i] - q.b3) / q.b4;
            double s = 1.0 / (1.0 + std::exp(-t));
            double resid = q(x[i]) - y[i];
            Eigen::Vector4d grad;
            grad[0] = s;
            grad[1] = 1.0 - s;
            grad[2] = -(q.b1 - q.b2) * s * (1.0 - s) / q.b4;
            grad[3] = -(q.b1 - q.b2) * s * (1.0 - s) * t / q.b4;
            jtj += grad * grad.transpose();
            jtr += grad * resid;
        }
        Eigen::Matrix4d damped = jtj;
        damped.diagonal() += lambda * (jtj.diagonal().array() + 1e-12).matrix();
        Eigen::Vector4d step = damped.ldlt().solve(-jtr);
        if (!step.allFinite()) break;  // keep the best beta so far
        Eigen::Vector4d candidate = beta + step;
        if (std::abs(candidate[3]) < min_b4) candidate[3] = candidate[3] < 0.0 ? -min_b4 : min_b4;
        double next = sse(candidate);
        if (std::isfinite(next) && next < current) {
            double rel = (current - next) / std::max(current, 1e-300);
            beta = candidate;
            current = next;
            lambda = std::max(lambda * 0.5, 1e-12);
            if (rel < 1e-12) break;  // at numerical precision
        } else {
            lambda *= 4.0;
            if (lambda > 1e12) break;  // stalled; accept the best point found
        }
    }
    // Non-convergence = nothing usable: a non-finite solution or no
    // improvement at all over the initial guess.
    if (!beta.allFinite() || !std::isfinite(current)) return std::nullopt;
    return Logistic4{beta[0], beta[1], beta[2], beta[3]};
}

PlccResult plcc(std::span<const double> x, std::span<const double> y, bool logistic) {
    PlccResult out;
    out.logistic_requested = logistic;
    if (!logistic) {
        out.value = pearson(x, y);
        return out;
    }
    auto fit = fit_logistic4(x, y);
    if (!fit) {
        out.value = pearson(x, y);
        return out;
    }
    std::vector<double> mapped(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) mapped[i] = (*fit)(x[i]);
    auto value = pearson(mapped, y);
    if (!value) {
        out.value = pearson(x, y);
        return out;
    }
    out.logistic_applied = true;
    out.value = value;
    return out;
}

}  // namespace ugvq::eval
