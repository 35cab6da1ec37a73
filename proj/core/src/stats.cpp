#include "prlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace prlab {

namespace {

void check_window(std::size_t n, int window) {
    if (window < 1) throw std::invalid_argument("window must be >= 1");
    if (n <= static_cast<std::size_t>(window)) {
        throw std::invalid_argument("vector length must exceed the window");
    }
}

// One-tail 0.05 critical values of Student's t for small dof.
constexpr double kCritical[31] = {
    0.0,   6.314, 2.920, 2.353, 2.132, 2.015, 1.943, 1.895, 1.860, 1.833, 1.812,
    1.796, 1.782, 1.771, 1.761, 1.753, 1.746, 1.740, 1.734, 1.729, 1.725, 1.721,
    1.717, 1.714, 1.711, 1.708, 1.706, 1.703, 1.701, 1.699, 1.697};

double interpolate_inverse_dof(long dof, long lo, double crit_lo, long hi, double crit_hi) {
    const double x = 1.0 / static_cast<double>(dof);
    const double x_lo = 1.0 / static_cast<double>(lo);
    const double x_hi = 1.0 / static_cast<double>(hi);
    return crit_hi + (crit_lo - crit_hi) * (x - x_hi) / (x_lo - x_hi);
}

}  // namespace

std::vector<double> tendency(const std::vector<int>& steps, int window) {
    check_window(steps.size(), window);
    const std::size_t out_len = steps.size() - static_cast<std::size_t>(window);
    std::vector<double> out(out_len);
    long long sum = 0;
    for (int i = 0; i <= window; ++i) sum += steps[i];
    out[0] = static_cast<double>(sum) / (window + 1);
    for (std::size_t i = 1; i < out_len; ++i) {
        sum += steps[i + window] - steps[i - 1];
        out[i] = static_cast<double>(sum) / (window + 1);
    }
    return out;
}

std::vector<double> tendency(const std::vector<double>& values, int window) {
    check_window(values.size(), window);
    const std::size_t out_len = values.size() - static_cast<std::size_t>(window);
    std::vector<double> out(out_len);
    for (std::size_t i = 0; i < out_len; ++i) {
        double sum = 0.0;
        for (int k = 0; k <= window; ++k) sum += values[i + k];
        out[i] = sum / (window + 1);
    }
    return out;
}

std::vector<double> smoothed_min(const std::vector<int>& steps, int window, bool two_point) {
    check_window(steps.size(), window);
    const std::size_t out_len = steps.size() - static_cast<std::size_t>(window);
    std::vector<double> out(out_len);
    for (std::size_t i = 0; i < out_len; ++i) {
        if (two_point) {
            out[i] = static_cast<double>(std::min(steps[i], steps[i + window]));
        } else {
            int m = steps[i];
            for (int k = 1; k <= window; ++k) m = std::min(m, steps[i + k]);
            out[i] = static_cast<double>(m);
        }
    }
    return out;
}

double mean_of(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean of empty vector");
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

double sample_variance(const std::vector<double>& v) {
    if (v.size() < 2) throw std::invalid_argument("variance needs at least two values");
    const double m = mean_of(v);
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return acc / static_cast<double>(v.size() - 1);
}

double one_tail_critical_05(long dof) {
    if (dof < 1) throw std::invalid_argument("dof must be >= 1");
    if (dof <= 30) return kCritical[dof];
    if (dof <= 40) return interpolate_inverse_dof(dof, 30, 1.697, 40, 1.684);
    if (dof <= 60) return interpolate_inverse_dof(dof, 40, 1.684, 60, 1.671);
    if (dof <= 120) return interpolate_inverse_dof(dof, 60, 1.671, 120, 1.658);
    if (dof <= 1000) return interpolate_inverse_dof(dof, 120, 1.658, 1000, 1.646);
    return 1.645;
}

TTestResult t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2) {
        throw std::invalid_argument("t_test needs at least two values per sample");
    }
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    const double pooled =
        ((na - 1.0) * sample_variance(a) + (nb - 1.0) * sample_variance(b)) / (na + nb - 2.0);

    TTestResult r;
    r.dof = static_cast<long>(a.size() + b.size()) - 2;
    if (pooled == 0.0) {
        if (ma == mb) {
            r.t_stat = 0.0;
        } else {
            r.t_stat = ma > mb ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity();
        }
    } else {
        r.t_stat = (ma - mb) / std::sqrt(pooled * (1.0 / na + 1.0 / nb));
    }
    r.significant_one_tail_05 = r.t_stat > one_tail_critical_05(r.dof);
    return r;
}

}  // namespace prlab
