#pragma once

#include <vector>

namespace prlab {

/// Sliding-window mean: entry i is the mean of entries i..i+window
/// (inclusive, window+1 values). Output length = input length - window.
std::vector<double> tendency(const std::vector<int>& steps, int window = 100);
std::vector<double> tendency(const std::vector<double>& values, int window = 100);

/// Windowed minimum over entries i..i+window. `two_point` switches to the
/// literal two-point rule min(entry i, entry i+window).
std::vector<double> smoothed_min(const std::vector<int>& steps, int window = 100,
                                 bool two_point = false);

struct TTestResult {
    double t_stat = 0.0;
    long dof = 0;
    bool significant_one_tail_05 = false;
};

/// Two-sample Student's t with pooled variance, dof = n_a + n_b - 2.
TTestResult t_test(const std::vector<double>& a, const std::vector<double>& b);

/// One-tail critical value at the 0.05 level; 1.645 for dof > 1000.
double one_tail_critical_05(long dof);

double mean_of(const std::vector<double>& v);
double sample_variance(const std::vector<double>& v);

}  // namespace prlab
