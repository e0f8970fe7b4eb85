#pragma once

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <span>
#include <type_traits>
#include <vector>

namespace sanovlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kLn2 = 0.6931471805599453094172321214581766;

inline double log2_of(double x) { return std::log2(x); }

// x*log2(x) with the 0*log 0 = 0 convention.
inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

inline double log2_factorial(long long n) {
    return std::lgamma(static_cast<double>(n) + 1.0) / kLn2;
}

inline double log2_binomial(long long n, long long k) {
    if (k < 0 || k > n) return -kInf;
    return log2_factorial(n) - log2_factorial(k) - log2_factorial(n - k);
}

// Stable log2(sum_i 2^{x_i}); -inf entries are allowed and contribute zero.
inline double log2_sum_exp2(std::span<const double> xs) {
    double m = -kInf;
    for (double x : xs) m = std::max(m, x);
    if (m == -kInf) return -kInf;
    double acc = 0.0;
    for (double x : xs) {
        if (x != -kInf) acc += std::exp2(x - m);
    }
    return m + std::log2(acc);
}

// Applies fn to each element, fanning out over up to `threads` async tasks;
// results come back in input order regardless of scheduling.
template <typename T, typename Fn>
auto map_over_n(const std::vector<T>& xs, Fn&& fn, int threads)
    -> std::vector<std::invoke_result_t<Fn&, const T&>> {
    using R = std::invoke_result_t<Fn&, const T&>;
    std::vector<R> out(xs.size());
    if (threads <= 1 || xs.size() <= 1) {
        for (std::size_t i = 0; i < xs.size(); ++i) out[i] = fn(xs[i]);
        return out;
    }
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), xs.size());
    std::vector<std::future<void>> futures;
    futures.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < xs.size(); i += workers) out[i] = fn(xs[i]);
        }));
    }
    for (auto& f : futures) f.get();
    return out;
}

// Incremental variant of log2_sum_exp2 for long streams of terms.
class Log2Accumulator {
  public:
    void add(double log2_term) {
        if (log2_term == -kInf) return;
        terms_.push_back(log2_term);
    }
    double log2_total() const { return log2_sum_exp2(terms_); }
    bool empty() const { return terms_.empty(); }

  private:
    std::vector<double> terms_;
};

} // namespace sanovlab
