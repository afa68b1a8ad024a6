#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace geodetect {

// Neumaier-compensated summation. Weighted triangle sums mix magnitudes
// across several orders for heavy-tailed weights; plain accumulation loses
// the small terms that carry the signal.
class KahanSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct MeanVar {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;  // unbiased sample variance

    double stddev() const { return std::sqrt(variance); }
    double stderr_of_mean() const { return count > 0 ? std::sqrt(variance / static_cast<double>(count)) : 0.0; }
};

inline MeanVar mean_variance(std::span<const double> xs) {
    MeanVar out;
    out.count = xs.size();
    if (xs.empty()) return out;
    KahanSum s;
    for (double x : xs) s.add(x);
    out.mean = s.value() / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        KahanSum sq;
        for (double x : xs) {
            const double d = x - out.mean;
            sq.add(d * d);
        }
        out.variance = sq.value() / static_cast<double>(xs.size() - 1);
    }
    return out;
}

}  // namespace geodetect
