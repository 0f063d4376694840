#pragma once

#include <cstddef>
#include <vector>

namespace nids {

/// Probability vector over class labels; the universal prediction result.
/// Entries are in [0,1] and sum to 1 (tolerance 1e-9) after normalize().
struct ClassDistribution {
    std::vector<double> probabilities;

    ClassDistribution() = default;
    explicit ClassDistribution(std::size_t classes, double value = 0.0)
        : probabilities(classes, value) {}
    explicit ClassDistribution(std::vector<double> p) : probabilities(std::move(p)) {}
    ClassDistribution(std::initializer_list<double> p) : probabilities(p) {}

    std::size_t size() const { return probabilities.size(); }
    double operator[](std::size_t i) const { return probabilities[i]; }
    double& operator[](std::size_t i) { return probabilities[i]; }

    /// Index of the largest probability; ties -> lowest index.
    int argmax() const {
        int best = 0;
        for (std::size_t i = 1; i < probabilities.size(); ++i) {
            if (probabilities[i] > probabilities[best]) best = static_cast<int>(i);
        }
        return best;
    }

    double sum() const {
        double s = 0.0;
        for (double p : probabilities) s += p;
        return s;
    }

    /// Scales to sum 1; a zero vector becomes uniform.
    void normalize() {
        const double s = sum();
        if (s <= 0.0) {
            const double u = 1.0 / static_cast<double>(probabilities.size());
            for (double& p : probabilities) p = u;
            return;
        }
        for (double& p : probabilities) p /= s;
    }

    static ClassDistribution one_hot(std::size_t classes, std::size_t index) {
        ClassDistribution d(classes, 0.0);
        d.probabilities[index] = 1.0;
        return d;
    }
};

}  // namespace nids
