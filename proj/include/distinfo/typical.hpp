#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "distinfo/biguint.hpp"
#include "distinfo/errors.hpp"
#include "distinfo/rng.hpp"
#include "distinfo/states.hpp"

namespace distinfo {

// Occupation vector of a length-n string: k_i copies of symbol i.
struct TypeClass {
    std::size_t n = 0;
    std::vector<std::size_t> occupations;

    TypeClass(std::size_t n_, std::vector<std::size_t> occ)
        : n(n_), occupations(std::move(occ)) {
        const std::size_t sum =
            std::accumulate(occupations.begin(), occupations.end(), std::size_t{0});
        if (sum != n) throw contract_error("TypeClass: occupations must sum to n");
    }
};

// A count too large for machine words: always log2, exact big integer when
// n is at or below the exact threshold.
struct BigCount {
    double log2_value = 0.0;
    std::optional<BigUint> exact;
};

inline constexpr std::size_t kExactCountThreshold = 5000;

// Occupations k_i ~ round(lambda_i * n), fixed up by largest remainder so
// they sum to n exactly; lambda_i * n is not an integer in general.
inline TypeClass mode_type(const Spectrum& spectrum, std::size_t n) {
    if (n == 0) throw contract_error("mode_type: n must be positive");
    const std::size_t m = spectrum.size();
    std::vector<std::size_t> occ(m);
    std::vector<double> remainder(m);
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double target = spectrum[i] * static_cast<double>(n);
        occ[i] = static_cast<std::size_t>(std::floor(target));
        remainder[i] = target - static_cast<double>(occ[i]);
        assigned += occ[i];
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    std::size_t deficit = n > assigned ? n - assigned : 0;
    for (std::size_t i = 0; i < m && deficit > 0; ++i, --deficit) ++occ[order[i]];
    // Floating-point slop can only leave a surplus if the weights sum above 1;
    // shave it from the smallest remainders.
    std::size_t surplus = assigned > n ? assigned - n : 0;
    for (std::size_t i = m; i-- > 0 && surplus > 0;) {
        if (occ[order[i]] > 0) {
            --occ[order[i]];
            --surplus;
        }
    }
    return TypeClass(n, std::move(occ));
}

// n! / prod_i k_i!; exact integer for n <= 5000, log2 via lgamma for all n.
inline BigCount multinomial_count(const TypeClass& t) {
    BigCount out;
    double log_nat = std::lgamma(static_cast<double>(t.n) + 1.0);
    for (std::size_t k : t.occupations) log_nat -= std::lgamma(static_cast<double>(k) + 1.0);
    out.log2_value = log_nat / std::log(2.0);

    if (t.n <= kExactCountThreshold) {
        BigUint total(1);
        std::size_t remaining = t.n;
        for (std::size_t k : t.occupations) {
            // total *= C(remaining, k), multiplying and dividing stepwise;
            // every intermediate quotient is an integer.
            for (std::size_t j = 1; j <= k; ++j) {
                total.mul_small(static_cast<std::uint32_t>(remaining - k + j));
                total.div_small_exact(static_cast<std::uint32_t>(j));
            }
            remaining -= k;
        }
        out.exact = std::move(total);
    }
    return out;
}

// Literal probability mass of the rounded mode type: count * prod lambda^k,
// evaluated in the log domain. Decays like n^{-(m-1)/2}; the epsilon-typical
// mass below is the variant that actually tends to 1.
inline double mode_mass(const Spectrum& spectrum, std::size_t n) {
    const TypeClass t = mode_type(spectrum, n);
    double log2_mass = multinomial_count(t).log2_value;
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        if (t.occupations[i] == 0) continue;
        if (spectrum[i] <= 0.0) return 0.0;
        log2_mass += static_cast<double>(t.occupations[i]) * std::log2(spectrum[i]);
    }
    return std::min(1.0, std::exp2(log2_mass));
}

// Frequency-window (strong) typicality over the spectrum.
class TypicalEnsemble {
  public:
    TypicalEnsemble(Spectrum spectrum, std::size_t n, double epsilon)
        : spectrum_(std::move(spectrum)), n_(n), epsilon_(epsilon) {
        if (n == 0) throw contract_error("TypicalEnsemble: n must be positive");
        if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
            throw invalid_input("TypicalEnsemble: epsilon must be finite and nonnegative");
    }

    const Spectrum& spectrum() const { return spectrum_; }
    std::size_t n() const { return n_; }
    double epsilon() const { return epsilon_; }

    // Window test is inclusive, with a 1e-12 slack so exact boundary types
    // (|k/n - lambda| == epsilon) are kept.
    bool is_typical(const std::vector<std::size_t>& occupations) const {
        for (std::size_t i = 0; i < spectrum_.size(); ++i) {
            const double freq = static_cast<double>(occupations[i]) / static_cast<double>(n_);
            if (std::abs(freq - spectrum_[i]) > epsilon_ + 1e-12) return false;
        }
        return true;
    }

  private:
    Spectrum spectrum_;
    std::size_t n_;
    double epsilon_;
};

// Window half-width that pins every occupation to the integers nearest
// lambda_i * n; makes the epsilon-typical set coincide with the rounded mode
// type class (up to ties).
inline double mode_window_epsilon(std::size_t n) {
    if (n == 0) throw contract_error("mode_window_epsilon: n must be positive");
    return 0.5 / static_cast<double>(n);
}

struct MassEstimate {
    double value = 0.0;
    double std_error = 0.0;  // 0 for the exact path
    bool exact = false;
    std::size_t trials = 0;  // 0 for the exact path
};

namespace detail {

// Number of occupation vectors of n into m parts, saturating at `limit`.
inline double composition_count(std::size_t n, std::size_t m, double limit) {
    double count = 1.0;
    for (std::size_t i = 1; i < m; ++i) {
        count *= static_cast<double>(n + i) / static_cast<double>(i);
        if (count > limit) return limit + 1.0;
    }
    return count;
}

}  // namespace detail

// Probability that an iid(lambda) length-n draw lands inside the frequency
// window. Exact summation over type classes when there are at most 1e6 of
// them; Monte Carlo with a reported standard error otherwise.
inline MassEstimate epsilon_typical_mass(const TypicalEnsemble& e,
                                         std::size_t mc_trials = 100000,
                                         std::uint64_t seed = 1) {
    const Spectrum& lam = e.spectrum();
    const std::size_t m = lam.size();
    const std::size_t n = e.n();

    if (detail::composition_count(n, m, 1e6) <= 1e6) {
        // Exact: walk all in-window occupation vectors, accumulate their mass.
        const double ln2 = std::log(2.0);
        double total = 0.0;
        std::vector<std::size_t> occ(m, 0);
        std::vector<std::size_t> lo(m), hi(m);
        for (std::size_t i = 0; i < m; ++i) {
            const double nl = static_cast<double>(n);
            const double lo_f = std::ceil((lam[i] - e.epsilon()) * nl - 1e-9);
            const double hi_f = std::floor((lam[i] + e.epsilon()) * nl + 1e-9);
            lo[i] = lo_f <= 0.0 ? 0 : static_cast<std::size_t>(lo_f);
            hi[i] = hi_f >= nl ? n : static_cast<std::size_t>(std::max(hi_f, 0.0));
        }
        const double log2_n_fact = std::lgamma(static_cast<double>(n) + 1.0) / ln2;
        auto walk = [&](auto&& self, std::size_t i, std::size_t remaining) -> void {
            if (i + 1 == m) {
                if (remaining < lo[i] || remaining > hi[i]) return;
                occ[i] = remaining;
                if (!e.is_typical(occ)) return;
                double log2_p = log2_n_fact;
                for (std::size_t j = 0; j < m; ++j) {
                    if (occ[j] == 0) continue;
                    if (lam[j] <= 0.0) return;  // zero-weight symbol present
                    log2_p -= std::lgamma(static_cast<double>(occ[j]) + 1.0) / ln2;
                    log2_p += static_cast<double>(occ[j]) * std::log2(lam[j]);
                }
                total += std::exp2(log2_p);
                return;
            }
            const std::size_t top = std::min(hi[i], remaining);
            for (std::size_t k = lo[i]; k <= top; ++k) {
                occ[i] = k;
                self(self, i + 1, remaining - k);
                if (k == top) break;  // guard size_t wrap when top == max
            }
        };
        walk(walk, 0, n);
        return MassEstimate{std::min(1.0, total), 0.0, true, 0};
    }

    // Monte Carlo path.
    if (mc_trials == 0) throw contract_error("epsilon_typical_mass: need at least one trial");
    Rng rng(seed);
    std::vector<double> cdf(m);
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        acc += lam[i];
        cdf[i] = acc;
    }
    std::vector<std::size_t> occ(m);
    std::size_t hits = 0;
    for (std::size_t trial = 0; trial < mc_trials; ++trial) {
        std::fill(occ.begin(), occ.end(), 0);
        for (std::size_t s = 0; s < n; ++s) {
            const double u = rng.uniform01();
            std::size_t sym = m - 1;
            for (std::size_t i = 0; i < m; ++i)
                if (u < cdf[i]) {
                    sym = i;
                    break;
                }
            ++occ[sym];
        }
        if (e.is_typical(occ)) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(mc_trials);
    const double se = std::sqrt(std::max(0.0, p * (1.0 - p) / static_cast<double>(mc_trials)));
    return MassEstimate{p, se, false, mc_trials};
}

inline constexpr std::size_t kRejectionAttemptCap = 1000000;

// iid(lambda) draw conditioned on landing in the window, by rejection.
// Deterministic for a fixed seed.
inline std::vector<std::size_t> sample_likely_string(const TypicalEnsemble& e,
                                                     std::uint64_t seed) {
    const Spectrum& lam = e.spectrum();
    const std::size_t m = lam.size();
    const std::size_t n = e.n();
    Rng rng(seed);
    std::vector<double> cdf(m);
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        acc += lam[i];
        cdf[i] = acc;
    }
    std::vector<std::size_t> str(n), occ(m);
    for (std::size_t attempt = 0; attempt < kRejectionAttemptCap; ++attempt) {
        std::fill(occ.begin(), occ.end(), 0);
        for (std::size_t s = 0; s < n; ++s) {
            const double u = rng.uniform01();
            std::size_t sym = m - 1;
            for (std::size_t i = 0; i < m; ++i)
                if (u < cdf[i]) {
                    sym = i;
                    break;
                }
            str[s] = sym;
            ++occ[sym];
        }
        if (e.is_typical(occ)) return str;
    }
    throw sampling_error("sample_likely_string: rejection cap exceeded; window too narrow");
}

}  // namespace distinfo
