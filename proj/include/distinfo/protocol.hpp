#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "distinfo/errors.hpp"
#include "distinfo/linalg.hpp"
#include "distinfo/rng.hpp"
#include "distinfo/states.hpp"
#include "distinfo/typical.hpp"

namespace distinfo {

// Bell label: amplitude bit y (0 = Phi class, 1 = Psi class) and phase bit x
// (0 = "+", 1 = "-"). Bell index order matches bell_state():
//   0 Phi+ (y=0,x=0)   1 Phi- (y=0,x=1)   2 Psi+ (y=1,x=0)   3 Psi- (y=1,x=1)
struct BellLabel {
    std::uint8_t y = 0;
    std::uint8_t x = 0;

    std::size_t index() const { return static_cast<std::size_t>(2 * y + x); }
    static BellLabel from_index(std::size_t k) {
        if (k > 3) throw contract_error("BellLabel: index must be in 0..3");
        return BellLabel{static_cast<std::uint8_t>(k >> 1), static_cast<std::uint8_t>(k & 1)};
    }
    bool operator==(const BellLabel&) const = default;
};

namespace detail {

// Decodes a two-pair state (qubit order A1 B1 A2 B2) as a product of Bell
// states; the input must be such a product up to global phase.
inline std::pair<std::size_t, std::size_t> decode_bell_pair(const PureState& psi) {
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) {
            const PureState ref = kron(bell_state(a), bell_state(b));
            if (std::abs(inner(ref, psi)) > 0.999) return {a, b};
        }
    throw numerical_error("decode_bell_pair: state is not a Bell product");
}

inline std::size_t decode_bell(const PureState& psi) {
    for (std::size_t k = 0; k < 4; ++k)
        if (std::abs(inner(bell_state(k), psi)) > 0.999) return k;
    throw numerical_error("decode_bell: state is not a Bell state");
}

}  // namespace detail

// Label rule for the bilateral CNOT (both parties apply CNOT between their
// halves of two shared pairs). The table is derived here from the dense
// oracle, not transcribed: each of the 16 Bell products is evolved by
// CNOT_A (x) CNOT_B and decoded back.
inline const std::array<std::array<std::pair<std::size_t, std::size_t>, 4>, 4>&
bxor_label_table() {
    static const auto table = [] {
        std::array<std::array<std::pair<std::size_t, std::size_t>, 4>, 4> t{};
        const DenseMatrix cnot = cnot_gate();
        for (std::size_t ks = 0; ks < 4; ++ks)
            for (std::size_t kt = 0; kt < 4; ++kt) {
                PureState joint = kron(bell_state(ks), bell_state(kt));
                joint = apply_gate(joint, cnot, {0, 2});  // Alice: A1 -> A2
                joint = apply_gate(joint, cnot, {1, 3});  // Bob:   B1 -> B2
                t[ks][kt] = detail::decode_bell_pair(joint);
            }
        return t;
    }();
    return table;
}

// Label rule for the bilateral Hadamard, derived from the dense H (x) H
// oracle the same way.
inline const std::array<std::size_t, 4>& bhadamard_label_table() {
    static const auto table = [] {
        std::array<std::size_t, 4> t{};
        const DenseMatrix h = hadamard_gate();
        for (std::size_t k = 0; k < 4; ++k) {
            PureState psi = bell_state(k);
            psi = apply_gate(psi, h, {0});
            psi = apply_gate(psi, h, {1});
            t[k] = detail::decode_bell(psi);
        }
        return t;
    }();
    return table;
}

namespace detail {

// GF(2) matrix of the bxor label rule on (ys, xs, yt, xt), extracted from the
// oracle-derived table after checking the rule is in fact linear. Row r's
// entry j says whether output bit r depends on input bit j.
inline const std::array<std::array<bool, 4>, 4>& bxor_gf2_matrix() {
    static const auto mat = [] {
        auto apply = [](std::size_t v) {
            const std::size_t ks = ((v & 1) << 1) | ((v >> 1) & 1);  // 2*ys + xs
            const std::size_t kt = (((v >> 2) & 1) << 1) | ((v >> 3) & 1);
            const auto [ns, nt] = bxor_label_table()[ks][kt];
            return (ns >> 1) | ((ns & 1) << 1) | ((nt >> 1) << 2) | ((nt & 1) << 3);
        };
        for (std::size_t u = 0; u < 16; ++u)
            for (std::size_t w = 0; w < 16; ++w)
                if (apply(u ^ w) != (apply(u) ^ apply(w)))
                    throw numerical_error("bxor rule is not GF(2)-linear");
        std::array<std::array<bool, 4>, 4> m{};
        for (std::size_t j = 0; j < 4; ++j) {
            const std::size_t img = apply(std::size_t{1} << j);
            for (std::size_t r = 0; r < 4; ++r) m[r][j] = (img >> r) & 1;
        }
        return m;
    }();
    return mat;
}

inline const std::array<std::array<bool, 2>, 2>& bhadamard_gf2_matrix() {
    static const auto mat = [] {
        auto apply = [](std::size_t v) {
            const std::size_t k = ((v & 1) << 1) | ((v >> 1) & 1);
            const std::size_t nk = bhadamard_label_table()[k];
            return (nk >> 1) | ((nk & 1) << 1);
        };
        for (std::size_t u = 0; u < 4; ++u)
            for (std::size_t w = 0; w < 4; ++w)
                if (apply(u ^ w) != (apply(u) ^ apply(w)))
                    throw numerical_error("bhadamard rule is not GF(2)-linear");
        std::array<std::array<bool, 2>, 2> m{};
        for (std::size_t j = 0; j < 2; ++j) {
            const std::size_t img = apply(std::size_t{1} << j);
            for (std::size_t r = 0; r < 2; ++r) m[r][j] = (img >> r) & 1;
        }
        return m;
    }();
    return mat;
}

}  // namespace detail

// Length-n string of Bell labels with per-pair liveness. Measured pairs may
// not be operands of later operations.
class BellString {
  public:
    explicit BellString(std::vector<BellLabel> labels)
        : labels_(std::move(labels)), alive_(labels_.size(), true) {
        if (labels_.empty()) throw contract_error("BellString: empty");
    }

    static BellString from_indices(const std::vector<std::size_t>& symbols) {
        std::vector<BellLabel> labels;
        labels.reserve(symbols.size());
        for (std::size_t k : symbols) labels.push_back(BellLabel::from_index(k));
        return BellString(std::move(labels));
    }

    std::size_t size() const { return labels_.size(); }
    const BellLabel& label(std::size_t i) const { return labels_.at(i); }
    bool alive(std::size_t i) const { return alive_.at(i); }

    void bxor(std::size_t source, std::size_t target) {
        if (source == target) throw contract_error("bxor: source and target must differ");
        require_alive(source);
        require_alive(target);
        const auto [ns, nt] = bxor_label_table()[labels_[source].index()][labels_[target].index()];
        labels_[source] = BellLabel::from_index(ns);
        labels_[target] = BellLabel::from_index(nt);
    }

    void bhadamard(std::size_t pair) {
        require_alive(pair);
        labels_[pair] = BellLabel::from_index(bhadamard_label_table()[labels_[pair].index()]);
    }

    // Computational-basis measurement of one pair: outcomes 00/11 report the
    // Phi class (bit 0), 01/10 the Psi class (bit 1). The pair is dead
    // afterwards and its phase bit is unknowable.
    int measure_amplitude(std::size_t pair) {
        require_alive(pair);
        alive_[pair] = false;
        return labels_[pair].y;
    }

    // Packs the current labels: bit 2i is pair i's amplitude bit, bit 2i+1
    // its phase bit.
    std::uint32_t packed_bits() const {
        std::uint32_t bits = 0;
        for (std::size_t i = 0; i < labels_.size(); ++i) {
            bits |= static_cast<std::uint32_t>(labels_[i].y) << (2 * i);
            bits |= static_cast<std::uint32_t>(labels_[i].x) << (2 * i + 1);
        }
        return bits;
    }

  private:
    void require_alive(std::size_t i) const {
        if (i >= labels_.size()) throw contract_error("BellString: pair index out of range");
        if (!alive_[i]) throw contract_error("BellString: operation on a measured pair");
    }

    std::vector<BellLabel> labels_;
    std::vector<bool> alive_;
};

namespace detail {

// Tracks, for every pair, which initial bits its current amplitude and phase
// bits are a GF(2) combination of. Updated with the same oracle-derived
// matrices that drive the label evolution, so a recorded parity is exactly
// <mask, initial bits>.
class MaskTracker {
  public:
    explicit MaskTracker(std::size_t n) : my_(n), mx_(n) {
        for (std::size_t i = 0; i < n; ++i) {
            my_[i] = std::uint32_t{1} << (2 * i);
            mx_[i] = std::uint32_t{1} << (2 * i + 1);
        }
    }

    void bxor(std::size_t s, std::size_t t) {
        const auto& m = bxor_gf2_matrix();
        const std::array<std::uint32_t, 4> in{my_[s], mx_[s], my_[t], mx_[t]};
        std::array<std::uint32_t, 4> out{};
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t j = 0; j < 4; ++j)
                if (m[r][j]) out[r] ^= in[j];
        my_[s] = out[0];
        mx_[s] = out[1];
        my_[t] = out[2];
        mx_[t] = out[3];
    }

    void bhadamard(std::size_t p) {
        const auto& m = bhadamard_gf2_matrix();
        const std::array<std::uint32_t, 2> in{my_[p], mx_[p]};
        std::array<std::uint32_t, 2> out{};
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t j = 0; j < 2; ++j)
                if (m[r][j]) out[r] ^= in[j];
        my_[p] = out[0];
        mx_[p] = out[1];
    }

    std::uint32_t amplitude_mask(std::size_t p) const { return my_[p]; }

  private:
    std::vector<std::uint32_t> my_, mx_;
};

inline int parity(std::uint32_t v) { return std::popcount(v) & 1; }

}  // namespace detail

// Outcome of one identification trial.
struct IdentificationResult {
    bool success = false;            // posterior is a singleton
    std::size_t measured_pairs = 0;  // one sacrificial pair per executed round
    std::size_t kept_pairs = 0;
    double yield_per_copy = 0.0;     // kept_pairs * E(sigma) / n
    double accumulated_di_bits = 0.0;
    std::size_t surviving_candidates = 0;
    bool map_correct = false;        // secondary: unique max-prior survivor == hidden
};

// Expected number of wrong likely-string candidates surviving M random
// parities: (2^{nS} - 1) * 2^{-M}.
inline double collision_estimate(double s_bits, std::size_t n, std::size_t rounds) {
    return (std::exp2(static_cast<double>(n) * s_bits) - 1.0) *
           std::exp2(-static_cast<double>(rounds));
}

// One-by-one-measurement identification of a hidden likely Bell string.
// Each round routes one randomly chosen bit (amplitude, phase, or their sum)
// of each surviving pair into a sacrificial pair via bilateral gates, then
// measures that pair, revealing one subset parity. Identification succeeds
// when the parities pin down the string among all epsilon-typical candidates.
//
// Exhaustive posterior filtering caps at n <= 12 (4^n enumeration).
class HashingProtocol {
  public:
    static constexpr std::size_t kMaxPairs = 12;

    HashingProtocol(const BellDiagonalSpectrum& spectrum, std::size_t n, std::size_t rounds,
                    std::optional<double> epsilon = std::nullopt)
        : spectrum_(spectrum),
          n_(n),
          rounds_(rounds),
          epsilon_(epsilon.value_or(mode_window_epsilon(n))),
          ensemble_(spectrum.spectrum(), n, epsilon_) {
        if (n < 2) throw contract_error("HashingProtocol: need at least 2 pairs");
        if (rounds < 1) throw contract_error("HashingProtocol: need at least 1 round");
        if (n > kMaxPairs)
            throw unsupported_size(
                "HashingProtocol: exhaustive posterior supports n <= 12; use the analytic "
                "collision estimate beyond that");
        enumerate_candidates();
    }

    std::size_t n() const { return n_; }
    std::size_t rounds() const { return rounds_; }
    double epsilon() const { return epsilon_; }
    const std::vector<std::uint32_t>& candidates() const { return candidates_; }

    IdentificationResult run_trial(std::uint64_t trial_seed) const {
        const std::vector<std::size_t> hidden_symbols =
            sample_likely_string(ensemble_, mix_seed(trial_seed, 1));
        BellString s = BellString::from_indices(hidden_symbols);
        const std::uint32_t hidden_bits = s.packed_bits();
        detail::MaskTracker masks(n_);

        std::vector<std::pair<std::uint32_t, int>> observations;
        const std::size_t effective_rounds = std::min(rounds_, n_);
        observations.reserve(effective_rounds);

        for (std::size_t r = 0; r < effective_rounds; ++r) {
            Rng rng(mix_seed(trial_seed, 0x100 + r));
            std::vector<std::size_t> alive_list;
            for (std::size_t i = 0; i < n_; ++i)
                if (s.alive(i)) alive_list.push_back(i);
            const std::size_t target = alive_list[rng.below(alive_list.size())];

            // Route the target's own contribution first.
            enum Pick : std::size_t { kNone = 0, kAmp = 1, kPhase = 2, kBoth = 3 };
            if (rng.coin()) {
                s.bhadamard(target);
                masks.bhadamard(target);
            }
            for (std::size_t i : alive_list) {
                if (i == target) continue;
                switch (static_cast<Pick>(rng.below(4))) {
                    case kNone:
                        break;
                    case kAmp:
                        s.bxor(i, target);
                        masks.bxor(i, target);
                        break;
                    case kPhase:
                        s.bhadamard(i);
                        masks.bhadamard(i);
                        s.bxor(i, target);
                        masks.bxor(i, target);
                        s.bhadamard(i);
                        masks.bhadamard(i);
                        break;
                    case kBoth:
                        s.bxor(i, target);
                        masks.bxor(i, target);
                        s.bhadamard(i);
                        masks.bhadamard(i);
                        s.bxor(i, target);
                        masks.bxor(i, target);
                        s.bhadamard(i);
                        masks.bhadamard(i);
                        break;
                }
            }

            const std::uint32_t mask = masks.amplitude_mask(target);
            const int bit = s.measure_amplitude(target);
            // Parity soundness: the revealed bit must equal the tracked
            // subset parity of the hidden string.
            if (bit != detail::parity(mask & hidden_bits))
                throw numerical_error("HashingProtocol: parity soundness violated");
            observations.emplace_back(mask, bit);
        }

        std::uint32_t hidden_packed = 0;
        for (std::size_t i = 0; i < n_; ++i)
            hidden_packed |= pack_symbol(hidden_symbols[i], i);

        IdentificationResult res;
        bool hidden_seen = false;
        double best_logprior = 0.0;
        std::uint32_t best_candidate = 0;
        bool best_unique = false;
        for (std::uint32_t cand : candidates_) {
            bool consistent = true;
            for (const auto& [mask, bit] : observations)
                if (detail::parity(mask & cand) != bit) {
                    consistent = false;
                    break;
                }
            if (!consistent) continue;
            ++res.surviving_candidates;
            if (cand == hidden_packed) hidden_seen = true;
            const double lp = log_prior(cand);
            if (res.surviving_candidates == 1 || lp > best_logprior) {
                best_logprior = lp;
                best_candidate = cand;
                best_unique = true;
            } else if (lp == best_logprior) {
                best_unique = false;
            }
        }
        if (!hidden_seen)
            throw numerical_error("HashingProtocol: hidden string missing from posterior");

        res.success = (res.surviving_candidates == 1);
        res.map_correct = best_unique && best_candidate == hidden_packed;
        res.measured_pairs = effective_rounds;
        res.kept_pairs = n_ - effective_rounds;
        // E(sigma) = 1 for every Bell-diagonal ensemble.
        res.yield_per_copy = static_cast<double>(res.kept_pairs) / static_cast<double>(n_);
        res.accumulated_di_bits = static_cast<double>(effective_rounds);
        return res;
    }

  private:
    static std::uint32_t pack_symbol(std::size_t bell_index, std::size_t pair) {
        const BellLabel l = BellLabel::from_index(bell_index);
        return (static_cast<std::uint32_t>(l.y) << (2 * pair)) |
               (static_cast<std::uint32_t>(l.x) << (2 * pair + 1));
    }

    double log_prior(std::uint32_t packed) const {
        double lp = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            const std::size_t y = (packed >> (2 * i)) & 1;
            const std::size_t x = (packed >> (2 * i + 1)) & 1;
            const double w = spectrum_[2 * y + x];
            lp += w > 0.0 ? std::log(w) : -1e9;
        }
        return lp;
    }

    void enumerate_candidates() {
        std::vector<std::size_t> digits(n_, 0), occ(4, 0);
        occ[0] = n_;
        const std::uint64_t total = std::uint64_t{1} << (2 * n_);  // 4^n
        for (std::uint64_t c = 0;; ++c) {
            if (ensemble_.is_typical(occ)) {
                std::uint32_t packed = 0;
                for (std::size_t i = 0; i < n_; ++i) packed |= pack_symbol(digits[i], i);
                candidates_.push_back(packed);
            }
            if (c + 1 == total) break;
            for (std::size_t i = 0;; ++i) {  // base-4 odometer
                --occ[digits[i]];
                digits[i] = (digits[i] + 1) & 3;
                ++occ[digits[i]];
                if (digits[i] != 0) break;
            }
        }
        if (candidates_.empty())
            throw invalid_input("HashingProtocol: epsilon window admits no candidate strings");
    }

    BellDiagonalSpectrum spectrum_;
    std::size_t n_;
    std::size_t rounds_;
    double epsilon_;
    TypicalEnsemble ensemble_;
    std::vector<std::uint32_t> candidates_;
};

// Single-trial convenience wrapper.
inline IdentificationResult run_hashing(const BellDiagonalSpectrum& spectrum, std::size_t n,
                                        std::size_t rounds, std::uint64_t seed,
                                        std::optional<double> epsilon = std::nullopt) {
    return HashingProtocol(spectrum, n, rounds, epsilon).run_trial(seed);
}

// Yield formulas for the one-by-one measurement protocol.
//   e12                    (1 - S/I_d)    * E(sigma)   achieved-DI yield
//   e13                    (1 - S/I_dmax) * E(sigma)   maximal yield
//   measured_fraction_min  S / I_dmax                  pairs sacrificed per copy
struct YieldBounds {
    double e12 = 0.0;
    double e13 = 0.0;
    double measured_fraction_min = 0.0;
};

inline YieldBounds yield_bounds(const Spectrum& spectrum, double e_sigma, double s_bits,
                                double id_bits, double idmax_bits) {
    if (!(id_bits > 0.0) || !(idmax_bits > 0.0))
        throw contract_error("yield_bounds: DI values must be positive");
    if (std::abs(s_bits - shannon_entropy(spectrum)) > 1e-6)
        throw contract_error("yield_bounds: s_bits inconsistent with spectrum entropy");
    YieldBounds out;
    out.e12 = (1.0 - s_bits / id_bits) * e_sigma;
    out.e13 = (1.0 - s_bits / idmax_bits) * e_sigma;
    out.measured_fraction_min = s_bits / idmax_bits;
    return out;
}

}  // namespace distinfo
