#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "distinfo/errors.hpp"
#include "distinfo/linalg.hpp"

namespace distinfo {

// All entropies in this library are base-2 (bits / ebits); the likely-string
// count 2^{nS} only comes out right in that base. Natural-log values are a
// display conversion.
inline double bits_to_nats(double bits) { return bits * std::log(2.0); }

inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

inline double binary_entropy(double p) { return -xlog2x(p) - xlog2x(1.0 - p); }

// Probability weights over an orthogonal ensemble; nonnegative, sum 1.
class Spectrum {
  public:
    explicit Spectrum(std::vector<double> weights) : weights_(std::move(weights)) {
        if (weights_.empty()) throw invalid_input("Spectrum: needs at least one weight");
        double sum = 0.0;
        for (double w : weights_) {
            if (!(w >= 0.0) || !std::isfinite(w))
                throw invalid_input("Spectrum: weights must be finite and nonnegative");
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw invalid_input("Spectrum: weights must sum to 1 within 1e-12");
    }

    // Renormalizes weights whose sum is within `tol` of 1; larger deviations
    // are rejected.
    static Spectrum normalized(std::vector<double> weights, double tol = 1e-9) {
        double sum = 0.0;
        for (double w : weights) {
            if (!(w >= 0.0) || !std::isfinite(w))
                throw invalid_input("Spectrum: weights must be finite and nonnegative");
            sum += w;
        }
        if (std::abs(sum - 1.0) > tol)
            throw invalid_input("Spectrum: weight sum deviates from 1 beyond tolerance");
        for (double& w : weights) w /= sum;
        return Spectrum(std::move(weights));
    }

    std::size_t size() const { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    const std::vector<double>& weights() const { return weights_; }

    double min_nonzero() const {
        double m = 1.0;
        for (double w : weights_)
            if (w > 0.0 && w < m) m = w;
        return m;
    }

  private:
    std::vector<double> weights_;
};

// Four weights in Bell order (Phi+, Phi-, Psi+, Psi-).
class BellDiagonalSpectrum {
  public:
    explicit BellDiagonalSpectrum(std::array<double, 4> weights)
        : spectrum_(std::vector<double>(weights.begin(), weights.end())) {}

    static BellDiagonalSpectrum normalized(std::array<double, 4> weights, double tol = 1e-9) {
        std::vector<double> w(weights.begin(), weights.end());
        Spectrum s = Spectrum::normalized(std::move(w), tol);
        return BellDiagonalSpectrum(
            {s.weights()[0], s.weights()[1], s.weights()[2], s.weights()[3]});
    }

    const Spectrum& spectrum() const { return spectrum_; }
    double operator[](std::size_t i) const { return spectrum_[i]; }

  private:
    Spectrum spectrum_;
};

// Bell basis in the fixed order Phi+ (0), Phi- (1), Psi+ (2), Psi- (3).
inline PureState bell_state(std::size_t k) {
    const double s = 1.0 / std::sqrt(2.0);
    switch (k) {
        case 0: return PureState({s, 0.0, 0.0, s}, {2, 2});
        case 1: return PureState({s, 0.0, 0.0, -s}, {2, 2});
        case 2: return PureState({0.0, s, s, 0.0}, {2, 2});
        case 3: return PureState({0.0, s, -s, 0.0}, {2, 2});
        default: throw contract_error("bell_state: index must be in 0..3");
    }
}

// Weighted orthogonal pure states on a common bipartition. The orthogonality
// check matches the eigen-decomposition origin of these ensembles; the
// `unchecked` factory admits general (non-orthogonal) mixtures for plain
// average-entanglement accounting.
class EnsembleDecomposition {
  public:
    EnsembleDecomposition(Spectrum spectrum, std::vector<PureState> states)
        : EnsembleDecomposition(std::move(spectrum), std::move(states), true) {}

    static EnsembleDecomposition unchecked(Spectrum spectrum, std::vector<PureState> states) {
        return EnsembleDecomposition(std::move(spectrum), std::move(states), false);
    }

    const Spectrum& spectrum() const { return spectrum_; }
    const std::vector<PureState>& states() const { return states_; }
    std::size_t size() const { return states_.size(); }
    const Dims& dims() const { return states_.front().dims(); }

  private:
    EnsembleDecomposition(Spectrum spectrum, std::vector<PureState> states, bool check_orthogonal)
        : spectrum_(std::move(spectrum)), states_(std::move(states)) {
        if (spectrum_.size() != states_.size())
            throw contract_error("EnsembleDecomposition: weight/state count mismatch");
        if (states_.empty()) throw contract_error("EnsembleDecomposition: empty ensemble");
        const Dims& d = states_.front().dims();
        if (d.size() != 2)
            throw contract_error("EnsembleDecomposition: states must carry a bipartition");
        for (const PureState& s : states_)
            if (s.dims() != d) throw contract_error("EnsembleDecomposition: inconsistent dims");
        if (check_orthogonal) {
            for (std::size_t i = 0; i < states_.size(); ++i)
                for (std::size_t j = i + 1; j < states_.size(); ++j)
                    if (std::abs(inner(states_[i], states_[j])) > 1e-10)
                        throw invalid_input(
                            "EnsembleDecomposition: states not pairwise orthogonal within 1e-10");
        }
    }

    Spectrum spectrum_;
    std::vector<PureState> states_;
};

inline EnsembleDecomposition bell_diagonal_ensemble(const BellDiagonalSpectrum& w) {
    std::vector<PureState> states;
    states.reserve(4);
    for (std::size_t k = 0; k < 4; ++k) states.push_back(bell_state(k));
    return EnsembleDecomposition(w.spectrum(), std::move(states));
}

inline DenseMatrix bell_diagonal_density(const BellDiagonalSpectrum& w) {
    DenseMatrix rho(4, 4);
    for (std::size_t k = 0; k < 4; ++k) {
        const DenseMatrix p = bell_state(k).projector();
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c) rho(r, c) += w[k] * p(r, c);
    }
    rho.set_dims({2, 2});
    return rho;
}

// Shannon entropy of the weights, in bits; 0 log 0 = 0.
inline double shannon_entropy(const Spectrum& s) {
    double h = 0.0;
    for (double w : s.weights()) h -= xlog2x(w);
    return h;
}

// Entropy of the eigenvalue spectrum of a density matrix, in bits.
// Eigenvalues in [-1e-10, 0) are clamped to 0 and the spectrum renormalized;
// anything more negative, or a trace off by more than 1e-6, is rejected.
inline double von_neumann_entropy(const DenseMatrix& rho) {
    if (!rho.square()) throw contract_error("von_neumann_entropy: matrix not square");
    const double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > 1e-6)
        throw invalid_input("von_neumann_entropy: trace deviates from 1 by more than 1e-6");
    EigResult eig = hermitian_eig(rho);
    double sum = 0.0;
    for (double& lam : eig.eigenvalues) {
        if (lam < -1e-10)
            throw invalid_input("von_neumann_entropy: eigenvalue below -1e-10");
        if (lam < 0.0) lam = 0.0;
        sum += lam;
    }
    double h = 0.0;
    for (double lam : eig.eigenvalues) h -= xlog2x(lam / sum);
    return h;
}

// Entanglement entropy of a bipartite pure state, in ebits.
inline double entanglement_entropy(const PureState& psi) {
    if (psi.dims().size() != 2)
        throw contract_error("entanglement_entropy: state must carry a bipartition");
    return von_neumann_entropy(partial_trace(psi.projector(), {0}));
}

// Average pure-state entanglement of the ensemble, sum_i lambda_i E(psi_i).
inline double ensemble_entanglement(const EnsembleDecomposition& e) {
    double total = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double w = e.spectrum()[i];
        if (w > 0.0) total += w * entanglement_entropy(e.states()[i]);
    }
    return total;
}

}  // namespace distinfo
