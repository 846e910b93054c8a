#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "distinfo/errors.hpp"
#include "distinfo/linalg.hpp"
#include "distinfo/rng.hpp"
#include "distinfo/states.hpp"

namespace distinfo {

// Orthonormal basis of the joint space in which every vector is a product
// a_j (x) b_j. Joint orthonormality is the invariant; the local parts are
// free (a "mixed" product basis need not be a tensor of two local bases).
class ProductBasis {
  public:
    ProductBasis(Dims dims, std::vector<std::pair<PureState, PureState>> parts)
        : dims_(std::move(dims)), parts_(std::move(parts)) {
        if (dims_.size() != 2) throw contract_error("ProductBasis: dims must be bipartite");
        if (parts_.size() != dims_[0] * dims_[1])
            throw contract_error("ProductBasis: wrong number of vectors");
        joint_.reserve(parts_.size());
        for (const auto& [a, b] : parts_) {
            if (a.dim() != dims_[0] || b.dim() != dims_[1])
                throw contract_error("ProductBasis: local dimensions do not match dims");
            joint_.push_back(kron(a, b));
        }
        for (std::size_t i = 0; i < joint_.size(); ++i)
            for (std::size_t j = i; j < joint_.size(); ++j) {
                const double g = std::abs(inner(joint_[i], joint_[j]));
                const double want = i == j ? 1.0 : 0.0;
                if (std::abs(g - want) > 1e-10)
                    throw invalid_input("ProductBasis: joint vectors not orthonormal within 1e-10");
            }
    }

    static ProductBasis computational(std::size_t d_a, std::size_t d_b) {
        std::vector<std::pair<PureState, PureState>> parts;
        parts.reserve(d_a * d_b);
        for (std::size_t i = 0; i < d_a; ++i)
            for (std::size_t j = 0; j < d_b; ++j)
                parts.emplace_back(PureState::basis_state(i, {d_a}),
                                   PureState::basis_state(j, {d_b}));
        return ProductBasis({d_a, d_b}, std::move(parts));
    }

    const Dims& dims() const { return dims_; }
    std::size_t size() const { return parts_.size(); }
    const std::vector<std::pair<PureState, PureState>>& parts() const { return parts_; }
    const PureState& joint(std::size_t j) const { return joint_[j]; }

  private:
    Dims dims_;
    std::vector<std::pair<PureState, PureState>> parts_;
    std::vector<PureState> joint_;
};

// Orthonormal qubit frame {u0, u1} from two angles; global phases dropped.
inline std::pair<PureState, PureState> qubit_frame(double theta, double phi) {
    const double c = std::cos(theta), s = std::sin(theta);
    const cplx e_plus{std::cos(phi), std::sin(phi)};
    const cplx e_minus = std::conj(e_plus);
    PureState u0({c, s * e_plus}, {2});
    PureState u1({-s * e_minus, c}, {2});
    return {std::move(u0), std::move(u1)};
}

// Every orthonormal product basis of two qubits splits on one side: the
// splitting side contributes a single frame, the other side one frame per
// branch. Angles order: (theta_s, phi_s, theta_0, phi_0, theta_1, phi_1).
enum class SplitSide { A, B };

inline ProductBasis split_product_basis(SplitSide side, const std::array<double, 6>& angles) {
    auto [s0, s1] = qubit_frame(angles[0], angles[1]);
    auto [p00, p01] = qubit_frame(angles[2], angles[3]);
    auto [p10, p11] = qubit_frame(angles[4], angles[5]);
    std::vector<std::pair<PureState, PureState>> parts;
    if (side == SplitSide::A) {
        parts.emplace_back(s0, p00);
        parts.emplace_back(s0, p01);
        parts.emplace_back(s1, p10);
        parts.emplace_back(s1, p11);
    } else {
        parts.emplace_back(p00, s0);
        parts.emplace_back(p01, s0);
        parts.emplace_back(p10, s1);
        parts.emplace_back(p11, s1);
    }
    return ProductBasis({2, 2}, std::move(parts));
}

// Outcome statistics of measuring one pair drawn from the ensemble.
//   outcome_probs[j]      P_j  = sum_i lambda_i |<v_j|psi_i>|^2
//   indication_sets[j]    S_j  = { i : |<v_j|psi_i>|^2 > tol }
//   indication_masses[j]  P'_j = sum_{i in S_j} lambda_i
//   average_di            -sum_j P_j log2 P'_j   (bits)
struct DIReport {
    std::vector<double> outcome_probs;
    std::vector<std::vector<std::size_t>> indication_sets;
    std::vector<double> indication_masses;
    double average_di = 0.0;
};

inline DIReport di_report(const EnsembleDecomposition& e, const ProductBasis& basis,
                          double tol = 1e-9) {
    if (e.dims() != basis.dims()) throw contract_error("di_report: dims mismatch");
    if (!(tol > 0.0) || tol > 1e-4) throw contract_error("di_report: tol must be in (0, 1e-4]");

    const std::size_t n_out = basis.size();
    const std::size_t n_states = e.size();
    DIReport rep;
    rep.outcome_probs.assign(n_out, 0.0);
    rep.indication_sets.assign(n_out, {});
    rep.indication_masses.assign(n_out, 0.0);

    for (std::size_t j = 0; j < n_out; ++j) {
        double pj = 0.0;
        for (std::size_t i = 0; i < n_states; ++i) {
            const double p_cond = std::norm(inner(basis.joint(j), e.states()[i]));
            pj += e.spectrum()[i] * p_cond;
            if (p_cond > tol) {
                rep.indication_sets[j].push_back(i);
                rep.indication_masses[j] += e.spectrum()[i];
            }
        }
        rep.outcome_probs[j] = pj;
        if (pj > tol && rep.indication_sets[j].empty())
            throw numerical_error("di_report: outcome with mass but empty indication set");
        if (pj > 0.0 && !rep.indication_sets[j].empty())
            rep.average_di -= pj * std::log2(rep.indication_masses[j]);
    }
    // Indication masses summed in floating point can land a hair above 1.
    if (rep.average_di < 0.0 && rep.average_di > -1e-12) rep.average_di = 0.0;
    return rep;
}

struct ConditionResult {
    bool satisfied = false;
    double margin = 0.0;  // idmax_bits - s_bits
};

// Distinguishability condition: the likely strings are identifiable iff the
// maximal per-pair DI covers the source entropy.
inline ConditionResult distinguishability_condition(double s_bits, double idmax_bits) {
    if (!(s_bits >= 0.0) || !(idmax_bits >= 0.0))
        throw contract_error("distinguishability_condition: inputs must be nonnegative");
    return ConditionResult{idmax_bits >= s_bits, idmax_bits - s_bits};
}

namespace detail {

// Nelder-Mead on a fixed-dimension objective; returns the best point found.
// Convergence: simplex f-spread below f_tol, or eval cap.
template <std::size_t N>
std::pair<std::array<double, N>, double> nelder_mead(
    const std::function<double(const std::array<double, N>&)>& f, std::array<double, N> start,
    double step, double f_tol, std::size_t max_evals) {
    constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    struct Vertex {
        std::array<double, N> x;
        double fx;
    };
    std::vector<Vertex> simplex;
    simplex.reserve(N + 1);
    std::size_t evals = 0;
    auto eval = [&](const std::array<double, N>& x) {
        ++evals;
        return f(x);
    };
    simplex.push_back({start, eval(start)});
    for (std::size_t i = 0; i < N; ++i) {
        std::array<double, N> x = start;
        x[i] += step;
        simplex.push_back({x, eval(x)});
    }
    auto by_f = [](const Vertex& a, const Vertex& b) { return a.fx < b.fx; };
    while (evals < max_evals) {
        std::sort(simplex.begin(), simplex.end(), by_f);
        if (simplex.back().fx - simplex.front().fx < f_tol) break;

        std::array<double, N> centroid{};
        for (std::size_t v = 0; v < N; ++v)
            for (std::size_t i = 0; i < N; ++i) centroid[i] += simplex[v].x[i] / N;

        auto blend = [&](double coef) {
            std::array<double, N> x;
            for (std::size_t i = 0; i < N; ++i)
                x[i] = centroid[i] + coef * (centroid[i] - simplex.back().x[i]);
            return x;
        };

        const std::array<double, N> xr = blend(alpha);
        const double fr = eval(xr);
        if (fr < simplex.front().fx) {
            const std::array<double, N> xe = blend(gamma);
            const double fe = eval(xe);
            simplex.back() = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
        } else if (fr < simplex[N - 1].fx) {
            simplex.back() = {xr, fr};
        } else {
            const std::array<double, N> xc = blend(-rho);
            const double fc = eval(xc);
            if (fc < simplex.back().fx) {
                simplex.back() = {xc, fc};
            } else {
                for (std::size_t v = 1; v <= N; ++v) {
                    for (std::size_t i = 0; i < N; ++i)
                        simplex[v].x[i] =
                            simplex[0].x[i] + sigma * (simplex[v].x[i] - simplex[0].x[i]);
                    simplex[v].fx = eval(simplex[v].x);
                }
            }
        }
    }
    std::sort(simplex.begin(), simplex.end(), by_f);
    return {simplex.front().x, simplex.front().fx};
}

}  // namespace detail

struct OptimizeResult {
    ProductBasis best_basis;
    double best_di = 0.0;
    std::size_t restarts = 0;
    std::uint64_t seed = 0;
};

// Multi-start direct search for the best single-pair product measurement.
// Restart 0 (and 1) start from the computational basis with the split on
// either side, so the canonical witness is always probed; later restarts are
// random. The value returned is a lower bound on I_dmax within this class.
inline OptimizeResult optimize_di(const EnsembleDecomposition& e, std::size_t restarts,
                                  std::uint64_t seed, double indication_tol = 1e-9) {
    if (e.dims() != Dims{2, 2})
        throw contract_error("optimize_di: only qubit pairs (dims [2,2]) are supported");
    if (restarts == 0) throw contract_error("optimize_di: restarts must be >= 1");

    double best_di = -1.0;
    std::array<double, 6> best_angles{};
    SplitSide best_side = SplitSide::A;

    for (std::size_t r = 0; r < restarts; ++r) {
        const SplitSide side = (r % 2 == 0) ? SplitSide::A : SplitSide::B;
        std::array<double, 6> start{};
        if (r >= 2) {
            Rng rng(mix_seed(seed, r));
            constexpr double two_pi = 6.283185307179586;
            for (double& a : start) a = rng.uniform01() * two_pi;
        }
        auto objective = [&](const std::array<double, 6>& angles) {
            return -di_report(e, split_product_basis(side, angles), indication_tol).average_di;
        };
        auto [angles, neg_di] =
            detail::nelder_mead<6>(objective, start, 0.4, 1e-8, 10000);
        const double di = -neg_di;
        if (di > best_di) {
            best_di = di;
            best_angles = angles;
            best_side = side;
        }
    }
    return OptimizeResult{split_product_basis(best_side, best_angles), best_di, restarts, seed};
}

}  // namespace distinfo
