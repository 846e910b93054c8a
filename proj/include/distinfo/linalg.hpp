#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "distinfo/errors.hpp"

namespace distinfo {

using cplx = std::complex<double>;

inline bool is_finite(const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Subsystem factorization, most significant factor first. An index i into a
// space with dims (d0, d1, ...) decomposes as i = (((i0)*d1 + i1)*d2 + ...).
using Dims = std::vector<std::size_t>;

inline std::size_t dims_product(const Dims& dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

// Dense row-major complex matrix with optional subsystem metadata.
class DenseMatrix {
  public:
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols, cplx{0.0, 0.0}) {
        if (rows == 0 || cols == 0) throw contract_error("DenseMatrix: zero dimension");
    }

    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries, Dims dims = {})
        : rows_(rows), cols_(cols), entries_(std::move(entries)), dims_(std::move(dims)) {
        if (rows == 0 || cols == 0) throw contract_error("DenseMatrix: zero dimension");
        if (entries_.size() != rows_ * cols_)
            throw contract_error("DenseMatrix: entry count does not match shape");
        for (const cplx& z : entries_)
            if (!is_finite(z)) throw invalid_input("DenseMatrix: non-finite entry");
        if (!dims_.empty() && (dims_product(dims_) != rows_ || rows_ != cols_))
            throw contract_error("DenseMatrix: dims product must equal matrix order");
    }

    static DenseMatrix identity(std::size_t n, Dims dims = {}) {
        DenseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        m.dims_ = std::move(dims);
        if (!m.dims_.empty() && dims_product(m.dims_) != n)
            throw contract_error("identity: dims product must equal n");
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }
    const Dims& dims() const { return dims_; }
    void set_dims(Dims dims) {
        if (!dims.empty() && (dims_product(dims) != rows_ || rows_ != cols_))
            throw contract_error("set_dims: dims product must equal matrix order");
        dims_ = std::move(dims);
    }

    cplx& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
    const std::vector<cplx>& entries() const { return entries_; }

    DenseMatrix adjoint() const {
        DenseMatrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
        out.dims_ = dims_;
        return out;
    }

    cplx trace() const {
        if (!square()) throw contract_error("trace: matrix not square");
        cplx t = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const cplx& z : entries_) s += std::norm(z);
        return std::sqrt(s);
    }

    DenseMatrix operator*(const DenseMatrix& rhs) const {
        if (cols_ != rhs.rows_) throw contract_error("matrix product: shape mismatch");
        DenseMatrix out(rows_, rhs.cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t k = 0; k < cols_; ++k) {
                const cplx a = (*this)(r, k);
                if (a == cplx{}) continue;
                for (std::size_t c = 0; c < rhs.cols_; ++c) out(r, c) += a * rhs(k, c);
            }
        return out;
    }

    std::vector<cplx> apply(const std::vector<cplx>& v) const {
        if (v.size() != cols_) throw contract_error("matrix apply: length mismatch");
        std::vector<cplx> out(rows_, cplx{});
        for (std::size_t r = 0; r < rows_; ++r) {
            cplx acc = 0.0;
            for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * v[c];
            out[r] = acc;
        }
        return out;
    }

    DenseMatrix scaled(cplx factor) const {
        DenseMatrix out = *this;
        for (cplx& z : out.entries_) z *= factor;
        return out;
    }

    double max_abs_diff(const DenseMatrix& other) const {
        if (rows_ != other.rows_ || cols_ != other.cols_)
            throw contract_error("max_abs_diff: shape mismatch");
        double worst = 0.0;
        for (std::size_t i = 0; i < entries_.size(); ++i)
            worst = std::max(worst, std::abs(entries_[i] - other.entries_[i]));
        return worst;
    }

  private:
    std::size_t rows_, cols_;
    std::vector<cplx> entries_;
    Dims dims_;
};

// Unit-norm state vector with subsystem metadata ([d_A, d_B] when bipartite).
class PureState {
  public:
    PureState(std::vector<cplx> amplitudes, Dims dims)
        : amplitudes_(std::move(amplitudes)), dims_(std::move(dims)) {
        if (amplitudes_.empty()) throw contract_error("PureState: empty amplitude vector");
        if (!dims_.empty() && dims_product(dims_) != amplitudes_.size())
            throw contract_error("PureState: dims product must equal dimension");
        double n2 = 0.0;
        for (const cplx& a : amplitudes_) {
            if (!is_finite(a)) throw invalid_input("PureState: non-finite amplitude");
            n2 += std::norm(a);
        }
        if (std::abs(std::sqrt(n2) - 1.0) > 1e-12)
            throw invalid_input("PureState: norm deviates from 1 by more than 1e-12");
    }

    static PureState normalized(std::vector<cplx> amplitudes, Dims dims) {
        double n2 = 0.0;
        for (const cplx& a : amplitudes) n2 += std::norm(a);
        if (n2 <= 0.0 || !std::isfinite(n2))
            throw invalid_input("PureState::normalized: zero or non-finite vector");
        const double inv = 1.0 / std::sqrt(n2);
        for (cplx& a : amplitudes) a *= inv;
        return PureState(std::move(amplitudes), std::move(dims));
    }

    static PureState basis_state(std::size_t index, Dims dims) {
        std::vector<cplx> amps(dims_product(dims), cplx{});
        if (index >= amps.size()) throw contract_error("basis_state: index out of range");
        amps[index] = 1.0;
        return PureState(std::move(amps), std::move(dims));
    }

    std::size_t dim() const { return amplitudes_.size(); }
    const Dims& dims() const { return dims_; }
    const std::vector<cplx>& amplitudes() const { return amplitudes_; }
    const cplx& operator[](std::size_t i) const { return amplitudes_[i]; }

    // |psi><psi| as a dense matrix carrying the same dims metadata.
    DenseMatrix projector() const {
        const std::size_t n = dim();
        DenseMatrix out(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                out(r, c) = amplitudes_[r] * std::conj(amplitudes_[c]);
        out.set_dims(dims_);
        return out;
    }

  private:
    std::vector<cplx> amplitudes_;
    Dims dims_;
};

inline cplx inner(const PureState& a, const PureState& b) {
    if (a.dim() != b.dim()) throw contract_error("inner: dimension mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

inline DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar)
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const cplx f = a(ar, ac);
            if (f == cplx{}) continue;
            for (std::size_t br = 0; br < b.rows(); ++br)
                for (std::size_t bc = 0; bc < b.cols(); ++bc) {
                    const cplx v = f * b(br, bc);
                    if (!is_finite(v)) throw invalid_input("kron: non-finite product entry");
                    out(ar * b.rows() + br, ac * b.cols() + bc) = v;
                }
        }
    if (out.square()) {
        Dims d;
        const Dims da = a.dims().empty() && a.square() ? Dims{a.rows()} : a.dims();
        const Dims db = b.dims().empty() && b.square() ? Dims{b.rows()} : b.dims();
        if (!da.empty() && !db.empty()) {
            d = da;
            d.insert(d.end(), db.begin(), db.end());
            out.set_dims(d);
        }
    }
    return out;
}

inline PureState kron(const PureState& a, const PureState& b) {
    std::vector<cplx> amps(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) amps[i * b.dim() + j] = a[i] * b[j];
    Dims d = a.dims();
    d.insert(d.end(), b.dims().begin(), b.dims().end());
    return PureState(std::move(amps), std::move(d));
}

// Reduced matrix on the kept subsystems (original order); trace preserved.
inline DenseMatrix partial_trace(const DenseMatrix& m, const std::vector<std::size_t>& keep) {
    if (!m.square()) throw contract_error("partial_trace: matrix not square");
    const Dims& dims = m.dims();
    if (dims.empty()) throw contract_error("partial_trace: missing dims metadata");
    std::vector<bool> kept(dims.size(), false);
    for (std::size_t k : keep) {
        if (k >= dims.size()) throw contract_error("partial_trace: keep index out of range");
        kept[k] = true;
    }

    Dims keep_dims, trace_dims;
    for (std::size_t i = 0; i < dims.size(); ++i)
        (kept[i] ? keep_dims : trace_dims).push_back(dims[i]);
    const std::size_t nk = dims_product(keep_dims);
    const std::size_t nt = dims_product(trace_dims);

    // Composes a full multi-index from kept digits and traced digits.
    auto full_index = [&](std::size_t ki, std::size_t ti) {
        std::vector<std::size_t> kd(keep_dims.size()), td(trace_dims.size());
        for (std::size_t i = keep_dims.size(); i-- > 0;) {
            kd[i] = ki % keep_dims[i];
            ki /= keep_dims[i];
        }
        for (std::size_t i = trace_dims.size(); i-- > 0;) {
            td[i] = ti % trace_dims[i];
            ti /= trace_dims[i];
        }
        std::size_t idx = 0, a = 0, b = 0;
        for (std::size_t i = 0; i < dims.size(); ++i)
            idx = idx * dims[i] + (kept[i] ? kd[a++] : td[b++]);
        return idx;
    };

    DenseMatrix out(nk, nk);
    for (std::size_t r = 0; r < nk; ++r)
        for (std::size_t c = 0; c < nk; ++c) {
            cplx acc = 0.0;
            for (std::size_t t = 0; t < nt; ++t) acc += m(full_index(r, t), full_index(c, t));
            out(r, c) = acc;
        }
    out.set_dims(keep_dims);
    return out;
}

struct EigResult {
    std::vector<double> eigenvalues;   // descending
    std::vector<PureState> eigenvectors;
};

// Cyclic Jacobi for complex Hermitian matrices. Each (p,q) rotation factors
// the pivot's phase out first, then applies the classic real rotation.
// Cap: 100 sweeps; convergence: off-diagonal Frobenius norm below
// 1e-12 * max(1, ||m||_F).
inline EigResult hermitian_eig(const DenseMatrix& m) {
    if (!m.square()) throw contract_error("hermitian_eig: matrix not square");
    const std::size_t n = m.rows();
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = r; c < n; ++c)
            if (std::abs(m(r, c) - std::conj(m(c, r))) > 1e-10)
                throw invalid_input("hermitian_eig: input deviates from Hermitian by > 1e-10");

    DenseMatrix a = m;
    DenseMatrix v = DenseMatrix::identity(n);
    const double tol = 1e-12 * std::max(1.0, m.frobenius_norm());

    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                if (r != c) s += std::norm(a(r, c));
        return std::sqrt(s);
    };

    bool converged = (off_norm() <= tol);
    for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double babs = std::abs(apq);
                if (babs < 1e-300) continue;
                const cplx phase = apq / babs;  // a(p,q) = babs * phase
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * babs);
                const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                              : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // Pair unitary U: col p = (c, -s*conj(phase)), col q = (s, c*conj(phase)).
                const cplx up = -s * std::conj(phase);
                const cplx uq = c * std::conj(phase);
                for (std::size_t i = 0; i < n; ++i) {  // A <- A U
                    const cplx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = aip * c + aiq * up;
                    a(i, q) = aip * s + aiq * uq;
                }
                for (std::size_t j = 0; j < n; ++j) {  // A <- U^H A
                    const cplx apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj - s * phase * aqj;
                    a(q, j) = s * apj + c * phase * aqj;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t i = 0; i < n; ++i) {  // V <- V U
                    const cplx vip = v(i, p), viq = v(i, q);
                    v(i, p) = vip * c + viq * up;
                    v(i, q) = vip * s + viq * uq;
                }
            }
        converged = (off_norm() <= tol);
    }
    if (!converged) throw numerical_error("hermitian_eig: no convergence within 100 sweeps");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    EigResult res;
    res.eigenvalues.reserve(n);
    res.eigenvectors.reserve(n);
    for (std::size_t rank = 0; rank < n; ++rank) {
        const std::size_t col = order[rank];
        res.eigenvalues.push_back(a(col, col).real());
        std::vector<cplx> vec(n);
        for (std::size_t i = 0; i < n; ++i) vec[i] = v(i, col);
        // Phase convention: largest-magnitude component made real nonnegative.
        std::size_t imax = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(vec[i]) > std::abs(vec[imax])) imax = i;
        const double mag = std::abs(vec[imax]);
        if (mag > 0.0) {
            const cplx rot = std::conj(vec[imax]) / mag;
            for (cplx& z : vec) z *= rot;
        }
        res.eigenvectors.push_back(PureState::normalized(std::move(vec), m.dims()));
    }
    return res;
}

inline bool is_unitary(const DenseMatrix& u, double tol = 1e-12) {
    if (!u.square()) return false;
    const DenseMatrix prod = u.adjoint() * u;
    return prod.max_abs_diff(DenseMatrix::identity(u.rows())) <= tol;
}

// -- standard gates ----------------------------------------------------------

inline DenseMatrix hadamard_gate() {
    const double s = 1.0 / std::sqrt(2.0);
    return DenseMatrix(2, 2, {s, s, s, -s});
}

// Control on the first (most significant) of the two qubits it acts on.
inline DenseMatrix cnot_gate() {
    return DenseMatrix(4, 4,
                       {1, 0, 0, 0,
                        0, 1, 0, 0,
                        0, 0, 0, 1,
                        0, 0, 1, 0});
}

// Applies a k-qubit gate to the listed qubit positions of an n-qubit state.
// Qubit 0 is the most significant index digit; `targets` order matches the
// gate's own qubit order.
inline PureState apply_gate(const PureState& state, const DenseMatrix& gate,
                            const std::vector<std::size_t>& targets) {
    const std::size_t n_qubits = state.dims().size();
    for (std::size_t d : state.dims())
        if (d != 2) throw contract_error("apply_gate: state is not a qubit register");
    const std::size_t k = targets.size();
    if (gate.rows() != (std::size_t{1} << k) || !gate.square())
        throw contract_error("apply_gate: gate order does not match target count");
    std::size_t target_mask = 0;
    std::vector<std::size_t> shifts(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (targets[i] >= n_qubits) throw contract_error("apply_gate: target out of range");
        shifts[i] = n_qubits - 1 - targets[i];
        if (target_mask & (std::size_t{1} << shifts[i]))
            throw contract_error("apply_gate: duplicate target");
        target_mask |= std::size_t{1} << shifts[i];
    }

    std::vector<cplx> amps = state.amplitudes();
    const std::size_t dim = amps.size();
    const std::size_t sub = std::size_t{1} << k;
    std::vector<cplx> in(sub), out(sub);
    for (std::size_t base = 0; base < dim; ++base) {
        if (base & target_mask) continue;
        for (std::size_t s = 0; s < sub; ++s) {
            std::size_t idx = base;
            for (std::size_t i = 0; i < k; ++i)
                if (s & (std::size_t{1} << (k - 1 - i))) idx |= std::size_t{1} << shifts[i];
            in[s] = amps[idx];
        }
        for (std::size_t r = 0; r < sub; ++r) {
            cplx acc = 0.0;
            for (std::size_t c = 0; c < sub; ++c) acc += gate(r, c) * in[c];
            out[r] = acc;
        }
        for (std::size_t s = 0; s < sub; ++s) {
            std::size_t idx = base;
            for (std::size_t i = 0; i < k; ++i)
                if (s & (std::size_t{1} << (k - 1 - i))) idx |= std::size_t{1} << shifts[i];
            amps[idx] = out[s];
        }
    }
    return PureState(std::move(amps), state.dims());
}

}  // namespace distinfo
