#include "support.hpp"

#include "distinfo/linalg.hpp"
#include "distinfo/states.hpp"

using namespace distinfo;
using Catch::Approx;

namespace {

DenseMatrix diag(std::vector<double> d) {
    DenseMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

// Permutation matrix reordering qubits of a 4-qubit register.
DenseMatrix qubit_permutation(const std::array<std::size_t, 4>& new_from_old) {
    DenseMatrix p(16, 16);
    for (std::size_t idx = 0; idx < 16; ++idx) {
        std::size_t out = 0;
        for (std::size_t q = 0; q < 4; ++q) {
            const std::size_t bit = (idx >> (3 - q)) & 1;
            out |= bit << (3 - new_from_old[q]);
        }
        p(out, idx) = 1.0;
    }
    return p;
}

}  // namespace

TEST_CASE("kron of identities and diagonals") {
    const DenseMatrix i2 = DenseMatrix::identity(2);
    CHECK(kron(i2, i2).max_abs_diff(DenseMatrix::identity(4)) == 0.0);
    CHECK(kron(diag({1, 0}), diag({0, 1})).max_abs_diff(diag({0, 1, 0, 0})) == 0.0);
}

TEST_CASE("kron concatenates dims") {
    const DenseMatrix m = kron(DenseMatrix::identity(2), DenseMatrix::identity(3));
    CHECK(m.dims() == Dims{2, 3});
}

TEST_CASE("kron associativity on random matrices") {
    Rng rng(11);
    for (int it = 0; it < 20; ++it) {
        const DenseMatrix a = testsup::random_complex_matrix(rng, 2, 2);
        const DenseMatrix b = testsup::random_complex_matrix(rng, 3, 2);
        const DenseMatrix c = testsup::random_complex_matrix(rng, 2, 3);
        CHECK(kron(kron(a, b), c).max_abs_diff(kron(a, kron(b, c))) < 1e-12);
    }
}

TEST_CASE("bilateral CNOT fixes two Phi+ pairs (dense matrix-vector route)") {
    // Pairs live on qubits (A1,B1) and (A2,B2); kron(CNOT, CNOT) acts on the
    // ordering (A1,A2,B1,B2), so conjugate by the reordering permutation.
    const DenseMatrix p = qubit_permutation({0, 2, 1, 3});  // (A1,B1,A2,B2) -> (A1,A2,B1,B2)
    const DenseMatrix u = p.adjoint() * kron(cnot_gate(), cnot_gate()) * p;
    const PureState in = kron(bell_state(0), bell_state(0));
    const std::vector<cplx> out = u.apply(in.amplitudes());
    for (std::size_t i = 0; i < 16; ++i)
        CHECK(std::abs(out[i] - in.amplitudes()[i]) < 1e-12);

    // Same evolution through apply_gate, as an independent code path.
    PureState via_gate = apply_gate(in, cnot_gate(), {0, 2});
    via_gate = apply_gate(via_gate, cnot_gate(), {1, 3});
    CHECK(std::abs(inner(via_gate, in)) == Approx(1.0).margin(1e-12));
}

TEST_CASE("apply_gate matches explicit matrix embedding") {
    Rng rng(7);
    const PureState psi = testsup::random_state(rng, {2, 2});
    const PureState via_gate = apply_gate(psi, hadamard_gate(), {1});
    const DenseMatrix embedded = kron(DenseMatrix::identity(2), hadamard_gate());
    const std::vector<cplx> via_matrix = embedded.apply(psi.amplitudes());
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(std::abs(via_gate.amplitudes()[i] - via_matrix[i]) < 1e-12);
}

TEST_CASE("partial trace of a Bell projector is maximally mixed") {
    const DenseMatrix red = partial_trace(bell_state(0).projector(), {0});
    CHECK(red.max_abs_diff(DenseMatrix::identity(2).scaled(0.5)) < 1e-12);
}

TEST_CASE("partial trace of a product basis state") {
    const PureState zero_zero = PureState::basis_state(0, {2, 2});
    DenseMatrix expect(2, 2);
    expect(0, 0) = 1.0;
    CHECK(partial_trace(zero_zero.projector(), {0}).max_abs_diff(expect) < 1e-12);
}

TEST_CASE("partial trace factorization law and trace preservation") {
    Rng rng(23);
    for (int it = 0; it < 10; ++it) {
        const DenseMatrix rho = testsup::random_complex_matrix(rng, 2, 2);
        const DenseMatrix sigma = testsup::random_complex_matrix(rng, 2, 2);
        const DenseMatrix joint = kron(rho, sigma);
        const DenseMatrix red = partial_trace(joint, {0});
        CHECK(red.max_abs_diff(rho.scaled(sigma.trace())) < 1e-12);
        CHECK(std::abs(partial_trace(joint, {1}).trace() - joint.trace()) < 1e-12);
    }
    // Non-qubit subsystem dims.
    DenseMatrix m = testsup::random_complex_matrix(rng, 6, 6);
    m.set_dims({2, 3});
    CHECK(std::abs(partial_trace(m, {0}).trace() - m.trace()) < 1e-12);
    CHECK(std::abs(partial_trace(m, {1}).trace() - m.trace()) < 1e-12);
}

TEST_CASE("partial trace requires dims metadata") {
    const DenseMatrix m = DenseMatrix::identity(4);
    CHECK_THROWS_AS(partial_trace(m, {0}), contract_error);
}

TEST_CASE("hermitian_eig on a diagonal matrix") {
    const EigResult r = hermitian_eig(diag({0.125, 0.5, 0.125, 0.25}));
    REQUIRE(r.eigenvalues.size() == 4);
    CHECK(r.eigenvalues[0] == Approx(0.5).margin(1e-12));
    CHECK(r.eigenvalues[1] == Approx(0.25).margin(1e-12));
    CHECK(r.eigenvalues[2] == Approx(0.125).margin(1e-12));
    CHECK(r.eigenvalues[3] == Approx(0.125).margin(1e-12));
}

TEST_CASE("hermitian_eig on a rank-1 projector recovers the state") {
    const EigResult r = hermitian_eig(bell_state(0).projector());
    CHECK(r.eigenvalues[0] == Approx(1.0).margin(1e-10));
    for (std::size_t i = 1; i < 4; ++i) CHECK(std::abs(r.eigenvalues[i]) < 1e-10);
    // Phase convention makes the comparison exact up to numerics.
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(std::abs(r.eigenvectors[0][i] - bell_state(0)[i]) < 1e-9);
}

TEST_CASE("hermitian_eig reconstructs random Hermitian matrices") {
    Rng rng(37);
    for (int it = 0; it < 5; ++it) {
        const DenseMatrix h = testsup::random_hermitian(rng, 8);
        const EigResult r = hermitian_eig(h);

        DenseMatrix rebuilt(8, 8);
        for (std::size_t k = 0; k < 8; ++k) {
            const DenseMatrix proj = r.eigenvectors[k].projector();
            for (std::size_t a = 0; a < 8; ++a)
                for (std::size_t b = 0; b < 8; ++b)
                    rebuilt(a, b) += r.eigenvalues[k] * proj(a, b);
        }
        DenseMatrix diff(8, 8);
        for (std::size_t a = 0; a < 8; ++a)
            for (std::size_t b = 0; b < 8; ++b) diff(a, b) = rebuilt(a, b) - h(a, b);
        CHECK(diff.frobenius_norm() < 1e-9);

        double sum = 0.0;
        for (double lam : r.eigenvalues) sum += lam;
        CHECK(sum == Approx(h.trace().real()).margin(1e-10));
        CHECK(std::is_sorted(r.eigenvalues.rbegin(), r.eigenvalues.rend()));

        for (std::size_t a = 0; a < 8; ++a)
            for (std::size_t b = 0; b < 8; ++b) {
                const cplx g = inner(r.eigenvectors[a], r.eigenvectors[b]);
                CHECK(std::abs(g - (a == b ? 1.0 : 0.0)) < 1e-9);
            }
    }
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
    DenseMatrix m = DenseMatrix::identity(2);
    m(0, 1) = 0.5;
    CHECK_THROWS_AS(hermitian_eig(m), invalid_input);
}

TEST_CASE("built-in gates are unitary") {
    CHECK(is_unitary(cnot_gate()));
    CHECK(is_unitary(hadamard_gate()));
    CHECK_FALSE(is_unitary(hadamard_gate().scaled(0.5)));
}

TEST_CASE("construction rejects non-finite entries") {
    CHECK_THROWS_AS(DenseMatrix(1, 1, {cplx{1.0 / 0.0, 0.0}}), invalid_input);
    CHECK_THROWS_AS(PureState({cplx{std::nan(""), 0.0}}, {1}), invalid_input);
}

TEST_CASE("pure state norm is validated") {
    CHECK_THROWS_AS(PureState({0.5, 0.5}, {2}), invalid_input);
    CHECK_NOTHROW(PureState::normalized({0.5, 0.5}, {2}));
}
