#pragma once

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "distinfo/linalg.hpp"
#include "distinfo/measurement.hpp"
#include "distinfo/rng.hpp"
#include "distinfo/states.hpp"

namespace testsup {

using namespace distinfo;

inline std::vector<double> random_weights(Rng& rng, std::size_t m) {
    std::vector<double> w(m);
    double sum = 0.0;
    for (double& x : w) {
        x = rng.uniform01() + 1e-3;
        sum += x;
    }
    for (double& x : w) x /= sum;
    return w;
}

inline PureState random_state(Rng& rng, const Dims& dims) {
    std::vector<cplx> amps(dims_product(dims));
    for (cplx& a : amps) a = cplx{rng.uniform01() - 0.5, rng.uniform01() - 0.5};
    return PureState::normalized(std::move(amps), dims);
}

inline DenseMatrix random_complex_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
    DenseMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = cplx{rng.uniform01() - 0.5, rng.uniform01() - 0.5};
    return m;
}

inline DenseMatrix random_hermitian(Rng& rng, std::size_t n) {
    DenseMatrix a = random_complex_matrix(rng, n, n);
    DenseMatrix h(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) h(r, c) = 0.5 * (a(r, c) + std::conj(a(c, r)));
    return h;
}

// Gram-Schmidt on the columns of a random matrix.
inline DenseMatrix random_unitary(Rng& rng, std::size_t n) {
    DenseMatrix a = random_complex_matrix(rng, n, n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t prev = 0; prev < c; ++prev) {
            cplx overlap = 0.0;
            for (std::size_t r = 0; r < n; ++r) overlap += std::conj(a(r, prev)) * a(r, c);
            for (std::size_t r = 0; r < n; ++r) a(r, c) -= overlap * a(r, prev);
        }
        double norm = 0.0;
        for (std::size_t r = 0; r < n; ++r) norm += std::norm(a(r, c));
        norm = std::sqrt(norm);
        for (std::size_t r = 0; r < n; ++r) a(r, c) /= norm;
    }
    return a;
}

// Orthogonal ensemble on [2,2]: k columns of a random 4x4 unitary.
inline EnsembleDecomposition random_ensemble(Rng& rng, std::size_t k) {
    DenseMatrix u = random_unitary(rng, 4);
    std::vector<PureState> states;
    for (std::size_t c = 0; c < k; ++c) {
        std::vector<cplx> amps(4);
        for (std::size_t r = 0; r < 4; ++r) amps[r] = u(r, c);
        states.push_back(PureState::normalized(std::move(amps), {2, 2}));
    }
    return EnsembleDecomposition(Spectrum(random_weights(rng, k)), std::move(states));
}

inline ProductBasis random_product_basis(Rng& rng) {
    std::array<double, 6> angles{};
    for (double& a : angles) a = rng.uniform01() * 6.283185307179586;
    return split_product_basis(rng.coin() ? SplitSide::A : SplitSide::B, angles);
}

// -- driving the CLI binary ----------------------------------------------------

struct CliResult {
    int exit_code = -1;
    std::string out;
};

inline std::string cli_path() {
    const char* p = std::getenv("DISTINFO_CLI");
    REQUIRE(p != nullptr);
    return p;
}

inline CliResult run_cli(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult res;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) res.out.append(buf, got);
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

inline std::string read_file(const std::string& path) {
    FILE* f = std::fopen(path.c_str(), "rb");
    REQUIRE(f != nullptr);
    std::string content;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof(buf), f)) > 0) content.append(buf, got);
    std::fclose(f);
    return content;
}

}  // namespace testsup
