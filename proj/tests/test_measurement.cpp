#include <array>

#include "support.hpp"

#include "distinfo/measurement.hpp"
#include "distinfo/states.hpp"

using namespace distinfo;
using Catch::Approx;

namespace {

constexpr double kH2ThreeQuarters = 0.81127812445913286;
constexpr double kThreeBellDi = 0.91829583405448951;  // lg3 - 2/3
constexpr double kLog2Three = 1.58496250072115618;
constexpr double kQuarterPi = 0.78539816339744831;

EnsembleDecomposition three_bell_states() {
    const double third = 1.0 / 3.0;
    return EnsembleDecomposition(Spectrum::normalized({third, third, third}),
                                 {bell_state(0), bell_state(1), bell_state(2)});
}

ProductBasis xx_basis() {
    return split_product_basis(SplitSide::A,
                               {kQuarterPi, 0.0, kQuarterPi, 0.0, kQuarterPi, 0.0});
}

}  // namespace

TEST_CASE("computational basis is a valid product basis") {
    const ProductBasis b = ProductBasis::computational(2, 2);
    CHECK(b.size() == 4);
    CHECK(std::abs(b.joint(0)[0] - 1.0) < 1e-15);
}

TEST_CASE("split parameterization always yields orthonormal product bases") {
    Rng rng(13);
    for (int it = 0; it < 50; ++it) CHECK_NOTHROW(testsup::random_product_basis(rng));
}

TEST_CASE("DI of a Bell-diagonal ensemble in the computational basis") {
    const EnsembleDecomposition e =
        bell_diagonal_ensemble(BellDiagonalSpectrum({0.5, 0.25, 0.125, 0.125}));
    const DIReport rep = di_report(e, ProductBasis::computational(2, 2));

    // Outcomes in order |00>, |01>, |10>, |11>.
    CHECK(rep.outcome_probs[0] == Approx(0.375).margin(1e-12));
    CHECK(rep.outcome_probs[1] == Approx(0.125).margin(1e-12));
    CHECK(rep.outcome_probs[2] == Approx(0.125).margin(1e-12));
    CHECK(rep.outcome_probs[3] == Approx(0.375).margin(1e-12));
    CHECK(rep.indication_sets[0] == std::vector<std::size_t>{0, 1});
    CHECK(rep.indication_sets[1] == std::vector<std::size_t>{2, 3});
    CHECK(rep.indication_masses[0] == Approx(0.75).margin(1e-12));
    CHECK(rep.indication_masses[1] == Approx(0.25).margin(1e-12));
    CHECK(rep.average_di == Approx(kH2ThreeQuarters).margin(1e-12));
}

TEST_CASE("DI closed form H2(l1+l2) holds across random Bell-diagonal spectra") {
    Rng rng(19);
    const ProductBasis comp = ProductBasis::computational(2, 2);
    for (int it = 0; it < 100; ++it) {
        const std::vector<double> w = testsup::random_weights(rng, 4);
        const EnsembleDecomposition e =
            bell_diagonal_ensemble(BellDiagonalSpectrum({w[0], w[1], w[2], w[3]}));
        const double expect = -xlog2x(w[0] + w[1]) - xlog2x(w[2] + w[3]);
        CHECK(di_report(e, comp).average_di == Approx(expect).margin(1e-12));
    }
}

TEST_CASE("single-state ensembles carry no distinguishable information") {
    const EnsembleDecomposition e(Spectrum({1.0}), {bell_state(0)});
    CHECK(di_report(e, ProductBasis::computational(2, 2)).average_di == 0.0);
    CHECK(di_report(e, xx_basis()).average_di == 0.0);
    Rng rng(43);
    CHECK(di_report(e, testsup::random_product_basis(rng)).average_di == 0.0);
}

TEST_CASE("three Bell states in the computational basis") {
    const DIReport rep = di_report(three_bell_states(), ProductBasis::computational(2, 2));
    CHECK(rep.outcome_probs[0] == Approx(1.0 / 3.0).margin(1e-12));
    CHECK(rep.outcome_probs[1] == Approx(1.0 / 6.0).margin(1e-12));
    CHECK(rep.indication_masses[0] == Approx(2.0 / 3.0).margin(1e-12));
    CHECK(rep.indication_masses[1] == Approx(1.0 / 3.0).margin(1e-12));
    CHECK(rep.average_di == Approx(kThreeBellDi).margin(1e-12));
}

TEST_CASE("di_report rejects mismatched dims and out-of-range tolerances") {
    const EnsembleDecomposition e(Spectrum({1.0}), {bell_state(0)});
    CHECK_THROWS_AS(di_report(e, ProductBasis::computational(2, 3)), contract_error);
    CHECK_THROWS_AS(di_report(e, ProductBasis::computational(2, 2), 0.0), contract_error);
    CHECK_THROWS_AS(di_report(e, ProductBasis::computational(2, 2), 1e-3), contract_error);
}

TEST_CASE("outcome probabilities are a distribution; per-state overlaps sum to 1") {
    Rng rng(53);
    for (int it = 0; it < 20; ++it) {
        const EnsembleDecomposition e = testsup::random_ensemble(rng, 1 + rng.below(4));
        const ProductBasis b = testsup::random_product_basis(rng);
        const DIReport rep = di_report(e, b);

        double sum = 0.0;
        for (double p : rep.outcome_probs) sum += p;
        CHECK(sum == Approx(1.0).margin(1e-10));

        for (std::size_t i = 0; i < e.size(); ++i) {
            double per_state = 0.0;
            for (std::size_t j = 0; j < b.size(); ++j)
                per_state += std::norm(inner(b.joint(j), e.states()[i]));
            CHECK(per_state == Approx(1.0).margin(1e-10));
        }
    }
}

TEST_CASE("DI never exceeds the outcome entropy") {
    Rng rng(59);
    for (int it = 0; it < 30; ++it) {
        const EnsembleDecomposition e = testsup::random_ensemble(rng, 1 + rng.below(4));
        const ProductBasis b = testsup::random_product_basis(rng);
        const DIReport rep = di_report(e, b);
        double outcome_entropy = 0.0;
        for (double p : rep.outcome_probs) outcome_entropy -= xlog2x(p);
        CHECK(rep.average_di <= outcome_entropy + 1e-10);
        CHECK(outcome_entropy <= 2.0 + 1e-10);
        CHECK(rep.average_di >= 0.0);
    }
}

TEST_CASE("DI vanishes when every outcome indicates the whole ensemble") {
    // Both states overlap every computational outcome, so no outcome narrows
    // anything down.
    const PureState u({0.5, 0.5, 0.5, 0.5}, {2, 2});
    const PureState v({0.5, -0.5, 0.5, -0.5}, {2, 2});
    const EnsembleDecomposition e(Spectrum({0.5, 0.5}), {u, v});
    const DIReport rep = di_report(e, ProductBasis::computational(2, 2));
    for (const auto& set : rep.indication_sets) CHECK(set.size() == 2);
    CHECK(rep.average_di == 0.0);
}

TEST_CASE("DI report is covariant under shared local unitaries") {
    Rng rng(61);
    for (int it = 0; it < 10; ++it) {
        const EnsembleDecomposition e = testsup::random_ensemble(rng, 3);
        const ProductBasis b = testsup::random_product_basis(rng);
        const DenseMatrix ua = testsup::random_unitary(rng, 2);
        const DenseMatrix ub = testsup::random_unitary(rng, 2);

        auto rotate_state = [&](const PureState& s, const DenseMatrix& u) {
            return PureState::normalized(u.apply(s.amplitudes()), s.dims());
        };
        std::vector<PureState> rotated_states;
        for (const PureState& s : e.states())
            rotated_states.push_back(
                rotate_state(s, kron(ua, ub)));
        const EnsembleDecomposition e2(e.spectrum(), rotated_states);

        std::vector<std::pair<PureState, PureState>> rotated_parts;
        for (const auto& [a, bb] : b.parts())
            rotated_parts.emplace_back(rotate_state(a, ua), rotate_state(bb, ub));
        const ProductBasis b2({2, 2}, std::move(rotated_parts));

        const DIReport r1 = di_report(e, b);
        const DIReport r2 = di_report(e2, b2);
        CHECK(r2.average_di == Approx(r1.average_di).margin(1e-10));
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(r2.outcome_probs[j] == Approx(r1.outcome_probs[j]).margin(1e-10));
            CHECK(r2.indication_sets[j] == r1.indication_sets[j]);
        }
    }
}

TEST_CASE("the X(x)X basis fully distinguishes the two Phi states") {
    const EnsembleDecomposition e =
        bell_diagonal_ensemble(BellDiagonalSpectrum({0.5, 0.5, 0.0, 0.0}));
    const DIReport rep = di_report(e, xx_basis());
    CHECK(rep.average_di == Approx(1.0).margin(1e-12));
}

TEST_CASE("optimizer finds the discriminating basis for two Bell states") {
    const EnsembleDecomposition e =
        bell_diagonal_ensemble(BellDiagonalSpectrum({0.5, 0.5, 0.0, 0.0}));
    const OptimizeResult res = optimize_di(e, 16, 7);
    CHECK(res.best_di >= 1.0 - 1e-6);
    CHECK(res.best_di <= 1.0 + 1e-9);
}

TEST_CASE("optimizer is trivial on a single state") {
    const EnsembleDecomposition e(Spectrum({1.0}), {bell_state(0)});
    CHECK(optimize_di(e, 4, 1).best_di == 0.0);
}

TEST_CASE("optimizer on three Bell states reaches the witness value") {
    const OptimizeResult res = optimize_di(three_bell_states(), 16, 11);
    CHECK(res.best_di >= kThreeBellDi - 1e-9);
    CHECK(res.best_di < kLog2Three - 0.1);
}

TEST_CASE("optimizer best value is monotone in the restart count") {
    const EnsembleDecomposition e = three_bell_states();
    const double b4 = optimize_di(e, 4, 21).best_di;
    const double b8 = optimize_di(e, 8, 21).best_di;
    const double b16 = optimize_di(e, 16, 21).best_di;
    CHECK(b8 >= b4 - 1e-12);
    CHECK(b16 >= b8 - 1e-12);
}

TEST_CASE("optimizer rejects unsupported inputs") {
    const EnsembleDecomposition e(Spectrum({1.0}), {bell_state(0)});
    CHECK_THROWS_AS(optimize_di(e, 0, 1), contract_error);
}

TEST_CASE("distinguishability condition") {
    const ConditionResult boundary = distinguishability_condition(1.0, 1.0);
    CHECK(boundary.satisfied);
    CHECK(boundary.margin == 0.0);

    const ConditionResult bell09 = distinguishability_condition(0.46899559358928122, 1.0);
    CHECK(bell09.satisfied);
    CHECK(bell09.margin == Approx(0.53100440641071878).margin(1e-12));

    const ConditionResult three = distinguishability_condition(kLog2Three, kThreeBellDi);
    CHECK_FALSE(three.satisfied);
    CHECK(three.margin == Approx(kThreeBellDi - kLog2Three).margin(1e-12));

    CHECK_THROWS_AS(distinguishability_condition(-0.1, 1.0), contract_error);
}
