#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "odmd/baselines.hpp"
#include "odmd/estimator.hpp"
#include "odmd/signal.hpp"

using namespace odmd;
using cd = std::complex<double>;

namespace {

SpectralModel make_model(std::vector<double> e, std::vector<double> p) {
    SpectralModel m;
    m.energies = std::move(e);
    m.probabilities = std::move(p);
    return m;
}

std::vector<cd> sorted_by_phase(std::vector<cd> v) {
    std::sort(v.begin(), v.end(),
              [](const cd& a, const cd& b) { return std::arg(a) < std::arg(b); });
    return v;
}

double qcels_objective_oracle(const OverlapSignal& sig, double theta) {
    // closed-form inner minimization re-derived independently
    cd r = 0.0;
    for (std::size_t k = 0; k < sig.size(); ++k)
        r += sig.values[k] * std::polar(1.0, theta * sig.dt * static_cast<double>(k));
    r /= static_cast<double>(sig.size());
    double obj = 0.0;
    for (std::size_t k = 0; k < sig.size(); ++k)
        obj +=
            std::norm(sig.values[k] - r * std::polar(1.0, -theta * sig.dt * static_cast<double>(k)));
    return obj;
}

} // namespace

TEST_CASE("overlap Toeplitz matrices are Hermitian with s0 on the diagonal") {
    const SpectralModel m = make_model({-1.1, 0.2, 1.4}, {0.5, 0.3, 0.2});
    const OverlapSignal clean = generate_overlap(m, 0.8, 12);
    const ToeplitzSubspaceMatrices mats = build_uvqpe_matrices(clean, 6);
    CHECK((mats.s - mats.s.adjoint()).cwiseAbs().maxCoeff() <= 1e-12);
    for (int i = 0; i < 6; ++i) CHECK(mats.s(i, i) == clean.values[0]);
    // one-step shift: top row of T holds s_1..s_m
    for (int j = 0; j < 6; ++j)
        CHECK(mats.t(0, j) == clean.values[static_cast<std::size_t>(j + 1)]);

    // under noise the sampled diagonal is still s0 verbatim
    const OverlapSignal noisy = add_gaussian_noise(clean, 1e-3, 11);
    const ToeplitzSubspaceMatrices nmats = build_uvqpe_matrices(noisy, 6);
    for (int i = 0; i < 6; ++i) CHECK(nmats.s(i, i) == noisy.values[0]);
}

TEST_CASE("uvqpe recovers a single mode at m = 2") {
    const SpectralModel m = make_model({0.62}, {1.0});
    const OverlapSignal sig = generate_overlap(m, 1.0, 4);
    const SubspaceEstimate est = uvqpe(sig, 2, 1e-10);
    CHECK(!est.skipped);
    CHECK(est.energy == doctest::Approx(0.62).epsilon(1e-10));
}

TEST_CASE("uvqpe resolves both phases of a two-mode signal at m = 3") {
    const SpectralModel m = make_model({-0.8, 0.9}, {0.55, 0.45});
    const OverlapSignal sig = generate_overlap(m, 1.0, 6);
    const SubspaceEstimate est = uvqpe(sig, 3, 1e-10);
    REQUIRE(est.rank_kept == 2);
    auto eigs = sorted_by_phase(est.eigenvalues);
    auto expect = sorted_by_phase({std::polar(1.0, 0.8), std::polar(1.0, -0.9)});
    for (int i = 0; i < 2; ++i) CHECK(std::abs(eigs[i] - expect[i]) < 1e-8);
    CHECK(est.energy == doctest::Approx(-0.8).epsilon(1e-9));
}

TEST_CASE("uvqpe needs the complex signal") {
    const SpectralModel m = make_model({0.3}, {1.0});
    const OverlapSignal sig = take_real_part(generate_overlap(m, 1.0, 5));
    CHECK_THROWS_AS((void)uvqpe(sig, 2, 1e-8), validation_error);
}

TEST_CASE("vqpe is exact for one and two noiseless modes") {
    {
        const SpectralModel m = make_model({-0.45}, {1.0});
        const OverlapSignal sig = generate_overlap(m, 1.0, 4);
        const SubspaceEstimate est = vqpe(m, sig, 2, 1e-12);
        CHECK(est.energy == doctest::Approx(-0.45).epsilon(1e-10));
    }
    {
        const SpectralModel m = make_model({-1.0, 0.8}, {0.7, 0.3});
        const OverlapSignal sig = generate_overlap(m, 0.9, 4);
        const SubspaceEstimate est = vqpe(m, sig, 2, 1e-12);

        // 2x2 pencil oracle: det(T - E S) = 0 solved in closed form.
        const double dt = 0.9;
        auto s_at = [&](int k) {
            cd acc = 0.0;
            for (int n = 0; n < 2; ++n)
                acc += m.probabilities[n] * std::polar(1.0, -m.energies[n] * dt * k);
            return acc;
        };
        auto h_at = [&](int k) {
            cd acc = 0.0;
            for (int n = 0; n < 2; ++n)
                acc += m.probabilities[n] * m.energies[n] *
                       std::polar(1.0, -m.energies[n] * dt * k);
            return acc;
        };
        const cd s0 = s_at(0), s1 = s_at(1), h0 = h_at(0), h1 = h_at(1);
        const cd a = s0 * s0 - s1 * std::conj(s1);
        const cd b = -(2.0 * h0 * s0 - h1 * std::conj(s1) - std::conj(h1) * s1);
        const cd c = h0 * h0 - h1 * std::conj(h1);
        const cd disc = std::sqrt(b * b - 4.0 * a * c);
        const double r1 = ((-b + disc) / (2.0 * a)).real();
        const double r2 = ((-b - disc) / (2.0 * a)).real();
        CHECK(est.energy == doctest::Approx(std::min(r1, r2)).epsilon(1e-9));
        CHECK(est.energy == doctest::Approx(-1.0).epsilon(1e-9));
    }
}

TEST_CASE("vqpe stalls short of high precision at small overlap under noise") {
    SpectralModel m;
    const int n_levels = 20;
    m.energies.push_back(-2.2);
    for (int n = 1; n < n_levels; ++n)
        m.energies.push_back(-1.6 + 3.4 * (n - 1) / (n_levels - 2.0));
    m.probabilities.assign(n_levels, 0.95 / (n_levels - 1));
    m.probabilities[0] = 0.05;

    const OverlapSignal sig = add_gaussian_noise(generate_overlap(m, 1.0, 200), 1e-3, 7);
    const OverlapSignal h = hamiltonian_signal(m, sig);
    const SubspaceEstimate vq = vqpe_with_target(sig, h, 201, 1e-2);
    REQUIRE(!vq.skipped);
    const double vq_err = std::abs(vq.energy - m.ground_energy());

    const EmbedDims dims = embed_for_budget(static_cast<int>(sig.size()), 0.5, sig.parts);
    const Eigen::VectorXcd ov = eig_general(system_matrix(hankelize(sig, dims.k, 0.5), 1e-2));
    const double od_err =
        std::abs(ground_energy_from_eigs(std::vector<cd>(ov.data(), ov.data() + ov.size()), 1.0,
                                         PhaseWindow::symmetric)
                     .energy -
                 m.ground_energy());

    CHECK(od_err < 1e-3);
    CHECK(vq_err > 1e-3);          // stuck above the precision floor
    CHECK(vq_err > 10.0 * od_err); // and well behind the least-squares route
}

TEST_CASE("hamiltonian signal matches the weighted-moment oracle") {
    const SpectralModel m = make_model({-1.2, 0.1, 1.5}, {0.5, 0.2, 0.3});
    const OverlapSignal sig = generate_overlap(m, 0.7, 10);
    const OverlapSignal h = hamiltonian_signal(m, sig);
    for (std::size_t k = 0; k < h.size(); ++k) {
        cd expect = 0.0;
        for (std::size_t n = 0; n < m.size(); ++n)
            expect += m.probabilities[n] * m.energies[n] *
                      std::polar(1.0, -m.energies[n] * 0.7 * static_cast<double>(k));
        CHECK(std::abs(h.values[k] - expect) < 1e-13);
    }
}

TEST_CASE("hamiltonian-signal noise is deterministic and independent of the overlap noise") {
    const SpectralModel m = make_model({-1.0, 1.0}, {0.5, 0.5});
    const OverlapSignal clean = generate_overlap(m, 1.0, 64);
    const OverlapSignal noisy = add_gaussian_noise(clean, 1e-2, 9);
    const OverlapSignal h1 = hamiltonian_signal(m, noisy);
    const OverlapSignal h2 = hamiltonian_signal(m, noisy);
    CHECK(h1.values == h2.values);

    const OverlapSignal h_clean = hamiltonian_signal(m, clean);
    int same = 0;
    for (std::size_t k = 0; k < clean.size(); ++k) {
        const cd dh = h1.values[k] - h_clean.values[k];
        const cd ds = noisy.values[k] - clean.values[k];
        if (std::abs(dh - ds) < 1e-15) ++same;
    }
    CHECK(same == 0); // distinct stream
}

TEST_CASE("qcels fits a single mode to the grid-refinement tolerance") {
    const SpectralModel m = make_model({0.37}, {1.0});
    const OverlapSignal sig = generate_overlap(m, 1.0, 30);
    const QcelsFit fit = qcels(sig);
    CHECK(fit.theta == doctest::Approx(0.37).epsilon(1e-6));
    CHECK(std::abs(fit.r) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(fit.objective <= 1e-10);
    CHECK(fit.objective >= 0.0);
}

TEST_CASE("qcels lands near the dominant mode of a lopsided pair") {
    const SpectralModel m = make_model({-0.9, 0.6}, {0.9, 0.1});
    const OverlapSignal sig = generate_overlap(m, 1.0, 40);
    const QcelsFit fit = qcels(sig);
    const double gap = 1.5;
    CHECK(std::abs(fit.theta - (-0.9)) <= 0.1 * gap);
    CHECK(fit.objective > 0.0);
}

TEST_CASE("qcels is biased on a small-overlap reference where odmd is not") {
    // ground weight far below the excited weights: the single-exponential
    // fit locks onto the bulk of the spectrum instead of the ground mode
    SpectralModel m;
    const int n_levels = 20;
    m.energies.push_back(-2.2);
    for (int n = 1; n < n_levels; ++n)
        m.energies.push_back(-1.6 + 3.4 * (n - 1) / (n_levels - 2.0));
    m.probabilities.assign(n_levels, 0.95 / (n_levels - 1));
    m.probabilities[0] = 0.05;

    const OverlapSignal sig = generate_overlap(m, 1.0, 120);
    const QcelsFit fit = qcels(sig);
    const double qcels_err = std::abs(fit.theta - m.ground_energy());

    const EmbedDims dims = embed_for_budget(static_cast<int>(sig.size()), 0.5, sig.parts);
    const Eigen::VectorXcd ov =
        eig_general(system_matrix(hankelize(sig, dims.k, 0.5), 1e-8));
    const double odmd_err =
        std::abs(ground_energy_from_eigs(std::vector<cd>(ov.data(), ov.data() + ov.size()), 1.0,
                                         PhaseWindow::symmetric)
                     .energy -
                 m.ground_energy());
    CHECK(odmd_err < 1e-6);
    CHECK(qcels_err > 10.0 * std::max(odmd_err, 1e-8));
}

TEST_CASE("qcels certificate: returned objective beats the scan grid") {
    const SpectralModel m = make_model({-1.4, -0.2, 0.9}, {0.4, 0.35, 0.25});
    OverlapSignal sig = add_gaussian_noise(generate_overlap(m, 0.8, 36), 1e-3, 21);
    const QcelsFit fit = qcels(sig, PhaseWindow::symmetric, 512);
    const double span = 2.0 * M_PI / sig.dt;
    const double lo = -0.5 * span;
    for (int i = 0; i < 512; ++i) {
        const double theta = lo + (i + 0.5) * span / 512.0;
        CHECK(fit.objective <= qcels_objective_oracle(sig, theta) + 1e-9);
    }
}

TEST_CASE("esprit matches the exact eigenphases of two modes") {
    const SpectralModel m = make_model({-0.7, 1.1}, {0.6, 0.4});
    const OverlapSignal sig = generate_overlap(m, 1.0, 10);
    const EspritResult res = esprit(sig, 2, 7, 1e-10);
    REQUIRE(!res.skipped);
    REQUIRE(res.rank_kept == 2);
    auto eigs = sorted_by_phase(res.eigenvalues);
    auto expect = sorted_by_phase({std::polar(1.0, 0.7), std::polar(1.0, -1.1)});
    for (int i = 0; i < 2; ++i) CHECK(std::abs(eigs[i] - expect[i]) < 1e-10);
}

TEST_CASE("esprit agrees with the truncated system matrix") {
    std::mt19937 gen(57);
    std::uniform_real_distribution<double> uni(-2.2, 2.2);
    for (int rep = 0; rep < 10; ++rep) {
        const int n = 2 + static_cast<int>(gen() % 4);
        SpectralModel m;
        for (int i = 0; i < n; ++i) m.energies.push_back(uni(gen));
        std::sort(m.energies.begin(), m.energies.end());
        bool ok = true;
        for (int i = 0; i + 1 < n; ++i)
            if (m.energies[i + 1] - m.energies[i] < 0.1) ok = false;
        if (!ok) continue;
        m.probabilities.assign(n, 1.0 / n);

        const OverlapSignal sig = generate_overlap(m, 1.0, 4 * n);
        const int k = 2 * n + 1;
        const int d = embed_rows(k, 0.5, sig.parts);
        const HankelPair pair = hankelize(sig, k, 0.5);
        const SystemMatrix sm = system_matrix(pair, 1e-8);
        const EspritResult er = esprit(sig, d, k, 1e-8);
        REQUIRE(er.rank_kept == sm.rank_kept);

        const Eigen::VectorXcd ov = eig_general(sm);
        auto a = sorted_by_phase(std::vector<cd>(ov.data(), ov.data() + ov.size()));
        auto b = sorted_by_phase(er.eigenvalues);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-6);
    }
}

TEST_CASE("esprit flags rank collapse instead of throwing") {
    OverlapSignal sig;
    sig.dt = 1.0;
    sig.values.assign(12, cd(0.0, 0.0));
    const EspritResult res = esprit(sig, 3, 6, 1e-8);
    CHECK(res.skipped);
}

TEST_CASE("prony recovers a single mode exactly") {
    const SpectralModel m = make_model({0.85}, {1.0});
    const OverlapSignal sig = generate_overlap(m, 1.0, 3);
    const PronyResult res = prony_full(sig, 1);
    REQUIRE(res.eigenvalues.size() == 1);
    CHECK(std::abs(res.eigenvalues[0] - std::polar(1.0, -0.85)) < 1e-12);
    CHECK(std::abs(res.amplitudes[0] - cd(1.0, 0.0)) < 1e-12);
}

TEST_CASE("prony inverts a three-mode synthesis") {
    const SpectralModel m = make_model({-1.1, 0.4, 0.9}, {0.5, 0.3, 0.2});
    const OverlapSignal sig = generate_overlap(m, 1.0, 8);
    const PronyResult res = prony_full(sig, 3);
    REQUIRE(res.eigenvalues.size() == 3);

    // pair each recovered mode with the closest target phase
    for (int n = 0; n < 3; ++n) {
        const cd target = std::polar(1.0, -m.energies[static_cast<std::size_t>(n)]);
        double best = 1e300;
        int at = -1;
        for (int i = 0; i < 3; ++i)
            if (std::abs(res.eigenvalues[static_cast<std::size_t>(i)] - target) < best) {
                best = std::abs(res.eigenvalues[static_cast<std::size_t>(i)] - target);
                at = i;
            }
        CHECK(best < 1e-8);
        CHECK(std::abs(res.amplitudes[static_cast<std::size_t>(at)] -
                       m.probabilities[static_cast<std::size_t>(n)]) < 1e-8);
    }

    cd amp_sum = 0.0;
    for (const cd& a : res.amplitudes) amp_sum += a;
    CHECK(std::abs(amp_sum - sig.values[0]) < 1e-10);
    CHECK(!res.ill_conditioned);
}

TEST_CASE("prony attaches a conditioning warning when the mode matrix degenerates") {
    // An all-zero sequence yields an exact double root at the origin, so the
    // amplitude system is singular and must be flagged, not thrown.
    OverlapSignal sig;
    sig.dt = 1.0;
    sig.values.assign(4, cd(0.0, 0.0));
    const PronyResult res = prony_full(sig, 2);
    CHECK(res.vandermonde_condition > 1e12);
    CHECK(res.ill_conditioned);
}

TEST_CASE("prony needs 2 n_modes samples") {
    const SpectralModel m = make_model({0.5}, {1.0});
    const OverlapSignal sig = generate_overlap(m, 1.0, 2);
    CHECK_THROWS_AS((void)prony_full(sig, 2), validation_error);
}

TEST_CASE("all methods agree on noiseless multi-mode ground energies") {
    const SpectralModel m = make_model({-1.5, -0.3, 1.2}, {0.4, 0.35, 0.25});
    const OverlapSignal sig = generate_overlap(m, 1.0, 16);
    const double e0 = m.ground_energy();

    const HankelPair pair = hankelize(sig, 5, 0.5); // d = 3
    const Eigen::VectorXcd ov = eig_general(system_matrix(pair, 1e-9));
    const double odmd_e =
        ground_energy_from_eigs(std::vector<cd>(ov.data(), ov.data() + ov.size()), 1.0,
                                PhaseWindow::symmetric)
            .energy;

    const EspritResult er = esprit(sig, 3, 5, 1e-9);
    const double esprit_e =
        ground_energy_from_eigs(er.eigenvalues, 1.0, PhaseWindow::symmetric).energy;

    const double uvqpe_e = uvqpe(sig, 4, 1e-9).energy;

    const PronyResult pr = prony_full(sig, 3);
    const double prony_e =
        ground_energy_from_eigs(pr.eigenvalues, 1.0, PhaseWindow::symmetric).energy;

    for (double e : {odmd_e, esprit_e, uvqpe_e, prony_e}) CHECK(std::abs(e - e0) < 1e-7);
    CHECK(std::abs(odmd_e - esprit_e) < 1e-7);
    CHECK(std::abs(odmd_e - uvqpe_e) < 1e-7);
    CHECK(std::abs(odmd_e - prony_e) < 1e-7);
}

TEST_CASE("subspace projection dimension is non-increasing in the threshold") {
    const SpectralModel m = make_model({-1.6, -0.4, 0.5, 1.4}, {0.4, 0.3, 0.2, 0.1});
    OverlapSignal sig = add_gaussian_noise(generate_overlap(m, 0.9, 24), 1e-3, 13);
    int prev_uv = 1 << 20, prev_vq = 1 << 20;
    const OverlapSignal h = hamiltonian_signal(m, sig);
    for (double delta : {1e-8, 1e-5, 1e-3, 1e-2, 1e-1}) {
        const SubspaceEstimate uv = uvqpe(sig, 12, delta);
        const SubspaceEstimate vq = vqpe_with_target(sig, h, 12, delta);
        CHECK(uv.rank_kept <= prev_uv);
        CHECK(vq.rank_kept <= prev_vq);
        prev_uv = uv.rank_kept;
        prev_vq = vq.rank_kept;
    }
}
