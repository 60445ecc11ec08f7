#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "maser/expm.hpp"
#include "maser/filter.hpp"
#include "maser/full_monitoring.hpp"
#include "maser/generators.hpp"
#include "maser/mle.hpp"
#include "maser/simulate.hpp"
#include "maser/state.hpp"
#include "maser/stationary.hpp"
#include "test_util.hpp"

using namespace maser;

namespace {

// Unnormalized product formula evaluated with the dense Taylor exponential;
// no per-step renormalization anywhere.
double dense_log_likelihood(const DetectionRecord& rec, const GeneratorSet& g) {
    const testutil::Dense l0 = testutil::dense_from_tridiag(g.l0);
    std::vector<double> state = stationary_state(g.params).probs;
    double t_prev = 0.0;
    for (const Event& e : rec.events) {
        state = testutil::matvec(testutil::dense_expm(l0, e.t - t_prev), state);
        state = (e.label == 1 ? g.j1 : g.j2).apply(state);
        t_prev = e.t;
    }
    state = testutil::matvec(testutil::dense_expm(l0, rec.horizon - t_prev), state);
    return std::log(vector_sum(state));
}

ModelParams tiny_params(double phi, int n_max) {
    return make_params(phi, 2.0, 0.3, n_max, 1.0);
}

} // namespace

TEST_CASE("empty record: log-likelihood is the survival factor") {
    const ModelParams p = make_params(0.5, 16.0, 0.1);
    const GeneratorSet g = build_generators(p);
    DetectionRecord rec;
    rec.horizon = 0.8;

    const double ll = log_likelihood(rec, p);
    const std::vector<double> v = apply_expm(g.l0, stationary_state(p).probs, 0.8);
    CHECK(ll == doctest::Approx(std::log(vector_sum(v))).epsilon(1e-10));
}

TEST_CASE("single-event record matches the dense unnormalized product") {
    const ModelParams p = tiny_params(0.9, 8);
    const GeneratorSet g = build_generators(p);
    for (int label : {1, 2}) {
        DetectionRecord rec;
        rec.horizon = 1.5;
        rec.events = {{0.6, label}};
        const double mine = log_likelihood(rec, p);
        const double oracle = dense_log_likelihood(rec, g);
        CHECK(mine == doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("filter equals the dense product on random small records") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ut(0.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
        const ModelParams p = tiny_params(0.4 + 0.2 * (rep % 5), 8);
        const GeneratorSet g = build_generators(p);
        DetectionRecord rec;
        rec.horizon = 2.0;
        const int n_events = rep % 6;
        std::vector<double> times;
        for (int i = 0; i < n_events; ++i) times.push_back(2.0 * ut(rng));
        std::sort(times.begin(), times.end());
        for (double t : times)
            rec.events.push_back({t, ut(rng) < 0.5 ? 1 : 2});

        const double mine = log_likelihood(rec, p);
        const double oracle = dense_log_likelihood(rec, g);
        CHECK(std::abs(mine - oracle) <= 1e-9 * std::abs(oracle));
    }
}

TEST_CASE("zero-probability event returns the -inf sentinel") {
    const ModelParams p = make_params(0.5, 16.0, 0.1);
    GeneratorSet g = build_generators(p);
    std::fill(g.j1.rate.begin(), g.j1.rate.end(), 0.0); // kill channel 1
    DetectionRecord rec;
    rec.horizon = 1.0;
    rec.events = {{0.5, 1}};
    CHECK(log_likelihood(rec, g) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("log-likelihood is finite and continuous over the phi grid") {
    const ModelParams p = make_params(0.5, 16.0, 0.1);
    const DetectionRecord rec = atoms_only(simulate(p, 50.0, 31));
    double prev = 0.0;
    for (int i = 0; i < 29; ++i) {
        const double phi = 0.1 + 1.4 * i / 28.0;
        const double ll = log_likelihood(rec, make_params(phi, 16.0, 0.1));
        CHECK(std::isfinite(ll));
        if (i > 0) CHECK(std::abs(ll - prev) < 2000.0);
        prev = ll;
    }
}

TEST_CASE("log-likelihood is invariant under a record file round trip") {
    const ModelParams p = make_params(0.5, 16.0, 0.1);
    const DetectionRecord rec = atoms_only(simulate(p, 40.0, 8));
    const std::string path = (std::filesystem::temp_directory_path() /
                              "maser_filter_roundtrip.csv").string();
    write_record_csv(rec, path);
    const DetectionRecord back = read_record_csv(path);
    CHECK(log_likelihood(rec, p) == log_likelihood(back, p));
    std::filesystem::remove(path);
    std::filesystem::remove(path + ".json");
}

TEST_CASE("observed_fisher_of recovers the curvature of a quadratic exactly") {
    const double info = 137.25;
    auto quadratic = [&](double phi) {
        const double d = phi - 0.6;
        return 3.0 - 0.5 * info * d * d;
    };
    double rel_diff = 1.0;
    const double est = observed_fisher_of(quadratic, 0.6, 1e-3, &rel_diff);
    CHECK(est == doctest::Approx(info).epsilon(1e-8));
    CHECK(rel_diff < 1e-6);
}

TEST_CASE("observed information is stable in the step size on a real record") {
    const ModelParams p = make_params(0.5, 16.0, 0.1);
    const DetectionRecord rec = atoms_only(simulate(p, 150.0, 4));
    auto ll = [&](double phi) { return log_likelihood(rec, make_params(phi, 16.0, 0.1)); };
    double rel_diff = 1.0;
    const double fisher = observed_fisher_of(ll, 0.5, 1e-3, &rel_diff);
    CHECK(fisher > 0.0);
    CHECK(rel_diff < 0.01);
}

TEST_CASE("degenerate search interval returns the single point") {
    const ModelParams p = make_params(0.5, 16.0, 0.1);
    const DetectionRecord rec = atoms_only(simulate(p, 30.0, 12));
    const MleResult res = mle(rec, 16.0, 0.1, {0.45, 0.45});
    CHECK(res.phi_hat == 0.45);
    CHECK(res.grid_profile.size() == 1);
    CHECK(res.log_lik_at_hat ==
          doctest::Approx(log_likelihood(rec, make_params(0.45, 16.0, 0.1))));
}

TEST_CASE("MLE is self-consistent with its own observed information") {
    const ModelParams p = make_params(0.5, 16.0, 0.1);
    const DetectionRecord rec = atoms_only(simulate(p, 300.0, 2718));
    MleOptions opts;
    opts.grid_points = 71;
    const MleResult res = mle(rec, 16.0, 0.1, {0.1, 1.5}, opts);
    REQUIRE(res.observed_fisher > 0.0);
    CHECK(!res.boundary);
    CHECK(std::abs(res.phi_hat - 0.5) <= 3.0 / std::sqrt(res.observed_fisher));
    // The grid profile never beats the refined maximum.
    for (const auto& [phi, ll] : res.grid_profile) CHECK(ll <= res.log_lik_at_hat);
}

TEST_CASE("full monitoring: pure survival interval") {
    ModelParams p = make_params(0.5, 16.0, 0.1);
    FullRecord rec;
    rec.horizon = 0.7;
    rec.initial_level = 3;
    const double outflow = birth_rate(p, 3) + death_rate(p, 3) + excited_intensity(p, 3);
    CHECK(full_monitoring_log_likelihood(rec, p) ==
          doctest::Approx(-outflow * 0.7).epsilon(1e-12));
}

TEST_CASE("full monitoring: finite on simulated records, atoms-only also finite") {
    const ModelParams p = make_params(0.5, 16.0, 0.1);
    const FullRecord full = simulate(p, 100.0, 9);
    const double ll_full = full_monitoring_log_likelihood(full, p);
    const double ll_atoms = log_likelihood(atoms_only(full), p);
    CHECK(std::isfinite(ll_full));
    CHECK(std::isfinite(ll_atoms));
}

TEST_CASE("full monitoring rejects label/path mismatches") {
    const ModelParams p = make_params(0.5, 16.0, 0.1);
    FullRecord rec;
    rec.horizon = 1.0;
    rec.initial_level = 2;
    rec.events = {{0.4, 3}};
    rec.path = {{0.4, 3}}; // emission must step down, not up
    CHECK_THROWS_AS(full_monitoring_log_likelihood(rec, p), FormatError);
}

TEST_CASE("full-monitoring MLE locates the generating parameter") {
    const ModelParams p = make_params(0.5, 16.0, 0.1);
    const FullRecord full = simulate(p, 300.0, 77);
    const FullMleResult res = full_monitoring_mle(full, {0.1, 1.5}, p.n_max);
    REQUIRE(res.observed_fisher > 0.0);
    CHECK(std::abs(res.phi_hat - 0.5) <= 3.0 / std::sqrt(res.observed_fisher));
}
