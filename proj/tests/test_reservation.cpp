#include <doctest.h>

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "roadcloud/reservation.hpp"

using namespace roadcloud;
using namespace roadcloud::reservation;

namespace {

// Erlang-B blocking probability by the standard recursion; the independent
// oracle for every M/M/n/n comparison.
double erlang_b(double rho, int servers) {
    double b = 1.0;
    for (int k = 1; k <= servers; ++k) {
        b = rho * b / (static_cast<double>(k) + rho * b);
    }
    return b;
}

VmClassSpec cls(double c, double m, double ll, double ml, double lg, double mg) {
    return VmClassSpec{c, m, ll, ml, lg, mg};
}

RateModel mmnn(int servers, double lambda, double mu) {
    RateModel model;
    model.capacity = Capacity{static_cast<double>(servers), 1.0, 0.0, 0.0};
    model.classes = {cls(1.0, 0.0, lambda, mu, 0.0, 0.0)};
    return model;
}

RateModel two_class_model(double local_arrival) {
    RateModel model;
    model.capacity = Capacity{50.0, 100.0, 0.0, 0.0};
    model.classes = {cls(20.0, 15.0, local_arrival, 2.0, 0.05, 0.1),
                     cls(10.0, 40.0, local_arrival, 2.0, 0.05, 0.1)};
    return model;
}

} // namespace

TEST_CASE("enumerate: inert migrated population stays at zero") {
    RateModel model;
    model.capacity = Capacity{50.0, 100.0, 0.0, 0.0};
    model.classes = {cls(20.0, 15.0, 0.1, 2.0, 0.0, 0.0)};
    const auto states = enumerate_states(model);
    REQUIRE(states.size() == 3);  // local counts 0..2, floor(50/20) = 2
    for (std::size_t n = 0; n < 3; ++n) {
        CHECK(states[n].local_counts[0] == static_cast<int>(n));
        CHECK(states[n].migrated_counts[0] == 0);
    }
}

TEST_CASE("enumerate: reserved compute splits local and total budgets") {
    RateModel model;
    model.capacity = Capacity{50.0, 1000.0, 10.0, 0.0};
    model.classes = {cls(20.0, 0.0, 0.1, 2.0, 0.05, 0.1)};
    const auto states = enumerate_states(model);
    // C_c = 40 -> n_l in {0,1,2}; total 20(n_l+n_g) <= 50 -> n_l+n_g <= 2
    // lexicographic: (0,0) (0,1) (0,2) (1,0) (1,1) (2,0)
    REQUIRE(states.size() == 6);
    const std::vector<std::pair<int, int>> expected = {{0, 0}, {0, 1}, {0, 2},
                                                       {1, 0}, {1, 1}, {2, 0}};
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(states[i].local_counts[0] == expected[i].first);
        CHECK(states[i].migrated_counts[0] == expected[i].second);
    }
}

TEST_CASE("enumerate matches a brute-force scan on the two-class model") {
    const RateModel model = two_class_model(0.2);
    const auto states = enumerate_states(model);

    // independent quadruple loop over generous bounds
    long expected = 0;
    for (int nl1 = 0; nl1 <= 5; ++nl1) {
        for (int nl2 = 0; nl2 <= 10; ++nl2) {
            for (int ng1 = 0; ng1 <= 5; ++ng1) {
                for (int ng2 = 0; ng2 <= 10; ++ng2) {
                    const double lc = 20.0 * nl1 + 10.0 * nl2;
                    const double lm = 15.0 * nl1 + 40.0 * nl2;
                    const double tc = lc + 20.0 * ng1 + 10.0 * ng2;
                    const double tm = lm + 15.0 * ng1 + 40.0 * ng2;
                    if (lc <= 50.0 && lm <= 100.0 && tc <= 50.0 && tm <= 100.0) {
                        ++expected;
                    }
                }
            }
        }
    }
    CHECK(states.size() == static_cast<std::size_t>(expected));

    // lexicographic and duplicate-free
    for (std::size_t i = 1; i < states.size(); ++i) {
        const auto a = states[i - 1];
        const auto b = states[i];
        const auto key = [](const OccupancyState& s) {
            std::vector<int> k = s.local_counts;
            k.insert(k.end(), s.migrated_counts.begin(), s.migrated_counts.end());
            return k;
        };
        CHECK(key(a) < key(b));
    }
}

TEST_CASE("enumerate: overflow reports the cap") {
    RateModel model = two_class_model(0.2);
    model.state_cap = 4;
    CHECK_THROWS_AS(enumerate_states(model), StateSpaceOverflow);
    try {
        enumerate_states(model);
    } catch (const StateSpaceOverflow& err) {
        CHECK(err.cap() == 4);
        CHECK(err.partial_count() == 4);
    }
}

TEST_CASE("generator matches the M/M/2/2 birth-death chain") {
    const RateModel model = mmnn(2, 1.0, 1.0);
    const auto states = enumerate_states(model);
    REQUIRE(states.size() == 3);
    const Generator gen = build_generator(model, states);

    // row 0: arrival only
    REQUIRE(gen.transitions[0].size() == 1);
    CHECK(gen.transitions[0][0].target == 1);
    CHECK(gen.transitions[0][0].rate == 1.0);
    CHECK(gen.diagonal[0] == -1.0);
    // row 1: arrival and one departure
    REQUIRE(gen.transitions[1].size() == 2);
    CHECK(gen.transitions[1][0].target == 2);
    CHECK(gen.transitions[1][0].rate == 1.0);
    CHECK(gen.transitions[1][1].target == 0);
    CHECK(gen.transitions[1][1].rate == 1.0);
    CHECK(gen.diagonal[1] == -2.0);
    // row 2: two departures, arrivals blocked
    REQUIRE(gen.transitions[2].size() == 1);
    CHECK(gen.transitions[2][0].target == 1);
    CHECK(gen.transitions[2][0].rate == 2.0);
    CHECK(gen.diagonal[2] == -2.0);
}

TEST_CASE("generator rows sum to zero exactly") {
    const RateModel model = two_class_model(0.3);
    const auto states = enumerate_states(model);
    const Generator gen = build_generator(model, states);
    for (std::size_t s = 0; s < gen.size(); ++s) {
        double out = 0.0;  // same accumulation order as the construction
        for (const auto& e : gen.transitions[s]) out += e.rate;
        CHECK(out + gen.diagonal[s] == 0.0);
    }
}

TEST_CASE("generator: empty state has only arrivals, dead model is absorbing") {
    RateModel dead;
    dead.capacity = Capacity{2.0, 1.0, 0.0, 0.0};
    dead.classes = {cls(1.0, 0.0, 0.0, 1.0, 0.0, 0.0)};  // departures only
    const auto states = enumerate_states(dead);
    REQUIRE(states.size() == 3);
    const Generator gen = build_generator(dead, states);
    CHECK(gen.transitions[0].empty());  // absorbing empty state
    CHECK(gen.diagonal[0] == 0.0);
    CHECK(gen.transitions[1].size() == 1);
    CHECK(gen.transitions[2].size() == 1);

    const auto pi = solve_steady_state(gen);
    CHECK(pi[0] == doctest::Approx(1.0));
    CHECK(pi[1] == 0.0);
    CHECK(pi[2] == 0.0);
}

TEST_CASE("steady state of M/M/2/2 is the Erlang distribution") {
    const RateModel model = mmnn(2, 1.0, 1.0);
    const auto states = enumerate_states(model);
    const auto pi = solve_steady_state(build_generator(model, states));
    CHECK(pi[0] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(pi[1] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(pi[2] == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("steady state of a single feasible state is trivial") {
    RateModel model;
    model.capacity = Capacity{4.0, 10.0, 0.0, 0.0};
    model.classes = {cls(5.0, 0.0, 1.0, 1.0, 0.0, 0.0)};  // nothing fits
    const auto states = enumerate_states(model);
    REQUIRE(states.size() == 1);
    const auto pi = solve_steady_state(build_generator(model, states));
    CHECK(pi == std::vector<double>{1.0});
}

TEST_CASE("power-iteration path agrees with the dense solver") {
    const RateModel model = two_class_model(0.2);
    const auto states = enumerate_states(model);
    const Generator gen = build_generator(model, states);
    const auto dense = solve_steady_state(gen);
    SolveOptions iterative;
    iterative.dense_limit = 1;
    const auto power = solve_steady_state(gen, iterative);
    for (std::size_t s = 0; s < dense.size(); ++s) {
        CHECK(power[s] == doctest::Approx(dense[s]).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("solution invariants: normalization and residual") {
    for (double rate : {0.1, 0.2, 0.3}) {
        const RateModel model = two_class_model(rate);
        const auto states = enumerate_states(model);
        const Generator gen = build_generator(model, states);
        const auto pi = solve_steady_state(gen);
        double sum = 0.0;
        for (double p : pi) {
            CHECK(p >= 0.0);
            sum += p;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));

        std::vector<double> flow(pi.size(), 0.0);
        for (std::size_t s = 0; s < pi.size(); ++s) {
            flow[s] += pi[s] * gen.diagonal[s];
            for (const auto& e : gen.transitions[s]) flow[e.target] += pi[s] * e.rate;
        }
        for (double f : flow) {
            CHECK(std::abs(f) <= 1e-9 * gen.max_abs_entry());
        }
    }
}

TEST_CASE("detailed balance on a single-class birth-death chain") {
    const double lambda = 0.7, mu = 1.3;
    const RateModel model = mmnn(6, lambda, mu);
    const auto states = enumerate_states(model);
    const auto pi = solve_steady_state(build_generator(model, states));
    for (std::size_t n = 0; n + 1 < states.size(); ++n) {
        CHECK(pi[n] * lambda ==
              doctest::Approx(pi[n + 1] * static_cast<double>(n + 1) * mu).epsilon(1e-10));
    }
}

TEST_CASE("blocking of M/M/2/2 equals Erlang-B") {
    const RateModel model = mmnn(2, 1.0, 1.0);
    const SteadyStateSolution sol = analyze(model);
    CHECK(sol.blocking_probability == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(sol.blocking_rate == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(sol.dropping_rate == 0.0);
    CHECK(sol.dropping_probability == 0.0);
}

TEST_CASE("Erlang-B equivalence across server counts and loads") {
    for (int servers : {1, 2, 5, 10}) {
        for (double rho : {0.5, 1.0, 2.0}) {
            const RateModel model = mmnn(servers, rho, 1.0);
            const SteadyStateSolution sol = analyze(model);
            CHECK(sol.blocking_probability ==
                  doctest::Approx(erlang_b(rho, servers)).epsilon(1e-10));
        }
    }
}

TEST_CASE("no local arrivals means no blocking flux") {
    RateModel model;
    model.capacity = Capacity{50.0, 100.0, 0.0, 0.0};
    model.classes = {cls(20.0, 15.0, 0.0, 0.0, 0.05, 0.1)};
    const SteadyStateSolution sol = analyze(model);
    CHECK(sol.blocking_rate == 0.0);
    CHECK(sol.blocking_probability == 0.0);
    CHECK(sol.dropping_rate > 0.0);
}

TEST_CASE("common pool smaller than every footprint blocks all local traffic") {
    RateModel model;
    model.capacity = Capacity{50.0, 100.0, 45.0, 0.0};  // C_c = 5
    model.classes = {cls(20.0, 15.0, 0.4, 2.0, 0.0, 0.0),
                     cls(10.0, 40.0, 0.3, 2.0, 0.0, 0.0)};
    const SteadyStateSolution sol = analyze(model);
    CHECK(sol.blocking_rate == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(sol.blocking_probability == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("no migrated arrivals means no dropping flux") {
    const RateModel model = two_class_model(0.2);
    RateModel local_only = model;
    for (auto& c : local_only.classes) {
        c.migrated_arrival_rate = 0.0;
        c.migrated_departure_rate = 0.0;
    }
    const SteadyStateSolution sol = analyze(local_only);
    CHECK(sol.dropping_rate == 0.0);
    CHECK(sol.dropping_probability == 0.0);
}

TEST_CASE("maximal reservation approaches the pure-migrated Erlang loss") {
    // local traffic confined to a sliver of the pool
    auto make = [](double reserved) {
        RateModel model;
        model.capacity = Capacity{3.0, 10.0, reserved, 0.0};
        model.classes = {cls(1.0, 0.0, 0.05, 2.0, 1.0, 1.0)};
        return model;
    };
    const double pure = erlang_b(1.0, 3);

    RateModel inert_local = make(0.0);
    inert_local.classes[0].local_arrival_rate = 0.0;
    inert_local.classes[0].local_departure_rate = 0.0;
    CHECK(analyze(inert_local).dropping_probability == doctest::Approx(pure).epsilon(1e-10));

    double last = 1.0;
    for (double reserved : {0.0, 1.0, 2.0}) {
        const double dropping = analyze(make(reserved)).dropping_probability;
        CHECK(dropping <= last + 1e-12);  // non-increasing in the reservation
        last = dropping;
    }
    CHECK(last >= pure);
    CHECK(last <= 1.1 * pure);
}

TEST_CASE("growing the compute reservation never shrinks a blocking set") {
    const RateModel loose = two_class_model(0.2);
    const RateModel tight = with_reservation(loose, 20.0, 0.0);
    const auto tight_states = enumerate_states(tight);
    const auto sums = state_sums(tight_states, tight.classes);
    for (std::size_t k = 0; k < tight.classes.size(); ++k) {
        for (std::size_t s = 0; s < tight_states.size(); ++s) {
            const bool blocked_loose =
                !local_arrival_admissible(sums[s], loose.classes[k], loose.capacity);
            const bool blocked_tight =
                !local_arrival_admissible(sums[s], tight.classes[k], tight.capacity);
            if (blocked_loose) CHECK(blocked_tight);
        }
    }
}

TEST_CASE("steady state matches the truncated product form") {
    // The admission rules truncate a reversible multi-class loss network to a
    // coordinate-convex state set, so pi(s) is proportional to
    // prod_k rho_lk^n_lk / n_lk! * rho_gk^n_gk / n_gk! with rho = lambda/mu.
    // This closed form never touches the generator or the linear solver.
    auto product_form = [](const RateModel& model, const std::vector<OccupancyState>& states) {
        std::vector<double> weights(states.size());
        double total = 0.0;
        for (std::size_t s = 0; s < states.size(); ++s) {
            double w = 1.0;
            for (std::size_t k = 0; k < model.classes.size(); ++k) {
                const VmClassSpec& c = model.classes[k];
                const double rho_l =
                    c.local_departure_rate > 0.0 ? c.local_arrival_rate / c.local_departure_rate
                                                 : 0.0;
                const double rho_g = c.migrated_departure_rate > 0.0
                                         ? c.migrated_arrival_rate / c.migrated_departure_rate
                                         : 0.0;
                for (int i = 1; i <= states[s].local_counts[k]; ++i) {
                    w *= rho_l / static_cast<double>(i);
                }
                for (int i = 1; i <= states[s].migrated_counts[k]; ++i) {
                    w *= rho_g / static_cast<double>(i);
                }
            }
            weights[s] = w;
            total += w;
        }
        for (double& w : weights) w /= total;
        return weights;
    };

    for (const RateModel& model :
         {two_class_model(0.2), with_reservation(two_class_model(0.3), 20.0, 40.0), mmnn(5, 0.7, 1.3)}) {
        const auto states = enumerate_states(model);
        const auto pi = solve_steady_state(build_generator(model, states));
        const auto expected = product_form(model, states);
        for (std::size_t s = 0; s < states.size(); ++s) {
            CHECK(pi[s] == doctest::Approx(expected[s]).epsilon(1e-10).scale(1.0));
        }
    }
}

TEST_CASE("transient migrated states keep zero probability") {
    // departures without arrivals: migrated states exist but are unreachable
    RateModel model;
    model.capacity = Capacity{2.0, 1.0, 0.0, 0.0};
    model.classes = {cls(1.0, 0.0, 1.0, 1.0, 0.0, 0.5)};
    const auto states = enumerate_states(model);
    CHECK(states.size() == 6);  // n_l + n_g <= 2
    const SteadyStateSolution sol = analyze(model);
    double reachable_mass = 0.0;
    for (std::size_t s = 0; s < states.size(); ++s) {
        if (states[s].migrated_counts[0] > 0) {
            CHECK(sol.probabilities[s] == 0.0);
        } else {
            reachable_mass += sol.probabilities[s];
        }
    }
    CHECK(reachable_mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sol.blocking_probability == doctest::Approx(erlang_b(1.0, 2)).epsilon(1e-10));
}

TEST_CASE("optimize: singleton grid and impossible constraint") {
    const RateModel model = two_class_model(0.2);

    const ReservationPlan single = optimize_reservation(
        model, std::numeric_limits<double>::infinity(), {{0.0, 0.0}});
    CHECK(single.feasible);
    CHECK(single.best().compute_reserved == 0.0);
    CHECK(single.best().storage_reserved == 0.0);

    // a finite loss system with Poisson arrivals always blocks sometimes
    const ReservationPlan impossible =
        optimize_reservation(model, 0.0, {{0.0, 0.0}, {5.0, 10.0}});
    CHECK(!impossible.feasible);
    CHECK(impossible.table.size() == 2);
    for (const auto& c : impossible.table) {
        CHECK(c.blocking_rate > 0.0);
        CHECK(!c.feasible);
    }

    CHECK_THROWS_AS(optimize_reservation(model, 1.0, {}), std::invalid_argument);
    // a candidate that empties the common pool violates the precondition
    CHECK_THROWS_AS(optimize_reservation(model, 1.0, {{50.0, 0.0}}), ConfigError);
}

TEST_CASE("reservation strictly reduces dropping on the two-class model") {
    const RateModel base = two_class_model(0.2);
    const double without = analyze(base).dropping_rate;
    const double with = analyze(with_reservation(base, 20.0, 40.0)).dropping_rate;
    CHECK(with < without);
}
