// Acceptance suite: every criterion below runs at its stated tolerance and
// prints one pass/fail line. Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cohtrans/kraus.hpp"
#include "cohtrans/locc.hpp"
#include "cohtrans/sequence.hpp"
#include "cohtrans/solver.hpp"
#include "generators.hpp"

using namespace cohtrans;
using testgen::pattern_of;
using testgen::prob_of;
using testgen::sorted_transpositions;

namespace {

struct Criterion {
    std::string name;
    std::function<bool(std::string&)> body;
};

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

double max_diff(const DensityMatrix& a, const DensityMatrix& b) {
    return (a.entries - b.entries).cwiseAbs().maxCoeff();
}

CoherenceVector psi6() {
    return CoherenceVector::from_mu(
        {11 / 53.0, 11 / 53.0, 8 / 53.0, 8 / 53.0, 8 / 53.0, 7 / 53.0});
}
CoherenceVector phi6() {
    return CoherenceVector::from_mu(
        {12 / 53.0, 12 / 53.0, 10 / 53.0, 9 / 53.0, 6 / 53.0, 4 / 53.0});
}

// ---------------------------------------------------------------- criterion 1
bool criterion_sixlevel_example(std::string& why) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto plan = plan_sequence(psi6(), phi6(), 5);
    if (plan.step_count() != 2 || plan.fallback_used) {
        why = "expected exactly 2 steps, got " + std::to_string(plan.step_count());
        return false;
    }
    const auto& s1 = plan.steps[0];
    const auto& s2 = plan.steps[1];
    struct Expect {
        std::optional<Transposition> member;
        double p;
    };
    const std::vector<Expect> step1{{std::nullopt, 1 / 4.0},
                                    {Transposition{1, 6}, 1 / 8.0},
                                    {Transposition{2, 6}, 1 / 8.0},
                                    {Transposition{3, 5}, 1 / 3.0},
                                    {Transposition{3, 6}, 1 / 6.0}};
    if (s1.probabilities.p.size() != 5) {
        why = "step 1 has " + std::to_string(s1.probabilities.p.size()) + " outcomes";
        return false;
    }
    for (const auto& e : step1) {
        const auto p = prob_of(s1.channel.sp, s1.probabilities, e.member);
        if (!p || !close(*p, e.p, 1e-9)) {
            why = "step-1 probability mismatch";
            return false;
        }
    }
    const std::vector<Expect> step2{{std::nullopt, 2 / 3.0}, {Transposition{4, 5}, 1 / 3.0}};
    if (s2.probabilities.p.size() != 2) {
        why = "step 2 has " + std::to_string(s2.probabilities.p.size()) + " outcomes";
        return false;
    }
    for (const auto& e : step2) {
        const auto p = prob_of(s2.channel.sp, s2.probabilities, e.member);
        if (!p || !close(*p, e.p, 1e-9)) {
            why = "step-2 probability mismatch";
            return false;
        }
    }
    if (max_diff(execute_plan(plan, pure_density(psi6())), pure_density(phi6())) > 1e-8) {
        why = "end-to-end channel error above 1e-8";
        return false;
    }
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
    if (elapsed.count() >= 1.0) {
        why = "runtime " + std::to_string(elapsed.count()) + " s >= 1 s";
        return false;
    }
    return true;
}

// ---------------------------------------------------------------- criterion 2
bool criterion_fourlevel_case(std::string& why) {
    const auto sets = enumerate_sps(build_table(pattern_of("LLGG")));
    if (sets.size() != 2 ||
        sorted_transpositions(sets[0]) != std::vector<Transposition>{{1, 3}, {1, 4}, {2, 3}} ||
        sorted_transpositions(sets[1]) != std::vector<Transposition>{{1, 4}, {2, 3}, {2, 4}}) {
        why = "enumerated sets differ from the two green sets";
        return false;
    }
    std::mt19937_64 rng(2024);
    int seen[2] = {0, 0};
    int negative_witness[2][2] = {{0, 0}, {0, 0}};
    const std::vector<Transposition> red1{{1, 3}, {2, 3}, {2, 4}};
    const std::vector<Transposition> red2{{1, 3}, {1, 4}, {2, 4}};
    while (seen[0] < 100 || seen[1] < 100) {
        auto [src, tgt] = testgen::random_pair_with_pattern(rng, pattern_of("LLGG"));
        const int region = beta_sum(src, tgt, 2, 3) >= 0 ? 0 : 1;
        if (seen[region] >= 100) continue;
        ++seen[region];
        const auto& sp = sets[static_cast<std::size_t>(region)];
        const auto outcome = solve_probabilities(coefficient_matrix(sp, tgt), src);
        if (!outcome.feasible()) {
            why = "green set infeasible in its own region";
            return false;
        }
        struct Form {
            Transposition t;
            double value;
        };
        std::vector<Form> forms;
        if (region == 0)
            forms = {{{2, 3}, alpha_sum(src, tgt, 2, 2) / gamma_gap(tgt, 2, 3)},
                     {{1, 4}, beta_sum(src, tgt, 4, 4) / gamma_gap(tgt, 1, 4)},
                     {{1, 3}, beta_sum(src, tgt, 2, 3) / gamma_gap(tgt, 1, 3)}};
        else
            forms = {{{2, 3}, beta_sum(src, tgt, 3, 3) / gamma_gap(tgt, 2, 3)},
                     {{1, 4}, alpha_sum(src, tgt, 1, 1) / gamma_gap(tgt, 1, 4)},
                     {{2, 4}, alpha_sum(src, tgt, 2, 3) / gamma_gap(tgt, 2, 4)}};
        for (const auto& f : forms) {
            const auto p = prob_of(sp, *outcome.probabilities, f.t);
            if (!p || !close(*p, f.value, 1e-9)) {
                why = "closed-form mismatch in region " + std::to_string(region + 1);
                return false;
            }
        }
        const std::vector<Transposition>* reds[2] = {&red1, &red2};
        for (int s = 0; s < 2; ++s) {
            const auto red = solve_probabilities(
                coefficient_matrix(PermutationSet{4, *reds[s]}, tgt), src);
            if (!red.feasible()) {
                if (red.reason != InfeasibleReason::negative_probability) {
                    why = "red set failed for a reason other than negativity";
                    return false;
                }
                ++negative_witness[region][s];
            }
        }
    }
    for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s)
            if (negative_witness[r][s] == 0) {
                why = "red set " + std::to_string(s + 1) +
                      " never produced a negative probability in region " +
                      std::to_string(r + 1);
                return false;
            }
    return true;
}

// ---------------------------------------------------------------- criterion 3
bool criterion_ninelevel_case(std::string& why) {
    const auto table = build_table(pattern_of("LGGLLGLLG"));
    const auto mandatory = mandatory_permutations(table);
    if (mandatory !=
        std::vector<Transposition>{{7, 9}, {8, 9}, {1, 2}, {1, 3}, {5, 6}, {1, 9}}) {
        why = "mandatory set differs from the documented six operators";
        return false;
    }
    const auto sets = enumerate_sps(table);
    if (sets.size() != 3) {
        why = "expected 3 SPs, got " + std::to_string(sets.size());
        return false;
    }
    std::mt19937_64 rng(2025);
    int seen[3] = {0, 0, 0};
    while (seen[0] < 100 || seen[1] < 100 || seen[2] < 100) {
        auto [src, tgt] = testgen::random_pair_with_pattern(rng, pattern_of("LGGLLGLLG"));
        const double b456 = beta_sum(src, tgt, 4, 6);
        const double b56 = beta_sum(src, tgt, 5, 6);
        const int region = b456 >= 0 ? 0 : (b56 >= 0 ? 1 : 2);
        if (seen[region] >= 100) continue;
        ++seen[region];
        const auto& sp = sets[static_cast<std::size_t>(region)];
        const auto outcome = solve_probabilities(coefficient_matrix(sp, tgt), src);
        if (!outcome.feasible()) {
            why = "region SP infeasible, region " + std::to_string(region + 1);
            return false;
        }
        auto a = [&](int x, int k) { return alpha_sum(src, tgt, x, k); };
        auto b = [&](int l, int y) { return beta_sum(src, tgt, l, y); };
        auto g = [&](int x, int y) { return gamma_gap(tgt, x, y); };
        struct Form {
            Transposition t;
            double value;
        };
        std::vector<Form> forms{{{7, 9}, a(7, 7) / g(7, 9)},
                                {{8, 9}, a(8, 8) / g(8, 9)},
                                {{1, 2}, b(2, 2) / g(1, 2)},
                                {{1, 3}, b(3, 3) / g(1, 3)}};
        if (region == 0) {
            forms.push_back({{5, 6}, a(5, 5) / g(5, 6)});
            forms.push_back({{1, 9}, b(7, 9) / g(1, 9)});
            forms.push_back({{1, 6}, b(4, 6) / g(1, 6)});
            forms.push_back({{4, 6}, a(4, 4) / g(4, 6)});
        } else if (region == 1) {
            forms.push_back({{5, 6}, a(5, 5) / g(5, 6)});
            forms.push_back({{1, 9}, a(1, 3) / g(1, 9)});
            forms.push_back({{4, 9}, a(4, 6) / g(4, 9)});
            forms.push_back({{4, 6}, b(5, 6) / g(4, 6)});
        } else {
            forms.push_back({{5, 6}, b(6, 6) / g(5, 6)});
            forms.push_back({{1, 9}, a(1, 3) / g(1, 9)});
            forms.push_back({{4, 9}, a(4, 4) / g(4, 9)});
            forms.push_back({{5, 9}, a(5, 6) / g(5, 9)});
        }
        double rest = 1.0;
        for (const auto& f : forms) {
            const auto p = prob_of(sp, *outcome.probabilities, f.t);
            if (!p || !close(*p, f.value, 1e-9)) {
                why = "closed-form mismatch in region " + std::to_string(region + 1);
                return false;
            }
            rest -= f.value;
        }
        const auto p1 = prob_of(sp, *outcome.probabilities, std::nullopt);
        if (!close(*p1, rest, 1e-9)) {
            why = "identity probability differs from 1 - sum";
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------- criterion 4
bool criterion_generalized_cases(std::string& why) {
    std::mt19937_64 rng(2026);
    for (int d = 5; d <= 12; ++d) {
        std::string row(static_cast<std::size_t>(d - 1), 'L');
        row += 'G';
        std::string column = "L" + std::string(static_cast<std::size_t>(d - 1), 'G');
        for (int it = 0; it < 25; ++it) {
            {
                auto [src, tgt] = testgen::random_pair_with_pattern(rng, pattern_of(row));
                auto solution = find_feasible_sp(src, tgt);
                for (int x = 1; x < d; ++x) {
                    const double expect =
                        (tgt.mu_at(x) - src.mu_at(x)) / (tgt.mu_at(x) - tgt.mu_at(d));
                    const auto p =
                        prob_of(solution.sp, solution.probabilities, Transposition{x, d});
                    if (!p || !close(*p, expect, 1e-9)) {
                        why = "single-row probability mismatch at d=" + std::to_string(d);
                        return false;
                    }
                }
            }
            {
                auto [src, tgt] = testgen::random_pair_with_pattern(rng, pattern_of(column));
                auto solution = find_feasible_sp(src, tgt);
                for (int y = 2; y <= d; ++y) {
                    const double expect =
                        (src.mu_at(y) - tgt.mu_at(y)) / (tgt.mu_at(1) - tgt.mu_at(y));
                    const auto p =
                        prob_of(solution.sp, solution.probabilities, Transposition{1, y});
                    if (!p || !close(*p, expect, 1e-9)) {
                        why = "single-column probability mismatch at d=" + std::to_string(d);
                        return false;
                    }
                }
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------- criterion 5
bool criterion_property_suite(std::string& why) {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2027);
    for (int d = 2; d <= 7; ++d) {
        for (int it = 0; it < 1000; ++it) {
            auto [src, tgt] = testgen::random_majorizing_pair(rng, d);
            SpSolution solution = find_feasible_sp(src, tgt);
            auto channel =
                build_kraus(solution.sp, solution.probabilities, solution.cmat, src);
            if (verify_completeness(channel) > 1e-10) {
                why = "completeness residual above 1e-10 at d=" + std::to_string(d);
                return false;
            }
            if (max_diff(apply_channel(channel, pure_density(src)), pure_density(tgt)) >
                1e-9) {
                why = "channel exactness above 1e-9 at d=" + std::to_string(d);
                return false;
            }
            if (!verify_incoherent(channel)) {
                why = "structurally coherent Kraus operator at d=" + std::to_string(d);
                return false;
            }
        }
    }
    for (int d = 2; d <= 5; ++d) {
        for (int it = 0; it < 200; ++it) {
            auto [src, tgt] = testgen::random_non_majorizing_pair(rng, d);
            if (!brute_force_oracle(src, tgt).empty()) {
                why = "oracle found a feasible subset for a non-majorizing pair";
                return false;
            }
        }
    }
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
    if (elapsed.count() >= 300.0) {
        why = "runtime " + std::to_string(elapsed.count()) + " s >= 5 min";
        return false;
    }
    return true;
}

// ---------------------------------------------------------------- criterion 6
bool criterion_locc_examples(std::string& why) {
    std::mt19937_64 rng(2028);
    struct Case {
        const char* pattern;
        std::function<std::vector<std::pair<Transposition, double>>(
            const CoherenceVector&, const CoherenceVector&)>
            forms;
    };
    const std::vector<Case> cases{
        {"LLG",
         [](const CoherenceVector& s, const CoherenceVector& t) {
             return std::vector<std::pair<Transposition, double>>{
                 {{2, 3}, (t.mu_at(2) - s.mu_at(2)) / (t.mu_at(2) - t.mu_at(3))},
                 {{1, 3}, (t.mu_at(1) - s.mu_at(1)) / (t.mu_at(1) - t.mu_at(3))}};
         }},
        {"LGG",
         [](const CoherenceVector& s, const CoherenceVector& t) {
             return std::vector<std::pair<Transposition, double>>{
                 {{1, 2}, (s.mu_at(2) - t.mu_at(2)) / (t.mu_at(1) - t.mu_at(2))},
                 {{1, 3}, (s.mu_at(3) - t.mu_at(3)) / (t.mu_at(1) - t.mu_at(3))}};
         }},
        {"LGLG",
         [](const CoherenceVector& s, const CoherenceVector& t) {
             return std::vector<std::pair<Transposition, double>>{
                 {{1, 2}, (s.mu_at(2) - t.mu_at(2)) / (t.mu_at(1) - t.mu_at(2))},
                 {{3, 4}, (t.mu_at(3) - s.mu_at(3)) / (t.mu_at(3) - t.mu_at(4))},
                 {{1, 4}, (s.mu_at(3) + s.mu_at(4) - t.mu_at(3) - t.mu_at(4)) /
                              (t.mu_at(1) - t.mu_at(4))}};
         }}};
    for (const auto& c : cases) {
        for (int it = 0; it < 100; ++it) {
            auto [src, tgt] = testgen::random_pair_with_pattern(rng, pattern_of(c.pattern));
            auto solution = find_feasible_sp(src, tgt);
            auto plan =
                build_locc_plan(solution.sp, solution.probabilities, solution.cmat, src);
            for (const auto& [t, expect] : c.forms(src, tgt)) {
                const auto p = prob_of(solution.sp, solution.probabilities, t);
                if (!p || !close(*p, expect, 1e-9)) {
                    why = std::string("probability mismatch in case ") + c.pattern;
                    return false;
                }
            }
            const auto report = simulate_locc(plan, src, tgt);
            if (!close(report.total_probability, 1.0, 1e-10)) {
                why = "total outcome probability differs from 1";
                return false;
            }
            for (const auto& o : report.outcomes)
                if (o.overlap < 1.0 - 1e-9) {
                    why = "per-outcome overlap below 1 - 1e-9";
                    return false;
                }
        }
    }
    return true;
}

// ---------------------------------------------------------------- criterion 7
bool criterion_protocol_equivalence(std::string& why) {
    std::mt19937_64 rng(2029);
    int total = 0;
    while (total < 200) {
        for (int d = 6; d <= 12 && total < 200; ++d, ++total) {
            auto [src, tgt] = testgen::random_majorizing_pair(rng, d);
            auto solution = find_feasible_sp(src, tgt);
            auto single =
                build_kraus(solution.sp, solution.probabilities, solution.cmat, src);
            const auto plan = plan_sequence(src, tgt, 5);
            const auto rho = pure_density(src);
            if (max_diff(apply_channel(single, rho), execute_plan(plan, rho)) > 1e-8) {
                why = "protocol outputs differ at d=" + std::to_string(d);
                return false;
            }
            if (!plan.fallback_used && plan.step_count() > (d + 2) / 4) {
                why = "step count above floor((d+2)/4) at d=" + std::to_string(d);
                return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------- criterion 8
bool criterion_zeta_bound(std::string& why) {
    for (int d = 3; d <= 12; ++d) {
        const int middles = 1 << (d - 2);
        for (int bits = 0; bits < middles; ++bits) {
            CasePattern p;
            p.relations.assign(static_cast<std::size_t>(d), Relation::LE);
            p.relations.back() = Relation::GE;
            for (int k = 0; k < d - 2; ++k)
                if (bits & (1 << k))
                    p.relations[static_cast<std::size_t>(k + 1)] = Relation::GE;
            const int zeta = build_table(p).zeta();
            if (zeta < d - 1 || zeta > (d / 2) * ((d + 1) / 2)) {
                why = "zeta out of bounds at d=" + std::to_string(d);
                return false;
            }
        }
    }
    return true;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"1 six-level example (2 steps, reference probabilities, exact channel)",
         criterion_sixlevel_example},
        {"2 four-level case: green sets, closed forms, red-set negativity",
         criterion_fourlevel_case},
        {"3 nine-level case: mandatory set, three subcase SPs, closed forms",
         criterion_ninelevel_case},
        {"4 generalized single-row / single-column solutions, d = 5..12",
         criterion_generalized_cases},
        {"5 property suite: 1000 pairs/d solve + verify, oracle converse",
         criterion_property_suite},
        {"6 LOCC examples: three-level cases, four-level case, simulation",
         criterion_locc_examples},
        {"7 protocol equivalence and step bound on 200 random pairs",
         criterion_protocol_equivalence},
        {"8 zeta bound over all patterns, d = 3..12", criterion_zeta_bound},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        std::string why;
        bool ok = false;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            ok = c.body(why);
        } catch (const std::exception& e) {
            why = std::string("exception: ") + e.what();
        }
        const auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0);
        if (ok) {
            std::printf("[PASS] criterion %s (%.2fs)\n", c.name.c_str(), dt.count());
        } else {
            std::printf("[FAIL] criterion %s (%.2fs): %s\n", c.name.c_str(), dt.count(),
                        why.c_str());
            ++failures;
        }
    }
    return failures;
}
