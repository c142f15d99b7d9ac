#include "generators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <string>

using namespace dche;
using namespace dche::testing;

namespace {

DcheParams<Rational> rp(Rational alpha, Rational gamma, Rational delta, Rational epsilon, Rational q) {
    return {alpha, gamma, delta, epsilon, q};
}

ErrorKind kind_of(const auto& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::InvalidArgument;
}

double max_abs(const std::vector<Complex>& a) {
    double m = 0.0;
    for (const auto& x : a)
        m = std::max(m, std::abs(x));
    return m;
}

} // namespace

TEST(TerminationCondition, ConstraintsZeroTheTopEntry) {
    Rng rng(401);
    for (int i = 0; i < 20; ++i) {
        auto p = random_generic(rng);
        const long N = std::uniform_int_distribution<long>(0, 6)(rng);

        auto a = p;
        a.alpha = -a.epsilon * N;
        EXPECT_TRUE(termination_condition(make_family(a, Family::ThreeTermA), N).satisfied);
        if (a.delta != 0) {
            EXPECT_FALSE(termination_condition(make_family(a, Family::ThreeTermA), N + 1).satisfied);
        }

        auto c = p;
        c.alpha = c.epsilon * (c.gamma + N);
        EXPECT_TRUE(termination_condition(make_family(c, Family::ThreeTermC), N).satisfied);

        auto d = a;
        d.delta = 0;
        FamilyOptions<Rational> dopt;
        dopt.gamma0 = random_noninteger(rng, Rational(-4), Rational(4));
        EXPECT_TRUE(termination_condition(make_family(d, Family::ThreeTermDeg, dopt), N).satisfied);
        auto d2 = p;
        d2.delta = 0;
        d2.gamma = *dopt.gamma0 - N;
        EXPECT_TRUE(termination_condition(make_family(d2, Family::ThreeTermDeg, dopt), N).satisfied);
        auto d3 = p;
        d3.delta = 0;
        d3.alpha = d3.epsilon * (d3.gamma + N);
        dopt.alpha0 = *dopt.gamma0;
        EXPECT_TRUE(termination_condition(make_family(d3, Family::ThreeTermDeg, dopt), N).satisfied);

        FamilyOptions<Rational> fopt;
        fopt.gamma0 = p.gamma + N;
        EXPECT_TRUE(termination_condition(make_family(p, Family::FiveTerm, fopt), N).satisfied);
        fopt.gamma0 = random_noninteger(rng, Rational(-4), Rational(4));
        EXPECT_TRUE(termination_condition(make_family(a, Family::FiveTerm, fopt), N).satisfied);
        auto f3 = p;
        f3.alpha = -f3.epsilon * (N + 1);
        EXPECT_TRUE(termination_condition(make_family(f3, Family::FiveTerm, fopt), N).satisfied);
    }
}

TEST(TerminationCondition, TwoTermHasNone) {
    const auto inst = make_family(rp(Rational(1, 2), Rational(7, 4), 2, 1, -2), Family::TwoTerm);
    EXPECT_EQ(kind_of([&] { termination_condition(inst, 1); }), ErrorKind::InvalidArgument);
}

TEST(QPolynomial, ThreeTermAOrderZero) {
    const auto qp = q_polynomial(Family::ThreeTermA, rp(0, Rational(5, 2), Rational(3, 4), 1, 0), 0);
    EXPECT_EQ(qp.terminal(), (Polynomial<Rational>{Rational(0), Rational(-2, 5)}));
}

TEST(QPolynomial, ThreeTermAOrderOne) {
    const auto qp = q_polynomial(Family::ThreeTermA, rp(-1, 3, 2, 1, 0), 1);
    // a_2 = (q^2 - gamma q + delta eps) / (2 gamma (gamma + 1)).
    EXPECT_EQ(qp.terminal() * Rational(24), (Polynomial<Rational>{Rational(2), Rational(-3), Rational(1)}));

    Rng rng(402);
    for (int i = 0; i < 20; ++i) {
        auto p = random_generic(rng);
        p.alpha = -p.epsilon;
        const auto t = q_polynomial(Family::ThreeTermA, p, 1).terminal();
        const Rational k = 2 * p.gamma * (p.gamma + 1);
        EXPECT_EQ(t * k, (Polynomial<Rational>{p.delta * p.epsilon, -p.gamma, Rational(1)}));
    }
}

TEST(QPolynomial, ThreeTermCOrderZero) {
    const auto qp = q_polynomial(Family::ThreeTermC, rp(2, 2, Rational(7, 10), 1, 0), 0);
    EXPECT_EQ(qp.terminal(), (Polynomial<Rational>{Rational(-7, 20), Rational(-1, 2)}));
}

TEST(QPolynomial, Errors) {
    EXPECT_EQ(kind_of([] { q_polynomial(Family::ThreeTermA, rp(1, 3, 2, 1, 0), 1); }), ErrorKind::ConditionViolated);
    EXPECT_EQ(kind_of([] { q_polynomial(Family::SevenTermV, rp(1, 3, 2, 1, 0), 1); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { q_polynomial(Family::TwoTerm, rp(1, 3, 2, 1, -2), 1); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { q_polynomial(Family::ThreeTermDeg, rp(-1, 3, 0, 1, 0), 1); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { q_polynomial(Family::ThreeTermA, rp(-1, 3, 2, 1, 0), -1); }), ErrorKind::InvalidArgument);
}

TEST(QPolynomial, DegreeIsOrderPlusOne) {
    Rng rng(403);
    for (long N = 0; N <= 6; ++N) {
        for (int i = 0; i < 5; ++i) {
            auto p = random_generic(rng);
            auto a = p;
            a.alpha = -a.epsilon * N;
            EXPECT_EQ(q_polynomial(Family::ThreeTermA, a, N).terminal().degree(), N + 1) << a.describe();
            auto c = p;
            c.alpha = c.epsilon * (c.gamma + N);
            EXPECT_EQ(q_polynomial(Family::ThreeTermC, c, N).terminal().degree(), N + 1) << c.describe();
        }
    }
}

TEST(QSpectrum, ThreeTermAOrderOneExact) {
    const auto sp = q_spectrum(Family::ThreeTermA, rp(-1, 3, 2, 1, 0), 1);
    ASSERT_EQ(sp.roots.size(), 2u);
    EXPECT_EQ(sp.root_count(), 2u);
    EXPECT_EQ(sp.condition, "α/ε = −N");
    EXPECT_EQ(*sp.roots[0].exact, "1");
    EXPECT_EQ(*sp.roots[1].exact, "2");
    for (const auto& r : sp.roots) {
        EXPECT_TRUE(r.certified) << r.note;
        EXPECT_TRUE(r.exact_residual_zero.value_or(false));
        EXPECT_EQ(r.a_next, 0.0);
        EXPECT_EQ(r.a_next2, 0.0);
    }
    // q = 1: (2 + z)/3; q = 2: (1 + z)/3.
    const auto c1 = certify_finite_sum(make_family(rp(-1, 3, 2, 1, 1), Family::ThreeTermA), 1);
    const auto c2 = certify_finite_sum(make_family(rp(-1, 3, 2, 1, 2), Family::ThreeTermA), 1);
    EXPECT_EQ(c1.form->plain, (Polynomial<Rational>{Rational(2, 3), Rational(1, 3)}));
    EXPECT_EQ(c2.form->plain, (Polynomial<Rational>{Rational(1, 3), Rational(1, 3)}));
    EXPECT_TRUE(c1.form->exp_part.is_zero());
    EXPECT_TRUE(*c1.exact_residual_zero);
    EXPECT_TRUE(*c2.exact_residual_zero);
}

TEST(QSpectrum, ThreeTermCExponential) {
    const auto exact = q_spectrum(Family::ThreeTermC, rp(2, 2, Rational(7, 10), 1, 0), 0);
    ASSERT_EQ(exact.roots.size(), 1u);
    EXPECT_EQ(*exact.roots[0].exact, "-7/10");
    EXPECT_TRUE(exact.roots[0].certified);

    const auto fl = q_spectrum(Family::ThreeTermC, DcheParams<Complex>{2.0, 2.0, 0.7, 1.0, 0.0}, 0);
    ASSERT_EQ(fl.roots.size(), 1u);
    EXPECT_NEAR(std::abs(fl.roots[0].q + 0.7), 0.0, 1e-14);
    EXPECT_TRUE(fl.roots[0].certified);
    EXPECT_LE(fl.roots[0].residual, 1e-12);

    const auto cert = certify_finite_sum(make_family(rp(2, 2, Rational(7, 10), 1, Rational(-7, 10)), Family::ThreeTermC), 0);
    ASSERT_TRUE(cert.form.has_value());
    EXPECT_TRUE(cert.form->plain.is_zero());
    EXPECT_EQ(cert.form->exp_part, Polynomial<Rational>::constant(Rational(1)));
    EXPECT_EQ(cert.form->exponent, Rational(-1));
    EXPECT_TRUE(*cert.exact_residual_zero);
    EXPECT_LE(cert.max_residual, 1e-14);
}

TEST(QSpectrum, ConstantSolution) {
    const auto sp = q_spectrum(Family::ThreeTermA, rp(0, Rational(5, 2), Rational(3, 4), 1, 0), 0);
    ASSERT_EQ(sp.roots.size(), 1u);
    EXPECT_EQ(*sp.roots[0].exact, "0");
    const auto cert = certify_finite_sum(make_family(rp(0, Rational(5, 2), Rational(3, 4), 1, 0), Family::ThreeTermA), 0);
    EXPECT_EQ(cert.form->plain, Polynomial<Rational>::constant(Rational(1)));
    EXPECT_EQ(cert.max_residual, 0.0);
}

TEST(QSpectrum, StalledRootFindingIsUncertified) {
    RootOptions ropt;
    ropt.max_iterations = 1;
    const auto sp = q_spectrum(Family::ThreeTermA, DcheParams<Complex>{-4.0, 2.3, 1.7, 1.0, 0.0}, 4, {}, 1e-10, ropt);
    EXPECT_TRUE(sp.stalled);
    EXPECT_EQ(sp.root_count(), 5u);
    for (const auto& r : sp.roots)
        EXPECT_FALSE(r.certified);
}

TEST(QSpectrum, CertifiedRootsTerminateInFloatingPoint) {
    Rng rng(404);
    for (long N = 1; N <= 5; ++N) {
        for (const Family f : {Family::ThreeTermA, Family::ThreeTermC}) {
            auto p = convert_params<Complex>(random_dche(rng));
            p.alpha = f == Family::ThreeTermA ? -p.epsilon * double(N) : p.epsilon * (p.gamma + double(N));
            const auto sp = q_spectrum(f, p, N);
            EXPECT_EQ(sp.root_count(), std::size_t(N + 1));
            for (const auto& r : sp.roots) {
                if (!r.certified)
                    continue;
                const auto sol = compute_coefficients(make_family(p.with_q(r.q), f), N + 2);
                std::vector<Complex> head(sol.coefficients.begin(), sol.coefficients.begin() + N + 1);
                EXPECT_LE(std::abs(sol.coefficients[N + 1]), 1e-12 * max_abs(head)) << to_string(f) << " q=" << r.q;
            }
        }
    }
}

TEST(CertifyFiniteSum, FiveTermNeedsMoreThanTopEntry) {
    FamilyOptions<Rational> opt;
    opt.gamma0 = Rational(5, 2);
    const auto inst = make_family(rp(Rational(1, 3), Rational(3, 2), 1, 1, 1), Family::FiveTerm, opt);
    ASSERT_TRUE(termination_condition(inst, 1).satisfied);
    EXPECT_EQ(kind_of([&] { certify_finite_sum(inst, 1); }), ErrorKind::NotTerminated);
    const auto cert = certify_finite_sum(inst, 1, default_sample_points(), true);
    EXPECT_FALSE(cert.terminated);
    ASSERT_GE(cert.tail.size(), 3u);
    EXPECT_NE(cert.diagnostics.find("a_2 = "), std::string::npos) << cert.diagnostics;
}

TEST(CertifyFiniteSum, ExplicitFormMatchesSeries) {
    Rng rng(405);
    for (long N = 1; N <= 4; ++N) {
        for (const Family f : {Family::ThreeTermA, Family::ThreeTermC}) {
            auto p = convert_params<Complex>(random_dche(rng));
            p.alpha = f == Family::ThreeTermA ? -p.epsilon * double(N) : p.epsilon * (p.gamma + double(N));
            const auto sp = q_spectrum(f, p, N);
            for (const auto& r : sp.roots) {
                const auto cert = certify_finite_sum(make_family(p.with_q(r.q), f), N, default_sample_points(), true);
                ASSERT_TRUE(cert.form.has_value());
                for (int k = 0; k < 20; ++k) {
                    const Complex z = random_annulus(rng, 0.5, 2.0);
                    const auto series = evaluate_u(cert.solution, z, {1e-14, false, {}});
                    const auto form = cert.form->evaluate(z);
                    for (int d = 0; d < 3; ++d)
                        EXPECT_LE(std::abs(form[d] - series.d[d]), 1e-11 * std::max(std::abs(series.d[d]), 1e-300) + 1e-14)
                            << to_string(f) << " N=" << N << " d=" << d;
                }
            }
        }
    }
}

TEST(RightTermination, SevenTermReportsOverdeterminedConditions) {
    Rng rng(406);
    for (int i = 0; i < 10; ++i) {
        auto p = random_generic(rng);
        FamilyOptions<Rational> opt;
        opt.gamma0 = random_noninteger(rng, Rational(-4), Rational(4));
        const long N = std::uniform_int_distribution<long>(0, 4)(rng);
        for (const int shift : {0, 1, 2}) {
            if (N + shift == 0)
                continue;
            // alpha0 = -alpha/eps = -(N + shift).
            p.alpha = p.epsilon * (N + shift);
            const auto rep = right_termination_report(make_family(p, Family::SevenTermV, opt), N);
            EXPECT_TRUE(rep.condition.satisfied);
            EXPECT_EQ(rep.conditions.size(), 6u);
            EXPECT_EQ(rep.conditions.front().first, "a_" + std::to_string(N + 1));
        }
        // alpha0 + N = gamma0 + gamma - alpha/eps - 1 with alpha0 = -alpha/eps.
        p.gamma = Rational(N) + 1 - *opt.gamma0;
        if (!is_nonpositive_integer(p.gamma)) {
            const auto rep = right_termination_report(make_family(p, Family::SevenTermV, opt), N);
            EXPECT_TRUE(rep.condition.satisfied) << p.describe();
        }
    }
}

TEST(RightTermination, ThreeTermAllSatisfiedAtRoot) {
    const auto rep = right_termination_report(make_family(rp(-1, 3, 2, 1, 1), Family::ThreeTermA), 1);
    EXPECT_TRUE(rep.all_satisfied());
    const auto off = right_termination_report(make_family(rp(-1, 3, 2, 1, 3), Family::ThreeTermA), 1);
    EXPECT_TRUE(off.condition.satisfied);
    EXPECT_FALSE(off.all_satisfied());
}
