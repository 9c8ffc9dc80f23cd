#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "sampling_kantorovich/kernel_io.hpp"
#include "sampling_kantorovich/moments.hpp"
#include "sampling_kantorovich/operators.hpp"

using namespace sampling;

namespace {

// Brute-force oracles: fixed wide k range, cell means by adaptive quadrature.
double brute_generalized(const kernel& chi, const sampling::signal& f, double w, double x)
{
    const auto c = static_cast<long>(std::floor(w * x));
    double s = 0.0;
    for (long k = c - 40; k <= c + 40; ++k)
        s += chi(w * x - k) * f(k / w);
    return s;
}

double brute_kantorovich(const kernel& chi, const sampling::signal& f, double w, double x, double delta = 0.0)
{
    const auto c = static_cast<long>(std::floor(w * x));
    double s = 0.0;
    for (long k = c - 40; k <= c + 40; ++k) {
        const double a = (k + delta) / w;
        const double b = (k + 1 + delta) / w;
        const double mean = integrate_adaptive(f.f, a, b, {1e-15, 40}).value / (b - a);
        s += chi(w * x - k - delta) * mean;
    }
    return s;
}

const kernel& m2()
{
    static const kernel k = make_bspline_kernel(2);
    return k;
}

const kernel& chi2()
{
    static const kernel k = named_kernel("chi2");
    return k;
}

} // namespace

TEST(GeneralizedApply, WorkedExamples)
{
    EXPECT_NEAR(generalized_apply(m2(), signals::constant(7.0), 10.0, 0.3), 7.0, 1e-14);
    EXPECT_NEAR(generalized_apply(chi2(), signals::affine(2.0, 1.0), 4.0, 1.25), 3.5, 1e-13);
    const double g = generalized_apply(m2(), signals::sine(), 100.0, 0.0);
    EXPECT_NEAR(g, brute_generalized(m2(), signals::sine(), 100.0, 0.0), 1e-15);
    // |G_w f - f| <= ||f''|| M_2(M_2) / 2 w^-2 = 1/8 * 1e-4
    EXPECT_LE(std::fabs(g), 1.25e-5);
}

TEST(GeneralizedApply, MatchesBruteForce)
{
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> xd(-3.0, 3.0);
    for (const auto* chi : {&m2(), &chi2()})
        for (const auto& f : {signals::sine(), signals::gaussian(), signals::runge()})
            for (double w : {1.0, 7.5, 64.0})
                for (int i = 0; i < 5; ++i) {
                    const double x = xd(rng);
                    EXPECT_NEAR(generalized_apply(*chi, f, w, x), brute_generalized(*chi, f, w, x), 1e-13);
                }
}

TEST(CellMean, Examples)
{
    EXPECT_NEAR(cell_mean(signals::polynomial({0.0, 1.0}), 0.0, 1.0), 0.5, 1e-15);
    EXPECT_NEAR(cell_mean(signals::constant(-2.5), 3.0, 3.4), -2.5, 1e-14);
    EXPECT_NEAR(cell_mean(signals::sine(), 0.0, 0.1), (1 - std::cos(0.1)) / 0.1, 1e-15);
    EXPECT_THROW(cell_mean(signals::sine(), 1.0, 1.0), error);
}

TEST(CellMean, QuadraturePathWithoutAntiderivative)
{
    auto s = signals::sine();
    s.antiderivative = nullptr;
    EXPECT_NEAR(cell_mean(s, 0.0, 0.1), (1 - std::cos(0.1)) / 0.1, 1e-15);
    // Wide cell forces the adaptive fallback.
    EXPECT_NEAR(cell_mean(s, 0.0, 40.0), (1 - std::cos(40.0)) / 40.0, 1e-10);
    EXPECT_THROW(cell_mean(s, 0.0, 1.0, cell_rule::antiderivative), error);
    // Forcing quadrature on a signal that has an antiderivative.
    EXPECT_NEAR(cell_mean(signals::gaussian(), -0.2, 0.3, cell_rule::quadrature),
                cell_mean(signals::gaussian(), -0.2, 0.3, cell_rule::antiderivative), 1e-15);
}

TEST(KantorovichApply, WorkedExamples)
{
    EXPECT_NEAR(kantorovich_apply(m2(), signals::constant(7.0), 10.0, 0.3), 7.0, 1e-13);
    EXPECT_NEAR(kantorovich_apply(chi2(), signals::polynomial({0.0, 1.0}), 10.0, 0.2), 0.25, 1e-13);
    const double x = std::numbers::pi / 4;
    const double s = kantorovich_apply(m2(), signals::sine(), 50.0, x);
    EXPECT_NEAR(s, brute_kantorovich(m2(), signals::sine(), 50.0, x), 1e-14);
    EXPECT_NEAR(s, std::sin(x) + std::cos(x) / 100.0, 1e-3);
}

TEST(KantorovichApply, MatchesBruteForce)
{
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> xd(-3.0, 3.0);
    for (const auto* chi : {&m2(), &chi2()})
        for (const auto& f : {signals::sine(), signals::gaussian(), signals::runge()})
            for (double w : {1.0, 7.5, 64.0})
                for (int i = 0; i < 4; ++i) {
                    const double x = xd(rng);
                    EXPECT_NEAR(kantorovich_apply(*chi, f, w, x), brute_kantorovich(*chi, f, w, x), 1e-12);
                }
}

TEST(KantorovichShiftedApply, WorkedExamples)
{
    EXPECT_NEAR(kantorovich_shifted_apply(m2(), signals::constant(3.0), 5.0, 0.7, {0.4}), 3.0, 1e-14);
    const double v = kantorovich_shifted_apply(m2(), signals::sine(), 40.0, 0.0, {0.5});
    EXPECT_NEAR(v, brute_kantorovich(m2(), signals::sine(), 40.0, 0.0, 0.5), 1e-14);
    EXPECT_LE(std::fabs(v), 1.0 / 40.0);
}

TEST(KantorovichShiftedApply, ZeroOffsetIsBitIdentical)
{
    std::mt19937 rng(10);
    std::uniform_real_distribution<double> xd(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double x = xd(rng);
        const double a = kantorovich_apply(chi2(), signals::gaussian(), 33.0, x);
        const double b = kantorovich_shifted_apply(chi2(), signals::gaussian(), 33.0, x, {0.0});
        EXPECT_EQ(std::memcmp(&a, &b, sizeof a), 0);
    }
}

TEST(KantorovichShiftedApply, TranslationIdentity)
{
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> yd(-2.0, 2.0);
    std::uniform_real_distribution<double> xd(-3.0, 3.0);
    const auto f = signals::sine();
    for (const auto* chi : {&m2(), &chi2()})
        for (double w : {16.0, 64.0})
            for (int i = 0; i < 10; ++i) {
                const double y = yd(rng);
                const double x = xd(rng);
                const double lhs = kantorovich_shifted_apply(*chi, f, w, x - y, {-y * w});
                const double rhs = kantorovich_apply(*chi, f.translated(y), w, x);
                EXPECT_NEAR(lhs, rhs, 1e-10);
            }
}

TEST(Operators, Linearity)
{
    std::mt19937 rng(14);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    const auto f = signals::gaussian();
    const auto g = signals::sine();
    for (int i = 0; i < 20; ++i) {
        const double alpha = d(rng), beta = d(rng), x = d(rng), w = 5.0 + 10.0 * std::fabs(d(rng));
        sampling::signal h;
        h.name = "combo";
        h.f = [&](double t) { return alpha * f(t) + beta * g(t); };
        h.antiderivative = [&](double t) { return alpha * f.antiderivative(t) + beta * g.antiderivative(t); };
        for (const auto* chi : {&m2(), &chi2()}) {
            EXPECT_NEAR(generalized_apply(*chi, h, w, x),
                        alpha * generalized_apply(*chi, f, w, x) + beta * generalized_apply(*chi, g, w, x), 1e-10);
            EXPECT_NEAR(kantorovich_apply(*chi, h, w, x),
                        alpha * kantorovich_apply(*chi, f, w, x) + beta * kantorovich_apply(*chi, g, w, x), 1e-10);
        }
    }
}

TEST(Operators, ConstantReproduction)
{
    std::mt19937 rng(16);
    std::uniform_real_distribution<double> xd(-5.0, 5.0);
    const auto c = signals::constant(-4.25);
    std::vector<kernel> kernels{m2(), chi2(), make_bspline_kernel(1), make_bspline_kernel(5),
                                named_kernel("jackson3")};
    for (const auto& chi : kernels)
        for (double w : {1.0, 10.0, 100.0})
            for (int i = 0; i < 50; ++i) {
                const double x = xd(rng);
                // Decaying kernels are truncated at tail budget 1e-6 scaled by |c|.
                const double tol = chi.is_compact() ? 1e-12 : 1e-6 * 4.25 * 1.01;
                EXPECT_NEAR(generalized_apply(chi, c, w, x), -4.25, tol) << chi.name();
                EXPECT_NEAR(kantorovich_apply(chi, c, w, x), -4.25, tol) << chi.name();
            }
}

TEST(Operators, DecayKernelWindowsAndErrors)
{
    const auto j2 = named_kernel("jackson2");
    const auto win = make_eval_window(j2, signals::sine(), 10.0, 0.3, {}, {1e-6});
    EXPECT_LT(win.k_lo, 3);
    EXPECT_GT(win.k_hi, 3);
    const auto slow = kernel("slow", [](double u) { return 1.0 / (1.0 + u * u); }, decay_support{1.0, 1.0});
    try {
        generalized_apply(slow, signals::sine(), 4.0, 0.0);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::truncation_infeasible);
    }
    EXPECT_THROW(generalized_apply(m2(), signals::sine(), 0.0, 0.0), error);
    EXPECT_THROW(generalized_apply(m2(), signals::sine(), -1.0, 0.0), error);
}

TEST(Operators, CompactWindowCoversSupport)
{
    const auto win = make_eval_window(chi2(), signals::sine(), 10.0, 0.37, {}, {});
    // chi2 is supported on [1, 4]; w x = 3.7 so k ranges over [-0.3, 2.7].
    EXPECT_EQ(win.k_lo, 0);
    EXPECT_EQ(win.k_hi, 2);
}

TEST(Operators, BatchMatchesPointwise)
{
    std::vector<double> xs;
    for (int i = 0; i < 300; ++i)
        xs.push_back(-3.0 + 0.02 * i);
    const auto batch = apply_batch(chi2(), signals::runge(), operator_tag::kantorovich(), 20.0, xs);
    for (std::size_t i = 0; i < xs.size(); ++i)
        EXPECT_EQ(batch[i], kantorovich_apply(chi2(), signals::runge(), 20.0, xs[i]));
}

TEST(RepresentationDecompose, WorkedExamples)
{
    const auto lin = representation_decompose(chi2(), signals::polynomial({0.0, 1.0}), 2, 10.0, 0.2);
    EXPECT_NEAR(lin.main_sum, 0.25, 1e-13);
    EXPECT_NEAR(lin.remainder, 0.0, 1e-13);

    for (int r = 1; r <= 4; ++r) {
        const auto c = representation_decompose(m2(), signals::constant(2.0), r, 13.0, 0.41);
        EXPECT_NEAR(c.main_sum, 2.0, 1e-13);
        EXPECT_NEAR(c.remainder, 0.0, 1e-13);
    }

    const auto s = representation_decompose(m2(), signals::sine(), 1, 100.0, 0.5);
    EXPECT_NEAR(s.remainder, std::cos(0.5) / 200.0, 1e-4);
    EXPECT_LE(std::fabs(s.remainder), 1.0 * 1.0 / (2.0 * 100.0));
}

TEST(RepresentationDecompose, IdentityAndRemainderBound)
{
    std::mt19937 rng(18);
    std::uniform_real_distribution<double> xd(-3.0, 3.0);
    for (const auto* chi : {&m2(), &chi2()}) {
        const double m0 = absolute_moment(*chi, 0.0);
        for (const auto& f : {signals::sine(), signals::cosine(), signals::gaussian()})
            for (int r = 1; r <= 3; ++r)
                for (double w : {8.0, 32.0, 128.0})
                    for (int i = 0; i < 5; ++i) {
                        const double x = xd(rng);
                        const auto d = representation_decompose(*chi, f, r, w, x);
                        EXPECT_EQ(d.kantorovich - d.main_sum, d.remainder);
                        const double sum = d.main_sum + d.remainder;
                        const double mag = std::max(std::fabs(d.main_sum), std::fabs(d.kantorovich));
                        EXPECT_LE(std::fabs(sum - d.kantorovich), std::nextafter(mag, INFINITY) - mag);
                        double fact = 1.0;
                        for (int q = 2; q <= r + 1; ++q)
                            fact *= q;
                        const double bound = *f.sup_bound(r) * m0 / (fact * std::pow(w, r));
                        EXPECT_LE(std::fabs(d.remainder), bound + 1e-13) << chi->name() << " " << f.name;
                    }
    }
}

TEST(RepresentationDecompose, RemainderOrder)
{
    const auto f = signals::sine();
    for (int r = 1; r <= 3; ++r) {
        double lo = INFINITY, hi = 0.0;
        for (double w = 8.0; w <= 256.0; w *= 2.0) {
            const double scaled = std::fabs(representation_decompose(m2(), f, r, w, 0.9).remainder) * std::pow(w, r);
            lo = std::min(lo, scaled);
            hi = std::max(hi, scaled);
        }
        EXPECT_LE(hi, 1.0) << r;
        EXPECT_LE(hi / lo, 4.0) << r;
    }
}

TEST(RepresentationDecompose, MissingDerivatives)
{
    try {
        representation_decompose(m2(), signals::gaussian(), 4, 10.0, 0.0);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::missing_derivatives);
    }
}
