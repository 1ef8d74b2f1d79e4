#include <cmath>
#include <vector>

#include "doctest.h"
#include "pacp/degree_laws.hpp"

using namespace pacp;

namespace {

// Frozen reference values, computed with an independent arbitrary-precision
// implementation (direct gamma-function evaluation, no recurrences).
constexpr double kI00 = 0.144934066848226436;  // pi^2/6 - 3/2

}  // namespace

TEST_SUITE("degree_laws") {

TEST_CASE("stationary pmf closed forms") {
    // delta = 0 collapses to p_i = 4 / (i (i+1) (i+2))
    for (std::int64_t i = 1; i <= 40; ++i) {
        double expect = 4.0 / (double(i) * double(i + 1) * double(i + 2));
        CHECK(limit_pmf(i, 0.0) == doctest::Approx(expect).epsilon(1e-13));
    }
    // p_1(d) = (2+d)/(3+2d)
    for (double d : {-0.9, -0.5, 0.0, 0.4, 1.0, 2.3, 7.0})
        CHECK(limit_pmf(1, d) == doctest::Approx((2.0 + d) / (3.0 + 2.0 * d)).epsilon(1e-14));
    CHECK(limit_pmf(2, 1.0) == doctest::Approx(0.2).epsilon(1e-13));
    CHECK(limit_pmf(3, 1.0) == doctest::Approx(3.0 / 35.0).epsilon(1e-13));
    CHECK(limit_pmf(10, 1.0) == doctest::Approx(0.002997002997002997).epsilon(1e-13));
    CHECK(limit_pmf(4, -0.5) == doctest::Approx(0.0234375).epsilon(1e-13));
    CHECK(limit_pmf(7, 2.3) == doctest::Approx(0.00933709200079901516).epsilon(1e-13));
}

TEST_CASE("stationary tail closed forms") {
    for (std::int64_t i = 0; i <= 40; ++i) {
        double expect = 2.0 / (double(i + 1) * double(i + 2));
        CHECK(limit_tail(i, 0.0) == doctest::Approx(expect).epsilon(1e-13));
    }
    for (double d : {-0.9, 0.0, 1.3, 4.0}) CHECK(limit_tail(0, d) == 1.0);
    CHECK(limit_tail(1, 1.0) == doctest::Approx(0.4).epsilon(1e-13));
    CHECK(limit_tail(5, 1.0) == doctest::Approx(1.0 / 21.0).epsilon(1e-13));
    CHECK(limit_tail(3, -0.5) == doctest::Approx(0.078125).epsilon(1e-13));
    CHECK(limit_tail(6, 2.3) == doctest::Approx(0.0295312677234573507).epsilon(1e-13));
}

TEST_CASE("pmf and tail are one law") {
    for (double d : {-0.7, -0.2, 0.0, 0.6, 1.0, 3.1}) {
        for (std::int64_t i = 1; i <= 200; ++i) {
            // consecutive tails drop by exactly the pmf
            CHECK(limit_tail(i - 1, d) - limit_tail(i, d) ==
                  doctest::Approx(limit_pmf(i, d)).epsilon(1e-12));
            // (i + d) p_i = (2 + d) p_{>i}
            double lhs = (double(i) + d) * limit_pmf(i, d);
            double rhs = (2.0 + d) * limit_tail(i, d);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        }
    }
}

TEST_CASE("stationary law normalizes with mean 2") {
    struct Case {
        double d;
        double mean_tol;  // the truncated mean converges at rate n^{-(1+d)}
    };
    for (const Case& c : {Case{-0.5, 2e-3}, Case{0.0, 1e-5}, Case{1.0, 1e-8}}) {
        double sum = 0.0, mean = 0.0;
        std::int64_t n = 1 << 20;
        for (std::int64_t i = 1; i <= n; ++i) {
            double p = limit_pmf(i, c.d);
            sum += p;
            mean += double(i) * p;
        }
        CHECK(sum + limit_tail(n, c.d) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(mean == doctest::Approx(2.0).epsilon(c.mean_tol));
        CHECK(mean < 2.0);
    }
}

TEST_CASE("birth process pmf") {
    CHECK(bi_pmf(2, 0.7, 0.8, 2) == doctest::Approx(0.115325121038062515).epsilon(1e-13));
    CHECK(bi_pmf(2, 0.7, 0.8, 3) == doctest::Approx(0.171466750436409057).epsilon(1e-13));
    CHECK(bi_pmf(2, 0.7, 0.8, 7) == doctest::Approx(0.0872603294222745291).epsilon(1e-13));
    CHECK(bi_pmf(3, -0.9, 1.3, 5) == doctest::Approx(0.112345347761302475).epsilon(1e-13));
    // started at 1 with theta = 0 the law is geometric with success e^{-t}
    double t = 1.37;
    for (std::int64_t j = 1; j <= 12; ++j) {
        double expect = std::exp(-t) * std::pow(-std::expm1(-t), double(j - 1));
        CHECK(bi_pmf(1, 0.0, t, j) == doctest::Approx(expect).epsilon(1e-13));
    }
    CHECK(bi_pmf(1, 0.0, std::log(2.0), 4) == doctest::Approx(0.0625).epsilon(1e-13));
    // degenerate time and unreachable states
    CHECK(bi_pmf(3, 0.2, 0.0, 3) == 1.0);
    CHECK(bi_pmf(3, 0.2, 0.0, 4) == 0.0);
    CHECK(bi_pmf(3, 0.2, 1.0, 2) == 0.0);
}

TEST_CASE("birth process tail") {
    CHECK(bi_tail(2, 0.7, 0.8, 5) == doctest::Approx(0.387828033995983312).epsilon(1e-12));
    CHECK(bi_tail(3, -0.9, 1.3, 8) == doctest::Approx(0.41556203404491373).epsilon(1e-12));
    CHECK(bi_tail(2, 0.7, 0.8, 1) == 1.0);
    CHECK(bi_tail(4, 0.0, 0.0, 9) == 0.0);
    // running complement agrees with direct pmf evaluation
    for (std::int64_t j = 2; j <= 30; ++j) {
        double drop = bi_tail(2, -0.4, 0.9, j - 1) - bi_tail(2, -0.4, 0.9, j);
        CHECK(drop == doctest::Approx(bi_pmf(2, -0.4, 0.9, j)).epsilon(1e-11));
    }
}

TEST_CASE("birth process mean") {
    struct Case {
        std::int64_t i;
        double theta, t;
    };
    for (const Case& c : {Case{2, 0.7, 0.8}, Case{3, -0.9, 1.3}, Case{1, 0.0, 2.0}}) {
        double expect = (double(c.i) + c.theta) * std::exp(c.t) - c.theta;
        double mean = 0.0;
        for (std::int64_t j = c.i; j < c.i + 4000; ++j) mean += double(j) * bi_pmf(c.i, c.theta, c.t, j);
        CHECK(mean == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("pmf equals exponential time mixture of the birth process") {
    // p_i(d) = int_0^inf (2+d) e^{-(2+d)u} P(xi^1_d(u) = i) du
    struct Case {
        std::int64_t i;
        double d;
    };
    for (const Case& c : {Case{1, 0.5}, Case{4, 0.5}, Case{3, -0.3}, Case{2, 0.0}}) {
        auto f = [&](double u) {
            return (2.0 + c.d) * std::exp(-(2.0 + c.d) * u) * bi_pmf(1, c.d, u, c.i);
        };
        double val = adaptive_simpson(f, 0.0, 60.0 / (2.0 + c.d), 1e-12, 30);
        CHECK(val == doctest::Approx(limit_pmf(c.i, c.d)).epsilon(1e-9));
    }
}

TEST_CASE("population score vanishes at the true offset") {
    for (double d : {-0.9, -0.5, 0.0, 0.4, 1.0, 2.3, 5.0}) {
        SeriesValue u = limit_score_detail(d, d, 1e-12);
        CHECK(std::abs(u.value) < 1e-8);
    }
}

TEST_CASE("population score frozen values and sign structure") {
    CHECK(limit_score(0.0, 1.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-9));
    CHECK(limit_score(1.0, 0.0) == doctest::Approx(-0.0434651996368804656).epsilon(1e-9));
    CHECK(limit_score(0.3, -0.5) == doctest::Approx(-0.118911530654456666).epsilon(1e-9));
    CHECK(limit_score(1.7, 0.4) == doctest::Approx(-0.0239909648602690454).epsilon(1e-9));
    // decreasing through the zero at the truth (the slope -I(lambda; delta)
    // is only guaranteed positive near the truth, so keep the grid moderate)
    double prev = limit_score(-0.8, 0.6);
    for (double lam : {-0.3, 0.1, 0.5, 0.6, 0.9, 2.0}) {
        double u = limit_score(lam, 0.6);
        CHECK(u < prev);
        if (lam < 0.6) CHECK(u > 0.0);
        if (lam > 0.6) CHECK(u < 0.0);
        prev = u;
    }
    CHECK(limit_score(6.0, 0.6) < 0.0);
}

TEST_CASE("information functional frozen values") {
    CHECK(fisher_info(0.0, 0.0) == doctest::Approx(kI00).epsilon(1e-10));
    CHECK(fisher_info(1.0, 1.0) == doctest::Approx(0.0241807118373501903).epsilon(1e-9));
    CHECK(fisher_info(0.5, 0.5) == doctest::Approx(0.0528596496413433928).epsilon(1e-9));
    CHECK(fisher_info(0.0, 1.0) == doctest::Approx(0.221322955737115325).epsilon(1e-9));
    CHECK(fisher_info(-0.5, -0.5) == doctest::Approx(0.633234649230838774).epsilon(1e-9));
    SeriesValue near_edge = fisher_info_detail(-0.9, -0.9, 1e-10);
    CHECK(near_edge.tail_err <= 1e-10);
    CHECK(near_edge.value > 0.0);
}

TEST_CASE("score slope equals negative information") {
    struct Case {
        double lam, d;
    };
    double h = 1e-5;
    for (const Case& c : {Case{0.3, 0.7}, Case{1.0, 0.0}}) {
        double slope = (limit_score(c.lam + h, c.d) - limit_score(c.lam - h, c.d)) / (2.0 * h);
        CHECK(slope == doctest::Approx(-fisher_info(c.lam, c.d)).epsilon(1e-5));
    }
}

TEST_CASE("certified truncation error covers the true error") {
    SeriesValue coarse = fisher_info_detail(0.0, 0.0, 1e-6);
    CHECK(std::abs(coarse.value - kI00) <= coarse.tail_err);
    SeriesValue fine = fisher_info_detail(0.0, 0.0, 1e-12);
    CHECK(fine.tail_err < coarse.tail_err);
    CHECK(fine.i_max > coarse.i_max);
    double ref = limit_score(1.0, 0.0);
    SeriesValue s = limit_score_detail(1.0, 0.0, 1e-6);
    CHECK(std::abs(s.value - ref) <= s.tail_err + 1e-12);
}

TEST_CASE("changepoint law collapses without a change") {
    CPLimitParams same;
    same.tstar = 0.4;
    same.delta1 = 0.7;
    same.delta2 = 0.7;
    same.t = 0.9;
    for (std::int64_t i = 1; i <= 50; ++i)
        CHECK(cp_limit_pmf(same, i) == doctest::Approx(limit_pmf(i, 0.7)).epsilon(1e-11));
    CHECK(cp_limit_tail(same, 20) == doctest::Approx(limit_tail(20, 0.7)).epsilon(1e-11));

    CPLimitParams at_start;
    at_start.tstar = 0.6;
    at_start.delta1 = 0.3;
    at_start.delta2 = 1.2;
    at_start.t = 0.6;
    for (std::int64_t i = 1; i <= 50; ++i)
        CHECK(cp_limit_pmf(at_start, i) == doctest::Approx(limit_pmf(i, 0.3)).epsilon(1e-12));
    CHECK(cp_limit_tail(at_start, 7) == doctest::Approx(limit_tail(7, 0.3)).epsilon(1e-12));
}

namespace {

CPLimitParams params_a() {
    CPLimitParams p;
    p.tstar = 0.5;
    p.delta1 = 0.0;
    p.delta2 = 1.0;
    p.t = 1.0;
    return p;
}

CPLimitParams params_b() {
    CPLimitParams p;
    p.tstar = 0.2;
    p.delta1 = 1.0;
    p.delta2 = 0.5;
    p.t = 0.9;
    return p;
}

}  // namespace

TEST_CASE("changepoint pmf and tail frozen values") {
    CPLimitParams a = params_a();
    CHECK(cp_limit_pmf(a, 1) == doctest::Approx(0.6209986841649145).epsilon(1e-11));
    CHECK(cp_limit_pmf(a, 2) == doctest::Approx(0.2003307016631624).epsilon(1e-11));
    CHECK(cp_limit_pmf(a, 5) == doctest::Approx(0.019517099220638802).epsilon(1e-11));
    CHECK(cp_limit_pmf(a, 17) == doctest::Approx(0.0005747142557844778).epsilon(1e-10));
    CHECK(cp_limit_tail(a, 3) == doctest::Approx(0.0992122628282961).epsilon(1e-11));
    CHECK(cp_limit_tail(a, 10) == doctest::Approx(0.012713953592677796).epsilon(1e-10));

    CPLimitParams b = params_b();
    CHECK(cp_limit_pmf(b, 1) == doctest::Approx(0.6227467987337287).epsilon(1e-11));
    CHECK(cp_limit_pmf(b, 2) == doctest::Approx(0.18658933390306248).epsilon(1e-11));
    CHECK(cp_limit_pmf(b, 5) == doctest::Approx(0.022575201033195907).epsilon(1e-11));
    CHECK(cp_limit_pmf(b, 17) == doctest::Approx(0.0006062928023509815).epsilon(1e-10));
    CHECK(cp_limit_tail(b, 3) == doctest::Approx(0.11249931042723593).epsilon(1e-11));
    CHECK(cp_limit_tail(b, 10) == doctest::Approx(0.013012262152083287).epsilon(1e-10));
}

TEST_CASE("series table matches the direct forms") {
    for (const CPLimitParams& p : {params_a(), params_b()}) {
        CpLimitSeries series(p);
        series.extend(300);
        for (std::int64_t i : {1, 2, 7, 40, 300}) {
            CHECK(series.pmf(i) == doctest::Approx(cp_limit_pmf(p, i)).epsilon(1e-10));
            // complement accumulation vs the four-term tail representation
            CHECK(series.tail(i) == doctest::Approx(cp_limit_tail(p, i)).epsilon(1e-9));
        }
    }
}

TEST_CASE("changepoint score and information frozen values") {
    CPLimitParams a = params_a();
    a.tail_tol = 1e-9;
    SeriesValue ua = cp_limit_score_detail(a, 0.3);
    CHECK(std::abs(ua.value - 0.0066221445379433) <= ua.tail_err + 3e-9);
    SeriesValue ia = cp_fisher_detail(a, 0.3);
    CHECK(std::abs(ia.value - 0.08519187714535925) <= ia.tail_err + 1e-11);

    CPLimitParams b = params_b();
    b.tail_tol = 1e-9;
    SeriesValue ub = cp_limit_score_detail(b, 0.0);
    CHECK(std::abs(ub.value - 0.0530110019334007) <= ub.tail_err + 1e-10);
    SeriesValue ib = cp_fisher_detail(b, 0.0);
    CHECK(std::abs(ib.value - 0.1768909193816199) <= ib.tail_err + 1e-11);

    // certified bound honest also at loose tolerance
    CPLimitParams loose = params_a();
    loose.tail_tol = 1e-5;
    SeriesValue coarse = cp_fisher_detail(loose, 0.3);
    CHECK(std::abs(coarse.value - 0.08519187714535925) <= coarse.tail_err);
}

TEST_CASE("changepoint functionals reduce to stationary at the start time") {
    CPLimitParams p;
    p.tstar = 0.35;
    p.delta1 = 0.8;
    p.delta2 = -0.2;
    p.t = 0.35;
    CHECK(cp_limit_score(p, 0.5) ==
          doctest::Approx(0.35 * limit_score(0.5, 0.8)).epsilon(1e-9));
    CHECK(cp_fisher(p, 0.5) == doctest::Approx(0.35 * fisher_info(0.5, 0.8)).epsilon(1e-9));
}

TEST_CASE("score increment vanishes only at the post-change offset") {
    CPLimitParams late = params_a();
    CPLimitParams early = params_a();
    early.t = 0.7;
    late.tail_tol = early.tail_tol = 1e-9;
    auto diff = [&](double lam) {
        return cp_limit_score(late, lam) - cp_limit_score(early, lam);
    };
    CHECK(std::abs(diff(1.0)) < 5e-8);
    CHECK(diff(0.5) > 1e-3);
    CHECK(diff(1.5) < -1e-3);
}

TEST_CASE("information increment ordering across regimes") {
    // offset increases: increment dominates the stationary post-change rate
    CPLimitParams up = params_a();  // 0 -> 1
    CPLimitParams up_s = up;
    up_s.t = 0.6;
    double inc_up = cp_fisher(up, 1.0) - cp_fisher(up_s, 1.0);
    CHECK(inc_up > (1.0 - 0.6) * fisher_info(1.0, 1.0));

    // offset decreases: the same increment is dominated instead
    CPLimitParams dn;
    dn.tstar = 0.5;
    dn.delta1 = 2.0;
    dn.delta2 = 0.0;
    dn.t = 1.0;
    CPLimitParams dn_s = dn;
    dn_s.t = 0.6;
    double inc_dn = cp_fisher(dn, 0.0) - cp_fisher(dn_s, 0.0);
    CHECK(inc_dn < (1.0 - 0.6) * fisher_info(0.0, 0.0));
}

TEST_CASE("tail ratio against the pre-change law stabilizes") {
    CPLimitParams a = params_a();
    CpLimitSeries series(a);
    series.extend(200);
    double limit = (a.tstar / a.t) * std::pow(a.t / a.tstar, (2.0 + a.delta1) / (2.0 + a.delta2));
    double r50 = series.tail(50) / limit_tail(50, a.delta1);
    double r100 = series.tail(100) / limit_tail(100, a.delta1);
    double r200 = series.tail(200) / limit_tail(200, a.delta1);
    CHECK(r50 > r100);
    CHECK(r100 > r200);
    CHECK(r200 > limit);
    CHECK(std::abs(r200 / limit - 1.0) < 0.01);
}

TEST_CASE("tail identity under the degree recursion") {
    CHECK(recur_identity_residual(params_a(), 1, 0.55, 0.95) < 1e-6);
    CHECK(recur_identity_residual(params_a(), 3, 0.55, 0.95) < 1e-6);
    CHECK(recur_identity_residual(params_a(), 10, 0.55, 0.95) < 1e-6);
    CHECK(recur_identity_residual(params_b(), 2, 0.3, 0.8) < 1e-6);
    CPLimitParams same;
    same.tstar = 0.25;
    same.delta1 = 0.5;
    same.delta2 = 0.5;
    same.t = 1.0;
    CHECK(recur_identity_residual(same, 4, 0.4, 0.9) < 1e-6);
}

TEST_CASE("adaptive quadrature") {
    CHECK(adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0, 1e-10) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-10) ==
          doctest::Approx(2.0).epsilon(1e-9));
    CHECK(adaptive_simpson([](double) { return 1.0; }, 2.0, 2.0, 1e-10) == 0.0);
    // a jump keeps the refinement from ever settling within a shallow depth cap
    CHECK_THROWS_AS(adaptive_simpson([](double x) { return x < 0.31 ? 0.0 : 1.0; }, 0.0, 1.0,
                                     1e-13, 8),
                    QuadratureError);
}

TEST_CASE("domain validation") {
    CHECK_THROWS_AS(limit_pmf(0, 0.0), InvalidArgsError);
    CHECK_THROWS_AS(limit_pmf(1, -1.0), InvalidArgsError);
    CHECK_THROWS_AS(limit_tail(-1, 0.0), InvalidArgsError);
    CHECK_THROWS_AS(bi_pmf(0, 0.5, 1.0, 3), InvalidArgsError);
    CHECK_THROWS_AS(bi_pmf(1, -1.0, 1.0, 3), InvalidArgsError);
    CHECK_THROWS_AS(bi_tail(2, 0.0, -0.5, 3), InvalidArgsError);
    CHECK_THROWS_AS(fisher_info_detail(0.0, 0.0, -1.0), InvalidArgsError);
    CHECK_THROWS_AS(limit_score(-1.2, 0.0), InvalidArgsError);

    CPLimitParams p;
    p.tstar = 0.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgsError);
    p = CPLimitParams{};
    p.t = 0.3;  // before tstar
    CHECK_THROWS_AS(p.validate(), InvalidArgsError);
    p = CPLimitParams{};
    p.t = 1.5;
    CHECK_THROWS_AS(p.validate(), InvalidArgsError);
    p = CPLimitParams{};
    p.delta2 = -1.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgsError);
    CHECK_THROWS_AS(cp_limit_pmf(CPLimitParams{}, 0), InvalidArgsError);
    CHECK_THROWS_AS(recur_identity_residual(CPLimitParams{}, 2, 0.9, 0.7), InvalidArgsError);
}

}  // TEST_SUITE
