#pragma once
// Limit degree laws of the affine preferential-attachment model, the linear
// birth process view of them, the corresponding changepoint limit laws, and
// the population score / Fisher-information functionals built on top.
//
// Notation used throughout (d is the affine offset, valid for d > -1):
//   p_i(d)    = (2+d) G(3+2d) G(i+d) / (G(1+d) G(i+3+2d)),   i >= 1
//   p_{>i}(d) = G(3+2d) G(i+1+d) / (G(1+d) G(i+3+2d)),       i >= 0
// with G the gamma function. These satisfy (i+d) p_i = (2+d) p_{>i}.

#include <cstdint>
#include <functional>
#include <vector>

#include "pacp/common.hpp"

namespace pacp {

// Stationary limit degree law.
double limit_pmf(std::int64_t i, double delta);   // p_i(delta), i >= 1
double limit_tail(std::int64_t i, double delta);  // p_{>i}(delta), i >= 0

// Pure birth process started at state i with jump rates q_{j,j+1} = j + theta.
// The state at time t minus i is negative binomial with r = i + theta and
// success probability e^{-t}:
//   P(state = j) = G(j+theta) / (G(j-i+1) G(i+theta)) e^{-(i+theta) t} (1 - e^{-t})^{j-i}.
// Requires i >= 1 and i + theta > 0 (theta may be negative).
double bi_pmf(std::int64_t i, double theta, double t, std::int64_t j);
// P(state > j); computed as 1 minus the finite pmf sum, exactly 1 for j < i.
double bi_tail(std::int64_t i, double theta, double t, std::int64_t j);

// Value of a truncated series together with the truncation diagnostics.
// tail_err is a certified bound on |value - exact|; i_max is the truncation
// point actually used.
struct SeriesValue {
    double value = 0.0;
    double tail_err = 0.0;
    std::int64_t i_max = 0;
};

// Population score of the per-event likelihood under offset lambda when the
// data come from the stationary law with offset delta:
//   U(lambda; delta) = sum_i p_{>i}(delta) / (i+lambda) - 1/(2+lambda).
// U(.; delta) has its unique zero at lambda = delta.
SeriesValue limit_score_detail(double lambda, double delta, double tol = 1e-10);
double limit_score(double lambda, double delta);

// I(lambda; delta) = sum_i p_{>i}(delta) / (i+lambda)^2 - 1/(2+lambda)^2,
// the limit of -n^{-1} d(score)/d(lambda); equals the Fisher information at
// lambda = delta. I(0;0) = pi^2/6 - 3/2.
SeriesValue fisher_info_detail(double lambda, double delta, double tol = 1e-10);
double fisher_info(double lambda, double delta);

// Changepoint limit law: the network evolves with offset delta1 up to global
// time tstar and with delta2 afterwards; quantities are evaluated at time
// t in [tstar, 1]. tau = log(t/tstar) / (2+delta2) is the associated
// birth-process clock.
struct CPLimitParams {
    double tstar = 0.5;
    double delta1 = 0.0;
    double delta2 = 0.0;
    double t = 1.0;
    double tail_tol = 1e-7;          // certified tolerance for series sums
    std::int64_t i_cap = 1 << 21;    // truncation hard cap for series sums
    void validate() const;
    double tau() const;              // log(t/tstar) / (2+delta2)
};

// p*_i(t): probability that a uniformly chosen node has degree i in the limit,
//   p*_i = p_i(d2) P(xi^3_{2 d2}(tau) > i+2)
//        + (tstar/t) sum_{j=1}^{i} p_j(d1) P(xi^j_{d2}(tau) = i).
// Exact finite sum, O(i) work. Reduces to p_i(delta1) at t = tstar and to
// p_i(delta2) when delta1 == delta2.
double cp_limit_pmf(const CPLimitParams& p, std::int64_t i);

// p*_{>i}(t), from the four-term tail representation
//   p*_{>i} = p_{>i}(d2) P(xi^3_{2 d2}(tau) > i+2) - (tstar/t) P(xi_{d2}(tau) > i)
//           + (tstar/t) sum_{j=1}^{i} p_j(d1) P(xi^j_{d2}(tau) > i) + (tstar/t) p_{>i}(d1).
// Exact finite sums, O(i^2) work.
double cp_limit_tail(const CPLimitParams& p, std::int64_t i);

// Incremental table of p*_i and p*_{>i} for i = 1..M; the tail is accumulated
// as the complement of the pmf partial sums, which agrees with cp_limit_tail
// up to float roundoff and costs O(M^2) total instead of O(M^3).
class CpLimitSeries {
  public:
    explicit CpLimitSeries(const CPLimitParams& p);
    void extend(std::int64_t m);
    std::int64_t built() const { return i_; }
    double pmf(std::int64_t i) const { return pmf_.at(static_cast<std::size_t>(i)); }
    double tail(std::int64_t i) const { return tail_.at(static_cast<std::size_t>(i)); }
    // P(xi^3_{2 d2}(tau) > i+2) and P(xi_{d2}(tau) > i) at i = built()
    double ptail3() const { return ptail3_; }
    double p1tail() const { return p1tail_; }
    const CPLimitParams& params() const { return p_; }

  private:
    CPLimitParams p_;
    double tau_ = 0.0, q_ = 0.0, ratio_ = 1.0;
    std::int64_t i_ = 0;
    // the mixture row spans far more orders of magnitude than a double, so it
    // is held in log form (see the implementation note)
    std::vector<double> f_;       // log P(xi^j_{d2}(tau) = i) at current i
    std::vector<double> pj1_;     // log p_j(delta1)
    std::vector<double> logtab_;  // log k
    std::vector<double> pmf_, tail_;  // index i; entry 0 unused / tail_[0] = 1
    double pd2_ = 0.0;            // p_i(delta2)
    double f3_ = 0.0, pmf3_sum_ = 0.0, ptail3_ = 1.0;
    double f1_ = 0.0, pmf1_sum_ = 0.0, p1tail_ = 1.0;
};

// U*_t(lambda) = t ( sum_i p*_{>i}(t)/(i+lambda) - 1/(2+lambda) ).
// U*_t - U*_s has its unique zero at lambda = delta2 for t > s >= tstar.
SeriesValue cp_limit_score_detail(const CPLimitParams& p, double lambda);
double cp_limit_score(const CPLimitParams& p, double lambda);
// Same, reusing a prebuilt series table (extended as needed).
SeriesValue cp_limit_score_detail(CpLimitSeries& series, double lambda);

// I*_t(lambda) = t ( sum_i p*_{>i}(t)/(i+lambda)^2 - 1/(2+lambda)^2 ).
SeriesValue cp_fisher_detail(const CPLimitParams& p, double lambda);
double cp_fisher(const CPLimitParams& p, double lambda);
SeriesValue cp_fisher_detail(CpLimitSeries& series, double lambda);

// Recursive adaptive Simpson on [a,b] with absolute tolerance tol; throws
// QuadratureError when the depth cap is hit before the tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-9, int max_depth = 24);

// | (i+d2)/(2+d2) * int_s^t p*_i(u) du - ( t p*_{>i}(t) - s p*_{>i}(s) ) |,
// which is zero in exact arithmetic for tstar <= s < t <= 1.
double recur_identity_residual(const CPLimitParams& p, std::int64_t i, double s, double t);

}  // namespace pacp
