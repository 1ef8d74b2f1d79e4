#include "pacp/degree_laws.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pacp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_delta(double delta, const char* what) {
    if (!(delta > -1.0) || !std::isfinite(delta))
        throw InvalidArgsError(std::string(what) + " must be finite and > -1");
}

double sq(double x) { return x * x; }

// log p_i(delta)
double log_limit_pmf(std::int64_t i, double delta) {
    double d = delta;
    return std::log(2.0 + d) + std::lgamma(3.0 + 2.0 * d) + std::lgamma(double(i) + d) -
           std::lgamma(1.0 + d) - std::lgamma(double(i) + 3.0 + 2.0 * d);
}

// sum_{i > M} p_{>i}(delta); the summand telescopes through the identity
// p_{>i} (i+2+d) - p_{>i+1} (i+3+d) = (1+d) p_{>i+1}, giving the closed form
// below. Finite for every d > -1.
double tail_of_tails(std::int64_t m, double delta) {
    double d = delta;
    double lg = std::lgamma(3.0 + 2.0 * d) - std::lgamma(1.0 + d) +
                std::lgamma(double(m) + 2.0 + d) - std::lgamma(double(m) + 3.0 + 2.0 * d) -
                std::log1p(d);
    return std::exp(lg);
}

// Walks i -> i+1 maintaining p_{>i}(delta).
struct TailWalker {
    double delta;
    std::int64_t i = 0;
    double p_gt = 1.0;
    void advance() {
        p_gt *= (double(i) + 1.0 + delta) / (double(i) + 3.0 + 2.0 * delta);
        ++i;
    }
};

}  // namespace

double limit_pmf(std::int64_t i, double delta) {
    check_delta(delta, "delta");
    if (i < 1) throw InvalidArgsError("limit_pmf requires i >= 1");
    return std::exp(log_limit_pmf(i, delta));
}

double limit_tail(std::int64_t i, double delta) {
    check_delta(delta, "delta");
    if (i < 0) throw InvalidArgsError("limit_tail requires i >= 0");
    if (i == 0) return 1.0;
    double d = delta;
    return std::exp(std::lgamma(3.0 + 2.0 * d) + std::lgamma(double(i) + 1.0 + d) -
                    std::lgamma(1.0 + d) - std::lgamma(double(i) + 3.0 + 2.0 * d));
}

namespace {

void check_bi(std::int64_t i, double theta, double t) {
    if (i < 1) throw InvalidArgsError("birth process start must be >= 1");
    if (!(double(i) + theta > 0.0) || !std::isfinite(theta))
        throw InvalidArgsError("birth process requires i + theta > 0");
    if (std::isnan(t) || t < 0.0) throw InvalidArgsError("birth process time must be >= 0");
}

}  // namespace

double bi_pmf(std::int64_t i, double theta, double t, std::int64_t j) {
    check_bi(i, theta, t);
    if (j < i) return 0.0;
    if (t == 0.0) return j == i ? 1.0 : 0.0;
    double r = double(i) + theta;
    if (std::isinf(t)) return 0.0;
    if (j == i) return std::exp(-r * t);
    double q = -std::expm1(-t);
    double lp = std::lgamma(double(j) + theta) - std::lgamma(double(i) + theta) -
                std::lgamma(double(j - i) + 1.0) - r * t + double(j - i) * std::log(q);
    return std::exp(lp);
}

double bi_tail(std::int64_t i, double theta, double t, std::int64_t j) {
    check_bi(i, theta, t);
    if (j < i) return 1.0;
    if (t == 0.0) return 0.0;
    if (std::isinf(t)) return 1.0;
    double logq = std::log(-std::expm1(-t));
    // pmf accumulated in log form: the early factors can be hundreds of
    // orders below 1 yet later ones regrow, so plain products underflow
    double lf = -(double(i) + theta) * t;
    double s = lf > -60.0 ? std::exp(lf) : 0.0;
    for (std::int64_t m = i + 1; m <= j; ++m) {
        lf += std::log(double(m) - 1.0 + theta) + logq - std::log(double(m - i));
        if (lf > -60.0) s += std::exp(lf);
    }
    return std::clamp(1.0 - s, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Stationary series sums. Both remainders rest on the closed form of
// tail_of_tails plus the exact shift identity
//   sum_{i>M} p_{>i}/(i+d) = tail_of_tails(M) / ... resolved as
//   sum_{i>M} p_{>i}/(2+d) summed against the pmf identity; concretely:
//   sum_{i>M} p_{>i}(d)/(i+lam)
//     = p_{>M}(d)/(2+d) + (d-lam) sum_{i>M} p_{>i}/((i+d)(i+lam)),
// where the trailing sum lies in [0, tail_of_tails(M)/((M+1+d)(M+1+lam))].
// Taking the midpoint of that bracket halves the certified error.
// ---------------------------------------------------------------------------

namespace {

constexpr std::int64_t kStationaryCap = std::int64_t(1) << 26;

void check_lambda(double lambda) {
    if (!(lambda > -1.0) || !std::isfinite(lambda))
        throw InvalidArgsError("lambda must be finite and > -1");
}

}  // namespace

SeriesValue limit_score_detail(double lambda, double delta, double tol) {
    check_lambda(lambda);
    check_delta(delta, "delta");
    if (!(tol > 0.0)) throw InvalidArgsError("tol must be > 0");
    TailWalker w{delta};
    double sum = 0.0;
    std::int64_t target = 512;
    for (;;) {
        while (w.i < target) {
            w.advance();
            sum += w.p_gt / (double(w.i) + lambda);
        }
        double bracket = tail_of_tails(w.i, delta) /
                         ((double(w.i) + 1.0 + delta) * (double(w.i) + 1.0 + lambda));
        double err = std::abs(delta - lambda) * bracket / 2.0;
        if (err <= tol || target >= kStationaryCap) {
            if (err > tol)
                throw TruncationError("limit_score: tolerance unreachable within i cap");
            double rem = w.p_gt / (2.0 + delta) + (delta - lambda) * bracket / 2.0;
            return {sum + rem - 1.0 / (2.0 + lambda), err, w.i};
        }
        target *= 2;
    }
}

double limit_score(double lambda, double delta) {
    return limit_score_detail(lambda, delta).value;
}

SeriesValue fisher_info_detail(double lambda, double delta, double tol) {
    check_lambda(lambda);
    check_delta(delta, "delta");
    if (!(tol > 0.0)) throw InvalidArgsError("tol must be > 0");
    TailWalker w{delta};
    double sum = 0.0;
    std::int64_t target = 512;
    for (;;) {
        while (w.i < target) {
            w.advance();
            sum += w.p_gt / sq(double(w.i) + lambda);
        }
        // sum_{i>M} p_{>i}/(i+lam)^2 in [0, tail_of_tails(M)/(M+1+lam)^2]
        double bracket = tail_of_tails(w.i, delta) / sq(double(w.i) + 1.0 + lambda);
        if (bracket / 2.0 <= tol || target >= kStationaryCap) {
            if (bracket / 2.0 > tol)
                throw TruncationError("fisher_info: tolerance unreachable within i cap");
            return {sum + bracket / 2.0 - 1.0 / sq(2.0 + lambda), bracket / 2.0, w.i};
        }
        target *= 2;
    }
}

double fisher_info(double lambda, double delta) {
    return fisher_info_detail(lambda, delta).value;
}

// ---------------------------------------------------------------------------
// Changepoint limit law
// ---------------------------------------------------------------------------

void CPLimitParams::validate() const {
    check_delta(delta1, "delta1");
    check_delta(delta2, "delta2");
    if (!(tstar > 0.0) || !(tstar <= 1.0))
        throw InvalidArgsError("tstar must lie in (0, 1]");
    if (!(t >= tstar) || !(t <= 1.0))
        throw InvalidArgsError("t must lie in [tstar, 1]");
    if (!(tail_tol > 0.0)) throw InvalidArgsError("tail_tol must be > 0");
    if (i_cap < 16) throw InvalidArgsError("i_cap too small");
}

double CPLimitParams::tau() const { return std::log(t / tstar) / (2.0 + delta2); }

double cp_limit_pmf(const CPLimitParams& p, std::int64_t i) {
    p.validate();
    if (i < 1) throw InvalidArgsError("cp_limit_pmf requires i >= 1");
    double tau = p.tau();
    if (tau == 0.0) return limit_pmf(i, p.delta1);
    double ratio = p.tstar / p.t;
    double mix = 0.0;
    double pj = limit_pmf(1, p.delta1);
    for (std::int64_t j = 1; j <= i; ++j) {
        if (j > 1) pj *= (double(j) - 1.0 + p.delta1) / (double(j) + 2.0 + 2.0 * p.delta1);
        mix += pj * bi_pmf(j, p.delta2, tau, i);
    }
    return limit_pmf(i, p.delta2) * bi_tail(3, 2.0 * p.delta2, tau, i + 2) + ratio * mix;
}

double cp_limit_tail(const CPLimitParams& p, std::int64_t i) {
    p.validate();
    if (i < 0) throw InvalidArgsError("cp_limit_tail requires i >= 0");
    if (i == 0) return 1.0;
    double tau = p.tau();
    if (tau == 0.0) return limit_tail(i, p.delta1);
    double ratio = p.tstar / p.t;
    double logq = std::log(-std::expm1(-tau));
    double acc = limit_tail(i, p.delta2) * bi_tail(3, 2.0 * p.delta2, tau, i + 2);
    acc -= ratio * bi_tail(1, p.delta2, tau, i);
    // sum_j p_j(d1) P(xi^j(tau) > i): one log-space pmf pass per j
    double mix = 0.0;
    double pj = limit_pmf(1, p.delta1);
    for (std::int64_t j = 1; j <= i; ++j) {
        if (j > 1) pj *= (double(j) - 1.0 + p.delta1) / (double(j) + 2.0 + 2.0 * p.delta1);
        double lf = -(double(j) + p.delta2) * tau;
        double s = lf > -60.0 ? std::exp(lf) : 0.0;
        for (std::int64_t m = j + 1; m <= i; ++m) {
            lf += std::log(double(m) - 1.0 + p.delta2) + logq - std::log(double(m - j));
            if (lf > -60.0) s += std::exp(lf);
        }
        mix += pj * std::clamp(1.0 - s, 0.0, 1.0);
    }
    acc += ratio * mix;
    acc += ratio * limit_tail(i, p.delta1);
    return std::clamp(acc, 0.0, 1.0);
}

// The mixture row f_[j] = P(xi^j_{d2}(tau) = i) spans hundreds of orders of
// magnitude once i exceeds a few thousand: its diagonal entry starts at
// e^{-(i+d2) tau} (far below double range for large i) yet regrows to O(1) by
// the time the row index reaches i e^{tau}. The row is therefore kept in log
// form, updated additively, and exponentiated only inside the window that
// matters for the mixture sum. In j the row is log-concave (the one-step
// ratio (i-j) e^{-tau} / ((j+d2) q) is decreasing), so that window is a
// single interval around the mode.
CpLimitSeries::CpLimitSeries(const CPLimitParams& p) : p_(p) {
    p_.validate();
    tau_ = p_.tau();
    q_ = -std::expm1(-tau_);
    ratio_ = p_.tstar / p_.t;
    f_.assign(2, 0.0);    // log P(xi^j = i)
    pj1_.assign(2, 0.0);  // log p_j(delta1)
    pmf_.assign(2, 0.0);
    tail_.assign(2, 0.0);
    logtab_.assign(2, 0.0);
    logtab_[1] = 0.0;
    tail_[0] = 1.0;
    i_ = 1;
    f_[1] = -(1.0 + p_.delta2) * tau_;
    pj1_[1] = std::log(limit_pmf(1, p_.delta1));
    pd2_ = limit_pmf(1, p_.delta2);
    f3_ = std::exp(-(3.0 + 2.0 * p_.delta2) * tau_);
    pmf3_sum_ = f3_;
    ptail3_ = std::clamp(1.0 - pmf3_sum_, 0.0, 1.0);
    f1_ = std::exp(f_[1]);
    pmf1_sum_ = f1_;
    p1tail_ = std::clamp(1.0 - pmf1_sum_, 0.0, 1.0);
    pmf_[1] = pd2_ * ptail3_ + ratio_ * std::exp(pj1_[1] + f_[1]);
    tail_[1] = std::clamp(1.0 - pmf_[1], 0.0, 1.0);
}

void CpLimitSeries::extend(std::int64_t m) {
    if (m <= i_) return;
    f_.resize(static_cast<std::size_t>(m) + 1, 0.0);
    pj1_.resize(static_cast<std::size_t>(m) + 1, 0.0);
    pmf_.resize(static_cast<std::size_t>(m) + 1, 0.0);
    tail_.resize(static_cast<std::size_t>(m) + 1, 0.0);
    logtab_.resize(static_cast<std::size_t>(m) + 1, 0.0);
    for (std::int64_t k = std::max<std::int64_t>(i_, 2); k <= m; ++k)
        logtab_[k] = std::log(double(k));
    double d1 = p_.delta1, d2 = p_.delta2;
    double logq = std::log(q_);  // -inf when tau == 0, which propagates fine
    while (i_ < m) {
        std::int64_t i = i_ + 1;
        // log P(xi^j = i) = log P(xi^j = i-1) + log((i-1+d2) q) - log(i-j)
        double step = std::log(double(i) - 1.0 + d2) + logq;
        double* f = f_.data();
        const double* lt = logtab_.data();
        double best = -kInf;
        const double* lp = pj1_.data();
        for (std::int64_t j = 1; j < i; ++j) {
            f[j] += step - lt[i - j];
            double term = f[j] + lp[j];
            if (term > best) best = term;
        }
        f[i] = -(double(i) + d2) * tau_;
        pj1_[i] = pj1_[i - 1] +
                  std::log((double(i) - 1.0 + d1) / (double(i) + 2.0 + 2.0 * d1));
        if (f[i] + pj1_[i] > best) best = f[i] + pj1_[i];
        // mixture sum_j p_j(d1) P(xi^j = i); terms 80 nats under the peak are
        // beyond double precision of the total
        double mix = 0.0;
        if (best > -kInf) {
            double cut = best - 80.0;
            for (std::int64_t j = 1; j <= i; ++j) {
                double term = f[j] + lp[j];
                if (term >= cut) mix += std::exp(term - best);
            }
            mix *= std::exp(best);
        }
        pd2_ *= (double(i) - 1.0 + d2) / (double(i) + 2.0 + 2.0 * d2);
        // xi^3_{2 d2} advances to value i+2, xi^1_{d2} to value i
        f3_ *= (double(i) + 1.0 + 2.0 * d2) * q_ / double(i - 1);
        pmf3_sum_ += f3_;
        ptail3_ = std::clamp(1.0 - pmf3_sum_, 0.0, 1.0);
        f1_ *= (double(i) - 1.0 + d2) * q_ / double(i - 1);
        pmf1_sum_ += f1_;
        p1tail_ = std::clamp(1.0 - pmf1_sum_, 0.0, 1.0);
        pmf_[i] = pd2_ * ptail3_ + ratio_ * mix;
        tail_[i] = std::clamp(tail_[i - 1] - pmf_[i], 0.0, 1.0);
        i_ = i;
    }
}

namespace {

// Remainder bracket for the stationary score tail at offset d (see
// limit_score_detail): returns {midpoint estimate, half-width}.
struct Bracket {
    double mid = 0.0;
    double err = 0.0;
};

Bracket stationary_score_tail(std::int64_t m, double d, double lambda) {
    double p_gt = limit_tail(m, d);
    double b = tail_of_tails(m, d) / ((double(m) + 1.0 + d) * (double(m) + 1.0 + lambda));
    return {p_gt / (2.0 + d) + (d - lambda) * b / 2.0, std::abs(d - lambda) * b / 2.0};
}

// min over z in (1, 1/q) of E z^{-M} / ((z-1)(M+1+lambda)) where log E is
// supplied by log_pgf(z, log g(z)), g(z) = e^{-tau}/(1-qz). This bounds
// sum_{i>M} P(xi > i)/(i+lambda) for any variable whose pgf log_pgf dominates.
double chernoff_tail_over(std::int64_t M, double tau, double q, double lambda,
                          const std::function<double(double, double)>& log_pgf) {
    double zmax = 1.0 / q;
    double best = kInf;
    for (int k = 1; k <= 40; ++k) {
        double frac = sq(double(k) / 41.0);
        double z = 1.0 + (zmax * 0.999 - 1.0) * frac;
        if (!(z > 1.0) || !(1.0 - q * z > 0.0)) continue;
        double logg = -tau - std::log1p(-q * z);
        double logb = log_pgf(z, logg) - double(M) * std::log(z) - std::log(z - 1.0) -
                      std::log(double(M) + 1.0 + lambda);
        if (logb < 600.0) best = std::min(best, std::exp(logb));
    }
    return best;
}

}  // namespace

SeriesValue cp_fisher_detail(CpLimitSeries& series, double lambda) {
    check_lambda(lambda);
    const CPLimitParams& p = series.params();
    if (p.tau() == 0.0) {
        SeriesValue r = fisher_info_detail(lambda, p.delta1, p.tail_tol / p.t);
        return {p.t * r.value, p.t * r.tail_err, r.i_max};
    }
    std::int64_t target = std::max<std::int64_t>(series.built(), 1024);
    double sum = 0.0;
    std::int64_t summed = 0;
    for (;;) {
        series.extend(target);
        while (summed < series.built()) {
            ++summed;
            sum += series.tail(summed) / sq(double(summed) + lambda);
        }
        // sum_{i>M} p*_{>i}/(i+lam)^2 in [0, p*_{>M}/(M+lam)];
        // the upper end comes from p*_{>i} <= p*_{>M} and the integral test.
        double b = series.tail(summed) / (double(summed) + lambda);
        if (b / 2.0 <= p.tail_tol)
            return {p.t * (sum + b / 2.0 - 1.0 / sq(2.0 + lambda)), p.t * b / 2.0, summed};
        if (target >= p.i_cap)
            throw TruncationError("cp_fisher: tolerance unreachable within i_cap");
        target *= 2;
    }
}

SeriesValue cp_fisher_detail(const CPLimitParams& p, double lambda) {
    p.validate();
    if (p.tau() == 0.0) {
        SeriesValue r = fisher_info_detail(lambda, p.delta1, p.tail_tol / p.t);
        return {p.t * r.value, p.t * r.tail_err, r.i_max};
    }
    CpLimitSeries series(p);
    return cp_fisher_detail(series, lambda);
}

double cp_fisher(const CPLimitParams& p, double lambda) {
    return cp_fisher_detail(p, lambda).value;
}

SeriesValue cp_limit_score_detail(CpLimitSeries& series, double lambda) {
    check_lambda(lambda);
    const CPLimitParams& p = series.params();
    if (p.tau() == 0.0) {
        SeriesValue r = limit_score_detail(lambda, p.delta1, p.tail_tol / p.t);
        return {p.t * r.value, p.t * r.tail_err, r.i_max};
    }
    double tau = p.tau();
    double q = -std::expm1(-tau);
    double ratio = p.tstar / p.t;
    double d1 = p.delta1, d2 = p.delta2;
    std::int64_t target = std::max<std::int64_t>(series.built(), 1024);
    double sum = 0.0;
    std::int64_t summed = 0;
    for (;;) {
        series.extend(target);
        while (summed < series.built()) {
            ++summed;
            sum += series.tail(summed) / (double(summed) + lambda);
        }
        std::int64_t M = summed;
        double denom = double(M) + 1.0 + lambda;
        // Remainder sum_{i>M} p*_{>i}/(i+lam) splits along the four tail terms.
        // (1) stationary d2 part, damped by P(xi^3 > i+2) <= ptail3 at M:
        Bracket s2 = stationary_score_tail(M, d2, lambda);
        double t1_hi = series.ptail3() * (s2.mid + s2.err);
        // (2) -(tstar/t) sum_{i>M} P(xi^1_{d2} > i)/(i+lam), in [-chern, 0]:
        double t2_hi = ratio * chernoff_tail_over(M, tau, q, lambda,
                                                  [&](double z, double logg) {
                                                      return std::log(z) + (1.0 + d2) * logg;
                                                  });
        // (3) mixture tail: split the j-sum at J ~ (M+1) e^{-tau}/2; the light
        // half is Chernoff-bounded through the pgf envelope
        //   sum_{j<=J} p_j (z g)^j g^{d2} <= g^{d2} max(zg, 1)^J,
        // the heavy half through E[(xi^j - M)^+] <= (j-M)^+ + (j+d2)(e^tau - 1)
        // summed against p_j(d1).
        std::int64_t J = std::max<std::int64_t>(1, std::int64_t(double(M + 1) * std::exp(-tau) / 2.0));
        double chern = chernoff_tail_over(M, tau, q, lambda,
                                          [&](double z, double logg) {
                                              double logzg = std::log(z) + logg;
                                              return d2 * logg + double(J) * std::max(0.0, logzg);
                                          });
        double mean_excess_J = (2.0 + d1) * tail_of_tails(J, d1) - d1 * limit_tail(J, d1) +
                               d2 * limit_tail(J, d1);
        double jump_excess_M = (2.0 + d1) * tail_of_tails(M, d1) - d1 * limit_tail(M, d1);
        double t3_hi = ratio * (chern + (std::expm1(tau) * mean_excess_J + jump_excess_M) / denom);
        // (4) the plain (tstar/t) p_{>i}(d1) term, exact bracket as stationary:
        Bracket s1 = stationary_score_tail(M, d1, lambda);
        double mid = ratio * s1.mid + (t1_hi - t2_hi + t3_hi) / 2.0;
        double err = ratio * s1.err + (t1_hi + t2_hi + t3_hi) / 2.0;
        if (err <= p.tail_tol)
            return {p.t * (sum + mid - 1.0 / (2.0 + lambda)), p.t * err, M};
        if (target >= p.i_cap)
            throw TruncationError("cp_limit_score: tolerance unreachable within i_cap");
        target *= 2;
    }
}

SeriesValue cp_limit_score_detail(const CPLimitParams& p, double lambda) {
    p.validate();
    if (p.tau() == 0.0) {
        SeriesValue r = limit_score_detail(lambda, p.delta1, p.tail_tol / p.t);
        return {p.t * r.value, p.t * r.tail_err, r.i_max};
    }
    CpLimitSeries series(p);
    return cp_limit_score_detail(series, lambda);
}

double cp_limit_score(const CPLimitParams& p, double lambda) {
    return cp_limit_score_detail(p, lambda).value;
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

namespace {

double simpson_rule(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson_rule(fa, flm, fm, m - a);
    double right = simpson_rule(fm, frm, fb, b - m);
    double diff = left + right - whole;
    if (std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    if (depth <= 0) throw QuadratureError("adaptive_simpson: depth cap reached");
    return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
    if (!(tol > 0.0)) throw InvalidArgsError("adaptive_simpson: tol must be > 0");
    if (!(a <= b)) throw InvalidArgsError("adaptive_simpson: need a <= b");
    if (a == b) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = simpson_rule(fa, fm, fb, b - a);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

double recur_identity_residual(const CPLimitParams& p, std::int64_t i, double s, double t) {
    p.validate();
    if (i < 1) throw InvalidArgsError("recur_identity_residual requires i >= 1");
    if (!(p.tstar <= s) || !(s < t) || !(t <= 1.0))
        throw InvalidArgsError("need tstar <= s < t <= 1");
    auto pmf_at = [&](double u) {
        CPLimitParams q = p;
        q.t = u;
        return cp_limit_pmf(q, i);
    };
    double lhs = (double(i) + p.delta2) / (2.0 + p.delta2) *
                 adaptive_simpson(pmf_at, s, t, 1e-9, 28);
    CPLimitParams pt = p, ps = p;
    pt.t = t;
    ps.t = s;
    double rhs = t * cp_limit_tail(pt, i) - s * cp_limit_tail(ps, i);
    return std::abs(lhs - rhs);
}

}  // namespace pacp
