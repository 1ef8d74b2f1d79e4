#include <algorithm>
#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "pacp/lr_scan.hpp"
#include "pacp/network.hpp"
#include "pacp/null_table.hpp"

using namespace pacp;

namespace {

void check_earliest_argmax(const LrScanResult& res) {
    for (const LrScanPoint& p : res.points) {
        if (p.stat == res.stat) {
            CHECK(p.events_before == res.m_hat);
            break;
        }
    }
}

}  // namespace

TEST_SUITE("lr_scan") {

TEST_CASE("scan grid respects gamma and stride") {
    NetworkTrace tr = simulate(2000, AttachmentRegime::single(0.5), SeedKind::SelfLoopNode, 21u);
    LrScanOptions opt;
    opt.gamma = 0.2;
    opt.stride = 37;
    LrScanResult res = lr_scan(tr, opt);
    REQUIRE(!res.points.empty());
    CHECK(res.stride == 37);
    std::int64_t lo = res.points.front().events_before;
    std::int64_t hi = res.points.back().events_before;
    CHECK(lo >= static_cast<std::int64_t>(0.2 * 2000) - tr.seed_size());
    CHECK(hi <= static_cast<std::int64_t>(0.8 * 2000) - tr.seed_size());
    for (std::size_t i = 1; i < res.points.size(); ++i) {
        CHECK(res.points[i].events_before - res.points[i - 1].events_before == 37);
    }

    LrScanOptions bad;
    bad.gamma = 0.6;
    CHECK_THROWS_AS(lr_scan(tr, bad), InvalidArgsError);
    bad.gamma = 0.0;
    CHECK_THROWS_AS(lr_scan(tr, bad), InvalidArgsError);
    LrScanOptions neg;
    neg.stride = -1;
    CHECK_THROWS_AS(lr_scan(tr, neg), InvalidArgsError);
    NetworkTrace tiny = simulate(30, AttachmentRegime::single(0.0), SeedKind::SelfLoopNode, 1u);
    CHECK_THROWS_AS(lr_scan(tiny), InvalidArgsError);  // gamma floor collides with min_events
}

TEST_CASE("scan statistics match independent refits") {
    NetworkTrace tr = simulate(600, AttachmentRegime::affine_changes({0.5}, {0.0, 1.0}),
                               SeedKind::SelfLoopNode, 5u);
    LrScanOptions opt;
    opt.stride = 23;
    opt.fit.min_events = 20;
    LrScanResult res = lr_scan(tr, opt);
    TransitionHistogram full = transition_histogram(tr, 0, tr.events());
    FitOptions cold;
    cold.min_events = 20;
    SegmentFit ffull = fit_segment(full, cold);
    for (const LrScanPoint& p : res.points) {
        SegmentFit fp = fit_segment(transition_histogram(tr, 0, p.events_before), cold);
        SegmentFit fs = fit_segment(transition_histogram(tr, p.events_before, tr.events()), cold);
        double stat = 2.0 * (fp.loglik + fs.loglik - ffull.loglik);
        CHECK(p.stat == doctest::Approx(stat).epsilon(1e-6));
        CHECK(p.delta_pre == doctest::Approx(fp.delta_hat).epsilon(1e-5));
        CHECK(p.delta_post == doctest::Approx(fs.delta_hat).epsilon(1e-5));
    }
}

TEST_CASE("statistic is nonnegative and peaks at a real change") {
    NetworkTrace tr = simulate(20000, AttachmentRegime::affine_changes({0.5}, {0.0, 1.5}),
                               SeedKind::SelfLoopNode, 99u);
    LrScanResult res = lr_scan(tr);
    for (const LrScanPoint& p : res.points) CHECK(p.stat >= -1e-6);
    CHECK(res.stat > 100.0);
    CHECK(std::abs(res.t_hat - 0.5) < 0.03);
    CHECK(std::abs(res.delta_pre - 0.0) < 0.15);
    CHECK(std::abs(res.delta_post - 1.5) < 0.3);
    CHECK(res.delta_full > res.delta_pre);
    CHECK(res.delta_full < res.delta_post);
    check_earliest_argmax(res);
}

TEST_CASE("no change keeps the statistic small") {
    NetworkTrace tr = simulate(20000, AttachmentRegime::single(0.7), SeedKind::SelfLoopNode, 4242u);
    LrScanResult res = lr_scan(tr);
    CHECK(res.stat >= 0.0);
    CHECK(res.stat < 25.0);
    check_earliest_argmax(res);
}

TEST_CASE("null statistics follow the bridge sup law") {
    const int reps = 100;
    std::vector<double> sups;
    sups.reserve(reps);
    for (int r = 0; r < reps; ++r) {
        NetworkTrace tr = simulate(50000, AttachmentRegime::single(1.0), SeedKind::SelfLoopNode,
                                   derive_seed(606060u, static_cast<std::uint64_t>(r)));
        sups.push_back(lr_scan(tr).stat);
    }
    NullTableOptions opt;
    opt.paths = 4000;
    opt.use_cache = false;
    NullTable table = bridge_sup_table(0.1, opt);
    double d = ks_two_sample_stat(sups, table.samples());
    double crit = ks_critical(0.01) * std::sqrt(1.0 / reps + 1.0 / static_cast<double>(table.size()));
    CHECK(d < crit);

    int rejects = 0;
    double q95 = table.quantile(0.95);
    for (double s : sups) {
        if (s > q95) ++rejects;
    }
    CHECK(rejects <= 13);  // ~5 expected under the null
}

}  // TEST_SUITE
