#include "pacp/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "json.hpp"
#include "pacp/lr_scan.hpp"

namespace pacp {

namespace {

using ordered_json = nlohmann::ordered_json;

void check_fractions(const std::vector<double>& f, const char* which) {
    double prev = 0.0;
    for (double x : f) {
        if (!(x > 0.0 && x < 1.0)) {
            throw InvalidArgsError(std::string(which) + " fractions must lie in (0,1)");
        }
        if (!(x > prev)) {
            throw InvalidArgsError(std::string(which) + " fractions must be strictly increasing");
        }
        prev = x;
    }
}

// cut positions after element floor(n*f); cuts that collapse a segment to
// nothing change no partition and are dropped
std::vector<std::int64_t> cuts_from_fractions(const std::vector<double>& f, std::int64_t n) {
    std::vector<std::int64_t> cuts;
    for (double x : f) {
        std::int64_t c = static_cast<std::int64_t>(std::floor(x * static_cast<double>(n)));
        if (c <= 0 || c >= n) continue;
        if (!cuts.empty() && c == cuts.back()) continue;
        cuts.push_back(c);
    }
    return cuts;
}

std::int64_t same_segment_pairs(const std::vector<std::int64_t>& cuts, std::int64_t n) {
    std::int64_t total = 0;
    std::int64_t prev = 0;
    for (std::int64_t c : cuts) {
        std::int64_t len = c - prev;
        total += len * (len - 1) / 2;
        prev = c;
    }
    std::int64_t len = n - prev;
    total += len * (len - 1) / 2;
    return total;
}

}  // namespace

double rand_index(const std::vector<double>& true_fracs, const std::vector<double>& est_fracs,
                  std::int64_t n) {
    if (n < 2) throw InvalidArgsError("rand_index needs n >= 2");
    check_fractions(true_fracs, "true");
    check_fractions(est_fracs, "estimated");

    std::vector<std::int64_t> a = cuts_from_fractions(true_fracs, n);
    std::vector<std::int64_t> b = cuts_from_fractions(est_fracs, n);
    std::vector<std::int64_t> merged;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));

    // pairs joint in both = pairs joint in the common refinement; pairs split
    // in both follow by inclusion-exclusion over "joint somewhere"
    std::int64_t total = n * (n - 1) / 2;
    std::int64_t joint_a = same_segment_pairs(a, n);
    std::int64_t joint_b = same_segment_pairs(b, n);
    std::int64_t joint_both = same_segment_pairs(merged, n);
    std::int64_t agree = total + 2 * joint_both - joint_a - joint_b;
    return static_cast<double>(agree) / static_cast<double>(total);
}

void ExperimentSpec::validate() const {
    static const std::vector<std::string> kScenarios = {"null", "single-cp", "multi-cp",
                                                        "sublinear"};
    static const std::vector<std::string> kMethods = {"lr", "score", "window", "segment",
                                                      "nonparam"};
    if (std::find(kScenarios.begin(), kScenarios.end(), scenario) == kScenarios.end()) {
        throw InvalidArgsError("unknown scenario: " + scenario);
    }
    if (n < 100) throw InvalidArgsError("experiment n must be at least 100");
    if (replicates < 1) throw InvalidArgsError("replicates must be at least 1");
    if (methods.empty()) throw InvalidArgsError("method list is empty");
    for (const std::string& m : methods) {
        if (std::find(kMethods.begin(), kMethods.end(), m) == kMethods.end()) {
            throw InvalidArgsError("unknown method: " + m);
        }
        if (std::count(methods.begin(), methods.end(), m) != 1) {
            throw InvalidArgsError("method listed twice: " + m);
        }
    }
    if (!(gamma > 0.0 && gamma < 0.5)) throw InvalidArgsError("gamma must lie in (0, 0.5)");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgsError("alpha must lie in (0, 1)");
    if (h < 0) throw InvalidArgsError("window half-width must be nonnegative");
    if (min_len < 1) throw InvalidArgsError("min_len must be positive");
    if (np_h < 0.0 || np_b < 0.0) throw InvalidArgsError("nonparam overrides must be nonnegative");
    if (table_paths < 100) throw InvalidArgsError("table_paths must be at least 100");
    regime.validate(n, 1);  // experiments grow from the self-loop seed

    std::size_t changes = regime.change_fractions.size();
    bool any_sub = false;
    for (const RegimePhase& p : regime.phases) any_sub = any_sub || !p.affine();
    if (scenario == "null" && (changes != 0 || any_sub)) {
        throw InvalidArgsError("null scenario takes a single affine phase");
    }
    if (scenario == "single-cp" && (changes != 1 || any_sub)) {
        throw InvalidArgsError("single-cp scenario takes one change between affine phases");
    }
    if (scenario == "multi-cp" && (changes < 2 || any_sub)) {
        throw InvalidArgsError("multi-cp scenario takes at least two changes between affine phases");
    }
    if (scenario == "sublinear" && (changes != 1 || !any_sub)) {
        throw InvalidArgsError("sublinear scenario takes one change into a non-affine phase");
    }
}

namespace {

AttachmentRegime regime_from_json(const ordered_json& j) {
    AttachmentRegime reg;
    if (j.contains("change_fractions")) {
        reg.change_fractions = j.at("change_fractions").get<std::vector<double>>();
    }
    if (j.contains("deltas") == j.contains("phases")) {
        throw InvalidArgsError("regime needs exactly one of \"deltas\" or \"phases\"");
    }
    if (j.contains("deltas")) {
        for (double d : j.at("deltas").get<std::vector<double>>()) {
            reg.phases.push_back(RegimePhase{d, 1.0});
        }
    } else {
        for (const ordered_json& p : j.at("phases")) {
            RegimePhase ph;
            ph.delta = p.value("delta", 0.0);
            ph.exponent = p.value("exponent", 1.0);
            reg.phases.push_back(ph);
        }
    }
    return reg;
}

ordered_json regime_to_json(const AttachmentRegime& reg) {
    ordered_json j;
    j["change_fractions"] = reg.change_fractions;
    ordered_json phases = ordered_json::array();
    for (const RegimePhase& p : reg.phases) {
        ordered_json pj;
        pj["delta"] = p.delta;
        pj["exponent"] = p.exponent;
        phases.push_back(pj);
    }
    j["phases"] = phases;
    return j;
}

ordered_json spec_to_json_obj(const ExperimentSpec& s) {
    ordered_json j;
    j["name"] = s.name;
    j["scenario"] = s.scenario;
    j["n"] = s.n;
    j["replicates"] = s.replicates;
    j["regime"] = regime_to_json(s.regime);
    j["methods"] = s.methods;
    j["gamma"] = s.gamma;
    j["alpha"] = s.alpha;
    j["h"] = s.h;
    j["min_len"] = s.min_len;
    j["np_h"] = s.np_h;
    j["np_b"] = s.np_b;
    j["rng_seed"] = s.rng_seed;
    j["table_paths"] = s.table_paths;
    j["cache_dir"] = s.cache_dir;
    j["use_cache"] = s.use_cache;
    return j;
}

ExperimentSpec spec_from_json_obj(const ordered_json& j) {
    ExperimentSpec s;
    s.name = j.value("name", std::string());
    s.scenario = j.at("scenario").get<std::string>();
    s.n = j.at("n").get<std::int64_t>();
    s.replicates = j.at("replicates").get<std::int64_t>();
    s.regime = regime_from_json(j.at("regime"));
    s.methods = j.at("methods").get<std::vector<std::string>>();
    s.gamma = j.value("gamma", 0.1);
    s.alpha = j.value("alpha", 0.05);
    s.h = j.value("h", std::int64_t{0});
    s.min_len = j.value("min_len", std::int64_t{1000});
    s.np_h = j.value("np_h", 0.0);
    s.np_b = j.value("np_b", 0.0);
    s.rng_seed = j.value("rng_seed", std::uint64_t{1});
    s.table_paths = j.value("table_paths", std::int64_t{10000});
    s.cache_dir = j.value("cache_dir", std::string());
    s.use_cache = j.value("use_cache", true);
    return s;
}

}  // namespace

ExperimentSpec experiment_spec_from_json(const std::string& text) {
    try {
        ordered_json j = ordered_json::parse(text);
        return spec_from_json_obj(j);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgsError(std::string("experiment config: ") + e.what());
    }
}

std::string experiment_spec_to_json(const ExperimentSpec& spec) {
    return spec_to_json_obj(spec).dump(2) + "\n";
}

namespace {

struct RepRecord {
    bool ok = false;
    std::int64_t tests = 0;
    std::int64_t positives = 0;
    std::vector<double> reported;  // surviving changepoint fractions, ascending
    double est = std::numeric_limits<double>::quiet_NaN();
    std::string error;
};

RepRecord run_one_method(const std::string& method, const NetworkTrace& trace,
                         const ExperimentSpec& spec, const NullTable* bridge,
                         const NullTable* window) {
    RepRecord rec;
    if (method == "lr") {
        LrScanOptions opt;
        opt.gamma = spec.gamma;
        LrScanResult res = lr_scan(trace, opt);
        rec.tests = 1;
        rec.positives = res.stat > bridge->quantile(1.0 - spec.alpha) ? 1 : 0;
        rec.est = res.t_hat;
        if (rec.positives > 0) rec.reported.push_back(res.t_hat);
    } else if (method == "score") {
        ScoreScanResult res = score_scan(trace, 0, trace.events(), spec.gamma);
        rec.tests = 1;
        rec.positives = res.sup > bridge->quantile(1.0 - spec.alpha) ? 1 : 0;
        rec.est = static_cast<double>(res.argmax + trace.seed_size()) / static_cast<double>(trace.n);
        if (rec.positives > 0) rec.reported.push_back(rec.est);
    } else if (method == "window") {
        WindowOptions opt;
        opt.h = spec.effective_h();
        opt.alpha = spec.alpha;
        ChangepointReport rep = sara_detect(trace, opt, *window);
        rec.tests = static_cast<std::int64_t>(rep.hits.size());
        for (const ChangepointHit& hit : rep.hits) rec.positives += hit.accepted ? 1 : 0;
        rec.reported = rep.change_fractions;
    } else if (method == "segment") {
        BinsegOptions opt;
        opt.gamma = spec.gamma;
        opt.alpha = spec.alpha;
        opt.min_len = spec.min_len;
        BinsegResult res = binary_segmentation(trace, opt, *bridge);
        for (const SegNode& node : res.tree.nodes) {
            if (!node.tested) continue;
            ++rec.tests;
            rec.positives += node.rejected ? 1 : 0;
        }
        rec.reported = res.report.change_fractions;
    } else {  // nonparam
        NPConfig cfg;
        cfg.h_n = spec.np_h;
        cfg.b_n = spec.np_b;
        NPResult res = np_estimate(trace, cfg);
        rec.tests = 1;
        rec.positives = res.t_hat.has_value() ? 1 : 0;
        rec.est = res.t_hat.value_or(1.0);  // a miss scores as the far endpoint
        if (res.t_hat) rec.reported.push_back(*res.t_hat);
    }
    rec.ok = true;
    return rec;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    auto wants = [&spec](const char* m) {
        return std::find(spec.methods.begin(), spec.methods.end(), m) != spec.methods.end();
    };

    NullTableOptions topt;
    topt.paths = spec.table_paths;
    topt.cache_dir = spec.cache_dir;
    topt.use_cache = spec.use_cache;
    std::optional<NullTable> bridge;
    std::optional<NullTable> window;
    if (wants("lr") || wants("score") || wants("segment")) {
        bridge.emplace(bridge_sup_table(spec.gamma, topt));
    }
    if (wants("window")) {
        double s = static_cast<double>(spec.effective_h()) / static_cast<double>(spec.n);
        window.emplace(window_max_table(s, topt));
    }

    const std::size_t nm = spec.methods.size();
    std::vector<std::vector<RepRecord>> grid(nm);
    for (std::vector<RepRecord>& g : grid) g.resize(static_cast<std::size_t>(spec.replicates));
    std::vector<std::string> sim_errors(static_cast<std::size_t>(spec.replicates));

    parallel_for(spec.replicates, [&](std::int64_t r) {
        std::size_t ri = static_cast<std::size_t>(r);
        NetworkTrace trace;
        try {
            trace = simulate(spec.n, spec.regime, SeedKind::SelfLoopNode,
                             derive_seed(spec.rng_seed, static_cast<std::uint64_t>(r)));
        } catch (const std::exception& e) {
            sim_errors[ri] = e.what();
            return;
        }
        for (std::size_t m = 0; m < nm; ++m) {
            try {
                grid[m][ri] = run_one_method(spec.methods[m], trace, spec,
                                             bridge ? &*bridge : nullptr,
                                             window ? &*window : nullptr);
            } catch (const std::exception& e) {
                grid[m][ri].error = e.what();
            }
        }
    });

    ExperimentResult out;
    out.spec = spec;
    for (std::int64_t r = 0; r < spec.replicates; ++r) {
        const std::string& msg = sim_errors[static_cast<std::size_t>(r)];
        if (!msg.empty()) {
            out.failures.push_back("replicate " + std::to_string(r) + ", simulate: " + msg);
        }
    }

    const bool single_change = spec.regime.change_fractions.size() == 1;
    const double true_change = single_change ? spec.regime.change_fractions[0] : 0.0;
    for (std::size_t m = 0; m < nm; ++m) {
        MethodSummary sum;
        sum.method = spec.methods[m];
        double rand_sum = 0.0;
        double mae_sum = 0.0;
        std::int64_t mae_count = 0;
        for (std::int64_t r = 0; r < spec.replicates; ++r) {
            const RepRecord& rec = grid[m][static_cast<std::size_t>(r)];
            if (!rec.ok) {
                if (!rec.error.empty()) {
                    out.failures.push_back("replicate " + std::to_string(r) + ", " +
                                           spec.methods[m] + ": " + rec.error);
                }
                continue;
            }
            ++sum.completed;
            sum.tests += rec.tests;
            sum.positives += rec.positives;
            std::size_t k = rec.reported.size();
            if (sum.cp_count_hist.size() <= k) sum.cp_count_hist.resize(k + 1, 0);
            ++sum.cp_count_hist[k];
            rand_sum += rand_index(spec.regime.change_fractions, rec.reported, spec.n);
            if (single_change && !std::isnan(rec.est)) {
                mae_sum += std::abs(rec.est - true_change);
                ++mae_count;
            }
        }
        if (sum.completed > 0) sum.mean_rand = rand_sum / static_cast<double>(sum.completed);
        if (sum.tests > 0) {
            sum.positive_rate =
                static_cast<double>(sum.positives) / static_cast<double>(sum.tests);
            sum.bernoulli_se = std::sqrt(sum.positive_rate * (1.0 - sum.positive_rate) /
                                         static_cast<double>(sum.tests));
        }
        if (mae_count > 0) sum.mae = mae_sum / static_cast<double>(mae_count);
        if (sum.cp_count_hist.empty()) sum.cp_count_hist.push_back(0);
        out.methods.push_back(std::move(sum));
    }
    return out;
}

std::string experiment_result_to_json(const ExperimentResult& res) {
    ordered_json j;
    j["spec"] = spec_to_json_obj(res.spec);
    ordered_json methods = ordered_json::array();
    for (const MethodSummary& m : res.methods) {
        ordered_json mj;
        mj["method"] = m.method;
        mj["completed"] = m.completed;
        mj["tests"] = m.tests;
        mj["positives"] = m.positives;
        mj["positive_rate"] = m.positive_rate;
        mj["bernoulli_se"] = m.bernoulli_se;
        mj["cp_count_hist"] = m.cp_count_hist;
        mj["mean_rand"] = m.mean_rand;
        if (m.mae) {
            mj["mae"] = *m.mae;
        } else {
            mj["mae"] = nullptr;
        }
        methods.push_back(mj);
    }
    j["methods"] = methods;
    j["failures"] = res.failures;
    return j.dump(2) + "\n";
}

}  // namespace pacp
