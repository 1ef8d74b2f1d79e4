#include "pacp/edgelist.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace pacp {

namespace {

bool parse_int(std::string_view field, std::int64_t* out) {
    if (field.empty()) return false;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, *out);
    return ec == std::errc{} && ptr == last;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// splits one data line into at least three fields; returns false on shape errors
bool split_fields(std::string_view line, bool csv, std::int64_t out[3]) {
    std::string_view fields[3];
    int got = 0;
    if (csv) {
        std::size_t start = 0;
        while (got < 3) {
            std::size_t comma = line.find(',', start);
            std::string_view f = (comma == std::string_view::npos)
                                     ? line.substr(start)
                                     : line.substr(start, comma - start);
            fields[got++] = trim(f);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    } else {
        std::size_t i = 0;
        while (got < 3 && i < line.size()) {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            std::size_t begin = i;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            if (i > begin) fields[got++] = line.substr(begin, i - begin);
        }
    }
    if (got < 3) return false;
    for (int j = 0; j < 3; ++j) {
        if (!parse_int(fields[j], &out[j])) return false;
    }
    return out[0] >= 0 && out[1] >= 0;
}

std::vector<TemporalEdge> parse_lines(const std::string& text, EdgeFormat format) {
    std::vector<TemporalEdge> edges;
    std::int64_t bad_count = 0;
    std::vector<std::string> bad_samples;

    bool csv = format == EdgeFormat::Csv;
    bool decided = format != EdgeFormat::Auto;

    std::size_t pos = 0;
    std::int64_t line_no = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line(text.data() + pos,
                              (nl == std::string::npos ? text.size() : nl) - pos);
        pos = (nl == std::string::npos) ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        std::string_view stripped = trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        if (!decided) {
            csv = stripped.find(',') != std::string_view::npos;
            decided = true;
        }
        std::int64_t f[3];
        if (!split_fields(stripped, csv, f)) {
            ++bad_count;
            if (bad_samples.size() < 5) {
                bad_samples.push_back("line " + std::to_string(line_no) + ": " +
                                      std::string(stripped.substr(0, 80)));
            }
            continue;
        }
        edges.push_back(TemporalEdge{f[0], f[1], f[2]});
    }

    if (bad_count > 0) {
        throw ParseError("edgelist contains " + std::to_string(bad_count) + " malformed row(s)",
                         bad_count, std::move(bad_samples));
    }
    if (edges.empty()) throw EmptyInputError("edgelist holds no edges");
    std::stable_sort(edges.begin(), edges.end(),
                     [](const TemporalEdge& a, const TemporalEdge& b) { return a.ts < b.ts; });
    return edges;
}

bool parse_double_tok(std::string_view field, double* out) {
    if (field.empty()) return false;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, *out);
    return ec == std::errc{} && ptr == last;
}

std::vector<std::string_view> split_on(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t p = s.find(sep, start);
        std::string_view piece =
            (p == std::string_view::npos) ? s.substr(start) : s.substr(start, p - start);
        parts.push_back(trim(piece));
        if (p == std::string_view::npos) break;
        start = p + 1;
    }
    return parts;
}

}  // namespace

std::vector<TemporalEdge> parse_edgelist(const std::string& text, EdgeFormat format) {
    return parse_lines(text, format);
}

std::vector<TemporalEdge> read_edgelist(const std::string& path, EdgeFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgsError("cannot open edgelist file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_lines(buf.str(), format);
}

PreprocessResult preprocess_single_action(const std::vector<TemporalEdge>& edges) {
    std::unordered_map<std::int64_t, std::int64_t> out_degree;
    out_degree.reserve(edges.size() * 2);
    for (const TemporalEdge& e : edges) ++out_degree[e.src];

    PreprocessResult res;
    res.total_sources = static_cast<std::int64_t>(out_degree.size());
    for (const auto& [src, count] : out_degree) {
        if (count == 1) ++res.retained_sources;
    }
    res.retained_fraction = res.total_sources == 0
                                ? 0.0
                                : static_cast<double>(res.retained_sources) /
                                      static_cast<double>(res.total_sources);
    res.edges.reserve(static_cast<std::size_t>(res.retained_sources));
    for (const TemporalEdge& e : edges) {
        if (out_degree[e.src] == 1) res.edges.push_back(e);
    }
    return res;
}

NetworkTrace trace_from_edges(const std::vector<TemporalEdge>& edges) {
    if (edges.empty()) throw EmptyInputError("cannot build a trace from zero edges");
    std::vector<TemporalEdge> sorted = edges;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const TemporalEdge& a, const TemporalEdge& b) { return a.ts < b.ts; });

    NetworkTrace tr;
    tr.seed = SeedKind::FromData;
    tr.n = static_cast<std::int64_t>(sorted.size());
    tr.original_ids.push_back("");  // dense ids start at 1

    std::unordered_map<std::int64_t, std::int64_t> dense;
    dense.reserve(sorted.size() * 2);
    std::vector<std::int64_t> degree;
    degree.push_back(0);  // slot for the unused id 0

    auto lookup = [&](std::int64_t original) {
        auto [it, fresh] = dense.try_emplace(original, static_cast<std::int64_t>(degree.size()));
        if (fresh) {
            degree.push_back(0);
            tr.original_ids.push_back(std::to_string(original));
        }
        return it->second;
    };

    for (const TemporalEdge& e : sorted) {
        tr.present_before.push_back(static_cast<std::int64_t>(degree.size()) - 1);
        std::int64_t s = lookup(e.src);
        std::int64_t d = lookup(e.dst);
        if (degree[static_cast<std::size_t>(s)] == 0) degree[static_cast<std::size_t>(s)] = 1;
        if (degree[static_cast<std::size_t>(d)] == 0) degree[static_cast<std::size_t>(d)] = 1;
        tr.data_sources.push_back(s);
        tr.chosen.push_back(d);
        tr.pre_degree.push_back(degree[static_cast<std::size_t>(d)]);
        degree[static_cast<std::size_t>(d)] += 1;
        tr.timestamps.push_back(static_cast<double>(e.ts));
    }
    return tr;
}

AttachmentRegime parse_regime(const std::string& text) {
    std::string_view body = trim(text);
    if (body.empty()) throw InvalidArgsError("empty regime");
    std::string_view fracs_part;
    std::string_view phases_part = body;
    std::size_t colon = body.find(':');
    if (colon != std::string_view::npos) {
        fracs_part = trim(body.substr(0, colon));
        phases_part = trim(body.substr(colon + 1));
    }
    AttachmentRegime reg;
    if (!fracs_part.empty()) {
        for (std::string_view tok : split_on(fracs_part, ',')) {
            double f = 0.0;
            if (!parse_double_tok(tok, &f)) {
                throw InvalidArgsError("bad change fraction: " + std::string(tok));
            }
            reg.change_fractions.push_back(f);
        }
    }
    if (phases_part.empty()) throw InvalidArgsError("regime lists no phases");
    for (std::string_view tok : split_on(phases_part, ',')) {
        RegimePhase ph;
        std::size_t caret = tok.find('^');
        if (caret == std::string_view::npos) {
            if (!parse_double_tok(tok, &ph.delta)) {
                throw InvalidArgsError("bad phase token: " + std::string(tok));
            }
        } else {
            std::string_view d = trim(tok.substr(0, caret));
            std::string_view e = trim(tok.substr(caret + 1));
            if (!d.empty() && !parse_double_tok(d, &ph.delta)) {
                throw InvalidArgsError("bad phase token: " + std::string(tok));
            }
            if (!parse_double_tok(e, &ph.exponent)) {
                throw InvalidArgsError("bad phase token: " + std::string(tok));
            }
        }
        reg.phases.push_back(ph);
    }
    if (reg.phases.size() != reg.change_fractions.size() + 1) {
        throw InvalidArgsError("regime needs exactly one more phase than change fractions");
    }
    return reg;
}

std::string format_regime(const AttachmentRegime& regime) {
    std::string out;
    for (std::size_t i = 0; i < regime.change_fractions.size(); ++i) {
        if (i > 0) out += ',';
        out += format_double(regime.change_fractions[i]);
    }
    if (!regime.change_fractions.empty()) out += ':';
    for (std::size_t i = 0; i < regime.phases.size(); ++i) {
        if (i > 0) out += ',';
        out += format_double(regime.phases[i].delta);
        if (regime.phases[i].exponent != 1.0) {
            out += '^';
            out += format_double(regime.phases[i].exponent);
        }
    }
    return out;
}

namespace {

const char kTraceColumns[] = "event_index,chosen_node,pre_attach_degree";

}  // namespace

void write_trace_csv(const NetworkTrace& trace, const std::string& path) {
    if (trace.from_data()) {
        throw InvalidArgsError("data-backed traces have no CSV trace form");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgsError("cannot open for writing: " + path);
    out << "# pacp-trace v1\n";
    out << "# seed " << (trace.seed == SeedKind::SelfLoopNode ? "self-loop" : "two-node") << '\n';
    out << "# n " << trace.n << '\n';
    out << "# rng_seed " << trace.rng_seed << '\n';
    out << "# regime " << format_regime(trace.regime) << '\n';
    out << kTraceColumns << '\n';
    for (std::int64_t e = 0; e < trace.events(); ++e) {
        std::size_t i = static_cast<std::size_t>(e);
        out << trace.step_of(e) << ',' << trace.chosen[i] << ',' << trace.pre_degree[i] << '\n';
    }
    out.flush();
    if (!out) throw InvalidArgsError("write failed: " + path);
}

NetworkTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgsError("cannot open trace file: " + path);

    NetworkTrace tr;
    bool got_version = false;
    bool got_seed = false;
    bool got_n = false;
    bool got_rng = false;
    bool got_regime = false;
    std::vector<std::array<std::int64_t, 3>> rows;
    std::int64_t bad_count = 0;
    std::vector<std::string> bad_samples;

    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view sv = trim(line);
        if (sv.empty()) continue;
        if (sv.front() == '#') {
            std::string_view head = trim(sv.substr(1));
            if (head == "pacp-trace v1") {
                got_version = true;
                continue;
            }
            std::size_t sp = head.find(' ');
            if (sp == std::string_view::npos) continue;
            std::string_view key = head.substr(0, sp);
            std::string_view val = trim(head.substr(sp + 1));
            if (key == "seed") {
                if (val == "self-loop") {
                    tr.seed = SeedKind::SelfLoopNode;
                } else if (val == "two-node") {
                    tr.seed = SeedKind::TwoNodesDoubleEdge;
                } else {
                    throw InvalidArgsError("unknown seed kind in trace header: " +
                                           std::string(val));
                }
                got_seed = true;
            } else if (key == "n") {
                if (!parse_int(val, &tr.n)) {
                    throw InvalidArgsError("bad n in trace header: " + std::string(val));
                }
                got_n = true;
            } else if (key == "rng_seed") {
                unsigned long long s = 0;
                auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), s);
                if (ec != std::errc{} || ptr != val.data() + val.size()) {
                    throw InvalidArgsError("bad rng_seed in trace header: " + std::string(val));
                }
                tr.rng_seed = s;
                got_rng = true;
            } else if (key == "regime") {
                tr.regime = parse_regime(std::string(val));
                got_regime = true;
            }
            continue;
        }
        if (sv == kTraceColumns) continue;
        std::int64_t f[3];
        if (!split_fields(sv, true, f)) {
            ++bad_count;
            if (bad_samples.size() < 5) {
                bad_samples.push_back("line " + std::to_string(line_no) + ": " +
                                      std::string(sv.substr(0, 80)));
            }
            continue;
        }
        rows.push_back({f[0], f[1], f[2]});
    }

    if (bad_count > 0) {
        throw ParseError("trace file contains " + std::to_string(bad_count) + " malformed row(s)",
                         bad_count, std::move(bad_samples));
    }
    if (!(got_version && got_seed && got_n && got_rng && got_regime)) {
        throw InvalidArgsError(
            "trace header incomplete (needs pacp-trace v1, seed, n, rng_seed, regime)");
    }
    std::int64_t seed_size = tr.seed == SeedKind::TwoNodesDoubleEdge ? 2 : 1;
    if (static_cast<std::int64_t>(rows.size()) != tr.n - seed_size) {
        throw InvalidArgsError("trace holds " + std::to_string(rows.size()) +
                               " events, expected " + std::to_string(tr.n - seed_size));
    }
    tr.regime.validate(tr.n, seed_size);
    tr.chosen.reserve(rows.size());
    tr.pre_degree.reserve(rows.size());
    for (std::size_t e = 0; e < rows.size(); ++e) {
        std::int64_t step = seed_size + 1 + static_cast<std::int64_t>(e);
        if (rows[e][0] != step) {
            throw InvalidArgsError("trace row " + std::to_string(e) + " has event_index " +
                                   std::to_string(rows[e][0]) + ", expected " +
                                   std::to_string(step));
        }
        if (rows[e][1] < 1 || rows[e][1] >= step) {
            throw InvalidArgsError("trace row " + std::to_string(e) +
                                   " attaches to an absent node");
        }
        if (rows[e][2] < 1) {
            throw InvalidArgsError("trace row " + std::to_string(e) +
                                   " has a nonpositive pre-attachment degree");
        }
        tr.chosen.push_back(rows[e][1]);
        tr.pre_degree.push_back(rows[e][2]);
    }
    return tr;
}

}  // namespace pacp
