#pragma once
// Temporal edgelist ingestion: parsing, the single-action source filter, and
// conversion into the event-trace form the detectors consume.
//
// Replay conventions for real data (which rarely is an exact recursive tree):
//   * node ids are re-labeled densely in first-seen order, original labels kept;
//   * a node enters the replay at degree 1 the first time it appears on either
//     side of an edge (its first edge is its birth edge);
//   * each event records the target's pre-attachment degree, so a never-seen
//     target is recorded at degree 1 and leaves the event at degree 2;
//   * the likelihood machinery uses the running count of present nodes where
//     the tree model would use the step index; the two coincide on traces that
//     actually follow the model.

#include <cstdint>
#include <string>
#include <vector>

#include "pacp/common.hpp"
#include "pacp/network.hpp"

namespace pacp {

struct TemporalEdge {
    std::int64_t src = 0;
    std::int64_t dst = 0;
    std::int64_t ts = 0;

    friend bool operator==(const TemporalEdge& a, const TemporalEdge& b) {
        return a.src == b.src && a.dst == b.dst && a.ts == b.ts;
    }
};

enum class EdgeFormat {
    Auto,        // csv when the first data line contains a comma
    Whitespace,  // columns split on runs of spaces/tabs
    Csv,
};

// Reads (src, dst, ts) rows, skipping blank lines and '#' comments; extra
// trailing columns are ignored. Rows are stably sorted by timestamp (ties keep
// file order). Malformed rows abort the read: the error carries their count
// and the first few offending lines.
std::vector<TemporalEdge> read_edgelist(const std::string& path,
                                        EdgeFormat format = EdgeFormat::Auto);

// Same parser over an already-loaded text buffer (used by tests and the CLI).
std::vector<TemporalEdge> parse_edgelist(const std::string& text,
                                         EdgeFormat format = EdgeFormat::Auto);

struct PreprocessResult {
    std::vector<TemporalEdge> edges;     // edges whose source acted exactly once
    std::int64_t total_sources = 0;      // distinct sources before filtering
    std::int64_t retained_sources = 0;   // sources with a single action
    double retained_fraction = 0.0;      // retained_sources / total_sources
};

// Drops every edge whose source appears as a source more than once.
PreprocessResult preprocess_single_action(const std::vector<TemporalEdge>& edges);

// Replays edges in time order into a NetworkTrace (seed = FromData).
NetworkTrace trace_from_edges(const std::vector<TemporalEdge>& edges);

// One-line attachment-rule syntax: change fractions before a colon, one phase
// token per segment after it, e.g. "0.6:0,0.5" or "0.2,0.5:1,1.5,1.2"; a bare
// "1.0" is a single affine phase. A token "d^b" requests weight (degree+1)^b
// instead of the affine degree+d.
AttachmentRegime parse_regime(const std::string& text);
std::string format_regime(const AttachmentRegime& regime);

// Simulated-trace CSV: '#' header lines carry the seed kind, n, rng_seed, and
// regime; data rows are event_index,chosen_node,pre_attach_degree. Data-backed
// traces are not writable in this form (they flow straight from edge files).
void write_trace_csv(const NetworkTrace& trace, const std::string& path);
NetworkTrace read_trace_csv(const std::string& path);

}  // namespace pacp
