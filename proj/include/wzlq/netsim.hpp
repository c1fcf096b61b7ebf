#pragma once

#include "wzlq/analysis.hpp"
#include "wzlq/sources.hpp"

#include <vector>

namespace wzlq {

// Unit-square sensor network: n sources on the left edge, n destinations
// on the right edge, an ell x ell router grid in between (ell = sqrt(n),
// even). Strip i (1-based) is the horizontal band containing router row
// i-1; data flows left to right along the row.
struct NetworkLayout {
    int n = 0;
    int ell = 0;
    double delta_source = 0.0; // sqrt(2)/(2 ell)
    double delta_router = 0.0; // 1/ell
    std::vector<Eigen::Vector2d> sources;      // (0, (m+1)/n), m = 0..n-1
    std::vector<Eigen::Vector2d> destinations; // (1, (m+1)/n)
    std::vector<Eigen::Vector2d> routers;      // id = row*ell + hop, hop = 0..ell-1
    std::vector<int> strip_of_source;          // 1..ell per source
    int router_id(int strip, int hop) const;   // strip 1..ell, hop 1..ell
    int router_group(int hop) const;           // hop (1-based) mod 3
};

NetworkLayout build_layout(int n);

struct Transmission {
    bool from_source = false;
    Eigen::Vector2d sender_pos;
    Eigen::Vector2d receiver_pos;
    double radius = 0.0; // sender's transmission radius
    int flow = -1;
    bool delivers = false; // receiver is the destination
};

struct ScheduleState {
    long long t = 0;
    std::vector<long long> tau; // per-strip clock, advances on active slots
    std::vector<int> rr;        // per-strip source round robin
    std::vector<int> queue;     // per-router packet flow id, -1 if empty
    std::vector<long long> delivered_bits; // per flow
    long long queue_violations = 0;
};

ScheduleState make_schedule_state(const NetworkLayout& layout);

// Executes one slot: parity rule over strips, mod-3 group rule within each
// active strip, source round robin once every ell of its group slots.
// Packets advance one hop; the returned set lists every transmission.
std::vector<Transmission> step_schedule(const NetworkLayout& layout, ScheduleState& state,
                                        int r_bits);

struct TransportAudit {
    long long slots = 0;
    long long collisions = 0;        // reception rule (a) or (b) violated
    long long queue_violations = 0;  // a router queue would exceed one packet
    long long drops = 0;
    std::vector<long long> delivered_bits; // per flow over the audited window
    double per_node_rate_bits = 0.0;       // delivered bits per node per slot
    bool exact_rate = false;               // == R/(6 sqrt(n)) with integer accounting
};

// Runs warmup periods to fill the pipeline, then audits the next `periods`
// full schedule periods (6 ell slots each).
TransportAudit run_transport(const NetworkLayout& layout, int r_bits, int periods,
                             int warmup_periods = 2);

// One codec configuration for every chain node m >= 2: a scalar nested
// lattice pair (Z, kappa = N) at `bits` per coded sample, fine scale
// t_factor times the innovation standard deviation, and a duty cycle for
// budgets below `bits` per sample. Node 1 uses a classical uniform
// quantizer at the same budget.
struct ChainCodecSpec {
    int bits = 1;
    double t_factor = 1.0;
    double duty = 1.0;
};

struct ChainRunReport {
    int n = 0;
    double sigma = 0.0;
    double budget_bits = 0.0; // per sample per node
    bool error_free = false;
    std::vector<double> distortion;        // per node, mean square error
    std::vector<double> distortion_stderr; // over slot batches
    std::vector<double> p_err;             // per node, over coded samples
    std::vector<long long> errors;         // per node
    long long total_errors = 0;
    double mean_sq_jump = 0.0; // mean squared decode jump over error samples
    // zero-order-hold interpolation at midpoints (filled when the field
    // carries a refinement stride of 2)
    std::vector<double> d_mid;
};

// Runs the spatial coding chain over the field. The field may be refined:
// with stride > 1 only every stride-th row is a sensor; the intermediate
// rows serve as ground truth for the interpolation check.
ChainRunReport chain_code(const BrownianField& field, int stride, double budget_bits,
                          const ChainCodecSpec& spec, bool error_free);

} // namespace wzlq
