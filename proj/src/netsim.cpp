#include "wzlq/netsim.hpp"

#include "wzlq/codec.hpp"

#include <cmath>
#include <stdexcept>

namespace wzlq {

int NetworkLayout::router_id(int strip, int hop) const {
    return (strip - 1) * ell + (hop - 1);
}

int NetworkLayout::router_group(int hop) const { return hop % 3; }

NetworkLayout build_layout(int n) {
    if (n < 4) throw std::invalid_argument("need at least 4 nodes");
    int ell = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (ell * ell != n) throw std::invalid_argument("node count must be a perfect square");
    if (ell % 2 != 0) throw std::invalid_argument("sqrt of node count must be even");

    NetworkLayout lay;
    lay.n = n;
    lay.ell = ell;
    lay.delta_source = std::sqrt(2.0) / (2.0 * ell);
    lay.delta_router = 1.0 / ell;
    lay.sources.resize(n);
    lay.destinations.resize(n);
    lay.strip_of_source.resize(n);
    for (int m = 0; m < n; ++m) {
        double y = static_cast<double>(m + 1) / n;
        lay.sources[m] = Eigen::Vector2d(0.0, y);
        lay.destinations[m] = Eigen::Vector2d(1.0, y);
        lay.strip_of_source[m] = static_cast<int>(std::ceil(y * ell - 1e-12));
    }
    lay.routers.resize(ell * ell);
    for (int row = 0; row < ell; ++row)
        for (int hop = 0; hop < ell; ++hop)
            lay.routers[row * ell + hop] = Eigen::Vector2d(
                (0.5 + hop) / ell, (0.5 + row) / ell);
    return lay;
}

ScheduleState make_schedule_state(const NetworkLayout& layout) {
    ScheduleState st;
    st.tau.assign(layout.ell + 1, 0);
    st.rr.assign(layout.ell + 1, 0);
    st.queue.assign(layout.ell * layout.ell, -1);
    st.delivered_bits.assign(layout.n, 0);
    return st;
}

std::vector<Transmission> step_schedule(const NetworkLayout& layout, ScheduleState& state,
                                        int r_bits) {
    const int ell = layout.ell;
    std::vector<Transmission> txs;

    struct Move {
        int from_router; // -1 for a source injection
        int to_router;   // -1 for a delivery
        int flow;
    };
    std::vector<Move> moves;

    for (int strip = 1; strip <= ell; ++strip) {
        if ((strip & 1) != (state.t & 1)) continue;
        int g = static_cast<int>(state.tau[strip] % 3);

        if (g == 0) {
            int src = (strip - 1) * ell + state.rr[strip];
            state.rr[strip] = (state.rr[strip] + 1) % ell;
            Transmission tx;
            tx.from_source = true;
            tx.sender_pos = layout.sources[src];
            tx.receiver_pos = layout.routers[layout.router_id(strip, 1)];
            tx.radius = layout.delta_source;
            tx.flow = src;
            txs.push_back(tx);
            moves.push_back({-1, layout.router_id(strip, 1), src});
        }
        for (int hop = 1; hop <= ell; ++hop) {
            if (layout.router_group(hop) != g) continue;
            int rid = layout.router_id(strip, hop);
            int flow = state.queue[rid];
            if (flow < 0) continue;
            Transmission tx;
            tx.sender_pos = layout.routers[rid];
            tx.radius = layout.delta_router;
            tx.flow = flow;
            if (hop == ell) {
                tx.receiver_pos = layout.destinations[flow];
                tx.delivers = true;
                moves.push_back({rid, -1, flow});
            } else {
                tx.receiver_pos = layout.routers[layout.router_id(strip, hop + 1)];
                moves.push_back({rid, layout.router_id(strip, hop + 1), flow});
            }
            txs.push_back(tx);
        }
        state.tau[strip] += 1;
    }

    for (const auto& mv : moves)
        if (mv.from_router >= 0) state.queue[mv.from_router] = -1;
    for (const auto& mv : moves) {
        if (mv.to_router < 0) {
            state.delivered_bits[mv.flow] += r_bits;
        } else if (state.queue[mv.to_router] >= 0) {
            state.queue_violations += 1; // packet dropped, receiver occupied
        } else {
            state.queue[mv.to_router] = mv.flow;
        }
    }
    state.t += 1;
    return txs;
}

TransportAudit run_transport(const NetworkLayout& layout, int r_bits, int periods,
                             int warmup_periods) {
    const long long period = 6LL * layout.ell;
    ScheduleState st = make_schedule_state(layout);
    TransportAudit audit;
    audit.delivered_bits.assign(layout.n, 0);

    auto audit_slot = [&](const std::vector<Transmission>& txs) {
        const double eps = 1e-12;
        for (size_t j = 0; j < txs.size(); ++j) {
            if ((txs[j].sender_pos - txs[j].receiver_pos).norm() > txs[j].radius + eps)
                audit.collisions += 1;
            for (size_t k = 0; k < txs.size(); ++k) {
                if (k == j) continue;
                if ((txs[k].sender_pos - txs[j].receiver_pos).norm() < txs[k].radius - eps)
                    audit.collisions += 1;
            }
        }
    };

    long long warm_slots = warmup_periods * period;
    for (long long t = 0; t < warm_slots; ++t) step_schedule(layout, st, r_bits);
    std::vector<long long> base = st.delivered_bits;

    audit.slots = periods * period;
    for (long long t = 0; t < audit.slots; ++t)
        audit_slot(step_schedule(layout, st, r_bits));

    long long total = 0;
    for (int m = 0; m < layout.n; ++m) {
        audit.delivered_bits[m] = st.delivered_bits[m] - base[m];
        total += audit.delivered_bits[m];
    }
    audit.queue_violations = st.queue_violations;
    audit.drops = st.queue_violations;
    audit.per_node_rate_bits =
        static_cast<double>(total) / (static_cast<double>(audit.slots) * layout.n);

    bool exact = true;
    long long expect = static_cast<long long>(r_bits) * periods;
    for (int m = 0; m < layout.n; ++m)
        if (audit.delivered_bits[m] != expect) exact = false;
    // per node per slot this is exactly R/(6 ell)
    audit.exact_rate = exact && audit.collisions == 0 && audit.queue_violations == 0;
    return audit;
}

namespace {

// Classical uniform mid-rise quantizer for the first node, which has no
// decoded neighbor to lean on. Loading four standard deviations.
double classical_reconstruct(double x, int levels, double sd) {
    double load = 4.0 * sd;
    double step = 2.0 * load / levels;
    double idx = std::floor(x / step) + levels / 2.0;
    if (idx < 0) idx = 0;
    if (idx > levels - 1) idx = levels - 1;
    return (idx - levels / 2.0 + 0.5) * step;
}

} // namespace

ChainRunReport chain_code(const BrownianField& field, int stride, double budget_bits,
                          const ChainCodecSpec& spec, bool error_free) {
    if (stride < 1 || field.nodes % stride != 0)
        throw std::invalid_argument("field rows must be a multiple of the stride");
    const int n = field.nodes / stride;
    const int slots = field.slots;
    if (spec.bits < 1 || spec.bits > 24) throw std::invalid_argument("bits out of range");
    if (!(spec.duty > 0.0) || spec.duty > 1.0)
        throw std::invalid_argument("duty must be in (0, 1]");

    const int big_n = 1 << spec.bits;
    const double inno_sd = field.sigma / std::sqrt(static_cast<double>(n));
    const double s = spec.t_factor * inno_sd;

    auto z1 = make_zn(1);
    WzLvq q = make_codec(z1, scaling_similarity(z1, big_n), s);

    ChainRunReport rep;
    rep.n = n;
    rep.sigma = field.sigma;
    rep.budget_bits = budget_bits;
    rep.error_free = error_free;
    rep.distortion.assign(n, 0.0);
    rep.distortion_stderr.assign(n, 0.0);
    rep.p_err.assign(n, 0.0);
    rep.errors.assign(n, 0);
    if (stride == 2) rep.d_mid.assign(n, 0.0);

    const int batches = 20;
    std::vector<std::vector<Accumulator>> batch_d(
        n, std::vector<Accumulator>(batches));
    std::vector<long long> coded_count(n, 0);
    double jump_sq = 0.0;
    long long jump_cnt = 0;

    Eigen::VectorXd xv(1), yv(1);
    for (int k = 0; k < slots; ++k) {
        int batch = k * batches / slots;
        double prev_hat = 0.0;
        for (int m = 1; m <= n; ++m) {
            double truth = field.samples(m * stride - 1, k);
            double xhat;
            if (m == 1) {
                xhat = classical_reconstruct(truth, big_n, inno_sd);
            } else {
                // deterministic duty pattern: code this slot for this node
                // iff the running budget crosses an integer
                bool coded = std::floor((k + 1) * spec.duty) > std::floor(k * spec.duty);
                if (!coded) {
                    xhat = prev_hat;
                } else {
                    coded_count[m - 1] += 1;
                    xv[0] = truth;
                    auto fp = fine_point(q, xv);
                    if (error_free) {
                        xhat = fp.embedding[0];
                    } else {
                        yv[0] = prev_hat;
                        int idx = encode(q, xv);
                        Eigen::VectorXd out = decode(q, idx, yv);
                        xhat = out[0];
                        double jump = xhat - fp.embedding[0];
                        if (std::abs(jump) > 1e-9 * (1.0 + std::abs(fp.embedding[0]))) {
                            rep.errors[m - 1] += 1;
                            jump_sq += jump * jump;
                            jump_cnt += 1;
                        }
                    }
                }
            }
            double err = xhat - truth;
            batch_d[m - 1][batch].add(err * err);
            if (stride == 2) {
                double mid_truth = field.samples(m * stride - 2, k);
                rep.d_mid[m - 1] += (prev_hat - mid_truth) * (prev_hat - mid_truth);
            }
            prev_hat = xhat;
        }
    }

    for (int m = 0; m < n; ++m) {
        double total_sum = 0.0;
        long long total_cnt = 0;
        Accumulator bsum, bsq;
        for (int b = 0; b < batches; ++b) {
            double bm = batch_d[m][b].mean();
            bsum.add(bm);
            bsq.add(bm * bm);
            total_sum += batch_d[m][b].sum;
            total_cnt += batch_d[m][b].count;
        }
        rep.distortion[m] = total_sum / static_cast<double>(total_cnt);
        double mu = bsum.mean();
        double var = bsq.mean() - mu * mu;
        if (var < 0) var = 0;
        rep.distortion_stderr[m] = std::sqrt(var / batches);
        if (coded_count[m] > 0)
            rep.p_err[m] = static_cast<double>(rep.errors[m]) / coded_count[m];
        rep.total_errors += rep.errors[m];
        if (stride == 2) rep.d_mid[m] /= slots;
    }
    rep.mean_sq_jump = jump_cnt > 0 ? jump_sq / jump_cnt : 0.0;
    return rep;
}

} // namespace wzlq
