// Copyright 2026 The semtx Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "semtx/protocol.hpp"

#include <cmath>
#include <cstdio>

#include "semtx/codec.hpp"
#include "semtx/errors.hpp"
#include "semtx/metrics.hpp"
#include "semtx/rng.hpp"

namespace semtx::protocol {

namespace {

constexpr double kDeltaRatio = 1.25;

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

codec::Payload over_link(const codec::Payload& p, double snr_db, const phy::LinkConfig& link, Rng& rng,
                         double* ber) {
    phy::TransmitResult tx = phy::transmit_bytes(p.bytes, snr_db, link, rng);
    if (ber) *ber = tx.report.ber;
    return {p.kind, std::move(tx.bytes)};
}

} // namespace

std::string to_string(Strategy s) {
    switch (s) {
    case Strategy::FixedInterval: return "fixed_interval";
    case Strategy::FeedbackPart: return "feedback_part";
    case Strategy::FeedbackFull: return "feedback_full";
    case Strategy::FeedbackActive: return "feedback_active";
    case Strategy::PredictOnly: return "predict_only";
    }
    return "?";
}

Strategy strategy_from_string(const std::string& s) {
    for (Strategy v : {Strategy::FixedInterval, Strategy::FeedbackPart, Strategy::FeedbackFull,
                       Strategy::FeedbackActive, Strategy::PredictOnly}) {
        if (to_string(v) == s) return v;
    }
    throw ConfigError("unknown strategy: " + s);
}

std::string to_string(Trigger t) {
    switch (t) {
    case Trigger::Initial: return "initial";
    case Trigger::Schedule: return "schedule";
    case Trigger::Feedback: return "feedback";
    case Trigger::None: return "none";
    }
    return "?";
}

void SessionConfig::validate() const {
    if (interval < 1) throw ConfigError("protocol.interval must be at least 1");
    if (!(sigma > 0.0 && sigma < 1.0)) throw ConfigError("protocol.sigma must lie in (0, 1)");
    if (theta_full_db < theta_part_db) throw ConfigError("protocol.theta_full_db must be >= theta_part_db");
}

bool SessionConfig::uses_feedback() const {
    return strategy == Strategy::FeedbackPart || strategy == Strategy::FeedbackFull ||
           strategy == Strategy::FeedbackActive;
}

double delta_exceed(const Grid<double>& a, const Grid<double>& b) {
    if (!a.same_shape(b)) throw InputError("delta_exceed: depth maps differ in size");
    if (a.size() == 0) throw InputError("delta_exceed: empty depth map");
    std::size_t over = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = a.data()[i];
        const double y = b.data()[i];
        if (!(x > 0.0) || !(y > 0.0)) throw DomainError("delta_exceed: depths must be positive");
        if (std::max(x / y, y / x) > kDeltaRatio) ++over;
    }
    return static_cast<double>(over) / static_cast<double>(a.size());
}

bool feedback_decision(const Grid<double>& true_depth, const Grid<double>& fed_back_depth, double sigma) {
    return delta_exceed(true_depth, fed_back_depth) > sigma;
}

ModeDecision mode_select(double snr_db, const SessionConfig& cfg, bool requested) {
    if (!requested || cfg.strategy == Strategy::PredictOnly) return {};
    const bool full_ok = snr_db >= cfg.theta_full_db;
    const bool part_ok = snr_db >= cfg.theta_part_db;
    switch (cfg.strategy) {
    case Strategy::FeedbackPart:
        return part_ok ? ModeDecision{TxMode::Part, false} : ModeDecision{TxMode::Predict, true};
    case Strategy::FeedbackFull:
        return full_ok ? ModeDecision{TxMode::Full, false} : ModeDecision{TxMode::Predict, true};
    default:
        if (full_ok) return {TxMode::Full, false};
        if (part_ok) return {TxMode::Part, false};
        return {TxMode::Predict, true};
    }
}

SessionTrace run_session(const SessionInputs& in) {
    return run_session(in, world::scene_init(in.scenario, in.seed));
}

SessionTrace run_session(const SessionInputs& in, const world::SceneState& initial_truth) {
    const SessionConfig& cfg = in.config;
    cfg.validate();
    in.profile.validate();
    in.link.validate();
    if (in.snr_db.empty()) throw ConfigError("session needs an SNR for slot 0");
    const int num_slots = static_cast<int>(in.snr_db.size()) - 1;

    Rng pred_rng = make_rng(in.seed, Stream::Predictor);
    Rng fwd_rng = make_rng(in.seed, Stream::ForwardLink);
    Rng fb_rng = make_rng(in.seed, Stream::FeedbackLink);
    const predictor::Guidance guidance{world::kCameraSpeed, in.scenario};

    SessionTrace trace;
    trace.seed = in.seed;
    trace.count_feedback_in_ledger = cfg.count_feedback_in_ledger;
    trace.slots.reserve(in.snr_db.size());

    world::SceneState truth = initial_truth;
    predictor::PredictorState ps = predictor::initial_state(in.scenario);
    std::uint16_t sequence = 0;

    auto record = [&](const LedgerEntry& entry, const world::RenderSet& shown, const world::RenderSet& real,
                      double feedback_delta, double ber) {
        SlotRecord r;
        r.ledger = entry;
        r.mse = metrics::mse(shown.frame, real.frame);
        r.psnr_db = metrics::psnr_from_mse(r.mse);
        r.miou = metrics::miou(shown.mask, real.mask, world::kNumLabels);
        r.delta_exceed = delta_exceed(codec::depth_cells(shown.depth), codec::depth_cells(real.depth));
        r.feedback_delta = feedback_delta;
        r.forward_ber = ber;
        trace.slots.push_back(r);
    };

    auto send_full = [&](int slot, const world::RenderSet& real, double* ber) {
        const codec::Payload p = codec::encode_full(
            real.frame, truth, {static_cast<std::uint16_t>(slot), sequence++});
        const codec::FullDecoded d = codec::decode_full(over_link(p, in.snr_db[slot], in.link, fwd_rng, ber));
        ps = predictor::receive_full(d, ps, guidance);
    };

    {
        const world::RenderSet real = world::render(truth);
        double ber = 0.0;
        send_full(0, real, &ber);
        LedgerEntry e;
        e.slot = 0;
        e.mode = TxMode::Full;
        e.forward_bytes = codec::payload_size(codec::PayloadKind::Full);
        e.snr_db = in.snr_db[0];
        e.triggered_by = Trigger::Initial;
        record(e, world::render(ps.believed), real, 0.0, ber);
    }

    bool pending_feedback = false;
    for (int t = 1; t <= num_slots; ++t) {
        const double snr = in.snr_db[static_cast<std::size_t>(t)];
        predictor::Prediction pred = predictor::predict_step(ps, guidance, in.profile, pred_rng);
        ps = pred.state;
        truth = world::scene_step(truth);
        const world::RenderSet real = world::render(truth);

        LedgerEntry e;
        e.slot = t;
        e.snr_db = snr;
        bool feedback = false;
        double feedback_delta = 0.0;
        if (cfg.uses_feedback()) {
            const codec::Payload p = codec::encode_depth(
                pred.render.depth, {static_cast<std::uint16_t>(t), sequence++});
            const codec::DepthDecoded d = codec::decode_depth(over_link(p, snr, in.link, fb_rng, nullptr));
            feedback_delta = delta_exceed(codec::depth_cells(real.depth), d.cells);
            const bool now = feedback_delta > cfg.sigma;
            if (cfg.feedback_delay) {
                feedback = pending_feedback;
                pending_feedback = now;
            } else {
                feedback = now;
            }
            e.feedback_bytes = codec::payload_size(codec::PayloadKind::Depth);
        }
        const bool scheduled =
            (cfg.strategy == Strategy::FixedInterval && t % cfg.interval == 0) ||
            (cfg.strategy == Strategy::FeedbackActive && in.plan.contains(t));
        const bool requested = scheduled || feedback;
        const ModeDecision decision = mode_select(snr, cfg, requested);
        e.mode = decision.mode;
        e.deferred = decision.infeasible;
        e.triggered_by = !requested ? Trigger::None : (scheduled ? Trigger::Schedule : Trigger::Feedback);

        double ber = 0.0;
        world::RenderSet shown;
        switch (decision.mode) {
        case TxMode::Full:
            send_full(t, real, &ber);
            e.forward_bytes = codec::payload_size(codec::PayloadKind::Full);
            shown = world::render(ps.believed);
            break;
        case TxMode::Part: {
            const codec::Payload p = codec::encode_mask(real.mask);
            const codec::MaskDecoded d = codec::decode_mask(over_link(p, snr, in.link, fwd_rng, &ber));
            ps = predictor::repair(ps, d.mask, d.corruption).state;
            e.forward_bytes = codec::payload_size(codec::PayloadKind::Mask);
            shown = world::render(ps.believed);
            break;
        }
        case TxMode::Predict:
            shown = std::move(pred.render);
            break;
        }
        record(e, shown, real, feedback_delta, ber);
    }
    check_trace(trace, num_slots);
    return trace;
}

LedgerTotals ledger_totals(const SessionTrace& trace) {
    LedgerTotals tot;
    for (const auto& s : trace.slots) {
        const LedgerEntry& e = s.ledger;
        tot.forward_bytes += e.forward_bytes;
        tot.feedback_bytes += e.feedback_bytes;
        if (e.mode == TxMode::Full) ++tot.full_count;
        if (e.mode == TxMode::Part) ++tot.part_count;
        if (e.mode != TxMode::Predict) {
            ++tot.transmission_count;
            if (e.triggered_by == Trigger::Feedback) ++tot.feedback_triggered;
            if (e.triggered_by == Trigger::Schedule) ++tot.schedule_triggered;
        }
        if (e.deferred) ++tot.deferred;
    }
    if (trace.count_feedback_in_ledger) tot.forward_bytes += tot.feedback_bytes;
    return tot;
}

std::string format_psnr(double psnr_db) {
    return std::isinf(psnr_db) ? std::string("inf") : num(psnr_db);
}

std::string trace_to_csv(const SessionTrace& trace) {
    std::string out = "slot,mode,triggered_by,snr_db,forward_bytes,feedback_bytes,mse,psnr_db,miou,delta_exceed\n";
    for (const auto& s : trace.slots) {
        const LedgerEntry& e = s.ledger;
        out += std::to_string(e.slot) + ',' + to_string(e.mode) + ',' + to_string(e.triggered_by) + ',' +
               num(e.snr_db) + ',' + std::to_string(e.forward_bytes) + ',' + std::to_string(e.feedback_bytes) +
               ',' + num(s.mse) + ',' + format_psnr(s.psnr_db) + ',' + num(s.miou) + ',' + num(s.delta_exceed) +
               '\n';
    }
    return out;
}

void check_trace(const SessionTrace& trace, int num_slots) {
    if (static_cast<int>(trace.slots.size()) != num_slots + 1) {
        throw InvariantViolation("trace length differs from num_slots + 1");
    }
    const auto& first = trace.slots.front().ledger;
    if (first.mode != TxMode::Full || first.triggered_by != Trigger::Initial) {
        throw InvariantViolation("slot 0 must be an initial full transmission");
    }
    std::size_t forward = 0;
    std::size_t expected = 0;
    for (const auto& s : trace.slots) {
        const LedgerEntry& e = s.ledger;
        const std::size_t want = e.mode == TxMode::Full   ? codec::payload_size(codec::PayloadKind::Full)
                                 : e.mode == TxMode::Part ? codec::payload_size(codec::PayloadKind::Mask)
                                                          : 0;
        if (e.forward_bytes != want) throw InvariantViolation("forward bytes do not match the mode");
        if (e.feedback_bytes != 0 && e.feedback_bytes != codec::payload_size(codec::PayloadKind::Depth)) {
            throw InvariantViolation("feedback bytes must be 0 or one depth payload");
        }
        forward += e.forward_bytes;
        expected += want;
    }
    if (forward != expected) throw InvariantViolation("ledger identity broken");
}

} // namespace semtx::protocol
