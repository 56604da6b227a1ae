#include "ftag/experiments.hpp"

#include "ftag/adversary.hpp"
#include "ftag/bounds.hpp"
#include "ftag/channel.hpp"
#include "ftag/engine.hpp"
#include "ftag/numeric.hpp"
#include "ftag/protocol.hpp"
#include "ftag/rng.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace ftag::harness {

namespace {

using Defaults = std::vector<std::pair<std::string, std::string>>;

constexpr const char* default_key = "0f1e2d3c4b5a69788796a5b4c3d2e1f0";

Defaults with_common(Defaults d, const char* trials = "10000")
{
    d.insert(d.begin(), {{"seed", "1"}, {"trials", trials}});
    return d;
}

std::vector<ExperimentInfo> build_catalog()
{
    return {
        {"detect-sweep", "P_D, P_FA vs SNR for several list lengths, with the union bound",
         with_common({{"N", "256"},
                      {"k_o", "128"},
                      {"Ne", "128"},
                      {"Ke", "4,8"},
                      {"L", "1,2,4,8"},
                      {"snr_db", "-16:0:1"},
                      {"receiver", "genie"},
                      {"outer_list", "8"},
                      {"fading", "none"},
                      {"key", default_key}})},
        {"taglen-sweep", "P_D vs SNR for several frozen tag lengths, proposed vs uncoded baseline",
         with_common({{"N", "512"},
                      {"k_o", "256"},
                      {"Ne", "64,128,256"},
                      {"Ke", "32"},
                      {"L", "1"},
                      {"snr_db", "-6:2:0.5"},
                      {"p_fa", "0.01"},
                      {"receiver", "genie"},
                      {"outer_list", "8"},
                      {"fading", "none"},
                      {"key", default_key}})},
        {"interference-sweep", "P_D vs SINR under multiuser interference, proposed vs uncoded baseline",
         with_common({{"N", "512"},
                      {"k_o", "256"},
                      {"Ne", "128,256"},
                      {"Ke", "32"},
                      {"L", "1"},
                      {"K", "8"},
                      {"snr_db", "0"},
                      {"sinr_db", "-16:8:0.5"},
                      {"p_fa", "0.01"},
                      {"target_pd", "0.8"},
                      {"receiver", "genie"},
                      {"outer_list", "8"},
                      {"fading", "none"},
                      {"key", default_key}})},
        {"eaves-position", "Eve's tag position classification errors vs SNR, analytic and Monte Carlo",
         with_common({{"N", "256"}, {"Ne", "32,64,128"}, {"Ke", "4"}, {"snr_db", "-2:10:1"}, {"key", default_key}})},
        {"eaves-tag", "Accumulated noise power of Eve's raw tag estimate vs SNR and frozen tag length",
         with_common({{"Ne", "32,64,128,256"}, {"Ke_ratio", "0.25"}, {"design_sigma2", "1"}, {"snr_db", "-4:10:2"}},
                     "2000")},
        {"spoof-sd", "Normalized symmetric difference between legitimate and spoofed tag positions",
         with_common({{"N", "128,256,512,1024"}, {"Ne", "32,64,128"}})},
        {"ber-bound", "Unconscious receiver BER: cascaded-channel upper bound and SC simulation",
         with_common({{"N", "256"},
                      {"rate", "0.5"},
                      {"Ne", "0,16,32"},
                      {"Ke", "4"},
                      {"snr_db", "0:6:1"},
                      {"key", default_key}})},
    };
}

std::string num(double v) { return format_number(v); }
std::string num(std::size_t v) { return std::to_string(v); }

std::vector<double> sorted_grid(const Config& c, const std::string& key)
{
    auto g = c.get_grid(key);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

std::vector<std::size_t> sorted_sizes(const Config& c, const std::string& key)
{
    auto g = c.get_size_list(key);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

keyed::SecretKey config_key(const Config& c)
{
    try {
        return keyed::SecretKey::from_hex(c.get_string("key"));
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(fmt::format("'key': {}", e.what()));
    }
}

enum class Receiver { genie, full };

Receiver config_receiver(const Config& c)
{
    const auto& r = c.get_string("receiver");
    if (r == "genie")
        return Receiver::genie;
    if (r == "full")
        return Receiver::full;
    throw ConfigError(fmt::format("'receiver': expected genie or full, got '{}'", r));
}

/// Shared state for one experiment run.
struct Sweep {
    std::string experiment;
    std::uint64_t master = 0;
    std::size_t trials = 0;
    std::size_t workers = 1;
    std::vector<ResultRow> rows;

    std::uint64_t point_seed(const ParamMap& point) const
    {
        return text_hash(experiment + "|" + format_params(point));
    }

    void add(const ParamMap& params, const std::string& metric, double value, double se, std::size_t n)
    {
        rows.push_back({experiment, params, metric, value, se, n});
    }

    /// Probability metric from a 0/1 tally column.
    void add_rate(const ParamMap& params, const std::string& metric, const Tally& t, std::size_t i)
    {
        add(params, metric, t.mean(i), t.binomial_stderr(i), t.trials);
    }

    /// Average of a per-trial real value.
    void add_mean(const ParamMap& params, const std::string& metric, const Tally& t, std::size_t i)
    {
        add(params, metric, t.mean(i), t.mean_stderr(i), t.trials);
    }

    void add_exact(const ParamMap& params, const std::string& metric, double value)
    {
        add(params, metric, value, 0.0, 0);
    }
};

ParamMap with(ParamMap p, const std::string& k, const std::string& v)
{
    p[k] = v;
    return p;
}

pla::AuthDecision authenticate(Receiver rx, const pla::ProtocolParams& p, std::span<const double> received,
                               std::span<const std::uint8_t> s_o, double sigma2, double p_i)
{
    if (rx == Receiver::genie)
        return pla::rx_authenticate_with_message(p, received, s_o, sigma2, p_i);
    return pla::rx_authenticate(p, received, sigma2, p_i);
}

std::vector<double> transmit(const channel::ChannelConfig& cfg, std::span<const std::uint8_t> bits, RngStream& rng)
{
    return channel::apply_channel(cfg, channel::modulate_bpsk(bits), rng).received;
}

// ---------------------------------------------------------------------------

void run_detect(const Config& c, Sweep& s)
{
    const auto n = c.get_size("N");
    const auto k_o = c.get_size("k_o");
    const auto n_e = c.get_size("Ne");
    const auto lists = sorted_sizes(c, "L");
    const auto rx = config_receiver(c);
    const auto key = config_key(c);
    const auto outer_list = c.get_size("outer_list");
    const auto fading = channel::fading_from_string(c.get_string("fading"));

    for (const auto k_e : sorted_sizes(c, "Ke")) {
        for (const double snr : sorted_grid(c, "snr_db")) {
            const double sigma2 = sigma2_from_snr_db(snr);
            const auto base = pla::make_params(n, k_o, n_e, k_e, key, sigma2, sigma2, 1, outer_list);
            std::vector<pla::ProtocolParams> per_list(lists.size(), base);
            for (std::size_t i = 0; i < lists.size(); ++i) {
                per_list[i].list_len_inner = lists[i];
                per_list[i].validate();
            }
            channel::ChannelConfig cfg;
            cfg.snr_db = snr;
            cfg.fading = fading;
            cfg.validate();

            const ParamMap point{{"Ne", num(n_e)}, {"Ke", num(k_e)}, {"snr_db", num(snr)}};
            const auto ps = s.point_seed(point);
            const auto tally = run_trials(s.trials, 3 * lists.size(), s.workers, [&](std::size_t t, std::span<double> out) {
                RngStream msg_rng(s.master, ps, t, Role::message);
                RngStream ch_rng(s.master, ps, t, Role::channel);
                RngStream untagged_rng(s.master, ps, t, Role::untagged);
                RngStream key_rng(s.master, ps, t, Role::spoof_key);
                RngStream spoof_rng(s.master, ps, t, Role::misc);
                const auto msg = msg_rng.bits(k_o);
                const auto frame = pla::tx_build_frame(base, msg);
                const auto y1 = transmit(cfg, frame.tagged, ch_rng);
                const auto y0 = transmit(cfg, frame.s_o, untagged_rng);
                const auto y2 = transmit(cfg, adversary::spoof_frame(base, key_rng.key(), msg), spoof_rng);
                for (std::size_t i = 0; i < lists.size(); ++i) {
                    const auto& p = per_list[i];
                    out[3 * i] = authenticate(rx, p, y1, frame.s_o, sigma2, 0.0).accept;
                    out[3 * i + 1] = authenticate(rx, p, y0, frame.s_o, sigma2, 0.0).accept;
                    out[3 * i + 2] = authenticate(rx, p, y2, frame.s_o, sigma2, 0.0).accept;
                }
            });
            for (std::size_t i = 0; i < lists.size(); ++i) {
                const auto row = with(point, "L", num(lists[i]));
                s.add_rate(row, "pd", tally, 3 * i);
                s.add_rate(row, "fa_untagged", tally, 3 * i + 1);
                s.add_rate(row, "fa_spoof", tally, 3 * i + 2);
            }
            s.add_exact(point, "pd_union_bound", bounds::union_bound_pd(base.inner_spec, sigma2).value);
        }
    }
}

/// Proposed and baseline detection over one (Ne, channel) point; shared by
/// the tag-length and interference sweeps. Columns: pd_proposed,
/// pd_baseline, fa_proposed, fa_baseline.
Tally proposed_vs_baseline(const Sweep& s, std::uint64_t ps, const pla::ProtocolParams& p,
                           const channel::ChannelConfig& cfg, Receiver rx, double p_fa)
{
    const double sigma2 = cfg.noise_var();
    const double p_i = cfg.interference_power();
    return run_trials(s.trials, 4, s.workers, [&](std::size_t t, std::span<double> out) {
        RngStream msg_rng(s.master, ps, t, Role::message);
        const auto msg = msg_rng.bits(p.k_o);
        const auto frame = pla::tx_build_frame(p, msg);
        const auto base = pla::baseline_uncoded_tx(p, msg);
        // Both schemes see the same channel realization.
        RngStream ch_rng(s.master, ps, t, Role::channel);
        const auto draw = channel::apply_channel(cfg, channel::modulate_bpsk(frame.tagged), ch_rng);
        const auto& y_prop = draw.received;
        auto y_base = channel::modulate_bpsk(base.tagged);
        for (std::size_t i = 0; i < y_base.size(); ++i)
            y_base[i] += draw.interference[i] + draw.noise[i];
        RngStream un_rng(s.master, ps, t, Role::untagged);
        const auto y0 = transmit(cfg, frame.s_o, un_rng);

        out[0] = authenticate(rx, p, y_prop, frame.s_o, sigma2, p_i).accept;
        out[2] = authenticate(rx, p, y0, frame.s_o, sigma2, p_i).accept;
        if (rx == Receiver::genie) {
            out[1] = pla::baseline_uncoded_rx_with_message(p, y_base, base.s_o, p_fa).accept;
            out[3] = pla::baseline_uncoded_rx_with_message(p, y0, frame.s_o, p_fa).accept;
        } else {
            out[1] = pla::baseline_uncoded_rx(p, y_base, sigma2, p_i, p_fa).accept;
            out[3] = pla::baseline_uncoded_rx(p, y0, sigma2, p_i, p_fa).accept;
        }
    });
}

void add_comparison_rows(Sweep& s, const ParamMap& point, const Tally& t)
{
    s.add_rate(point, "pd_proposed", t, 0);
    s.add_rate(point, "pd_baseline", t, 1);
    s.add_rate(point, "fa_proposed", t, 2);
    s.add_rate(point, "fa_baseline", t, 3);
}

void run_taglen(const Config& c, Sweep& s)
{
    const auto n = c.get_size("N");
    const auto k_o = c.get_size("k_o");
    const auto k_e = c.get_size("Ke");
    const auto list = c.get_size("L");
    const auto rx = config_receiver(c);
    const auto key = config_key(c);
    const auto outer_list = c.get_size("outer_list");
    const auto p_fa = c.get_double("p_fa");
    const auto fading = channel::fading_from_string(c.get_string("fading"));

    for (const auto n_e : sorted_sizes(c, "Ne")) {
        for (const double snr : sorted_grid(c, "snr_db")) {
            const double sigma2 = sigma2_from_snr_db(snr);
            const auto p = pla::make_params(n, k_o, n_e, k_e, key, sigma2, sigma2, list, outer_list);
            channel::ChannelConfig cfg;
            cfg.snr_db = snr;
            cfg.fading = fading;
            cfg.validate();
            const ParamMap point{{"Ne", num(n_e)}, {"Ke", num(k_e)}, {"snr_db", num(snr)}};
            add_comparison_rows(s, point, proposed_vs_baseline(s, s.point_seed(point), p, cfg, rx, p_fa));
        }
    }
}

void run_interference(const Config& c, Sweep& s)
{
    const auto n = c.get_size("N");
    const auto k_o = c.get_size("k_o");
    const auto k_e = c.get_size("Ke");
    const auto list = c.get_size("L");
    const auto users = c.get_size("K");
    const auto snr = c.get_double("snr_db");
    const auto rx = config_receiver(c);
    const auto key = config_key(c);
    const auto outer_list = c.get_size("outer_list");
    const auto p_fa = c.get_double("p_fa");
    const auto target = c.get_double("target_pd");
    const auto fading = channel::fading_from_string(c.get_string("fading"));
    const auto sinr_grid = sorted_grid(c, "sinr_db");
    if (users == 0)
        throw ConfigError("'K': the interference sweep needs at least one interfering user");

    for (const auto n_e : sorted_sizes(c, "Ne")) {
        std::vector<double> pd_prop;
        std::vector<double> pd_base;
        for (const double sinr : sinr_grid) {
            channel::ChannelConfig cfg;
            cfg.snr_db = snr;
            cfg.sinr_db = sinr;
            cfg.k_users = users;
            cfg.fading = fading;
            cfg.validate();
            const double sigma2 = cfg.noise_var();
            const double eff = sigma2 + cfg.interference_power();
            const auto p = pla::make_params(n, k_o, n_e, k_e, key, eff, eff, list, outer_list);
            const ParamMap point{{"Ne", num(n_e)}, {"Ke", num(k_e)}, {"snr_db", num(snr)}, {"sinr_db", num(sinr)}};
            const auto t = proposed_vs_baseline(s, s.point_seed(point), p, cfg, rx, p_fa);
            add_comparison_rows(s, point, t);
            pd_prop.push_back(t.mean(0));
            pd_base.push_back(t.mean(1));
        }
        const ParamMap summary{{"Ne", num(n_e)}, {"Ke", num(k_e)}, {"snr_db", num(snr)}, {"target_pd", num(target)}};
        const double need_prop = crossing_point(sinr_grid, pd_prop, target);
        const double need_base = crossing_point(sinr_grid, pd_base, target);
        s.add(summary, "sinr_required_proposed", need_prop, 0.0, s.trials);
        s.add(summary, "sinr_required_baseline", need_base, 0.0, s.trials);
        s.add(summary, "sinr_gap_db", need_base - need_prop, 0.0, s.trials);
    }
}

void run_eaves_position(const Config& c, Sweep& s)
{
    const auto n = c.get_size("N");
    const auto k_e = c.get_size("Ke");
    const auto key = config_key(c);

    for (const auto n_e : sorted_sizes(c, "Ne")) {
        for (const double snr : sorted_grid(c, "snr_db")) {
            const double sigma2 = sigma2_from_snr_db(snr);
            const ParamMap point{{"N", num(n)}, {"Ne", num(n_e)}, {"snr_db", num(snr)}};
            const auto m = adversary::analytic_position_errors(std::sqrt(sigma2), n, n_e);
            s.add_exact(point, "p_err_analytic", m.p_err);
            s.add_exact(point, "p_err_asy_analytic", m.p_err_asy);
            s.add_exact(point, "p_pcc_analytic", m.p_pcc);
            s.add_exact(point, "log10_p_pcc_analytic", m.log10_p_pcc);
            s.add_exact(point, "p_fa_analytic", m.p_fa);
            s.add_exact(point, "p_md_analytic", 0.5 * (m.p_md1 + m.p_md2));

            const auto p = pla::make_params(n, n / 2, n_e, k_e, key, 1.0, 1.0);
            channel::ChannelConfig cfg;
            cfg.eve_snr_db = snr;
            const auto ps = s.point_seed(point);
            const auto t = run_trials(s.trials, 4, s.workers, [&](std::size_t trial, std::span<double> out) {
                RngStream msg_rng(s.master, ps, trial, Role::message);
                RngStream eve_rng(s.master, ps, trial, Role::eve);
                const auto frame = pla::tx_build_frame(p, msg_rng.bits(p.k_o));
                const auto y = channel::eve_observe(cfg, channel::modulate_bpsk(frame.tagged), eve_rng);
                auto cls = adversary::eve_classify_positions(y, frame.s_o);
                adversary::score_classification(cls, frame.idx);
                out[0] = static_cast<double>(cls.errors()) / static_cast<double>(n);
                out[1] = cls.errors() == 0;
                out[2] = n_e < n ? static_cast<double>(cls.false_alarms) / static_cast<double>(n - n_e) : 0.0;
                out[3] = n_e > 0 ? static_cast<double>(cls.missed) / static_cast<double>(n_e) : 0.0;
            });
            s.add_mean(point, "p_err", t, 0);
            s.add_rate(point, "p_pcc", t, 1);
            s.add_mean(point, "p_fa", t, 2);
            s.add_mean(point, "p_md", t, 3);
        }
    }
}

void run_eaves_tag(const Config& c, Sweep& s)
{
    const auto ratio = c.get_double("Ke_ratio");
    const auto design = c.get_double("design_sigma2");
    if (!(ratio > 0.0 && ratio < 1.0))
        throw ConfigError("'Ke_ratio' must lie strictly between 0 and 1");

    for (const auto n_e : sorted_sizes(c, "Ne")) {
        const auto k_e = std::clamp<std::size_t>(
            static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n_e))), 1, n_e > 1 ? n_e - 1 : 1);
        const auto spec = polar::construct_ga(n_e, k_e, design);
        const adversary::TagEstimator est(spec);
        const polar::GeneratorView gen(spec);
        for (const double snr : sorted_grid(c, "snr_db")) {
            const double sigma2 = sigma2_from_snr_db(snr);
            const double sigma = std::sqrt(sigma2);
            const ParamMap point{{"Ne", num(n_e)}, {"Ke", num(k_e)}, {"snr_db", num(snr)}};
            const auto r = adversary::noise_power_report(gen, sigma);
            s.add_exact(point, "power_max", r.max_power);
            s.add_exact(point, "power_avg", r.avg_power);
            s.add_exact(point, "power_raw", r.raw_power);

            const auto ps = s.point_seed(point);
            const auto t = run_trials(s.trials, 1, s.workers, [&](std::size_t trial, std::span<double> out) {
                RngStream msg_rng(s.master, ps, trial, Role::message);
                RngStream eve_rng(s.master, ps, trial, Role::eve);
                const auto anchor = msg_rng.bits(spec.k);
                const auto tag = msg_rng.bits(spec.n_frozen());
                const auto clean = channel::modulate_bpsk(polar::encode(spec, polar::assemble_input(spec, anchor, tag)));
                std::vector<double> y(clean.size());
                for (std::size_t j = 0; j < y.size(); ++j)
                    y[j] = clean[j] + sigma * eve_rng.normal();
                const Eigen::VectorXd w =
                    est.estimate(y, anchor, sigma2).t_hat_soft - est.estimate(clean, anchor, sigma2).t_hat_soft;
                out[0] = w.squaredNorm() / static_cast<double>(w.size());
            });
            s.add_mean(point, "power_avg_mc", t, 0);
        }
    }
}

void run_spoof_sd(const Config& c, Sweep& s)
{
    for (const auto n : sorted_sizes(c, "N")) {
        for (const auto n_e : sorted_sizes(c, "Ne")) {
            if (n_e == 0 || n_e > n)
                continue;
            const ParamMap point{{"N", num(n)}, {"Ne", num(n_e)}};
            const auto ps = s.point_seed(point);
            const auto t = run_trials(s.trials, 2, s.workers, [&](std::size_t trial, std::span<double> out) {
                RngStream rng(s.master, ps, trial, Role::spoof_key);
                const auto overlap = adversary::symmetric_difference_trial(n, n_e, rng);
                out[0] = adversary::normalized_symmetric_difference(overlap, n_e);
                out[1] = static_cast<double>(overlap);
            });
            s.add_mean(point, "p_sd", t, 0);
            s.add_mean(point, "mean_overlap", t, 1);
            s.add_exact(point, "p_sd_analytic", 1.0 - static_cast<double>(n_e) / static_cast<double>(n));
        }
    }
}

void run_ber_bound(const Config& c, Sweep& s)
{
    const auto rate = c.get_double("rate");
    const auto k_e = c.get_size("Ke");
    const auto key = config_key(c);
    if (!(rate > 0.0 && rate <= 1.0))
        throw ConfigError("'rate' must lie in (0, 1]");

    for (const auto n : sorted_sizes(c, "N")) {
        const auto k_o = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(rate * static_cast<double>(n))));
        for (const auto n_e : sorted_sizes(c, "Ne")) {
            for (const double snr : sorted_grid(c, "snr_db")) {
                const double sigma2 = sigma2_from_snr_db(snr);
                const ParamMap point{{"N", num(n)}, {"k_o", num(k_o)}, {"Ne", num(n_e)}, {"snr_db", num(snr)}};
                const auto b = bounds::ber_upper_bound(n, k_o, n_e, sigma2);
                s.add_exact(point, "ber_bound", b.value);
                s.add_exact(point, "ber_bound_untagged", b.tag_free_value);

                std::optional<pla::ProtocolParams> p;
                polar::PolarSpec outer;
                if (n_e > 0) {
                    p = pla::make_params(n, k_o, n_e, k_e, key, sigma2, sigma2);
                    outer = p->outer_spec;
                } else {
                    outer = polar::construct_bhattacharyya(n, k_o, std::exp(-1.0 / (2.0 * sigma2)));
                }
                channel::ChannelConfig cfg;
                cfg.snr_db = snr;
                const BitVec zeros(outer.n_frozen(), 0);
                const auto ps = s.point_seed(point);
                const auto t = run_trials(s.trials, 2, s.workers, [&](std::size_t trial, std::span<double> out) {
                    RngStream msg_rng(s.master, ps, trial, Role::message);
                    RngStream ch_rng(s.master, ps, trial, Role::channel);
                    const auto msg = msg_rng.bits(k_o);
                    const BitVec sent =
                        p ? pla::tx_build_frame(*p, msg).tagged : polar::encode(outer, polar::assemble_input(outer, msg, zeros));
                    const auto y = transmit(cfg, sent, ch_rng);
                    std::vector<double> llr(y.size());
                    for (std::size_t j = 0; j < y.size(); ++j)
                        llr[j] = pla::llr_effective(y[j], sigma2, 0.0);
                    const auto dec = polar::decode_sc(outer, polar::SoftObservation(std::move(llr)), zeros);
                    const auto errors = hamming_distance(dec.info_bits, msg);
                    out[0] = static_cast<double>(errors) / static_cast<double>(k_o);
                    out[1] = errors > 0;
                });
                s.add_mean(point, "ber_mc", t, 0);
                s.add_rate(point, "bler_mc", t, 1);
            }
        }
    }
}

} // namespace

const std::vector<ExperimentInfo>& catalog()
{
    static const std::vector<ExperimentInfo> entries = build_catalog();
    return entries;
}

const ExperimentInfo& find_experiment(const std::string& id)
{
    for (const auto& e : catalog())
        if (e.id == id)
            return e;
    throw ConfigError(fmt::format("unknown experiment '{}'", id));
}

Config effective_config(const Config& user)
{
    if (!user.has("experiment"))
        throw ConfigError("configuration has no 'experiment' key");
    const auto& info = find_experiment(user.get_string("experiment"));
    Config out;
    out.set("experiment", info.id);
    for (const auto& [k, v] : info.defaults)
        out.set(k, v);
    for (const auto& [k, v] : user.entries()) {
        if (!out.has(k))
            throw ConfigError(fmt::format("unknown key '{}' for experiment '{}'", k, info.id));
        out.set(k, v);
    }
    if (out.get_size("trials") == 0)
        throw ConfigError("'trials' must be at least 1");
    return out;
}

double crossing_point(const std::vector<double>& x, const std::vector<double>& y, double target)
{
    if (x.size() != y.size())
        throw Error("crossing_point: length mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (y[i] < target)
            continue;
        if (i == 0)
            return x[0];
        const double f = (target - y[i - 1]) / (y[i] - y[i - 1]);
        return x[i - 1] + f * (x[i] - x[i - 1]);
    }
    return std::numeric_limits<double>::quiet_NaN();
}

SweepResult run_experiment(const Config& cfg, std::size_t workers)
{
    const auto start = std::chrono::steady_clock::now();
    const Config eff = effective_config(cfg);

    Sweep s;
    s.experiment = eff.get_string("experiment");
    s.master = eff.get_u64("seed");
    s.trials = eff.get_size("trials");
    s.workers = resolve_workers(workers);

    try {
        if (s.experiment == "detect-sweep")
            run_detect(eff, s);
        else if (s.experiment == "taglen-sweep")
            run_taglen(eff, s);
        else if (s.experiment == "interference-sweep")
            run_interference(eff, s);
        else if (s.experiment == "eaves-position")
            run_eaves_position(eff, s);
        else if (s.experiment == "eaves-tag")
            run_eaves_tag(eff, s);
        else if (s.experiment == "spoof-sd")
            run_spoof_sd(eff, s);
        else if (s.experiment == "ber-bound")
            run_ber_bound(eff, s);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        // Library preconditions only fail on parameter combinations from the config.
        throw ConfigError(fmt::format("{}: invalid parameters: {}", s.experiment, e.what()));
    }

    SweepResult r;
    r.rows = std::move(s.rows);
    r.manifest.experiment = s.experiment;
    r.manifest.config = eff;
    r.manifest.master_seed = s.master;
    r.manifest.code_version = code_version;
    r.manifest.workers = s.workers;
    r.manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

} // namespace ftag::harness
