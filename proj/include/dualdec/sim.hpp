/**************************************************************************
 * sim.hpp
 *
 * Copyright 2026 the dualdec authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 **************************************************************************/

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dualdec/bcjr.hpp"
#include "dualdec/channel.hpp"
#include "dualdec/convcode.hpp"
#include "dualdec/dual.hpp"
#include "dualdec/errors.hpp"

namespace dualdec {

/// The five stock GF(4) codes used throughout the BER experiments.
inline const std::vector<std::string>& builtin_code_descriptors() {
    static const std::vector<std::string> codes = {
        "gf4:(1+x)",
        "gf4:(1+3x+2x^2)",
        "gf4:(1+x+2x^2)",
        "gf4:(1+x)/(1+2x)",
        "gf4:(1+3x+2x^2)/(1+x+2x^2)",
    };
    return codes;
}

enum class DecoderKind { bcjr, dual_combined, dual_fft, dual_fb_product, dual_forward_only };

inline std::string decoder_name(DecoderKind k) {
    switch (k) {
        case DecoderKind::bcjr: return "bcjr";
        case DecoderKind::dual_combined: return "dual-combined";
        case DecoderKind::dual_fft: return "dual-fft";
        case DecoderKind::dual_fb_product: return "dual-fb-product";
        case DecoderKind::dual_forward_only: return "dual-forward-only";
    }
    return "?";
}

inline DecoderKind parse_decoder(const std::string& name) {
    for (DecoderKind k : {DecoderKind::bcjr, DecoderKind::dual_combined, DecoderKind::dual_fft,
                          DecoderKind::dual_fb_product, DecoderKind::dual_forward_only})
        if (decoder_name(k) == name) return k;
    throw ParseError("unknown decoder '" + name + "'");
}

struct SimConfig {
    std::string code;
    DecoderKind decoder = DecoderKind::dual_combined;
    int frame_length = 256;
    std::vector<double> ebn0_db;
    std::uint64_t max_frames = 20000;
    std::uint64_t target_errors = 200;
    std::uint64_t seed = 0;
    TransformMode mode = TransformMode::direct;
    int threads = 0;  // 0 = hardware concurrency
};

struct BerRecord {
    std::string code;
    std::string decoder;
    double ebn0_db = 0.0;
    std::uint64_t frames = 0;
    std::uint64_t info_bits = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t symbol_errors = 0;
    double ber = 0.0;
    double ser = 0.0;
    double seconds = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t decode_failures = 0;  // diagnostics only, not serialized
};

namespace detail {

inline int int_log2(int q) {
    int b = 0;
    while ((1 << b) < q) ++b;
    return b;
}

inline int bit_diff(Symbol a, Symbol b) { return __builtin_popcount(static_cast<unsigned>(a ^ b)); }

/// Uniform symbol draw that does not depend on any library's
/// distribution internals.
inline Symbol draw_symbol(std::mt19937_64& rng, int q) {
    return static_cast<Symbol>((rng() >> 11) % static_cast<std::uint64_t>(q));
}

struct FrameCounts {
    std::uint64_t bit_errors = 0;
    std::uint64_t symbol_errors = 0;
    bool failed = false;
};

}  // namespace detail

/// One random frame pushed through the full pipeline; BPSK for
/// power-of-two field sizes, the PAM test mapping otherwise.
struct SimFrame {
    std::vector<Symbol> info;
    TerminatedFrame frame;
    std::vector<Pmf> pmfs;
};

inline SimFrame make_noisy_frame(const CodeSpec& code, const DualSpec& dual, int L, double ebn0_db,
                                 std::mt19937_64& rng) {
    const Field& f = code.field;
    SimFrame sf;
    sf.info.resize(static_cast<std::size_t>(L));
    for (auto& s : sf.info) s = detail::draw_symbol(rng, f.q());
    sf.frame = encode_terminated(code, dual, sf.info);

    const bool pow2 = (f.q() & (f.q() - 1)) == 0;
    const double rate_eff = static_cast<double>(L) / (L + dual.regs);
    if (pow2) {
        ChannelConfig ch = ChannelConfig::bpsk(f, ebn0_db, L, dual.regs);
        auto samples = modulate_bpsk(f, sf.frame.code_syms, ch.bits_per_symbol);
        add_noise(samples, ch.sigma, rng);
        sf.pmfs = demap_bpsk(f, samples, ch.bits_per_symbol, ch.sigma);
    } else {
        double snr = std::pow(10.0, ebn0_db / 10.0);
        double sigma = std::isinf(ebn0_db) ? 0.0 : std::sqrt(1.0 / (2.0 * rate_eff * snr));
        auto samples = modulate_pam(f, sf.frame.code_syms);
        add_noise(samples, sigma, rng);
        sf.pmfs = demap_pam(f, samples, sigma);
    }
    return sf;
}

/// Dispatches one frame to the configured decoder.
inline std::vector<Pmf> decode_frame(DecoderKind kind, const DualSpec& dual, const Trellis& trellis,
                                     const std::vector<Pmf>& pmfs, TransformMode mode) {
    switch (kind) {
        case DecoderKind::bcjr: return bcjr_posteriors(trellis, pmfs);
        case DecoderKind::dual_combined: return combine_decode(dual, pmfs, {TransformMode::direct, false});
        case DecoderKind::dual_fft: return combine_decode(dual, pmfs, {TransformMode::fast, false});
        case DecoderKind::dual_fb_product: return fb_output_product(dual, pmfs, {mode, false});
        case DecoderKind::dual_forward_only: return forward_decode(dual, pmfs, {mode, false}).info;
    }
    throw Error("unreachable decoder kind");
}

/// Monte Carlo BER at one Eb/N0 point.  Frames are processed in fixed
/// batches; within a batch, workers pick frame indices from a shared
/// counter and error counts are integer sums, so the result depends
/// only on (config, seed), not on the worker count.  The stop rule is
/// evaluated at batch boundaries.
inline BerRecord run_point(const SimConfig& cfg, double ebn0_db) {
    const auto t0 = std::chrono::steady_clock::now();
    CodeSpec code = CodeSpec::parse(cfg.code);
    const Field& f = code.field;
    if ((f.q() & (f.q() - 1)) != 0)
        throw NonBinaryExtensionError("BER simulation requires a power-of-two field size");
    DualSpec dual = dual_taps(code);
    Trellis trellis = build_trellis(expanded_code(dual));
    const int L = cfg.frame_length;
    const int bits = detail::int_log2(f.q());

    const std::uint64_t batch = 256;
    int n_threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;

    BerRecord rec;
    rec.code = cfg.code;
    rec.decoder = decoder_name(cfg.decoder);
    rec.ebn0_db = ebn0_db;
    rec.seed = cfg.seed;

    std::uint64_t next_frame = 0;
    while (rec.frames < cfg.max_frames && rec.bit_errors < cfg.target_errors) {
        const std::uint64_t begin = next_frame;
        const std::uint64_t end = std::min<std::uint64_t>(begin + batch, cfg.max_frames);
        next_frame = end;

        std::atomic<std::uint64_t> cursor{begin};
        std::mutex merge_mutex;
        std::uint64_t batch_bits = 0, batch_syms = 0, batch_frames = 0, batch_failures = 0;

        auto worker = [&]() {
            std::uint64_t bit_err = 0, sym_err = 0, frames = 0, failures = 0;
            for (;;) {
                std::uint64_t idx = cursor.fetch_add(1);
                if (idx >= end) break;
                auto rng = frame_rng(cfg.seed, idx);
                SimFrame sf = make_noisy_frame(code, dual, L, ebn0_db, rng);
                detail::FrameCounts counts;
                try {
                    auto post = decode_frame(cfg.decoder, dual, trellis, sf.pmfs, cfg.mode);
                    for (int i = 0; i < L; ++i) {
                        Symbol dec = post[static_cast<std::size_t>(i)].argmax();
                        if (dec != sf.info[static_cast<std::size_t>(i)]) {
                            ++counts.symbol_errors;
                            counts.bit_errors += static_cast<std::uint64_t>(
                                detail::bit_diff(dec, sf.info[static_cast<std::size_t>(i)]));
                        }
                    }
                } catch (const Error&) {
                    counts.failed = true;
                }
                if (counts.failed) {
                    ++failures;
                } else {
                    ++frames;
                    bit_err += counts.bit_errors;
                    sym_err += counts.symbol_errors;
                }
            }
            std::lock_guard<std::mutex> lock(merge_mutex);
            batch_bits += bit_err;
            batch_syms += sym_err;
            batch_frames += frames;
            batch_failures += failures;
        };

        if (n_threads == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(static_cast<std::size_t>(n_threads));
            for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }

        rec.frames += batch_frames;
        rec.bit_errors += batch_bits;
        rec.symbol_errors += batch_syms;
        rec.decode_failures += batch_failures;
        if (next_frame >= cfg.max_frames) break;
    }

    rec.info_bits = rec.frames * static_cast<std::uint64_t>(L) * static_cast<std::uint64_t>(bits);
    rec.ber = rec.info_bits ? static_cast<double>(rec.bit_errors) / static_cast<double>(rec.info_bits) : 0.0;
    rec.ser = rec.frames ? static_cast<double>(rec.symbol_errors) / (static_cast<double>(rec.frames) * L) : 0.0;
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

inline std::vector<BerRecord> run_curve(const SimConfig& cfg) {
    std::vector<BerRecord> records;
    records.reserve(cfg.ebn0_db.size());
    for (double e : cfg.ebn0_db) records.push_back(run_point(cfg, e));
    return records;
}

inline void sort_records(std::vector<BerRecord>& records) {
    std::sort(records.begin(), records.end(), [](const BerRecord& a, const BerRecord& b) {
        if (a.code != b.code) return a.code < b.code;
        if (a.decoder != b.decoder) return a.decoder < b.decoder;
        return a.ebn0_db < b.ebn0_db;
    });
}

inline std::string ber_csv_header() {
    return "code,decoder,ebn0_db,frames,info_bits,bit_errors,symbol_errors,ber,ser,seconds,seed";
}

inline std::string to_csv_line(const BerRecord& r) {
    std::ostringstream os;
    os << r.code << ',' << r.decoder << ',' << r.ebn0_db << ',' << r.frames << ',' << r.info_bits << ','
       << r.bit_errors << ',' << r.symbol_errors << ',' << std::setprecision(8) << std::scientific << r.ber
       << ',' << r.ser << ',' << std::fixed << std::setprecision(3) << r.seconds << ',' << r.seed;
    return os.str();
}

/// Appends records (sorted) to a CSV file, writing the header only when
/// the file is new or empty.
inline void write_ber_csv(std::vector<BerRecord> records, const std::string& path) {
    sort_records(records);
    bool need_header = true;
    {
        std::ifstream probe(path);
        if (probe.good() && probe.peek() != std::ifstream::traits_type::eof()) need_header = false;
    }
    std::ofstream out(path, std::ios::app);
    if (!out) throw Error("cannot open " + path + " for writing");
    if (need_header) out << ber_csv_header() << '\n';
    for (const auto& r : records) out << to_csv_line(r) << '\n';
}

/// Self-contained gnuplot script with inline data blocks, one series
/// per (code, decoder).
inline void write_gnuplot(std::vector<BerRecord> records, const std::string& csv_path,
                          const std::string& gp_path) {
    sort_records(records);
    std::ofstream out(gp_path);
    if (!out) throw Error("cannot open " + gp_path + " for writing");
    out << "# BER curves; source data: " << csv_path << "\n";
    out << "set logscale y\nset grid\nset xlabel 'Eb/N0 (dB)'\nset ylabel 'BER'\nset key bottom left\n";

    struct Series {
        std::string title;
        std::vector<std::pair<double, double>> pts;
    };
    std::vector<Series> series;
    for (const auto& r : records) {
        std::string title = r.code + " " + r.decoder;
        if (series.empty() || series.back().title != title) series.push_back({title, {}});
        series.back().pts.emplace_back(r.ebn0_db, r.ber);
    }
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << "$d" << i << " << EOD\n";
        for (auto [x, y] : series[i].pts) out << x << ' ' << std::setprecision(8) << std::scientific << y
                                              << std::defaultfloat << '\n';
        out << "EOD\n";
    }
    out << "plot ";
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (i) out << ", \\\n     ";
        out << "$d" << i << " using 1:2 with linespoints title '" << series[i].title << "'";
    }
    out << "\npause -1 'press enter'\n";
}

/// Max absolute entrywise difference between two pmf sequences.
inline double max_pmf_deviation(const std::vector<Pmf>& a, const std::vector<Pmf>& b) {
    double dev = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k)
        for (int j = 0; j < a[k].size(); ++j)
            dev = std::max(dev, std::abs(a[k][static_cast<Symbol>(j)] - b[k][static_cast<Symbol>(j)]));
    return dev;
}

/// Equivalence and structural checks of the shift-register decoders
/// against the trellis reference, per code: forward marginal, backward
/// marginal, combined posterior (plus hard decisions), tail
/// termination of both machines, and forward/backward state agreement.
struct VerifyReport {
    struct Entry {
        std::string code;
        std::uint64_t frames = 0;
        double forward_dev = 0.0;
        double backward_dev = 0.0;
        double combined_dev = 0.0;
        bool hard_decisions_match = true;
        bool termination_ok = true;
        bool state_agreement_ok = true;
    };
    std::vector<Entry> entries;
    double tolerance = 1e-9;

    bool all_pass() const {
        for (const auto& e : entries) {
            if (e.forward_dev > tolerance || e.backward_dev > tolerance || e.combined_dev > tolerance)
                return false;
            if (!e.hard_decisions_match || !e.termination_ok || !e.state_agreement_ok) return false;
        }
        return !entries.empty();
    }

    std::string to_string() const {
        std::ostringstream os;
        os << std::left << std::setw(36) << "code" << std::right << std::setw(8) << "frames" << std::setw(13)
           << "fwd dev" << std::setw(13) << "bwd dev" << std::setw(13) << "comb dev" << std::setw(7) << "hard"
           << std::setw(7) << "tail" << std::setw(7) << "state" << '\n';
        for (const auto& e : entries) {
            os << std::left << std::setw(36) << e.code << std::right << std::setw(8) << e.frames
               << std::setw(13) << std::scientific << std::setprecision(2) << e.forward_dev << std::setw(13)
               << e.backward_dev << std::setw(13) << e.combined_dev << std::defaultfloat << std::setw(7)
               << (e.hard_decisions_match ? "ok" : "FAIL") << std::setw(7) << (e.termination_ok ? "ok" : "FAIL")
               << std::setw(7) << (e.state_agreement_ok ? "ok" : "FAIL") << '\n';
        }
        os << (all_pass() ? "verification PASSED" : "verification FAILED") << " (tolerance "
           << std::scientific << std::setprecision(0) << tolerance << ")\n";
        return os.str();
    }
};

inline VerifyReport verify_theorems(const std::vector<std::string>& codes, std::uint64_t frames,
                                    std::uint64_t seed, int L = 32, double ebn0_db = 2.0) {
    VerifyReport report;
    for (const auto& desc : codes) {
        CodeSpec code = CodeSpec::parse(desc);
        DualSpec dual = dual_taps(code);
        Trellis trellis = build_trellis(expanded_code(dual));
        VerifyReport::Entry entry;
        entry.code = desc;
        entry.frames = frames;

        for (std::uint64_t fidx = 0; fidx < frames; ++fidx) {
            auto rng = frame_rng(seed, fidx);
            SimFrame sf = make_noisy_frame(code, dual, L, ebn0_db, rng);
            auto alphas = bcjr_forward(trellis, sf.pmfs);
            auto betas = bcjr_backward(trellis, sf.pmfs);

            auto fwd = forward_decode(dual, sf.pmfs);
            entry.forward_dev = std::max(
                entry.forward_dev, max_pmf_deviation(fwd.info, bcjr_forward_marginal(trellis, sf.pmfs, alphas)));

            auto bwd = backward_decode(dual, sf.pmfs);
            entry.backward_dev = std::max(
                entry.backward_dev, max_pmf_deviation(bwd.info, bcjr_backward_marginal(trellis, sf.pmfs, betas)));

            auto comb = combine_decode(dual, sf.pmfs);
            auto post = bcjr_posteriors(trellis, sf.pmfs, alphas, betas);
            entry.combined_dev = std::max(entry.combined_dev, max_pmf_deviation(comb, post));
            for (std::size_t k = 0; k < comb.size(); ++k)
                if (comb[k].argmax() != post[k].argmax()) entry.hard_decisions_match = false;

            // Tail termination of both machines, checked by replay.
            {
                Encoder enc(code);
                for (Symbol b : sf.info) enc.step(b);
                for (Symbol b : sf.frame.info_tail) enc.step(b);
                if (!enc.state().is_zero()) entry.termination_ok = false;
                DualChainEncoder chain(dual);
                for (Symbol u : sf.frame.code_syms) chain.step(u);
                if (!chain.at_zero_state()) entry.termination_ok = false;
            }

            // Forward chain machine vs its reverse-labeled twin: same
            // state at every time, registers read in reverse order.
            {
                DualChainEncoder fchain(dual);
                std::vector<std::vector<Symbol>> fstates;
                fstates.push_back(fchain.regs());
                for (Symbol u : sf.frame.code_syms) {
                    fchain.step(u);
                    fstates.push_back(fchain.regs());
                }
                DualChainBackwardEncoder bchain(dual);
                std::vector<std::vector<Symbol>> bstates;
                bstates.push_back(bchain.regs());
                for (auto it = sf.frame.code_syms.rbegin(); it != sf.frame.code_syms.rend(); ++it) {
                    bchain.step(*it);
                    bstates.push_back(bchain.regs());
                }
                const std::size_t T = sf.frame.code_syms.size();
                for (std::size_t k = 0; k <= T; ++k) {
                    std::vector<Symbol> rev(fstates[k].rbegin(), fstates[k].rend());
                    if (rev != bstates[T - k]) entry.state_agreement_ok = false;
                }
            }
        }
        report.entries.push_back(std::move(entry));
    }
    return report;
}

/// Decode-time scaling: trellis reference vs the shift-register
/// decoders as the code memory grows.
struct BenchRow {
    std::string code;
    int code_memory = 0;
    int dual_regs = 0;
    double bcjr_us = 0.0;
    double dual_direct_us = 0.0;
    double dual_fft_us = 0.0;
};

struct BenchResult {
    std::vector<BenchRow> rows;
    double dual_direct_r2 = 0.0;
    double dual_fft_r2 = 0.0;
    std::vector<double> bcjr_ratios;  // time ratio between consecutive rows

    std::string csv() const {
        std::ostringstream os;
        os << "code,code_memory,dual_regs,bcjr_us,dual_direct_us,dual_fft_us\n";
        for (const auto& r : rows)
            os << r.code << ',' << r.code_memory << ',' << r.dual_regs << ',' << std::fixed
               << std::setprecision(2) << r.bcjr_us << ',' << r.dual_direct_us << ',' << r.dual_fft_us << '\n';
        return os.str();
    }
};

namespace detail {

inline double fit_r2(const std::vector<std::pair<double, double>>& pts) {
    const double n = static_cast<double>(pts.size());
    if (pts.size() < 3) return 1.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) return 0.0;
    double slope = (n * sxy - sx * sy) / denom;
    double icept = (sy - slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    double mean = sy / n;
    for (auto [x, y] : pts) {
        double e = y - (slope * x + icept);
        ss_res += e * e;
        ss_tot += (y - mean) * (y - mean);
    }
    return ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
}

template <class Fn>
double time_decodes_us(Fn&& decode, const std::vector<std::vector<Pmf>>& frames) {
    // Warm-up pass, then whole passes until enough wall time has
    // accumulated for scheduler jitter to wash out.
    decode(frames[0]);
    double total_us = 0.0;
    std::size_t decodes = 0;
    for (int pass = 0; pass < 64 && (pass < 2 || total_us < 3e5); ++pass) {
        auto t0 = std::chrono::steady_clock::now();
        for (const auto& f : frames) decode(f);
        total_us += std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
        decodes += frames.size();
    }
    return total_us / static_cast<double>(decodes);
}

}  // namespace detail

/// Feed-forward test code of the requested memory over the given
/// field: a(x) = 1 + x + ... + x^n, whose complementary polynomial is
/// always 1 + x, keeping the decoder at n + 1 registers for every n.
inline std::string bench_code_descriptor(const Field& f, int memory) {
    std::string a = "1+x";
    for (int i = 2; i <= memory; ++i) a += "+x^" + std::to_string(i);
    return f.descriptor() + ":(" + a + ")";
}

inline BenchResult bench_complexity(const std::string& field_descriptor, const std::vector<int>& memories,
                                    std::uint64_t frames, int L = 256, std::uint64_t seed = 1,
                                    double ebn0_db = 2.0) {
    BenchResult result;
    if (frames == 0) return result;
    Field f = Field::parse(field_descriptor);
    std::vector<std::pair<double, double>> direct_pts, fft_pts;
    std::vector<double> bcjr_times;

    for (int n : memories) {
        std::string desc = bench_code_descriptor(f, n);
        CodeSpec code = CodeSpec::parse(desc);
        DualSpec dual = dual_taps(code);
        Trellis trellis = build_trellis(expanded_code(dual));

        std::vector<std::vector<Pmf>> noisy;
        noisy.reserve(frames);
        for (std::uint64_t i = 0; i < frames; ++i) {
            auto rng = frame_rng(seed, i);
            noisy.push_back(make_noisy_frame(code, dual, L, ebn0_db, rng).pmfs);
        }

        BenchRow row;
        row.code = desc;
        row.code_memory = n;
        row.dual_regs = dual.regs;
        row.bcjr_us = detail::time_decodes_us(
            [&](const std::vector<Pmf>& p) { return bcjr_posteriors(trellis, p); }, noisy);
        row.dual_direct_us = detail::time_decodes_us(
            [&](const std::vector<Pmf>& p) { return combine_decode(dual, p, {TransformMode::direct, false}); },
            noisy);
        row.dual_fft_us = detail::time_decodes_us(
            [&](const std::vector<Pmf>& p) { return combine_decode(dual, p, {TransformMode::fast, false}); },
            noisy);

        direct_pts.emplace_back(row.dual_regs, row.dual_direct_us);
        fft_pts.emplace_back(row.dual_regs, row.dual_fft_us);
        bcjr_times.push_back(row.bcjr_us);
        result.rows.push_back(std::move(row));
    }

    result.dual_direct_r2 = detail::fit_r2(direct_pts);
    result.dual_fft_r2 = detail::fit_r2(fft_pts);
    for (std::size_t i = 1; i < bcjr_times.size(); ++i)
        result.bcjr_ratios.push_back(bcjr_times[i] / bcjr_times[i - 1]);
    return result;
}

}  // namespace dualdec
