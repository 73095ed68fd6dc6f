/**************************************************************************
 * channel.hpp
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

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "dualdec/errors.hpp"
#include "dualdec/galois.hpp"
#include "dualdec/pmf.hpp"

namespace dualdec {

/// BPSK over AWGN.  Each code symbol is sent as its log2(q) label bits,
/// most significant first, bit 0 -> +1 and bit 1 -> -1, unit energy per
/// transmitted bit.
struct ChannelConfig {
    Field field;
    double ebn0_db = 0.0;      // information-bit SNR
    int info_len = 0;          // L
    int tail_len = 0;          // tail symbols on air
    int bits_per_symbol = 0;   // log2(q)
    double rate_eff = 1.0;     // L / (L + tail): tail overhead charged to Eb
    double sigma = 0.0;        // noise std per real dimension

    /// Per-transmitted-bit SNR in dB, i.e. without the tail overhead
    /// accounting (= ebn0_db + 10 log10(rate_eff)).
    double raw_ebn0_db() const { return ebn0_db + 10.0 * std::log10(rate_eff); }

    static ChannelConfig bpsk(const Field& f, double ebn0_db, int info_len, int tail_len) {
        int q = f.q();
        int bits = 0;
        while ((1 << bits) < q) ++bits;
        if ((1 << bits) != q)
            throw NonBinaryExtensionError("BPSK bit mapping needs a power-of-two field size, got q=" +
                                          std::to_string(q));
        ChannelConfig c{f};
        c.ebn0_db = ebn0_db;
        c.info_len = info_len;
        c.tail_len = tail_len;
        c.bits_per_symbol = bits;
        c.rate_eff = static_cast<double>(info_len) / (info_len + tail_len);
        if (std::isinf(ebn0_db) && ebn0_db > 0) {
            c.sigma = 0.0;
        } else {
            double snr = std::pow(10.0, ebn0_db / 10.0);
            c.sigma = std::sqrt(1.0 / (2.0 * c.rate_eff * snr));
        }
        return c;
    }
};

/// One sample per label bit, MSB first: 0 -> +1, 1 -> -1.
inline std::vector<double> modulate_bpsk(const Field& f, const std::vector<Symbol>& syms, int bits_per_symbol) {
    std::vector<double> out;
    out.reserve(syms.size() * static_cast<std::size_t>(bits_per_symbol));
    for (Symbol s : syms)
        for (int i = bits_per_symbol - 1; i >= 0; --i) out.push_back(((s >> i) & 1) ? -1.0 : 1.0);
    return out;
}

/// Unit-average-energy amplitude levels for a q-ary alphabet; used to
/// exercise the decoders on fields where BPSK does not apply.  Not part
/// of the BER experiments.
inline std::vector<double> modulate_pam(const Field& f, const std::vector<Symbol>& syms) {
    const int q = f.q();
    const double step = std::sqrt(3.0 / (static_cast<double>(q) * q - 1.0));
    std::vector<double> out;
    out.reserve(syms.size());
    for (Symbol s : syms) out.push_back((2.0 * s - (q - 1.0)) * step);
    return out;
}

/// Deterministic per-frame random stream: the generator seed depends
/// only on (master seed, frame index), so results are independent of
/// how frames are scheduled across workers.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t frame) {
    auto splitmix = [](std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    };
    return splitmix(splitmix(master) ^ splitmix(frame + 0x51ED270B7A2FB5ull));
}

inline std::mt19937_64 frame_rng(std::uint64_t master, std::uint64_t frame) {
    return std::mt19937_64(mix_seed(master, frame));
}

inline void add_noise(std::vector<double>& samples, double sigma, std::mt19937_64& rng) {
    if (sigma <= 0.0) return;
    std::normal_distribution<double> gauss(0.0, sigma);
    for (double& s : samples) s += gauss(rng);
}

/// Per-symbol posterior pmfs from BPSK samples under a uniform symbol
/// prior.  Log-likelihoods are max-shifted before exponentiation so
/// high-SNR frames cannot underflow to an all-zero pmf.
inline std::vector<Pmf> demap_bpsk(const Field& f, const std::vector<double>& samples, int bits_per_symbol,
                                   double sigma) {
    if (samples.size() % static_cast<std::size_t>(bits_per_symbol) != 0)
        throw LengthMismatchError("sample count is not a whole number of symbols");
    const int q = f.q();
    const std::size_t n_syms = samples.size() / static_cast<std::size_t>(bits_per_symbol);
    std::vector<Pmf> out;
    out.reserve(n_syms);

    for (std::size_t k = 0; k < n_syms; ++k) {
        const double* y = samples.data() + k * static_cast<std::size_t>(bits_per_symbol);
        if (sigma <= 0.0) {
            // Noise-free limit: point mass at the minimum-distance symbol.
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int w = 0; w < q; ++w) {
                double d = 0.0;
                for (int i = 0; i < bits_per_symbol; ++i) {
                    double s = ((w >> (bits_per_symbol - 1 - i)) & 1) ? -1.0 : 1.0;
                    d += (y[i] - s) * (y[i] - s);
                }
                if (d < best_d) {
                    best_d = d;
                    best = w;
                }
            }
            out.push_back(Pmf::delta(f, static_cast<Symbol>(best)));
            continue;
        }
        std::vector<double> loglik(static_cast<std::size_t>(q));
        double max_ll = -std::numeric_limits<double>::infinity();
        for (int w = 0; w < q; ++w) {
            double ll = 0.0;
            for (int i = 0; i < bits_per_symbol; ++i) {
                double s = ((w >> (bits_per_symbol - 1 - i)) & 1) ? -1.0 : 1.0;
                ll -= (y[i] - s) * (y[i] - s);
            }
            ll /= 2.0 * sigma * sigma;
            loglik[static_cast<std::size_t>(w)] = ll;
            if (ll > max_ll) max_ll = ll;
        }
        Pmf p(f);
        for (int w = 0; w < q; ++w) p[static_cast<Symbol>(w)] = std::exp(loglik[static_cast<std::size_t>(w)] - max_ll);
        out.push_back(p.normalize());
    }
    return out;
}

/// PAM counterpart of demap_bpsk, one sample per symbol.
inline std::vector<Pmf> demap_pam(const Field& f, const std::vector<double>& samples, double sigma) {
    const int q = f.q();
    const double step = std::sqrt(3.0 / (static_cast<double>(q) * q - 1.0));
    std::vector<Pmf> out;
    out.reserve(samples.size());
    for (double y : samples) {
        if (sigma <= 0.0) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int w = 0; w < q; ++w) {
                double a = (2.0 * w - (q - 1.0)) * step;
                double d = (y - a) * (y - a);
                if (d < best_d) {
                    best_d = d;
                    best = w;
                }
            }
            out.push_back(Pmf::delta(f, static_cast<Symbol>(best)));
            continue;
        }
        double max_ll = -std::numeric_limits<double>::infinity();
        std::vector<double> loglik(static_cast<std::size_t>(q));
        for (int w = 0; w < q; ++w) {
            double a = (2.0 * w - (q - 1.0)) * step;
            double ll = -(y - a) * (y - a) / (2.0 * sigma * sigma);
            loglik[static_cast<std::size_t>(w)] = ll;
            max_ll = std::max(max_ll, ll);
        }
        Pmf p(f);
        for (int w = 0; w < q; ++w) p[static_cast<Symbol>(w)] = std::exp(loglik[static_cast<std::size_t>(w)] - max_ll);
        out.push_back(p.normalize());
    }
    return out;
}

}  // namespace dualdec
