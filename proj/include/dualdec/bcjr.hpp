/**************************************************************************
 * bcjr.hpp
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

#include <cstddef>
#include <vector>

#include "dualdec/convcode.hpp"
#include "dualdec/errors.hpp"
#include "dualdec/pmf.hpp"

namespace dualdec {

/// Reference bidirectional BCJR MAP decoder on the code trellis,
/// probability domain with per-step normalization.  The recursions use
/// a dense per-step transition matrix, so each step costs S^2 for S
/// states; this implementation is the exactness reference, not the fast
/// path.  Frames are assumed to start and end in the all-zero state.

using StateDist = std::vector<double>;  // one probability per trellis state

namespace detail {

inline void check_inputs(const Trellis& t, const std::vector<Pmf>& pmfs) {
    if (pmfs.empty()) throw LengthMismatchError("no symbol pmfs given");
    for (const auto& p : pmfs) {
        if (p.field() != t.field) throw FieldMismatchError("symbol pmf over the wrong field");
        if (p.size() != t.field.q()) throw LengthMismatchError("pmf length does not match field size");
    }
}

/// Dense step transition matrix: gamma[u' * S + u] = sum of P(output)
/// over edges u' -> u.
inline void fill_gamma(const Trellis& t, const Pmf& p, std::vector<double>& gamma) {
    const std::size_t S = t.num_states;
    std::fill(gamma.begin(), gamma.end(), 0.0);
    for (std::uint32_t s = 0; s < S; ++s)
        for (int b = 0; b < t.field.q(); ++b) {
            std::size_t e = t.edge(s, static_cast<Symbol>(b));
            gamma[static_cast<std::size_t>(s) * S + t.next[e]] += p[t.output[e]];
        }
}

inline void normalize_dist(StateDist& d, const char* what) {
    double sum = 0.0;
    for (double v : d) sum += v;
    if (!(sum > 0.0)) throw AllZeroMassError(std::string(what) + " lost all probability mass");
    double inv = 1.0 / sum;
    for (double& v : d) v *= inv;
}

}  // namespace detail

/// Forward metrics: alphas[k] is the normalized state distribution
/// after k symbols, alphas[0] a point mass at the all-zero state.
inline std::vector<StateDist> bcjr_forward(const Trellis& t, const std::vector<Pmf>& pmfs) {
    detail::check_inputs(t, pmfs);
    const std::size_t S = t.num_states;
    std::vector<StateDist> alphas(pmfs.size() + 1, StateDist(S, 0.0));
    alphas[0][0] = 1.0;
    std::vector<double> gamma(S * S);
    for (std::size_t k = 0; k < pmfs.size(); ++k) {
        detail::fill_gamma(t, pmfs[k], gamma);
        StateDist& next = alphas[k + 1];
        const StateDist& cur = alphas[k];
        // Row-major accumulation keeps the gamma walk contiguous.
        for (std::uint32_t up = 0; up < S; ++up) {
            double a = cur[up];
            if (a == 0.0) continue;
            const double* row = gamma.data() + static_cast<std::size_t>(up) * S;
            for (std::uint32_t u = 0; u < S; ++u) next[u] += a * row[u];
        }
        detail::normalize_dist(next, "forward metric");
    }
    return alphas;
}

/// Backward metrics: betas[k] is the normalized distribution over the
/// state at time k given the symbols after k; betas[T] is a point mass
/// at the all-zero state (terminated frame).
inline std::vector<StateDist> bcjr_backward(const Trellis& t, const std::vector<Pmf>& pmfs) {
    detail::check_inputs(t, pmfs);
    const std::size_t S = t.num_states;
    std::vector<StateDist> betas(pmfs.size() + 1, StateDist(S, 0.0));
    betas[pmfs.size()][0] = 1.0;
    std::vector<double> gamma(S * S);
    for (std::size_t k = pmfs.size(); k-- > 0;) {
        detail::fill_gamma(t, pmfs[k], gamma);
        StateDist& prev = betas[k];
        const StateDist& cur = betas[k + 1];
        for (std::uint32_t up = 0; up < S; ++up) {
            double acc = 0.0;
            for (std::uint32_t u = 0; u < S; ++u) acc += gamma[static_cast<std::size_t>(up) * S + u] * cur[u];
            prev[up] = acc;
        }
        detail::normalize_dist(prev, "backward metric");
    }
    return betas;
}

/// Exact symbol-wise a-posteriori pmfs of the information symbols for a
/// frame that starts and ends in the all-zero state.  Throws
/// NotTerminatedError when the observations admit no terminated path.
/// The overload with precomputed metrics avoids re-running the
/// recursions when forward and backward quantities are needed anyway.
inline std::vector<Pmf> bcjr_posteriors(const Trellis& t, const std::vector<Pmf>& pmfs,
                                        const std::vector<StateDist>& alphas,
                                        const std::vector<StateDist>& betas) {
    const std::size_t S = t.num_states;
    std::vector<Pmf> out;
    out.reserve(pmfs.size());
    for (std::size_t k = 0; k < pmfs.size(); ++k) {
        Pmf post(t.field);
        for (std::uint32_t up = 0; up < S; ++up) {
            double a = alphas[k][up];
            if (a == 0.0) continue;
            for (int b = 0; b < t.field.q(); ++b) {
                std::size_t e = t.edge(up, static_cast<Symbol>(b));
                post[static_cast<Symbol>(b)] += a * pmfs[k][t.output[e]] * betas[k + 1][t.next[e]];
            }
        }
        double sum = post.sum();
        if (!(sum > 0.0)) throw NotTerminatedError("observations admit no terminated trellis path");
        out.push_back(post.normalize());
    }
    return out;
}

inline std::vector<Pmf> bcjr_posteriors(const Trellis& t, const std::vector<Pmf>& pmfs) {
    return bcjr_posteriors(t, pmfs, bcjr_forward(t, pmfs), bcjr_backward(t, pmfs));
}

/// One-directional marginal using only past and current observations:
/// P(b_k | y_1..y_k), the alpha-gamma edge marginal.
inline std::vector<Pmf> bcjr_forward_marginal(const Trellis& t, const std::vector<Pmf>& pmfs,
                                              const std::vector<StateDist>& alphas) {
    const std::size_t S = t.num_states;
    std::vector<Pmf> out;
    out.reserve(pmfs.size());
    for (std::size_t k = 0; k < pmfs.size(); ++k) {
        Pmf m(t.field);
        for (std::uint32_t up = 0; up < S; ++up) {
            double a = alphas[k][up];
            if (a == 0.0) continue;
            for (int b = 0; b < t.field.q(); ++b)
                m[static_cast<Symbol>(b)] += a * pmfs[k][t.output[t.edge(up, static_cast<Symbol>(b))]];
        }
        out.push_back(m.normalize());
    }
    return out;
}

inline std::vector<Pmf> bcjr_forward_marginal(const Trellis& t, const std::vector<Pmf>& pmfs) {
    return bcjr_forward_marginal(t, pmfs, bcjr_forward(t, pmfs));
}

/// One-directional marginal using only current and future observations:
/// the gamma-beta edge marginal, summed over source states with uniform
/// weight (no knowledge of the past, including the zero start).
inline std::vector<Pmf> bcjr_backward_marginal(const Trellis& t, const std::vector<Pmf>& pmfs,
                                               const std::vector<StateDist>& betas) {
    const std::size_t S = t.num_states;
    std::vector<Pmf> out;
    out.reserve(pmfs.size());
    for (std::size_t k = 0; k < pmfs.size(); ++k) {
        Pmf m(t.field);
        for (std::uint32_t up = 0; up < S; ++up)
            for (int b = 0; b < t.field.q(); ++b) {
                std::size_t e = t.edge(up, static_cast<Symbol>(b));
                m[static_cast<Symbol>(b)] += pmfs[k][t.output[e]] * betas[k + 1][t.next[e]];
            }
        out.push_back(m.normalize());
    }
    return out;
}

inline std::vector<Pmf> bcjr_backward_marginal(const Trellis& t, const std::vector<Pmf>& pmfs) {
    return bcjr_backward_marginal(t, pmfs, bcjr_backward(t, pmfs));
}

}  // namespace dualdec
