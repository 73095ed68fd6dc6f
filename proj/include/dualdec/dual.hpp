/**************************************************************************
 * dual.hpp
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

#include <cassert>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "dualdec/convcode.hpp"
#include "dualdec/errors.hpp"
#include "dualdec/galois.hpp"
#include "dualdec/gfpoly.hpp"
#include "dualdec/pmf.hpp"

namespace dualdec {

/// Decoding machine for a rate-1 code g = a/f: the encoder of the
/// inverse generator q(x) = f(x)z(x) / (a(x)z(x)), where z is the
/// complementary polynomial of a.  With a z = 1 - c x^M the machine is
/// a pure delay line of M = n + l registers holding the chain
///
///     w(k) = u(k) + c * w(k-M),
///
/// u(k) being the input.  Substituting the chain relation into
/// b(k) = sum_i h_i w(k-i) (h = coefficients of f z) removes w(k) and
/// folds the top tap through the feedback:
///
///     b(k) = h_0 u(k) + sum_{i=1..M} t_i w(k-i),
///     t_i  = h_i, except t_M = h_M + c h_0.
///
/// Every variable on the right draws on a disjoint set of inputs, which
/// is what lets the same machine run on pmf registers with + replaced
/// by group convolution.  The time-reversed twin follows by solving the
/// chain backwards from the terminated end:
///
///     w(k-M) = -c^{-1} u(k) + c^{-1} w(k),
///     b(k)   = -h_M c^{-1} u(k) + (h_0 + h_M c^{-1}) w(k)
///              + sum_{i=1..M-1} h_i w(k-i),
///
/// i.e. the same delay line with reversed register labels.  When a is
/// constant there is no feedback at all and the registers simply hold
/// delayed inputs.  Codes with deg f > deg a >= 1 would need output
/// taps past the feedback delay, which breaks the disjointness above;
/// they are rejected at construction.
struct DualSpec {
    CodeSpec code;
    GfPoly z;           // complementary multiplier of a
    int l = 0;          // deg z
    int regs = 0;       // total shift registers M = n + l
    int fb_delay = 0;   // feedback delay (== regs, or 0 for no feedback)
    Symbol fb_coeff;    // c in a z = 1 - c x^M (1, unused, when fb_delay = 0)
    std::vector<Symbol> taps;      // h_0..h_M, coefficients of f z zero-padded
    std::vector<Symbol> out_taps;  // t_0(=0), t_1..t_M, folded forward taps

    // Time-reversed twin, derived once.
    Symbol bwd_in_tap;                 // -h_M c^{-1}; may legitimately be 0
    std::vector<Symbol> bwd_out_taps;  // index 1..M, reversed register order
    Symbol bwd_in_coeff;               // -c^{-1}, input scaling of the twin chain
    Symbol bwd_fb_coeff;               // c^{-1}

    bool has_feedback() const { return fb_delay > 0; }
    Symbol h0() const { return taps[0]; }
};

/// Derives the decoding machine of a code: complementary polynomial,
/// tap list h = coefficients of f(x)z(x), feedback constant, and the
/// folded forward/backward tap sets.
inline DualSpec dual_taps(const CodeSpec& code) {
    const Field& F = code.field;
    if (code.a.degree() >= 1 && code.f.degree() > code.a.degree())
        throw UnsupportedCodeError("deg f > deg a >= 1: output taps would reach past the feedback delay");

    Complementary comp = min_complementary(code.a);
    DualSpec d{code, comp.z};
    d.l = comp.l;
    d.regs = code.memory() + comp.l;
    d.fb_coeff = comp.feedback;
    GfPoly fz = code.f * comp.z;
    assert(fz.degree() <= d.regs);

    d.taps.assign(static_cast<std::size_t>(d.regs) + 1, 0);
    for (int i = 0; i <= fz.degree(); ++i) d.taps[static_cast<std::size_t>(i)] = fz.coeff(i);
    assert(d.taps[0] != 0);

    d.out_taps = d.taps;
    d.out_taps[0] = 0;

    if (code.a.degree() >= 1) {
        d.fb_delay = comp.order;
        assert(d.fb_delay == d.regs);
        const Symbol c = d.fb_coeff;
        const Symbol hM = d.taps[static_cast<std::size_t>(d.regs)];
        d.out_taps[static_cast<std::size_t>(d.regs)] = F.add(hM, F.mul(c, d.taps[0]));

        const Symbol c_inv = F.inv(c);
        d.bwd_in_tap = F.neg(F.mul(hM, c_inv));
        d.bwd_in_coeff = F.neg(c_inv);
        d.bwd_fb_coeff = c_inv;
        d.bwd_out_taps.assign(static_cast<std::size_t>(d.regs) + 1, 0);
        for (int j = 1; j < d.regs; ++j)
            d.bwd_out_taps[static_cast<std::size_t>(j)] = d.taps[static_cast<std::size_t>(d.regs - j)];
        d.bwd_out_taps[static_cast<std::size_t>(d.regs)] = F.add(d.taps[0], F.mul(hM, c_inv));
    } else {
        // Feed-forward machine on raw input delays.
        d.fb_delay = 0;
        d.fb_coeff = 1;
        d.bwd_in_tap = d.taps[0];
        d.bwd_in_coeff = 1;
        d.bwd_fb_coeff = 1;
        d.bwd_out_taps.assign(static_cast<std::size_t>(d.regs) + 1, 0);
    }
    return d;
}

/// The same generator g = a/f realized with the decoding machine's
/// memory: numerator a z, denominator f z.  The controller-canonical
/// state of this realization is exactly the decoder's chain, so ending
/// this trellis in the all-zero state is equivalent to the transmitted
/// tail's termination rule.  Exactness comparisons against trellis MAP
/// decoding use this realization; the minimal q^n-state trellis cannot
/// see the q^(M-n) tail combinations per prefix that the tail rule
/// excludes.
inline CodeSpec expanded_code(const DualSpec& dual) {
    const Field& F = dual.code.field;
    GfPoly az = dual.code.a * dual.z;  // 1 - c x^M, or 1 when a is constant
    GfPoly fz = dual.code.f * dual.z;
    return CodeSpec(F, az, fz);
}

/// The decoding machine run on plain symbols: feeding it a code
/// sequence reproduces the information sequence.  Also tracks the chain
/// registers, which is what frame termination flushes.
class DualChainEncoder {
  public:
    explicit DualChainEncoder(DualSpec spec)
        : spec_(std::move(spec)), regs_(static_cast<std::size_t>(spec_.regs), 0) {}

    const DualSpec& spec() const { return spec_; }
    const std::vector<Symbol>& regs() const { return regs_; }

    bool at_zero_state() const {
        for (Symbol r : regs_)
            if (r != 0) return false;
        return true;
    }

    void reset() { std::fill(regs_.begin(), regs_.end(), 0); }

    Symbol step(Symbol u) {
        const Field& F = spec_.code.field;
        const int M = spec_.regs;
        Symbol out = F.mul(spec_.h0(), u);
        for (int i = 1; i <= M; ++i) {
            Symbol t = spec_.out_taps[static_cast<std::size_t>(i)];
            if (t != 0) out = F.add(out, F.mul(t, regs_[static_cast<std::size_t>(i - 1)]));
        }
        if (M > 0) {
            Symbol w = spec_.has_feedback()
                           ? F.add(u, F.mul(spec_.fb_coeff, regs_[static_cast<std::size_t>(M - 1)]))
                           : u;
            for (int i = M - 1; i > 0; --i) regs_[static_cast<std::size_t>(i)] = regs_[static_cast<std::size_t>(i - 1)];
            regs_[0] = w;
        }
        return out;
    }

    /// Code-domain tail that flushes the chain to the all-zero state:
    /// each tail symbol cancels the feedback of the register about to
    /// wrap around.  Does not advance this machine.
    std::vector<Symbol> termination_tail() const {
        const Field& F = spec_.code.field;
        const int M = spec_.regs;
        std::vector<Symbol> tail(static_cast<std::size_t>(M), 0);
        if (!spec_.has_feedback()) return tail;  // zeros already flush a delay line
        std::vector<Symbol> r(regs_);
        for (int j = 0; j < M; ++j) {
            Symbol u = F.neg(F.mul(spec_.fb_coeff, r[static_cast<std::size_t>(M - 1)]));
            tail[static_cast<std::size_t>(j)] = u;
            for (int i = M - 1; i > 0; --i) r[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i - 1)];
            r[0] = 0;  // u + c * old_last == 0 by construction
        }
        return tail;
    }

  private:
    DualSpec spec_;
    std::vector<Symbol> regs_;
};

/// Reverse-memory-labeled twin of the chain machine, fed the frame in
/// time-reversed order.  Starting from the terminated (all-zero) end it
/// revisits exactly the chain values of the forward machine, with the
/// register list read in reverse order.
class DualChainBackwardEncoder {
  public:
    explicit DualChainBackwardEncoder(DualSpec spec)
        : spec_(std::move(spec)), regs_(static_cast<std::size_t>(spec_.regs), 0) {}

    const std::vector<Symbol>& regs() const { return regs_; }

    Symbol step(Symbol u) {
        const Field& F = spec_.code.field;
        const int M = spec_.regs;
        Symbol out = F.mul(spec_.bwd_in_tap, u);
        for (int j = 1; j <= M; ++j) {
            Symbol t = spec_.bwd_out_taps[static_cast<std::size_t>(j)];
            if (t != 0) out = F.add(out, F.mul(t, regs_[static_cast<std::size_t>(j - 1)]));
        }
        if (M > 0) {
            Symbol w = spec_.has_feedback()
                           ? F.add(F.mul(spec_.bwd_in_coeff, u),
                                   F.mul(spec_.bwd_fb_coeff, regs_[static_cast<std::size_t>(M - 1)]))
                           : u;
            for (int i = M - 1; i > 0; --i) regs_[static_cast<std::size_t>(i)] = regs_[static_cast<std::size_t>(i - 1)];
            regs_[0] = w;
        }
        return out;
    }

  private:
    DualSpec spec_;
    std::vector<Symbol> regs_;
};

/// A frame ready for the channel: L information symbols encoded, plus
/// the termination tail in both domains.
struct TerminatedFrame {
    std::vector<Symbol> code_syms;  // length L + M, as transmitted
    std::vector<Symbol> info_tail;  // information-domain image of the tail
};

/// Encodes and terminates a frame.  The tail flushes the decoding
/// machine to the all-zero state; the same symbols also drive encoder C
/// to zero, which is asserted rather than assumed.
inline TerminatedFrame encode_terminated(const CodeSpec& code, const DualSpec& dual,
                                         const std::vector<Symbol>& info) {
    Encoder enc(code);
    DualChainEncoder chain(dual);
    TerminatedFrame frame;
    frame.code_syms.reserve(info.size() + static_cast<std::size_t>(dual.regs));
    for (Symbol b : info) {
        Symbol c = enc.step(b);
        frame.code_syms.push_back(c);
        Symbol back = chain.step(c);
        (void)back;
        assert(back == b);
    }
    std::vector<Symbol> tail = chain.termination_tail();
    for (Symbol u : tail) {
        frame.code_syms.push_back(u);
        frame.info_tail.push_back(chain.step(u));
    }
    assert(chain.at_zero_state());
    // Re-encode the information-domain tail through C and confirm it
    // lands on the same code symbols and the all-zero state.
    for (std::size_t j = 0; j < frame.info_tail.size(); ++j) {
        Symbol c = enc.step(frame.info_tail[j]);
        (void)c;
        assert(c == frame.code_syms[info.size() + j]);
    }
    assert(enc.state().is_zero());
    return frame;
}

/// Per-time-step snapshots of the decoder's register pmfs.
/// at[k][j-1] is register j after consuming symbol k (at[0] is the
/// initial state).
struct RegisterBank {
    int regs = 0;
    std::vector<std::vector<Pmf>> at;
};

enum class TransformMode { direct, fast };

struct DecodeOptions {
    TransformMode mode = TransformMode::direct;
    bool keep_history = false;
};

struct DecodeResult {
    std::vector<Pmf> info;
    RegisterBank bank;
};

namespace detail {

template <class S>
struct SpecTraits;

template <>
struct SpecTraits<double> {
    static std::vector<double> forward(const GroupTransform&, const Pmf& P) {
        std::vector<double> v = P.mass();
        GroupTransform::wht_in_place(v);
        return v;
    }
    static Pmf inverse(const GroupTransform& t, std::vector<double> v) {
        GroupTransform::wht_in_place(v);
        Pmf out(t.field());
        const double s = 1.0 / t.field().q();
        for (int j = 0; j < t.field().q(); ++j) {
            double r = v[static_cast<std::size_t>(j)] * s;
            out[static_cast<Symbol>(j)] = r < 0.0 ? 0.0 : r;
        }
        return out;
    }
    static double dc(const std::vector<double>& v) { return v[0]; }
};

template <>
struct SpecTraits<std::complex<double>> {
    static std::vector<std::complex<double>> forward(const GroupTransform& t, const Pmf& P) {
        return t.forward(P).coeffs;
    }
    static Pmf inverse(const GroupTransform& t, std::vector<std::complex<double>> v) {
        return t.inverse(SpectrumVec{t.field(), std::move(v)});
    }
    static double dc(const std::vector<std::complex<double>>& v) { return v[0].real(); }
};

template <class S>
std::vector<S> gathered(const std::vector<S>& in, const std::vector<Symbol>& map) {
    std::vector<S> out(in.size());
    for (std::size_t t = 0; t < in.size(); ++t) out[t] = in[map[t]];
    return out;
}

template <class S>
void mul_into(std::vector<S>& acc, const std::vector<S>& v) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] *= v[i];
}

template <class S>
void dc_normalize(std::vector<S>& v) {
    double d = SpecTraits<S>::dc(v);
    if (!(d > 0.0)) throw AllZeroMassError("spectral register lost all mass");
    S scale = S(1.0 / d);
    for (auto& x : v) x *= scale;
}

/// Checked, normalized copies of the inputs.
inline std::vector<Pmf> prepared_inputs(const DualSpec& spec, const std::vector<Pmf>& pmfs) {
    if (pmfs.empty()) throw LengthMismatchError("no symbol pmfs to decode");
    std::vector<Pmf> out;
    out.reserve(pmfs.size());
    for (const auto& p : pmfs) {
        if (p.field() != spec.code.field) throw FieldMismatchError("symbol pmf over the wrong field");
        out.push_back(p.normalized());
    }
    return out;
}

/// Direction-agnostic pmf-domain machine run.  The two directions
/// differ only in their tap sets and chain coefficients.
struct MachineTaps {
    Symbol in_tap;               // tap on the current input
    const std::vector<Symbol>* reg_taps;  // index 1..M
    Symbol chain_in_coeff;       // scaling of the input entering the chain
    Symbol chain_fb_coeff;       // scaling of the wrapped-around register
    bool feedback;
};

inline DecodeResult run_machine_direct(const DualSpec& spec, const std::vector<Pmf>& in,
                                       const MachineTaps& taps, bool keep_history) {
    const Field& F = spec.code.field;
    const int M = spec.regs;
    std::vector<Pmf> regs(static_cast<std::size_t>(M), Pmf::delta(F, 0));

    DecodeResult res;
    res.info.reserve(in.size());
    res.bank.regs = M;
    if (keep_history) {
        res.bank.at.reserve(in.size() + 1);
        res.bank.at.push_back(regs);
    }

    for (const Pmf& Q : in) {
        bool have = false;
        Pmf out(F);
        if (taps.in_tap != 0) {
            out = permute(Q, taps.in_tap);
            have = true;
        }
        for (int i = 1; i <= M; ++i) {
            Symbol t = (*taps.reg_taps)[static_cast<std::size_t>(i)];
            if (t == 0) continue;
            Pmf term = permute(regs[static_cast<std::size_t>(i - 1)], t);
            out = have ? convolve(out, term) : term;
            have = true;
        }
        if (!have) out = Pmf::delta(F, 0);  // all taps zero: output is the constant 0 symbol
        res.info.push_back(out.normalize());

        if (M > 0) {
            Pmf w = taps.feedback
                        ? convolve(permute(Q, taps.chain_in_coeff),
                                   permute(regs[static_cast<std::size_t>(M - 1)], taps.chain_fb_coeff))
                              .normalize()
                        : Q;
            for (int i = M - 1; i > 0; --i) regs[static_cast<std::size_t>(i)] = regs[static_cast<std::size_t>(i - 1)];
            regs[0] = std::move(w);
        }
        if (keep_history) res.bank.at.push_back(regs);
    }
    return res;
}

template <class S>
DecodeResult run_machine_fast(const DualSpec& spec, const std::vector<Pmf>& in, const MachineTaps& taps,
                              bool keep_history) {
    using Traits = SpecTraits<S>;
    const Field& F = spec.code.field;
    const int M = spec.regs;
    const GroupTransform plan(F);

    // Spectrum-domain index maps for every distinct permutation in use.
    std::vector<std::vector<Symbol>> tap_maps(static_cast<std::size_t>(M) + 1);
    std::vector<Symbol> in_map, chain_in_map, chain_fb_map;
    if (taps.in_tap > 1) in_map = plan.spectrum_permutation(taps.in_tap);
    for (int i = 1; i <= M; ++i) {
        Symbol t = (*taps.reg_taps)[static_cast<std::size_t>(i)];
        if (t > 1) tap_maps[static_cast<std::size_t>(i)] = plan.spectrum_permutation(t);
    }
    if (taps.feedback) {
        if (taps.chain_in_coeff > 1) chain_in_map = plan.spectrum_permutation(taps.chain_in_coeff);
        if (taps.chain_fb_coeff > 1) chain_fb_map = plan.spectrum_permutation(taps.chain_fb_coeff);
    }

    std::vector<S> delta0(static_cast<std::size_t>(F.q()), S(1.0));  // spectrum of the point mass at 0
    std::vector<std::vector<S>> regs(static_cast<std::size_t>(M), delta0);

    DecodeResult res;
    res.info.reserve(in.size());
    res.bank.regs = M;
    auto snapshot = [&]() {
        std::vector<Pmf> row;
        row.reserve(static_cast<std::size_t>(M));
        for (const auto& r : regs) row.push_back(Traits::inverse(plan, r).normalized());
        res.bank.at.push_back(std::move(row));
    };
    if (keep_history) snapshot();

    for (const Pmf& Q : in) {
        std::vector<S> Qs = Traits::forward(plan, Q);
        bool have = false;
        std::vector<S> acc;
        if (taps.in_tap != 0) {
            acc = taps.in_tap == 1 ? Qs : gathered(Qs, in_map);
            have = true;
        }
        for (int i = 1; i <= M; ++i) {
            Symbol t = (*taps.reg_taps)[static_cast<std::size_t>(i)];
            if (t == 0) continue;
            const auto& r = regs[static_cast<std::size_t>(i - 1)];
            std::vector<S> term = t == 1 ? r : gathered(r, tap_maps[static_cast<std::size_t>(i)]);
            if (have)
                mul_into(acc, term);
            else {
                acc = std::move(term);
                have = true;
            }
        }
        Pmf out = have ? Traits::inverse(plan, std::move(acc)) : Pmf::delta(F, 0);
        res.info.push_back(out.normalize());

        if (M > 0) {
            std::vector<S> w;
            if (taps.feedback) {
                w = taps.chain_in_coeff == 1 ? Qs : gathered(Qs, chain_in_map);
                const auto& last = regs[static_cast<std::size_t>(M - 1)];
                mul_into(w, taps.chain_fb_coeff == 1 ? last : gathered(last, chain_fb_map));
                dc_normalize(w);
            } else {
                w = std::move(Qs);
            }
            for (int i = M - 1; i > 0; --i) regs[static_cast<std::size_t>(i)] = std::move(regs[static_cast<std::size_t>(i - 1)]);
            regs[0] = std::move(w);
        }
        if (keep_history) snapshot();
    }
    return res;
}

inline DecodeResult run_machine(const DualSpec& spec, const std::vector<Pmf>& in, const MachineTaps& taps,
                                const DecodeOptions& opts) {
    if (opts.mode == TransformMode::direct) return run_machine_direct(spec, in, taps, opts.keep_history);
    if (spec.code.field.p() == 2) return run_machine_fast<double>(spec, in, taps, opts.keep_history);
    return run_machine_fast<std::complex<double>>(spec, in, taps, opts.keep_history);
}

inline Pmf conv_mode(const Pmf& P, const Pmf& Q, TransformMode mode, const GroupTransform& plan) {
    if (mode == TransformMode::direct) return convolve(P, Q);
    if (P.field().p() == 2) {
        auto a = SpecTraits<double>::forward(plan, P);
        mul_into(a, SpecTraits<double>::forward(plan, Q));
        return SpecTraits<double>::inverse(plan, std::move(a));
    }
    auto a = SpecTraits<std::complex<double>>::forward(plan, P);
    mul_into(a, SpecTraits<std::complex<double>>::forward(plan, Q));
    return SpecTraits<std::complex<double>>::inverse(plan, std::move(a));
}

}  // namespace detail

/// SISO forward decoding: consumes the pmfs of the received code
/// symbols (tail included) in natural order and emits the pmf of each
/// information symbol given the observations so far.
inline DecodeResult forward_decode(const DualSpec& spec, const std::vector<Pmf>& code_pmfs,
                                   const DecodeOptions& opts = {}) {
    auto in = detail::prepared_inputs(spec, code_pmfs);
    detail::MachineTaps taps{spec.h0(), &spec.out_taps, Symbol{1}, spec.fb_coeff, spec.has_feedback()};
    return detail::run_machine(spec, in, taps, opts);
}

/// SISO backward decoding: the reverse-labeled twin run on the
/// time-reversed frame.  Outputs and register banks are returned in
/// natural time order with the register index mapping j <-> M+1-j
/// already applied, so bank[k][j] describes the same chain variable as
/// the forward bank[k][j].
inline DecodeResult backward_decode(const DualSpec& spec, const std::vector<Pmf>& code_pmfs,
                                    const DecodeOptions& opts = {}) {
    auto in = detail::prepared_inputs(spec, code_pmfs);
    const Field& F = spec.code.field;
    const int M = spec.regs;
    const std::size_t T = in.size();

    if (!spec.has_feedback()) {
        // Delay-line machine: past inputs are simply unknown from the
        // backward direction, so every tapped register contributes a
        // uniform factor and the output is uniform unless the input tap
        // is the only one.
        bool any_reg_tap = false;
        for (int i = 1; i <= M; ++i) any_reg_tap = any_reg_tap || spec.taps[static_cast<std::size_t>(i)] != 0;
        DecodeResult res;
        res.info.reserve(T);
        for (std::size_t k = 0; k < T; ++k)
            res.info.push_back(any_reg_tap ? Pmf::uniform(F) : permute(in[k], spec.h0()));
        if (opts.keep_history) {
            res.bank.regs = M;
            res.bank.at.assign(T + 1, std::vector<Pmf>(static_cast<std::size_t>(M), Pmf::uniform(F)));
        }
        return res;
    }

    std::vector<Pmf> reversed(in.rbegin(), in.rend());
    detail::MachineTaps taps{spec.bwd_in_tap, &spec.bwd_out_taps, spec.bwd_in_coeff, spec.bwd_fb_coeff, true};
    DecodeOptions run_opts = opts;
    run_opts.keep_history = opts.keep_history;
    DecodeResult raw = detail::run_machine(spec, reversed, taps, run_opts);

    DecodeResult res;
    res.info.assign(raw.info.rbegin(), raw.info.rend());
    if (opts.keep_history) {
        res.bank.regs = M;
        res.bank.at.resize(T + 1);
        for (std::size_t k = 0; k <= T; ++k) {
            auto& row = raw.bank.at[T - k];
            res.bank.at[k].assign(row.rbegin(), row.rend());
        }
    }
    return res;
}

/// Bidirectional SISO MAP decoding by combining the registers of the
/// forward and backward machines.  Register j of each direction holds
/// the pmf of the same chain variable conditioned on disjoint parts of
/// the frame, so Hadamard products of paired registers feed the usual
/// output convolution.  The current input, the forward top register and
/// the backward head register are tied together by the chain relation
/// w(k) = u(k) + c w(k-M) and are combined jointly; with that term in
/// place the output is the exact bidirectional symbol posterior.
inline std::vector<Pmf> combine_decode(const DualSpec& spec, const std::vector<Pmf>& code_pmfs,
                                       const DecodeOptions& opts = {}) {
    auto in = detail::prepared_inputs(spec, code_pmfs);
    const Field& F = spec.code.field;
    const int M = spec.regs;
    const std::size_t T = in.size();
    const GroupTransform plan(F);

    DecodeOptions hist = opts;
    hist.keep_history = true;

    if (!spec.has_feedback()) {
        // Every tapped variable is a directly observed symbol, a
        // pre-frame zero, or a tail symbol pinned to zero by the
        // termination rule (a delay line flushes with an all-zero
        // tail): the full posterior is one convolution chain over the
        // per-symbol posteriors.
        auto pinned = [&](long long j) -> Pmf {  // 1-based symbol position
            if (j < 1 || j > static_cast<long long>(T) - M) return Pmf::delta(F, 0);
            return in[static_cast<std::size_t>(j - 1)];
        };
        std::vector<Pmf> out;
        out.reserve(T);
        for (std::size_t k = 1; k <= T; ++k) {
            Pmf acc = permute(pinned(static_cast<long long>(k)), spec.h0());
            for (int i = 1; i <= M; ++i) {
                Symbol t = spec.taps[static_cast<std::size_t>(i)];
                if (t == 0) continue;
                Pmf term = pinned(static_cast<long long>(k) - i);
                acc = detail::conv_mode(acc, permute(term, t), opts.mode, plan);
            }
            out.push_back(acc.normalize());
        }
        return out;
    }

    DecodeResult fwd = forward_decode(spec, in, hist);

    // Backward machine history in machine order: regs_after[i][j-1]
    // after consuming i reversed symbols.
    std::vector<Pmf> reversed(in.rbegin(), in.rend());
    detail::MachineTaps btaps{spec.bwd_in_tap, &spec.bwd_out_taps, spec.bwd_in_coeff, spec.bwd_fb_coeff, true};
    DecodeResult bwd = detail::run_machine(spec, reversed, btaps, hist);

    const Symbol c = spec.fb_coeff;
    const Symbol h0 = spec.h0();
    const Symbol tM = spec.out_taps[static_cast<std::size_t>(M)];

    std::vector<Pmf> out;
    out.reserve(T);
    for (std::size_t k = 1; k <= T; ++k) {
        const auto& F_prev = fwd.bank.at[k - 1];         // registers after k-1 inputs
        const auto& B_prev = bwd.bank.at[T - k];         // after consuming inputs k+1..T
        const Pmf& B_head = B_prev[static_cast<std::size_t>(M - 1)];  // chain value w(k), future-conditioned
        const Pmf& F_top = F_prev[static_cast<std::size_t>(M - 1)];   // chain value w(k-M), past-conditioned
        const Pmf& Q = in[k - 1];

        // Joint combination of u(k), w(k-M) and w(k) = u(k) + c w(k-M):
        // the pmf of h0 u(k) + tM w(k-M) under all three measures.
        Pmf chi(F);
        for (int e = 0; e < F.q(); ++e) {
            double pe = Q[static_cast<Symbol>(e)];
            if (pe == 0.0) continue;
            for (int v = 0; v < F.q(); ++v) {
                double pv = F_top[static_cast<Symbol>(v)];
                if (pv == 0.0) continue;
                Symbol wk = F.add(static_cast<Symbol>(e), F.mul(c, static_cast<Symbol>(v)));
                Symbol s = F.add(F.mul(h0, static_cast<Symbol>(e)), F.mul(tM, static_cast<Symbol>(v)));
                chi[s] += pe * pv * B_head[wk];
            }
        }

        Pmf acc = std::move(chi);
        for (int j = 1; j <= M - 1; ++j) {
            Symbol t = spec.out_taps[static_cast<std::size_t>(j)];
            if (t == 0) continue;
            Pmf pair = hadamard(F_prev[static_cast<std::size_t>(j - 1)],
                                B_prev[static_cast<std::size_t>(M - j - 1)])
                           .normalize();
            acc = detail::conv_mode(acc, permute(pair, t), opts.mode, plan);
        }
        out.push_back(acc.normalize());
    }
    return out;
}

/// Element-wise product of the forward and backward decoder outputs,
/// normalized per symbol.  A cheaper but suboptimal combination: the
/// current symbol's evidence enters both factors, so unlike
/// combine_decode this is not the exact posterior in general.
inline std::vector<Pmf> fb_output_product(const DualSpec& spec, const std::vector<Pmf>& code_pmfs,
                                          const DecodeOptions& opts = {}) {
    DecodeOptions o = opts;
    o.keep_history = false;
    DecodeResult fwd = forward_decode(spec, code_pmfs, o);
    DecodeResult bwd = backward_decode(spec, code_pmfs, o);
    std::vector<Pmf> out;
    out.reserve(fwd.info.size());
    for (std::size_t k = 0; k < fwd.info.size(); ++k)
        out.push_back(hadamard(fwd.info[k], bwd.info[k]).normalize());
    return out;
}

/// Hard symbol decisions from soft outputs.
inline std::vector<Symbol> hard_decisions(const std::vector<Pmf>& pmfs) {
    std::vector<Symbol> out;
    out.reserve(pmfs.size());
    for (const auto& p : pmfs) out.push_back(p.argmax());
    return out;
}

}  // namespace dualdec
