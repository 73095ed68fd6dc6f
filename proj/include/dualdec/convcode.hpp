/**************************************************************************
 * convcode.hpp
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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dualdec/errors.hpp"
#include "dualdec/galois.hpp"
#include "dualdec/gfpoly.hpp"

namespace dualdec {

/// Rate-1 convolutional code over GF(q) with rational generator
/// g(x) = a(x)/f(x).  Both a and f must have nonzero constant terms so
/// the encoder is realizable and invertible; neither needs to be monic.
/// Memory n = max(deg a, deg f), constraint length K = n + 1.
struct CodeSpec {
    Field field;
    GfPoly a;  // numerator of g
    GfPoly f;  // denominator of g

    CodeSpec(Field fld, GfPoly num, GfPoly den)
        : field(std::move(fld)), a(std::move(num)), f(std::move(den)) {
        if (a.field() != field || f.field() != field)
            throw FieldMismatchError("code polynomials over the wrong field");
        if (a.is_zero() || a.constant_term() == 0)
            throw NoConstantTermError("numerator a(x) needs a nonzero constant term");
        if (f.is_zero() || f.constant_term() == 0)
            throw NoConstantTermError("denominator f(x) needs a nonzero constant term");
    }

    int memory() const { return std::max(a.degree(), f.degree()); }
    int constraint_length() const { return memory() + 1; }

    /// "<field>:(<a>)/(<f>)", with the "/(...)" part omitted for f = 1.
    std::string descriptor() const {
        std::string s = field.descriptor() + ":(" + a.to_string() + ")";
        if (f != GfPoly::one(field)) s += "/(" + f.to_string() + ")";
        return s;
    }

    /// Parses "gf4:(1+3x+2x^2)/(1+x+2x^2)" or "gf4:(1+x)".
    static CodeSpec parse(const std::string& text) {
        auto colon = text.find(':');
        if (colon == std::string::npos) throw ParseError("code descriptor needs '<field>:(<a>)[/(<f>)]': " + text);
        Field fld = Field::parse(text.substr(0, colon));
        std::string body = text.substr(colon + 1);
        auto read_group = [&](std::size_t& pos) {
            if (pos >= body.size() || body[pos] != '(') throw ParseError("expected '(' in code descriptor: " + text);
            auto close = body.find(')', pos);
            if (close == std::string::npos) throw ParseError("unbalanced parentheses in: " + text);
            std::string inner = body.substr(pos + 1, close - pos - 1);
            pos = close + 1;
            return GfPoly::parse(fld, inner);
        };
        std::size_t pos = 0;
        GfPoly a = read_group(pos);
        GfPoly f = GfPoly::one(fld);
        if (pos < body.size()) {
            if (body[pos] != '/') throw ParseError("expected '/' in code descriptor: " + text);
            ++pos;
            f = read_group(pos);
        }
        if (pos != body.size()) throw ParseError("trailing characters in code descriptor: " + text);
        return CodeSpec(fld, std::move(a), std::move(f));
    }
};

/// Shift register contents of encoder C (controller canonical form).
struct EncoderState {
    std::vector<Symbol> regs;  // length n, most recent first

    bool is_zero() const {
        for (Symbol r : regs)
            if (r != 0) return false;
        return true;
    }
};

/// Controller-canonical realization of g(x) = a(x)/f(x): n registers
/// hold the internal sequence w(k-1)..w(k-n) where
/// w(k) = (b(k) - sum_i f_i w(k-i)) / f_0 and c(k) = sum_i a_i w(k-i).
class Encoder {
  public:
    explicit Encoder(CodeSpec code)
        : code_(std::move(code)),
          n_(code_.memory()),
          f0_inv_(code_.field.inv(code_.f.constant_term())),
          state_{std::vector<Symbol>(static_cast<std::size_t>(code_.memory()), 0)} {}

    const CodeSpec& code() const { return code_; }
    const EncoderState& state() const { return state_; }
    void set_state(EncoderState s) {
        if (static_cast<int>(s.regs.size()) != n_) throw LengthMismatchError("encoder state has wrong register count");
        state_ = std::move(s);
    }
    void reset() { std::fill(state_.regs.begin(), state_.regs.end(), 0); }

    Symbol step(Symbol b) {
        const Field& F = code_.field;
        Symbol acc = b;
        for (int i = 1; i <= n_; ++i)
            acc = F.sub(acc, F.mul(code_.f.coeff(i), state_.regs[static_cast<std::size_t>(i - 1)]));
        Symbol w = F.mul(acc, f0_inv_);
        Symbol c = F.mul(code_.a.coeff(0), w);
        for (int i = 1; i <= n_; ++i)
            c = F.add(c, F.mul(code_.a.coeff(i), state_.regs[static_cast<std::size_t>(i - 1)]));
        if (n_ > 0) {
            for (int i = n_ - 1; i > 0; --i) state_.regs[static_cast<std::size_t>(i)] = state_.regs[static_cast<std::size_t>(i - 1)];
            state_.regs[0] = w;
        }
        return c;
    }

    /// State label in [0, q^n): registers as base-q digits, most recent
    /// register least significant.
    std::uint32_t state_label() const {
        std::uint32_t s = 0;
        for (int i = n_ - 1; i >= 0; --i)
            s = s * static_cast<std::uint32_t>(code_.field.q()) + state_.regs[static_cast<std::size_t>(i)];
        return s;
    }

  private:
    CodeSpec code_;
    int n_;
    Symbol f0_inv_;
    EncoderState state_;
};

/// Length-preserving encoding from a given initial state (all-zero by
/// default).
inline std::vector<Symbol> encode(const CodeSpec& code, const std::vector<Symbol>& info,
                                  const EncoderState* initial = nullptr) {
    Encoder enc(code);
    if (initial) enc.set_state(*initial);
    std::vector<Symbol> out;
    out.reserve(info.size());
    for (Symbol b : info) out.push_back(enc.step(b));
    return out;
}

/// Complete transition table of encoder C: q^n states, q transitions
/// out of (and into) each.  Also keeps the reverse adjacency, which is
/// the backward trellis read in the conventional direction.
struct Trellis {
    Field field;
    int memory = 0;
    std::uint32_t num_states = 0;

    // Indexed by state * q + input symbol.
    std::vector<std::uint32_t> next;
    std::vector<Symbol> output;

    struct InEdge {
        std::uint32_t from;
        Symbol input;
        Symbol output;
    };
    // Indexed by state; exactly q entries per state for a rate-1 code.
    std::vector<std::vector<InEdge>> in_edges;

    std::size_t edge(std::uint32_t state, Symbol b) const {
        return static_cast<std::size_t>(state) * static_cast<std::size_t>(field.q()) + b;
    }
};

inline Trellis build_trellis(const CodeSpec& code) {
    const Field& F = code.field;
    const int n = code.memory();
    double states_d = 1.0;
    for (int i = 0; i < n; ++i) states_d *= F.q();
    if (states_d > static_cast<double>(1u << 20)) throw TooManyStatesError("trellis would exceed 2^20 states");

    Trellis t{F};
    t.memory = n;
    t.num_states = 1;
    for (int i = 0; i < n; ++i) t.num_states *= static_cast<std::uint32_t>(F.q());
    t.next.resize(static_cast<std::size_t>(t.num_states) * F.q());
    t.output.resize(static_cast<std::size_t>(t.num_states) * F.q());
    t.in_edges.assign(t.num_states, {});
    for (auto& v : t.in_edges) v.reserve(static_cast<std::size_t>(F.q()));

    Encoder enc(code);
    for (std::uint32_t s = 0; s < t.num_states; ++s) {
        for (int b = 0; b < F.q(); ++b) {
            EncoderState st;
            st.regs.resize(static_cast<std::size_t>(n));
            std::uint32_t v = s;
            for (int i = 0; i < n; ++i) {
                st.regs[static_cast<std::size_t>(i)] = static_cast<Symbol>(v % F.q());
                v /= static_cast<std::uint32_t>(F.q());
            }
            enc.set_state(st);
            Symbol c = enc.step(static_cast<Symbol>(b));
            std::uint32_t ns = enc.state_label();
            t.next[t.edge(s, static_cast<Symbol>(b))] = ns;
            t.output[t.edge(s, static_cast<Symbol>(b))] = c;
            t.in_edges[ns].push_back({s, static_cast<Symbol>(b), c});
        }
    }
    return t;
}

}  // namespace dualdec
