/**************************************************************************
 * oracles.hpp
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

// Independent reference implementations used only by the tests.  They
// deliberately take different code paths from the library: digit-wise
// addition, Russian-peasant multiplication, long division written
// against integer digit vectors, and exhaustive-enumeration posteriors.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dualdec/convcode.hpp"
#include "dualdec/dual.hpp"
#include "dualdec/galois.hpp"
#include "dualdec/pmf.hpp"

namespace oracle {

using dualdec::CodeSpec;
using dualdec::DualSpec;
using dualdec::Field;
using dualdec::Pmf;
using dualdec::Symbol;

/// Digit-wise mod-p sum of the base-p digit expansions.
inline Symbol add_digits(const Field& f, Symbol a, Symbol b) {
    int out = 0, scale = 1;
    int va = a, vb = b;
    for (int i = 0; i < f.m(); ++i) {
        out += ((va % f.p()) + (vb % f.p())) % f.p() * scale;
        va /= f.p();
        vb /= f.p();
        scale *= f.p();
    }
    return static_cast<Symbol>(out);
}

/// Multiplication via shift-and-add: b decomposed into digits, each
/// digit handled by repeated addition of a * x^i, where multiplying by
/// x shifts digits and reduces the overflow against the irreducible.
inline Symbol mul_peasant(const Field& f, Symbol a, Symbol b) {
    const int p = f.p(), m = f.m();
    auto mul_by_x = [&](Symbol v) {
        std::vector<int> d(static_cast<std::size_t>(m) + 1, 0);
        int x = v;
        for (int i = 0; i < m; ++i) {
            d[static_cast<std::size_t>(i) + 1] = x % p;
            x /= p;
        }
        int top = d[static_cast<std::size_t>(m)];
        if (top != 0)
            for (int i = 0; i < m; ++i)
                d[static_cast<std::size_t>(i)] =
                    ((d[static_cast<std::size_t>(i)] - top * f.irreducible()[static_cast<std::size_t>(i)]) % p + p) % p;
        int out = 0, scale = 1;
        for (int i = 0; i < m; ++i) {
            out += d[static_cast<std::size_t>(i)] * scale;
            scale *= p;
        }
        return static_cast<Symbol>(out);
    };

    Symbol result = 0;
    Symbol shifted = a;
    int vb = b;
    for (int i = 0; i < m; ++i) {
        int digit = vb % p;
        vb /= p;
        for (int rep = 0; rep < digit; ++rep) result = add_digits(f, result, shifted);
        if (m == 1) break;
        shifted = mul_by_x(shifted);
    }
    if (m == 1) {
        // Prime field: plain integer arithmetic.
        return static_cast<Symbol>(static_cast<int>(a) * static_cast<int>(b) % p);
    }
    return result;
}

/// Cyclic convolution mod q, valid as a pmf-convolution oracle for
/// prime fields only.
inline Pmf cyclic_convolve(const Pmf& P, const Pmf& Q) {
    const Field& f = P.field();
    Pmf out(f);
    for (int i = 0; i < f.q(); ++i)
        for (int j = 0; j < f.q(); ++j) out[static_cast<Symbol>((i + j) % f.q())] += P[static_cast<Symbol>(i)] * Q[static_cast<Symbol>(j)];
    return out;
}

inline Pmf random_pmf(const Field& f, std::mt19937_64& rng) {
    Pmf p(f);
    std::uniform_real_distribution<double> uni(0.05, 1.0);
    for (int j = 0; j < f.q(); ++j) p[static_cast<Symbol>(j)] = uni(rng);
    return p.normalize();
}

inline dualdec::GfPoly random_poly(const Field& f, int max_deg, bool nonzero_constant, std::mt19937_64& rng) {
    for (;;) {
        std::vector<Symbol> coeffs(static_cast<std::size_t>(max_deg) + 1);
        for (auto& c : coeffs) c = static_cast<Symbol>(rng() % static_cast<std::uint64_t>(f.q()));
        dualdec::GfPoly poly(f, std::move(coeffs));
        if (poly.is_zero()) continue;
        if (nonzero_constant && poly.constant_term() == 0) continue;
        return poly;
    }
}

/// Exhaustive Bayes posteriors: enumerate every information sequence of
/// length L, terminate it, weight it by the product of the per-symbol
/// channel pmfs, and accumulate per-position symbol masses.  Exact by
/// construction; only feasible for q^L in the thousands.
inline std::vector<Pmf> enumerate_posteriors(const CodeSpec& code, const DualSpec& dual, int L,
                                             const std::vector<Pmf>& pmfs) {
    const Field& f = code.field;
    const int q = f.q();
    const std::size_t T = pmfs.size();
    std::vector<Pmf> acc(T, Pmf(f));

    std::vector<Symbol> info(static_cast<std::size_t>(L), 0);
    long long total = 1;
    for (int i = 0; i < L; ++i) total *= q;

    for (long long pattern = 0; pattern < total; ++pattern) {
        long long v = pattern;
        for (int i = 0; i < L; ++i) {
            info[static_cast<std::size_t>(i)] = static_cast<Symbol>(v % q);
            v /= q;
        }
        auto frame = dualdec::encode_terminated(code, dual, info);
        if (frame.code_syms.size() != T) throw dualdec::LengthMismatchError("oracle frame length mismatch");
        double weight = 1.0;
        for (std::size_t k = 0; k < T; ++k) weight *= pmfs[k][frame.code_syms[k]];
        if (weight == 0.0) continue;
        for (std::size_t k = 0; k < T; ++k) {
            Symbol b = k < static_cast<std::size_t>(L) ? info[k] : frame.info_tail[k - static_cast<std::size_t>(L)];
            acc[k][b] += weight;
        }
    }
    for (auto& p : acc) p.normalize();
    return acc;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace oracle
