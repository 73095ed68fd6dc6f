/**************************************************************************
 * pmf.hpp
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
#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "dualdec/errors.hpp"
#include "dualdec/galois.hpp"

namespace dualdec {

/// Probability mass function over the elements of GF(q): mass[j] is
/// P(X = element j).  Nonnegative, and sums to 1 after normalize().
class Pmf {
  public:
    Pmf(Field field, std::vector<double> mass) : field_(std::move(field)), mass_(std::move(mass)) {
        if (static_cast<int>(mass_.size()) != field_.q())
            throw LengthMismatchError("pmf length does not match field size");
    }

    explicit Pmf(Field field) : field_(std::move(field)), mass_(static_cast<std::size_t>(field_.q()), 0.0) {}

    static Pmf delta(const Field& f, Symbol at) {
        Pmf p(f);
        p.mass_[at] = 1.0;
        return p;
    }

    static Pmf uniform(const Field& f) {
        Pmf p(f);
        std::fill(p.mass_.begin(), p.mass_.end(), 1.0 / f.q());
        return p;
    }

    const Field& field() const { return field_; }
    const std::vector<double>& mass() const { return mass_; }
    std::vector<double>& mass() { return mass_; }
    double operator[](Symbol j) const { return mass_[j]; }
    double& operator[](Symbol j) { return mass_[j]; }
    int size() const { return field_.q(); }

    double sum() const {
        double s = 0.0;
        for (double v : mass_) s += v;
        return s;
    }

    /// Scales to unit sum.  Signals numerical underflow when no mass is
    /// left; the decoders abort the frame in that case.
    Pmf& normalize() {
        double s = sum();
        if (!(s > 0.0)) throw AllZeroMassError("pmf has no mass left to normalize");
        double inv = 1.0 / s;
        for (double& v : mass_) v *= inv;
        return *this;
    }

    Pmf normalized() const {
        Pmf p(*this);
        p.normalize();
        return p;
    }

    /// Index of the largest mass; numerical near-ties (within 1e-12)
    /// resolve to the smallest index so that two arithmetically
    /// different but equivalent decoders take identical hard decisions.
    Symbol argmax() const {
        double best = *std::max_element(mass_.begin(), mass_.end());
        for (std::size_t j = 0; j < mass_.size(); ++j)
            if (mass_[j] >= best - 1e-12) return static_cast<Symbol>(j);
        return 0;
    }

    bool operator==(const Pmf& other) const { return field_ == other.field_ && mass_ == other.mass_; }

  private:
    Field field_;
    std::vector<double> mass_;
};

/// Distribution of X + Y for independent GF(q) variables: the
/// convolution over the additive group, (P*Q)(w) = sum_c P(c) Q(w - c).
inline Pmf convolve(const Pmf& P, const Pmf& Q) {
    if (P.field() != Q.field()) throw FieldMismatchError("convolving pmfs over different fields");
    const Field& f = P.field();
    Pmf out(f);
    for (int c = 0; c < f.q(); ++c) {
        double pc = P[static_cast<Symbol>(c)];
        if (pc == 0.0) continue;
        for (int d = 0; d < f.q(); ++d)
            out[f.add(static_cast<Symbol>(c), static_cast<Symbol>(d))] += pc * Q[static_cast<Symbol>(d)];
    }
    return out;
}

/// Distribution of h*X for nonzero h: moves mass from index j to j*h.
inline Pmf permute(const Pmf& P, Symbol h) {
    if (h == 0) throw ZeroScalarError("pmf permutation by zero");
    const Field& f = P.field();
    if (h == 1) return P;
    Pmf out(f);
    for (int j = 0; j < f.q(); ++j) out[f.mul(static_cast<Symbol>(j), h)] = P[static_cast<Symbol>(j)];
    return out;
}

inline Pmf hadamard(const Pmf& P, const Pmf& Q) {
    if (P.field() != Q.field()) throw FieldMismatchError("combining pmfs over different fields");
    Pmf out(P.field());
    for (int j = 0; j < P.size(); ++j)
        out[static_cast<Symbol>(j)] = P[static_cast<Symbol>(j)] * Q[static_cast<Symbol>(j)];
    return out;
}

/// Character-transform coefficients of a pmf; real-valued (+-1
/// characters) when p = 2, complex otherwise.
struct SpectrumVec {
    Field field;
    std::vector<std::complex<double>> coeffs;
};

/// Diagonalizing transform for addition in GF(p^m): the m-fold tensor
/// product of the size-p DFT over the digit vector.  For p = 2 this is
/// the size-q Walsh-Hadamard transform.  Convolution over the additive
/// group becomes the element-wise product of spectra.
///
/// The transform itself only depends on (p, m); plans are immutable and
/// shared.  Note the cyclic size-q DFT would be wrong here for m > 1:
/// the additive group is (Z_p)^m, not Z_q.
class GroupTransform {
  public:
    explicit GroupTransform(Field field) : field_(std::move(field)) {
        const int p = field_.p();
        omega_.resize(static_cast<std::size_t>(p));
        for (int k = 0; k < p; ++k) {
            double ang = 2.0 * M_PI * k / p;
            omega_[static_cast<std::size_t>(k)] = {std::cos(ang), std::sin(ang)};
        }
    }

    const Field& field() const { return field_; }

    SpectrumVec forward(const Pmf& P) const {
        std::vector<std::complex<double>> buf(P.mass().begin(), P.mass().end());
        transform_in_place(buf);
        return SpectrumVec{field_, std::move(buf)};
    }

    Pmf inverse(const SpectrumVec& S) const {
        std::vector<std::complex<double>> buf(S.coeffs);
        // Inverse = forward with conjugated characters, scaled by 1/q.
        for (auto& v : buf) v = std::conj(v);
        transform_in_place(buf);
        Pmf out(field_);
        const double scale = 1.0 / field_.q();
        for (int j = 0; j < field_.q(); ++j) {
            double re = std::real(std::conj(buf[static_cast<std::size_t>(j)])) * scale;
            out[static_cast<Symbol>(j)] = re < 0.0 ? 0.0 : re;  // clamp rounding residue
        }
        return out;
    }

    /// Real Walsh-Hadamard transform, valid only for p = 2.
    static void wht_in_place(std::vector<double>& buf) {
        const std::size_t n = buf.size();
        for (std::size_t h = 1; h < n; h <<= 1) {
            for (std::size_t i = 0; i < n; i += h << 1) {
                for (std::size_t j = i; j < i + h; ++j) {
                    double a = buf[j], b = buf[j + h];
                    buf[j] = a + b;
                    buf[j + h] = a - b;
                }
            }
        }
    }

    /// Index map s with F[permute(P, h)](t) = F[P](s[t]): the transpose
    /// of the multiply-by-h map acting on character labels.
    std::vector<Symbol> spectrum_permutation(Symbol h) const {
        if (h == 0) throw ZeroScalarError("spectrum permutation by zero");
        const int p = field_.p(), m = field_.m(), q = field_.q();
        // Column i of the multiply-by-h matrix = digits of h * x^i.
        std::vector<std::vector<int>> col(static_cast<std::size_t>(m));
        int basis = 1;
        for (int i = 0; i < m; ++i) {
            Symbol hb = field_.mul(h, static_cast<Symbol>(basis));
            col[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(m));
            for (int j = 0; j < m; ++j) col[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = field_.digit(hb, j);
            basis *= p;
        }
        std::vector<Symbol> map(static_cast<std::size_t>(q));
        for (int t = 0; t < q; ++t) {
            int out = 0, scale = 1;
            for (int i = 0; i < m; ++i) {
                int acc = 0;
                for (int j = 0; j < m; ++j) acc += col[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * field_.digit(static_cast<Symbol>(t), j);
                out += (acc % p) * scale;
                scale *= p;
            }
            map[static_cast<std::size_t>(t)] = static_cast<Symbol>(out);
        }
        return map;
    }

  private:
    Field field_;
    std::vector<std::complex<double>> omega_;

    void transform_in_place(std::vector<std::complex<double>>& buf) const {
        const int p = field_.p(), m = field_.m();
        if (p == 2) {
            const std::size_t n = buf.size();
            for (std::size_t h = 1; h < n; h <<= 1)
                for (std::size_t i = 0; i < n; i += h << 1)
                    for (std::size_t j = i; j < i + h; ++j) {
                        auto a = buf[j], b = buf[j + h];
                        buf[j] = a + b;
                        buf[j + h] = a - b;
                    }
            return;
        }
        // One size-p DFT along each digit axis.
        std::vector<std::complex<double>> slice(static_cast<std::size_t>(p));
        std::size_t stride = 1;
        for (int axis = 0; axis < m; ++axis) {
            const std::size_t block = stride * static_cast<std::size_t>(p);
            for (std::size_t base = 0; base < buf.size(); base += block) {
                for (std::size_t off = 0; off < stride; ++off) {
                    for (int k = 0; k < p; ++k) slice[static_cast<std::size_t>(k)] = buf[base + off + stride * static_cast<std::size_t>(k)];
                    for (int t = 0; t < p; ++t) {
                        std::complex<double> acc = 0.0;
                        for (int k = 0; k < p; ++k) acc += omega_[static_cast<std::size_t>(t * k % p)] * slice[static_cast<std::size_t>(k)];
                        buf[base + off + stride * static_cast<std::size_t>(t)] = acc;
                    }
                }
            }
            stride = block;
        }
    }
};

}  // namespace dualdec
