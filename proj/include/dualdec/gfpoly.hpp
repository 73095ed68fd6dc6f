/**************************************************************************
 * gfpoly.hpp
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

#include <cctype>
#include <string>
#include <utility>
#include <vector>

#include "dualdec/errors.hpp"
#include "dualdec/galois.hpp"

namespace dualdec {

/// Univariate polynomial over GF(q), ascending coefficients with no
/// trailing zeros (the zero polynomial has an empty coefficient list).
class GfPoly {
  public:
    GfPoly(Field field, std::vector<Symbol> coeffs) : field_(std::move(field)), coeffs_(std::move(coeffs)) {
        trim();
    }

    explicit GfPoly(Field field) : field_(std::move(field)) {}

    static GfPoly zero(const Field& f) { return GfPoly(f); }
    static GfPoly one(const Field& f) { return GfPoly(f, {1}); }
    static GfPoly constant(const Field& f, Symbol c) { return GfPoly(f, {c}); }

    /// x^k with coefficient c.
    static GfPoly monomial(const Field& f, int k, Symbol c) {
        std::vector<Symbol> v(static_cast<std::size_t>(k) + 1, 0);
        v.back() = c;
        return GfPoly(f, std::move(v));
    }

    const Field& field() const { return field_; }
    const std::vector<Symbol>& coeffs() const { return coeffs_; }

    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }  // -1 for zero

    Symbol coeff(int i) const {
        return (i >= 0 && i < static_cast<int>(coeffs_.size())) ? coeffs_[static_cast<std::size_t>(i)] : Symbol{0};
    }
    Symbol constant_term() const { return coeff(0); }
    Symbol leading() const { return is_zero() ? Symbol{0} : coeffs_.back(); }

    friend GfPoly operator+(const GfPoly& u, const GfPoly& v) {
        u.check_same_field(v);
        std::vector<Symbol> out(std::max(u.coeffs_.size(), v.coeffs_.size()), 0);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = u.field_.add(u.coeff(static_cast<int>(i)), v.coeff(static_cast<int>(i)));
        return GfPoly(u.field_, std::move(out));
    }

    friend GfPoly operator-(const GfPoly& u, const GfPoly& v) {
        u.check_same_field(v);
        std::vector<Symbol> out(std::max(u.coeffs_.size(), v.coeffs_.size()), 0);
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = u.field_.sub(u.coeff(static_cast<int>(i)), v.coeff(static_cast<int>(i)));
        return GfPoly(u.field_, std::move(out));
    }

    /// Coefficient convolution under field arithmetic.
    friend GfPoly operator*(const GfPoly& u, const GfPoly& v) {
        u.check_same_field(v);
        if (u.is_zero() || v.is_zero()) return GfPoly(u.field_);
        std::vector<Symbol> out(u.coeffs_.size() + v.coeffs_.size() - 1, 0);
        for (std::size_t i = 0; i < u.coeffs_.size(); ++i) {
            if (u.coeffs_[i] == 0) continue;
            for (std::size_t j = 0; j < v.coeffs_.size(); ++j)
                out[i + j] = u.field_.add(out[i + j], u.field_.mul(u.coeffs_[i], v.coeffs_[j]));
        }
        return GfPoly(u.field_, std::move(out));
    }

    GfPoly scaled(Symbol s) const {
        std::vector<Symbol> out(coeffs_);
        for (auto& c : out) c = field_.mul(c, s);
        return GfPoly(field_, std::move(out));
    }

    bool operator==(const GfPoly& v) const { return field_ == v.field_ && coeffs_ == v.coeffs_; }
    bool operator!=(const GfPoly& v) const { return !(*this == v); }

    /// Long division: u = q*v + r with deg r < deg v.
    static std::pair<GfPoly, GfPoly> divmod(const GfPoly& u, const GfPoly& v) {
        u.check_same_field(v);
        if (v.is_zero()) throw DivisionByZeroError("polynomial division by zero");
        if (u.degree() < v.degree()) return {GfPoly(u.field_), u};
        const Field& f = u.field_;
        Symbol lead_inv = f.inv(v.leading());
        std::vector<Symbol> rem(u.coeffs_);
        std::vector<Symbol> quot(static_cast<std::size_t>(u.degree() - v.degree()) + 1, 0);
        for (int k = u.degree(); k >= v.degree(); --k) {
            Symbol c = rem[static_cast<std::size_t>(k)];
            if (c == 0) continue;
            Symbol qc = f.mul(c, lead_inv);
            quot[static_cast<std::size_t>(k - v.degree())] = qc;
            for (int i = 0; i <= v.degree(); ++i) {
                auto& r = rem[static_cast<std::size_t>(k - v.degree() + i)];
                r = f.sub(r, f.mul(qc, v.coeff(i)));
            }
        }
        return {GfPoly(f, std::move(quot)), GfPoly(f, std::move(rem))};
    }

    /// Human form, e.g. "1+3x+2x^2"; "0" for the zero polynomial.
    std::string to_string() const;

    /// Parses either the human form "1+3x+2x^2" or a plain ascending
    /// coefficient list "1,3,2".
    static GfPoly parse(const Field& f, const std::string& text);

  private:
    Field field_;
    std::vector<Symbol> coeffs_;

    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    void check_same_field(const GfPoly& v) const {
        if (field_ != v.field_) throw FieldMismatchError("polynomials over different fields");
    }
};

/// Complementary polynomial of a(x): the smallest N > deg a together
/// with a nonzero constant c and z(x) such that a(x) z(x) = 1 - c x^N.
/// With that normalization the rational form f z / (a z) realizes as a
/// shift register whose only feedback is the single delayed tap scaled
/// by c (in characteristic 2 with monic a this is the familiar
/// a(x) z(x) = 1 + x^N with c = 1).  For constant a the result
/// degenerates to z = 1/a, N = 0, and there is no feedback at all.
struct Complementary {
    GfPoly z;
    int l = 0;        // deg z
    int order = 0;    // N
    Symbol feedback;  // c
};

inline Complementary min_complementary(const GfPoly& a) {
    const Field& f = a.field();
    if (a.is_zero() || a.constant_term() == 0)
        throw NoConstantTermError("complementary polynomial requires a nonzero constant term");

    if (a.degree() == 0) {
        // a is a unit; a * (1/a) = 1 and the delay line disappears.
        return Complementary{GfPoly::constant(f, f.inv(a.constant_term())), 0, 0, Symbol{1}};
    }

    // Scan N keeping x^N mod a(x) incrementally: one shift and one
    // reduction step per candidate.  Accepts the first N > deg a whose
    // residue is a nonzero constant e, i.e. a | x^N - e.  Constant
    // residues recur with a fixed period <= q^n - 1, so the first one
    // past deg a shows up within q^n - 1 + deg a steps.
    const int n = a.degree();
    Symbol lead_inv = f.inv(a.leading());
    std::vector<Symbol> res(static_cast<std::size_t>(n), 0);  // residue coeffs, degree < n
    res[0] = 1;                                               // x^0
    long long bound = 1;
    for (int i = 0; i < n; ++i) bound *= f.q();
    bound += n - 1;  // q^n - 1 + deg a

    for (long long N = 1; N <= bound; ++N) {
        // Multiply the residue by x, then reduce the overflow term.
        Symbol top = res[static_cast<std::size_t>(n - 1)];
        for (int i = n - 1; i > 0; --i) res[static_cast<std::size_t>(i)] = res[static_cast<std::size_t>(i - 1)];
        res[0] = 0;
        if (top != 0) {
            Symbol scale = f.mul(top, lead_inv);
            for (int i = 0; i < n; ++i)
                res[static_cast<std::size_t>(i)] = f.sub(res[static_cast<std::size_t>(i)], f.mul(scale, a.coeff(i)));
        }
        if (N <= n) continue;
        bool constant = true;
        for (int i = 1; i < n; ++i) constant = constant && res[static_cast<std::size_t>(i)] == 0;
        if (!constant || res[0] == 0) continue;

        Symbol e = res[0];
        Symbol c = f.inv(e);
        // a | x^N - e, so a z = 1 - c x^N for z = (1 - c x^N) / a.
        GfPoly target = GfPoly::one(f) - GfPoly::monomial(f, static_cast<int>(N), c);
        auto [z, rem] = GfPoly::divmod(target, a);
        if (!rem.is_zero())
            throw SearchExhaustedError("internal error: complementary residue did not divide");
        return Complementary{z, z.degree(), static_cast<int>(N), c};
    }
    throw SearchExhaustedError("no complementary polynomial up to degree q^n - 1 (is the input valid?)");
}

inline std::string GfPoly::to_string() const {
    if (is_zero()) return "0";
    std::string s;
    bool first = true;
    for (int i = 0; i <= degree(); ++i) {
        Symbol c = coeff(i);
        if (c == 0) continue;
        if (!first) s += "+";
        first = false;
        if (i == 0) {
            s += std::to_string(static_cast<int>(c));
        } else {
            if (c != 1) s += std::to_string(static_cast<int>(c));
            s += "x";
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s;
}

inline GfPoly GfPoly::parse(const Field& f, const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw ParseError("empty polynomial");

    if (s.find('x') == std::string::npos && s.find(',') != std::string::npos) {
        // Ascending coefficient list.
        std::vector<Symbol> coeffs;
        std::size_t pos = 0;
        while (pos <= s.size()) {
            auto comma = s.find(',', pos);
            std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            int v = 0;
            try {
                v = std::stoi(tok);
            } catch (const std::exception&) {
                throw ParseError("bad coefficient '" + tok + "'");
            }
            if (v < 0 || v >= f.q()) throw ParseError("coefficient out of range: " + tok);
            coeffs.push_back(static_cast<Symbol>(v));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return GfPoly(f, std::move(coeffs));
    }

    // Term form: [coef][x[^exp]] joined by '+'.
    std::vector<Symbol> coeffs;
    auto set_coeff = [&](int exp, int v) {
        if (v < 0 || v >= f.q()) throw ParseError("coefficient out of range in '" + text + "'");
        if (exp >= static_cast<int>(coeffs.size())) coeffs.resize(static_cast<std::size_t>(exp) + 1, 0);
        auto& c = coeffs[static_cast<std::size_t>(exp)];
        c = f.add(c, static_cast<Symbol>(v));
    };
    if (s.back() == '+') throw ParseError("trailing '+' in '" + text + "'");
    std::size_t pos = 0;
    while (pos < s.size()) {
        auto plus = s.find('+', pos);
        std::string term = s.substr(pos, plus == std::string::npos ? std::string::npos : plus - pos);
        if (term.empty()) throw ParseError("empty term in '" + text + "'");
        auto xpos = term.find('x');
        int coef = 1, exp = 0;
        if (xpos == std::string::npos) {
            try {
                coef = std::stoi(term);
            } catch (const std::exception&) {
                throw ParseError("bad term '" + term + "'");
            }
        } else {
            if (xpos > 0) {
                try {
                    coef = std::stoi(term.substr(0, xpos));
                } catch (const std::exception&) {
                    throw ParseError("bad term '" + term + "'");
                }
            }
            exp = 1;
            if (xpos + 1 < term.size()) {
                if (term[xpos + 1] != '^') throw ParseError("bad term '" + term + "'");
                try {
                    exp = std::stoi(term.substr(xpos + 2));
                } catch (const std::exception&) {
                    throw ParseError("bad exponent in '" + term + "'");
                }
                if (exp < 0) throw ParseError("negative exponent in '" + term + "'");
            }
        }
        set_coeff(exp, coef);
        if (plus == std::string::npos) break;
        pos = plus + 1;
    }
    return GfPoly(f, std::move(coeffs));
}

}  // namespace dualdec
