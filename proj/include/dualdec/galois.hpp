/**************************************************************************
 * galois.hpp
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
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "dualdec/errors.hpp"

namespace dualdec {

/// Element of GF(p^m), identified by its integer label in [0, q).
/// The base-p digit expansion of the label gives the polynomial
/// coefficients of the element; for p = 2 the label is the bit pattern.
using Symbol = std::uint8_t;

/// Table-driven arithmetic in GF(p^m), 2 <= q = p^m <= 256.
///
/// Addition is digit-wise mod p (XOR for p = 2), multiplication follows
/// a monic irreducible polynomial of degree m over GF(p).  Full q x q
/// add/mul tables plus inverse and negation tables are built once at
/// construction; a Field handle is a cheap shared reference to them and
/// is immutable thereafter, so it can be shared freely across threads.
class Field {
  public:
    /// GF(p^m) with an explicit irreducible polynomial, ascending
    /// coefficients c0..cm over GF(p).  Pass an empty vector to use the
    /// built-in default for (p, m).  The polynomial is validated by
    /// trial division.
    Field(int p, int m, const std::vector<int>& irreducible)
        : impl_(build(p, m, irreducible)) {}

    /// GF(p^m) with the built-in default irreducible.
    Field(int p, int m) : Field(p, m, {}) {}

    /// GF(q) for q a prime power, default irreducible.
    static Field gf(int q) {
        auto [p, m] = factor_prime_power(q);
        return Field(p, m);
    }

    /// Parses "gf<q>" or "gf<p>^<m>:<c0,c1,...,cm>".
    static Field parse(const std::string& descriptor);

    int p() const { return impl_->p; }
    int m() const { return impl_->m; }
    int q() const { return impl_->q; }
    const std::vector<int>& irreducible() const { return impl_->irreducible; }

    Symbol add(Symbol a, Symbol b) const { return impl_->add[idx(a, b)]; }
    Symbol sub(Symbol a, Symbol b) const { return add(a, neg(b)); }
    Symbol mul(Symbol a, Symbol b) const { return impl_->mul[idx(a, b)]; }
    Symbol neg(Symbol a) const { return impl_->neg[a]; }

    Symbol inv(Symbol a) const {
        if (a == 0) throw DivisionByZeroError("inverse of zero in GF(" + std::to_string(q()) + ")");
        return impl_->inv[a];
    }

    Symbol div(Symbol a, Symbol b) const { return mul(a, inv(b)); }

    /// The bijection j -> j*h on element labels induced by multiplying
    /// by a nonzero constant h.  Applying it to a pmf index set gives
    /// the distribution of h*X.
    std::vector<Symbol> mul_permutation(Symbol h) const {
        if (h == 0) throw ZeroScalarError("multiplication by zero is not a permutation");
        std::vector<Symbol> pi(static_cast<std::size_t>(q()));
        for (int j = 0; j < q(); ++j) pi[static_cast<std::size_t>(j)] = mul(static_cast<Symbol>(j), h);
        return pi;
    }

    /// Base-p digit i of an element label (coefficient of x^i).
    int digit(Symbol a, int i) const {
        int v = a;
        for (int k = 0; k < i; ++k) v /= p();
        return v % p();
    }

    /// "gf<q>" when the default irreducible is in use, otherwise the
    /// explicit "gf<p>^<m>:<c0,...>" form.
    std::string descriptor() const;

    bool operator==(const Field& other) const {
        return impl_ == other.impl_ ||
               (impl_->p == other.impl_->p && impl_->m == other.impl_->m &&
                impl_->irreducible == other.impl_->irreducible);
    }
    bool operator!=(const Field& other) const { return !(*this == other); }

    static bool is_prime(int n) {
        if (n < 2) return false;
        for (int d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

  private:
    struct Impl {
        int p = 0;
        int m = 0;
        int q = 0;
        bool default_irreducible = true;
        std::vector<int> irreducible;  // ascending, size m+1, monic
        std::vector<Symbol> add;       // q*q
        std::vector<Symbol> mul;       // q*q
        std::vector<Symbol> neg;       // q
        std::vector<Symbol> inv;       // q, inv[0] unused
    };

    std::shared_ptr<const Impl> impl_;

    std::size_t idx(Symbol a, Symbol b) const {
        return static_cast<std::size_t>(a) * static_cast<std::size_t>(q()) + b;
    }

    static std::pair<int, int> factor_prime_power(int q) {
        if (q < 2 || q > 256) throw UnsupportedSizeError("field size must be in [2, 256], got " + std::to_string(q));
        for (int p = 2; p <= q; ++p) {
            if (!is_prime(p) || q % p != 0) continue;
            int m = 0, v = q;
            while (v % p == 0) {
                v /= p;
                ++m;
            }
            if (v == 1) return {p, m};
            break;
        }
        throw UnsupportedSizeError(std::to_string(q) + " is not a prime power");
    }

    static const std::vector<int>& default_irreducible(int p, int m);
    static bool is_irreducible_mod_p(const std::vector<int>& poly, int p);
    static std::shared_ptr<const Impl> build(int p, int m, std::vector<int> irreducible);
};

inline bool Field::is_irreducible_mod_p(const std::vector<int>& poly, int p) {
    const int deg = static_cast<int>(poly.size()) - 1;
    if (deg < 1) return false;
    // Trial division by every monic polynomial of degree 1..deg/2.
    auto mod_p = [p](long long v) { return static_cast<int>(((v % p) + p) % p); };
    for (int d = 1; 2 * d <= deg; ++d) {
        long long count = 1;
        for (int i = 0; i < d; ++i) count *= p;
        for (long long lo = 0; lo < count; ++lo) {
            std::vector<int> divisor(static_cast<std::size_t>(d) + 1, 0);
            long long v = lo;
            for (int i = 0; i < d; ++i) {
                divisor[static_cast<std::size_t>(i)] = static_cast<int>(v % p);
                v /= p;
            }
            divisor[static_cast<std::size_t>(d)] = 1;
            // Long division remainder of poly by divisor, mod p.
            std::vector<int> rem(poly);
            while (static_cast<int>(rem.size()) - 1 >= d) {
                int k = static_cast<int>(rem.size()) - 1;
                int coef = rem[static_cast<std::size_t>(k)];
                if (coef != 0) {
                    for (int i = 0; i <= d; ++i) {
                        auto& r = rem[static_cast<std::size_t>(k - d + i)];
                        r = mod_p(r - static_cast<long long>(coef) * divisor[static_cast<std::size_t>(i)]);
                    }
                }
                rem.pop_back();
            }
            bool zero = true;
            for (int r : rem) zero = zero && r == 0;
            if (zero) return false;
        }
    }
    return true;
}

inline const std::vector<int>& Field::default_irreducible(int p, int m) {
    struct Entry {
        int p, m;
        std::vector<int> coeffs;  // ascending c0..cm
    };
    static const std::vector<Entry> table = {
        {2, 2, {1, 1, 1}},
        {2, 3, {1, 1, 0, 1}},
        {2, 4, {1, 1, 0, 0, 1}},
        {2, 5, {1, 0, 1, 0, 0, 1}},
        {2, 6, {1, 1, 0, 1, 1, 0, 1}},
        {2, 7, {1, 1, 0, 0, 0, 0, 0, 1}},
        {2, 8, {1, 0, 1, 1, 1, 0, 0, 0, 1}},
        {3, 2, {2, 2, 1}},
        {3, 3, {1, 2, 0, 1}},
        {3, 4, {2, 0, 0, 2, 1}},
        {3, 5, {1, 2, 0, 0, 0, 1}},
        {5, 2, {2, 4, 1}},
        {5, 3, {3, 3, 0, 1}},
        {7, 2, {3, 6, 1}},
        {11, 2, {2, 7, 1}},
        {13, 2, {2, 12, 1}},
    };
    for (const auto& e : table)
        if (e.p == p && e.m == m) return e.coeffs;
    throw UnsupportedSizeError("no default irreducible polynomial for p=" + std::to_string(p) +
                               ", m=" + std::to_string(m));
}

inline std::shared_ptr<const Field::Impl> Field::build(int p, int m, std::vector<int> irreducible) {
    if (!is_prime(p)) throw NotPrimeError("field characteristic must be prime, got " + std::to_string(p));
    if (m < 1) throw UnsupportedSizeError("extension degree must be >= 1");
    long long q = 1;
    for (int i = 0; i < m; ++i) {
        q *= p;
        if (q > 256) throw UnsupportedSizeError("field size exceeds 256");
    }
    if (q < 2) throw UnsupportedSizeError("field size must be >= 2");

    auto impl = std::make_shared<Impl>();
    impl->p = p;
    impl->m = m;
    impl->q = static_cast<int>(q);

    if (m > 1) {
        impl->default_irreducible = irreducible.empty();
        if (irreducible.empty()) irreducible = default_irreducible(p, m);
        if (static_cast<int>(irreducible.size()) != m + 1)
            throw ReduciblePolynomialError("irreducible polynomial must have degree m");
        for (auto& c : irreducible) c = ((c % p) + p) % p;
        if (irreducible.back() == 0)
            throw ReduciblePolynomialError("irreducible polynomial must have degree m");
        if (irreducible.back() != 1) {
            // Scale to monic; the quotient ring is unchanged.
            int lead = irreducible.back();
            int lead_inv = 0;
            for (int v = 1; v < p; ++v)
                if (v * lead % p == 1) lead_inv = v;
            for (auto& c : irreducible) c = c * lead_inv % p;
        }
        if (!is_irreducible_mod_p(irreducible, p))
            throw ReduciblePolynomialError("polynomial is reducible over GF(" + std::to_string(p) + ")");
        impl->irreducible = irreducible;
    } else {
        impl->irreducible = {0, 1};  // x, unused for prime fields
    }

    const int Q = impl->q;
    impl->add.resize(static_cast<std::size_t>(Q) * Q);
    impl->mul.resize(static_cast<std::size_t>(Q) * Q);
    impl->neg.resize(static_cast<std::size_t>(Q));
    impl->inv.resize(static_cast<std::size_t>(Q), 0);

    auto digits_of = [&](int a) {
        std::vector<int> d(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            d[static_cast<std::size_t>(i)] = a % p;
            a /= p;
        }
        return d;
    };
    auto label_of = [&](const std::vector<int>& d) {
        int a = 0;
        for (int i = m - 1; i >= 0; --i) a = a * p + d[static_cast<std::size_t>(i)];
        return a;
    };

    for (int a = 0; a < Q; ++a) {
        auto da = digits_of(a);
        for (auto& v : da) v = (p - v) % p;
        impl->neg[static_cast<std::size_t>(a)] = static_cast<Symbol>(label_of(da));
    }

    for (int a = 0; a < Q; ++a) {
        auto da = digits_of(a);
        for (int b = 0; b < Q; ++b) {
            auto db = digits_of(b);
            std::vector<int> ds(static_cast<std::size_t>(m));
            for (int i = 0; i < m; ++i)
                ds[static_cast<std::size_t>(i)] = (da[static_cast<std::size_t>(i)] + db[static_cast<std::size_t>(i)]) % p;
            impl->add[static_cast<std::size_t>(a) * Q + b] = static_cast<Symbol>(label_of(ds));

            // Polynomial product of the digit vectors, reduced mod the
            // irreducible (a no-op for prime fields, where m = 1).
            std::vector<int> prod(static_cast<std::size_t>(2 * m - 1), 0);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    prod[static_cast<std::size_t>(i + j)] =
                        (prod[static_cast<std::size_t>(i + j)] +
                         da[static_cast<std::size_t>(i)] * db[static_cast<std::size_t>(j)]) %
                        p;
            for (int k = 2 * m - 2; k >= m; --k) {
                int coef = prod[static_cast<std::size_t>(k)];
                if (coef == 0) continue;
                prod[static_cast<std::size_t>(k)] = 0;
                for (int i = 0; i < m; ++i) {
                    auto& r = prod[static_cast<std::size_t>(k - m + i)];
                    r = ((r - coef * impl->irreducible[static_cast<std::size_t>(i)]) % p + p) % p;
                }
            }
            prod.resize(static_cast<std::size_t>(m));
            impl->mul[static_cast<std::size_t>(a) * Q + b] = static_cast<Symbol>(label_of(prod));
        }
    }

    for (int a = 1; a < Q; ++a)
        for (int b = 1; b < Q; ++b)
            if (impl->mul[static_cast<std::size_t>(a) * Q + b] == 1) impl->inv[static_cast<std::size_t>(a)] = static_cast<Symbol>(b);

    return impl;
}

inline Field Field::parse(const std::string& descriptor) {
    if (descriptor.rfind("gf", 0) != 0 && descriptor.rfind("GF", 0) != 0)
        throw ParseError("field descriptor must start with 'gf': " + descriptor);
    std::string body = descriptor.substr(2);
    auto caret = body.find('^');
    if (caret == std::string::npos) {
        std::size_t pos = 0;
        int q = 0;
        try {
            q = std::stoi(body, &pos);
        } catch (const std::exception&) {
            throw ParseError("bad field descriptor: " + descriptor);
        }
        if (pos != body.size()) throw ParseError("bad field descriptor: " + descriptor);
        return gf(q);
    }
    auto colon = body.find(':');
    if (colon == std::string::npos || colon < caret)
        throw ParseError("explicit-irreducible descriptor needs 'gf<p>^<m>:<c0,...>': " + descriptor);
    int p = 0, m = 0;
    try {
        p = std::stoi(body.substr(0, caret));
        m = std::stoi(body.substr(caret + 1, colon - caret - 1));
    } catch (const std::exception&) {
        throw ParseError("bad field descriptor: " + descriptor);
    }
    std::vector<int> coeffs;
    std::stringstream ss(body.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            coeffs.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw ParseError("bad coefficient '" + tok + "' in " + descriptor);
        }
    }
    return Field(p, m, coeffs);
}

inline std::string Field::descriptor() const {
    if (m() == 1 || impl_->default_irreducible) return "gf" + std::to_string(q());
    std::string s = "gf" + std::to_string(p()) + "^" + std::to_string(m()) + ":";
    for (std::size_t i = 0; i < impl_->irreducible.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(impl_->irreducible[i]);
    }
    return s;
}

}  // namespace dualdec
