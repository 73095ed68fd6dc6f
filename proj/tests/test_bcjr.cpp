#include <catch2/catch_amalgamated.hpp>

#include "dualdec/bcjr.hpp"
#include "dualdec/channel.hpp"
#include "dualdec/dual.hpp"
#include "oracles.hpp"

using namespace dualdec;

namespace {

std::vector<Pmf> delta_pmfs(const Field& f, const std::vector<Symbol>& syms) {
    std::vector<Pmf> out;
    out.reserve(syms.size());
    for (Symbol s : syms) out.push_back(Pmf::delta(f, s));
    return out;
}

std::vector<Pmf> noisy_pmfs(const CodeSpec& code, const DualSpec& dual, int L, double ebn0,
                            std::mt19937_64& rng, std::vector<Symbol>* info_out = nullptr) {
    std::vector<Symbol> info(static_cast<std::size_t>(L));
    for (auto& s : info) s = static_cast<Symbol>(rng() % static_cast<std::uint64_t>(code.field.q()));
    auto frame = encode_terminated(code, dual, info);
    if (info_out) *info_out = info;

    const bool pow2 = (code.field.q() & (code.field.q() - 1)) == 0;
    double rate = static_cast<double>(L) / (L + dual.regs);
    double sigma = std::sqrt(1.0 / (2.0 * rate * std::pow(10.0, ebn0 / 10.0)));
    if (pow2) {
        int bits = 0;
        while ((1 << bits) < code.field.q()) ++bits;
        auto s = modulate_bpsk(code.field, frame.code_syms, bits);
        add_noise(s, sigma, rng);
        return demap_bpsk(code.field, s, bits, sigma);
    }
    auto s = modulate_pam(code.field, frame.code_syms);
    add_noise(s, sigma, rng);
    return demap_pam(code.field, s, sigma);
}

}  // namespace

TEST_CASE("forward metrics") {
    CodeSpec code = CodeSpec::parse("gf4:(1+x)");
    DualSpec dual = dual_taps(code);
    Trellis t = build_trellis(code);

    SECTION("noiseless deltas track the state path") {
        std::vector<Symbol> info = {1, 2, 3, 0, 2};
        auto frame = encode_terminated(code, dual, info);
        auto alphas = bcjr_forward(t, delta_pmfs(code.field, frame.code_syms));
        Encoder enc(code);
        CHECK(alphas[0][0] == 1.0);
        std::vector<Symbol> full(info);
        full.insert(full.end(), frame.info_tail.begin(), frame.info_tail.end());
        for (std::size_t k = 0; k < full.size(); ++k) {
            enc.step(full[k]);
            for (std::uint32_t s = 0; s < t.num_states; ++s)
                CHECK(alphas[k + 1][s] == Catch::Approx(s == enc.state_label() ? 1.0 : 0.0).margin(1e-12));
        }
    }

    SECTION("uniform inputs spread uniformly over reachable states") {
        std::vector<Pmf> uni(6, Pmf::uniform(code.field));
        auto alphas = bcjr_forward(t, uni);
        for (std::size_t k = 1; k < alphas.size(); ++k)
            for (std::uint32_t s = 0; s < t.num_states; ++s)
                CHECK(alphas[k][s] == Catch::Approx(0.25).margin(1e-12));
    }

    SECTION("single step spreads the input pmf over states") {
        auto alphas = bcjr_forward(t, {Pmf(code.field, {0.4, 0.3, 0.2, 0.1})});
        // From the zero state, input b drives the state to b with output b.
        CHECK(alphas[1][0] == Catch::Approx(0.4));
        CHECK(alphas[1][1] == Catch::Approx(0.3));
        CHECK(alphas[1][2] == Catch::Approx(0.2));
        CHECK(alphas[1][3] == Catch::Approx(0.1));
    }
}

TEST_CASE("backward metrics mirror the forward ones") {
    CodeSpec code = CodeSpec::parse("gf4:(1+x)");
    DualSpec dual = dual_taps(code);
    Trellis t = build_trellis(code);

    std::vector<Symbol> info = {3, 1, 0, 2};
    auto frame = encode_terminated(code, dual, info);
    auto betas = bcjr_backward(t, delta_pmfs(code.field, frame.code_syms));
    CHECK(betas.back()[0] == 1.0);
    // The true state path keeps positive beta in the noiseless case.
    Encoder enc(code);
    std::vector<Symbol> full(info);
    full.insert(full.end(), frame.info_tail.begin(), frame.info_tail.end());
    for (std::size_t k = 0; k < full.size(); ++k) {
        CHECK(betas[k][enc.state_label()] > 0.0);
        enc.step(full[k]);
    }

    std::vector<Pmf> uni(5, Pmf::uniform(code.field));
    auto betas_u = bcjr_backward(t, uni);
    for (std::uint32_t s = 0; s < t.num_states; ++s) CHECK(betas_u[0][s] == Catch::Approx(0.25).margin(1e-12));
}

TEST_CASE("posteriors equal exhaustive Bayes enumeration") {
    std::mt19937_64 rng(41);
    // Codes small enough to enumerate: q^L <= 4096.  The reference runs
    // on the expanded realization, whose zero-end states are exactly
    // the frames the termination rule can produce.
    for (const char* desc : {"gf4:(1+x)", "gf4:(1+3x+2x^2)", "gf4:(1+x+2x^2)", "gf4:(1+x)/(1+2x)",
                             "gf4:(1+3x+2x^2)/(1+x+2x^2)", "gf5:(1+2x)", "gf8:(1+x+x^2)"}) {
        CodeSpec code = CodeSpec::parse(desc);
        DualSpec dual = dual_taps(code);
        Trellis t = build_trellis(expanded_code(dual));
        int L = code.field.q() == 4 ? 6 : (code.field.q() == 5 ? 5 : 4);

        for (int trial = 0; trial < 4; ++trial) {
            auto pmfs = noisy_pmfs(code, dual, L, 1.0, rng);
            auto fast = bcjr_posteriors(t, pmfs);
            auto slow = oracle::enumerate_posteriors(code, dual, L, pmfs);
            REQUIRE(fast.size() == slow.size());
            for (std::size_t k = 0; k < fast.size(); ++k)
                for (int j = 0; j < code.field.q(); ++j) {
                    double a = fast[k][static_cast<Symbol>(j)], b = slow[k][static_cast<Symbol>(j)];
                    CHECK(std::abs(a - b) <= 1e-12 * std::max({std::abs(a), std::abs(b), 1e-30}));
                }
        }
    }
}

TEST_CASE("posteriors on noiseless and uniform frames") {
    CodeSpec code = CodeSpec::parse("gf4:(1+x+2x^2)");
    DualSpec dual = dual_taps(code);
    Trellis t = build_trellis(expanded_code(dual));

    std::vector<Symbol> info = {2, 0, 3, 1, 1, 0};
    auto frame = encode_terminated(code, dual, info);
    auto post = bcjr_posteriors(t, delta_pmfs(code.field, frame.code_syms));
    std::vector<Symbol> full(info);
    full.insert(full.end(), frame.info_tail.begin(), frame.info_tail.end());
    for (std::size_t k = 0; k < full.size(); ++k) {
        CHECK(post[k][full[k]] == Catch::Approx(1.0).margin(1e-12));
    }

    // All-uniform inputs give uniform posteriors away from the frame
    // end; the last few positions are pinned by the termination.
    std::vector<Pmf> uni(12, Pmf::uniform(code.field));
    auto post_u = bcjr_posteriors(t, uni);
    for (std::size_t k = 0; k + static_cast<std::size_t>(t.memory) < post_u.size(); ++k)
        for (int j = 0; j < 4; ++j)
            CHECK(post_u[k][static_cast<Symbol>(j)] == Catch::Approx(0.25).margin(1e-12));

    // Every emitted pmf sums to one.
    std::mt19937_64 rng(43);
    auto noisy = noisy_pmfs(code, dual, 16, 2.0, rng);
    for (const auto& p : bcjr_posteriors(t, noisy)) CHECK(p.sum() == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("unterminated observations are rejected") {
    CodeSpec code = CodeSpec::parse("gf4:(1+x)");
    Trellis t = build_trellis(code);
    // Noiseless pmfs of a sequence that cannot end at the zero state:
    // a single nonzero symbol with no tail.
    auto pmfs = delta_pmfs(code.field, {1});
    CHECK_THROWS_AS(bcjr_posteriors(t, pmfs), NotTerminatedError);
    CHECK_THROWS_AS(bcjr_posteriors(t, std::vector<Pmf>{}), LengthMismatchError);
}
