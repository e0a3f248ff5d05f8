#include <catch_amalgamated.hpp>

#include <set>

#include "rcb/rng.hpp"

using namespace rcb;

TEST_CASE("philox4x32-10 known answers") {
    // Random123 kat_vectors
    CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) ==
          PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("counter rng is a pure function of its cell") {
    CounterRng a(42, 7, Stream::reward), b(42, 7, Stream::reward);
    for (int i = 0; i < 20; ++i) CHECK(a() == b());
    CounterRng c(42, 8, Stream::reward), d(42, 7, Stream::context), e(43, 7, Stream::reward);
    CounterRng f(42, 7, Stream::reward);
    const auto first = f();
    CHECK(c() != first);
    CHECK(d() != first);
    CHECK(e() != first);
}

TEST_CASE("uniform draws lie in [0, 1) and spread out") {
    CounterRng rng(1, 1, Stream::fixture);
    std::set<int> bins;
    double sum = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        bins.insert(static_cast<int>(u * 10));
        sum += u;
    }
    CHECK(bins.size() == 10);
    CHECK(std::abs(sum / 20000 - 0.5) < 0.01);
}
