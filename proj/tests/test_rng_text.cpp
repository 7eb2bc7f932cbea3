#include <array>
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <set>

#include "fengshui/rng.hpp"
#include "fengshui/text.hpp"

using namespace fengshui;

TEST_CASE("splitmix64 matches the reference outputs") {
    // Reference sequence for state 0 from the SplitMix64 reference code.
    std::uint64_t state = 0;
    auto next = [&] {
        state += 0x9E3779B97F4A7C15ULL;
        return splitmix64_mix(state);
    };
    CHECK(next() == 0xE220A8397B1DCDAFULL);
    CHECK(next() == 0x6E789E6AA1B965F4ULL);
    CHECK(next() == 0x06C45D188009454FULL);
}

TEST_CASE("counter rng is a pure function of key and counter") {
    CounterRng a(42), b(42), c(43);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        CHECK(x == b.next());
        CHECK(x != c.next());
    }
    CHECK(a.counter() == 100);
}

TEST_CASE("derive_seed separates indices and labels") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(7, i));
    CHECK(seen.size() == 1000);
    CHECK(derive_seed(7, std::string_view("a,b")) != derive_seed(7, std::string_view("a,c")));
    CHECK(derive_seed(7, std::string_view("a,b")) == derive_seed(7, std::string_view("a,b")));
    CHECK(derive_seed(7, std::string_view("x")) != derive_seed(8, std::string_view("x")));
}

TEST_CASE("uniform, below and normal stay in range with plausible moments") {
    CounterRng rng(2024);
    double sum = 0, sumsq = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));

    std::array<int, 7> counts{};
    for (int i = 0; i < 70000; ++i) {
        const auto k = rng.below(7);
        REQUIRE(k < 7);
        ++counts[k];
    }
    for (int c : counts) CHECK(std::abs(c - 10000) < 500);

    sum = 0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        REQUIRE(std::isfinite(z));
        sum += z;
        sumsq += z * z;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(sumsq / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("format_double round-trips bit-exactly") {
    std::mt19937_64 gen(11);
    std::uniform_int_distribution<std::uint64_t> bits;
    int checked = 0;
    while (checked < 20000) {
        const std::uint64_t b = bits(gen);
        double v;
        std::memcpy(&v, &b, sizeof v);
        if (!std::isfinite(v)) continue;
        const auto back = text::parse_double(text::format_double(v));
        REQUIRE(back.has_value());
        std::uint64_t bb;
        std::memcpy(&bb, &*back, sizeof bb);
        REQUIRE(bb == b);
        ++checked;
    }
    CHECK(text::format_double(0.1) == "0.1");
    CHECK(text::format_double(10000.0) == "10000");
}

TEST_CASE("number parsing rejects junk and non-finite values") {
    CHECK_FALSE(text::parse_double("abc"));
    CHECK_FALSE(text::parse_double("1.5x"));
    CHECK_FALSE(text::parse_double(""));
    CHECK_FALSE(text::parse_double("nan"));
    CHECK_FALSE(text::parse_double("inf"));
    CHECK(text::parse_double(" 2.5 ") == 2.5);
    CHECK(text::parse_double("+3") == 3.0);
    CHECK(text::parse_int("42") == 42);
    CHECK_FALSE(text::parse_int("4.2"));
    CHECK(text::parse_bool("true") == true);
    CHECK(text::parse_bool("0") == false);
    CHECK_FALSE(text::parse_bool("maybe"));
}

TEST_CASE("line splitting tolerates CRLF and a missing final newline") {
    const auto ls = text::lines("a\r\nb\nc");
    REQUIRE(ls.size() == 3);
    CHECK(ls[0] == "a");
    CHECK(ls[1] == "b");
    CHECK(ls[2] == "c");
    CHECK(text::split("x,,y", ',').size() == 3);
}
