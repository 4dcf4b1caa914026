#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <random>
#include <vector>

#include "iconoclasm/ans.hpp"
#include "iconoclasm/quantizer.hpp"
#include "iconoclasm/rng.hpp"

using namespace iconoclasm;

namespace {

bool head_ok(const Message& m) { return m.head() >= Message::kHeadLow; }

// Random table at the given precision (every frequency >= 1).
QuantizedCategorical random_table(std::mt19937_64& rng, std::size_t n, unsigned precision) {
  std::vector<double> p(n);
  std::exponential_distribution<double> e(1.0);
  double s = 0.0;
  for (auto& v : p) s += (v = e(rng) + 1e-12);
  for (auto& v : p) v /= s;
  return quantize(p, precision);
}

}  // namespace

TEST(MessageInit, EmptyBaseMessage) {
  const Message m = Message::init(0, 0);
  EXPECT_EQ(m.head(), std::uint64_t{1} << 32);
  EXPECT_TRUE(m.tail().empty());
  EXPECT_EQ(m.length_bits(), 64u);
}

TEST(MessageInit, FourWordsIsDeterministic) {
  const Message a = Message::init(4, 0);
  const Message b = Message::init(4, 0);
  EXPECT_EQ(a.tail_words(), 4u);
  EXPECT_EQ(a.length_bits(), 192u);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, Message::init(4, 1));
}

TEST(MessageInit, ShorterBaseIsTopPrefixOfLonger) {
  const Message small = Message::init(3, 42);
  const Message big = Message::init(10, 42);
  for (std::size_t d = 0; d < 3; ++d) {
    EXPECT_EQ(small.tail()[small.tail_words() - 1 - d], big.tail()[big.tail_words() - 1 - d]);
  }
}

TEST(MessagePush, RejectsInvalidSpans) {
  Message m;
  EXPECT_THROW(m.push(FreqSpan{0, 0, 16}), ContractViolation);
  EXPECT_THROW(m.push(FreqSpan{65535, 2, 16}), ContractViolation);
  EXPECT_THROW(m.push(FreqSpan{0, 1, 0}), ContractViolation);
  EXPECT_THROW(m.push(FreqSpan{0, 1, 40}), ContractViolation);
  EXPECT_EQ(m, Message());
}

TEST(MessagePush, HalfProbabilitySymbolFitsInHead) {
  Message m = Message::init(0, 0);
  m.push(FreqSpan{0, 1u << 15, 16});
  EXPECT_EQ(m.length_bits(), 64u);
  EXPECT_EQ(m.head(), std::uint64_t{1} << 33);
}

TEST(MessagePush, DeterministicSymbolsCostNothing) {
  Message m = Message::init(4, 0);
  const std::size_t before = m.length_bits();
  for (int i = 0; i < 1000; ++i) m.push(FreqSpan{0, 1u << 16, 16});
  EXPECT_LE(m.length_bits() - before, 64u);
  EXPECT_TRUE(head_ok(m));
}

TEST(MessagePush, UniformByteCostsEightBits) {
  Message m = Message::init(4, 0);
  const std::size_t before = m.length_bits();
  const double frac_before = m.fractional_length_bits();
  SplitMix64 rng(9);
  for (int i = 0; i < 1000; ++i) {
    const auto sym = static_cast<std::uint32_t>(rng() % 256);
    m.push(FreqSpan{sym * 256, 256, 16});
    ASSERT_TRUE(head_ok(m));
  }
  const std::size_t grown = m.length_bits() - before;
  EXPECT_GE(grown, 8000u);
  EXPECT_LE(grown, 8064u);
  EXPECT_NEAR(m.fractional_length_bits() - frac_before, 8000.0, 1e-3);
}

TEST(MessagePop, InverseOfPushOnRandomTriples) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 2000; ++trial) {
    const unsigned precision = 8 + rng() % 17;
    const std::size_t n = 1 + rng() % 50;
    const auto table = random_table(rng, n, precision);
    Message m = Message::init(rng() % 6, rng());
    for (int warm = 0; warm < static_cast<int>(rng() % 20); ++warm) push_symbol(m, table, rng() % n);
    const Message before = m;
    const std::size_t s = rng() % n;
    push_symbol(m, table, s);
    ASSERT_TRUE(head_ok(m));
    ASSERT_EQ(pop_symbol(m, table), s);
    ASSERT_EQ(m, before);
  }
}

TEST(MessagePop, PushRestoresWhatPopTook) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 2000; ++trial) {
    const unsigned precision = 8 + rng() % 17;
    const auto table = random_table(rng, 1 + rng() % 40, precision);
    Message m = Message::init(2 + rng() % 4, rng());
    const Message before = m;
    const std::size_t s = pop_symbol(m, table);
    ASSERT_TRUE(head_ok(m));
    push_symbol(m, table, s);
    ASSERT_EQ(m, before);
  }
}

TEST(MessagePop, UniformTwoSymbolIdentity) {
  const auto table = quantize(std::vector<double>{0.5, 0.5}, 16);
  Message m = Message::init(16, 7);
  const std::size_t s = pop_symbol(m, table);
  push_symbol(m, table, s);
  EXPECT_EQ(m, Message::init(16, 7));
}

TEST(MessagePop, PopsSampleTheTable) {
  const auto table = quantize(std::vector<double>(256, 1.0 / 256), 16);
  Message m = Message::init(64, 3);
  std::vector<int> counts(256, 0);
  const int n = 100;
  for (int i = 0; i < n; ++i) ++counts[pop_symbol(m, table)];
  const double expected = n / 256.0;
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  const double limit = boost::math::quantile(boost::math::chi_squared(255), 0.999);
  EXPECT_LT(chi2, limit);
}

TEST(MessagePop, UnderflowIsAnError) {
  const auto table = quantize(std::vector<double>(256, 1.0 / 256), 16);
  Message m = Message::init(0, 0);
  try {
    for (int i = 0; i < 10; ++i) pop_symbol(m, table);
    FAIL() << "expected TailUnderflow";
  } catch (const TailUnderflow& e) {
    EXPECT_NE(std::string(e.what()).find("init_words"), std::string::npos);
  }
}

TEST(MessagePop, RejectsInconsistentLocate) {
  Message m = Message::init(4, 0);
  EXPECT_THROW(m.pop(16, [](std::uint32_t) { return std::pair{0, FreqSpan{1, 1, 16}}; }), ContractViolation);
}

TEST(MessageLength, CountsHeadAndWords) {
  EXPECT_EQ(Message::init(0, 0).length_bits(), 64u);
  EXPECT_EQ(Message::init(4, 0).length_bits(), 192u);
  EXPECT_EQ(Message::init(7, 3).length_bits(), 64u + 7 * 32);
}

TEST(MessageRate, DyadicStreamWithinInformationPlusHead) {
  // Probabilities 1/2, 1/4, 1/8, 1/8 are exact at any precision >= 3.
  const auto table = quantize(std::vector<double>{0.5, 0.25, 0.125, 0.125}, 16);
  SplitMix64 rng(11);
  Message m = Message::init(4, 0);
  const std::size_t before = m.length_bits();
  double info = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const std::size_t s = rng() % 8 < 4 ? 0 : (rng() % 2 ? 1 : 2 + rng() % 2);
    info += table.code_length_bits(s);
    push_symbol(m, table, s);
  }
  EXPECT_LE(static_cast<double>(m.length_bits() - before), info + 64.0);
}

TEST(MessageRate, PerOpOverheadIsTiny) {
  std::mt19937_64 rng(5);
  const auto table = random_table(rng, 37, 16);
  std::discrete_distribution<std::size_t> draw(table.freqs().begin(), table.freqs().end());
  Message m = Message::init(4, 0);
  const double start = m.fractional_length_bits();
  double info = 0.0;
  const int ops = 200000;
  for (int i = 0; i < ops; ++i) {
    const std::size_t s = draw(rng);
    info += table.code_length_bits(s);
    push_symbol(m, table, s);
  }
  const double eps = (m.fractional_length_bits() - start - info) / ops;
  EXPECT_LE(eps, 1e-4);
  EXPECT_GE(eps, -1e-6);
}

TEST(MessageSerialize, RoundTripsRandomMessages) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    Message m = Message::init(rng() % 20, rng());
    const auto table = random_table(rng, 1 + rng() % 30, 12);
    for (int k = 0; k < static_cast<int>(rng() % 200); ++k) push_symbol(m, table, rng() % table.size());
    EXPECT_EQ(Message::deserialize(m.serialize()), m);
  }
  EXPECT_EQ(Message::deserialize(Message::init(4, 9).serialize()), Message::init(4, 9));
}

TEST(MessageSerialize, LayoutIsLittleEndian) {
  const Message m = Message::init(1, 0);
  const auto bytes = m.serialize();
  ASSERT_EQ(bytes.size(), 16u);
  const std::vector<std::uint8_t> head{0, 0, 0, 0, 1, 0, 0, 0};
  EXPECT_TRUE(std::equal(head.begin(), head.end(), bytes.begin()));
  EXPECT_EQ(bytes[8], 1);
  EXPECT_EQ(bytes[9] | bytes[10] | bytes[11], 0);
  const std::uint32_t w = m.tail()[0];
  EXPECT_EQ(bytes[12], w & 0xFF);
  EXPECT_EQ(bytes[15], w >> 24);
}

TEST(MessageSerialize, RejectsMalformedInput) {
  auto bytes = Message::init(2, 1).serialize();
  EXPECT_THROW(Message::deserialize(std::span(bytes).first(bytes.size() - 1)), FormatError);
  EXPECT_THROW(Message::deserialize(std::span(bytes).first(5)), FormatError);
  bytes[4] = 0;  // head = 0, below 2^32
  EXPECT_THROW(Message::deserialize(bytes), FormatError);
}
