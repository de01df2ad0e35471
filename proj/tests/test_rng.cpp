#include <catch2/catch_amalgamated.hpp>

#include "hanrec/rng.hpp"

using namespace hanrec;

// reference values from an independent splitmix64 implementation
TEST_CASE("splitmix64 matches reference sequence") {
  CHECK(mix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(mix64(42) == 0xBDD732262FEB6E95ULL);

  Rng r(0);
  CHECK(r.next_u64() == 0xE220A8397B1DCDAFULL);
  CHECK(r.next_u64() == 0x6E789E6AA1B965F4ULL);
  CHECK(r.next_u64() == 0x06C45D188009454FULL);

  Rng r2(123456789);
  CHECK(r2.next_u64() == 0x223C74D93DEB7679ULL);
  CHECK(r2.next_u64() == 0x7A91DD183971EE2EULL);
}

TEST_CASE("stream derivation is order independent") {
  Rng a = Rng::stream(7, 0);
  CHECK(a.next_u64() == 0x8254FD5B2111DCE4ULL);

  // drawing stream 5 first must not change stream 9
  Rng s9a = Rng::stream(99, 9);
  Rng s5 = Rng::stream(99, 5);
  (void)s5.next_u64();
  Rng s9b = Rng::stream(99, 9);
  CHECK(s9a.next_u64() == s9b.next_u64());

  // distinct indices give distinct streams
  CHECK(Rng::stream(1, 0).next_u64() != Rng::stream(1, 1).next_u64());
}

TEST_CASE("uniform stays in [0,1) and is deterministic") {
  Rng r(31337);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    double u = r.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(std::abs(sum / n - 0.5) < 0.01);

  Rng r1(5), r2(5);
  for (int i = 0; i < 100; ++i) CHECK(r1.uniform() == r2.uniform());
}

TEST_CASE("below covers the full range without excess") {
  Rng r(17);
  std::array<int, 5> counts{};
  for (int i = 0; i < 50000; ++i) counts[r.below(5)]++;
  for (int c : counts) CHECK(c > 9000);
}

TEST_CASE("normal has near-standard moments") {
  Rng r(2024);
  const int n = 200000;
  double sum = 0, sq = 0;
  for (int i = 0; i < n; ++i) {
    double z = r.normal();
    sum += z;
    sq += z * z;
  }
  double mean = sum / n;
  double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("fork gives independent reproducible substreams") {
  Rng base(88);
  Rng f1 = base.fork(1);
  Rng f2 = base.fork(2);
  CHECK(f1.next_u64() != f2.next_u64());
  Rng g1 = Rng(88).fork(1);
  CHECK(Rng(88).fork(1).next_u64() == Rng(88).fork(1).next_u64());
  (void)g1;
}
