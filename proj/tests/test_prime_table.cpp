#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "primestrings/error.hpp"
#include "primestrings/primality.hpp"
#include "primestrings/prime_table.hpp"

using namespace primestrings;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const char* tag) {
  auto dir = fs::temp_directory_path() / (std::string("primestrings-test-") + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("sieve_range small windows") {
  CHECK(sieve_range(0, 30) == std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29});
  CHECK(sieve_range(24, 29).empty());
  CHECK(sieve_range(2, 3) == std::vector<std::uint64_t>{2});
  CHECK(sieve_range(10, 10).empty());
  CHECK_THROWS_AS(sieve_range(5, 4), Error);
}

TEST_CASE("sieve agrees with trial division on random samples") {
  const auto table = PrimeTable::build(2'000'000);
  std::mt19937_64 rng(12345);
  std::uniform_int_distribution<std::uint64_t> dist(0, 1'999'999);
  for (int i = 0; i < 10'000; ++i) {
    const auto n = dist(rng);
    REQUIRE_MESSAGE(table.is_prime(n) == oracle::is_prime(n), n);
  }
}

TEST_CASE("segment size and worker count do not change the primes") {
  const auto reference = sieve_range(1'000'000, 1'300'000);
  for (std::size_t seg : {std::size_t{64}, std::size_t{1000}, std::size_t{4096}}) {
    for (unsigned w : {1u, 3u, 8u}) {
      CHECK(sieve_range(1'000'000, 1'300'000, {.segment_bytes = seg, .workers = w}) == reference);
    }
  }
  const auto a = PrimeTable::build(500'001, {.segment_bytes = 128, .workers = 1});
  const auto b = PrimeTable::build(500'001, {.segment_bytes = 8192, .workers = 4});
  CHECK(std::equal(a.bitmap().begin(), a.bitmap().end(), b.bitmap().begin(), b.bitmap().end()));
}

TEST_CASE("table lookups fall back to Miller-Rabin above the limit") {
  const auto table = PrimeTable::build(1000);
  CHECK(table.is_prime(997));
  CHECK(table.is_prime(1009));
  CHECK_FALSE(table.is_prime(1001));
  CHECK(table.primes(990, 5000) == std::vector<std::uint64_t>{991, 997});
}

TEST_CASE("deterministic Miller-Rabin") {
  CHECK_FALSE(is_prime(293930));
  CHECK(is_prime(18446744073709551557ull));
  CHECK_FALSE(is_prime(3215031751ull));  // strong pseudoprime to 2, 3, 5, 7
  CHECK_FALSE(is_prime(3825123056546413051ull));
  for (std::uint64_t n = 0; n < 20'000; ++n) REQUIRE(is_prime(n) == oracle::is_prime(n));

  const auto big = is_prime_big(mpz_class("170141183460469231731687303715884105727"));
  CHECK(big.prime);
  CHECK(big.probabilistic);
  CHECK_FALSE(is_prime_big(mpz_class(91)).prime);
}

TEST_CASE("count_primes_ap matches a direct scan") {
  CHECK(count_primes_ap(100, 4).counts[1] == 11);
  CHECK_THROWS_AS(count_primes_ap(100, 0), Error);
  const auto flags = oracle::prime_flags(100'001);
  for (std::uint64_t X : {2ull, 97ull, 1000ull, 54321ull, 100'000ull}) {
    for (std::uint64_t q = 1; q <= 50; ++q) {
      std::vector<std::uint64_t> expect(q);
      for (std::uint64_t n = 2; n <= X; ++n) expect[n % q] += flags[n];
      const auto got = count_primes_ap(X, q);
      REQUIRE(got.counts == expect);
    }
  }
}

TEST_CASE("residue counts partition pi(X)") {
  const auto flags = oracle::prime_flags(100'001);
  std::uint64_t pi = 0;
  for (bool f : flags) pi += f;
  for (std::uint64_t q = 1; q <= 50; ++q) CHECK(count_primes_ap(100'000, q).total() == pi);
}

TEST_CASE("cache file round trip and rejection") {
  const auto dir = scratch_dir("cache");
  const auto table = PrimeTable::build(100'003);
  table.save(dir / "t.spc");
  const auto loaded = PrimeTable::load(dir / "t.spc");
  CHECK(loaded.limit() == table.limit());
  CHECK(std::equal(loaded.bitmap().begin(), loaded.bitmap().end(), table.bitmap().begin()));

  auto corrupt = [&](std::size_t offset, char value) {
    fs::copy_file(dir / "t.spc", dir / "bad.spc", fs::copy_options::overwrite_existing);
    std::fstream f(dir / "bad.spc", std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(static_cast<std::streamoff>(offset));
    f.put(value);
  };
  corrupt(0, 'X');
  CHECK_THROWS_AS(PrimeTable::load(dir / "bad.spc"), Error);
  corrupt(4, 2);
  CHECK_THROWS_AS(PrimeTable::load(dir / "bad.spc"), Error);
  fs::resize_file(dir / "t.spc", 100);
  CHECK_THROWS_AS(PrimeTable::load(dir / "t.spc"), Error);

  // header layout
  table.save(dir / "h.spc");
  std::ifstream in(dir / "h.spc", std::ios::binary);
  char header[16];
  in.read(header, 16);
  CHECK(std::string(header, 4) == "SPC1");
  CHECK(header[4] == 1);
  std::uint64_t limit = 0;
  std::memcpy(&limit, header + 8, 8);
  CHECK(limit == 100'003);
}

TEST_CASE("PrimeCache rebuilds silently") {
  const auto dir = scratch_dir("obtain");
  const PrimeCache cache(dir);
  const auto first = cache.obtain(50'000);
  CHECK(fs::exists(cache.file_for(50'000)));
  std::ofstream(cache.file_for(50'000), std::ios::trunc) << "garbage";
  const auto second = cache.obtain(50'000);
  CHECK(second.primes(0, 100) == first.primes(0, 100));
  CHECK(fs::file_size(cache.file_for(50'000)) > 16);
  CHECK_FALSE(PrimeCache().enabled());
}
