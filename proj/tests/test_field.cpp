#include <catch2/catch_amalgamated.hpp>

#include "psl2/field.hpp"

using namespace psl2;

namespace {

std::vector<uint32_t> primes_up_to(uint32_t n) {
  std::vector<uint32_t> out;
  for (uint32_t q = 5; q <= n; ++q)
    if (is_prime(q)) out.push_back(q);
  return out;
}

}  // namespace

TEST_CASE("prime construction validates input") {
  CHECK_THROWS_AS(Prime::make(4), DomainError);
  CHECK_THROWS_AS(Prime::make(9), DomainError);
  CHECK_THROWS_AS(Prime::make(2), DomainError);
  CHECK_THROWS_AS(Prime::make(3), DomainError);
  CHECK_THROWS_AS(Prime::make(1u << 15), CapacityError);
  Prime P = Prime::make(13);
  CHECK(P.p == 13);
  CHECK(P.mod8 == 5);
  CHECK(P.mod10 == 3);
  CHECK(P.mod40 == 13);
}

TEST_CASE("modular inverse") {
  Prime P7 = Prime::make(7);
  CHECK(P7.inv(3) == 5);
  Prime P13 = Prime::make(13);
  CHECK(P13.inv(8) == 5);
  CHECK_THROWS_AS(P7.inv(0), DomainError);

  for (uint32_t p : {5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u}) {
    Prime P = Prime::make(p);
    for (uint32_t a = 1; a < p; ++a) {
      uint32_t b = P.inv(a);
      CHECK(P.mul(a, b) == 1);
      CHECK(P.inv(b) == a);
    }
  }
}

TEST_CASE("reduce handles negative inputs") {
  Prime P = Prime::make(11);
  CHECK(P.reduce(-1) == 10);
  CHECK(P.reduce(-22) == 0);
  CHECK(P.reduce(23) == 1);
  CHECK(P.sub(3, 7) == 7);
}

TEST_CASE("square roots mod p") {
  Prime P17 = Prime::make(17);
  auto r = sqrt_mod(2, P17);
  REQUIRE(r.has_value());
  CHECK(r->first == 6);
  CHECK(r->second == 11);

  Prime P5 = Prime::make(5);
  CHECK_FALSE(sqrt_mod(2, P5).has_value());

  Prime P7 = Prime::make(7);
  auto z = sqrt_mod(0, P7);
  REQUIRE(z.has_value());
  CHECK(z->first == 0);
  CHECK(z->second == 0);
}

TEST_CASE("square roots agree with Euler criterion and square back") {
  for (uint32_t p : primes_up_to(200)) {
    Prime P = Prime::make(p);
    for (uint32_t a = 0; a < p; ++a) {
      auto r = sqrt_mod(a, P);
      if (a == 0 || P.is_square(a)) {
        REQUIRE(r.has_value());
        CHECK(P.mul(r->first, r->first) == a);
        CHECK(P.mul(r->second, r->second) == a);
        CHECK(r->first <= r->second);
        if (a != 0) CHECK(P.add(r->first, r->second) == 0);
      } else {
        CHECK_FALSE(r.has_value());
      }
    }
  }
}

TEST_CASE("2 is a square exactly when p = +-1 mod 8") {
  for (uint32_t p : primes_up_to(200)) {
    Prime P = Prime::make(p);
    bool has = sqrt_mod(2, P).has_value();
    CHECK(has == (P.mod8 == 1 || P.mod8 == 7));
  }
}

TEST_CASE("multiplicative order") {
  Prime P17 = Prime::make(17);
  CHECK(multiplicative_order(4, P17) == 4);
  Prime P7 = Prime::make(7);
  CHECK(multiplicative_order(2, P7) == 3);
  CHECK_THROWS_AS(multiplicative_order(0, P7), DomainError);

  for (uint32_t p : {5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u}) {
    Prime P = Prime::make(p);
    for (uint32_t a = 1; a < p; ++a) {
      uint32_t n = multiplicative_order(a, P);
      CHECK((p - 1) % n == 0);
      CHECK(P.pow(a, n) == 1);
      for (uint32_t d : divisors(n))
        if (d < n) CHECK(P.pow(a, d) != 1);
    }
  }
}

TEST_CASE("primitive roots") {
  CHECK(primitive_root(Prime::make(7)) == 3);
  CHECK(primitive_root(Prime::make(5)) == 2);
  CHECK(primitive_root(Prime::make(13)) == 2);
  for (uint32_t p : primes_up_to(100)) {
    Prime P = Prime::make(p);
    CHECK(multiplicative_order(primitive_root(P), P) == p - 1);
  }
}

TEST_CASE("divisors and prime factors") {
  CHECK(divisors(12) == std::vector<uint32_t>{1, 2, 3, 4, 6, 12});
  CHECK(divisors(1) == std::vector<uint32_t>{1});
  CHECK(prime_factors(360) == std::vector<uint32_t>{2, 3, 5});
  CHECK(prime_factors(97) == std::vector<uint32_t>{97});
}

TEST_CASE("field element wrapper") {
  Prime P = Prime::make(13);
  Fp a{5, P}, b{9, P};
  CHECK((a + b).v == 1);
  CHECK((a - b).v == 9);
  CHECK((a * b).v == 6);
  CHECK((a / b).v == P.mul(5, P.inv(9)));
  CHECK((-a).v == 8);
  CHECK(a.inverse().v == 8);
  CHECK(a.pow(3).v == P.pow(5, 3));
  Prime Q = Prime::make(17);
  Fp c{5, Q};
  CHECK_THROWS_AS(a + c, UsageError);
}
