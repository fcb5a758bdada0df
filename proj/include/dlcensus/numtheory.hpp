#pragma once
//
// numtheory.hpp
//
// Integer primitives shared by every other module: deterministic primality,
// trial-division factorization, totient, divisors, modular powers, linear
// congruences, multiplicative orders and primitive roots.
//
// All functions are pure and reentrant. Arguments are 64-bit unsigned; the
// intermediate products go through unsigned __int128 so any modulus below
// 2^63 is safe.
//

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "dlcensus/errors.hpp"

namespace dlc {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline constexpr u64 kMaxArgument = u64{1} << 63;

struct PrimePower {
  u64 q = 0;
  unsigned alpha = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// n together with its prime factorization, primes strictly increasing.
struct Factored {
  u64 n = 1;
  std::vector<PrimePower> factors;

  bool squarefree() const {
    return std::all_of(factors.begin(), factors.end(),
                       [](const PrimePower& f) { return f.alpha == 1; });
  }

  friend bool operator==(const Factored&, const Factored&) = default;
};

// Solutions of a*u == b (mod modulus): {base + k*step : 0 <= k < count}.
struct CongruenceSolution {
  u64 base = 0;
  u64 step = 1;
  u64 count = 0;

  bool solvable() const { return count != 0; }
  u64 at(u64 k) const { return base + k * step; }

  friend bool operator==(const CongruenceSolution&, const CongruenceSolution&) = default;
};

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 mod_pow(u64 b, u64 e, u64 p) {
  u64 result = 1 % p;
  b %= p;
  while (e != 0) {
    if (e & 1) result = mul_mod(result, b, p);
    b = mul_mod(b, b, p);
    e >>= 1;
  }
  return result;
}

namespace detail {

inline bool miller_rabin_witness(u64 n, u64 a, u64 d, unsigned s) {
  u64 x = mod_pow(a % n, d, n);
  if (x == 1 || x == n - 1) return false;
  for (unsigned r = 1; r < s; ++r) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

}  // namespace detail

// Trial division below 2^32; above that, Miller-Rabin with the first twelve
// prime bases, which has no pseudoprimes below 3.3e24.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  if (n < (u64{1} << 32)) {
    for (u64 d = 3; d * d <= n; d += 2)
      if (n % d == 0) return false;
    return true;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (detail::miller_rabin_witness(n, a, d, s)) return false;
  }
  return true;
}

inline std::vector<u64> next_primes(u64 start, std::size_t k) {
  if (start < 2) start = 2;
  std::vector<u64> out;
  out.reserve(k);
  for (u64 n = start; out.size() < k; ++n) {
    if (n >= kMaxArgument) throw std::overflow_error("next_primes: passed 2^63");
    if (is_prime(n)) out.push_back(n);
  }
  return out;
}

inline Factored factorize(u64 n) {
  if (n == 0) throw InputError("factorize: n must be positive");
  Factored f;
  f.n = n;
  u64 rest = n;
  auto take = [&](u64 q) {
    unsigned alpha = 0;
    while (rest % q == 0) {
      rest /= q;
      ++alpha;
    }
    if (alpha) f.factors.push_back({q, alpha});
  };
  take(2);
  for (u64 q = 3; q <= rest / q; q += 2) take(q);
  if (rest > 1) f.factors.push_back({rest, 1});
  return f;
}

inline u64 euler_phi(const Factored& f) {
  u64 phi = 1;
  for (const auto& [q, alpha] : f.factors) {
    phi *= q - 1;
    for (unsigned i = 1; i < alpha; ++i) phi *= q;
  }
  return phi;
}

inline std::vector<u64> divisors(const Factored& f) {
  std::vector<u64> out{1};
  for (const auto& [q, alpha] : f.factors) {
    const std::size_t prev = out.size();
    u64 qpow = 1;
    for (unsigned b = 1; b <= alpha; ++b) {
      qpow *= q;
      for (std::size_t i = 0; i < prev; ++i) out.push_back(out[i] * qpow);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Totient of a divisor d of f.n, using only the primes of f.
inline u64 phi_of_divisor(const Factored& f, u64 d) {
  u64 phi = 1;
  for (const auto& pf : f.factors) {
    if (d % pf.q != 0) continue;
    d /= pf.q;
    phi *= pf.q - 1;
    while (d % pf.q == 0) {
      d /= pf.q;
      phi *= pf.q;
    }
  }
  return phi;
}

// Inverse of a modulo m, gcd(a, m) = 1, m >= 1.
inline u64 mod_inverse(u64 a, u64 m) {
  if (m == 1) return 0;
  using i128 = __int128;
  i128 old_r = a % m, r = m, old_s = 1, s = 0;
  while (r != 0) {
    const i128 quot = old_r / r;
    i128 tmp = old_r - quot * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quot * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw std::domain_error("mod_inverse: not invertible");
  i128 inv = old_s % static_cast<i128>(m);
  if (inv < 0) inv += m;
  return static_cast<u64>(inv);
}

inline CongruenceSolution solve_linear_congruence(u64 a, u64 b, u64 n) {
  if (n == 0) throw InputError("solve_linear_congruence: modulus must be positive");
  a %= n;
  b %= n;
  const u64 g = std::gcd(a, n);  // gcd(0, n) = n
  if (b % g != 0) return {0, n / g, 0};
  const u64 reduced = n / g;
  const u64 base = mul_mod(b / g, mod_inverse(a / g, reduced), reduced);
  return {base, reduced, g};
}

// Intersection of u == x.base (mod x.step) and u == y.base (mod y.step), both
// progressions living in [0, n) with steps dividing n.
inline CongruenceSolution intersect_progressions(const CongruenceSolution& x,
                                                 const CongruenceSolution& y, u64 n) {
  if (!x.solvable() || !y.solvable()) return {0, n, 0};
  const u64 g = std::gcd(x.step, y.step);
  const u64 diff = (y.base + y.step - x.base % y.step) % y.step;  // y.base - x.base mod y.step
  if (diff % g != 0) return {0, n, 0};
  // x.base + x.step*t == y.base (mod y.step)  =>  (x.step/g) t == diff/g (mod y.step/g)
  const u64 ys = y.step / g;
  const u64 t = mul_mod(diff / g, mod_inverse((x.step / g) % ys, ys), ys);
  const u64 lcm = x.step / g * y.step;
  const u64 base = (x.base + static_cast<u64>(static_cast<u128>(x.step) * t % lcm)) % lcm;
  return {base, lcm, n / lcm};
}

// Order of x in (Z/p)^*, obtained by stripping prime factors from p-1.
inline u64 multiplicative_order(u64 x, u64 p, const Factored& f) {
  u64 t = f.n;
  for (const auto& [q, alpha] : f.factors) {
    for (unsigned i = 0; i < alpha; ++i) {
      if (mod_pow(x, t / q, p) != 1) break;
      t /= q;
    }
  }
  return t;
}

inline u64 smallest_primitive_root(u64 p, const Factored& f) {
  if (p == 2) return 1;
  for (u64 g = 2; g < p; ++g) {
    if (multiplicative_order(g, p, f) == f.n) return g;
  }
  throw InputError("smallest_primitive_root: " + std::to_string(p) + " has no primitive root");
}

}  // namespace dlc
