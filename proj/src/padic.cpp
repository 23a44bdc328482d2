#include "rfdlab/padic.hpp"

#include <algorithm>
#include <utility>

namespace rfdlab {

namespace {

BigInt mod_nonneg(const BigInt& a, const BigInt& q) { return ((a % q) + q) % q; }

BigInt mod_inverse(const BigInt& a, const BigInt& q) {
  BigInt r0 = q, r1 = mod_nonneg(a, q);
  BigInt s0 = 0, s1 = 1;
  while (r1 != 0) {
    const BigInt t = r0 / r1;
    r0 -= t * r1;
    std::swap(r0, r1);
    s0 -= t * s1;
    std::swap(s0, s1);
  }
  if (r0 != 1) throw std::invalid_argument("element not invertible mod q");
  return mod_nonneg(s0, q);
}

BigInt next_prime_after(BigInt q) {
  do {
    ++q;
  } while (!is_prime(q));
  return q;
}

BigInt pow_int(const BigInt& b, int e) {
  BigInt out = 1;
  for (int i = 0; i < e; ++i) out *= b;
  return out;
}

void check_same_prime(const PAdicRational& a, const PAdicRational& b) {
  if (a.p != b.p)
    throw std::invalid_argument("mixed primes in p-adic arithmetic");
}

// det of a BigInt matrix reduced mod q, by cofactor expansion.
BigInt residue_det(const std::vector<std::vector<BigInt>>& a, const BigInt& q) {
  const int n = static_cast<int>(a.size());
  if (n == 1) return mod_nonneg(a[0][0], q);
  BigInt out = 0;
  for (int c = 0; c < n; ++c) {
    std::vector<std::vector<BigInt>> minor(n - 1,
                                           std::vector<BigInt>(n - 1, 0));
    for (int r = 1; r < n; ++r)
      for (int cc = 0, k = 0; cc < n; ++cc)
        if (cc != c) minor[r - 1][k++] = a[r][cc];
    const BigInt term = a[0][c] * residue_det(minor, q);
    out += (c % 2 == 0) ? term : -term;
  }
  return mod_nonneg(out, q);
}

}  // namespace

bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (BigInt d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

PAdicRational::PAdicRational(int prime, BigInt numer, int expo)
    : p(prime), k(std::move(numer)), m(expo) {
  if (p < 2 || !is_prime(BigInt(p)))
    throw std::invalid_argument("denominator base must be prime");
  if (m < 0) throw std::invalid_argument("negative denominator exponent");
  if (k == 0) {
    m = 0;
    return;
  }
  while (m > 0 && k % p == 0) {
    k /= p;
    --m;
  }
}

std::string PAdicRational::str() const {
  std::string out = k.str();
  if (m > 0) out += "/" + pow_int(p, m).str();
  return out;
}

PAdicRational PAdicRational::operator+(const PAdicRational& o) const {
  check_same_prime(*this, o);
  const int mm = std::max(m, o.m);
  return {p, k * pow_int(p, mm - m) + o.k * pow_int(p, mm - o.m), mm};
}

PAdicRational PAdicRational::operator-(const PAdicRational& o) const {
  return *this + (-o);
}

PAdicRational PAdicRational::operator*(const PAdicRational& o) const {
  check_same_prime(*this, o);
  return {p, k * o.k, m + o.m};
}

BigInt mod_residue(const PAdicRational& x, const BigInt& q) {
  if (q < 2) throw std::invalid_argument("modulus must be at least 2");
  if (gcd(q, BigInt(x.p)) != 1)
    throw std::invalid_argument("modulus shares a factor with the prime");
  if (x.k == 0) return 0;
  const BigInt den = powm(BigInt(x.p), BigInt(x.m), q);
  return mod_nonneg(mod_nonneg(x.k, q) * mod_inverse(den, q), q);
}

ZpWitness rf_witness_zp(const PAdicRational& x) {
  if (x.is_zero())
    throw std::invalid_argument("zero has no separating residue");
  BigInt q = 2;
  while (q == x.p || x.k % q == 0) q = next_prime_after(q);
  ZpWitness out{q, mod_residue(x, q)};
  if (out.residue == 0) throw std::logic_error("residue unexpectedly zero");
  return out;
}

PAdicRational cyclic_generator(const std::vector<PAdicRational>& xs) {
  int prime = 0;
  int mm = 0;
  for (const PAdicRational& x : xs) {
    if (prime == 0)
      prime = x.p;
    else if (x.p != prime)
      throw std::invalid_argument("mixed primes in generator list");
    if (!x.is_zero()) mm = std::max(mm, x.m);
  }
  if (prime == 0) throw std::invalid_argument("empty generator list");
  BigInt g = 0;
  for (const PAdicRational& x : xs)
    if (!x.is_zero()) g = gcd(g, x.k * pow_int(BigInt(prime), mm - x.m));
  return {prime, g, mm};
}

TowerReport subgroup_tower_check(int p, const BigInt& k0, int level) {
  if (k0 <= 0) throw std::invalid_argument("generator scale must be positive");
  if (k0 % p == 0)
    throw std::invalid_argument("generator scale divisible by the prime");
  if (level < 0) throw std::invalid_argument("negative level");

  // Generators k0 / p^j for j <= level, as numerators over p^level.
  std::vector<PAdicRational> gens;
  std::vector<BigInt> numers;
  for (int j = 0; j <= level; ++j) {
    gens.emplace_back(p, k0, j);
    numers.push_back(k0 * pow_int(BigInt(p), level - j));
  }
  const PAdicRational expected(p, k0, level);
  TowerReport out{p, k0, level, cyclic_generator(gens), 0, true};
  if (!(out.min_positive == expected)) out.membership_ok = false;

  // Brute-force window: no combination with small coefficients produces a
  // smaller positive numerator than k0, and k0 itself is produced.
  const BigInt denom = pow_int(BigInt(p), level);
  BigInt best = 0;
  std::vector<int> coef(numers.size(), -1);
  while (true) {
    BigInt v = 0;
    for (size_t i = 0; i < numers.size(); ++i) v += coef[i] * numers[i];
    if (v > 0 && (best == 0 || v < best)) best = v;
    ++out.samples_checked;
    size_t i = 0;
    while (i < coef.size() && coef[i] == 1) coef[i++] = -1;
    if (i == coef.size()) break;
    ++coef[i];
  }
  if (best != k0) out.membership_ok = false;

  // Membership characterization on a window of lattice points t / p^level:
  // claimed criterion k0 | t versus actual lattice membership, which is
  // divisibility by the gcd of the generator numerators.
  BigInt g = 0;
  for (const BigInt& nu : numers) g = gcd(g, nu);
  for (BigInt t = -3 * k0; t <= 3 * k0; ++t) {
    const bool divisible = (t % k0 == 0);
    const bool representable = (t % g == 0);
    if (divisible != representable) out.membership_ok = false;
    ++out.samples_checked;
  }
  return out;
}

PMatrix::PMatrix(int prime, int size, std::vector<PAdicRational> vals)
    : p(prime), n(size), entries(std::move(vals)) {
  if (n < 1) throw std::invalid_argument("matrix size must be positive");
  if (entries.size() != static_cast<size_t>(n) * n)
    throw std::invalid_argument("entry count mismatch");
  for (const PAdicRational& e : entries)
    if (e.p != p) throw std::invalid_argument("entry prime mismatch");
  const PAdicRational det = pmatrix_det(*this);
  if (!(det == PAdicRational::integer(p, 1)))
    throw std::invalid_argument("determinant is not one");
}

PMatrix PMatrix::identity(int prime, int size) {
  std::vector<PAdicRational> vals(
      static_cast<size_t>(size) * size, PAdicRational::zero(prime));
  for (int i = 0; i < size; ++i)
    vals[static_cast<size_t>(i) * size + i] = PAdicRational::integer(prime, 1);
  return {prime, size, std::move(vals)};
}

PMatrix PMatrix::elementary(int prime, int size, int r, int c,
                            const PAdicRational& t) {
  if (r == c) throw std::invalid_argument("elementary offset must be off diagonal");
  if (t.p != prime) throw std::invalid_argument("entry prime mismatch");
  PMatrix out = identity(prime, size);
  out.at(r, c) = t;
  return out;
}

PMatrix PMatrix::operator*(const PMatrix& o) const {
  if (p != o.p || n != o.n) throw std::invalid_argument("shape or prime mismatch");
  std::vector<PAdicRational> vals(
      static_cast<size_t>(n) * n, PAdicRational::zero(p));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      PAdicRational acc = PAdicRational::zero(p);
      for (int j = 0; j < n; ++j) acc = acc + at(r, j) * o.at(j, c);
      vals[static_cast<size_t>(r) * n + c] = acc;
    }
  return {p, n, std::move(vals)};
}

bool PMatrix::is_identity() const {
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const PAdicRational want =
          r == c ? PAdicRational::integer(p, 1) : PAdicRational::zero(p);
      if (!(at(r, c) == want)) return false;
    }
  return true;
}

namespace {

PAdicRational det_recursive(const std::vector<PAdicRational>& vals, int n,
                            int p) {
  if (n == 1) return vals[0];
  PAdicRational out = PAdicRational::zero(p);
  for (int c = 0; c < n; ++c) {
    std::vector<PAdicRational> minor;
    minor.reserve(static_cast<size_t>(n - 1) * (n - 1));
    for (int r = 1; r < n; ++r)
      for (int cc = 0; cc < n; ++cc)
        if (cc != c) minor.push_back(vals[static_cast<size_t>(r) * n + cc]);
    const PAdicRational term =
        vals[static_cast<size_t>(c)] * det_recursive(minor, n - 1, p);
    out = (c % 2 == 0) ? out + term : out - term;
  }
  return out;
}

}  // namespace

PAdicRational pmatrix_det(const PMatrix& a) {
  return det_recursive(a.entries, a.n, a.p);
}

SlWitness sl_reduction_witness(const PMatrix& a) {
  if (a.is_identity())
    throw std::invalid_argument("identity matrix cannot be separated");
  BigInt q = 2;
  while (true) {
    if (q != a.p) {
      std::vector<std::vector<BigInt>> image(a.n, std::vector<BigInt>(a.n, 0));
      bool differs = false;
      for (int r = 0; r < a.n; ++r)
        for (int c = 0; c < a.n; ++c) {
          image[r][c] = mod_residue(a.at(r, c), q);
          const BigInt want = r == c ? 1 : 0;
          if (image[r][c] != want) differs = true;
        }
      if (differs) {
        if (residue_det(image, q) != 1)
          throw std::logic_error("residue determinant is not one");
        return {q, std::move(image)};
      }
    }
    q = next_prime_after(q);
    if (q > 1000000000) throw std::logic_error("no separating prime found");
  }
}

}  // namespace rfdlab
