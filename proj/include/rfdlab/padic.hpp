#pragma once

// Exact arithmetic in the ring of p-adic rationals (integers with powers of a
// fixed prime p in the denominator), reduction homomorphisms onto modular
// rings, and the residual-finiteness witnesses built from them.

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace rfdlab {

using BigInt = boost::multiprecision::cpp_int;

bool is_prime(const BigInt& n);

// k / p^m in canonical form: m == 0 or p does not divide k; zero is 0 / p^0.
struct PAdicRational {
  int p;
  BigInt k;
  int m;

  PAdicRational(int prime, BigInt numer, int expo);
  static PAdicRational zero(int prime) { return {prime, 0, 0}; }
  static PAdicRational integer(int prime, BigInt v) {
    return {prime, std::move(v), 0};
  }

  bool is_zero() const { return k == 0; }
  bool is_integer() const { return m == 0; }
  std::string str() const;

  PAdicRational operator+(const PAdicRational& o) const;
  PAdicRational operator-(const PAdicRational& o) const;
  PAdicRational operator*(const PAdicRational& o) const;
  PAdicRational operator-() const { return {p, -k, m}; }
  bool operator==(const PAdicRational& o) const = default;
};

// Residue of x modulo q for q coprime to p: the denominator p^m is inverted
// mod q. Result lies in [0, q). Ring homomorphism onto Z_q.
BigInt mod_residue(const PAdicRational& x, const BigInt& q);

struct ZpWitness {
  BigInt q;        // smallest prime distinct from p not dividing the numerator
  BigInt residue;  // mod_residue(x, q), nonzero
};

// Finite quotient of Z[1/p] on which a nonzero x survives.
ZpWitness rf_witness_zp(const PAdicRational& x);

// Generator of the subgroup generated by finitely many elements (gcd of the
// numerators over the common denominator). Zero entries are ignored; all
// entries must share the same prime.
PAdicRational cyclic_generator(const std::vector<PAdicRational>& xs);

struct TowerReport {
  int p;
  BigInt k0;
  int level;
  PAdicRational min_positive;  // smallest positive element at this level
  int samples_checked;
  bool membership_ok;  // x in subgroup iff p^level * x / k0 integral
};

// Truncates the subgroup generated by k0 / p^j (j <= level) to denominator
// p^level and verifies its minimal positive element and the divisibility
// characterization of membership on a sample window.
TowerReport subgroup_tower_check(int p, const BigInt& k0, int level);

// Square matrix over Z[1/p] with determinant exactly one.
struct PMatrix {
  int p;
  int n;
  std::vector<PAdicRational> entries;  // row major

  PMatrix(int prime, int size, std::vector<PAdicRational> vals);
  static PMatrix identity(int prime, int size);
  static PMatrix elementary(int prime, int size, int r, int c,
                            const PAdicRational& t);

  const PAdicRational& at(int r, int c) const { return entries[r * n + c]; }
  PAdicRational& at(int r, int c) { return entries[r * n + c]; }
  PMatrix operator*(const PMatrix& o) const;
  bool is_identity() const;
  bool operator==(const PMatrix& o) const = default;
};

PAdicRational pmatrix_det(const PMatrix& a);

struct SlWitness {
  BigInt q;                                 // prime of the modular reduction
  std::vector<std::vector<BigInt>> image;   // entrywise residues, not identity
};

// Modular reduction separating a determinant-one matrix from the identity:
// the smallest prime q distinct from p whose entrywise residue matrix
// differs from the identity. The image determinant is checked to be 1 mod q.
SlWitness sl_reduction_witness(const PMatrix& a);

}  // namespace rfdlab
