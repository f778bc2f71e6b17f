#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace stripgram {

// Dirichlet character mod q with exact root-of-unity values. A value is
// stored as a rotation numerator r meaning exp(2*pi*i * r / group_exponent);
// r = -1 marks the zero value on residues sharing a factor with q. Exact
// storage keeps orthogonality and group-closure checks integer-exact.
class DirichletCharacter {
  public:
    long modulus() const { return q_; }
    long group_exponent() const { return exponent_; }
    bool principal() const { return principal_; }
    long index() const { return index_; }

    // rotation numerator for k (mod q), or -1 when the value is 0
    long rotation(std::uint64_t k) const { return rot_[k % static_cast<std::uint64_t>(q_)]; }

    std::complex<double> value(std::uint64_t k) const {
        const long r = rotation(k);
        if (r < 0) return 0.0;
        if (r == 0) return 1.0;
        if (2 * r == exponent_) return -1.0;
        return std::polar(1.0, 2.0 * M_PI * static_cast<double>(r) / static_cast<double>(exponent_));
    }

    bool is_real() const;
    DirichletCharacter conjugate() const;

  private:
    friend std::vector<DirichletCharacter> characters_mod(long q);
    long q_ = 1;
    long exponent_ = 1;          // lcm of the cyclic factor orders
    std::vector<long> rot_;      // size q, indexed by residue
    bool principal_ = true;
    long index_ = 0;             // lexicographic over generator exponent tuples
};

// All phi(q) characters mod q, ordered by their canonical index: exponent
// tuples over the fixed generator list of the unit group (CRT over prime
// powers, two generators at powers of two >= 8), first generator most
// significant. Index 0 is the principal character.
std::vector<DirichletCharacter> characters_mod(long q);

long euler_phi(long q);

// Coefficient sequence chi(k) k^{it}, with the alternating-sign variant
// (-1)^k k^{it} whenever chi is principal (any modulus).
struct TwistedSequence {
    DirichletCharacter chi;
    double shift = 0.0;  // t
};

std::complex<double> twisted_term(const TwistedSequence& seq, std::uint64_t k);

// Finite-support complex coefficient sequence; indices are 1-based and
// strictly increasing. Indices not present carry coefficient 0.
struct FiniteSequence {
    struct Entry {
        std::uint32_t index;
        std::complex<double> value;
    };
    std::vector<Entry> entries;

    std::uint32_t max_index() const { return entries.empty() ? 0 : entries.back().index; }
    std::complex<double> at(std::uint32_t index) const;

    static FiniteSequence delta(std::uint32_t n) { return {{{n, 1.0}}}; }
};

FiniteSequence operator-(const FiniteSequence& a, const FiniteSequence& b);
FiniteSequence operator+(const FiniteSequence& a, const FiniteSequence& b);
FiniteSequence operator*(std::complex<double> scalar, const FiniteSequence& a);

// First N coefficients of the twisted sequence as a FiniteSequence
// (support excludes the residues where chi vanishes).
FiniteSequence truncated_vector(const TwistedSequence& seq, std::uint32_t N);

}  // namespace stripgram
