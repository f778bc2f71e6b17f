#include "stripgram/characters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace stripgram {

namespace {

long mul_mod(long a, long b, long m) { return static_cast<long>((__int128)a * b % m); }

long pow_mod(long base, long e, long m) {
    long r = 1 % m;
    base %= m;
    while (e > 0) {
        if (e & 1) r = mul_mod(r, base, m);
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    return r;
}

std::vector<long> prime_factors(long n) {
    std::vector<long> ps;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

long primitive_root_mod_p(long p) {
    if (p == 2) return 1;
    const auto qs = prime_factors(p - 1);
    for (long g = 2; g < p; ++g) {
        bool ok = true;
        for (long q : qs) {
            if (pow_mod(g, (p - 1) / q, p) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw std::logic_error("no primitive root found");
}

struct CyclicFactor {
    long generator;  // element of (Z/q)^*, congruent to 1 mod the other prime powers
    long order;
};

// Generators of (Z/q)^* as a direct product of cyclic groups: one generator
// per odd prime power, the standard pair {-1, 5} at 2^e with e >= 3, {3} at 4,
// none at 2. Each local generator is lifted to mod q by CRT.
std::vector<CyclicFactor> unit_group_generators(long q) {
    std::vector<CyclicFactor> out;
    if (q == 1) return out;
    long rest = q;
    std::vector<std::pair<long, long>> pps;  // (p, p^e)
    for (long p = 2; p * p <= rest; ++p) {
        if (rest % p == 0) {
            long pe = 1;
            while (rest % p == 0) {
                rest /= p;
                pe *= p;
            }
            pps.emplace_back(p, pe);
        }
    }
    if (rest > 1) pps.emplace_back(rest, rest);
    std::sort(pps.begin(), pps.end());

    auto crt_lift = [&](long local, long pe) {
        // x = local mod pe, x = 1 mod q/pe
        const long rest_mod = q / pe;
        for (long x = local % q; ; x += pe) {
            if (x % rest_mod == 1 % rest_mod) return x % q;
        }
    };

    for (auto [p, pe] : pps) {
        if (p == 2) {
            // (Z/2)* is trivial; (Z/4)* = <3>; (Z/2^e)* = <-1> x <5> for e >= 3
            if (pe == 4) {
                out.push_back({crt_lift(3, pe), 2});
            } else if (pe >= 8) {
                out.push_back({crt_lift(pe - 1, pe), 2});
                out.push_back({crt_lift(5, pe), pe / 4});
            }
        } else {
            long g = primitive_root_mod_p(p);
            if (pe > p) {
                if (pow_mod(g, p - 1, p * p) == 1) g += p;
            }
            out.push_back({crt_lift(g % pe, pe), (pe / p) * (p - 1)});
        }
    }
    return out;
}

}  // namespace

long euler_phi(long q) {
    long phi = q;
    for (long p : prime_factors(q)) phi -= phi / p;
    return phi;
}

std::vector<DirichletCharacter> characters_mod(long q) {
    if (q < 1) throw std::invalid_argument("characters_mod requires q >= 1");
    const auto gens = unit_group_generators(q);
    const long phi = euler_phi(q);

    long exponent = 1;
    for (const auto& g : gens) exponent = std::lcm(exponent, g.order);

    // Enumerate the group once, recording each residue's discrete-log tuple.
    const size_t r = gens.size();
    std::vector<std::vector<long>> dlog(static_cast<size_t>(q));
    {
        std::vector<long> tuple(r, 0);
        long residue = 1 % q;
        long count = 0;
        while (true) {
            dlog[static_cast<size_t>(residue)] = tuple;
            ++count;
            // odometer over exponent tuples; track the residue incrementally
            size_t i = r;
            while (i > 0) {
                --i;
                ++tuple[i];
                residue = mul_mod(residue, gens[i].generator, q);
                if (tuple[i] < gens[i].order) break;
                // wrap: multiply past the cycle closes it (g^order = 1)
                tuple[i] = 0;
                if (i == 0) {
                    if (count != phi)
                        throw std::logic_error("unit group enumeration mismatch");
                    goto done;
                }
            }
            if (r == 0) break;
        }
    done:;
        if (r == 0 && q > 1) dlog[1 % q] = {};
    }

    std::vector<DirichletCharacter> chars;
    chars.reserve(static_cast<size_t>(phi));
    std::vector<long> c(r, 0);  // character exponents, c[i] in [0, order_i)
    for (long index = 0; index < phi; ++index) {
        DirichletCharacter chi;
        chi.q_ = q;
        chi.exponent_ = exponent;
        chi.index_ = index;
        chi.principal_ = std::all_of(c.begin(), c.end(), [](long v) { return v == 0; });
        chi.rot_.assign(static_cast<size_t>(q), -1);
        for (long k = 0; k < q; ++k) {
            if (std::gcd(k == 0 ? q : k, q) != 1) continue;
            long rot = 0;
            for (size_t i = 0; i < r; ++i)
                rot = (rot + c[i] * dlog[static_cast<size_t>(k)][i] % exponent *
                                 (exponent / gens[i].order)) % exponent;
            chi.rot_[static_cast<size_t>(k)] = rot;
        }
        if (q == 1) chi.rot_ = {0};  // single residue class, value 1
        chars.push_back(std::move(chi));

        // next exponent tuple, last generator least significant
        size_t i = r;
        while (i > 0) {
            --i;
            if (++c[i] < gens[i].order) break;
            c[i] = 0;
        }
    }
    return chars;
}

bool DirichletCharacter::is_real() const {
    for (long r : rot_) {
        if (r > 0 && 2 * r != exponent_) return false;
    }
    return true;
}

DirichletCharacter DirichletCharacter::conjugate() const {
    DirichletCharacter out = *this;
    for (auto& r : out.rot_) {
        if (r > 0) r = exponent_ - r;
    }
    // locate the conjugate's canonical index among the characters mod q
    for (const auto& cand : characters_mod(q_)) {
        if (cand.rot_ == out.rot_) {
            out.index_ = cand.index_;
            break;
        }
    }
    return out;
}

std::complex<double> twisted_term(const TwistedSequence& seq, std::uint64_t k) {
    if (k < 1) throw std::invalid_argument("twisted_term requires k >= 1");
    const std::complex<double> phase =
        seq.shift == 0.0 ? 1.0 : std::polar(1.0, seq.shift * std::log(static_cast<double>(k)));
    if (seq.chi.principal()) {
        return (k % 2 == 0 ? 1.0 : -1.0) * phase;
    }
    return seq.chi.value(k) * phase;
}

std::complex<double> FiniteSequence::at(std::uint32_t index) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), index,
                               [](const Entry& e, std::uint32_t i) { return e.index < i; });
    if (it != entries.end() && it->index == index) return it->value;
    return 0.0;
}

namespace {

FiniteSequence merge(const FiniteSequence& a, const FiniteSequence& b,
                     std::complex<double> b_scale) {
    FiniteSequence out;
    out.entries.reserve(a.entries.size() + b.entries.size());
    size_t i = 0, j = 0;
    while (i < a.entries.size() || j < b.entries.size()) {
        if (j == b.entries.size() ||
            (i < a.entries.size() && a.entries[i].index < b.entries[j].index)) {
            out.entries.push_back(a.entries[i++]);
        } else if (i == a.entries.size() || b.entries[j].index < a.entries[i].index) {
            out.entries.push_back({b.entries[j].index, b_scale * b.entries[j].value});
            ++j;
        } else {
            const std::complex<double> v = a.entries[i].value + b_scale * b.entries[j].value;
            out.entries.push_back({a.entries[i].index, v});
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

FiniteSequence operator-(const FiniteSequence& a, const FiniteSequence& b) {
    return merge(a, b, -1.0);
}
FiniteSequence operator+(const FiniteSequence& a, const FiniteSequence& b) {
    return merge(a, b, 1.0);
}
FiniteSequence operator*(std::complex<double> scalar, const FiniteSequence& a) {
    FiniteSequence out = a;
    for (auto& e : out.entries) e.value *= scalar;
    return out;
}

FiniteSequence truncated_vector(const TwistedSequence& seq, std::uint32_t N) {
    if (N < 1) throw std::invalid_argument("truncated_vector requires N >= 1");
    FiniteSequence out;
    out.entries.reserve(N);
    for (std::uint32_t k = 1; k <= N; ++k) {
        if (!seq.chi.principal() && seq.chi.rotation(k) < 0) continue;
        out.entries.push_back({k, twisted_term(seq, k)});
    }
    return out;
}

}  // namespace stripgram
