#pragma once

#include <gmpxx.h>

#include "qsclab/hash.hpp"
#include "qsclab/linalg.hpp"

namespace qsclab::crypto {

inline constexpr std::size_t kMaxPkeMessage = 4096;

/// Prime-order subgroup of Z_p^*: p = 2q+1 safe prime, g generates the
/// order-q subgroup of squares.
struct DhGroup {
    std::string name;
    mpz_class p;
    mpz_class q;
    mpz_class g;
    std::size_t element_bytes;
};

const DhGroup& group_test64();
const DhGroup& group_modp2048();
const DhGroup& group_by_name(const std::string& name);

struct PkeKeypair {
    std::string group;
    mpz_class x;  // secret exponent in [1, q)
    mpz_class y;  // g^x mod p
};

/// Hashed-ElGamal parts; the flat wire order is (group element, body, MAC).
struct PkeCiphertext {
    Bytes u;
    Bytes body;
    Bytes mac;

    Bytes to_bytes() const;
    static std::optional<PkeCiphertext> from_bytes(const Bytes& data);
};

Bytes element_bytes(const DhGroup& grp, const mpz_class& v);
mpz_class element_from_bytes(const DhGroup& grp, const Bytes& data);

PkeKeypair pke_keygen(const DhGroup& grp, Rng& rng);
PkeCiphertext pke_enc(const HashConfig& cfg, const DhGroup& grp, const mpz_class& y,
                      const Bytes& message, Rng& rng);
/// nullopt on any integrity failure (bad group element, MAC mismatch).
std::optional<Bytes> pke_dec(const HashConfig& cfg, const DhGroup& grp, const mpz_class& x,
                             const PkeCiphertext& ct);

} // namespace qsclab::crypto
