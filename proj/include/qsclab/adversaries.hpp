#pragma once

#include "qsclab/games.hpp"

namespace qsclab::games::adversaries {

/// Sends an honest state through, checks it comes back intact.
OutsiderAdversary passive_forwarder();

/// Applies the given Pauli (X, Y or Z) to the first ciphertext qubit, then
/// unsigncrypts; guesses real iff the decrypt accepted. `rounds` independent
/// tamper rounds per game.
OutsiderAdversary pauli_tamperer(char pauli = 'X', int rounds = 1);

/// Flips one random bit of the classical ciphertext part.
OutsiderAdversary classical_bit_forger();

/// Discards the ciphertext entirely and submits fresh garbage in both parts.
OutsiderAdversary garbage_resender();

/// Keeps a Bell half entangled with the plaintext and tests the returned
/// register against it.
OutsiderAdversary entangled_probe();

/// Replays the challenge ciphertext into the decryption oracle.
CcaAdversary challenge_replayer();

/// Never queries the decryption oracle after the challenge; guesses a coin.
CcaAdversary coin_guesser();

/// Decrypts the challenge and compares with the known submitted plaintext.
CcaAdversary decrypt_compare();

OneTimeAdversary onetime_identity();
OneTimeAdversary onetime_pauli(char pauli);
/// Replaces the quantum part with a maximally mixed register and the
/// classical part with random bytes.
OneTimeAdversary onetime_garbage();
/// Attack acting only on the adversary's side register.
OneTimeAdversary onetime_side_only();

/// Picks the first two identities and plays honestly (replay through the
/// oracles); guesses real iff the returned state matches.
MultiUserAdversary mu_honest_replayer();
/// Holds third-party secret keys and tries to forge toward the target pair.
MultiUserAdversary mu_third_party_forger();

Mat pauli_of(char p);

} // namespace qsclab::games::adversaries
