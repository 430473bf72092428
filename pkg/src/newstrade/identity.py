"""Pseudonymous identities: digest-derived names plus signing/encryption keys.

An actor's ledger identity is the digest of secret material it alone holds
(timestamp, nonce, random text, salt). The key bundle is derived from the
same material, so identity generation is a pure function of its inputs and
scenario runs reproduce bit-for-bit. Only the pseudonym and the public half
of the bundle ever leave the owning actor.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from cryptography.exceptions import InvalidSignature
from cryptography.hazmat.primitives.asymmetric.ed25519 import (
    Ed25519PrivateKey,
    Ed25519PublicKey,
)
from cryptography.hazmat.primitives.asymmetric.x25519 import X25519PrivateKey
from cryptography.hazmat.primitives.serialization import Encoding, PublicFormat

from .encoding import canon, digest_fields
from .errors import EmptyText, MalformedKey

# signing key (32 bytes) followed by encryption key (32 bytes)
KEY_BUNDLE_LEN = 64


@dataclass(frozen=True)
class SignatureInputs:
    """Secret material an actor keeps to itself; only its digest goes public."""

    t: int
    n: int
    text: bytes
    h: str  # salt digest, lowercase hex


@dataclass(frozen=True)
class PseudonymousId:
    pseudonym: str  # lowercase hex digest of the signature inputs
    public_key: bytes  # signing key || encryption key
    private_key: bytes  # held locally, never serialized


def _raw(public_key) -> bytes:
    return public_key.public_bytes(Encoding.Raw, PublicFormat.Raw)


def generate_identity(inputs: SignatureInputs) -> PseudonymousId:
    """Derive a pseudonym and key bundle from the caller's secret inputs.

    Deterministic: the same inputs always yield the same identity, and any
    change to a single input changes the pseudonym (collision resistance).
    The keys are as secret as the inputs themselves.
    """
    if not inputs.text:
        raise EmptyText("signature inputs need a nonempty random text")
    material = canon(inputs.t, inputs.n, inputs.text, inputs.h)
    pseudonym = digest_fields("pseudonym", inputs.t, inputs.n, inputs.text, inputs.h)
    sig_seed = hashlib.sha256(b"sig-key" + material).digest()
    enc_seed = hashlib.sha256(b"enc-key" + material).digest()
    sig_priv = Ed25519PrivateKey.from_private_bytes(sig_seed)
    enc_priv = X25519PrivateKey.from_private_bytes(enc_seed)
    public = _raw(sig_priv.public_key()) + _raw(enc_priv.public_key())
    return PseudonymousId(
        pseudonym=pseudonym,
        public_key=public,
        private_key=sig_seed + enc_seed,
    )


def sign(identity: PseudonymousId, message: bytes) -> bytes:
    """Sign a message with the identity's signing key."""
    key = Ed25519PrivateKey.from_private_bytes(identity.private_key[:32])
    return key.sign(bytes(message))


def verify(public_key: bytes, message: bytes, signature: bytes) -> bool:
    """True iff the signature was made by the matching private key over
    exactly this message. Raises MalformedKey for undecodable key bytes."""
    if not isinstance(public_key, (bytes, bytearray)) or len(public_key) != KEY_BUNDLE_LEN:
        raise MalformedKey("expected a %d-byte key bundle" % KEY_BUNDLE_LEN)
    try:
        verifier = Ed25519PublicKey.from_public_bytes(bytes(public_key[:32]))
    except (ValueError, TypeError) as exc:
        raise MalformedKey(str(exc)) from exc
    try:
        verifier.verify(bytes(signature), bytes(message))
    except InvalidSignature:
        return False
    return True


def signing_public(bundle: bytes) -> bytes:
    return bundle[:32]


def encryption_public(bundle: bytes) -> bytes:
    return bundle[32:]
