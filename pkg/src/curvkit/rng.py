"""Deterministic seeded random streams.

One global 64-bit seed expands into independent named substreams, so
adding samples to one check never perturbs the draws of another.
"""

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def substream(seed, *labels):
    """Generator for a (seed, label path) pair, stable across runs.

    The label path is hashed (blake2b) into the seed sequence, so
    substream(42, "ode", 3) is always the same stream and is independent
    of substream(42, "ode", 4).
    """
    text = "/".join(str(part) for part in labels)
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    key = int.from_bytes(digest, "big")
    return np.random.default_rng(np.random.SeedSequence([int(seed) & _MASK64, key]))


def haar_rotation(rng, n=3):
    """Haar-distributed rotation from SO(n) via sign-fixed QR."""
    a = rng.normal(size=(n, n))
    q, r = np.linalg.qr(a)
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def rotation_budget(seed, count, n=3, label="rotations"):
    """Identity plus count-1 seeded Haar rotations."""
    rng = substream(seed, label)
    rots = [np.eye(n)]
    for _ in range(max(0, count - 1)):
        rots.append(haar_rotation(rng, n))
    return rots
