"""Binary-input symmetric-output (BISO) channels.

A BISO channel is stored as an ordered tuple of pairs ``(p_y, p_-y)`` with
``p_y = P(Y=y | X=0) = P(Y=-y | X=1)``. A symmetric middle output ``Y=0`` is
always split into two outputs carrying ``p_0 / 2`` each, so the output
alphabet has even size.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DomainError, ValidationError

MASS_TOL = 1e-9
EXACT_TOL = 1e-12
SYMMETRY_TOL = 1e-9

Pair = tuple[float, float]


@dataclass(frozen=True)
class BisoChannel:
    pairs: tuple[Pair, ...]
    label: Optional[str] = None

    @property
    def n_pairs(self) -> int:
        return len(self.pairs)

    @property
    def plus(self) -> np.ndarray:
        return np.array([a for a, _ in self.pairs], dtype=np.float64)

    @property
    def minus(self) -> np.ndarray:
        return np.array([b for _, b in self.pairs], dtype=np.float64)

    @property
    def is_useless(self) -> bool:
        return all(a == b for a, b in self.pairs)

    def kernel(self) -> np.ndarray:
        """The 2 x 2N transition matrix, columns ordered (+1, -1, +2, -2, ...)."""
        row0 = []
        row1 = []
        for a, b in self.pairs:
            row0 += [a, b]
            row1 += [b, a]
        return np.array([row0, row1], dtype=np.float64)

    def to_dict(self) -> dict:
        out = {"pairs": [[a, b] for a, b in self.pairs]}
        if self.label is not None:
            out["label"] = self.label
        return out


def make_biso(pairs: Iterable[Sequence[float]], label: Optional[str] = None) -> BisoChannel:
    """Validate ``pairs`` and return the canonical channel.

    Pairs with zero mass are dropped. Total mass must equal one within 1e-9;
    a residual above 1e-12 is absorbed exactly by the largest entry.
    """
    raw = []
    for item in pairs:
        if len(item) != 2:
            raise ValidationError(f"each pair needs exactly two entries, got {item!r}")
        a, b = float(item[0]), float(item[1])
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValidationError("pair entries must be finite")
        if a < 0.0 or b < 0.0:
            raise ValidationError(f"negative transition probability in pair ({a!r}, {b!r})")
        if a > 1.0 or b > 1.0:
            raise ValidationError(f"transition probability above one in pair ({a!r}, {b!r})")
        raw.append([a, b])
    if not raw:
        raise ValidationError("a BISO channel needs at least one pair")
    total = math.fsum(x for pair in raw for x in pair)
    err = total - 1.0
    if abs(err) > MASS_TOL:
        raise ValidationError(f"total output mass must be 1, got {total!r}")
    if abs(err) > EXACT_TOL:
        i, j = max(((i, j) for i in range(len(raw)) for j in (0, 1)),
                   key=lambda ij: raw[ij[0]][ij[1]])
        raw[i][j] -= err
        if raw[i][j] < 0.0:
            raise ValidationError("mass rebalancing produced a negative entry")
    kept = tuple((a, b) for a, b in raw if a > 0.0 or b > 0.0)
    if not kept:
        raise ValidationError("channel has no output with positive mass")
    return BisoChannel(kept, label)


def canonicalize(ch: BisoChannel) -> BisoChannel:
    """Drop zero-mass pairs, keeping the order of the rest. Idempotent."""
    kept = tuple(p for p in ch.pairs if p[0] > 0.0 or p[1] > 0.0)
    if kept == ch.pairs:
        return ch
    return BisoChannel(kept, ch.label)


def from_matrix(matrix, label: Optional[str] = None) -> BisoChannel:
    """Build a channel from a raw 2 x m transition matrix.

    Column ``j`` and column ``m-1-j`` are the outputs ``y`` and ``-y``, so the
    row for ``X=1`` must be the mirror image of the row for ``X=0``. With an
    odd column count the middle column is the symmetric output ``Y=0`` and is
    split into two halves. Asymmetric matrices are rejected.
    """
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != 2 or m.shape[1] == 0:
        raise ValidationError("raw matrix must have exactly two rows and at least one column")
    row0, row1 = m
    width = m.shape[1]
    if np.any(np.abs(row1 - row0[::-1]) > SYMMETRY_TOL):
        raise ValidationError("matrix is not output-symmetric: P(y|0) must equal P(-y|1)")
    pairs = [(row0[j], row0[width - 1 - j]) for j in range(width // 2)]
    if width % 2 == 1:
        mid = row0[width // 2]
        pairs.append((mid / 2.0, mid / 2.0))
    return make_biso(pairs, label)


def bsc(p: float) -> BisoChannel:
    """Binary symmetric channel with crossover ``p`` in [0, 1/2]."""
    p = float(p)
    if not (0.0 <= p <= 0.5):
        raise DomainError(f"BSC crossover must lie in [0, 1/2], got {p!r}")
    return make_biso([(1.0 - p, p)], label=f"BSC({p:g})")


def bec(eps: float) -> BisoChannel:
    """Binary erasure channel; the erasure output is split into two halves."""
    eps = float(eps)
    if not (0.0 <= eps <= 1.0):
        raise DomainError(f"BEC erasure probability must lie in [0, 1], got {eps!r}")
    return make_biso([(1.0 - eps, 0.0), (eps / 2.0, eps / 2.0)], label=f"BEC({eps:g})")


def random_biso(n_pairs: int, seed: int) -> BisoChannel:
    """Random channel with ``n_pairs`` pairs; a pure function of its arguments."""
    if n_pairs < 1:
        raise DomainError("n_pairs must be >= 1")
    rng = np.random.default_rng(seed)
    v = rng.random(2 * n_pairs)
    v = v / math.fsum(v)
    return make_biso(v.reshape(n_pairs, 2), label=f"random({n_pairs},{seed})")


def mix_toward_useless(ch: BisoChannel, lam: float) -> BisoChannel:
    """Post-process ``ch`` by flipping the output sign with probability (1-lam)/2.

    ``lam = 1`` returns the channel unchanged and ``lam = 0`` the useless
    channel. Smaller ``lam`` is a degraded version of larger ``lam``.
    """
    lam = float(lam)
    if not (0.0 <= lam <= 1.0):
        raise DomainError("lam must lie in [0, 1]")
    nu = 0.5 * (1.0 - lam)
    pairs = [((1.0 - nu) * a + nu * b, nu * a + (1.0 - nu) * b) for a, b in ch.pairs]
    return make_biso(pairs, ch.label)
