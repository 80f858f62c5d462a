"""The group algebra GF(2)[Z_2^k] and a batched evaluator for it.

An element is a subset of Z_2^k, stored as a Python int whose bit z says
whether the group element z appears.  Addition is XOR of the masks and
multiplication is XOR-convolution.  Elements e_0 + e_v square to zero, which
kills every non-multilinear monomial of a polynomial evaluated on them.

Direct convolution costs 2^k big-int operations per product, far too slow to
push whole circuits through at k = 8..10 in Python.  ``BatchPlan.evaluate``
and ``parity_coefficients`` work over the integers instead.  Under the
character chi_s of Z_2^k the generator e_0 + e_v maps to 2 or 0, so one
circuit pass per character with 0/1 vertex values (mod 256) gives every
chi_s(P).  The inverse Walsh-Hadamard transform recovers P's integer
coefficients, whose parities are the GF(2) element.  The tests check both
routes against each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..homcount.circuit import HomCircuit


def _swap_masks(k: int) -> list[int]:
    """M_j selects indices whose bit j is 0."""
    size = 1 << k
    out = []
    for j in range(k):
        m = 0
        for z in range(size):
            if not z >> j & 1:
                m |= 1 << z
        out.append(m)
    return out


@dataclass(frozen=True)
class GroupAlgebraElement:
    k: int
    mask: int

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        return GroupAlgebraElement(self.k, self.mask ^ other.mask)

    def __mul__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        return GroupAlgebraRing(self.k).mul(self, other)

    def __bool__(self) -> bool:
        return self.mask != 0

    def support(self) -> list[int]:
        return [z for z in range(1 << self.k) if self.mask >> z & 1]


class GroupAlgebraRing:
    """Ring interface (zero, one, add, mul) for GF(2)[Z_2^k]."""

    def __init__(self, k: int):
        if not 1 <= k <= 12:
            raise ValueError("group algebra dimension must be in 1..12")
        self.k = k
        self.zero = GroupAlgebraElement(k, 0)
        self.one = GroupAlgebraElement(k, 1)
        self._masks = _swap_masks(k)

    def basis(self, z: int) -> GroupAlgebraElement:
        return GroupAlgebraElement(self.k, 1 << z)

    def generator(self, v: int) -> GroupAlgebraElement:
        """e_0 + e_v (zero when v = 0)."""
        return GroupAlgebraElement(self.k, 1 ^ (1 << v))

    @staticmethod
    def add(a, b):
        return a + b

    def translate(self, mask: int, z: int) -> int:
        """The mask of e_z * (element with ``mask``): index y -> y xor z."""
        for j in range(self.k):
            if z >> j & 1:
                s = 1 << j
                low = self._masks[j]
                mask = ((mask & low) << s) | ((mask >> s) & low)
        return mask

    def mul(self, a: GroupAlgebraElement, b: GroupAlgebraElement) -> GroupAlgebraElement:
        out = 0
        m = a.mask
        while m:
            low = m & -m
            out ^= self.translate(b.mask, low.bit_length() - 1)
            m ^= low
        return GroupAlgebraElement(self.k, out)


# character-domain evaluation -------------------------------------------------

def character_values(labels: np.ndarray, k: int) -> np.ndarray:
    """Y[x, s] = 1 iff s·labels[x] is even, for s in Z_2^k; shape (n, 2^k), uint8."""
    s = np.arange(1 << k, dtype=np.int64)
    dots = labels.astype(np.int64)[:, None] & s[None, :]
    parity = np.zeros_like(dots)
    for j in range(k):
        parity ^= (dots >> j) & 1
    return (1 - parity).astype(np.uint8)


class BatchPlan:
    """Numpy arrays for one circuit, built once and reused across trials.

    Within a bag the terms are grouped by their rank among the terms of the
    same gate, so each group adds into distinct gates and a plain fancy-index
    add is safe.
    """

    def __init__(self, c: HomCircuit, rows: int = 1 << 13):
        self.gate_count = c.gate_count
        self.output = c.output
        self.groups = []
        for blk in c.blocks:
            if not blk.term_gate:
                continue
            gates = np.asarray(blk.term_gate, dtype=np.int64)
            t = len(gates)
            verts = np.asarray(blk.term_vertices, dtype=np.int64).reshape(t, -1)
            kids = np.asarray(blk.term_children, dtype=np.int64).reshape(t, -1)
            by_gate = np.argsort(gates, kind="stable")
            sg = gates[by_gate]
            starts = np.flatnonzero(np.r_[True, sg[1:] != sg[:-1]])
            lengths = np.diff(np.r_[starts, t])
            rank = np.arange(t) - np.repeat(starts, lengths)
            order = by_gate[np.argsort(rank, kind="stable")]
            rank_sorted = np.sort(rank, kind="stable")
            cuts = np.flatnonzero(np.r_[True, rank_sorted[1:] != rank_sorted[:-1]])
            cuts = np.r_[cuts, t]
            for lo, hi in zip(cuts, cuts[1:]):
                for a in range(lo, hi, rows):
                    o = order[a:min(hi, a + rows)]
                    self.groups.append((gates[o], verts[o], kids[o]))

    def evaluate(self, y: np.ndarray) -> np.ndarray:
        """Circuit value per column of ``y`` (shape (n, L)), arithmetic mod 256."""
        width = y.shape[1]
        if self.output is None:
            return np.zeros(width, dtype=np.uint8)
        values = np.zeros((self.gate_count, width), dtype=np.uint8)
        for gates, verts, kids in self.groups:
            prod = y[verts[:, 0]] if verts.shape[1] else np.ones((len(gates), width), dtype=np.uint8)
            for j in range(1, verts.shape[1]):
                prod *= y[verts[:, j]]
            for j in range(kids.shape[1]):
                prod *= values[kids[:, j]]
            values[gates] += prod
        return values[self.output]


def walsh_hadamard(a: np.ndarray) -> np.ndarray:
    """Unnormalised transform along the last axis (length 2^k), int64."""
    a = a.astype(np.int64).copy()
    n = a.shape[-1]
    h = 1
    lead = a.shape[:-1]
    while h < n:
        v = a.reshape(*lead, n // (2 * h), 2, h)
        x = v[..., 0, :].copy()
        y = v[..., 1, :]
        v[..., 0, :] = x + y
        v[..., 1, :] = x - y
        h *= 2
    return a


def parity_coefficients(chi: np.ndarray, k: int, degree: int) -> np.ndarray:
    """GF(2) coefficients from character values chi_s(P) / 2^degree (mod 256).

    With every monomial of degree ``degree`` and k >= degree, the integer
    coefficient of e_z is 2^(degree-k) * sum_s (-1)^(s.z) * chi[s].
    """
    shift = k - degree
    if not 0 <= shift < 8:
        raise ValueError("need 0 <= k - degree < 8")
    t = walsh_hadamard(chi) & 0xFF
    return ((t >> shift) & 1).astype(np.uint8)
