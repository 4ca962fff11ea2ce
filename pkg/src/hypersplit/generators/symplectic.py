"""Sign-free Pauli algebra over GF(2) using Python integers as bit vectors.

An ``n``-qubit Pauli is stored as one integer: bits ``0..n-1`` hold the X
part and bits ``n..2n-1`` the Z part. Phases are ignored throughout.
"""

from __future__ import annotations

from typing import Iterable, Sequence

PAULI_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


def pauli(n: int, ops: dict[int, str]) -> int:
    """Pauli with ``ops[q]`` in ``"XYZ"`` acting on qubit ``q``."""
    v = 0
    for q, kind in ops.items():
        x, z = PAULI_BITS[kind]
        if x:
            v |= 1 << q
        if z:
            v |= 1 << (q + n)
    return v


def commutes(n: int, a: int, b: int) -> bool:
    mask = (1 << n) - 1
    ax, az = a & mask, a >> n
    bx, bz = b & mask, b >> n
    return ((ax & bz) ^ (az & bx)).bit_count() % 2 == 0


def support(n: int, a: int) -> int:
    mask = (1 << n) - 1
    return (a & mask) | (a >> n)


class Basis:
    """Incrementally row-reduced GF(2) basis that remembers combinations.

    Every stored row carries a mask of the input vectors it was built from,
    so :meth:`express` can return a subset of inputs summing to a target.
    """

    def __init__(self):
        self.rows: dict[int, tuple[int, int]] = {}
        self.count = 0

    def reduce(self, v: int) -> tuple[int, int]:
        combo = 0
        while v:
            top = v.bit_length() - 1
            row = self.rows.get(top)
            if row is None:
                break
            v ^= row[0]
            combo ^= row[1]
        return v, combo

    def add(self, v: int) -> bool:
        """Insert input vector number ``self.count``; True if independent."""
        idx = self.count
        self.count += 1
        r, combo = self.reduce(v)
        if r == 0:
            return False
        self.rows[r.bit_length() - 1] = (r, combo ^ (1 << idx))
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v)[0] == 0

    def express(self, v: int) -> list[int] | None:
        """Indices of inputs summing to ``v``, or None if ``v`` is outside."""
        r, combo = self.reduce(v)
        if r:
            return None
        return [i for i in range(self.count) if combo >> i & 1]

    @property
    def rank(self) -> int:
        return len(self.rows)


def span_basis(vectors: Iterable[int]) -> Basis:
    b = Basis()
    for v in vectors:
        b.add(v)
    return b


def nullspace(rows: Sequence[int], nbits: int) -> list[int]:
    """Basis of ``{x : popcount(row & x) even for every row}``."""
    # Gaussian elimination to reduced row echelon form on column pivots.
    pivots: dict[int, int] = {}
    for r in rows:
        for col, pr in pivots.items():
            if r >> col & 1:
                r ^= pr
        if r == 0:
            continue
        col = (r & -r).bit_length() - 1
        for c2 in list(pivots):
            if pivots[c2] >> col & 1:
                pivots[c2] ^= r
        pivots[col] = r
    free = [c for c in range(nbits) if c not in pivots]
    out = []
    for f in free:
        x = 1 << f
        for col, pr in pivots.items():
            if pr >> f & 1:
                x |= 1 << col
        out.append(x)
    return out


def symplectic_swap(n: int, a: int) -> int:
    mask = (1 << n) - 1
    return (a >> n) | ((a & mask) << n)


def centralizer(n: int, generators: Sequence[int]) -> list[int]:
    """Basis of the Paulis commuting with every generator."""
    return nullspace([symplectic_swap(n, g) for g in generators], 2 * n)


def commutation_signature(n: int, a: int, against: Sequence[int]) -> int:
    """Bit ``j`` set iff ``a`` anticommutes with ``against[j]``."""
    sig = 0
    for j, b in enumerate(against):
        if not commutes(n, a, b):
            sig |= 1 << j
    return sig
