"""Repetition, surface, three-check and Petersen-graph fault models."""

from __future__ import annotations

from itertools import combinations

from hypersplit.errors import ParameterError, ProbabilityRangeError
from hypersplit.fault_model import Fault, FaultModel, merge_duplicates


def check_probability(name: str, p: float) -> float:
    p = float(p)
    if not 0.0 < p <= 0.5:
        raise ProbabilityRangeError(f"{name}={p!r} outside (0, 0.5]")
    return p


def _check_odd_distance(d: int) -> int:
    if int(d) != d or d < 3 or d % 2 == 0:
        raise ParameterError(f"surface distance must be odd and >= 3, got {d!r}")
    return int(d)


def gen_repetition(n: int, p: float) -> FaultModel:
    """Bit-flip repetition code on ``n`` bits.

    Check ``i`` compares bits ``i`` and ``i + 1``; fault ``i`` flips bit ``i``.
    The single observable is the total parity, flipped by every bit (it is
    a logical only for odd ``n``). For ``n = 2`` both faults trigger the one
    check; they are returned unmerged.
    """
    if int(n) != n or n < 2:
        raise ParameterError(f"repetition length must be >= 2, got {n!r}")
    p = check_probability("p", p)
    faults = []
    for i in range(n):
        checks = {c for c in (i - 1, i) if 0 <= c < n - 1}
        faults.append(Fault(p, checks, {0}, f"bit{i}"))
    return FaultModel(n - 1, 1, faults)


class RotatedLayout:
    """Rotated surface-code layout of distance ``d``.

    Data qubit ``(r, c)`` with ``0 <= r, c < d`` has id ``r * d + c``. Face
    ``(i, j)`` with ``0 <= i, j <= d`` covers the qubits ``(i-1, j-1)``,
    ``(i-1, j)``, ``(i, j-1)``, ``(i, j)`` that exist; its type is X when
    ``i + j`` is even and Z otherwise. All bulk faces are kept, plus X-type
    faces on the top and bottom edges and Z-type faces on the left and
    right edges. X errors are detected by Z faces.

    Checks are numbered with all X faces first, then all Z faces, each in
    row-major face order.
    """

    def __init__(self, d: int):
        self.d = d = _check_odd_distance(d)
        x_faces, z_faces = [], []
        for i in range(d + 1):
            for j in range(d + 1):
                kind = "X" if (i + j) % 2 == 0 else "Z"
                top_bottom = i in (0, d)
                left_right = j in (0, d)
                if top_bottom and left_right:
                    continue
                if top_bottom and kind != "X":
                    continue
                if left_right and kind != "Z":
                    continue
                support = [r * d + c for r in (i - 1, i) for c in (j - 1, j)
                           if 0 <= r < d and 0 <= c < d]
                (x_faces if kind == "X" else z_faces).append(((i, j), support))
        self.x_faces = x_faces
        self.z_faces = z_faces
        self.check_count = len(x_faces) + len(z_faces)
        self.qubit_count = d * d

    def x_error_checks(self, q: int) -> set[int]:
        """Z faces flipped by an X error on qubit ``q``."""
        off = len(self.x_faces)
        return {off + k for k, (_, s) in enumerate(self.z_faces) if q in s}

    def z_error_checks(self, q: int) -> set[int]:
        """X faces flipped by a Z error on qubit ``q``."""
        return {k for k, (_, s) in enumerate(self.x_faces) if q in s}

    def z_face_index(self, q: int) -> list[int]:
        return [k for k, (_, s) in enumerate(self.z_faces) if q in s]

    def x_logical_row(self) -> set[int]:
        """Top row: the support of the logical Z operator, so observable 0
        counts X errors on it."""
        return set(range(self.d))

    def z_logical_column(self) -> set[int]:
        """Left column: the support of the logical X operator, so observable
        1 counts Z errors on it."""
        return {r * self.d for r in range(self.d)}


def gen_surface_perfect(d: int, p_x: float, p_y: float, p_z: float) -> FaultModel:
    """Rotated surface code with perfect measurements.

    Every qubit has an X, a Y and a Z fault, in that order. A Y fault
    triggers the union of the X and Z syndromes and flips both observables
    the X and Z parts flip. Observable 0 is flipped by X or Y errors on the
    top row, observable 1 by Z or Y errors on the left column.

    Y faults are independent mechanisms whose syndrome and observables equal
    those of the X·Z pair, so the model is returned unmerged.
    """
    lay = RotatedLayout(d)
    p_x = check_probability("p_x", p_x)
    p_y = check_probability("p_y", p_y)
    p_z = check_probability("p_z", p_z)
    row, col = lay.x_logical_row(), lay.z_logical_column()
    faults = []
    for q in range(lay.qubit_count):
        r, c = divmod(q, lay.d)
        xs, zs = lay.x_error_checks(q), lay.z_error_checks(q)
        xo = {0} if q in row else set()
        zo = {1} if q in col else set()
        faults.append(Fault(p_x, xs, xo, f"X q({r},{c})"))
        faults.append(Fault(p_y, xs | zs, xo | zo, f"Y q({r},{c})"))
        faults.append(Fault(p_z, zs, zo, f"Z q({r},{c})"))
    return FaultModel(lay.check_count, 2, faults)


def gen_surface_phenom(d: int, T: int, p_x: float, p_meas: float) -> FaultModel:
    """Rotated surface code, X sector, with noisy syndrome measurement.

    Check ``t * nz + i`` is the change of Z face ``i`` between measurement
    step ``t - 1`` and step ``t`` (step ``-1`` reads all zeros). An X error
    occurring after step ``t`` (``t = -1 .. T-2``) triggers the incident
    faces at step ``t + 1``. A flipped readout of face ``i`` at step ``t``
    triggers ``(i, t)`` and ``(i, t + 1)``; at the last step only
    ``(i, T - 1)``. Observable 0 counts X errors on the top row.
    """
    lay = RotatedLayout(d)
    if int(T) != T or T < 1:
        raise ParameterError(f"number of rounds must be >= 1, got {T!r}")
    p_x = check_probability("p_x", p_x)
    p_meas = check_probability("p_meas", p_meas)
    nz = len(lay.z_faces)
    row = lay.x_logical_row()
    faults = []
    for t in range(T):
        for q in range(lay.qubit_count):
            r, c = divmod(q, lay.d)
            checks = {t * nz + k for k in lay.z_face_index(q)}
            faults.append(Fault(p_x, checks, {0} if q in row else set(),
                                f"X q({r},{c}) t{t - 1}"))
        for k in range(nz):
            checks = {t * nz + k}
            if t + 1 < T:
                checks.add((t + 1) * nz + k)
            faults.append(Fault(p_meas, checks, set(), f"M f{k} t{t}"))
    return merge_duplicates(FaultModel(T * nz, 1, faults))


def gen_three_check(m: int, p: float = 0.01) -> FaultModel:
    """``m`` faults on ``m + 2`` checks; fault ``i`` triggers ``{i, i+1, i+2}``.

    Every fault is a 3-fault, so no fault is primitive. One observable is
    flipped by every fault.
    """
    if int(m) != m or m < 1:
        raise ParameterError(f"three_check needs m >= 1, got {m!r}")
    p = check_probability("p", p)
    faults = [Fault(p, {i, i + 1, i + 2}, {0}, f"f{i}") for i in range(m)]
    return FaultModel(m + 2, 1, faults)


def petersen_edges() -> list[tuple[int, int]]:
    """The 15 edges of the Petersen graph, sorted.

    Vertices 0-4 form the outer 5-cycle, 5-9 the inner pentagram, and
    ``i -- i + 5`` are the spokes.
    """
    edges = set()
    for i in range(5):
        edges.add((i, (i + 1) % 5))
        edges.add((5 + i, 5 + (i + 2) % 5))
        edges.add((i, i + 5))
    return sorted(tuple(sorted(e)) for e in edges)


def gen_expander_petersen(p: float) -> FaultModel:
    """Vertex bits and edge checks on the Petersen graph.

    Flipping vertex ``v`` triggers its three incident edges, so every fault
    is a 3-fault. The single observable is the total parity of the flips.
    """
    p = check_probability("p", p)
    edges = petersen_edges()
    faults = []
    for v in range(10):
        checks = {k for k, e in enumerate(edges) if v in e}
        faults.append(Fault(p, checks, {0}, f"v{v}"))
    return FaultModel(len(edges), 1, faults)


def small_boundaries(model: FaultModel, max_size: int) -> list[tuple[int, ...]]:
    """Fault subsets of size ``<= max_size`` whose syndrome has weight <= 2."""
    out = []
    for k in range(1, max_size + 1):
        for combo in combinations(range(len(model)), k):
            s: frozenset[int] = frozenset()
            for i in combo:
                s ^= model.faults[i].checks
            if len(s) <= 2:
                out.append(combo)
    return out
