"""Honeycomb Floquet code on a torus at the Pauli-frame level.

Lattice
-------
Plaquettes sit at the sites ``(i, j)`` of a triangular lattice on an
``Lx`` by ``Ly`` torus with neighbour directions ``(1, 0)``, ``(0, 1)`` and
``(1, -1)``; plaquette ``(i, j)`` has colour ``(i - j) mod 3``. Qubits are
the triangles of this lattice (honeycomb vertices), two per site. Each
triangular edge ``{P, Q}`` is crossed by one honeycomb edge, whose colour is
the third colour. Edges of colour 0, 1, 2 carry XX, YY, ZZ checks.

Schedule
--------
Round ``r = 0 .. T-1`` measures every edge of colour ``r mod 3``. Rounds
``r - 1`` and ``r`` together reveal the plaquettes of colour
``(r + 1) mod 3``. The circuit starts from the state left by a noiseless
round ``-1`` (colour 2) in which every plaquette and the two observables
have known values, and ends with a noiseless readout of all plaquettes and
of the two observables.

Detectors
---------
For each plaquette, its successive inferred values are compared: the first
with the known initial value, each later one with the previous one, and the
last with the final noiseless readout. Every inference therefore appears in
exactly two detectors.

Observables
-----------
Two commuting logical operators of the state after round ``-1`` are chosen,
preferring ones that do not commute with every check. Before round ``r`` a
logical is multiplied by a set of edges measured in round ``r - 1`` so that
it commutes with the edges of round ``r``; the records of those edges join
the observable. Its value is the final noiseless readout times all joined
records.

Faults
------
Before each round ``r`` (slot ``r``), every qubit gets single-qubit Pauli
faults of the two types named by the colours of rounds ``r - 1`` and ``r``.
The remaining type acts like a check measured next to it composed with a
measurement-flip-like error and triggers four detectors in the bulk; it is
available with ``include_composite_paulis=True``. Every edge measurement in
rounds ``0 .. T-1`` has an outcome-flip fault.

A Pauli ``E`` in slot ``s`` flips every record taken after it whose operator
anticommutes with ``E``; an outcome flip flips exactly its record. A
detector or observable is flipped when an odd number of its records are.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from hypersplit.errors import HypersplitError, ParameterError
from hypersplit.fault_model import Fault, FaultModel, merge_duplicates
from hypersplit.generators.basic import check_probability
from hypersplit.generators.symplectic import (
    Basis,
    centralizer,
    commutation_signature,
    commutes,
    pauli,
    span_basis,
)

COLOUR_PAULI = "XYZ"
DIRECTIONS = ((1, 0), (0, 1), (1, -1))


class HoneycombLattice:
    """Plaquettes, qubits and coloured edges of a honeycomb torus."""

    def __init__(self, Lx: int, Ly: int):
        for name, L in (("Lx", Lx), ("Ly", Ly)):
            if int(L) != L or L < 3 or L % 3:
                raise ParameterError(f"{name} must be a positive multiple of 3, got {L!r}")
        self.Lx, self.Ly = int(Lx), int(Ly)
        self.plaquette_count = self.Lx * self.Ly
        self.qubit_count = 2 * self.plaquette_count

        triangles: dict[frozenset[int], list[int]] = {}
        for i in range(self.Lx):
            for j in range(self.Ly):
                up = [self.site(i, j), self.site(i + 1, j), self.site(i, j + 1)]
                down = [self.site(i + 1, j), self.site(i, j + 1), self.site(i + 1, j + 1)]
                for q, tri in ((2 * self.site(i, j), up), (2 * self.site(i, j) + 1, down)):
                    for a in range(3):
                        for b in range(a + 1, 3):
                            triangles.setdefault(frozenset((tri[a], tri[b])), []).append(q)

        # edges[k] = (qubit a, qubit b, colour, (P, Q)) in a fixed order
        edges = []
        for i in range(self.Lx):
            for j in range(self.Ly):
                p = self.site(i, j)
                for di, dj in DIRECTIONS:
                    q = self.site(i + di, j + dj)
                    a, b = sorted(triangles[frozenset((p, q))])
                    colour = (3 - self.colour(p) - self.colour(q)) % 3
                    edges.append((a, b, colour, (p, q)))
        self.edges = edges
        self.plaquette_edges = [[k for k, e in enumerate(edges) if p in e[3]]
                                for p in range(self.plaquette_count)]

    def site(self, i: int, j: int) -> int:
        return (i % self.Lx) * self.Ly + (j % self.Ly)

    def colour(self, p: int) -> int:
        i, j = divmod(p, self.Ly)
        return (i - j) % 3

    def edge_operator(self, k: int) -> int:
        a, b, colour, _ = self.edges[k]
        kind = COLOUR_PAULI[colour]
        return pauli(self.qubit_count, {a: kind, b: kind})

    def plaquette_operator(self, p: int) -> int:
        v = 0
        for k in self.plaquette_edges[p]:
            v ^= self.edge_operator(k)
        return v

    def edges_of_colour(self, colour: int) -> list[int]:
        return [k for k, e in enumerate(self.edges) if e[2] == colour]


@dataclass
class _Record:
    operator: int
    time: int          # measured after the faults of slots < time
    noisy: bool
    label: str


@dataclass
class HoneycombCircuit:
    """Records, detectors and observables of the honeycomb schedule."""

    lattice: HoneycombLattice
    rounds: int
    records: list[_Record] = field(default_factory=list)
    detectors: list[list[int]] = field(default_factory=list)
    detector_info: list[tuple[int, int]] = field(default_factory=list)
    observables: list[list[int]] = field(default_factory=list)
    logicals: list[int] = field(default_factory=list)
    edge_record: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def qubit_count(self) -> int:
        return self.lattice.qubit_count

    def flips_of_pauli(self, op: int, slot: int) -> tuple[set[int], set[int]]:
        """Detectors and observables flipped by Pauli ``op`` in ``slot``."""
        n = self.qubit_count
        flipped = {r for r, rec in enumerate(self.records)
                   if rec.time >= slot and not commutes(n, op, rec.operator)}
        return self._collect(flipped)

    def flips_of_record(self, record: int) -> tuple[set[int], set[int]]:
        return self._collect({record})

    def _collect(self, flipped: set[int]) -> tuple[set[int], set[int]]:
        dets = {d for d, recs in enumerate(self.detectors)
                if sum(r in flipped for r in recs) % 2}
        obs = {o for o, recs in enumerate(self.observables)
               if sum(r in flipped for r in recs) % 2}
        return dets, obs


def _choose_logicals(lat: HoneycombLattice, stabilizers: list[int]) -> list[int]:
    """Two commuting logicals of the stabilizer group, preferring outer ones."""
    n = lat.qubit_count
    stab = span_basis(stabilizers)
    logical = Basis()
    for v in stab.rows.values():
        logical.add(v[0])
    cands = []
    for v in centralizer(n, stabilizers):
        if logical.add(v):
            cands.append(v)
    if len(cands) != 4:
        raise HypersplitError(f"internal error: expected 2 logical qubits, found "
                              f"{len(cands) / 2}")
    all_edges = [lat.edge_operator(k) for k in range(len(lat.edges))]

    def inner(v: int) -> bool:
        # an inner logical has a representative commuting with every check
        target = commutation_signature(n, v, all_edges)
        sigs = span_basis(commutation_signature(n, s, all_edges) for s in stabilizers)
        return sigs.contains(target)

    combos = []
    for mask in range(1, 16):
        v = 0
        for i in range(4):
            if mask >> i & 1:
                v ^= cands[i]
        combos.append((inner(v), bin(mask).count("1"), mask, v))
    combos.sort()
    first = combos[0]
    for c in combos[1:]:
        if c[2] != first[2] and commutes(n, first[3], c[3]):
            return [first[3], c[3]]
    raise HypersplitError("internal error: no commuting logical pair")


def build_circuit(Lx: int, Ly: int, T: int) -> HoneycombCircuit:
    lat = HoneycombLattice(Lx, Ly)
    if int(T) != T or T < 6 or T % 3:
        raise ParameterError(f"rounds must be a multiple of 3 and >= 6, got {T!r}")
    n = lat.qubit_count
    circ = HoneycombCircuit(lat, int(T))
    colour_edges = [lat.edges_of_colour(c) for c in range(3)]

    def add_record(op, time, noisy, label):
        circ.records.append(_Record(op, time, noisy, label))
        return len(circ.records) - 1

    # Noiseless preparation: plaquette values and round -1 (colour 2) edges.
    init_plaquette = [add_record(lat.plaquette_operator(p), -1, False, f"init P{p}")
                      for p in range(lat.plaquette_count)]
    for k in colour_edges[2]:
        circ.edge_record[(k, -1)] = add_record(lat.edge_operator(k), -1, False, f"e{k} r-1")
    for r in range(T):
        for k in colour_edges[r % 3]:
            circ.edge_record[(k, r)] = add_record(lat.edge_operator(k), r, True, f"e{k} r{r}")
    final_plaquette = [add_record(lat.plaquette_operator(p), T, False, f"final P{p}")
                       for p in range(lat.plaquette_count)]

    # Detectors: chain of inferences per plaquette.
    for p in range(lat.plaquette_count):
        col = lat.colour(p)
        prev = [init_plaquette[p]]
        prev_round = -1
        for r in range(T):
            if (r + 1) % 3 != col:
                continue
            inference = [circ.edge_record[(k, rr)] for rr in (r - 1, r)
                         for k in lat.plaquette_edges[p]
                         if (k, rr) in circ.edge_record]
            circ.detectors.append(prev + inference)
            circ.detector_info.append((p, prev_round))
            prev, prev_round = inference, r
        circ.detectors.append(prev + [final_plaquette[p]])
        circ.detector_info.append((p, prev_round))

    # Observables.
    stabilizers = [lat.plaquette_operator(p) for p in range(lat.plaquette_count)]
    stabilizers += [lat.edge_operator(k) for k in colour_edges[2]]
    logicals = _choose_logicals(lat, stabilizers)
    for L in logicals:
        joined: list[int] = []
        for r in range(T):
            now = [lat.edge_operator(k) for k in colour_edges[r % 3]]
            prev_c = (r - 1) % 3
            target = commutation_signature(n, L, now)
            if target == 0:
                continue
            prev_edges = colour_edges[prev_c]
            sigs = span_basis(commutation_signature(n, lat.edge_operator(k), now)
                              for k in prev_edges)
            chosen = sigs.express(target)
            if chosen is None:
                raise HypersplitError("internal error: cannot update logical operator")
            for idx in chosen:
                k = prev_edges[idx]
                L ^= lat.edge_operator(k)
                joined.append(circ.edge_record[(k, r - 1)])
        final = add_record(L, T, False, f"final L{len(circ.logicals)}")
        circ.logicals.append(L)
        circ.observables.append(joined + [final])
    return circ


def _keep(dets: set[int], obs: set[int]) -> bool:
    if not dets and obs:
        raise HypersplitError("internal error: undetectable single fault flips an observable")
    return bool(dets)


def gen_honeycomb(Lx: int, Ly: int, T: int, p_x: float, p_y: float, p_z: float,
                  p_meas: float, include_composite_paulis: bool = False,
                  merge: bool = True) -> FaultModel:
    """Fault model of the honeycomb Floquet code (see module docstring).

    Checks are the detectors in plaquette-major order, each plaquette's
    detectors in time order. Faults are listed slot by slot: the Pauli
    faults before round ``r`` (qubit-major), then the outcome flips of
    round ``r``. Faults that flip no detector are dropped; ``merge`` merges
    faults with identical syndrome and observables.
    """
    probs = [check_probability("p_x", p_x), check_probability("p_y", p_y),
             check_probability("p_z", p_z)]
    p_meas = check_probability("p_meas", p_meas)
    circ = build_circuit(Lx, Ly, T)
    lat = circ.lattice
    n = lat.qubit_count
    faults = []
    for r in range(circ.rounds):
        kinds = sorted({(r - 1) % 3, r % 3})
        if include_composite_paulis:
            kinds = [0, 1, 2]
        for q in range(n):
            for c in kinds:
                dets, obs = circ.flips_of_pauli(pauli(n, {q: COLOUR_PAULI[c]}), r)
                if _keep(dets, obs):
                    faults.append(Fault(probs[c], dets, obs,
                                        f"{COLOUR_PAULI[c]} q{q} s{r}"))
        for k in lat.edges_of_colour(r % 3):
            dets, obs = circ.flips_of_record(circ.edge_record[(k, r)])
            if _keep(dets, obs):
                faults.append(Fault(p_meas, dets, obs, f"M e{k} r{r}"))
    model = FaultModel(len(circ.detectors), len(circ.observables), faults)
    return merge_duplicates(model) if merge else model
