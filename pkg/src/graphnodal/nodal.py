"""Weak and strong nodal domains, and the P/N/E/Z vertex decomposition.

A weak nodal domain of (G, f) is a maximal connected vertex set on which f
takes no two strictly opposite signs (f(x) f(y) >= 0 pairwise); a strong
domain is a maximal connected set on which f keeps one strict sign.  Signs
are taken relative to a zero tolerance tau: sign(v) = 0 iff |f(v)| <= tau.

Maximality has one subtle consequence for weak domains.  A connected block
of zero vertices that touches any strictly signed vertex is absorbed by that
side's domain and is not itself maximal, so the only sign-0 weak domains are
entire connected components of G on which f vanishes identically.  The
brute-force oracle below enumerates maximal sets directly and pins this down.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from .graph_core import Graph, connected_components

__all__ = [
    "DEFAULT_TAU_SCALE",
    "DomainPartition",
    "NodalSummary",
    "SignedFunction",
    "brute_force_domains",
    "nodal_summary",
    "strong_nodal_domains",
    "weak_nodal_domains",
    "write_domains_csv",
    "summary_dict",
    "write_summary_json",
]

# default zero tolerance = DEFAULT_TAU_SCALE * ||f||_inf
DEFAULT_TAU_SCALE = 1e-9

BRUTE_FORCE_LIMIT = 20

_SIGN_LABEL = {1: "+", -1: "-", 0: "0"}


@dataclass(frozen=True, eq=False)
class SignedFunction:
    """Real vertex function with a zero tolerance and derived signs.

    signs[v] is +1, -1 or 0 with 0 exactly when |values[v]| <= tau.  Use
    from_values; tau=None picks the floating-point default, tau=0 keeps
    exact signs for rational test inputs.
    """

    values: np.ndarray
    tau: float
    signs: np.ndarray

    @classmethod
    def from_values(
        cls, values: Sequence[float] | np.ndarray, tau: float | None = None
    ) -> "SignedFunction":
        vals = np.asarray(values, dtype=np.float64).copy()
        if vals.ndim != 1:
            raise ValueError(f"expected a flat value array, got shape {vals.shape}")
        if not np.isfinite(vals).all():
            raise ValueError("function values must be finite")
        if tau is None:
            tau = DEFAULT_TAU_SCALE * float(np.abs(vals).max()) if vals.size else 0.0
        tau = float(tau)
        if not tau >= 0.0:
            raise ValueError(f"zero tolerance must be nonnegative, got {tau}")
        signs = np.where(np.abs(vals) <= tau, 0, np.sign(vals)).astype(np.int8)
        vals.flags.writeable = False
        signs.flags.writeable = False
        return cls(values=vals, tau=tau, signs=signs)

    def __len__(self) -> int:
        return int(self.values.shape[0])


@dataclass(frozen=True)
class DomainPartition:
    """Nodal domains of one kind: (sorted vertex tuple, sign) pairs.

    Domains are listed in lexicographic order of their vertex tuples.  Weak
    domains may overlap, but only on zero vertices; strong domains are
    pairwise disjoint.
    """

    kind: str
    domains: tuple[tuple[tuple[int, ...], int], ...]

    @property
    def count(self) -> int:
        return len(self.domains)

    def vertex_sets(self) -> set[tuple[tuple[int, ...], int]]:
        return set(self.domains)


def _check_lengths(g: Graph, f: SignedFunction) -> None:
    if len(f) != g.n:
        raise ValueError(f"function length {len(f)} != vertex count {g.n}")


def _canonical(kind: str, raw: list[tuple[list[int], int]]) -> DomainPartition:
    domains = tuple(sorted((tuple(verts), sign) for verts, sign in raw))
    return DomainPartition(kind=kind, domains=domains)


def weak_nodal_domains(g: Graph, f: SignedFunction) -> DomainPartition:
    """All maximal connected sets with no two strictly opposite signs.

    Computed from the components of the subgraphs induced on {sign >= 0} and
    on {sign <= 0}: a component survives iff it contains a strictly signed
    vertex (taking that sign), except that all-zero connected components of
    G itself survive once with sign 0.  All-zero side components adjacent to
    a strictly signed vertex are strict subsets of the opposite side's
    domain, hence not maximal, and are dropped.
    """
    _check_lengths(g, f)
    signs = f.signs
    raw: list[tuple[list[int], int]] = []
    for side in (1, -1):
        for comp in connected_components(g, mask=(signs * side) >= 0):
            if any(signs[v] == side for v in comp):
                raw.append((comp, side))
    for comp in connected_components(g, mask=signs == 0):
        closed = all(signs[w] == 0 for v in comp for w in g.adjacency[v])
        if closed:
            raw.append((comp, 0))
    return _canonical("weak", raw)


def strong_nodal_domains(g: Graph, f: SignedFunction) -> DomainPartition:
    """Connected components of the strictly positive and strictly negative sets."""
    _check_lengths(g, f)
    signs = f.signs
    raw: list[tuple[list[int], int]] = []
    for side in (1, -1):
        for comp in connected_components(g, mask=signs == side):
            raw.append((comp, side))
    return _canonical("strong", raw)


def brute_force_domains(g: Graph, f: SignedFunction, kind: str) -> DomainPartition:
    """Oracle: enumerate every connected vertex subset, filter by the domain
    condition, and keep the maximal ones under inclusion.  Refuses n > 20."""
    _check_lengths(g, f)
    if kind not in ("weak", "strong"):
        raise ValueError(f"kind must be 'weak' or 'strong', got {kind!r}")
    if g.n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_LIMIT}, got n={g.n}")
    signs = f.signs
    nbr_mask = [0] * g.n
    for v in range(g.n):
        for w in g.adjacency[v]:
            nbr_mask[v] |= 1 << w

    def is_connected(subset: int) -> bool:
        start = subset & -subset
        reached = start
        frontier = start
        while frontier:
            grown = reached
            v_bits = frontier
            while v_bits:
                bit = v_bits & -v_bits
                grown |= nbr_mask[bit.bit_length() - 1] & subset
                v_bits ^= bit
            frontier = grown & ~reached
            reached = grown
        return reached == subset

    def sign_ok(members: list[int]) -> bool:
        s = {int(signs[v]) for v in members}
        if kind == "weak":
            return not (1 in s and -1 in s)
        return s == {1} or s == {-1}

    valid: list[int] = []
    for subset in range(1, 1 << g.n):
        members = [v for v in range(g.n) if subset >> v & 1]
        if sign_ok(members) and is_connected(subset):
            valid.append(subset)
    raw = []
    for s in valid:
        if any(t != s and t & s == s for t in valid):
            continue
        members = [v for v in range(g.n) if s >> v & 1]
        present = {int(signs[v]) for v in members}
        sign = 1 if 1 in present else (-1 if -1 in present else 0)
        raw.append((members, sign))
    return _canonical(kind, raw)


@dataclass(frozen=True)
class NodalSummary:
    """The P/N/E/Z decomposition for one (graph, function) pair.

    positive_part is the largest weak domain free of strictly negative
    vertices, negative_part the mirror image; exceptional is everything
    outside their union, and zeros is the sign-0 vertex set.  "Largest" ties
    break by most strictly signed vertices, then smallest contained vertex.
    """

    positive_part: tuple[int, ...]
    negative_part: tuple[int, ...]
    exceptional: tuple[int, ...]
    zeros: tuple[int, ...]
    weak_count: int
    strong_count: int
    exceptional_zeros: int


def nodal_summary(g: Graph, f: SignedFunction) -> NodalSummary:
    _check_lengths(g, f)
    weak = weak_nodal_domains(g, f)
    strong = strong_nodal_domains(g, f)
    signs = f.signs

    def pick(forbidden_sign: int) -> tuple[int, ...]:
        candidates = [
            verts
            for verts, _ in weak.domains
            if not any(signs[v] == forbidden_sign for v in verts)
        ]
        if not candidates:
            return ()
        best = min(
            candidates,
            key=lambda verts: (
                -len(verts),
                -sum(1 for v in verts if signs[v] != 0),
                verts[0],
            ),
        )
        return tuple(best)

    positive_part = pick(forbidden_sign=-1)
    negative_part = pick(forbidden_sign=1)
    covered = set(positive_part) | set(negative_part)
    exceptional = tuple(v for v in range(g.n) if v not in covered)
    zeros = tuple(int(v) for v in np.flatnonzero(signs == 0))
    zero_set = set(zeros)
    return NodalSummary(
        positive_part=positive_part,
        negative_part=negative_part,
        exceptional=exceptional,
        zeros=zeros,
        weak_count=weak.count,
        strong_count=strong.count,
        exceptional_zeros=sum(1 for v in exceptional if v in zero_set),
    )


def write_domains_csv(partition: DomainPartition, stream: IO[str]) -> None:
    """One row per domain: kind, sign, size, semicolon-joined sorted vertices."""
    for verts, sign in partition.domains:
        stream.write(
            f"{partition.kind},{_SIGN_LABEL[sign]},{len(verts)},"
            + ";".join(str(v) for v in verts)
            + "\n"
        )


def summary_dict(summary: NodalSummary) -> dict:
    return {
        "P_size": len(summary.positive_part),
        "N_size": len(summary.negative_part),
        "E_size": len(summary.exceptional),
        "Z_size": len(summary.zeros),
        "weak_count": summary.weak_count,
        "strong_count": summary.strong_count,
        "E_cap_Z": summary.exceptional_zeros,
    }


def write_summary_json(summary: NodalSummary, stream: IO[str]) -> None:
    json.dump(summary_dict(summary), stream, indent=1, sort_keys=True)
    stream.write("\n")
