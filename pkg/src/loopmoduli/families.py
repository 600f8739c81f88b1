"""Generator enumeration per family, with closed-form counting cross-checks.

Four families of admissible one-loop graphs with s labeled legs are
supported:

* ``uncolored``   every edge carries the constant color 1,
* ``mcolored``    edges carry arbitrary colors from {1..m},
* ``holo``        edges carry pairwise distinct colors from {1..s},
* ``remembered``  holocolored, and contracted edges deposit their color
                  as a weight on the merged vertex.

The first two families feed a cubical chain complex whose generators are
pairs (graph, marked forest); the last two feed semi-simplicial complexes
whose dimension-d generators are the graphs with d+1 edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product

from . import cycle_graph as cg
from .cycle_graph import (CUBICAL_FAMILIES, FAMILIES, HOLO, MAX_LEGS, MCOLORED,
                          REMEMBERED, SIMPLICIAL_FAMILIES, UNCOLORED, CycleGraph)
from .errors import CapacityError


@dataclass(frozen=True)
class FamilySpec:
    """A family name, leg count s and color count m.

    m is forced to 1 for the uncolored family and to s for the holocolored
    and remembered families; passing a conflicting explicit value raises.
    """

    family: str
    s: int
    m: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if not 1 <= self.s <= MAX_LEGS:
            raise ValueError(f"legs must lie in 1..{MAX_LEGS}, got {self.s}")
        if self.family == MCOLORED:
            if self.m < 1:
                raise ValueError("the mcolored family needs an explicit m >= 1")
            return
        forced = 1 if self.family == UNCOLORED else self.s
        if self.m not in (0, forced):
            raise ValueError(
                f"family {self.family!r} fixes m={forced}, got {self.m}")
        object.__setattr__(self, "m", forced)

    @property
    def is_cubical(self) -> bool:
        return self.family in CUBICAL_FAMILIES

    @property
    def top_dim(self) -> int:
        return self.s - 1

    def label(self) -> str:
        return f"{self.family}_s{self.s}_m{self.m}"


# -- leg partitions ------------------------------------------------------


def _leg_partitions(s, k):
    """Partitions of {1..s} into k unlabeled non-empty blocks, as masks.

    Restricted-growth enumeration; block 0 always contains leg 1.
    """
    out = []
    blocks = [0] * k

    def rec(label, used):
        if label > s:
            if used == k:
                out.append(tuple(blocks))
            return
        if used + (s - label + 1) < k:
            return
        bit = 1 << label
        for i in range(used):
            blocks[i] |= bit
            rec(label + 1, used)
            blocks[i] &= ~bit
        if used < k:
            blocks[used] = bit
            rec(label + 1, used + 1)
            blocks[used] = 0

    rec(1, 0)
    return out


def _weight_assignments(pool, sizes):
    """Ways to split the color list `pool` into ordered blocks of given sizes,
    yielded as tuples of masks."""
    if not sizes:
        yield ()
        return
    head, rest = sizes[0], sizes[1:]
    for chosen in combinations(pool, head):
        mask = cg.mask_of(chosen)
        left = [c for c in pool if c not in chosen]
        for tail in _weight_assignments(left, rest):
            yield (mask,) + tail


def _raw_configurations(spec, k):
    """Yield (leg_masks, rem_masks, colors) hitting every isomorphism class.

    Rotations are quotiented out by pinning the block containing leg 1 at
    slot 0; reflections and coincidences are left to canonicalization.
    """
    s, m = spec.s, spec.m
    zero = (0,) * k
    if spec.family in CUBICAL_FAMILIES:
        palettes = list(product(range(1, m + 1), repeat=k))
    else:
        palettes = list(permutations(range(1, s + 1), k))
    for blocks in _leg_partitions(s, k):
        head, rest = blocks[0], blocks[1:]
        for arr in permutations(rest):
            legs = (head,) + arr
            if spec.family != REMEMBERED:
                for colors in palettes:
                    yield legs, zero, colors
            else:
                sizes = [b.bit_count() - 1 for b in legs]
                for colors in palettes:
                    pool = [c for c in range(1, s + 1) if c not in colors]
                    for rems in _weight_assignments(pool, sizes):
                        yield legs, rems, colors


def enumerate_graphs(spec: FamilySpec, k: int) -> list[CycleGraph]:
    """All isomorphism classes of admissible k-edge graphs of the family,
    canonical, duplicate-free, sorted by encoding.  Empty for k > s."""
    if k < 1:
        raise ValueError("graphs have at least one edge")
    if k > spec.s:
        return []
    seen = {}
    for legs, rems, colors in _raw_configurations(spec, k):
        lm, rm, cc, _, _ = cg._canonical_raw(legs, rems, colors, None)
        seen[(lm, rm, cc)] = None
    gens = [CycleGraph(lm, cc, rm, family=spec.family, validate=False)
            for (lm, rm, cc) in seen]
    gens.sort(key=cg.encode)
    return gens


def count_graph_classes(spec: FamilySpec, k: int) -> int:
    """len(enumerate_graphs(spec, k)) without materializing graph objects."""
    if k < 1:
        raise ValueError("graphs have at least one edge")
    if k > spec.s:
        return 0
    seen = set()
    for legs, rems, colors in _raw_configurations(spec, k):
        lm, rm, cc, _, _ = cg._canonical_raw(legs, rems, colors, None)
        seen.add((lm, rm, cc))
    return len(seen)


def enumerate_cubes(spec: FamilySpec, d: int):
    """All canonical (graph, forest) pairs of dimension d = |forest|,
    deduplicated under the simultaneous dihedral action."""
    if spec.family not in CUBICAL_FAMILIES:
        raise ValueError(f"family {spec.family!r} has no cubical model")
    if d < 0:
        raise ValueError("cube dimension must be >= 0")
    seen = {}
    for k in range(max(d + 1, 1), spec.s + 1):
        for g in enumerate_graphs(spec, k):
            for forest in combinations(range(k), d):
                lm, rm, cc, mk, _ = cg._canonical_raw(
                    g.leg_masks, g.rem_masks, g.colors, forest)
                seen[(lm, rm, cc, mk)] = None
    cubes = [(CycleGraph(lm, cc, rm, family=spec.family, validate=False), mk)
             for (lm, rm, cc, mk) in seen]
    cubes.sort(key=lambda pair: cg.encode(pair[0], pair[1]))
    return cubes


def count_cube_classes(spec: FamilySpec, d: int) -> int:
    if spec.family not in CUBICAL_FAMILIES:
        raise ValueError(f"family {spec.family!r} has no cubical model")
    if d < 0:
        raise ValueError("cube dimension must be >= 0")
    seen = set()
    for k in range(max(d + 1, 1), spec.s + 1):
        for g in enumerate_graphs(spec, k):
            for forest in combinations(range(k), d):
                lm, rm, cc, mk, _ = cg._canonical_raw(
                    g.leg_masks, g.rem_masks, g.colors, forest)
                seen.add((lm, rm, cc, mk))
    return len(seen)


# -- closed-form counts --------------------------------------------------


def stirling2(n: int, k: int) -> int:
    """Stirling number of the second kind via the alternating-sum formula,
    exact."""
    if n < 0 or k < 0:
        raise ValueError("stirling2 needs non-negative arguments")
    if k > n:
        return 0
    total = sum((-1) ** (k - j) * math.comb(k, j) * j ** n for j in range(k + 1))
    q, r = divmod(total, math.factorial(k))
    assert r == 0
    return q


def _int_partitions(total, parts):
    """Weakly increasing positive integer tuples of given length and sum."""
    out = []

    def rec(prefix, lo, left, slots):
        if slots == 0:
            if left == 0:
                out.append(tuple(prefix))
            return
        for v in range(lo, left - (slots - 1) + 1):
            prefix.append(v)
            rec(prefix, v, left - v, slots - 1)
            prefix.pop()

    rec([], 1, total, parts)
    return out


def count_cells_closed_form(spec: FamilySpec, k: int) -> int:
    """Number of isomorphism classes of k-edge graphs in the family.

    For the colored cycle this factors into leg partitions, cyclic
    arrangements and colorings; k = 1 and k = 2 carry the extra symmetry
    of the rose and the banana.
    """
    if k < 1:
        raise ValueError("graphs have at least one edge")
    s, m = spec.s, spec.m
    if k > s:
        return 0
    if spec.family in CUBICAL_FAMILIES:
        if k == 1:
            return m
        if k == 2:
            return stirling2(s, 2) * (m * (m + 1) // 2)
        return stirling2(s, k) * (math.factorial(k - 1) * m ** k // 2)
    if spec.family == HOLO:
        colorings = math.comb(s, k) * math.factorial(k)
        if k == 2:
            colorings //= 2
        legstructs = stirling2(s, k) * math.factorial(k - 1)
        if k <= 2:
            legstructs *= 2
        return colorings * legstructs // 2
    # remembered: weighted sum over the leg-count partition of the vertices
    total = Fraction(0)
    for part in _int_partitions(s, k):
        mult = {}
        for v in part:
            mult[v] = mult.get(v, 0) + 1
        g_factor = math.factorial(k)
        for c in mult.values():
            g_factor //= math.factorial(c)
        denom = 1
        for v in part:
            denom *= math.factorial(v) * math.factorial(v - 1)
        total += Fraction(g_factor, denom)
    scale = Fraction(math.factorial(s) ** 2 * (2 if k == 1 else 1), 2 * k)
    value = scale * total
    assert value.denominator == 1
    return int(value)


# -- generator tables ----------------------------------------------------


class GeneratorTable:
    """Per-dimension ordered generator lists with encoding lookups.

    Ordinals are positions in the encoding-sorted list, so matrices built
    from a table are independent of enumeration order.
    """

    def __init__(self, spec: FamilySpec, gens_by_dim: dict):
        self.spec = spec
        self._gens = {}
        self._encodings = {}
        self._index = {}
        for d in sorted(gens_by_dim):
            gens = gens_by_dim[d]
            if spec.is_cubical:
                encs = [cg.encode(g, f) for g, f in gens]
            else:
                encs = [cg.encode(g) for g in gens]
            order = sorted(range(len(gens)), key=encs.__getitem__)
            self._gens[d] = [gens[i] for i in order]
            self._encodings[d] = [encs[i] for i in order]
            self._index[d] = {e: i for i, e in enumerate(self._encodings[d])}

    @property
    def dims(self) -> tuple[int, ...]:
        top = max(self._gens) if self._gens else -1
        return tuple(len(self._gens.get(d, ())) for d in range(top + 1))

    def generators(self, d: int) -> list:
        return self._gens.get(d, [])

    def encodings(self, d: int) -> list[str]:
        return self._encodings.get(d, [])

    def ordinal(self, d: int, encoding: str) -> int:
        return self._index[d][encoding]


def build_tables(spec: FamilySpec, max_generators: int | None = None) -> GeneratorTable:
    """Generator tables for every dimension 0..s-1."""
    per_dim = {}
    for d in range(spec.s):
        if spec.is_cubical:
            gens = enumerate_cubes(spec, d)
        else:
            gens = enumerate_graphs(spec, d + 1)
        if max_generators is not None and len(gens) > max_generators:
            raise CapacityError(
                f"dimension {d} has {len(gens)} generators, cap is {max_generators}")
        per_dim[d] = gens
    return GeneratorTable(spec, per_dim)


def iterated_face_generators(spec: FamilySpec) -> dict[int, set[str]]:
    """Generators reachable from the top simplices by repeated contraction.

    Simplicial families only; used to cross-check direct enumeration of
    the remembered family's intermediate dimensions.
    """
    if spec.family not in SIMPLICIAL_FAMILIES:
        raise ValueError("face closure applies to the simplicial families")
    mode = cg.REMEMBER if spec.family == REMEMBERED else cg.FORGET
    current = {g for g in enumerate_graphs(spec, spec.s)}
    out = {spec.top_dim: {cg.encode(g) for g in current}}
    for d in range(spec.top_dim - 1, -1, -1):
        faces = set()
        for g in current:
            for e in range(g.k):
                faces.add(cg.contract_edge(g, e, mode))
        out[d] = {cg.encode(g) for g in faces}
        current = faces
    return out
