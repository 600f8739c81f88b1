"""Canonical one-loop graphs with labeled legs, edge colors and vertex weights.

A rank-one admissible graph is a cycle of k >= 1 vertices and k edges; k = 1
is the rose, a single vertex with a self-loop.  Vertex slot i sits between
edge slots i-1 and i (indices mod k), so edge slot i joins vertices i and
i+1.  Legs are labels from {1..s} stored as bitmasks, one non-empty set per
vertex, and the sets partition {1..s}; this is exactly admissibility, since
every cycle vertex already has two internal half-edges.

The dihedral group of order 2k acts by rotating and reflecting slots.  All
structural operations canonicalize by picking the lexicographically minimal
image of the alternating slot sequence (vertex payload, edge color, mark
flag), where a vertex payload is the pair (sorted legs, sorted weights).
Because leg sets are disjoint and non-empty, exactly one vertex slot carries
the minimal payload, so only two dihedral images are ever candidates.
"""

from __future__ import annotations

from functools import lru_cache

from .errors import FoldingError, LoopContractionError, StructuralError

MAX_LEGS = 16

UNCOLORED = "uncolored"
MCOLORED = "mcolored"
HOLO = "holo"
REMEMBERED = "remembered"
FAMILIES = (UNCOLORED, MCOLORED, HOLO, REMEMBERED)
CUBICAL_FAMILIES = (UNCOLORED, MCOLORED)
SIMPLICIAL_FAMILIES = (HOLO, REMEMBERED)

FORGET = "forget"
REMEMBER = "remember"


@lru_cache(maxsize=None)
def _bits(mask: int) -> tuple[int, ...]:
    out = []
    label = 0
    while mask:
        if mask & 1:
            out.append(label)
        mask >>= 1
        label += 1
    return tuple(out)


def mask_of(labels) -> int:
    m = 0
    for x in labels:
        m |= 1 << x
    return m


class CycleGraph:
    """Immutable cycle graph.

    `leg_masks[i]` and `rem_masks[i]` are the leg labels and remembered
    colors of vertex i as bitmasks (bit j is label/color j); `colors[i]`
    is the color of edge i.  Instances enumerated into generator tables
    are stored in canonical form; arbitrary valid slot data is accepted
    so that intermediate images can be represented too.
    """

    __slots__ = ("k", "leg_masks", "rem_masks", "colors", "family", "_hash")

    def __init__(self, leg_masks, colors, rem_masks=None, family=MCOLORED, validate=True):
        self.k = len(leg_masks)
        self.leg_masks = tuple(leg_masks)
        self.colors = tuple(colors)
        self.rem_masks = tuple(rem_masks) if rem_masks is not None else (0,) * self.k
        self.family = family
        self._hash = None
        if validate:
            self._validate()

    # -- invariants ------------------------------------------------------

    def _validate(self):
        k = self.k
        if k < 1:
            raise StructuralError("a cycle graph needs at least one vertex")
        if len(self.colors) != k or len(self.rem_masks) != k:
            raise StructuralError("slot lists must all have length k")
        if self.family not in FAMILIES:
            raise StructuralError(f"unknown family {self.family!r}")
        union = 0
        for lm in self.leg_masks:
            if lm <= 0:
                raise StructuralError("every vertex needs at least one leg")
            if lm & 1:
                raise StructuralError("leg labels start at 1")
            if lm & union:
                raise StructuralError("leg sets must be disjoint")
            union |= lm
        s = union.bit_length() - 1
        if union != (1 << (s + 1)) - 2:
            raise StructuralError("leg sets must partition {1..s}")
        if s > MAX_LEGS:
            raise StructuralError(f"at most {MAX_LEGS} legs are supported")
        for c in self.colors:
            if not isinstance(c, int) or c < 1:
                raise StructuralError("edge colors are integers >= 1")
        if self.family == UNCOLORED and any(c != 1 for c in self.colors):
            raise StructuralError("uncolored graphs carry the constant color 1")
        if self.family in SIMPLICIAL_FAMILIES:
            if len(set(self.colors)) != k:
                raise StructuralError("edge colors must be pairwise distinct")
            if any(c > s for c in self.colors):
                raise StructuralError(f"edge colors must lie in 1..{s}")
        if self.family == REMEMBERED:
            taken = mask_of(self.colors)
            for rm in self.rem_masks:
                if rm & 1 or rm < 0:
                    raise StructuralError("remembered colors start at 1")
                if rm & taken:
                    raise StructuralError("remembered colors must be globally distinct")
                taken |= rm
            if taken.bit_length() - 1 > s:
                raise StructuralError(f"remembered colors must lie in 1..{s}")
        elif any(self.rem_masks):
            raise StructuralError("only the remembered family carries vertex weights")

    # -- basic structure -------------------------------------------------

    @property
    def s(self) -> int:
        mask = 0
        for lm in self.leg_masks:
            mask |= lm
        return mask.bit_count()

    def legs(self, i: int) -> tuple[int, ...]:
        return _bits(self.leg_masks[i])

    def remembered(self, i: int) -> tuple[int, ...]:
        return _bits(self.rem_masks[i])

    def __eq__(self, other):
        if not isinstance(other, CycleGraph):
            return NotImplemented
        return (self.family == other.family and self.leg_masks == other.leg_masks
                and self.rem_masks == other.rem_masks and self.colors == other.colors)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.family, self.leg_masks, self.rem_masks, self.colors))
        return self._hash

    def __repr__(self):
        return f"CycleGraph({encode(self)!r}, family={self.family!r})"


# -- dihedral action -----------------------------------------------------
#
# Moves are pairs (r, flip).  flip=+1 is the rotation placing vertex r at
# slot 0: V'[i] = V[(i+r) % k], E'[i] = E[(i+r) % k].  flip=-1 composes it
# with the reflection through vertex r: V'[i] = V[(r-i) % k],
# E'[i] = E[(r-i-1) % k].  Edge slot j therefore maps to (j-r) % k under a
# rotation and to (r-j-1) % k under a reflection.


def dihedral_image(g: CycleGraph, r: int, flip: int,
                   forest=None) -> tuple[CycleGraph, tuple[int, ...] | None]:
    """Apply one dihedral move to a graph and an optional edge-slot subset."""
    k = g.k
    if flip == 1:
        lm = g.leg_masks[r:] + g.leg_masks[:r]
        rm = g.rem_masks[r:] + g.rem_masks[:r]
        cc = g.colors[r:] + g.colors[:r]
        new_forest = None if forest is None else tuple(sorted((j - r) % k for j in forest))
    elif flip == -1:
        lm = tuple(g.leg_masks[(r - i) % k] for i in range(k))
        rm = tuple(g.rem_masks[(r - i) % k] for i in range(k))
        cc = tuple(g.colors[(r - i - 1) % k] for i in range(k))
        new_forest = None if forest is None else tuple(sorted((r - j - 1) % k for j in forest))
    else:
        raise ValueError("flip must be +1 or -1")
    img = CycleGraph(lm, cc, rm, family=g.family, validate=False)
    return img, new_forest


def _perm_sign(seq) -> int:
    inv = 0
    n = len(seq)
    for a in range(n):
        for b in range(a + 1, n):
            if seq[a] > seq[b]:
                inv += 1
    return -1 if inv & 1 else 1


def _canonical_raw(leg_masks, rem_masks, colors, marks):
    """Minimal dihedral image of raw slot data.

    `marks` is an ordered tuple of edge slots (the order fixes the
    orientation) or None.  Returns permuted slot tuples, the sorted new
    mark positions (or None) and the sign of the permutation taking the
    marks, in the given order, to ascending canonical position.
    """
    k = len(colors)
    payloads = [(_bits(l), _bits(r)) for l, r in zip(leg_masks, rem_masks)]
    order = {p: i for i, p in enumerate(sorted(set(payloads)))}
    ranks = tuple(order[p] for p in payloads)

    if marks is None:
        flags = (0,) * k
    else:
        fl = [0] * k
        for e in marks:
            fl[e] = 1
        flags = tuple(fl)

    # doubled tuples make every rotation a plain slice
    dv, dc, df = ranks + ranks, colors + colors, flags + flags
    rv = ranks[::-1]
    rc = colors[::-1]
    rf = flags[::-1]
    rv, rc, rf = rv + rv, rc + rc, rf + rf

    best_key = None
    best_moves = []
    rmin = min(ranks)
    for r in range(k):
        if ranks[r] != rmin:
            continue
        key = tuple(zip(dv[r:r + k], dc[r:r + k], df[r:r + k]))
        if best_key is None or key < best_key:
            best_key, best_moves = key, [(r, 1)]
        elif key == best_key:
            best_moves.append((r, 1))
        i0 = k - 1 - r
        i1 = (k - r) if r else k
        key = tuple(zip(rv[i0:i0 + k], rc[i1:i1 + k], rf[i1:i1 + k]))
        if key < best_key:
            best_key, best_moves = key, [(r, -1)]
        elif key == best_key:
            best_moves.append((r, -1))

    r, flip = best_moves[0]
    if flip == 1:
        lm = leg_masks[r:] + leg_masks[:r]
        rm = rem_masks[r:] + rem_masks[:r]
        cc = colors[r:] + colors[:r]
    else:
        lm = tuple(leg_masks[(r - i) % k] for i in range(k))
        rm = tuple(rem_masks[(r - i) % k] for i in range(k))
        cc = tuple(colors[(r - i - 1) % k] for i in range(k))

    if marks is None:
        return lm, rm, cc, None, 1

    def positions(move):
        rr, fl = move
        if fl == 1:
            return [(j - rr) % k for j in marks]
        return [(rr - j - 1) % k for j in marks]

    new_pos = positions((r, flip))
    sign = _perm_sign(new_pos)
    for other in best_moves[1:]:
        if _perm_sign(positions(other)) != sign:
            raise FoldingError(
                "two minimal dihedral images disagree on mark orientation")
    return lm, rm, cc, tuple(sorted(new_pos)), sign


def canonical_form(g: CycleGraph, forest=None):
    """Canonical representative of a graph with an optional marked forest.

    Returns (graph, forest, sign).  The forest argument is an ordered
    sequence of edge slots; its order is the orientation the sign is
    relative to.  The returned forest is ascending; the sign is +1 or -1.
    Idempotent, and constant on dihedral orbits.
    """
    marks = None
    if forest is not None:
        marks = tuple(forest)
        if len(set(marks)) != len(marks):
            raise StructuralError("forest edges must be distinct")
        if any(not 0 <= e < g.k for e in marks):
            raise IndexError("forest edge slot out of range")
        if len(marks) >= g.k:
            raise StructuralError("the full edge set is the loop, not a forest")
    lm, rm, cc, mk, sign = _canonical_raw(g.leg_masks, g.rem_masks, g.colors, marks)
    out = CycleGraph(lm, cc, rm, family=g.family, validate=False)
    return out, mk, sign


def stabilizer(g: CycleGraph) -> list[tuple[int, int]]:
    """All dihedral moves (r, flip) fixing the graph's slot data.

    Leg sets pin every rotation, so this is {identity} except for the
    rose (loop reversal) and the equal-colored banana (edge swap).
    """
    out = []
    for r in range(g.k):
        for flip in (1, -1):
            img, _ = dihedral_image(g, r, flip)
            if img == g:
                out.append((r, flip))
    return out


# -- contraction ---------------------------------------------------------


def _contract_raw(leg_masks, rem_masks, colors, e, mode):
    """Contract edge slot e; the merged vertex lands at slot 0.

    Surviving edge slot j moves to (j - e - 1) % k.
    """
    k = len(colors)
    r = (e + 1) % k
    lm = leg_masks[r:] + leg_masks[:r]
    rm = rem_masks[r:] + rem_masks[:r]
    cc = colors[r:] + colors[:r]
    merged_legs = lm[0] | lm[k - 1]
    merged_rem = rm[0] | rm[k - 1]
    if mode == REMEMBER:
        merged_rem |= 1 << colors[e]
    return (merged_legs,) + lm[1:k - 1], (merged_rem,) + rm[1:k - 1], cc[:k - 1]


def _check_contract(g, e, mode):
    if g.k == 1:
        raise LoopContractionError("cannot contract the rose's self-loop")
    if not 0 <= e < g.k:
        raise IndexError(f"edge slot {e} out of range for k={g.k}")
    if mode not in (FORGET, REMEMBER):
        raise ValueError(f"unknown contraction mode {mode!r}")
    if mode == FORGET and any(g.rem_masks):
        raise StructuralError("forget-mode contraction requires empty vertex weights")
    if mode == REMEMBER and g.family != REMEMBERED:
        raise StructuralError("remember-mode contraction applies to the remembered family")


def contract_edge(g: CycleGraph, e: int, mode: str = FORGET) -> CycleGraph:
    """Contract edge slot e, merging its endpoints; result is canonical.

    In forget mode the edge color is discarded; in remember mode it joins
    the merged vertex's weight set.
    """
    _check_contract(g, e, mode)
    lm, rm, cc = _contract_raw(g.leg_masks, g.rem_masks, g.colors, e, mode)
    clm, crm, ccc, _, _ = _canonical_raw(lm, rm, cc, None)
    return CycleGraph(clm, ccc, crm, family=g.family, validate=False)


def contract_edge_tracked(g: CycleGraph, e: int, mode: str, marks):
    """Contract edge slot e while tracking an ordered set of other slots.

    Returns (graph, new_marks, sign) with the marks mapped through the
    contraction and canonicalization; the sign is the parity of the induced
    reordering relative to the given mark order.
    """
    _check_contract(g, e, mode)
    k = g.k
    lm, rm, cc = _contract_raw(g.leg_masks, g.rem_masks, g.colors, e, mode)
    mapped = tuple((j - e - 1) % k for j in marks)
    clm, crm, ccc, mk, sign = _canonical_raw(lm, rm, cc, mapped)
    out = CycleGraph(clm, ccc, crm, family=g.family, validate=False)
    return out, mk, sign


# -- text encoding -------------------------------------------------------
#
# `k=<k>;V=<legs|weights>:...;E=<c0,...>[;F=<i0,...>]` with every list as
# ascending comma-separated integers and vertices separated by ':'.  This
# is the cache and golden-file format; it is bit-exact across platforms.


def encode(g: CycleGraph, forest=None) -> str:
    vparts = []
    for lm, rm in zip(g.leg_masks, g.rem_masks):
        part = ",".join(map(str, _bits(lm))) + "|"
        if rm:
            part += ",".join(map(str, _bits(rm)))
        vparts.append(part)
    text = f"k={g.k};V=" + ":".join(vparts) + ";E=" + ",".join(map(str, g.colors))
    if forest is not None:
        text += ";F=" + ",".join(map(str, forest))
    return text


def decode(text: str, family: str = MCOLORED):
    """Parse the text encoding back into (graph, forest-or-None)."""
    fields = {}
    for piece in text.split(";"):
        name, _, value = piece.partition("=")
        fields[name] = value
    try:
        k = int(fields["k"])
        vparts = fields["V"].split(":")
        colors = tuple(int(c) for c in fields["E"].split(","))
    except (KeyError, ValueError) as exc:
        raise StructuralError(f"bad graph encoding {text!r}") from exc
    if len(vparts) != k:
        raise StructuralError(f"encoding {text!r} lists {len(vparts)} vertices for k={k}")
    leg_masks, rem_masks = [], []
    for part in vparts:
        legs, _, rems = part.partition("|")
        leg_masks.append(mask_of(int(x) for x in legs.split(",") if x))
        rem_masks.append(mask_of(int(x) for x in rems.split(",") if x))
    g = CycleGraph(leg_masks, colors, rem_masks, family=family)
    forest = None
    if "F" in fields:
        forest = tuple(int(x) for x in fields["F"].split(",") if x)
    return g, forest
