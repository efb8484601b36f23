"""Quotients, twin reduction, and anchored canonical forms of step graphons.

Quotienting a step graphon by a partition of its classes is the finite
conditional expectation: merged masses add, merged blocks are the
mass-weighted averages of the originals. Twins (classes whose block rows
agree) can be merged without changing any homomorphism density, and the
anchored construction recovers that twin-free form from feature rows of
kernel evaluations against a finite anchor set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .measures import measure_combine, tv_distance
from .stepgraphon import StepGraphon, kernel_matrix

#: default tolerance on the tv distance of block rows when detecting twins
TWIN_TOL = 1e-9

#: feature rows are rounded to this many decimals before exact comparison
FEATURE_DECIMALS = 12


@dataclass
class Partition:
    """Surjective map from source classes onto ``0..n_classes-1``."""

    class_of: tuple[int, ...]

    def __post_init__(self):
        self.class_of = tuple(int(c) for c in self.class_of)
        if not self.class_of:
            raise ValidationError("partition of zero classes", code="bad-partition")
        n = max(self.class_of) + 1
        if min(self.class_of) < 0 or set(self.class_of) != set(range(n)):
            raise ValidationError(
                "partition map must be surjective onto 0..n-1", code="non-surjective"
            )

    @property
    def n_classes(self) -> int:
        return max(self.class_of) + 1

    def members(self, target: int) -> list[int]:
        return [i for i, c in enumerate(self.class_of) if c == target]

    def compose(self, then: "Partition") -> "Partition":
        """First apply self, then ``then`` (so ``then`` partitions self's classes)."""
        if len(then.class_of) != self.n_classes:
            raise ValidationError("partition sizes do not compose", code="bad-partition")
        return Partition(tuple(then.class_of[c] for c in self.class_of))


def identity_partition(q: int) -> Partition:
    return Partition(tuple(range(q)))


def quotient(W: StepGraphon, P: Partition) -> StepGraphon:
    """Push the graphon forward along the partition.

    Merged masses add; merged blocks are the conditional expectation, the
    mass-weighted average of the constituent measures. Singleton-to-
    singleton blocks are reused unchanged so that quotients by the
    identity (and by any discrete refinement) are exact.
    """
    if len(P.class_of) != W.q:
        raise ValidationError(
            f"partition covers {len(P.class_of)} classes, graphon has {W.q}",
            code="bad-partition",
        )
    groups = [P.members(a) for a in range(P.n_classes)]
    masses = tuple(math.fsum(W.masses[i] for i in g) for g in groups)

    blocks = []
    for a, ga in enumerate(groups):
        row = []
        for b, gb in enumerate(groups):
            if len(ga) == 1 and len(gb) == 1:
                row.append(W.blocks[ga[0]][gb[0]])
                continue
            denom = masses[a] * masses[b]
            terms = [
                (W.masses[i] * W.masses[j] / denom, W.blocks[i][j])
                for i in ga
                for j in gb
            ]
            row.append(measure_combine(terms))
        blocks.append(tuple(row))
    return StepGraphon(masses, tuple(blocks), dict(W.functionals))


def _row_distance(W: StepGraphon, i: int, j: int) -> float:
    """Largest tv distance between corresponding blocks of two class rows."""
    return max(tv_distance(W.blocks[i][c], W.blocks[j][c]) for c in range(W.q))


def twin_partition(W: StepGraphon, tol: float = TWIN_TOL) -> Partition:
    """Group classes whose block rows agree within ``tol``, transitively.

    Classes of the result are numbered by their smallest member.
    """
    if tol < 0:
        raise ValidationError("twin tolerance must be >= 0", code="bad-tolerance")
    parent = list(range(W.q))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(W.q):
        for j in range(i + 1, W.q):
            if _row_distance(W, i, j) <= tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)

    roots: dict[int, int] = {}
    class_of = []
    for i in range(W.q):
        r = find(i)
        if r not in roots:
            roots[r] = len(roots)
        class_of.append(roots[r])
    return Partition(tuple(class_of))


def twin_reduce(W: StepGraphon, tol: float = TWIN_TOL) -> StepGraphon:
    """Quotient by the twin partition until no two classes are within ``tol``.

    Averaging can create fresh near-coincidences at generous tolerances, so
    the reduction iterates to its fixed point; the result certifies
    twin-freeness and the operation is idempotent by construction.
    """
    current = W
    while True:
        P = twin_partition(current, tol)
        if P.n_classes == current.q:
            return current
        current = quotient(current, P)


@dataclass
class FeatureMap:
    """Rows of kernel evaluations against anchor classes.

    Row i collects ``kernel(psi)[i, a]`` for every functional id (outer)
    and anchor (inner). Twin classes have identical rows, so grouping equal
    rows recovers the twin structure visible to the anchors.
    """

    anchors: tuple[int, ...]
    functional_ids: tuple[str, ...]
    features: np.ndarray

    def rounded_rows(self) -> list[tuple[float, ...]]:
        rounded = np.round(self.features, FEATURE_DECIMALS) + 0.0  # -0.0 -> 0.0
        return [tuple(row) for row in rounded]

    def induced_partition(self) -> Partition:
        """Classes with equal rounded rows merged, ordered lexicographically."""
        rows = self.rounded_rows()
        distinct = sorted(set(rows))
        rank = {r: n for n, r in enumerate(distinct)}
        return Partition(tuple(rank[r] for r in rows))


def feature_map(
    W: StepGraphon, anchors: Sequence[int], functional_ids: Sequence[str]
) -> FeatureMap:
    anchors = tuple(int(a) for a in anchors)
    functional_ids = tuple(functional_ids)
    if not anchors:
        raise ValidationError("need at least one anchor", code="bad-anchors")
    for a in anchors:
        if not (0 <= a < W.q):
            raise ValidationError(f"anchor class {a} out of range", code="bad-anchors")
    mats = [kernel_matrix(W, psi) for psi in functional_ids]
    cols = [m[:, a] for m in mats for a in anchors]
    features = np.stack(cols, axis=1) if cols else np.zeros((W.q, 0))
    return FeatureMap(anchors, functional_ids, features)


def anchored_graphon(
    W: StepGraphon, anchors: Sequence[int], functional_ids: Sequence[str]
) -> tuple[FeatureMap, StepGraphon]:
    """Quotient by equality of feature rows, classes ordered by row.

    The returned graphon is the push-forward of the masses under the
    feature map; with no functionals every row is empty and everything
    collapses to a single class.
    """
    fm = feature_map(W, anchors, functional_ids)
    return fm, quotient(W, fm.induced_partition())


def regularity_check(
    W: StepGraphon,
    anchors: Sequence[int],
    functional_ids: Sequence[str],
    *,
    twin_tol: float = TWIN_TOL,
) -> bool:
    """True iff the feature rows separate every pair of non-twin classes."""
    fm = feature_map(W, anchors, functional_ids)
    rows = fm.rounded_rows()
    twins = twin_partition(W, twin_tol)
    for i in range(W.q):
        for j in range(i + 1, W.q):
            if twins.class_of[i] != twins.class_of[j] and rows[i] == rows[j]:
                return False
    return True


def sample_anchors(W: StepGraphon, count: int, seed: int) -> list[int]:
    """``count`` i.i.d. class draws from the mass distribution; seeded."""
    if count < 1:
        raise ValidationError("anchor count must be >= 1", code="bad-anchors")
    pi = np.asarray(W.masses)
    rng = np.random.default_rng(seed)
    return [int(c) for c in rng.choice(W.q, size=count, p=pi / pi.sum())]
