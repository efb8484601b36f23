"""Step graphons: finite partitions with measure-valued symmetric blocks.

A step graphon is the computable graphon: a probability vector of class
masses, a symmetric matrix of finitely supported signed measures, and a
dictionary of the test functionals the graphon can be probed with.
Kernels, p-norms and the Carleman-sum diagnostics live here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .measures import FiniteMeasure, MomentSequence, TestFunctional, pair, tv_norm

MASS_SUM_TOL = 1e-12

#: slope threshold of the partial-sum fit above which a family is declared
#: divergent, and the sustained term-decay ratio declaring convergence
DIVERGENT_SLOPE = 1e-6
CONVERGENT_RATIO = 0.99


@dataclass
class StepGraphon:
    """Masses, symmetric measure blocks, and the functional dictionary.

    Construction does not validate; call :func:`validate_graphon` (file
    loading always does).
    """

    masses: tuple[float, ...]
    blocks: tuple[tuple[FiniteMeasure, ...], ...]
    functionals: dict[str, TestFunctional] = field(default_factory=dict)

    def __post_init__(self):
        self.masses = tuple(float(m) for m in self.masses)
        self.blocks = tuple(tuple(row) for row in self.blocks)
        self.functionals = dict(self.functionals)

    @property
    def q(self) -> int:
        return len(self.masses)

    def block(self, i: int, j: int) -> FiniteMeasure:
        return self.blocks[i][j]

    def functional(self, psi_id: str) -> TestFunctional:
        try:
            return self.functionals[psi_id]
        except KeyError:
            raise ValidationError(
                f"unknown functional id {psi_id!r}", code="unknown-functional"
            ) from None

    @property
    def sup_norm(self) -> float:
        """Largest block total-variation norm (internal bound, not a p-norm)."""
        return max(tv_norm(b) for row in self.blocks for b in row)


def validate_graphon(W: StepGraphon) -> None:
    """Check all step-graphon invariants, raising coded errors.

    Codes: ``nonpositive-mass``, ``mass-sum``, ``bad-shape``,
    ``asymmetric-blocks``, ``bad-functional-key``.
    """
    q = W.q
    if q == 0:
        raise ValidationError("graphon needs at least one class", code="bad-shape")
    for m in W.masses:
        if not math.isfinite(m) or m <= 0.0:
            raise ValidationError(
                f"class masses must be positive, got {m!r}", code="nonpositive-mass"
            )
    total = math.fsum(W.masses)
    if abs(total - 1.0) > MASS_SUM_TOL:
        raise ValidationError(
            f"class masses sum to {total!r}, not 1 within {MASS_SUM_TOL}",
            code="mass-sum",
        )
    if len(W.blocks) != q or any(len(row) != q for row in W.blocks):
        raise ValidationError("block matrix must be q x q", code="bad-shape")
    for i in range(q):
        for j in range(i + 1, q):
            if W.blocks[i][j] != W.blocks[j][i]:
                raise ValidationError(
                    f"blocks ({i},{j}) and ({j},{i}) differ", code="asymmetric-blocks"
                )
    for key, f in W.functionals.items():
        if key != f.id:
            raise ValidationError(
                f"functional dictionary key {key!r} does not match id {f.id!r}",
                code="bad-functional-key",
            )


@dataclass
class Kernel:
    """Real symmetric matrix of one functional paired against every block."""

    psi_id: str
    matrix: np.ndarray


def kernel(W: StepGraphon, psi_id: str) -> Kernel:
    """Pair the functional against every block: entry (i, j) = <psi, W_ij>."""
    psi = W.functional(psi_id)
    q = W.q
    mat = np.empty((q, q))
    for i in range(q):
        for j in range(i, q):
            mat[i, j] = mat[j, i] = pair(psi, W.blocks[i][j])
    return Kernel(psi_id, mat)


def kernel_matrix(W: StepGraphon, psi_id: str) -> np.ndarray:
    return kernel(W, psi_id).matrix


def p_norm(W: StepGraphon, p: float) -> float:
    """``(sum_ij pi_i pi_j tv(W_ij)^p)^(1/p)`` for ``p >= 1``.

    Computed with max scaling so large exponents (the Carleman sums go up
    to p = 2Nk) neither overflow nor underflow.
    """
    if p < 1:
        raise ValidationError("p-norms require p >= 1", code="bad-p")
    tv = [[tv_norm(b) for b in row] for row in W.blocks]
    top = max(max(row) for row in tv)
    if top == 0.0:
        return 0.0
    s = math.fsum(
        W.masses[i] * W.masses[j] * (tv[i][j] / top) ** p
        for i in range(W.q)
        for j in range(W.q)
    )
    return top * s ** (1.0 / p)


@dataclass
class CarlemanReport:
    """Partial sums of ``sum_n norm(2nk)^(-k)`` with a growth classification."""

    k: int
    partial_sums: tuple[float, ...]
    growth_fit: float
    classification: str  # divergent | convergent | inconclusive


def _fit_slope(values: list[float]) -> float:
    """Least-squares slope of values against 1-based index, over the last half."""
    n = len(values)
    start = n // 2
    ys = values[start:]
    if any(math.isinf(y) for y in ys):
        return math.inf
    xs = list(range(start + 1, n + 1))
    if len(xs) < 2:
        return 0.0
    xm = sum(xs) / len(xs)
    ym = math.fsum(ys) / len(ys)
    num = math.fsum((x - xm) * (y - ym) for x, y in zip(xs, ys))
    den = math.fsum((x - xm) ** 2 for x in xs)
    return num / den


def carleman_report(
    source: StepGraphon | MomentSequence, k: int, n_terms: int
) -> CarlemanReport:
    """Evaluate the order-k Carleman partial sums on ``n_terms`` terms.

    Classification rule (documented, deterministic):
      * a step graphon is always divergent: its norms are bounded by the
        largest block tv-norm, so every term is bounded below by a fixed
        positive constant;
      * otherwise, if the least-squares slope of the partial sums over the
        last half of the range is at least ``DIVERGENT_SLOPE``, divergent;
      * else if consecutive terms decay by a factor <= ``CONVERGENT_RATIO``
        throughout the last half, convergent;
      * else inconclusive.

    Divergence of an infinite series is not decidable from finitely many
    terms; the rule is exact on the analytic families used in the test
    suite and is reported, never asserted, elsewhere.
    """
    if k < 1:
        raise ValidationError("carleman order k must be >= 1", code="bad-order")
    if n_terms < 2:
        raise ValidationError("need at least two terms", code="bad-order")

    if isinstance(source, StepGraphon):
        norms = [p_norm(source, 2 * n * k) for n in range(1, n_terms + 1)]
        forced_divergent = True
    else:
        needed = 2 * n_terms * k
        if needed >= len(source.moments):
            raise ValidationError(
                f"need moments up to order {needed}, have {len(source.moments) - 1}",
                code="insufficient-moments",
            )
        norms = [source.norm_at(2 * n * k) for n in range(1, n_terms + 1)]
        forced_divergent = False

    terms = [math.inf if nv == 0.0 else nv ** (-float(k)) for nv in norms]
    sums: list[float] = []
    acc: list[float] = []
    for t in terms:
        acc.append(t)
        sums.append(math.fsum(acc) if not any(math.isinf(x) for x in acc) else math.inf)
    slope = _fit_slope(sums)

    if forced_divergent or any(math.isinf(t) for t in terms):
        cls = "divergent"
    elif slope >= DIVERGENT_SLOPE:
        cls = "divergent"
    else:
        half = terms[len(terms) // 2 :]
        sustained = all(t > 0.0 for t in half) and all(
            b <= CONVERGENT_RATIO * a for a, b in zip(half, half[1:])
        )
        cls = "convergent" if sustained else "inconclusive"
    return CarlemanReport(k, tuple(sums), slope, cls)
