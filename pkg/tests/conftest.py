"""Shared fixtures and random-instance generators."""
from __future__ import annotations

import pytest

import graphonlab as gl

INDICATORS = tuple(gl.TestFunctional(f"e{k}", (k,), (1.0,)) for k in range(4))
PSI_CHOICES = tuple(f.id for f in INDICATORS) + (gl.DEFAULT_FUNCTIONAL_ID,)


def scalar_graphon(masses, matrix) -> gl.StepGraphon:
    """Graphon with real-valued blocks embedded as point masses at 1."""
    unit = gl.unit_functional()
    blocks = tuple(tuple(gl.scalar_measure(float(x)) for x in row) for row in matrix)
    return gl.StepGraphon(tuple(float(m) for m in masses), blocks, {unit.id: unit})


@pytest.fixture
def w2() -> gl.StepGraphon:
    """The running two-class example: masses (.5,.5), kernel [[1,2],[2,3]]."""
    return scalar_graphon((0.5, 0.5), [[1.0, 2.0], [2.0, 3.0]])


def rand_masses(rng, q: int) -> tuple[float, ...]:
    u = rng.uniform(0.2, 1.0, q)
    u = u / u.sum()
    return tuple(float(x) for x in u)


def rand_measure(rng, scale: float = 0.6, max_point: int = 3) -> gl.FiniteMeasure:
    n_pts = int(rng.integers(1, max_point + 2))
    pts = sorted(int(p) for p in rng.choice(max_point + 1, size=n_pts, replace=False))
    ws = []
    for _ in pts:
        w = float(rng.uniform(-scale, scale))
        if abs(w) < 1e-3:
            w = 1e-3 if w >= 0 else -1e-3
        ws.append(w)
    return gl.FiniteMeasure(tuple(pts), tuple(ws))


def rand_graphon(rng, q: int, scale: float = 0.6) -> gl.StepGraphon:
    cells = {}
    for i in range(q):
        for j in range(i, q):
            cells[(i, j)] = rand_measure(rng, scale)
    blocks = tuple(
        tuple(cells[(min(i, j), max(i, j))] for j in range(q)) for i in range(q)
    )
    unit = gl.unit_functional()
    fns = {f.id: f for f in INDICATORS}
    fns[unit.id] = unit
    return gl.StepGraphon(rand_masses(rng, q), blocks, fns)


def rand_twin_free_graphon(rng, q: int, scale: float = 0.6) -> gl.StepGraphon:
    while True:
        W = rand_graphon(rng, q, scale)
        if gl.twin_partition(W).n_classes == q:
            return W


def duplicate_class(W: gl.StepGraphon, rng, target: int | None = None) -> gl.StepGraphon:
    """Split one class into two twins with identical block rows."""
    q = W.q
    i = int(rng.integers(0, q)) if target is None else target
    frac = float(rng.uniform(0.3, 0.7))
    masses = list(W.masses)
    masses.append(masses[i] * (1.0 - frac))
    masses[i] = masses[i] * frac
    blocks = [list(row) for row in W.blocks]
    for row in blocks:
        row.append(row[i])
    # row i is already extended with its own corner, so it IS the twin row
    blocks.append(list(blocks[i]))
    return gl.StepGraphon(tuple(masses), tuple(tuple(r) for r in blocks), dict(W.functionals))


def rand_graph(
    rng,
    max_vertices: int = 5,
    n_labels: int = 0,
    psis: tuple[str, ...] = PSI_CHOICES,
    max_mult: int = 2,
) -> gl.DecoratedMultigraph:
    n = int(rng.integers(max(2, n_labels, 1), max_vertices + 1))
    n_edges = int(rng.integers(1, 2 * n))
    edges = []
    for _ in range(n_edges):
        u, v = rng.choice(n, size=2, replace=False)
        psi = str(rng.choice(psis))
        mult = int(rng.integers(1, max_mult + 1))
        edges.append((int(u), int(v), psi, mult))
    verts = [int(v) for v in rng.choice(n, size=n_labels, replace=False)]
    labels = {v: l + 1 for l, v in enumerate(verts)}
    return gl.DecoratedMultigraph(n, tuple(edges), labels)


def graph_suite(psi: str = gl.DEFAULT_FUNCTIONAL_ID) -> list[gl.DecoratedMultigraph]:
    """The standard small test graphs: edge, 2-path, triangle, 3-star, C4."""
    return [
        gl.edge_graph(psi),
        gl.path_graph(2, psi),
        gl.cycle_graph(3, psi),
        gl.star_graph(3, psi),
        gl.cycle_graph(4, psi),
    ]


def rand_partition(rng, q: int) -> gl.Partition:
    n_cls = int(rng.integers(1, q + 1))
    perm = rng.permutation(q)
    class_of = [0] * q
    for c in range(n_cls):
        class_of[int(perm[c])] = c
    for i in range(n_cls, q):
        class_of[int(perm[i])] = int(rng.integers(0, n_cls))
    return gl.Partition(tuple(class_of))


def rand_distribution(rng, n_max: int = 5) -> tuple[float, ...]:
    n = int(rng.integers(2, n_max + 2))
    u = rng.uniform(0.05, 1.0, n)
    u = u / u.sum()
    return tuple(float(x) for x in u)


def graphons_close(W1: gl.StepGraphon, W2: gl.StepGraphon, tol: float = 1e-10) -> bool:
    if W1.q != W2.q:
        return False
    if any(abs(a - b) > 1e-12 for a, b in zip(W1.masses, W2.masses)):
        return False
    return all(
        gl.tv_distance(W1.blocks[i][j], W2.blocks[i][j]) <= tol
        for i in range(W1.q)
        for j in range(W1.q)
    )


def graphons_close_upto_permutation(
    W1: gl.StepGraphon, W2: gl.StepGraphon, tol: float = 1e-10
) -> bool:
    import itertools

    if W1.q != W2.q:
        return False
    for perm in itertools.permutations(range(W1.q)):
        if any(abs(W1.masses[i] - W2.masses[perm[i]]) > 1e-12 for i in range(W1.q)):
            continue
        if all(
            gl.tv_distance(W1.blocks[i][j], W2.blocks[perm[i]][perm[j]]) <= tol
            for i in range(W1.q)
            for j in range(W1.q)
        ):
            return True
    return False
