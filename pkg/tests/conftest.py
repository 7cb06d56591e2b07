import itertools
import random

import pytest

from dimw import lattice as lat
from dimw.cli import CATALOG_INSTANCES
from dimw.monoid import INF, QOSystem


def builtins_up_to(max_elements):
    """The catalog instances the cross-validation suites run over."""
    out = []
    for spec in CATALOG_INSTANCES:
        L = lat.builtin_spec(spec)
        if L.n <= max_elements:
            out.append(L)
    return out


@pytest.fixture(scope="session")
def small_builtins():
    return builtins_up_to(60)


def enumerate_qosystems(n):
    """All antisymmetric transitive relations on n labeled points."""
    pairs = [(a, b) for a in range(n) for b in range(n)]
    out = []
    for bits in range(1 << len(pairs)):
        rel = [[False] * n for _ in range(n)]
        for k, (a, b) in enumerate(pairs):
            if bits >> k & 1:
                rel[a][b] = True
        ok = True
        for a in range(n):
            for b in range(n):
                if rel[a][b] and rel[b][a] and a != b:
                    ok = False
                if not ok:
                    break
                if rel[a][b]:
                    for c in range(n):
                        if rel[b][c] and not rel[a][c]:
                            ok = False
                            break
            if not ok:
                break
        if ok:
            out.append(QOSystem([f"p{i}" for i in range(n)],
                                [(a, b) for a in range(n) for b in range(n) if rel[a][b]]))
    return out


def qosystem_signature(qo):
    """Canonical form up to isomorphism (brute force, n <= 4)."""
    n = len(qo.points)
    best = None
    for perm in itertools.permutations(range(n)):
        key = tuple(qo.rel[perm[a]][perm[b]] for a in range(n) for b in range(n))
        if best is None or key < best:
            best = key
    return n, best


def qosystem_reps(n):
    """One representative per isomorphism class of n-point QO-systems."""
    seen = {}
    for qo in enumerate_qosystems(n):
        seen.setdefault(qosystem_signature(qo), qo)
    return list(seen.values())


def random_qosystem(rng, max_points=5):
    n = rng.randint(1, max_points)
    rel = [[False] * n for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < 0.4:
                rel[a][b] = True
    # transitive closure over the index order keeps antisymmetry
    for k in range(n):
        for i in range(n):
            for j in range(n):
                rel[i][j] = rel[i][j] or (rel[i][k] and rel[k][j])
    for a in range(n):
        if rng.random() < 0.25:
            rel[a][a] = True
            for b in range(n):
                if rel[a][b]:
                    pass
    # self-loops must stay transitive: a<a and a<b already implies a<b
    return QOSystem([f"p{i}" for i in range(n)],
                    [(a, b) for a in range(n) for b in range(n) if rel[a][b]])


def random_vector(rng, qo, max_coeff=3, max_terms=3):
    """Random canonical element: a random sum of generator multiples."""
    out = qo.zero()
    for _ in range(rng.randint(0, max_terms)):
        p = rng.randrange(len(qo.points))
        out = out + qo.generator(p) * rng.randint(1, max_coeff)
    return out


def grid_vectors(qo, max_coeff):
    """All canonical vectors with coefficients in {0..max_coeff, oo}."""
    from dimw.monoid import DimVector, in_canonical_form

    grid = tuple(range(max_coeff + 1)) + (INF,)
    out = []
    for combo in itertools.product(grid, repeat=len(qo.points)):
        if in_canonical_form(qo, combo):
            out.append(DimVector(qo, combo, validate=False))
    return out


def random_eight_element_lattices(count, seed=20240817):
    """Deterministic sample of 8-element lattices (random order closures)."""
    rng = random.Random(seed)
    found = []
    while len(found) < count:
        k = 6
        edges = []
        for i in range(k):
            for j in range(i + 1, k):
                if rng.random() < 0.3:
                    edges.append((i + 1, j + 1))
        names = [str(i) for i in range(8)]
        covers = [("0", str(i + 1)) for i in range(k)]
        covers += [(str(a), str(b)) for a, b in edges]
        covers += [(str(i + 1), "7") for i in range(k)]
        try:
            L = lat.build_lattice(names, covers, name=f"rand8_{len(found)}")
        except Exception:
            continue
        if L.n == 8 and L not in found:
            found.append(L)
    return found
