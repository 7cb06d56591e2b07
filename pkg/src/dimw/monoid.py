"""Primitive commutative monoids over QO-systems, in numerical canonical form.

A QO-system is a finite set P with an antisymmetric transitive relation;
its monoid is modelled faithfully by the coefficient vectors x: P -> Z+ u {oo}
whose support is antitone, whose self-related points carry only 0 or oo, and
whose finite nonzero positions form an antichain with finite maxima.  Addition
and order are componentwise; INF is float("inf") with guarded arithmetic.
"""

import itertools

import numpy as np

from .errors import NotBelow, NotInF, ParamTooLarge, RefinementNotFound

INF = float("inf")


def _scale(k, v):
    # k * v in Z+ u {oo}; 0 * oo is 0 here (empty sum)
    if k == 0 or v == 0:
        return 0
    return k * v


class QOSystem:
    """Finite antisymmetric transitive relation; points named, dense indices."""

    def __init__(self, points, rel_pairs):
        self.points = tuple(str(p) for p in points)
        if len(set(self.points)) != len(self.points):
            raise ValueError("point names must be distinct")
        k = len(self.points)
        self.index = {p: i for i, p in enumerate(self.points)}
        rel = [[False] * k for _ in range(k)]
        for p, q in rel_pairs:
            rel[self._as_index(p)][self._as_index(q)] = True
        for a in range(k):
            for b in range(k):
                if rel[a][b] and rel[b][a] and a != b:
                    raise ValueError("relation is not antisymmetric")
        for a in range(k):
            for b in range(k):
                if not rel[a][b]:
                    continue
                for c in range(k):
                    if rel[b][c] and not rel[a][c]:
                        raise ValueError("relation is not transitive")
        self.rel = tuple(tuple(r) for r in rel)
        self.p0 = frozenset(i for i in range(k) if rel[i][i])
        self.p1 = frozenset(range(k)) - self.p0
        # below[a][b]: a <= b in the associated partial order
        self.below = tuple(tuple(rel[a][b] or a == b for b in range(k))
                           for a in range(k))

    def _as_index(self, p):
        return p if isinstance(p, int) else self.index[str(p)]

    def __len__(self):
        return len(self.points)

    def strictly_below(self, a, b):
        return self.below[a][b] and a != b

    def is_antichain(self):
        k = len(self.points)
        return all(not self.rel[a][b] for a in range(k) for b in range(k) if a != b)

    def zero(self):
        return DimVector(self, (0,) * len(self.points), validate=False)

    def generator(self, p):
        """f_p: oo strictly below p; 1 at p if p is not self-related, else oo."""
        p = self._as_index(p)
        vals = []
        for q in range(len(self.points)):
            if self.strictly_below(q, p):
                vals.append(INF)
            elif q == p:
                vals.append(INF if p in self.p0 else 1)
            else:
                vals.append(0)
        return DimVector(self, tuple(vals), validate=False)

    def vector(self, mapping, validate=True):
        vals = [0] * len(self.points)
        for p, v in mapping.items():
            vals[self._as_index(p)] = INF if v == INF or v == "inf" else int(v)
        return DimVector(self, tuple(vals), validate=validate)

    def lower_sets(self):
        """All lower sets of (P, <=), sorted; frozensets of indices."""
        k = len(self.points)
        out = []
        for bits in range(1 << k):
            s = frozenset(i for i in range(k) if bits >> i & 1)
            if all(self.below[q][p] <= (q in s) for p in s for q in range(k)):
                out.append(s)
        return sorted(out, key=lambda s: (len(s), sorted(s)))

    def to_json_dict(self):
        return {"points": list(self.points),
                "rel": [[self.points[a], self.points[b]]
                        for a in range(len(self.points))
                        for b in range(len(self.points)) if self.rel[a][b]]}

    def __repr__(self):
        edges = sum(sum(r) for r in self.rel)
        return f"QOSystem({len(self.points)} points, {edges} relations)"


class DimVector:
    """An element of the canonical numerical monoid over a QOSystem."""

    __slots__ = ("qo", "values")

    def __init__(self, qo, values, validate=True):
        self.qo = qo
        self.values = tuple(values)
        if validate:
            reason = violates_canonical_form(qo, self.values)
            if reason:
                raise NotInF(reason)

    def value(self, p):
        return self.values[self.qo._as_index(p)]

    def support(self):
        return [i for i, v in enumerate(self.values) if v != 0]

    def maximal_support(self):
        s = self.support()
        return [p for p in s if not any(self.qo.strictly_below(p, q) for q in s)]

    def is_zero(self):
        return all(v == 0 for v in self.values)

    def max_finite(self):
        finite = [v for v in self.values if v != INF]
        return max(finite, default=0)

    def has_infinite(self):
        return INF in self.values

    def __add__(self, other):
        assert self.qo is other.qo
        return DimVector(self.qo, tuple(a + b for a, b in zip(self.values, other.values)),
                         validate=False)

    def __mul__(self, k):
        return DimVector(self.qo, tuple(_scale(k, v) for v in self.values),
                         validate=False)

    __rmul__ = __mul__

    def __le__(self, other):
        return all(a <= b for a, b in zip(self.values, other.values))

    def __eq__(self, other):
        return (isinstance(other, DimVector) and self.qo is other.qo
                and self.values == other.values)

    def __hash__(self):
        return hash(self.values)

    def meet(self, other):
        """Componentwise infimum; lands in the relaxed class, not necessarily
        the canonical one."""
        return tuple(min(a, b) for a, b in zip(self.values, other.values))

    def to_json_dict(self):
        return {"values": {self.qo.points[i]: ("inf" if v == INF else v)
                           for i, v in enumerate(self.values) if v != 0}}

    def __repr__(self):
        parts = ["%s:%s" % (self.qo.points[i], "oo" if v == INF else v)
                 for i, v in enumerate(self.values) if v != 0]
        return "<" + " ".join(parts) + ">" if parts else "<0>"


def violates_canonical_form(qo, values, relaxed=False):
    """Return a reason string if the map is not in canonical form, else None.

    relaxed=True checks only the first group of conditions (antitone support,
    0/oo on self-related points, finite antichain), not finiteness of maxima.
    """
    k = len(qo.points)
    for p in range(k):
        for q in range(k):
            if qo.strictly_below(p, q) and values[p] < values[q]:
                return f"not antitone at ({qo.points[p]}, {qo.points[q]})"
    for p in qo.p0:
        if values[p] not in (0, INF):
            return f"finite nonzero value on self-related point {qo.points[p]}"
    finite = [p for p in range(k) if 0 < values[p] < INF]
    for p in finite:
        for q in finite:
            if p != q and qo.below[p][q]:
                return "finite positions are not an antichain"
    if not relaxed:
        support = [p for p in range(k) if values[p] != 0]
        for p in support:
            if p in qo.p1 and values[p] == INF:
                if not any(qo.strictly_below(p, q) for q in support):
                    return f"infinite value at maximal non-self-related point {qo.points[p]}"
    return None


def in_canonical_form(qo, values):
    return violates_canonical_form(qo, values) is None


def add(x, y):
    return x + y


def leq(x, y):
    """Componentwise order; equals the algebraic order of the monoid."""
    return x <= y


def absorbs(x, y):
    """x << y, i.e. x + y == y."""
    return (x + y) == y


def build_qosystem(generators, equalities, absorptions):
    """Quotient a generator set by equalities, close the absorptions, and fold
    the induced preorder's cycles into self-related points.

    Returns (QOSystem, mapping generator -> point index).  Point names are
    "p0", "p1", ... ordered by least generator.
    """
    gens = list(generators)
    gidx = {g: i for i, g in enumerate(gens)}
    n = len(gens)
    # step 1: equivalence closure of the equality pairs
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in equalities:
        ra, rb = find(gidx[a]), find(gidx[b])
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    cls_of = [find(i) for i in range(n)]
    classes = sorted(set(cls_of))
    cpos = {c: i for i, c in enumerate(classes)}
    m = len(classes)
    # step 2: transitive closure of the induced absorption relation
    prec = [[False] * m for _ in range(m)]
    for a, b in absorptions:
        prec[cpos[cls_of[gidx[a]]]][cpos[cls_of[gidx[b]]]] = True
    for k in range(m):
        for i in range(m):
            if prec[i][k]:
                for j in range(m):
                    if prec[k][j]:
                        prec[i][j] = True
    # step 3: collapse mutual pairs (i < j and j < i) of the preorder
    parent2 = list(range(m))

    def find2(x):
        while parent2[x] != x:
            parent2[x] = parent2[parent2[x]]
            x = parent2[x]
        return x

    for i in range(m):
        for j in range(i + 1, m):
            if prec[i][j] and prec[j][i]:
                ri, rj = find2(i), find2(j)
                if ri != rj:
                    parent2[max(ri, rj)] = min(ri, rj)
    reps = sorted(set(find2(i) for i in range(m)))
    rpos = {r: i for i, r in enumerate(reps)}
    names = ["p%d" % i for i in range(len(reps))]
    pairs = []
    for i in range(m):
        for j in range(m):
            if prec[i][j]:
                a, b = rpos[find2(i)], rpos[find2(j)]
                pairs.append((names[a], names[b]))
    qo = QOSystem(names, sorted(set(pairs)))
    gen_map = {g: rpos[find2(cpos[cls_of[gidx[g]]])] for g in gens}
    return qo, gen_map


def generator_vector(qo, p):
    return qo.generator(p)


def truncate(qo, mapping, n):
    """rho_n: sum over points of (value ^ n) copies of the generator."""
    if isinstance(mapping, DimVector):
        values = mapping.values
    else:
        values = tuple(mapping)
    out = qo.zero()
    for p, v in enumerate(values):
        c = min(v, n)  # min(oo, n) == n
        if c > 0:
            out = out + qo.generator(p) * int(c)
    return out


def residual(x, y):
    """The canonical t with x + t == y, for x <= y componentwise.

    Componentwise-largest solution truncated at the first level that makes
    the sum exact; existence is guaranteed for canonical inputs.
    """
    if not x <= y:
        raise NotBelow("residual requires x <= y")
    zbar = tuple(INF if yv == INF else yv - xv for xv, yv in zip(x.values, y.values))
    limit = int(max(x.max_finite(), y.max_finite())) + 1
    for n in range(limit + 1):
        t = truncate(x.qo, zbar, 2 * n)
        if x + t == y:
            return t
    raise AssertionError("residual construction failed; input not canonical?")


def index(x):
    """Largest n for which some nonzero y has n*y <= x: infinity when an
    infinite coefficient occurs, otherwise the largest coefficient."""
    if x.has_infinite():
        return INF
    return int(max(x.values, default=0)) if not x.is_zero() else 0


def _solution_sets(cell, target, grid):
    """Per-coordinate candidate values t with cell + t == target."""
    out = []
    for c, s in zip(cell.values, target.values):
        if s == INF:
            if c == INF:
                out.append(grid)  # anything works
            else:
                out.append((INF,))
        else:
            if c > s:
                return None
            out.append((s - c,))
    return out


def _enum_vectors(qo, coord_sets):
    for combo in itertools.product(*coord_sets):
        if in_canonical_form(qo, combo):
            yield DimVector(qo, combo, validate=False)


def refine(a0, a1, b0, b1):
    """A 2x2 refinement matrix for a0 + a1 == b0 + b1.

    Tries the truncated-meet corner first, then falls back to an exhaustive
    search over the coefficient grid {0..Nmax, oo}.
    """
    qo = a0.qo
    if a0 + a1 != b0 + b1:
        raise ValueError("refine requires equal sums")
    nmax = int(max(v.max_finite() for v in (a0, a1, b0, b1)))
    corner = a0.meet(b0)

    def complete(c00):
        if not (c00 <= a0 and c00 <= b0):
            return None
        c01 = residual(c00, a0)
        c10 = residual(c00, b0)
        candidates = []
        if c10 <= a1:
            candidates.append(residual(c10, a1))
        if c01 <= b1:
            candidates.append(residual(c01, b1))
        for c11 in candidates:
            if c10 + c11 == a1 and c01 + c11 == b1:
                return (c00, c01), (c10, c11)
        return None

    for m in range(nmax, -1, -1):
        got = complete(truncate(qo, corner, m))
        if got:
            return got

    grid = tuple(range(nmax + 1)) + (INF,)
    meet_sets = [tuple(v for v in grid if v <= c) for c in corner]
    for c00 in _enum_vectors(qo, meet_sets):
        s01 = _solution_sets(c00, a0, grid)
        s10 = _solution_sets(c00, b0, grid)
        if s01 is None or s10 is None:
            continue
        for c01 in _enum_vectors(qo, s01):
            for c10 in _enum_vectors(qo, s10):
                sa = _solution_sets(c10, a1, grid)
                sb = _solution_sets(c01, b1, grid)
                if sa is None or sb is None:
                    continue
                both = []
                ok = True
                for ta, tb in zip(sa, sb):
                    common = tuple(v for v in ta if v in tb)
                    if not common:
                        ok = False
                        break
                    both.append(common)
                if not ok:
                    continue
                for c11 in _enum_vectors(qo, both):
                    if c10 + c11 == a1 and c01 + c11 == b1:
                        return (c00, c01), (c10, c11)
    raise RefinementNotFound("no refinement within the coefficient grid")


class ReducedRep:
    """Antichain-supported generator expression; the presentation-layer view."""

    def __init__(self, qo, terms):
        self.qo = qo
        self.terms = dict(terms)
        pts = list(self.terms)
        for p in pts:
            for q in pts:
                if p != q and qo.below[p][q]:
                    raise NotInF("reduced terms must form an antichain")
        for p, c in self.terms.items():
            if p in qo.p0 and c != INF:
                raise NotInF("self-related points carry the infinity marker")
            if p in qo.p1 and not (isinstance(c, int) and c > 0):
                raise NotInF("plain points carry positive integer coefficients")

    def items(self):
        return sorted(self.terms.items())

    def __eq__(self, other):
        return self.qo is other.qo and self.terms == other.terms

    def __repr__(self):
        body = " + ".join(
            ("e[%s]" % self.qo.points[p]) if c == INF or c == 1
            else "%d*e[%s]" % (c, self.qo.points[p])
            for p, c in self.items())
        return body or "0"


def to_reduced(x):
    """Unique reduced representation of a canonical vector."""
    if not in_canonical_form(x.qo, x.values):
        raise NotInF("vector is not in canonical form")
    terms = {}
    for p in x.maximal_support():
        terms[p] = INF if p in x.qo.p0 else int(x.values[p])
    return ReducedRep(x.qo, terms)


def from_reduced(r):
    out = r.qo.zero()
    for p, c in r.items():
        out = out + r.qo.generator(p) * (1 if c == INF else c)
    return out


def semilattice_quotient(qo):
    """The distributive lattice of lower sets of (P, <=) together with the
    map sending a vector to the lower set generated by its support."""
    from .lattice import FiniteLattice

    if len(qo.points) > 20:
        raise ParamTooLarge("lower-set lattice guarded to 20 points")
    sets = qo.lower_sets()
    names = ["{" + ",".join(sorted(qo.points[i] for i in s)) + "}" for s in sets]
    m = len(sets)
    leqm = np.zeros((m, m), dtype=bool)
    for i in range(m):
        for j in range(m):
            leqm[i, j] = sets[i] <= sets[j]
    lat = FiniteLattice(names, leqm, name="lowersets", _validate=False)

    def classify(x):
        down = set()
        for p in x.support():
            down.update(q for q in range(len(qo.points)) if qo.below[q][p])
        return frozenset(down)

    return lat, sets, classify
