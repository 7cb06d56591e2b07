"""The dimension pipeline: caustic pairs, relation emission, the primitive
monoid presentation, interval evaluation, and the cross-validation checks.

Generators are the prime intervals (cover pairs).  For every caustic pair
{a, b} and both orientations, the emitted relation set is the path-free
closure of the first-step/last-step relations: in a finite lattice every
prime interval of [w, b] lies on some maximal chain from w to b, so the
per-path relations and the quantified family generate each other.
"""

import itertools
import random
import re
from dataclasses import dataclass, field

from .congruence import all_congruences, principal_congruence, quotient_lattice, rectangular_extension
from .errors import MismatchError, NotDistributive, NotModular
from .lattice import dual as lattice_dual
from .lattice import is_distributive, is_modular, product
from .monoid import DimVector, build_qosystem, semilattice_quotient


def caustic_pairs(L):
    """All unordered incomparable pairs whose side intervals collapse."""
    out = []
    for a in range(L.n):
        for b in range(a + 1, L.n):
            if L.le(a, b) or L.le(b, a):
                continue
            m, j = L.mt(a, b), L.jn(a, b)
            if (all(L.jn(x, b) == j for x in L.open_interval(m, a))
                    and all(L.jn(a, y) == j for y in L.open_interval(m, b))
                    and all(L.mt(x, b) == m for x in L.open_interval(a, j))
                    and all(L.mt(a, y) == m for y in L.open_interval(b, j))):
                out.append((a, b))
    return out


def _primes_within(L, lo, hi):
    """Prime intervals [p, q] with lo <= p < q <= hi."""
    return [(p, q) for p, q in L.covers if L.le(lo, p) and L.le(q, hi)]


def caustic_relations(L):
    """Equality and absorption pairs over the prime intervals of L."""
    X, Y = set(), set()
    for pair in caustic_pairs(L):
        for s, t in (pair, pair[::-1]):
            m, j = L.mt(s, t), L.jn(s, t)
            first_steps = [w for w in L.covers_of(m) if L.le(w, t)]
            last_steps = [v for v in L.cocovers_of(j) if L.le(s, v)]
            for w in first_steps:
                for v in last_steps:
                    X.add(((m, w), (v, j)))
                for pq in _primes_within(L, w, t):
                    Y.add((pq, (m, w)))
            for v in L.cocovers_of(j):
                if L.le(t, v):
                    for pq in _primes_within(L, t, v):
                        Y.add((pq, (v, j)))
    return sorted(X), sorted(Y)


@dataclass
class DimensionMonoid:
    lattice: object
    qo: object
    gen: dict                      # prime interval -> point index
    _delta_cache: dict = field(default_factory=dict, repr=False)

    def classes(self):
        """Prime intervals grouped by generator point, in point order."""
        groups = [[] for _ in range(len(self.qo.points))]
        for pq in sorted(self.gen):
            groups[self.gen[pq]].append(pq)
        return groups

    def delta(self, a, b):
        return delta(self, a, b)

    def delta_word(self, word):
        out = self.qo.zero()
        for (a, b), mult in word.items():
            out = out + delta(self, a, b) * mult
        return out

    def report_dict(self):
        L = self.lattice
        return {
            "qosystem": self.qo.to_json_dict(),
            "generators": {"%s..%s" % (L.names[a], L.names[b]): self.qo.points[p]
                           for (a, b), p in self.gen.items()},
            "p0": sorted(self.qo.points[p] for p in self.qo.p0),
            "classes": {self.qo.points[i]: ["%s..%s" % (L.names[a], L.names[b])
                                            for a, b in grp]
                        for i, grp in enumerate(self.classes())},
        }


def dimension_monoid(L):
    X, Y = caustic_relations(L)
    gens = list(L.covers)
    qo, gen_map = build_qosystem(gens, X, Y)
    return DimensionMonoid(L, qo, gen_map)


def delta(D, a, b):
    """Value of the interval [a^b, avb]; path choice does not matter."""
    key = (a, b)
    if key in D._delta_cache:
        return D._delta_cache[key]
    L = D.lattice
    lo, hi = L.mt(a, b), L.jn(a, b)
    out = D.qo.zero()
    for u, v in itertools.pairwise(L.maximal_chain(lo, hi)):
        out = out + D.qo.generator(D.gen[(u, v)])
    D._delta_cache[key] = out
    return out


# -- dimension words -------------------------------------------------------


class DimensionWord:
    """Formal multiset of element pairs, each evaluated through delta."""

    def __init__(self, intervals):
        self._mult = {}
        for item in intervals:
            if len(item) == 3:
                a, b, k = item
            else:
                (a, b), k = item, 1
            if k:
                self._mult[(a, b)] = self._mult.get((a, b), 0) + k

    def items(self):
        return sorted(self._mult.items())

    def __len__(self):
        return sum(self._mult.values())

    @classmethod
    def parse(cls, text, L):
        """Parse `a..b + c..d + 2*(e..f)` using element names of L."""
        terms = []
        for raw in text.split("+"):
            raw = raw.strip()
            if not raw:
                continue
            mult = 1
            m = re.fullmatch(r"(\d+)\s*\*\s*\((.+)\)", raw)
            if m:
                mult, raw = int(m.group(1)), m.group(2).strip()
            if ".." not in raw:
                raise ValueError(f"bad word term {raw!r}")
            aname, bname = raw.split("..", 1)
            terms.append((L.index[aname.strip()], L.index[bname.strip()], mult))
        return cls(terms)


def word_compare(D, w1, w2):
    """One of "equal", "less", "greater", "incomparable"."""
    v1, v2 = D.delta_word(w1), D.delta_word(w2)
    if v1 == v2:
        return "equal"
    if v1 <= v2:
        return "less"
    if v2 <= v1:
        return "greater"
    return "incomparable"


# -- cross-validation checks ----------------------------------------------


def propto(x, y):
    """x is dominated by a multiple of y; the multiplier is bounded by the
    largest finite coefficient of x."""
    n = max(1, int(x.max_finite()))
    return x <= y * n


def congruence_correspondence_check(L, D=None, samples=200, seed=7):
    """Check that lower sets of the pipeline order match Con L and that
    collapsing is the bounded-multiple domination of delta values."""
    D = D or dimension_monoid(L)
    con = all_congruences(L)
    lowersets, sets, classify = semilattice_quotient(D.qo)

    def theta_to_set(theta):
        down = set()
        for (a, b) in L.covers:
            if theta.same(a, b):
                p = D.gen[(a, b)]
                down.update(q for q in range(len(D.qo.points)) if D.qo.below[q][p])
        return frozenset(down)

    images = [theta_to_set(t) for t in con.congruences]
    if len(set(images)) != len(con.congruences) or set(images) != set(sets):
        raise MismatchError("congruence lattice does not match the lower sets",
                            witness=(len(con.congruences), len(sets)))
    for i in range(len(con.congruences)):
        for j in range(len(con.congruences)):
            if bool(con.leq[i, j]) != (images[i] <= images[j]):
                raise MismatchError("refinement order does not match inclusion",
                                    witness=(i, j))
    for (a, b) in L.covers:
        t = principal_congruence(L, a, b)
        want = frozenset(q for q in range(len(D.qo.points))
                         if D.qo.below[q][D.gen[(a, b)]])
        if theta_to_set(t) != want:
            raise MismatchError("principal congruence image is not the point's lower set",
                                witness=(L.names[a], L.names[b]))
    rng = random.Random(seed)
    quads = 0
    while quads < samples:
        x, y, a, b = (rng.randrange(L.n) for _ in range(4))
        collapsed = principal_congruence(L, a, b).same(x, y)
        dominated = propto(delta(D, x, y), delta(D, a, b))
        if collapsed != dominated:
            raise MismatchError(
                "collapsing and bounded domination disagree",
                witness=tuple(L.names[z] for z in (x, y, a, b)))
        quads += 1
    return {"congruences": len(con.congruences), "lower_sets": len(sets),
            "sampled_quadruples": samples}


def projectivity_classes(L):
    """Partition of the prime intervals under transposition closure."""
    primes = list(L.covers)
    pidx = {pq: i for i, pq in enumerate(primes)}
    parent = list(range(len(primes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)

    for (a, b) in primes:
        for (c, d) in primes:
            # [a, b] up-transposes to [c, d] when c^b == a and cvb == d
            if L.mt(c, b) == a and L.jn(c, b) == d:
                union(pidx[(a, b)], pidx[(c, d)])
    groups = {}
    for pq in primes:
        groups.setdefault(find(pidx[pq]), []).append(pq)
    return [sorted(g) for _, g in sorted(groups.items())]


def distributive_dim(L):
    """Join-irreducible indicator model of the dimension map.

    Returns (J, f) where f maps an element pair to the indicator vector of
    the join-irreducibles below the larger but not the smaller element.
    """
    if not is_distributive(L):
        raise NotDistributive(f"{L.name} is not distributive")
    J = [x for x in range(L.n) if len(L.cocovers_of(x)) == 1]

    def f(a, b):
        lo, hi = L.mt(a, b), L.jn(a, b)
        return tuple(1 if L.le(j, hi) and not L.le(j, lo) else 0 for j in J)

    return J, f


def schreier_refine(L, chain1, chain2):
    """Common refinement of two chains of the same interval of a modular
    lattice; each cell pairs a step of the first refinement with a projective
    step of the second."""
    if not is_modular(L):
        raise NotModular(f"{L.name} is not modular")
    if chain1[0] != chain2[0] or chain1[-1] != chain2[-1]:
        raise ValueError("chains must share both endpoints")
    cells = []
    for i in range(len(chain1) - 1):
        xi, xi1 = chain1[i], chain1[i + 1]
        for j in range(len(chain2) - 1):
            yj, yj1 = chain2[j], chain2[j + 1]
            u0 = L.jn(xi, L.mt(xi1, yj))
            u1 = L.jn(xi, L.mt(xi1, yj1))
            v0 = L.jn(yj, L.mt(yj1, xi))
            v1 = L.jn(yj, L.mt(yj1, xi1))
            cells.append(((u0, u1), (v0, v1)))
    for (u0, u1), (v0, v1) in cells:
        if (u0 != u1 or v0 != v1) and not intervals_projective(L, (u0, u1), (v0, v1)):
            raise MismatchError("refinement cells are not projective",
                                witness=((L.names[u0], L.names[u1]),
                                         (L.names[v0], L.names[v1])))
    return cells


def intervals_projective(L, iv1, iv2, max_steps=None):
    """Whether two intervals are connected by transpositions (BFS)."""
    seen = {iv1}
    frontier = [iv1]
    while frontier:
        fresh = []
        for (u, v) in frontier:
            if (u, v) == iv2:
                return True
            for c in range(L.n):
                # up: [u, v] -> [c, cvv] when c^v == u
                if L.mt(c, v) == u:
                    t = (c, L.jn(c, v))
                    if t not in seen:
                        seen.add(t)
                        fresh.append(t)
                # down: [u, v] -> [c^u, c] when cvu == v
                if L.jn(c, u) == v:
                    t = (L.mt(c, u), c)
                    if t not in seen:
                        seen.add(t)
                        fresh.append(t)
        frontier = fresh
    return iv2 in seen


# -- QO-system isomorphism and the functor checks ---------------------------


def qosystem_isomorphism(P, Q):
    """An index bijection preserving the relation and self-related points,
    or None."""
    n, m = len(P.points), len(Q.points)
    if n != m or len(P.p0) != len(Q.p0):
        return None

    def profile(S, i):
        below = sum(1 for j in range(len(S.points)) if S.rel[j][i])
        above = sum(1 for j in range(len(S.points)) if S.rel[i][j])
        return (i in S.p0, below, above)

    pprof = [profile(P, i) for i in range(n)]
    qprof = [profile(Q, i) for i in range(n)]
    if sorted(pprof) != sorted(qprof):
        return None
    order = sorted(range(n), key=lambda i: pprof[i])
    image = [None] * n
    used = [False] * n

    def extend(k):
        if k == n:
            return True
        i = order[k]
        for j in range(n):
            if used[j] or qprof[j] != pprof[i]:
                continue
            ok = True
            for k2 in range(k):
                i2 = order[k2]
                if P.rel[i][i2] != Q.rel[j][image[i2]] or P.rel[i2][i] != Q.rel[image[i2]][j]:
                    ok = False
                    break
            if ok:
                image[i] = j
                used[j] = True
                if extend(k + 1):
                    return True
                image[i] = None
                used[j] = False
        return False

    return image if extend(0) else None


def _disjoint_union(P, Q):
    from .monoid import QOSystem

    pts = ["A.%s" % p for p in P.points] + ["B.%s" % q for q in Q.points]
    pairs = [("A.%s" % P.points[a], "A.%s" % P.points[b])
             for a in range(len(P.points)) for b in range(len(P.points)) if P.rel[a][b]]
    pairs += [("B.%s" % Q.points[a], "B.%s" % Q.points[b])
              for a in range(len(Q.points)) for b in range(len(Q.points)) if Q.rel[a][b]]
    return QOSystem(pts, pairs)


def _restricted(P, keep):
    from .monoid import QOSystem

    keep = sorted(keep)
    pts = [P.points[i] for i in keep]
    pairs = [(P.points[a], P.points[b]) for a in keep for b in keep if P.rel[a][b]]
    return QOSystem(pts, pairs)


def functor_checks(L, theta=None, B=None):
    """Product, dual and quotient compatibility of the pipeline."""
    report = {}
    D = dimension_monoid(L)
    if B is not None:
        DB = dimension_monoid(B)
        DP = dimension_monoid(product(L, B))
        if qosystem_isomorphism(DP.qo, _disjoint_union(D.qo, DB.qo)) is None:
            raise MismatchError("product system is not the disjoint union",
                                witness=(L.name, B.name))
        report["product"] = "ok"
    Ld = lattice_dual(L)
    Dd = dimension_monoid(Ld)
    # interval reversal must induce a well-defined isomorphism of the systems
    fwd = {}
    for (a, b), p in D.gen.items():
        q = Dd.gen[(b, a)]
        if fwd.setdefault(p, q) != q:
            raise MismatchError("dual generator classes do not match",
                                witness=(L.names[a], L.names[b]))
    if len(set(fwd.values())) != len(Dd.qo.points):
        raise MismatchError("dual map is not onto", witness=L.name)
    for p1 in fwd:
        for p2 in fwd:
            if D.qo.rel[p1][p2] != Dd.qo.rel[fwd[p1]][fwd[p2]]:
                raise MismatchError("dual map does not preserve the relation",
                                    witness=(p1, p2))
    report["dual"] = "ok"
    if theta is not None:
        Q, proj = quotient_lattice(L, theta)
        DQ = dimension_monoid(Q)
        collapsed = {D.gen[(a, b)] for (a, b) in L.covers if theta.same(a, b)}
        down = {q for q in range(len(D.qo.points))
                if any(D.qo.below[q][p] for p in collapsed)}
        keep = [p for p in range(len(D.qo.points)) if p not in down]
        if qosystem_isomorphism(DQ.qo, _restricted(D.qo, keep)) is None:
            raise MismatchError("quotient system is not the restriction",
                                witness=theta)
        report["quotient"] = "ok"
    return report


# -- V-modularity and DEP ---------------------------------------------------


def _weak_targets(L, iv):
    """One-step weakly projective successors of the interval iv."""
    u, v = iv
    out = set()
    for c in range(L.n):
        if L.mt(v, c) == u:  # [u, v] up into [c, d] for any d >= v v c
            base = L.jn(v, c)
            for d in range(L.n):
                if L.le(base, d):
                    out.add((c, d))
        if L.jn(u, c) == v:  # [u, v] down into [c', c] for any c' <= u ^ c
            cap = L.mt(u, c)
            for cp in range(L.n):
                if L.le(cp, cap):
                    out.add((cp, c))
    return out


def _bounded_sum_search(target, parts, bound):
    """Is target a sum of at most `bound` vectors from parts (with repeats)?

    Breadth-first over partial sums; every prefix of a valid sum stays
    componentwise below the target, so domination is a complete filter.
    """
    sums = {tuple(target.qo.zero().values)}
    if target.is_zero():
        return True
    for _ in range(bound):
        fresh = set()
        for s in sums:
            sv = DimVector(target.qo, s, validate=False)
            for p in parts:
                t = sv + p
                if t == target:
                    return True
                if t <= target and t.values not in sums:
                    fresh.add(t.values)
        if not fresh:
            return False
        sums |= fresh
    return False


def is_v_modular(L, bound=4, D=None):
    """Bounded check that weakly projective images stay in the canonical
    submonoid of the target interval.

    Sources range over prime intervals: a general source decomposes into a
    chain of primes, each weakly projective into the same target, so any
    failure already shows up on a prime.
    """
    D = D or dimension_monoid(L)
    for source in L.covers:
        val = delta(D, *source)
        seen = {source}
        frontier = [source]
        while frontier:
            fresh = []
            for iv in frontier:
                for tgt in _weak_targets(L, iv):
                    if tgt in seen:
                        continue
                    seen.add(tgt)
                    fresh.append(tgt)
            frontier = fresh
        for (c, d) in sorted(seen):
            parts = sorted({delta(D, p, q) for p, q in _primes_within(L, c, d)},
                           key=lambda v: v.values)
            if not _bounded_sum_search(val, parts, bound):
                return False, (source, (c, d))
    return True, None


def dep_check(L, factors=None, k=3, max_pool=8, seed=11):
    """Order preservation and reflection of the subdirect-product map on
    dimension words of length <= k."""
    if factors is None:
        _, _, thetas = rectangular_extension(L)
        factors = [quotient_lattice(L, t) for t in thetas]
    D = dimension_monoid(L)
    quots = []
    for Q, proj in factors:
        quots.append((dimension_monoid(Q), proj))
    rng = random.Random(seed)
    pool = list(L.covers)
    if len(pool) > max_pool:
        pool = sorted(rng.sample(pool, max_pool))
    words = []
    for length in range(0, k + 1):
        words.extend(itertools.combinations_with_replacement(pool, length))
    if len(words) > 400:
        words = [words[0]] + rng.sample(words[1:], 399)

    def evaluate(word):
        big = D.qo.zero()
        for a, b in word:
            big = big + delta(D, a, b)
        small = []
        for DQ, proj in quots:
            v = DQ.qo.zero()
            for a, b in word:
                v = v + delta(DQ, proj[a], proj[b])
            small.append(v)
        return big, small

    evaluated = [evaluate(w) for w in words]
    for (bx, sx), (by, sy) in itertools.product(evaluated, evaluated):
        upstairs = bx <= by
        downstairs = all(u <= v for u, v in zip(sx, sy))
        if upstairs != downstairs:
            return False
    return True
