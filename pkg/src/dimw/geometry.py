"""Perspectivity-based structure theory on finite lattices with zero:
perspectivity and its closures, independence, homogeneous sequences, the
lattice index, n-distributivity, diamonds, normality, the normal kernel,
and the two-piece decomposition of equal-dimension pairs.

All searches iterate elements in index order and return the first witness,
so outputs are reproducible.
"""

import itertools

import numpy as np

from .congruence import congruence_from_pairs, quotient_lattice
from .dimension import delta, dimension_monoid
from .errors import MismatchError
from .lattice import is_modular, is_sectionally_complemented
from .monoid import index as monoid_index


def perspective(L, a, b):
    """First axis x (in element order) with a^x == b^x and avx == bvx."""
    for x in range(L.n):
        if L.mt(a, x) == L.mt(b, x) and L.jn(a, x) == L.jn(b, x):
            return x
    return None


def perspectivity_matrix(L):
    sim = np.zeros((L.n, L.n), dtype=bool)
    for a in range(L.n):
        sim[a, a] = True
        for b in range(a + 1, L.n):
            for x in range(L.n):
                if L.mt(a, x) == L.mt(b, x) and L.jn(a, x) == L.jn(b, x):
                    sim[a, b] = sim[b, a] = True
                    break
    return sim


def _transitive_closure(mat):
    out = mat.copy()
    for k in range(len(out)):
        out |= out[:, k, None] & out[k, None, :]
    return out


def proper_axis(L, a, b):
    """A proper axis of perspectivity between a and b, or None."""
    x = perspective(L, a, b)
    if x is None:
        return None
    return L.mt(x, L.jn(a, b))


def perspective_map(L, b, s, x):
    """Image of x under the perspective isomorphism with axis s onto [0, b]."""
    return L.mt(L.jn(x, s), b)


def sectional_complements(L, x, a):
    """All y with x ^ y == bottom and x v y == a (x <= a assumed)."""
    return [y for y in L.interval(L.bottom, a)
            if L.mt(x, y) == L.bottom and L.jn(x, y) == a]


def independent(L, seq):
    """Whether the sequence is independent (joins define a lattice hom on
    finite index sets).  Modular lattices use the inductive criterion; other
    lattices fall back to the full definition."""
    seq = list(seq)
    if is_modular(L):
        j = L.bottom
        for a in seq:
            if L.mt(a, j) != L.bottom:
                return False
            j = L.jn(a, j)
        return True
    subsets = list(itertools.chain.from_iterable(
        itertools.combinations(range(len(seq)), r) for r in range(len(seq) + 1)))

    def phi(js):
        out = L.bottom
        for i in js:
            out = L.jn(out, seq[i])
        return out

    val = {js: phi(js) for js in subsets}
    for A in subsets:
        for B in subsets:
            inter = tuple(i for i in A if i in B)
            union = tuple(sorted(set(A) | set(B)))
            if val[inter] != L.mt(val[A], val[B]):
                return False
            if val[union] != L.jn(val[A], val[B]):
                return False
    return True


# -- homogeneous sequences and the two indices ------------------------------


def _max_homogeneous_below(L, x, sim, base=None, need=None):
    """Longest nontrivial homogeneous sequence below x; with `need` set,
    returns whether one of that length exists."""
    best = 0
    candidates = [a for a in L.interval(L.bottom, x) if a != L.bottom]
    bases = [base] if base is not None else candidates

    def extend(seq, join, partners):
        nonlocal best
        best = max(best, len(seq))
        if need is not None and best >= need:
            return True
        for i, b in enumerate(partners):
            if L.mt(b, join) == L.bottom:
                # independence is order-insensitive, so combinations suffice
                if extend(seq + [b], L.jn(join, b), partners[i + 1:]):
                    return True
        return False

    for a in bases:
        if a == L.bottom or not L.le(a, x):
            continue
        partners = [b for b in candidates if sim[a, b] and b != a]
        if extend([a], a, partners):
            return best if need is None else True
        if need is None and best >= L.height():
            break
    return best if need is None else best >= need


def lattice_index(L, x, sim=None):
    """Largest length of a nontrivial homogeneous sequence below x."""
    if x == L.bottom:
        return 0
    sim = sim if sim is not None else perspectivity_matrix(L)
    return _max_homogeneous_below(L, x, sim)


def index_equality_check(L, D=None):
    """Lattice index == monoid index of the dimension value, at every x."""
    D = D or dimension_monoid(L)
    sim = perspectivity_matrix(L)
    table = {}
    for x in range(L.n):
        li = lattice_index(L, x, sim)
        mi = monoid_index(delta(D, L.bottom, x))
        if li != mi:
            raise MismatchError("lattice and monoid index disagree",
                                witness=(L.names[x], li, mi))
        table[L.names[x]] = li
    return table


# -- n-distributivity and diamonds ------------------------------------------


def n_distributive_identity(L, n):
    """Method A: evaluate Huhn's identity over all tuples."""
    meet, join = L.meet, L.join
    for ys in itertools.combinations_with_replacement(range(L.n), n + 1):
        m_all = ys[0]
        for y in ys[1:]:
            m_all = int(meet[m_all, y])
        rhs = None
        for i in range(n + 1):
            m_i = None
            for j, y in enumerate(ys):
                if j != i:
                    m_i = y if m_i is None else int(meet[m_i, y])
            col = join[:, m_i]
            rhs = col if rhs is None else meet[rhs, col]
        if not np.array_equal(join[:, m_all], rhs):
            return False
    return True


def diamonds(L, m, first_only=False):
    """Nontrivial m-diamonds, reported as (bottom, top) pairs.

    Entries of a nontrivial diamond lie strictly above its bottom; entry
    sequences are enumerated in increasing index order.
    """
    found = set()
    for u in range(L.n):
        above = [a for a in range(L.n) if L.le(u, a) and a != u]

        def extend(seq, join):
            if len(seq) == m:
                for e in L.interval(u, join):
                    if all(L.mt(a, e) == u and L.jn(a, e) == join for a in seq):
                        found.add((u, join))
                        return True
                return False
            start = above.index(seq[-1]) + 1 if seq else 0
            hit = False
            for b in above[start:]:
                if L.mt(b, join) == u:  # independence over u, inductively
                    if extend(seq + [b], L.jn(join, b)):
                        hit = True
                        if first_only:
                            return True
            return hit

        if extend([], u) and first_only:
            return sorted(found)
    return sorted(found)


def n_distributive(L, n, method="both"):
    """n-distributivity by identity evaluation (A) and by absence of a
    nontrivial (n+1)-diamond / homogeneous sequence (B); both must agree."""
    results = {}
    if method in ("A", "both"):
        results["A"] = n_distributive_identity(L, n)
    if method in ("B", "both"):
        if is_sectionally_complemented(L) and is_modular(L):
            sim = perspectivity_matrix(L)
            results["B"] = not _max_homogeneous_below(L, L.top, sim, need=n + 1)
        else:
            results["B"] = not diamonds(L, n + 1, first_only=True)
    if len(results) == 2 and results["A"] != results["B"]:
        raise MismatchError("distributivity methods disagree", witness=(L.name, n))
    return results.popitem()[1]


# -- normality ---------------------------------------------------------------


def is_normal(L, sim=None, members=None):
    """Independent projective elements must be perspective.

    Returns (flag, witness) where witness is a failing pair, if any."""
    sim = sim if sim is not None else perspectivity_matrix(L)
    approx = _transitive_closure(sim)
    members = list(members) if members is not None else list(range(L.n))
    for a in members:
        for b in members:
            if b > a and L.mt(a, b) == L.bottom and approx[a, b] and not sim[a, b]:
                return False, (a, b)
    return True, None


def neutral_ideal(L, gens, sim=None):
    """Smallest lower subset containing gens, closed under join and
    perspectivity."""
    sim = sim if sim is not None else perspectivity_matrix(L)
    ideal = set()
    work = list(gens) + [L.bottom]
    while work:
        z = work.pop()
        if z in ideal:
            continue
        ideal.add(z)
        for w in range(L.n):
            if (L.le(w, z) or sim[z, w]) and w not in ideal:
                work.append(w)
        for y in list(ideal):
            j = L.jn(y, z)
            if j not in ideal:
                work.append(j)
    return sorted(ideal)


def normal_kernel(L, sim=None):
    """Elements whose generated neutral ideal is a normal lattice.

    Perspectivity and projectivity inside a neutral ideal of a sectionally
    complemented modular lattice agree with the ambient relations, so the
    global matrices may be reused.
    """
    sim = sim if sim is not None else perspectivity_matrix(L)
    out = []
    for x in range(L.n):
        members = neutral_ideal(L, [x], sim)
        flag, _ = is_normal(L, sim, members)
        if flag:
            out.append(x)
    return out


def homogeneous_base_set(L, m, sim=None):
    """Elements that start a homogeneous sequence of length m."""
    sim = sim if sim is not None else perspectivity_matrix(L)
    out = [L.bottom]
    for a in range(L.n):
        if a != L.bottom and _max_homogeneous_below(L, L.top, sim, base=a, need=m):
            out.append(a)
    return out


def m_ideal(L, m, sim=None):
    """Neutral ideal generated by the first entries of length-m homogeneous
    sequences."""
    sim = sim if sim is not None else perspectivity_matrix(L)
    return neutral_ideal(L, homogeneous_base_set(L, m, sim), sim)


def diam_congruence(L, m):
    """Congruence generated by (bottom, top) over all nontrivial m-diamonds."""
    return congruence_from_pairs(L, diamonds(L, m))


def diam_ideal_equivalence_check(L, m):
    """x lies in mL iff x collapses to zero modulo the m-diamond congruence."""
    ideal = set(m_ideal(L, m))
    theta = diam_congruence(L, m)
    for x in range(L.n):
        if (x in ideal) != theta.same(x, L.bottom):
            raise MismatchError("m-ideal and diamond congruence disagree",
                                witness=(L.names[x], m))
    return True


def normal_kernel_theorems_check(L):
    """4L lies inside the normal kernel; the quotient by the kernel is
    3-distributive."""
    sim = perspectivity_matrix(L)
    four = set(m_ideal(L, 4, sim))
    kernel = set(normal_kernel(L, sim))
    if not four <= kernel:
        raise MismatchError("4L is not inside the normal kernel",
                            witness=sorted(L.names[x] for x in four - kernel))
    theta = congruence_from_pairs(L, [(L.bottom, u) for u in kernel])
    Q, _ = quotient_lattice(L, theta)
    if not n_distributive(Q, 3):
        raise MismatchError("quotient by the normal kernel is not 3-distributive",
                            witness=L.name)
    return {"kernel_size": len(kernel), "four_ideal_size": len(four),
            "quotient_size": Q.n}


# -- decompositions ----------------------------------------------------------


def two_piece_decomposition(L, a, b, D=None, sim=None):
    """For equal-dimension a, b: a = a0+a1, b = b0+b1 with a0 ~ b0 and
    a1 ~ b1; None when the dimensions differ."""
    D = D or dimension_monoid(L)
    if delta(D, L.bottom, a) != delta(D, L.bottom, b):
        return None
    sim = sim if sim is not None else perspectivity_matrix(L)
    for a0 in L.interval(L.bottom, a):
        for a1 in sectional_complements(L, a0, a):
            for b0 in L.interval(L.bottom, b):
                if not sim[a0, b0]:
                    continue
                for b1 in sectional_complements(L, b0, b):
                    if sim[a1, b1]:
                        return a0, a1, b0, b1
    raise MismatchError("no two-piece decomposition found",
                        witness=(L.names[a], L.names[b]))


def _decomposition_closure(L, rel):
    """Pairs (a, b) with matching independent decompositions whose parts are
    rel-related (the "by decomposition" closure of rel)."""
    n = L.n
    out = np.array(rel, dtype=bool) | np.eye(n, dtype=bool)
    changed = True
    while changed:
        changed = False
        for a in range(n):
            for b in range(n):
                if out[a, b]:
                    continue
                hit = False
                for a0 in L.interval(L.bottom, a):
                    if a0 == L.bottom or a0 == a:
                        continue
                    for b0 in range(n):
                        if not rel[a0, b0] or not L.le(b0, b) or b0 == L.bottom:
                            continue
                        for a1 in sectional_complements(L, a0, a):
                            for b1 in sectional_complements(L, b0, b):
                                if out[a1, b1]:
                                    hit = True
                                    break
                            if hit:
                                break
                        if hit:
                            break
                    if hit:
                        break
                if hit:
                    out[a, b] = True
                    changed = True
    return out


def relations_suite(L, D=None):
    """Perspectivity and its derived closures, cross-checked against the
    dimension pipeline where the theory identifies them."""
    D = D or dimension_monoid(L)
    sim = perspectivity_matrix(L)
    approx = _transitive_closure(sim)
    n = L.n
    lesssim = np.zeros((n, n), dtype=bool)
    for a in range(n):
        for b in range(n):
            lesssim[a, b] = any(L.le(y, b) and sim[a, y] for y in range(n))
    simeq = _decomposition_closure(L, sim)
    approxeq = _decomposition_closure(L, approx)
    if is_sectionally_complemented(L) and is_modular(L):
        for a in range(n):
            for b in range(n):
                same_delta = delta(D, L.bottom, a) == delta(D, L.bottom, b)
                if bool(approxeq[a, b]) != same_delta:
                    raise MismatchError(
                        "projectivity by decomposition must match dimension equality",
                        witness=(L.names[a], L.names[b]))
    return {"sim": sim, "approx": approx, "lesssim": lesssim,
            "simeq": simeq, "approxeq": approxeq}


def transitivity_cancellativity_check(L, D=None):
    """Perspectivity transitive <=> pipeline order is an antichain without
    self-related points (cancellativity of the monoid)."""
    D = D or dimension_monoid(L)
    sim = perspectivity_matrix(L)
    transitive = np.array_equal(sim, _transitive_closure(sim))
    cancellative = D.qo.is_antichain() and not D.qo.p0
    if transitive != cancellative:
        raise MismatchError("transitivity and cancellativity disagree",
                            witness=L.name)
    return {"transitive": transitive, "cancellative": cancellative}


# -- bounded decomposition witnesses (exercised by the test suite) -----------


def v_measure_check(L, D=None):
    """Every split of a dimension value delta(c) = alpha + beta over the
    dimension range lifts to an element split c = a + b."""
    D = D or dimension_monoid(L)
    rng = {x: delta(D, L.bottom, x) for x in range(L.n)}
    for c in range(L.n):
        target = rng[c]
        for x in range(L.n):
            for y in range(L.n):
                if rng[x] + rng[y] != target:
                    continue
                ok = False
                for a in L.interval(L.bottom, c):
                    if rng[a] != rng[x]:
                        continue
                    for b in sectional_complements(L, a, c):
                        if rng[b] == rng[y]:
                            ok = True
                            break
                    if ok:
                        break
                if not ok:
                    raise MismatchError("dimension split does not lift",
                                        witness=(L.names[c], L.names[x], L.names[y]))
    return True


def eqwords_refinement(L, parts_a, parts_b, approxeq):
    """A refinement matrix (c_ij, d_ij) with c_ij projective-by-decomposition
    to d_ij, row sums parts_a and column sums parts_b; None if the search
    fails."""

    def split_into(x, k):
        """All ordered independent decompositions of x into k parts."""
        if k == 1:
            yield (x,)
            return
        for first in L.interval(L.bottom, x):
            for rest in sectional_complements(L, first, x):
                for tail in split_into(rest, k - 1):
                    yield (first,) + tail

    def go(rows, cols):
        if not rows:
            return [] if all(c == L.bottom for c in cols) else None
        a0 = rows[0]
        for cells in split_into(a0, len(cols)):
            # match cell j inside cols[j]
            def match(j, newcols, drow):
                if j == len(cols):
                    rest = go(rows[1:], newcols)
                    return None if rest is None else [drow] + rest
                for d in L.interval(L.bottom, newcols[j]):
                    if not approxeq[cells[j], d]:
                        continue
                    for comp in sectional_complements(L, d, newcols[j]):
                        got = match(j + 1, newcols[:j] + [comp] + newcols[j + 1:],
                                    drow + [(cells[j], d)])
                        if got is not None:
                            return got
                return None

            got = match(0, list(cols), [])
            if got is not None:
                return got
    return go(list(parts_a), list(parts_b))


def jonsson_decomposition(L, a, b, sim=None):
    """Bounded search for the two-step-perspectivity decompositions
    a = u0 + u1 + (sum of a_i), b = u + (sum of b_i) + h with u0 ~ u, u1 ~ u
    and a_i ~ b_i for i < 4 (zero summands allowed)."""
    sim = sim if sim is not None else perspectivity_matrix(L)

    def four_match(x, y):
        """x = sum a_i, y = sum b_i with a_i ~ b_i, at most 4 summands."""
        return _matched_decomposition(L, x, y, sim, 4)

    for u0 in L.interval(L.bottom, a):
        for u1 in [z for z in L.interval(L.bottom, a) if L.mt(z, u0) == L.bottom]:
            u01 = L.jn(u0, u1)
            if not L.le(u01, a):
                continue
            for rest_a in sectional_complements(L, u01, a):
                for u in L.interval(L.bottom, b):
                    if not (sim[u0, u] and sim[u1, u]):
                        continue
                    for w in sectional_complements(L, u, b):
                        for h in L.interval(L.bottom, w):
                            for mid in sectional_complements(L, h, w):
                                if four_match(rest_a, mid):
                                    return (u0, u1, rest_a), (u, mid, h)
    return None


def _matched_decomposition(L, x, y, rel, depth):
    """x and y split into at most `depth` pairwise rel-related independent
    summands."""
    if x == L.bottom and y == L.bottom:
        return True
    if depth == 0:
        return False
    if rel[x, y]:
        return True
    for x0 in L.interval(L.bottom, x):
        if x0 == L.bottom:
            continue
        for y0 in L.interval(L.bottom, y):
            if not rel[x0, y0]:
                continue
            for x1 in sectional_complements(L, x0, x):
                for y1 in sectional_complements(L, y0, y):
                    if _matched_decomposition(L, x1, y1, rel, depth - 1):
                        return True
    return False
