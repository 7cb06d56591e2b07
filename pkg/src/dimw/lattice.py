"""Finite lattices: validated order/meet/join tables, builtin catalog, predicates.

Elements are dense integer indices with a name table; all order data is kept
in numpy matrices so that downstream searches get O(1) order queries.
"""

import itertools
import json
from dataclasses import dataclass

import numpy as np

from .errors import CycleError, NotALattice, ParamTooLarge, UnknownBuiltin

SIZE_GUARD = 10_000
_NEG = -(10 ** 9)


def _toposort(n, edges):
    """Topological order of 0..n-1 under directed edges, or CycleError."""
    succ = [[] for _ in range(n)]
    indeg = [0] * n
    for a, b in edges:
        succ[a].append(b)
        indeg[b] += 1
    stack = sorted((i for i in range(n) if indeg[i] == 0), reverse=True)
    order = []
    while stack:
        v = stack.pop()
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    if len(order) != n:
        raise CycleError("cover pairs induce a cycle")
    return order, succ


def _closure_from_edges(n, edges):
    """Reflexive-transitive closure as a boolean matrix leq[i, j] == (i <= j)."""
    order, succ = _toposort(n, edges)
    leq = np.zeros((n, n), dtype=bool)
    for v in reversed(order):
        leq[v, v] = True
        for w in succ[v]:
            leq[v] |= leq[w]
    return leq


def _covers_of_leq(leq):
    strict = leq & ~np.eye(len(leq), dtype=bool)
    redundant = np.matmul(strict, strict)
    cov = strict & ~redundant
    return tuple(sorted(map(tuple, np.argwhere(cov).tolist())))


class FiniteLattice:
    """A finite lattice with derived order, cover, meet and join tables.

    Instances are immutable after construction and safe to share between
    threads; every operation in this package is a pure function.
    """

    def __init__(self, names, leq, name="L", _validate=True):
        n = len(names)
        if n == 0:
            raise NotALattice("meet", ())
        if n > SIZE_GUARD:
            raise ParamTooLarge(f"{n} elements exceeds guard {SIZE_GUARD}")
        if len(set(names)) != n:
            raise ValueError("element names must be distinct")
        self.name = name
        self.names = tuple(str(x) for x in names)
        self.n = n
        self.index = {x: i for i, x in enumerate(self.names)}
        leq = np.asarray(leq, dtype=bool)
        if _validate:
            if not leq.diagonal().all():
                raise ValueError("order relation must be reflexive")
            if (leq & leq.T & ~np.eye(n, dtype=bool)).any():
                raise CycleError("order relation is not antisymmetric")
            if (np.matmul(leq, leq) & ~leq).any():
                raise ValueError("order relation is not transitive")
        self.leq = leq
        self.covers = _covers_of_leq(leq)
        self.meet, self.join = self._tables(_validate)
        b, t = 0, 0
        for i in range(n):
            b = int(self.meet[b, i])
            t = int(self.join[t, i])
        self.bottom, self.top = b, t
        for a in (self.leq, self.meet, self.join):
            a.flags.writeable = False
        self._height = None

    def _tables(self, validate):
        n, leq = self.n, self.leq
        # rank in a linear extension; the maximum of a bounded set is the
        # ranked argmax, verified against the whole set afterwards
        pos = np.empty(n, dtype=np.int64)
        order, _ = _toposort(n, [(a, b) for a, b in self.covers])
        pos[order] = np.arange(n)
        meet = np.empty((n, n), dtype=np.int32)
        join = np.empty((n, n), dtype=np.int32)
        geq = leq.T
        for i in range(n):
            low = leq[:, i, None] & leq  # low[k, j]: k <= i and k <= j
            up = geq[:, i, None] & geq
            mcand = np.where(low, pos[:, None], _NEG).argmax(axis=0)
            jcand = np.where(up, -pos[:, None], _NEG).argmax(axis=0)
            if validate:
                bad = (~low.any(axis=0)) | (low & ~leq[:, mcand]).any(axis=0)
                bad |= (~up.any(axis=0)) | (up & ~geq[:, jcand]).any(axis=0)
                if bad.any():
                    self._raise_witness(pos)
            meet[i] = mcand
            join[i] = jcand
        return meet, join

    def _raise_witness(self, pos):
        # scan pairs (i, j) with i <= j in index order; report the first failure
        n, leq, geq = self.n, self.leq, self.leq.T
        for i in range(n):
            lo = leq[:, i, None] & leq
            hi = geq[:, i, None] & geq
            for j in range(i, n):
                for kind, col, rel in (("meet", lo[:, j], leq), ("join", hi[:, j], geq)):
                    if not col.any():
                        raise NotALattice(kind, (self.names[i], self.names[j]))
                    ranked = pos if kind == "meet" else -pos
                    cand = int(np.where(col, ranked, _NEG).argmax())
                    if (col & ~rel[:, cand]).any():
                        raise NotALattice(kind, (self.names[i], self.names[j]))
        raise AssertionError("witness scan found no failure")

    # -- basic queries ----------------------------------------------------

    def le(self, a, b):
        return bool(self.leq[a, b])

    def mt(self, a, b):
        return int(self.meet[a, b])

    def jn(self, a, b):
        return int(self.join[a, b])

    def covers_of(self, a):
        """Upper covers of a."""
        return [b for x, b in self.covers if x == a]

    def cocovers_of(self, b):
        """Lower covers of b."""
        return [a for a, x in self.covers if x == b]

    def interval(self, a, b):
        """Elements z with a <= z <= b, ascending index order."""
        if not self.le(a, b):
            raise ValueError("interval endpoints must satisfy a <= b")
        mask = self.leq[a] & self.leq[:, b]
        return [int(z) for z in np.flatnonzero(mask)]

    def open_interval(self, a, b):
        return [z for z in self.interval(a, b) if z != a and z != b]

    def atoms(self):
        return self.covers_of(self.bottom)

    def height(self):
        """Length of the longest chain from bottom to top."""
        if self._height is None:
            order, succ = _toposort(self.n, list(self.covers))
            h = [0] * self.n
            for v in order:
                for w in succ[v]:
                    h[w] = max(h[w], h[v] + 1)
            self._height = h[self.top]
        return self._height

    def maximal_chain(self, a, b):
        """The index-least maximal chain from a to b (a <= b required)."""
        chain = [a]
        z = a
        while z != b:
            z = min(w for w in self.covers_of(z) if self.le(w, b))
            chain.append(z)
        return chain

    def __eq__(self, other):
        return (isinstance(other, FiniteLattice) and self.names == other.names
                and np.array_equal(self.leq, other.leq))

    def __hash__(self):
        return hash((self.names, self.leq.tobytes()))

    def __repr__(self):
        return f"FiniteLattice({self.name!r}, n={self.n})"


def from_order(names, leq, name="L"):
    """Build a lattice directly from a boolean order matrix."""
    return FiniteLattice(names, leq, name=name)


def build_lattice(elements, covers, name="L"):
    """Validate a cover presentation and derive the full lattice structure.

    The returned cover list is the covering relation of the transitive
    closure of the input edges, so transitive input edges are dropped.
    """
    names = [str(x) for x in elements]
    if len(set(names)) != len(names):
        raise ValueError("element names must be distinct")
    idx = {x: i for i, x in enumerate(names)}
    edges = []
    for lo, hi in covers:
        lo, hi = str(lo), str(hi)
        if lo not in idx or hi not in idx:
            raise ValueError(f"cover pair ({lo!r}, {hi!r}) references undeclared name")
        edges.append((idx[lo], idx[hi]))
    leq = _closure_from_edges(len(names), edges)
    return FiniteLattice(names, leq, name=name)


# -- serialization --------------------------------------------------------


def to_json(L):
    return json.dumps(
        {"name": L.name, "elements": list(L.names),
         "covers": [[L.names[a], L.names[b]] for a, b in L.covers]},
        sort_keys=True)


def from_json(text):
    doc = json.loads(text)
    elements = doc["elements"]
    covers = [tuple(p) for p in doc["covers"]]
    if len(set(elements)) != len(elements):
        raise ValueError("duplicate element names in lattice file")
    if len(set(covers)) != len(covers):
        raise ValueError("duplicate cover pairs in lattice file")
    return build_lattice(elements, covers, name=doc.get("name", "L"))


def load(path):
    with open(path, "r", encoding="utf-8") as f:
        return from_json(f.read())


def save(L, path):
    with open(path, "w", encoding="utf-8") as f:
        f.write(to_json(L) + "\n")


# -- constructions --------------------------------------------------------


def product(A, B):
    """Direct product with componentwise order."""
    if A.n * B.n > SIZE_GUARD:
        raise ParamTooLarge(f"product would have {A.n * B.n} elements")
    names = [f"({a},{b})" for a in A.names for b in B.names]
    leq = np.kron(A.leq, B.leq)
    L = FiniteLattice(names, leq, name=f"{A.name}x{B.name}", _validate=False)
    return L


def dual(L):
    """Order-reversed lattice on the same element names."""
    return FiniteLattice(L.names, L.leq.T.copy(), name=f"{L.name}^op", _validate=False)


def interval_sublattice(L, a, b):
    """The induced lattice on [a, b] plus the map back into L."""
    members = L.interval(a, b)
    names = [L.names[z] for z in members]
    leq = L.leq[np.ix_(members, members)].copy()
    K = FiniteLattice(names, leq, name=f"{L.name}[{L.names[a]},{L.names[b]}]",
                      _validate=False)
    return K, members


# -- builtin catalog -------------------------------------------------------


def _chain(n):
    if n < 1:
        raise UnknownBuiltin("chain needs n >= 1")
    return build_lattice([str(i) for i in range(n)],
                         [(str(i), str(i + 1)) for i in range(n - 1)],
                         name=f"chain:{n}")


def _boolean(n):
    if n < 0 or 2 ** n > SIZE_GUARD:
        raise ParamTooLarge("boolean lattice too large")
    names = ["".join("1" if s >> i & 1 else "0" for i in range(n)) or "()"
             for s in range(2 ** n)]
    m = 2 ** n
    leq = np.zeros((m, m), dtype=bool)
    for s in range(m):
        for t in range(m):
            leq[s, t] = (s & t) == s
    return FiniteLattice(names, leq, name=f"boolean:{n}", _validate=False)


def _m3():
    return build_lattice(["0", "a", "b", "c", "1"],
                         [("0", "a"), ("0", "b"), ("0", "c"),
                          ("a", "1"), ("b", "1"), ("c", "1")], name="M3")


def _n5():
    # pentagon {0, a, b, c, 1} with a > c
    return build_lattice(["0", "a", "b", "c", "1"],
                         [("0", "c"), ("c", "a"), ("a", "1"),
                          ("0", "b"), ("b", "1")], name="N5")


def _set_partitions(universe):
    if not universe:
        yield ()
        return
    first, rest = universe[0], universe[1:]
    for part in _set_partitions(rest):
        yield ((first,),) + part
        for i, block in enumerate(part):
            yield part[:i] + ((first,) + block,) + part[i + 1:]


def _partition(n):
    if n < 1 or n > 5:
        raise ParamTooLarge("partition lattice supported for 1 <= n <= 5")
    parts = []
    for p in _set_partitions(tuple(range(1, n + 1))):
        parts.append(tuple(sorted(tuple(sorted(b)) for b in p)))
    parts = sorted(set(parts), key=lambda p: (len(p), p), reverse=True)
    # finer partitions first: bottom is the all-singletons partition
    names = ["|".join("".join(map(str, b)) for b in p) for p in parts]
    block_of = []
    for p in parts:
        lookup = {}
        for b in p:
            for x in b:
                lookup[x] = b
        block_of.append(lookup)
    m = len(parts)
    leq = np.zeros((m, m), dtype=bool)
    for i, p in enumerate(parts):
        for j in range(m):
            # p <= q iff every block of p is contained in a block of q
            leq[i, j] = all(set(b) <= set(block_of[j][b[0]]) for b in p)
    return FiniteLattice(names, leq, name=f"partition:{n}", _validate=False)


def _subspaces(q, n):
    """All subspaces of F_q^n as sorted reduced-echelon basis rows."""
    if q not in (2, 3) or q ** n > 81:
        raise ParamTooLarge("subspace lattice supported for q in {2,3}, q^n <= 81")
    vectors = list(itertools.product(range(q), repeat=n))
    vec_index = {v: i for i, v in enumerate(vectors)}

    def span(rows):
        got = set()
        for coeffs in itertools.product(range(q), repeat=len(rows)):
            v = [0] * n
            for c, r in zip(coeffs, rows):
                for i, x in enumerate(r):
                    v[i] = (v[i] + c * x) % q
            got.add(tuple(v))
        return got

    def echelon_bases(k):
        for pivots in itertools.combinations(range(n), k):
            free_pos = []
            for r, p in enumerate(pivots):
                for c in range(p + 1, n):
                    if c not in pivots:
                        free_pos.append((r, c))
            for fill in itertools.product(range(q), repeat=len(free_pos)):
                rows = [[0] * n for _ in range(k)]
                for r, p in enumerate(pivots):
                    rows[r][p] = 1
                for (r, c), v in zip(free_pos, fill):
                    rows[r][c] = v
                yield tuple(tuple(r) for r in rows)

    subs = []
    for k in range(n + 1):
        for basis in echelon_bases(k):
            mask = 0
            for v in span(basis):
                mask |= 1 << vec_index[v]
            subs.append((k, basis, mask))
    subs.sort(key=lambda t: (t[0], t[1]))
    names = ["0" if not basis else ",".join("".join(map(str, r)) for r in basis)
             for _, basis, _ in subs]
    m = len(subs)
    leq = np.zeros((m, m), dtype=bool)
    masks = [t[2] for t in subs]
    for i in range(m):
        for j in range(m):
            leq[i, j] = masks[i] & masks[j] == masks[i]
    return FiniteLattice(names, leq, name=f"subspace:{q},{n}", _validate=False)


# Hard-coded Hasse diagrams of the lattices freely generated by a 2-chain
# (resp. 3-chain) together with one extra generator.
_COPROD_C2_C1 = (
    ["0", "a", "b", "c", "d", "e", "f", "g", "1"],
    [("0", "a"), ("0", "b"), ("a", "c"), ("b", "c"), ("b", "d"),
     ("c", "e"), ("e", "f"), ("e", "g"), ("d", "g"), ("f", "1"), ("g", "1")],
)

_COPROD_C3_C1 = (
    ["0", "a", "b", "c", "d", "e", "f", "g", "h", "i",
     "j", "k", "l", "m", "n", "o", "p", "q", "r", "1"],
    [("0", "a"), ("0", "b"), ("a", "c"), ("b", "c"), ("b", "d"),
     ("c", "e"), ("e", "f"), ("e", "g"), ("d", "g"), ("d", "j"),
     ("f", "i"), ("f", "h"), ("g", "h"), ("h", "k"), ("i", "l"),
     ("k", "l"), ("k", "m"), ("j", "o"), ("l", "n"), ("m", "n"),
     ("m", "o"), ("n", "p"), ("o", "q"), ("p", "q"), ("p", "r"),
     ("q", "1"), ("r", "1")],
)


def _coprod_c2_c1():
    return build_lattice(*_COPROD_C2_C1, name="coprod_c2_c1")


def _coprod_c3_c1():
    return build_lattice(*_COPROD_C3_C1, name="coprod_c3_c1")


_BUILTINS = {
    "chain": (_chain, 1), "boolean": (_boolean, 1), "M3": (_m3, 0),
    "N5": (_n5, 0), "partition": (_partition, 1), "subspace": (_subspaces, 2),
    "coprod_c2_c1": (_coprod_c2_c1, 0), "coprod_c3_c1": (_coprod_c3_c1, 0),
}


def builtin(key, *params):
    """Construct a catalog lattice, e.g. builtin("partition", 4)."""
    if key not in _BUILTINS:
        raise UnknownBuiltin(f"unknown builtin {key!r}")
    fn, arity = _BUILTINS[key]
    if len(params) != arity:
        raise UnknownBuiltin(f"builtin {key!r} takes {arity} integer parameter(s)")
    return fn(*[int(p) for p in params])


def builtin_spec(spec):
    """Parse a CLI-style builtin spec like "partition:4" or "subspace:2,3"."""
    key, _, rest = spec.partition(":")
    params = [p for p in rest.split(",") if p] if rest else []
    return builtin(key, *params)


# -- structural predicates -------------------------------------------------


@dataclass(frozen=True)
class PropertyReport:
    modular: bool
    distributive: bool
    complemented: bool
    sectionally_complemented: bool
    relatively_complemented: bool
    atomistic: bool
    semimodular: bool
    geometric: bool
    simple: bool
    height: int

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def is_modular(L):
    """Exhaustive check of a >= c implies a ^ (b v c) == (a ^ b) v c."""
    meet, join, leq = L.meet, L.join, L.leq
    for c in range(L.n):
        above = np.flatnonzero(leq[c])
        jc = join[:, c]  # b v c over all b
        lhs = meet[np.ix_(above, jc)]
        rhs = join[meet[above, :], c]
        if not np.array_equal(lhs, rhs):
            return False
    return True


def is_distributive(L):
    meet, join = L.meet, L.join
    for x in range(L.n):
        mx = meet[x]
        lhs = mx[join]  # x ^ (y v z)
        rhs = join[np.ix_(mx, mx)]
        if not np.array_equal(lhs, rhs):
            return False
    return True


def is_complemented(L):
    m0 = L.meet == L.bottom
    j1 = L.join == L.top
    return bool((m0 & j1).any(axis=1).all())


def is_sectionally_complemented(L):
    for a in range(L.n):
        inside = L.leq[:, a]
        ok = (L.meet == L.bottom) & (L.join == a) & inside[None, :]
        if not ok[inside].any(axis=1).all():
            return False
    return True


def is_relatively_complemented(L):
    for a in range(L.n):
        for b in np.flatnonzero(L.leq[a]):
            inside = L.leq[a] & L.leq[:, b]
            ok = (L.meet == a) & (L.join == int(b)) & inside[None, :]
            if not ok[inside].any(axis=1).all():
                return False
    return True


def is_atomistic(L):
    atoms = L.atoms()
    for x in range(L.n):
        s = L.bottom
        for a in atoms:
            if L.le(a, x):
                s = L.jn(s, a)
        if s != x:
            return False
    return True


def is_semimodular(L):
    cov = np.zeros((L.n, L.n), dtype=bool)
    for a, b in L.covers:
        cov[a, b] = True
    for a in range(L.n):
        for b in range(L.n):
            if cov[L.mt(a, b), a] and not cov[b, L.jn(a, b)]:
                return False
    return True


def is_simple(L):
    """L is simple iff every prime interval generates the coarse congruence."""
    from .congruence import principal_congruence

    if L.n == 1:
        return False
    return all(principal_congruence(L, a, b).block_count() == 1
               for a, b in L.covers)


def properties_report(L):
    distributive = is_distributive(L)
    modular = distributive or is_modular(L)
    semimodular = is_semimodular(L)
    atomistic = is_atomistic(L)
    return PropertyReport(
        modular=modular,
        distributive=distributive,
        complemented=is_complemented(L),
        sectionally_complemented=is_sectionally_complemented(L),
        relatively_complemented=is_relatively_complemented(L),
        atomistic=atomistic,
        semimodular=semimodular,
        geometric=semimodular and atomistic,
        simple=is_simple(L),
        height=L.height(),
    )
