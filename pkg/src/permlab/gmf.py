"""Permutation groups, characters and generalized matrix functions.

Permutations are stored 0-based; cycle notation in and out of the library
is 1-based, e.g. ``(1 2)(3 4)``.  Symmetric groups are always enumerated in
lexicographic order of their image tuples, the order `schur` also uses.
"""

from __future__ import annotations

import itertools
import math
import re
from collections import deque
from fractions import Fraction
from functools import lru_cache

from .errors import DimensionError, DomainError, ParseError, SizeGuardError
from .matrix import one_of, zero_of
from .numeric import CyclotomicNumber, conj

DEFAULT_CLOSURE_CAP = math.factorial(10)


class Permutation:
    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise DomainError(f"not a permutation: {images}")
        self.images = images

    @classmethod
    def identity(cls, n):
        return cls(range(n))

    @classmethod
    def from_cycles(cls, text, n):
        """Parse 1-based cycle notation such as '(1 2 3)(4 5)'."""
        images = list(range(n))
        text = text.strip()
        if text in ("", "()", "e"):
            return cls(images)
        cycles = re.findall(r"\(([^()]*)\)", text)
        if not cycles or re.sub(r"\([^()]*\)", "", text).strip():
            raise ParseError(f"bad cycle notation {text!r}")
        perm = list(range(n))
        for cyc in reversed(cycles):
            pts = [int(t) - 1 for t in re.split(r"[\s,]+", cyc.strip()) if t]
            if any(p < 0 or p >= n for p in pts) or len(set(pts)) != len(pts):
                raise ParseError(f"bad cycle ({cyc}) for degree {n}")
            step = list(range(n))
            for a, b in zip(pts, pts[1:] + pts[:1]):
                step[a] = b
            # apply rightmost cycle first
            perm = [step[perm[x]] for x in range(n)]
        return cls(perm)

    @property
    def n(self):
        return len(self.images)

    def __call__(self, i):
        return self.images[i]

    def __mul__(self, other):
        """Composition: (self * other)(i) = self(other(i))."""
        return Permutation(self.images[j] for j in other.images)

    def inverse(self):
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def cycles(self):
        seen = [False] * self.n
        out = []
        for i in range(self.n):
            if not seen[i]:
                c = []
                j = i
                while not seen[j]:
                    seen[j] = True
                    c.append(j)
                    j = self.images[j]
                out.append(tuple(c))
        return out

    def cycle_type(self):
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def sign(self):
        return -1 if sum(len(c) - 1 for c in self.cycles()) % 2 else 1

    def order(self):
        o = 1
        for c in self.cycles():
            o = o * len(c) // math.gcd(o, len(c))
        return o

    def is_identity(self):
        return all(i == j for i, j in enumerate(self.images))

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other):
        return self.images < other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({self.to_cycles()!r})"

    def to_cycles(self):
        cs = [c for c in self.cycles() if len(c) > 1]
        if not cs:
            return "()"
        return "".join("(" + " ".join(str(i + 1) for i in c) + ")" for c in cs)


class PermGroup:
    """Finite subgroup of S_n, fully enumerated and sorted lexicographically."""

    def __init__(self, n, elements, generators=()):
        self.n = n
        self.elements = tuple(sorted(elements))
        self.generators = tuple(generators)
        self._index = {g: k for k, g in enumerate(self.elements)}

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        return g in self._index

    def index(self, g):
        return self._index[g]

    def __eq__(self, other):
        return isinstance(other, PermGroup) and self.n == other.n and self.elements == other.elements

    def __hash__(self):
        return hash((self.n, self.elements))

    def __repr__(self):
        return f"PermGroup(n={self.n}, order={len(self)})"

    def is_closed(self):
        return all(a * b in self._index for a in self.elements for b in self.elements) and all(
            g.inverse() in self._index for g in self.elements
        )

    def conjugacy_classes(self):
        left = set(self.elements)
        classes = []
        for g in self.elements:
            if g in left:
                cls = {h * g * h.inverse() for h in self.elements}
                classes.append(sorted(cls))
                left -= cls
        return classes


def subgroup_from_generators(n, gens, cap=DEFAULT_CLOSURE_CAP):
    """Breadth-first closure of the generators inside S_n."""
    gens = [g if isinstance(g, Permutation) else Permutation(g) for g in gens]
    for g in gens:
        if g.n != n:
            raise DimensionError(f"generator {g} has degree {g.n}, expected {n}")
    e = Permutation.identity(n)
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = g * x
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise SizeGuardError(f"group closure exceeds cap {cap}")
                queue.append(y)
    return PermGroup(n, seen, gens)


@lru_cache(maxsize=None)
def symmetric_group(n):
    elems = [Permutation(p) for p in itertools.permutations(range(n))]
    gens = []
    if n >= 2:
        gens = [Permutation([1, 0] + list(range(2, n))), Permutation(list(range(1, n)) + [0])]
    return PermGroup(n, elems, gens)


def trivial_group(n):
    return PermGroup(n, [Permutation.identity(n)], ())


def all_subgroups(n):
    """Every subgroup of S_n for n <= 4, each generated by at most two elements."""
    if n > 4:
        raise SizeGuardError("all_subgroups enumerates n <= 4 only")
    S = symmetric_group(n).elements
    found = {}
    for a in S:
        for b in S:
            if b < a:
                continue
            G = subgroup_from_generators(n, [a, b])
            found.setdefault(G.elements, G)
    return sorted(found.values(), key=lambda G: (len(G), G.elements))


# ---------------------------------------------------------------------------
# partitions and irreducible characters of S_n
# ---------------------------------------------------------------------------


class Partition(tuple):
    def __new__(cls, parts):
        parts = tuple(int(p) for p in parts)
        if any(p <= 0 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise DomainError(f"not a partition: {parts}")
        return super().__new__(cls, parts)

    @property
    def size(self):
        return sum(self)

    @classmethod
    def parse(cls, text):
        try:
            return cls(int(t) for t in text.replace(" ", "").split(",") if t)
        except ValueError as exc:
            raise ParseError(f"bad partition {text!r}") from exc

    def __repr__(self):
        return f"Partition({','.join(map(str, self))})"


def partitions(n, max_part=None):
    """All partitions of n in reverse lexicographic order."""
    max_part = n if max_part is None else max_part
    if n == 0:
        yield Partition(())
        return
    for k in range(min(n, max_part), 0, -1):
        for rest in partitions(n - k, k):
            yield Partition((k,) + tuple(rest))


def hook_length_degree(lam):
    """Number of standard Young tableaux of shape lam."""
    n = sum(lam)
    conj_shape = [sum(1 for p in lam if p > j) for j in range(lam[0])] if lam else []
    prod = 1
    for i, row in enumerate(lam):
        for j in range(row):
            prod *= (row - j - 1) + (conj_shape[j] - i - 1) + 1
    return math.factorial(n) // prod


@lru_cache(maxsize=None)
def _mn(beta, mu):
    """Murnaghan-Nakayama on a beta-set (sorted tuple of bead positions)."""
    if not mu:
        return 1
    r, rest = mu[0], mu[1:]
    beads = set(beta)
    total = 0
    for b in beta:
        t = b - r
        if t >= 0 and t not in beads:
            height = sum(1 for c in beta if t < c < b)
            new = tuple(sorted((beads - {b}) | {t}))
            total += (-1) ** height * _mn(new, rest)
    return total


def character_value(lam, mu):
    """chi_lam on the class of cycle type mu."""
    lam = tuple(lam)
    if sum(lam) != sum(mu):
        raise DimensionError("partition sizes differ")
    L = len(lam)
    beta = tuple(sorted(lam[i] + (L - 1 - i) for i in range(L)))
    return _mn(beta, tuple(sorted(mu, reverse=True)))


class Character:
    """Class function on a PermGroup given by an explicit value table."""

    def __init__(self, group, values, name=None, validate=True):
        self.group = group
        if isinstance(values, dict):
            table = tuple(values[g] for g in group.elements)
        else:
            table = tuple(values)
        if len(table) != len(group):
            raise DimensionError("character table length differs from group order")
        self.table = table
        self.name = name
        self.degree = table[group.index(Permutation.identity(group.n))]
        if validate:
            self._validate()

    def _validate(self):
        G = self.group
        gens = G.generators or G.elements
        for g in G.elements:
            v = self(g)
            for h in gens:
                if self(h * g * h.inverse()) != v:
                    raise DomainError(f"character {self.name or ''} is not a class function")
        d = self.degree
        if isinstance(d, CyclotomicNumber):
            d = d.to_rational() if d.is_rational() else None
        if d is None or d < 1 or Fraction(d).denominator != 1:
            raise DomainError("character degree must be a positive integer")

    def __call__(self, g):
        return self.table[self.group.index(g)]

    def __repr__(self):
        return f"Character({self.name or '?'}, degree={self.degree})"


def irreducible_character(lam):
    lam = Partition(lam)
    n = lam.size
    if n > 10:
        raise SizeGuardError("irreducible characters are limited to n <= 10")
    G = symmetric_group(n)
    cache = {}
    vals = []
    for g in G.elements:
        ct = g.cycle_type()
        if ct not in cache:
            cache[ct] = character_value(lam, ct)
        vals.append(cache[ct])
    return Character(G, vals, name=f"chi{tuple(lam)}", validate=False)


def trivial_character(G):
    return Character(G, [1] * len(G), name="trivial", validate=False)


def sign_character(G):
    return Character(G, [g.sign() for g in G.elements], name="sign", validate=False)


def linear_characters(G):
    """All degree-1 characters of G as tables of cyclotomic roots of unity.

    Each generator is sent to every root of unity of order dividing its own
    order; assignments that do not extend to a homomorphism are dropped.
    """
    gens = list(G.generators) or [g for g in G.elements if not g.is_identity()][:1]
    gens = [g for g in gens if not g.is_identity()]
    if not gens:
        return [trivial_character(G)]
    orders = [g.order() for g in gens]
    N = 1
    for o in orders:
        N = N * o // math.gcd(N, o)
    N = max(N, 1)
    out = []
    seen = set()
    for exps in itertools.product(*[range(o) for o in orders]):
        # exponent of zeta_N for each generator
        ks = [e * (N // o) for e, o in zip(exps, orders)]
        value = _extend_homomorphism(G, gens, ks, N)
        if value is None:
            continue
        key = tuple(value[g] for g in G.elements)
        if key in seen:
            continue
        seen.add(key)
        table = [CyclotomicNumber.root(N, k) for k in key]
        out.append(Character(G, table, name=f"linear{exps}", validate=False))
    return out


def _extend_homomorphism(G, gens, ks, N):
    e = Permutation.identity(G.n)
    value = {e: 0}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g, k in zip(gens, ks):
            y = g * x
            v = (value[x] + k) % N
            if y in value:
                if value[y] != v:
                    return None
            else:
                value[y] = v
                queue.append(y)
    if len(value) != len(G):
        return None
    for a in G.elements:
        for b in G.elements:
            if value[a * b] != (value[a] + value[b]) % N:
                return None
    return value


# ---------------------------------------------------------------------------
# generalized matrix functions
# ---------------------------------------------------------------------------


def diagonal_product(A, sigma):
    rows = A.rows
    t = rows[0][sigma.images[0]]
    for i in range(1, A.n):
        t = t * rows[i][sigma.images[i]]
    return t


def gmf(A, H, chi):
    """Sum over sigma in H of chi(sigma) * prod_t a_{t, sigma(t)}."""
    if A.n != H.n:
        raise DimensionError(f"matrix degree {A.n} differs from group degree {H.n}")
    if chi.group != H:
        raise DomainError("character is defined on a different group")
    if A.n == 0:
        return one_of(A.field, A.prec)
    acc = None
    for sigma, c in zip(H.elements, chi.table):
        if c == 0:
            continue
        t = diagonal_product(A, sigma)
        t = t if c == 1 else (-t if c == -1 else t * c)
        acc = t if acc is None else acc + t
    return acc if acc is not None else zero_of(A.field, A.prec)


def normalized_gmf(A, H, chi):
    d = chi.degree
    v = gmf(A, H, chi)
    if d == 1:
        return v
    if isinstance(d, CyclotomicNumber):
        d = d.to_rational()
    return v * Fraction(1, int(d))


def immanant(A, lam):
    lam = Partition(lam)
    if lam.size != A.n:
        raise DimensionError(f"partition of {lam.size} does not match n = {A.n}")
    chi = irreducible_character(lam)
    return gmf(A, chi.group, chi)


def character_inner_product(chi, psi):
    """(1/|G|) sum chi(g) conj(psi(g))."""
    G = chi.group
    acc = Fraction(0)
    for a, b in zip(chi.table, psi.table):
        acc = acc + a * conj(b)
    return acc * Fraction(1, len(G))


def parse_generators(text, n):
    """Semicolon- or pipe-separated cycle strings, e.g. '(1 2); (1 2 3 4)'."""
    text = text.strip()
    if not text:
        return []
    return [Permutation.from_cycles(t, n) for t in re.split(r"[;|]", text) if t.strip()]
