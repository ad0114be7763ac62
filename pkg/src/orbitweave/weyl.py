"""Finite Weyl groups built from Cartan data.

Elements are stored as permutations of the full root set, so identity tests
and hashing never depend on the word used to reach an element.  Every element
also carries its ShortLex-minimal reduced word, computed once when the group
is enumerated.

Conventions: ``cartan[i][j] = <alpha_j, coroot_i>``, so the simple reflection
``s_i`` sends ``alpha_j`` to ``alpha_j - cartan[i][j] * alpha_i``.  Roots are
integer vectors in the simple-root basis.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

DEFAULT_ORDER_CAP = 100_000

Root = tuple[int, ...]


class CartanError(ValueError):
    """Raised for malformed or non-finite Cartan data."""

    def __init__(self, message: str, submatrix: Sequence[Sequence[int]] | None = None):
        super().__init__(message)
        self.submatrix = submatrix


def _chain(n: int) -> list[list[int]]:
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
    for i in range(n - 1):
        a[i][i + 1] = a[i + 1][i] = -1
    return a


def _simple_cartan(letter: str, n: int) -> list[list[int]]:
    if letter == "A" and n >= 1:
        return _chain(n)
    if letter in "BC" and n >= 2:
        a = _chain(n)
        # B: last simple root short; C: last simple root long.
        if letter == "B":
            a[n - 1][n - 2] = -2
        else:
            a[n - 2][n - 1] = -2
        return a
    if letter == "D" and n >= 4:
        a = _chain(n)
        a[n - 2][n - 1] = a[n - 1][n - 2] = 0
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
        return a
    if letter == "E" and n in (6, 7, 8):
        # Bourbaki numbering 1,3,4,5,... along the chain, node 2 on node 4.
        a = [[0] * n for _ in range(n)]
        for i in range(n):
            a[i][i] = 2
        chain = [0] + list(range(2, n))
        for x, y in zip(chain, chain[1:]):
            a[x][y] = a[y][x] = -1
        a[1][3] = a[3][1] = -1
        return a
    if letter == "F" and n == 4:
        a = _chain(4)
        a[2][1] = -2
        return a
    if letter == "G" and n == 2:
        return [[2, -3], [-1, 2]]
    raise CartanError(f"unknown Cartan type {letter}{n}")


_COMPONENT = re.compile(r"^([A-G])(\d+)$")


@dataclass(frozen=True)
class CartanDatum:
    """Cartan matrix plus a display label such as ``"A2"`` or ``"A1+A1"``."""

    label: str = field(compare=False)
    cartan_matrix: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.cartan_matrix)

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[int]], label: str = "custom") -> CartanDatum:
        m = tuple(tuple(int(x) for x in row) for row in matrix)
        _check_finite_type(m)
        return cls(label, m)

    def entry(self, i: int, j: int) -> int:
        return self.cartan_matrix[i][j]

    def orthogonal(self, i: int, j: int) -> bool:
        return self.cartan_matrix[i][j] == 0

    def is_simply_laced(self) -> bool:
        n = self.rank
        return all(
            self.cartan_matrix[i][j] * self.cartan_matrix[j][i] in (0, 1)
            for i in range(n)
            for j in range(n)
            if i != j
        )

    def restrict(self, subset: Iterable[int]) -> CartanDatum:
        """Sub-datum on ``subset``, reindexed in increasing order."""
        idx = sorted(set(subset))
        for i in idx:
            if not 0 <= i < self.rank:
                raise CartanError(f"simple root index {i} out of range for {self.label}")
        m = tuple(tuple(self.cartan_matrix[i][j] for j in idx) for i in idx)
        return CartanDatum(f"{self.label}[{','.join(map(str, idx))}]", m)

    def __add__(self, other: CartanDatum) -> CartanDatum:
        n, k = self.rank, other.rank
        rows = [list(r) + [0] * k for r in self.cartan_matrix]
        rows += [[0] * n + list(r) for r in other.cartan_matrix]
        label = "+".join(x for x in (self.label, other.label) if x)
        return CartanDatum(label, tuple(tuple(r) for r in rows))

    def __str__(self) -> str:
        return self.label


def parse_cartan(text: str) -> CartanDatum:
    """Parse ``"A2"``, ``"B2"``, ``"A2+A1"``...; the empty string gives rank 0."""
    text = text.strip()
    datum = CartanDatum("", ())
    if not text:
        return datum
    for part in text.split("+"):
        m = _COMPONENT.match(part.strip())
        if not m:
            raise CartanError(f"cannot parse Cartan type component {part!r}")
        letter, n = m.group(1), int(m.group(2))
        datum = datum + CartanDatum(f"{letter}{n}", tuple(map(tuple, _simple_cartan(letter, n))))
    return CartanDatum(text.replace(" ", ""), datum.cartan_matrix)


def _det(rows: list[list[Fraction]]) -> Fraction:
    m = [r[:] for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                for k in range(c, n):
                    m[r][k] -= f * m[c][k]
    return det


def _check_finite_type(m: tuple[tuple[int, ...], ...]) -> None:
    n = len(m)
    if any(len(row) != n for row in m):
        raise CartanError("Cartan matrix must be square", m)
    for i in range(n):
        if m[i][i] != 2:
            raise CartanError(f"diagonal entry ({i},{i}) is {m[i][i]}, expected 2", [[m[i][i]]])
        for j in range(n):
            if i == j:
                continue
            sub = [[m[i][i], m[i][j]], [m[j][i], m[j][j]]]
            if m[i][j] > 0 or (m[i][j] == 0) != (m[j][i] == 0):
                raise CartanError(f"invalid off-diagonal pair ({i},{j})", sub)
            if m[i][j] * m[j][i] > 3:
                raise CartanError(f"pair ({i},{j}) generates an infinite dihedral group", sub)
    # symmetrize: d_i * a_ij = d_j * a_ji, one scale per connected component
    d: list[Fraction | None] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if i == j or m[i][j] == 0:
                    continue
                want = d[i] * m[i][j] / m[j][i]
                if d[j] is None:
                    d[j] = want
                    queue.append(j)
                elif d[j] != want:
                    raise CartanError("Cartan matrix is not symmetrizable", m)
    sym = [[d[i] * m[i][j] for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        if _det([row[:k] for row in sym[:k]]) <= 0:
            raise CartanError(
                f"Cartan matrix is not of finite type (leading {k}x{k} block)",
                [list(row[:k]) for row in m[:k]],
            )


@dataclass(frozen=True)
class Weight:
    """Integral weight; ``basis`` is ``"root"`` (default) or ``"fundamental"``."""

    coefficients: tuple[int, ...]
    basis: str = "root"

    def __post_init__(self) -> None:
        if self.basis not in ("root", "fundamental"):
            raise ValueError(f"unknown weight basis {self.basis!r}")
        object.__setattr__(self, "coefficients", tuple(int(c) for c in self.coefficients))


def pairing(weight: Weight, alpha: int, datum: CartanDatum) -> int:
    """The integer <weight, coroot of simple root alpha>."""
    if len(weight.coefficients) != datum.rank:
        raise ValueError("weight dimension does not match the Cartan datum")
    if weight.basis == "fundamental":
        return weight.coefficients[alpha]
    return sum(c * datum.cartan_matrix[alpha][j] for j, c in enumerate(weight.coefficients))


def fundamental_coordinates(weight: Weight, datum: CartanDatum) -> tuple[int, ...]:
    return tuple(pairing(weight, i, datum) for i in range(datum.rank))


@dataclass(frozen=True)
class WeylElement:
    perm: tuple[int, ...]
    group: WeylGroup = field(compare=False, hash=False, repr=False)

    def __mul__(self, other: WeylElement) -> WeylElement:
        p = self.perm
        return self.group._intern(tuple(p[i] for i in other.perm))

    def inverse(self) -> WeylElement:
        inv = [0] * len(self.perm)
        for i, j in enumerate(self.perm):
            inv[j] = i
        return self.group._intern(tuple(inv))

    @property
    def word(self) -> tuple[int, ...]:
        return self.group._words[self.perm]

    @property
    def length(self) -> int:
        return len(self.group._words[self.perm])

    def is_identity(self) -> bool:
        return self.perm == self.group.identity.perm

    def apply(self, root: Sequence[int]) -> Root:
        return self.group.roots[self.perm[self.group.root_index(root)]]

    def __lt__(self, other: WeylElement) -> bool:
        return (self.length, self.word) < (other.length, other.word)

    def __repr__(self) -> str:
        return f"WeylElement({word_label(self.word)})"


def word_label(word: Sequence[int]) -> str:
    """Human-readable id for a word: ``"e"`` or ``"s0s1"``."""
    return "".join(f"s{i}" for i in word) or "e"


class WeylGroup:
    """All elements of a finite Weyl group, in ShortLex order of their words."""

    def __init__(self, datum: CartanDatum, order_cap: int = DEFAULT_ORDER_CAP):
        self.datum = datum
        n = datum.rank
        a = datum.cartan_matrix
        simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]

        def reflect(i: int, v: Root) -> Root:
            c = sum(a[i][j] * v[j] for j in range(n))
            return tuple(v[j] - c * (i == j) for j in range(n))

        positive = list(simple)
        seen = set(positive)
        queue = deque(positive)
        while queue:
            v = queue.popleft()
            for i in range(n):
                r = reflect(i, v)
                if r not in seen and all(x >= 0 for x in r):
                    seen.add(r)
                    positive.append(r)
                    queue.append(r)
                    if len(positive) > order_cap:
                        raise CartanError(f"root system of {datum.label} exceeds the size cap")
        positive.sort(key=lambda r: (sum(r), tuple(-x for x in r)))
        self.n_positive = len(positive)
        self.roots: list[Root] = positive + [tuple(-x for x in r) for r in positive]
        self._root_index = {r: k for k, r in enumerate(self.roots)}

        self._elements: dict[tuple[int, ...], WeylElement] = {}
        self._words: dict[tuple[int, ...], tuple[int, ...]] = {}
        ident = tuple(range(len(self.roots)))
        self.identity = self._intern(ident, enumerating=True)
        self._words[ident] = ()
        self.generators = [
            self._intern(tuple(self._root_index[reflect(i, r)] for r in self.roots), enumerating=True)
            for i in range(n)
        ]

        # BFS appending generators on the right; parents are visited in ShortLex
        # order, so the first word found for an element is its ShortLex minimum.
        order = [self.identity]
        queue2 = deque([self.identity])
        while queue2:
            w = queue2.popleft()
            wword = self._words[w.perm]
            for i, s in enumerate(self.generators):
                if wword and wword[-1] == i:
                    continue
                p = tuple(w.perm[k] for k in s.perm)
                if p in self._words:
                    continue
                if self._inversions(p) != len(wword) + 1:
                    continue
                self._words[p] = wword + (i,)
                x = self._intern(p, enumerating=True)
                order.append(x)
                queue2.append(x)
                if len(order) > order_cap:
                    raise CartanError(
                        f"Weyl group of {datum.label} has more than {order_cap} elements"
                    )
        self.elements: list[WeylElement] = order
        self._sealed = True

    _sealed = False

    def _intern(self, perm: tuple[int, ...], enumerating: bool = False) -> WeylElement:
        x = self._elements.get(perm)
        if x is None:
            if self._sealed and not enumerating:
                raise ValueError("permutation is not an element of this group")
            x = WeylElement(perm, self)
            self._elements[perm] = x
        return x

    def _inversions(self, perm: tuple[int, ...]) -> int:
        npos = self.n_positive
        return sum(1 for k in range(npos) if perm[k] >= npos)

    # ------------------------------------------------------------------ basics

    @property
    def rank(self) -> int:
        return self.datum.rank

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def root_index(self, root: Sequence[int]) -> int:
        try:
            return self._root_index[tuple(root)]
        except KeyError:
            raise ValueError(f"{tuple(root)} is not a root of {self.datum.label}") from None

    def is_positive(self, root: Sequence[int]) -> bool:
        return self.root_index(root) < self.n_positive

    @property
    def positive_roots(self) -> list[Root]:
        return self.roots[: self.n_positive]

    def s(self, i: int) -> WeylElement:
        return self.generators[i]

    def from_word(self, word: Iterable[int]) -> WeylElement:
        w = self.identity
        for i in word:
            w = w * self.generators[i]
        return w

    def length(self, w: WeylElement) -> int:
        return self._inversions(w.perm)

    @cached_property
    def longest(self) -> WeylElement:
        return self.elements[-1]

    @cached_property
    def by_length(self) -> dict[int, list[WeylElement]]:
        out: dict[int, list[WeylElement]] = {}
        for w in self.elements:
            out.setdefault(w.length, []).append(w)
        return out

    def apply_to_root(self, w: WeylElement, root: Sequence[int]) -> Root:
        return w.apply(root)

    def left_descents(self, w: WeylElement) -> set[int]:
        # s_i w < w  iff  w^{-1}(alpha_i) < 0
        inv = w.inverse().perm
        return {i for i in range(self.rank) if inv[i] >= self.n_positive}

    def right_descents(self, w: WeylElement) -> set[int]:
        return {i for i in range(self.rank) if w.perm[i] >= self.n_positive}

    # ----------------------------------------------------------- Bruhat order

    def bruhat_leq(self, u: WeylElement, v: WeylElement) -> bool:
        return self._bruhat(u.perm, v.perm)

    @lru_cache(maxsize=None)
    def _bruhat(self, u: tuple[int, ...], v: tuple[int, ...]) -> bool:
        lu, lv = len(self._words[u]), len(self._words[v])
        if lu > lv:
            return False
        if lv == 0:
            return lu == 0
        i = self._words[v][0]  # a left descent of v
        s = self.generators[i].perm
        sv = tuple(s[k] for k in v)
        su = tuple(s[k] for k in u)
        if len(self._words[su]) < lu:
            return self._bruhat(su, sv)
        return self._bruhat(u, sv)

    # ------------------------------------------------------ parabolic pieces

    def parabolic_subgroup(self, subset: Iterable[int]) -> set[WeylElement]:
        gens = [self.generators[i] for i in subset]
        return generated_subgroup(gens, self.identity)

    def min_coset_reps(self, subset: Iterable[int]) -> list[WeylElement]:
        """W^I: elements w with w(alpha) positive for every alpha in I."""
        idx = list(subset)
        npos = self.n_positive
        return [w for w in self.elements if all(w.perm[i] < npos for i in idx)]

    def min_in_left_coset(
        self, w: WeylElement, subgroup: Iterable[WeylElement], side: str = "left"
    ) -> set[WeylElement]:
        """Minimal-length elements of ``w*H`` (``side="left"``) or ``H*w``."""
        h = set(subgroup)
        check_subgroup(h)
        coset = {w * x for x in h} if side == "left" else {x * w for x in h}
        m = min(x.length for x in coset)
        return {x for x in coset if x.length == m}

    # ------------------------------------------------------ reflections etc.

    def braid_order(self, i: int, j: int) -> int:
        if i == j:
            raise ValueError("braid order needs two distinct simple roots")
        return {0: 2, 1: 3, 2: 4, 3: 6}[self.datum.entry(i, j) * self.datum.entry(j, i)]

    def reflection(self, root: Sequence[int]) -> WeylElement:
        """s_gamma for a root gamma, as w s_i w^{-1} with gamma = w(alpha_i)."""
        k = self.root_index(root)
        if k >= self.n_positive:
            k -= self.n_positive
        for w in self.elements:
            for i in range(self.rank):
                if w.perm[i] == k:
                    return w * self.generators[i] * w.inverse()
        raise AssertionError("unreachable: every root is W-conjugate to a simple root")

    @cached_property
    def _reflections(self) -> dict[Root, WeylElement]:
        return {r: self.reflection(r) for r in self.positive_roots}

    def reflections(self) -> set[WeylElement]:
        return set(self._reflections.values())

    def reflection_root(self, w: WeylElement) -> Root | None:
        for r, s in self._reflections.items():
            if s == w:
                return r
        return None

    def roots_orthogonal(self, a: Sequence[int], b: Sequence[int]) -> bool:
        return self._reflections[_positive(a)].apply(b) == tuple(b)

    def orthogonal_root_pairs(self) -> list[tuple[Root, Root]]:
        pos = self.positive_roots
        return [
            (a, b)
            for x, a in enumerate(pos)
            for b in pos[x + 1 :]
            if self.roots_orthogonal(a, b)
        ]

    def commuting_reflection_products(self) -> set[WeylElement]:
        return {self._reflections[a] * self._reflections[b] for a, b in self.orthogonal_root_pairs()}

    def pairing(self, weight: Weight, alpha: int) -> int:
        return pairing(weight, alpha, self.datum)


def _positive(root: Sequence[int]) -> Root:
    r = tuple(root)
    return r if any(x > 0 for x in r) else tuple(-x for x in r)


def check_subgroup(h: set[WeylElement]) -> None:
    if not h:
        raise ValueError("subgroup must be non-empty")
    for x in h:
        if x.inverse() not in h:
            raise ValueError(f"{x!r} has no inverse in the given set: not a subgroup")
        for y in h:
            if x * y not in h:
                raise ValueError(f"{x!r}*{y!r} leaves the given set: not a subgroup")


def generated_subgroup(gens: Iterable[WeylElement], identity: WeylElement) -> set[WeylElement]:
    gens = list(gens)
    out = {identity}
    queue = deque([identity])
    while queue:
        w = queue.popleft()
        for g in gens:
            x = w * g
            if x not in out:
                out.add(x)
                queue.append(x)
    return out


@lru_cache(maxsize=64)
def build_weyl(datum: CartanDatum | str, order_cap: int = DEFAULT_ORDER_CAP) -> WeylGroup:
    if isinstance(datum, str):
        datum = parse_cartan(datum)
    return WeylGroup(datum, order_cap)


def alternating_word(a: int, b: int, m: int) -> tuple[int, ...]:
    """Letters of ``... s_b s_a`` with m factors, rightmost factor s_a."""
    return tuple(a if (m - 1 - k) % 2 == 0 else b for k in range(m))


def classical_order(label: str) -> int:
    """Order of W from the classical formulas, for cross-checking enumeration."""
    from math import factorial

    total = 1
    for part in filter(None, label.split("+")):
        letter, n = part[0], int(part[1:])
        if letter == "A":
            total *= factorial(n + 1)
        elif letter in "BC":
            total *= 2**n * factorial(n)
        elif letter == "D":
            total *= 2 ** (n - 1) * factorial(n)
        else:
            total *= {"E6": 51840, "E7": 2903040, "E8": 696729600, "F4": 1152, "G2": 12}[part]
    return total


__all__ = [
    "CartanDatum",
    "CartanError",
    "Weight",
    "WeylElement",
    "WeylGroup",
    "alternating_word",
    "build_weyl",
    "classical_order",
    "fundamental_coordinates",
    "generated_subgroup",
    "pairing",
    "parse_cartan",
    "word_label",
]
