"""Exact models of finitely generated groups.

Every family stores its elements as plain hashable tuples in a canonical
form, so equality of group elements is tuple equality and the word problem
is decided by normalising.  Words are strings over ``a, b, c, ...`` with the
upper-case letter standing for the inverse generator.
"""

from __future__ import annotations

import json
import re
import string
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

from .errors import IdentityGenerator, InvalidSpec, MixedGroups

Value = Hashable

LETTERS = string.ascii_lowercase


class GrowthWarning(UserWarning):
    """Raised for families without a growth guarantee (integer matrices)."""


class Group:
    """Common interface; subclasses are frozen dataclasses and immutable."""

    name = "group"

    def identity(self) -> Value:
        raise NotImplementedError

    def mul(self, g: Value, h: Value) -> Value:
        raise NotImplementedError

    def inv(self, g: Value) -> Value:
        raise NotImplementedError

    def base_generators(self) -> list[Value]:
        """Values of the letters ``a, b, ...`` in order."""
        raise NotImplementedError

    # -- derived helpers -------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.base_generators())

    def element(self, value: Value) -> "Element":
        return Element(self, value)

    def evaluate(self, word: str) -> Value:
        gens = self.base_generators()
        result = self.identity()
        for letter in word:
            idx = LETTERS.find(letter.lower())
            if idx < 0 or idx >= len(gens):
                raise InvalidSpec(f"malformed word {word!r} for {self.name}")
            g = gens[idx]
            result = self.mul(result, g if letter.islower() else self.inv(g))
        return result

    def power(self, g: Value, t: int) -> Value:
        if t < 0:
            g, t = self.inv(g), -t
        result = self.identity()
        for _ in range(t):
            result = self.mul(result, g)
        return result


def inverse_word(word: str) -> str:
    return word[::-1].swapcase()


@dataclass(frozen=True, eq=False)
class Element:
    """A group element bound to its group; arithmetic refuses to mix groups."""

    group: Group
    value: Value

    def _check(self, other: "Element") -> None:
        if not isinstance(other, Element) or other.group != self.group:
            raise MixedGroups(f"cannot combine elements of {self.group.name} and "
                              f"{getattr(getattr(other, 'group', None), 'name', other)!r}")

    def __mul__(self, other: "Element") -> "Element":
        self._check(other)
        return Element(self.group, self.group.mul(self.value, other.value))

    def inverse(self) -> "Element":
        return Element(self.group, self.group.inv(self.value))

    __invert__ = inverse

    def __pow__(self, t: int) -> "Element":
        return Element(self.group, self.group.power(self.value, t))

    def is_identity(self) -> bool:
        return self.value == self.group.identity()

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Element) and other.group == self.group
                and other.value == self.value)

    def __hash__(self) -> int:
        return hash(self.value)

    def __lt__(self, other: "Element") -> bool:
        self._check(other)
        return self.value < other.value

    def __repr__(self) -> str:
        return f"Element({self.group.name}, {self.value!r})"


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class FreeAbelian(Group):
    n: int = 1

    def __post_init__(self):
        if self.n < 1:
            raise InvalidSpec("FreeAbelian needs n >= 1")

    @property
    def name(self) -> str:
        return "Z" if self.n == 1 else f"Z^{self.n}"

    def identity(self):
        return (0,) * self.n

    def mul(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def inv(self, g):
        return tuple(-a for a in g)

    def base_generators(self):
        return [tuple(int(i == j) for j in range(self.n)) for i in range(self.n)]


@dataclass(frozen=True)
class InfiniteDihedral(Group):
    """Elements ``(sign, offset)`` act on the integers by ``x -> sign*x + offset``.

    The product ``g*h`` is the composition ``g o h``.
    """

    name = "Dinf"

    def identity(self):
        return (1, 0)

    def mul(self, g, h):
        return (g[0] * h[0], g[0] * h[1] + g[1])

    def inv(self, g):
        return (g[0], -g[0] * g[1])

    def base_generators(self):
        return [(-1, 0), (-1, 1)]


@dataclass(frozen=True)
class Heisenberg3(Group):
    """Integer upper-unitriangular 3x3 matrices, stored as ``(a, b, c)`` for
    ``[[1, a, c], [0, 1, b], [0, 0, 1]]``."""

    name = "Heis"

    def identity(self):
        return (0, 0, 0)

    def mul(self, g, h):
        return (g[0] + h[0], g[1] + h[1], g[2] + h[2] + g[0] * h[1])

    def inv(self, g):
        return (-g[0], -g[1], -g[2] + g[0] * g[1])

    def base_generators(self):
        return [(1, 0, 0), (0, 1, 0)]


@dataclass(frozen=True)
class Free(Group):
    """Free group on ``k`` letters; elements are reduced words of signed
    letter numbers ``+i`` / ``-i`` (1-based)."""

    k: int = 2

    def __post_init__(self):
        if self.k < 1:
            raise InvalidSpec("Free needs k >= 1")

    @property
    def name(self) -> str:
        return f"F{self.k}"

    def identity(self):
        return ()

    def mul(self, g, h):
        i = 0
        n = min(len(g), len(h))
        while i < n and g[-1 - i] == -h[i]:
            i += 1
        return g[:len(g) - i] + h[i:]

    def inv(self, g):
        return tuple(-x for x in reversed(g))

    def base_generators(self):
        return [(i + 1,) for i in range(self.k)]


def _det(m: Sequence[Sequence[int]]) -> int:
    # Bareiss fraction-free elimination
    a = [list(row) for row in m]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _integer_inverse(m):
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    inv = [row[n:] for row in aug]
    if any(x.denominator != 1 for row in inv for x in row):
        raise InvalidSpec("matrix is not invertible over the integers")
    return tuple(tuple(int(x) for x in row) for row in inv)


@dataclass(frozen=True)
class IntegerMatrix(Group):
    """Subgroup of GL(n, Z) generated by the given matrices.

    Equality is exact, but nothing is promised about growth, so balls can get
    large quickly.
    """

    matrices: tuple = ()
    _inverses: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        mats = tuple(tuple(tuple(int(x) for x in row) for row in m) for m in self.matrices)
        if not mats:
            raise InvalidSpec("IntegerMatrix needs at least one generator")
        dim = len(mats[0])
        for m in mats:
            if len(m) != dim or any(len(row) != dim for row in m):
                raise InvalidSpec("matrix generators must be square of equal dimension")
            if _det(m) not in (1, -1):
                raise InvalidSpec(f"matrix {m} has determinant != +-1")
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "_inverses", tuple(_integer_inverse(m) for m in mats))
        warnings.warn("IntegerMatrix: no growth guarantee; ball sizes may explode",
                      GrowthWarning, stacklevel=3)

    @property
    def dim(self) -> int:
        return len(self.matrices[0])

    @property
    def name(self) -> str:
        return f"Mat{self.dim}x{len(self.matrices)}"

    def identity(self):
        n = self.dim
        return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))

    def mul(self, g, h):
        cols = list(zip(*h))
        return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in g)

    def inv(self, g):
        for m, mi in zip(self.matrices, self._inverses):
            if g == m:
                return mi
            if g == mi:
                return m
        return _integer_inverse(g)

    def base_generators(self):
        return list(self.matrices)


@dataclass(frozen=True)
class DirectWithFinite(Group):
    """``base x Z/mZ``; elements are ``(base_value, k)`` with ``0 <= k < m``.

    The cyclic factor gets the letter after the base letters.
    """

    base: Group = field(default_factory=FreeAbelian)
    order: int = 2

    def __post_init__(self):
        if self.order < 2:
            raise InvalidSpec("finite part needs order >= 2")

    @property
    def name(self) -> str:
        return f"{self.base.name} x C{self.order}"

    def identity(self):
        return (self.base.identity(), 0)

    def mul(self, g, h):
        return (self.base.mul(g[0], h[0]), (g[1] + h[1]) % self.order)

    def inv(self, g):
        return (self.base.inv(g[0]), (-g[1]) % self.order)

    def base_generators(self):
        gens = [(g, 0) for g in self.base.base_generators()]
        gens.append((self.base.identity(), 1))
        return gens


# ---------------------------------------------------------------------------
# specs and the DSL


FAMILIES = ("FreeAbelian", "InfiniteDihedral", "Heisenberg3", "Free",
            "IntegerMatrix", "DirectWithFinite")


@dataclass(frozen=True)
class GroupSpec:
    family: str
    n: int = 1
    matrices: tuple = ()
    base: "GroupSpec | None" = None
    order: int = 0
    extra_generators: tuple[str, ...] = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidSpec(f"unknown family {self.family!r}")
        for w in self.extra_generators:
            if not re.fullmatch(r"[A-Za-z]*", w):
                raise InvalidSpec(f"malformed word {w!r}")


def make_group(spec: GroupSpec) -> Group:
    if spec.family == "FreeAbelian":
        return FreeAbelian(spec.n)
    if spec.family == "InfiniteDihedral":
        return InfiniteDihedral()
    if spec.family == "Heisenberg3":
        return Heisenberg3()
    if spec.family == "Free":
        return Free(spec.n)
    if spec.family == "IntegerMatrix":
        return IntegerMatrix(spec.matrices)
    if spec.base is None:
        raise InvalidSpec("DirectWithFinite needs a base spec")
    return DirectWithFinite(make_group(spec.base), spec.order)


def parse_group(text: str, extra: Iterable[str] = ()) -> GroupSpec:
    """Parse the group DSL: ``Z``, ``Z^2``, ``Dinf``, ``Heis``, ``F2``,
    ``Z x C3`` and ``Mat[[1,2],[0,1]];[[1,0],[2,1]]``."""
    s = text.strip()
    extra = tuple(extra)
    m = re.fullmatch(r"(.+?)\s+x\s+C(\d+)", s)
    if m:
        return GroupSpec("DirectWithFinite", base=parse_group(m.group(1)),
                         order=int(m.group(2)), extra_generators=extra)
    if s == "Z":
        return GroupSpec("FreeAbelian", n=1, extra_generators=extra)
    m = re.fullmatch(r"Z\^(\d+)", s)
    if m:
        return GroupSpec("FreeAbelian", n=int(m.group(1)), extra_generators=extra)
    if s in ("Dinf", "D_inf", "Dinfty"):
        return GroupSpec("InfiniteDihedral", extra_generators=extra)
    if s in ("Heis", "H3"):
        return GroupSpec("Heisenberg3", extra_generators=extra)
    m = re.fullmatch(r"F(\d+)", s)
    if m:
        return GroupSpec("Free", n=int(m.group(1)), extra_generators=extra)
    if s.startswith("Mat"):
        try:
            mats = tuple(json.loads(part) for part in s[3:].split(";"))
        except json.JSONDecodeError as exc:
            raise InvalidSpec(f"cannot parse matrices in {text!r}") from exc
        return GroupSpec("IntegerMatrix", matrices=mats, extra_generators=extra)
    raise InvalidSpec(f"unrecognised group {text!r}")


# ---------------------------------------------------------------------------
# generating sets


@dataclass(frozen=True)
class GeneratingSet:
    group: Group
    members: tuple
    labels: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.members)

    def inverse_index(self) -> list[int]:
        pos = {v: i for i, v in enumerate(self.members)}
        return [pos[self.group.inv(v)] for v in self.members]

    def is_symmetric(self) -> bool:
        vals = set(self.members)
        return all(self.group.inv(v) in vals for v in vals)


def symmetrize_generators(group: Group, words: Iterable[str] = (),
                          include_standard: bool = True) -> GeneratingSet:
    """Close ``words`` (plus the standard letters) under inversion.

    Duplicates are dropped keeping the first label; a word evaluating to the
    identity raises ``IdentityGenerator``.
    """
    seq: list[str] = []
    if include_standard:
        seq.extend(LETTERS[i] for i in range(group.rank))
    seq.extend(words)
    members: list = []
    labels: list[str] = []
    seen: set = set()
    ident = group.identity()
    for w in seq:
        v = group.evaluate(w)
        if v == ident:
            raise IdentityGenerator(f"word {w!r} evaluates to the identity")
        for val, lab in ((v, w), (group.inv(v), inverse_word(w))):
            if val not in seen:
                seen.add(val)
                members.append(val)
                labels.append(lab)
    return GeneratingSet(group, tuple(members), tuple(labels))
