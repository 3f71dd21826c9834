"""Skew-symmetrizable seeds, their weighted quivers, and mutation.

Vertices are labelled 1..n everywhere in the public API. Exchange matrices
are stored doubled (``B2 = 2*B``) so the half-integer entries attached to
dashed arrows stay integral.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources
from math import gcd


class SeedError(ValueError):
    pass


def _frac_matrix(rows):
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


@dataclass(frozen=True)
class Seed:
    """Exchange matrix B (stored as 2B) with symmetrizer d."""

    B2: tuple
    d: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        B2 = tuple(tuple(int(x) for x in row) for row in self.B2)
        d = tuple(int(x) for x in self.d)
        object.__setattr__(self, "B2", B2)
        object.__setattr__(self, "d", d)
        n = len(d)
        if len(B2) != n or any(len(row) != n for row in B2):
            raise SeedError("B must be square and match the length of d")
        if any(x <= 0 for x in d):
            raise SeedError("weights must be positive")
        for i in range(n):
            for j in range(n):
                if B2[i][j] * d[j] != -B2[j][i] * d[i]:
                    raise SeedError(f"B*diag(d) is not skew-symmetric at ({i + 1},{j + 1})")

    @classmethod
    def from_matrix(cls, B, d, name=""):
        """Build from an ordinary matrix whose entries may be halves."""
        B2 = []
        for row in B:
            out = []
            for x in row:
                y = 2 * Fraction(x)
                if y.denominator != 1:
                    raise SeedError(f"entry {x} is not in (1/2)Z")
                out.append(int(y))
            B2.append(out)
        return cls(tuple(map(tuple, B2)), tuple(d), name)

    @property
    def n(self):
        return len(self.d)

    def b(self, i, j):
        return Fraction(self.B2[i - 1][j - 1], 2)

    def bhat(self, i, j):
        return Fraction(self.B2[i - 1][j - 1] * self.d[j - 1], 2)

    @cached_property
    def B(self):
        return _frac_matrix([[Fraction(x, 2) for x in row] for row in self.B2])

    @cached_property
    def Bhat(self):
        return _frac_matrix([[Fraction(x * dj, 2) for x, dj in zip(row, self.d)] for row in self.B2])

    @cached_property
    def sigma(self):
        return WeightedQuiver.from_seed(self).sigma

    @cached_property
    def frozen(self):
        """Vertices touching a half-integer entry (the set I0)."""
        out = set()
        for i in range(self.n):
            for j in range(self.n):
                if self.B2[i][j] % 2:
                    out.update((i + 1, j + 1))
        return frozenset(out)

    @property
    def mutable(self):
        return tuple(k for k in range(1, self.n + 1) if k not in self.frozen)

    def pairing(self, alpha, beta):
        """<alpha, beta> = alpha^T Bhat beta, as a Fraction."""
        total = 0
        for i, a in enumerate(alpha):
            if a:
                row = self.B2[i]
                for j, c in enumerate(beta):
                    if c:
                        total += a * c * row[j] * self.d[j]
        return Fraction(total, 2)

    def renamed(self, name):
        return Seed(self.B2, self.d, name)

    def to_json(self):
        return {"name": self.name, "n": self.n, "d": list(self.d), "B2": [list(r) for r in self.B2]}

    @classmethod
    def from_json(cls, obj):
        if "n" in obj and obj["n"] != len(obj["d"]):
            raise SeedError("n does not match the length of d")
        return cls(tuple(map(tuple, obj["B2"])), tuple(obj["d"]), obj.get("name", ""))


def _check_vertex(seed, k):
    if not 1 <= k <= seed.n:
        raise SeedError(f"vertex {k} out of range 1..{seed.n}")
    if k in seed.frozen:
        raise SeedError(f"vertex {k} is frozen (touches a half-integer entry)")


def mutate_seed(seed, k):
    """Matrix mutation at a mutable vertex k."""
    _check_vertex(seed, k)
    n, B2 = seed.n, seed.B2
    kk = k - 1
    new = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == kk or j == kk:
                row.append(-B2[i][j])
            else:
                a, c = B2[i][kk], B2[kk][j]
                extra = abs(a) * c + a * abs(c)
                if extra % 4:
                    raise SeedError("mutation left (1/2)Z; this should not happen at a mutable vertex")
                row.append(B2[i][j] + extra // 4)
        new.append(tuple(row))
    return Seed(tuple(new), seed.d)


def mutate_along(seed, sequence):
    """Mutate at each vertex of ``sequence`` in turn (first entry first)."""
    for k in sequence:
        seed = mutate_seed(seed, k)
    return seed


def parse_permutation(text_or_map, n):
    """Normalise a vertex permutation to a tuple ``sigma`` with sigma[i-1] = image of i.

    Accepts a dict, an iterable of (i, j) pairs, or a string such as "4:7,7:4".
    Unlisted vertices are fixed.
    """
    if text_or_map is None:
        return tuple(range(1, n + 1))
    if isinstance(text_or_map, str):
        pairs = []
        for chunk in text_or_map.split(","):
            chunk = chunk.strip()
            if chunk:
                i, j = chunk.split(":")
                pairs.append((int(i), int(j)))
    elif isinstance(text_or_map, dict):
        pairs = list(text_or_map.items())
    elif isinstance(text_or_map, tuple) and len(text_or_map) == n and all(isinstance(x, int) for x in text_or_map):
        pairs = list(enumerate(text_or_map, start=1))
    else:
        pairs = list(text_or_map)
    image = list(range(1, n + 1))
    for i, j in pairs:
        image[i - 1] = j
    if sorted(image) != list(range(1, n + 1)):
        raise SeedError(f"not a permutation of 1..{n}: {pairs}")
    return tuple(image)


def transposition(i, j, n):
    return parse_permutation({i: j, j: i}, n)


def apply_vertex_permutation(seed, perm):
    """Relabel vertex i as sigma(i): b'_{sigma(i) sigma(j)} = b_ij, d'_{sigma(i)} = d_i."""
    sigma = parse_permutation(perm, seed.n)
    n = seed.n
    B2 = [[0] * n for _ in range(n)]
    d = [0] * n
    for i in range(n):
        d[sigma[i] - 1] = seed.d[i]
        for j in range(n):
            B2[sigma[i] - 1][sigma[j] - 1] = seed.B2[i][j]
    return Seed(tuple(map(tuple, B2)), tuple(d))


@dataclass(frozen=True)
class WeightedQuiver:
    """Weighted quiver: sigma stored doubled, vertex weights d."""

    sigma2: tuple
    d: tuple

    @property
    def sigma(self):
        return _frac_matrix([[Fraction(x, 2) for x in row] for row in self.sigma2])

    @classmethod
    def from_seed(cls, seed):
        n, d = seed.n, seed.d
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                num = seed.B2[i][j] * gcd(d[i], d[j])
                if num % d[i]:
                    raise SeedError("sigma not in (1/2)Z")
                row.append(num // d[i])
            rows.append(tuple(row))
        return cls(tuple(rows), d)

    def to_seed(self, name=""):
        n, d = len(self.d), self.d
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                num = self.sigma2[i][j] * d[i]
                g = gcd(d[i], d[j])
                if num % g:
                    raise SeedError("b not in (1/2)Z")
                row.append(num // g)
            rows.append(tuple(row))
        return Seed(tuple(rows), d, name)

    @classmethod
    def from_arrows(cls, d, solid=(), dashed=()):
        n = len(d)
        s2 = [[0] * n for _ in range(n)]
        for arrows, weight in ((solid, 2), (dashed, 1)):
            for i, j in arrows:
                s2[i - 1][j - 1] += weight
                s2[j - 1][i - 1] -= weight
        return cls(tuple(map(tuple, s2)), tuple(d))

    def arrows(self):
        """List of (i, j, multiplicity) with positive multiplicity, halves allowed."""
        out = []
        n = len(self.d)
        for i in range(n):
            for j in range(n):
                if self.sigma2[i][j] > 0:
                    out.append((i + 1, j + 1, Fraction(self.sigma2[i][j], 2)))
        return out


def mutate_weighted(wq, k):
    """Weighted-quiver mutation with the gcd correction factor on new arrows."""
    d, n = wq.d, len(wq.d)
    kk = k - 1
    s = wq.sigma
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == kk or j == kk:
                val = -s[i][j]
            else:
                alpha = Fraction(d[kk] * gcd(d[i], d[j]), gcd(d[kk], d[i]) * gcd(d[kk], d[j]))
                a, c = s[i][kk], s[kk][j]
                val = s[i][j] + (abs(a) * c + a * abs(c)) / 2 * alpha
            v2 = 2 * val
            if v2.denominator != 1:
                raise SeedError("weighted mutation left (1/2)Z")
            row.append(int(v2))
        rows.append(tuple(row))
    return WeightedQuiver(tuple(rows), d)


def _load_builtin():
    text = resources.files("qtetra").joinpath("data/quivers.json").read_text()
    raw = json.loads(text)
    return {k: v for k, v in raw.items() if not k.startswith("_")}


_BUILTIN = None


def builtin_names():
    global _BUILTIN
    if _BUILTIN is None:
        _BUILTIN = _load_builtin()
    return sorted(_BUILTIN)


def builtin_quiver(name):
    """Seed for one of the transcribed wiring-diagram quivers, e.g. "J1212"."""
    builtin_names()
    key = name.replace("_", "")
    if key not in _BUILTIN:
        raise SeedError(f"unknown quiver {name!r}; known: {', '.join(builtin_names())}")
    spec = _BUILTIN[key]
    wq = WeightedQuiver.from_arrows(spec["d"], spec.get("solid", ()), spec.get("dashed", ()))
    return wq.to_seed(key)


def builtin_as_reached(name):
    """Built-in quiver with vertices relabelled as they arrive under mutation.

    Only differs from ``builtin_quiver`` where the drawn labels and the
    mutation labels disagree.
    """
    seed = builtin_quiver(name)
    labels = _BUILTIN[seed.name].get("mutation_labels")
    if not labels:
        return seed
    return apply_vertex_permutation(seed, {int(k): v for k, v in labels.items()}).renamed(seed.name)
