"""Tropical y-seeds: c-vectors under mutation and their sign sequences."""

from __future__ import annotations

from dataclasses import dataclass

from .quiver import Seed, SeedError, apply_vertex_permutation, mutate_seed, parse_permutation


class SignCoherenceError(SeedError):
    pass


@dataclass(frozen=True)
class TropSeed:
    """A seed together with its c-vectors (row i is the exponent of y_i)."""

    seed: Seed
    C: tuple

    @classmethod
    def initial(cls, seed):
        n = seed.n
        return cls(seed, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def c(self, i):
        return self.C[i - 1]

    def sign(self, k):
        row = self.C[k - 1]
        if any(x > 0 for x in row) and not any(x < 0 for x in row):
            return 1
        if any(x < 0 for x in row) and not any(x > 0 for x in row):
            return -1
        raise SignCoherenceError(f"c-vector of vertex {k} is not sign-coherent: {row}")

    def monomial_str(self, i):
        """Render y-variable i as a product like 'y2*y6^-1'."""
        parts = []
        for j, e in enumerate(self.C[i - 1], start=1):
            if e == 1:
                parts.append(f"y{j}")
            elif e:
                parts.append(f"y{j}^{e}")
        return "*".join(parts) or "1"


def mutate_tropical(t, k):
    """Tropical mutation at k; c'_k = -c_k, c'_i = c_i + c_k [eps_k b_ik]_+."""
    eps = t.sign(k)
    seed = t.seed
    ck = t.C[k - 1]
    rows = []
    for i in range(1, seed.n + 1):
        if i == k:
            rows.append(tuple(-x for x in ck))
            continue
        m = max(eps * seed.b(i, k), 0)
        if m.denominator != 1:
            raise SeedError("half-integer exponent at a mutable vertex")
        m = int(m)
        rows.append(tuple(a + m * c for a, c in zip(t.C[i - 1], ck)) if m else t.C[i - 1])
    return TropSeed(mutate_seed(seed, k), tuple(rows))


def run_sequence(start, sequence):
    """Mutate along ``sequence`` (first entry first); returns (trajectory, signs).

    The trajectory lists the TropSeed before each step and the final one.
    """
    t = start if isinstance(start, TropSeed) else TropSeed.initial(start)
    traj, signs = [t], []
    for k in sequence:
        signs.append(t.sign(k))
        t = mutate_tropical(t, k)
        traj.append(t)
    return traj, signs


def sign_sequence(start, sequence):
    return run_sequence(start, sequence)[1]


def permute_tropical(t, perm):
    """Relabel vertices: y'_{sigma(i)} = y_i, b'_{sigma(i) sigma(j)} = b_ij."""
    sigma = parse_permutation(perm, t.seed.n)
    rows = [None] * t.seed.n
    for i, row in enumerate(t.C):
        rows[sigma[i] - 1] = row
    return TropSeed(apply_vertex_permutation(t.seed, sigma), tuple(rows))


def final_tropical(start, sequence, perm=None):
    traj, _ = run_sequence(start, sequence)
    out = traj[-1]
    return permute_tropical(out, perm) if perm is not None else out


def verify_tropical_periodicity(start, seq_a, perm_a, seq_b, perm_b):
    """Both mutation sequences, followed by their permutations, land on the same tropical seed."""
    a = final_tropical(start, seq_a, perm_a)
    b = final_tropical(start, seq_b, perm_b)
    return a.seed == b.seed and a.C == b.C


def parse_sequence(text):
    """Parse "8,4,7,8" into a list of ints (first entry is applied first)."""
    return [int(x) for x in text.replace(" ", "").split(",") if x]
