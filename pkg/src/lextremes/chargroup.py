"""The group of Dirichlet characters modulo an odd prime q.

Characters are indexed by an exponent j against a fixed primitive root g:

    chi_j(g**k) = exp(2*pi*i * j*k / (q-1)),   chi_j(n) = 0 when q | n.

A discrete-log table gives O(1) evaluation, and a sum of the whole group
against any residue-indexed vector is one length-(q-1) DFT (numpy's FFT
handles arbitrary lengths, falling back to the chirp/Bluestein algorithm
for large prime factors).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import numth


class CharacterGroup:
    """Full character group mod an odd prime q, with O(1) evaluation tables.

    Attributes:
        q: the prime modulus
        g: the smallest primitive root mod q
        phi: group order q - 1
        dlog: int array of length q; dlog[a] = k with g**k = a (mod q),
              dlog[0] = -1 (unused sentinel)
        power_residues: int array of length q-1; entry k is g**k mod q
    """

    def __init__(self, q: int, g: int):
        self.q = q
        self.g = g
        self.phi = q - 1
        dlog = np.full(q, -1, dtype=np.int64)
        power_residues = np.empty(q - 1, dtype=np.int64)
        a = 1
        for k in range(q - 1):
            power_residues[k] = a
            dlog[a] = k
            a = (a * g) % q
        self.dlog = dlog
        self.power_residues = power_residues
        # one shared root-of-unity table fixes the rounding profile everywhere
        self._roots = np.exp(2j * math.pi * np.arange(q - 1) / (q - 1))
        self.dlog.setflags(write=False)
        self.power_residues.setflags(write=False)
        self._roots.setflags(write=False)

    def character(self, index: int) -> "Character":
        if not 0 <= index <= self.q - 2:
            raise ValueError(f"character index must lie in [0, {self.q - 2}], got {index}")
        return Character(self, index)

    def characters(self, include_principal: bool = True):
        """Iterate characters in index order."""
        start = 0 if include_principal else 1
        for j in range(start, self.q - 1):
            yield Character(self, j)

    def character_values(self, index: int) -> np.ndarray:
        """chi_index(a) for a = 1..q-1 as one complex array."""
        return self._roots[(index * self.dlog[1:]) % (self.q - 1)]

    def values_at(self, n: int) -> np.ndarray:
        """chi_j(n) for every character index j at once (zeros when q | n)."""
        r = n % self.q
        if r == 0:
            return np.zeros(self.q - 1, dtype=complex)
        return self._roots[(np.arange(self.q - 1) * self.dlog[r]) % (self.q - 1)]

    def __repr__(self) -> str:
        return f"CharacterGroup(q={self.q}, g={self.g})"


@dataclass(frozen=True)
class Character:
    """A single Dirichlet character mod q, indexed by its exponent."""

    group: CharacterGroup
    index: int

    @property
    def modulus(self) -> int:
        return self.group.q

    @property
    def is_principal(self) -> bool:
        return self.index == 0

    def value(self, n: int) -> complex:
        if n < 0:
            raise ValueError(f"character argument must be >= 0, got {n}")
        q = self.group.q
        r = n % q
        if r == 0:
            return 0j
        t = (self.index * self.group.dlog[r]) % (q - 1)
        return complex(self.group._roots[t])

    def conjugate(self) -> "Character":
        return Character(self.group, (-self.index) % (self.group.q - 1))

    def __repr__(self) -> str:
        return f"Character(q={self.group.q}, j={self.index})"


def build_group(q: int) -> CharacterGroup:
    """Construct the character group mod q, verifying the dlog bijection."""
    if q >= numth.MODULUS_LIMIT:
        raise ValueError(f"modulus {q} exceeds the 2**31 limit")
    if q == 2 or not numth.is_prime(q):
        raise ValueError(f"modulus must be an odd prime, got {q}")
    group = CharacterGroup(q, numth.primitive_root(q))
    if np.any(group.dlog[1:] < 0):
        raise AssertionError(f"discrete-log table for q={q} is not a bijection")
    return group


def orthogonality_sum(group: CharacterGroup, m: int, n: int) -> float:
    """Sum of chi(m) * conj(chi(n)) over all chi, by direct summation.

    Equals phi(q) when m = n (mod q) and 0 otherwise; kept as the slow,
    obviously-correct oracle for the DFT-based paths.
    """
    q = group.q
    if math.gcd(m * n, q) != 1:
        raise ValueError(f"orthogonality_sum requires gcd(mn, q) = 1, got m={m}, n={n}, q={q}")
    total = 0j
    for j in range(q - 1):
        total += group.character(j).value(m) * group.character(j).value(n).conjugate()
    return total.real


def dft_over_group(group: CharacterGroup, f: np.ndarray) -> np.ndarray:
    """out[j] = sum_{a=1}^{q-1} f(a) * chi_j(a) for every character index j.

    `f` holds the values at residues 1..q-1 (entry i is the value at a=i+1).
    Reindexing f along powers of g turns the character sum into a plain
    length-(q-1) DFT with positive sign convention, i.e. ifft * (q-1).
    """
    f = np.asarray(f)
    if f.shape != (group.q - 1,):
        raise ValueError(f"expected {group.q - 1} residue values, got shape {f.shape}")
    reordered = f[group.power_residues - 1]
    return np.fft.ifft(reordered) * (group.q - 1)
