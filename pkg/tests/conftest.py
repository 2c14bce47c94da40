"""Shared fixtures and independent oracles for the test suite.

Oracles here deliberately avoid the code paths they check: the eta-series
accelerator for zeta values, mean-corrected partial sums for L(1, chi),
and sieve-based tables for phi / greatest prime factors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import pytest

from lextremes import build_group


@pytest.fixture(scope="session")
def group_of():
    """Session-cached character groups (building q=10007 twice is wasteful)."""
    cache = {}

    def get(q: int):
        if q not in cache:
            cache[q] = build_group(q)
        return cache[q]

    return get


@dataclass(frozen=True)
class TableCharacter:
    """Duck-typed character given by an explicit residue table.

    Lets the L-machinery run on non-prime moduli fixtures (the classical
    mod-3 and mod-4 characters with known closed-form L-values).
    """

    modulus: int
    table: tuple[complex, ...]  # value at residue a, index a in 0..modulus-1
    index: int | None = None

    @property
    def is_principal(self) -> bool:
        return all(v == 1 for a, v in enumerate(self.table) if math.gcd(a, self.modulus) == 1)

    def value(self, n: int) -> complex:
        return self.table[n % self.modulus]


@pytest.fixture(scope="session")
def chi_mod4():
    """The nontrivial character mod 4: chi(1) = 1, chi(3) = -1."""
    return TableCharacter(4, (0j, 1 + 0j, 0j, -1 + 0j))


@pytest.fixture(scope="session")
def chi_mod3():
    """The nontrivial character mod 3: chi(1) = 1, chi(2) = -1."""
    return TableCharacter(3, (0j, 1 + 0j, -1 + 0j))


def zeta_via_eta(s: float, terms: int = 60) -> float:
    """zeta(s) = eta(s) / (1 - 2**(1-s)) via accelerated alternating series.

    Chebyshev-polynomial acceleration of eta(s) = sum (-1)**k (k+1)**(-s);
    the error decays like (3 + sqrt(8))**(-terms), far below 1e-15 here.
    """
    n = terms
    d = (3 + math.sqrt(8.0)) ** n
    d = (d + 1 / d) / 2
    b, c, acc = -1.0, -d, 0.0
    for k in range(n):
        c = b - c
        acc += c * (k + 1) ** (-s)
        b *= (k + n) * (k - n) / ((k + 0.5) * (k + 1))
    return (acc / d) / (1 - 2 ** (1 - s))


@pytest.fixture(scope="session")
def harmonic_by_residue():
    """H[a] = sum_{n <= M, n = a (mod q)} 1/n for the series oracle, cached."""
    cache = {}

    def get(q: int, m_terms: int = 10**6):
        m_aligned = q * (m_terms // q)
        key = (q, m_aligned)
        if key not in cache:
            n = np.arange(1, m_aligned + 1)
            h = np.zeros(q)
            np.add.at(h, n % q, 1.0 / n)
            cache[key] = (h, m_aligned)
        return cache[key]

    return get


def series_l1_oracle(group, j: int, h_by_residue: np.ndarray, m_aligned: int) -> complex:
    """L(1, chi_j) by partial sums plus the first-order periodic-mean tail.

    With M a multiple of q the character partial sums vanish at M, and the
    tail integral equals mu/M + O(q**2 / M**2) where mu = -(1/q) sum a chi(a).
    Independent of the digamma machinery.
    """
    chi = group.character_values(j)
    partial = complex(np.sum(chi * h_by_residue[1:]))
    mu = -complex(np.sum(np.arange(1, group.q) * chi)) / group.q
    return partial + mu / m_aligned


def gpf_table(limit: int) -> np.ndarray:
    """Greatest-prime-factor sieve; gpf[1] = 0."""
    gpf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if gpf[p] == 0:
            gpf[p::p] = p
    return gpf


def phi_table(limit: int) -> np.ndarray:
    """Euler phi for all n <= limit by the classic sieve."""
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if phi[p] == p:  # p prime
            phi[p::p] -= phi[p::p] // p
    return phi
