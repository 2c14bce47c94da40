"""Resonance sums over the character group, computed two independent ways.

For resonator coefficients (w_n) truncated at n <= N and series coefficients
b_k = k**(-sigma) supported on y-smooth k <= K, the two sums are

    S2 = sum_chi |R_N(chi)|**2,          R_N(chi) = sum_{n<=N} w_n chi(n),
    S1 = sum_chi L_K(sigma, chi) |R_N(chi)|**2,
                                         L_K = sum_{k<=K} b_k chi(k),

evaluated either through one group DFT per factor (character form) or by
orthogonality as lattice sums over residue classes (congruence form):

    S2 = phi(q) * sum_{m = n (mod q)} w_m w_n,
    S1 = sum_k b_k phi(q) * sum_{k m = n (mod q)} w_m w_n.

All terms are nonnegative, so truncation tails are exact and the quotient
|S1|/S2 certifies a computable lower bound for extreme values.  Certificates
report tau_cert, the slack actually consumed against the ideal full-series
target; they pass when that slack stays within the configured budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from . import numth
from .chargroup import CharacterGroup, build_group, dft_over_group
from .lfunc import as_sigma
from .resonator import (
    ResonatorCoeffs,
    WeightScheme,
    enumerate_coeffs,
    half_scheme,
    linear_scheme,
    log_principal_square,
    lower_bound_product,
    mertens_product,
)

EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class CertificateResult:
    """Outcome of a finite-truncation quotient certificate."""

    passed: bool
    margin: float
    tau_cert: float
    tau_budget: float

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "margin": self.margin,
            "tau_cert": self.tau_cert,
            "tau_budget": self.tau_budget,
        }


@dataclass(frozen=True)
class ResonanceReport:
    """Structured result of a resonance-quotient computation.

    `x` is the prime cutoff of the lower-bound target (the linear-scheme
    cutoff, or the prime-sum cutoff for the half-weight certificate), `y`
    the smoothness cutoff of the series coefficients, `n` the resonator
    truncation and `k` the series truncation.  `principal_terms` holds
    (|R_N(chi_0)|**2, |L_K(chi_0)| * |R_N(chi_0)|**2).
    """

    q: int
    sigma: float
    scheme: WeightScheme
    x: float
    y: float
    n: int
    k: int
    s1: complex
    s2: float
    ratio: float
    lower_bound: float
    tail_fraction: float
    principal_terms: tuple[float, float]
    certificate: CertificateResult
    extras: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "q": self.q,
            "sigma": self.sigma,
            "scheme": {"kind": self.scheme.kind, "cutoff": self.scheme.cutoff},
            "x": self.x,
            "y": self.y,
            "n": self.n,
            "k": self.k,
            "s1": [self.s1.real, self.s1.imag],
            "s2": self.s2,
            "ratio": self.ratio,
            "lower_bound": self.lower_bound,
            "tail_fraction": self.tail_fraction,
            "principal_terms": list(self.principal_terms),
            "certificate": self.certificate.to_json_dict(),
            "extras": dict(self.extras),
        }

    def to_csv_row(self) -> tuple[list[str], list]:
        header = [
            "q", "sigma", "scheme_kind", "cutoff", "x", "y", "n", "k",
            "s1_real", "s1_imag", "s2", "ratio", "lower_bound",
            "tail_fraction", "r0_sq", "l_r0_sq", "certificate_passed",
            "certificate_margin", "tau_cert", "tau_budget",
        ]
        row = [
            self.q, self.sigma, self.scheme.kind, self.scheme.cutoff,
            self.x, self.y, self.n, self.k,
            self.s1.real, self.s1.imag, self.s2, self.ratio, self.lower_bound,
            self.tail_fraction, self.principal_terms[0], self.principal_terms[1],
            self.certificate.passed, self.certificate.margin,
            self.certificate.tau_cert, self.certificate.tau_budget,
        ]
        return header, row


# ----------------------------------------------------------------------
# the two evaluation routes


def _residue_sums(coeffs: ResonatorCoeffs, q: int) -> np.ndarray:
    """v[r] = sum of w_n over truncated entries with n = r (mod q).

    Residue class 0 is dropped: every character vanishes on multiples of q,
    so those entries contribute to neither route.  (They only exist when the
    scheme cutoff reaches q.)
    """
    v = np.zeros(q)
    np.add.at(v, coeffs.ns % q, coeffs.weights)
    v[0] = 0.0
    return v


def _series_support(sigma: float, y: float, k_limit: int) -> tuple[np.ndarray, np.ndarray]:
    """y-smooth k <= k_limit with b_k = k**(-sigma)."""
    ks = np.array(numth.smooth_numbers(int(y), k_limit), dtype=np.int64)
    return ks, ks.astype(float) ** (-sigma)


def square_sum_characters(group: CharacterGroup, scheme: WeightScheme, n_limit: int) -> float:
    """S2 via one group DFT of the residue-aggregated coefficients."""
    v = _residue_sums(enumerate_coeffs(scheme, n_limit), group.q)
    transformed = dft_over_group(group, v[1:])
    return float(np.sum(np.abs(transformed) ** 2))


def square_sum_congruence(q: int, scheme: WeightScheme, n_limit: int) -> float:
    """S2 via orthogonality: phi(q) * sum over pairs m = n (mod q)."""
    if not numth.is_prime(q):
        raise ValueError(f"modulus must be prime, got {q}")
    v = _residue_sums(enumerate_coeffs(scheme, n_limit), q)
    return (q - 1) * float(np.sum(v * v))


def weighted_sum_characters(
    group: CharacterGroup, scheme: WeightScheme, sigma, y: float, n_limit: int, k_limit: int
) -> complex:
    """S1 via two group DFTs (series coefficients and resonator)."""
    s = as_sigma(sigma)
    if y < scheme.cutoff:
        raise ValueError(f"series cutoff y = {y} must be >= scheme cutoff {scheme.cutoff}")
    q = group.q
    v = _residue_sums(enumerate_coeffs(scheme, n_limit), q)
    ks, bs = _series_support(s, y, k_limit)
    w = np.zeros(q)
    np.add.at(w, ks % q, bs)
    w[0] = 0.0  # chi(k) = 0 whenever q | k
    l_vals = dft_over_group(group, w[1:])
    r_vals = dft_over_group(group, v[1:])
    return complex(np.sum(l_vals * np.abs(r_vals) ** 2))


def weighted_sum_congruence(
    q: int, scheme: WeightScheme, sigma, y: float, n_limit: int, k_limit: int
) -> float:
    """S1 via orthogonality: sum_k b_k phi(q) sum_{km = n (mod q)} w_m w_n.

    Pairs are bucketed by residue class, so the work is O(#entries * #k)
    with vectorized inner sweeps; terms k with q | k vanish automatically
    because no resonator entry sits in residue class 0.
    """
    if not numth.is_prime(q):
        raise ValueError(f"modulus must be prime, got {q}")
    s = as_sigma(sigma)
    if y < scheme.cutoff:
        raise ValueError(f"series cutoff y = {y} must be >= scheme cutoff {scheme.cutoff}")
    coeffs = enumerate_coeffs(scheme, n_limit)
    v = _residue_sums(coeffs, q)
    ks, bs = _series_support(s, y, k_limit)
    total = 0.0
    for n, w in zip(coeffs.ns.tolist(), coeffs.weights.tolist()):
        idx = (ks * (n % q)) % q
        total += w * float(np.dot(bs, v[idx]))
    return (q - 1) * total


def _provable_bound(q: int, coeffs: ResonatorCoeffs, terms: list[tuple[int, float]]) -> float:
    """Exact finite-chain lower bound sum c_k * Q(N, N//k) / Q(N, N).

    Q(N, M) = sum_{m <= N, n <= M, m = n (mod q)} w_m w_n; restricting the
    series index to multiples k*r and using complete multiplicativity gives
    S1/S2 >= sum_k c_k Q(N, N//k)/Q(N, N) with only positivity used, so the
    computed ratio must always exceed this number (up to rounding).
    """
    v = _residue_sums(coeffs, q)
    col = coeffs.weights * v[coeffs.ns % q]
    prefix = np.cumsum(col)
    q_full = float(prefix[-1])
    n_limit = coeffs.limit

    def q_at(m: int) -> float:
        i = int(np.searchsorted(coeffs.ns, m, side="right"))
        return float(prefix[i - 1]) if i > 0 else 0.0

    bound = 0.0
    for k, c in terms:
        if k > n_limit:
            continue
        bound += c * q_at(n_limit // k)
    return bound / q_full


def _certify(ratio: float, target: float, tau_budget: float) -> CertificateResult:
    tau_cert = max(0.0, 1.0 - ratio / target) if target > 0 else 0.0
    margin = ratio - (1.0 - tau_budget) * target
    return CertificateResult(tau_cert <= tau_budget, margin, tau_cert, tau_budget)


# ----------------------------------------------------------------------
# certificates


def ratio_certificate(
    q: int,
    b: float,
    n_limit: int = 10**4,
    k_limit: int = 10**4,
    y: float | None = None,
    tau_budget: float = 0.05,
) -> ResonanceReport:
    """Certify the finite-truncation quotient bound for the linear scheme.

    The prime cutoff is x = log(q) * loglog(q) / b with b > log 4 required;
    the ideal target is the full-series value prod_{p<=x} (1 - w_p/p)**(-1).
    tau_cert reports how much of that target the truncated quotient gives
    up; the certificate passes when tau_cert stays within tau_budget.

    extras carry the exact positive-tail diagnostics (resonator tail
    fraction is the `tail_fraction` field, the series-coefficient tail and
    the provable finite-chain bound are informational) plus the Mertens-form
    reference value e**gamma * log x * (1 - 1/log x).
    """
    if q == 2 or not numth.is_prime(q):
        raise ValueError(f"modulus must be an odd prime, got {q}")
    if b <= math.log(4):
        raise ValueError(f"b must exceed log 4 = {math.log(4):.6f}, got {b}")
    x = math.log(q) * math.log(math.log(q)) / b
    if x >= q:
        raise ValueError(f"cutoff x = {x:.3f} must be < q = {q}")
    if y is None:
        y = max(x, 1e4)
    if y < x:
        raise ValueError(f"series cutoff y = {y} must be >= x = {x:.3f}")
    scheme = linear_scheme(x)
    coeffs = enumerate_coeffs(scheme, n_limit)

    s2 = square_sum_congruence(q, scheme, n_limit)
    s1 = weighted_sum_congruence(q, scheme, 1.0, y, n_limit, k_limit)
    ratio = abs(s1) / s2
    target = lower_bound_product(scheme).value

    # exact positive tails and the provable finite-chain bound
    target_coeffs = coeffs if k_limit == n_limit else enumerate_coeffs(scheme, k_limit)
    a_terms = [(int(n), w / n) for n, w in zip(target_coeffs.ns.tolist(), target_coeffs.weights.tolist())]
    a_partial = math.fsum(c for _, c in a_terms)
    ks, bs = _series_support(1.0, y, k_limit)
    b_partial = math.fsum(bs[ks % q != 0].tolist())
    b_total = mertens_product(y) if y >= 2 else 1.0
    provable = _provable_bound(q, coeffs, a_terms)

    r0 = coeffs.partial_sum
    l_principal = b_partial
    certificate = _certify(ratio, target, tau_budget)
    extras = {
        "a_tail_fraction": max(0.0, 1.0 - a_partial / target),
        "b_tail_fraction": max(0.0, 1.0 - b_partial / b_total),
        "provable_bound": provable,
        "mertens_reference": (
            math.exp(EULER_GAMMA) * math.log(x) * (1 - 1 / math.log(x)) if x >= 2 else None
        ),
        "b": b,
    }
    return ResonanceReport(
        q=q,
        sigma=1.0,
        scheme=scheme,
        x=x,
        y=float(y),
        n=n_limit,
        k=k_limit,
        s1=complex(s1),
        s2=s2,
        ratio=ratio,
        lower_bound=target,
        tail_fraction=coeffs.tail_fraction,
        principal_terms=(r0 * r0, abs(l_principal) * r0 * r0),
        certificate=certificate,
        extras=extras,
    )


def exclude_principal(
    report: ResonanceReport, group: CharacterGroup, scheme: WeightScheme, sigma, y: float
) -> ResonanceReport:
    """Remove the principal-character contribution from S1 and S2.

    S1* = S1 - L_K(sigma, chi_0) |R_N(chi_0)|**2 and S2* = S2 - |R_N(chi_0)|**2,
    with the certificate re-evaluated against the same target and budget.
    Applies to smooth-series reports (b_k = k**(-sigma) on y-smooth k <= K,
    as produced by ratio_certificate); the half-weight certificate reports
    its own principal terms instead.  extras record log |R_N(chi_0)|**2 next
    to the closed-form untruncated value, the separation the asymptotic
    argument relies on.
    """
    s = as_sigma(sigma)
    coeffs = enumerate_coeffs(scheme, report.n)
    r0 = coeffs.partial_sum
    r0_sq = r0 * r0
    ks, bs = _series_support(s, y, report.k)
    l_principal = math.fsum(bs[ks % group.q != 0].tolist())
    s1_star = report.s1 - l_principal * r0_sq
    s2_star = report.s2 - r0_sq
    if s2_star <= 0:
        raise ValueError(
            f"principal term |R(chi_0)|^2 = {r0_sq:.6g} exhausts S2 = {report.s2:.6g}; "
            "q is too small for this cutoff"
        )
    ratio_star = abs(s1_star) / s2_star
    extras = dict(report.extras)
    extras["log_r0_sq_truncated"] = math.log(r0_sq)
    if scheme.kind == "linear":
        extras["log_r0_sq_closed_form"] = log_principal_square(scheme)
    extras["ratio_before_exclusion"] = report.ratio
    return replace(
        report,
        s1=complex(s1_star),
        s2=s2_star,
        ratio=ratio_star,
        principal_terms=(r0_sq, abs(l_principal) * r0_sq),
        certificate=_certify(ratio_star, report.lower_bound, report.certificate.tau_budget),
        extras=extras,
    )


def half_weight_certificate(
    q: int,
    sigma: float,
    a_sigma: float | None = None,
    y_min: float = 20.0,
    x_cap: float = 1e5,
    n_limit: int = 10**4,
    k_limit: int = 10**4,
    tau_budget: float = 0.05,
) -> ResonanceReport:
    """Certify the half-weight quotient bound for sigma in (1/2, 1).

    The series side is the prime sum sum_{p<=x} chi(p) p**(-sigma) with
    x = min((log q)**(3/(sigma-1/2)), x_cap); the resonator uses half
    weights on p <= y, y = max((a_sigma/2) log q loglog q, y_min), and the
    target is sum_{p<=y} p**(-sigma)/2.  S1 and S2 are computed via both
    routes; the congruence values are reported and the relative agreement
    of the character route is recorded in extras.
    """
    if not 0.5 < sigma < 1.0:
        raise ValueError(f"sigma must lie strictly inside (1/2, 1), got {sigma}")
    if not numth.is_prime(q) or q == 2:
        raise ValueError(f"modulus must be an odd prime, got {q}")
    if a_sigma is None:
        a_sigma = (2 * sigma - 1) / (2 - sigma)
    log_q = math.log(q)
    y = max(a_sigma / 2 * log_q * math.log(log_q), y_min)
    if y >= q:
        raise ValueError(f"half-weight cutoff y = {y:.3f} must be < q = {q}")
    x = min(log_q ** (3 / (sigma - 0.5)), x_cap)
    scheme = half_scheme(y)
    coeffs = enumerate_coeffs(scheme, n_limit)
    v = _residue_sums(coeffs, q)

    primes = numth.sieve_primes(int(x)).primes[:k_limit]
    bs = primes.astype(float) ** (-sigma)

    s1 = 0.0
    for n, w in zip(coeffs.ns.tolist(), coeffs.weights.tolist()):
        idx = (primes * (n % q)) % q
        s1 += w * float(np.dot(bs, v[idx]))
    s1 *= q - 1
    s2 = (q - 1) * float(np.sum(v * v))

    group = build_group(q)
    u = np.zeros(q)
    np.add.at(u, primes % q, bs)
    u[0] = 0.0
    s_vals = dft_over_group(group, u[1:])
    r_vals = dft_over_group(group, v[1:])
    s1_char = complex(np.sum(s_vals * np.abs(r_vals) ** 2))
    s2_char = float(np.sum(np.abs(r_vals) ** 2))

    y_primes = [p for p in numth.sieve_primes(int(y)).primes.tolist() if p != q]
    target = math.fsum(0.5 * p ** (-sigma) for p in y_primes)
    provable = _provable_bound(q, coeffs, [(p, 0.5 * p ** (-sigma)) for p in y_primes])

    r0 = coeffs.partial_sum
    l_principal = math.fsum(bs[primes % q != 0].tolist())
    certificate = _certify(s1 / s2, target, tau_budget)
    extras = {
        "a_sigma": a_sigma,
        "provable_bound": provable,
        "s1_route_rel_diff": abs(s1 - s1_char.real) / abs(s1) if s1 else 0.0,
        "s2_route_rel_diff": abs(s2 - s2_char) / s2,
    }
    return ResonanceReport(
        q=q,
        sigma=sigma,
        scheme=scheme,
        x=float(x),
        y=float(y),
        n=n_limit,
        k=k_limit,
        s1=complex(s1),
        s2=s2,
        ratio=s1 / s2,
        lower_bound=target,
        tail_fraction=coeffs.tail_fraction,
        principal_terms=(r0 * r0, abs(l_principal) * r0 * r0),
        certificate=certificate,
        extras=extras,
    )


class SetBudget(NamedTuple):
    count_bound: float
    resonator_bound: float


def exceptional_set_budget(q: int, sigma: float, a_sigma: float | None = None, y: float = 20.0) -> SetBudget:
    """Size budget q**(1-a) for the excluded character set and the uniform
    per-character bound |R(chi)|**2 <= 2**(2 pi(y)) for the half scheme."""
    if a_sigma is None:
        a_sigma = (2 * sigma - 1) / (2 - sigma)
    count_bound = q ** (1 - a_sigma)
    n_primes = len(numth.sieve_primes(int(y)))
    try:
        resonator_bound = float(2 ** (2 * n_primes))
    except OverflowError:
        resonator_bound = math.inf
    return SetBudget(count_bound, resonator_bound)
