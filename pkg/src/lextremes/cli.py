"""Command-line entry point: experiment orchestration and result files.

Commands
--------
certify      linear-scheme quotient certificate (+ principal exclusion) per q
scan-t1      extreme-value scan of |L(1, chi)|
census       threshold census of |L(1, chi)| over a delta grid
scan-t3      extreme-value scan of log |L(sigma, chi)|, sigma in (1/2, 1)
oracle-check dual-oracle and known-value self checks, no files written

Flags override values from an optional flat `key = value` config file
(`#` starts a comment; unknown keys are rejected).  Every run writes one
CSV and/or JSON file per modulus, named `<command>_q<q>.<ext>`, into the
output directory; files are written to a temporary name and atomically
renamed, so failed runs leave no partial files.  Reruns with identical
configuration produce byte-identical CSV.

Exit codes: 0 success, 1 certificate failure, 2 configuration error,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import contextlib
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import numth
from .chargroup import build_group, dft_over_group, orthogonality_sum
from .extremes import scan_sigma1, scan_sigma_strip, threshold_census
from .lfunc import l_value, l_value_batch
from .resonance import (
    exclude_principal,
    ratio_certificate,
    square_sum_characters,
    square_sum_congruence,
    weighted_sum_characters,
    weighted_sum_congruence,
)
from .resonator import linear_scheme

COMMANDS = ("certify", "scan-t1", "census", "scan-t3", "oracle-check")

DEFAULTS = {
    "q": (),
    "sigma": None,
    "delta": (0.5, 1.0, 2.0, 3.0),
    "b": 1.4,
    "epsilon": 0.0,
    "a_sigma": None,
    "x_cap": 1e5,
    "y_min": 20.0,
    "n": 10**4,
    "k": 10**4,
    "y": 1e4,
    "tol": 1.0,
    "tau_budget": 0.05,
    "output_dir": "results",
    "format": "both",
    "jobs": 1,
}


class ConfigError(Exception):
    """Invalid configuration; maps to exit code 2."""


def _parse_int_list(text) -> tuple[int, ...]:
    if isinstance(text, tuple):
        return text
    try:
        return tuple(int(part.strip()) for part in str(text).split(",") if part.strip())
    except ValueError as exc:
        raise ConfigError(f"expected a comma-separated integer list, got {text!r}") from exc


def _parse_float_list(text) -> tuple[float, ...]:
    if isinstance(text, tuple):
        return text
    try:
        return tuple(float(part.strip()) for part in str(text).split(",") if part.strip())
    except ValueError as exc:
        raise ConfigError(f"expected a comma-separated float list, got {text!r}") from exc


_PARSERS = {
    "q": _parse_int_list,
    "delta": _parse_float_list,
    "sigma": float,
    "b": float,
    "epsilon": float,
    "a_sigma": float,
    "x_cap": float,
    "y_min": float,
    "n": int,
    "k": int,
    "y": float,
    "tol": float,
    "tau_budget": float,
    "output_dir": str,
    "format": str,
    "jobs": int,
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    q_list: tuple[int, ...]
    sigma: float | None
    delta_list: tuple[float, ...]
    b: float
    epsilon: float
    a_sigma: float | None
    x_cap: float
    y_min: float
    n: int
    k: int
    y: float
    tol: float
    tau_budget: float
    output_dir: str
    format: str
    jobs: int


def _read_config_file(path: str) -> dict:
    values = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower().replace("-", "_")
        if key not in _PARSERS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lextremes", description="Extreme values of Dirichlet L-functions mod a prime."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--q", dest="q", default=argparse.SUPPRESS, help="comma-separated prime moduli")
        p.add_argument("--config", default=None, help="flat key = value config file")
        p.add_argument("--output-dir", dest="output_dir", default=argparse.SUPPRESS)
        p.add_argument("--format", dest="format", default=argparse.SUPPRESS, choices=("csv", "json", "both"))
        p.add_argument("--jobs", dest="jobs", default=argparse.SUPPRESS, type=int)

    p = sub.add_parser("certify", help="linear-scheme quotient certificate per q")
    add_common(p)
    p.add_argument("--B", dest="b", default=argparse.SUPPRESS, type=float)
    p.add_argument("--N", dest="n", default=argparse.SUPPRESS, type=int)
    p.add_argument("--K", dest="k", default=argparse.SUPPRESS, type=int)
    p.add_argument("--Y", dest="y", default=argparse.SUPPRESS, type=float)
    p.add_argument("--tau-budget", dest="tau_budget", default=argparse.SUPPRESS, type=float)

    p = sub.add_parser("scan-t1", help="extreme-value scan of |L(1, chi)|")
    add_common(p)
    p.add_argument("--epsilon", dest="epsilon", default=argparse.SUPPRESS, type=float)

    p = sub.add_parser("census", help="threshold census of |L(1, chi)|")
    add_common(p)
    p.add_argument("--delta", dest="delta", default=argparse.SUPPRESS, help="comma-separated deltas")

    p = sub.add_parser("scan-t3", help="extreme-value scan of log |L(sigma, chi)|")
    add_common(p)
    p.add_argument("--sigma", dest="sigma", default=argparse.SUPPRESS, type=float)
    p.add_argument("--a-sigma", dest="a_sigma", default=argparse.SUPPRESS, type=float)
    p.add_argument("--x-cap", dest="x_cap", default=argparse.SUPPRESS, type=float)
    p.add_argument("--y-min", dest="y_min", default=argparse.SUPPRESS, type=float)
    p.add_argument("--N", dest="n", default=argparse.SUPPRESS, type=int)
    p.add_argument("--K", dest="k", default=argparse.SUPPRESS, type=int)
    p.add_argument("--tol", dest="tol", default=argparse.SUPPRESS, type=float)
    p.add_argument("--tau-budget", dest="tau_budget", default=argparse.SUPPRESS, type=float)

    p = sub.add_parser("oracle-check", help="dual-oracle and known-value self checks")
    add_common(p)
    return parser


def parse_config(argv) -> RunConfig:
    """Merge defaults, config-file values and explicit flags into a RunConfig."""
    parser = _build_parser()
    try:
        namespace = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code == 0:  # --help / --version paths exit cleanly
            raise
        # argparse exits with 2 on bad flags, which matches our contract,
        # but surface it as ConfigError so callers can handle it uniformly
        raise ConfigError("invalid command line") from exc
    merged = dict(DEFAULTS)
    config_path = getattr(namespace, "config", None)
    if config_path:
        for key, raw in _read_config_file(config_path).items():
            try:
                merged[key] = _PARSERS[key](raw)
            except (ValueError, TypeError) as exc:
                raise ConfigError(f"config key {key!r}: cannot parse {raw!r}") from exc
    for key in _PARSERS:
        if hasattr(namespace, key):
            value = getattr(namespace, key)
            merged[key] = _PARSERS[key](value) if isinstance(value, str) and key in ("q", "delta") else value
    config = RunConfig(
        command=namespace.command,
        q_list=_parse_int_list(merged["q"]),
        sigma=merged["sigma"],
        delta_list=_parse_float_list(merged["delta"]),
        b=float(merged["b"]),
        epsilon=float(merged["epsilon"]),
        a_sigma=None if merged["a_sigma"] is None else float(merged["a_sigma"]),
        x_cap=float(merged["x_cap"]),
        y_min=float(merged["y_min"]),
        n=int(merged["n"]),
        k=int(merged["k"]),
        y=float(merged["y"]),
        tol=float(merged["tol"]),
        tau_budget=float(merged["tau_budget"]),
        output_dir=str(merged["output_dir"]),
        format=str(merged["format"]),
        jobs=int(merged["jobs"]),
    )
    _validate(config)
    return config


def _validate(config: RunConfig) -> None:
    if not config.q_list:
        raise ConfigError("q list must be nonempty")
    min_q = 5 if config.command in ("oracle-check", "certify") else 17
    for q in config.q_list:
        if not numth.is_prime(q):
            raise ConfigError(f"q = {q} is not prime")
        if q < min_q:
            raise ConfigError(
                f"q = {q} violates q >= {min_q} for {config.command}"
                + (" (iterated-log domain guard)" if min_q == 17 else "")
            )
    if config.format not in ("csv", "json", "both"):
        raise ConfigError(f"format must be csv, json or both, got {config.format!r}")
    if config.jobs < 1:
        raise ConfigError("jobs must be >= 1")
    if config.n < 1 or config.k < 1:
        raise ConfigError("N and K must be >= 1")
    if config.command == "certify" and config.b <= math.log(4):
        raise ConfigError(f"B = {config.b} violates B > log 4 = {math.log(4):.6f}")
    if config.command == "census":
        if not config.delta_list or any(d <= 0 for d in config.delta_list):
            raise ConfigError("delta grid must be nonempty with every delta > 0")
    if config.command == "scan-t3":
        if config.sigma is None:
            raise ConfigError("scan-t3 requires --sigma")
        if not 0.5 < config.sigma < 1.0:
            raise ConfigError(f"sigma = {config.sigma} violates sigma in (1/2, 1)")
    if config.command == "scan-t1" and config.epsilon < 0:
        raise ConfigError("epsilon must be >= 0")


# ----------------------------------------------------------------------
# result computation and persistence


def _compute_one(command: str, q: int, config: RunConfig):
    if command == "certify":
        report = ratio_certificate(
            q, config.b, n_limit=config.n, k_limit=config.k, y=config.y, tau_budget=config.tau_budget
        )
        starred = exclude_principal(report, build_group(q), report.scheme, 1.0, report.y)
        return report, starred
    if command == "scan-t1":
        return scan_sigma1(q, epsilon=config.epsilon)
    if command == "census":
        return threshold_census(q, config.delta_list)
    if command == "scan-t3":
        return scan_sigma_strip(
            q,
            config.sigma,
            x_cap=config.x_cap,
            a_sigma=config.a_sigma,
            y_min=config.y_min,
            census_tol=config.tol,
        )
    raise AssertionError(command)


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _csv_bytes(header: list[str], rows: list[list]) -> bytes:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_format_cell(cell) for cell in row))
    return ("\n".join(lines) + "\n").encode("utf-8")


def _json_sanitize(obj):
    if isinstance(obj, float) and math.isnan(obj):
        return None
    if isinstance(obj, dict):
        return {k: _json_sanitize(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_json_sanitize(v) for v in obj]
    return obj


def _json_bytes(payload: dict) -> bytes:
    return (json.dumps(_json_sanitize(payload), indent=2, sort_keys=True) + "\n").encode("utf-8")


def _atomic_write(path: Path, data: bytes) -> None:
    handle = tempfile.NamedTemporaryFile(dir=path.parent, prefix=path.name + ".", delete=False)
    try:
        handle.write(data)
        handle.flush()
        os.fsync(handle.fileno())
        handle.close()
        os.replace(handle.name, path)
    except BaseException:
        handle.close()
        with contextlib.suppress(OSError):
            os.unlink(handle.name)
        raise


def _result_files(command: str, q: int, result, config: RunConfig) -> dict[str, bytes]:
    files = {}
    if command == "certify":
        report, starred = result
        header, row = report.to_csv_row()
        header = header + ["s1_star_real", "s1_star_imag", "s2_star", "ratio_star", "certificate_star_passed"]
        row = row + [
            starred.s1.real, starred.s1.imag, starred.s2, starred.ratio, starred.certificate.passed,
        ]
        csv_data = _csv_bytes(header, [row])
        json_data = _json_bytes(
            {"report": report.to_json_dict(), "principal_excluded": starred.to_json_dict()}
        )
    else:
        header, rows = result.csv_rows()
        csv_data = _csv_bytes(header, rows)
        json_data = _json_bytes(result.to_json_dict())
    if config.format in ("csv", "both"):
        files[f"{command}_q{q}.csv"] = csv_data
    if config.format in ("json", "both"):
        files[f"{command}_q{q}.json"] = json_data
    return files


def _certificates_passed(command: str, result) -> bool:
    if command == "certify":
        report, _ = result
        return report.certificate.passed
    if command == "scan-t3":
        return result.quotient.certificate.passed
    return True


def run(config: RunConfig) -> int:
    """Execute the configured command; returns the process exit code."""
    if config.command == "oracle-check":
        return oracle_check(config.q_list)
    try:
        outdir = Path(config.output_dir)
        outdir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create output directory: {exc}", file=sys.stderr)
        return 3
    results = {}
    try:
        if config.jobs > 1 and len(config.q_list) > 1:
            with concurrent.futures.ProcessPoolExecutor(max_workers=config.jobs) as pool:
                futures = {
                    q: pool.submit(_compute_one, config.command, q, config) for q in config.q_list
                }
                for q, fut in futures.items():
                    results[q] = fut.result()
        else:
            for q in config.q_list:
                results[q] = _compute_one(config.command, q, config)
    except ValueError as exc:
        # an operation-level precondition (e.g. a cutoff reaching the modulus)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    all_passed = True
    try:
        for q in sorted(results):
            result = results[q]
            all_passed &= _certificates_passed(config.command, result)
            for name, data in _result_files(config.command, q, result, config).items():
                _atomic_write(outdir / name, data)
    except OSError as exc:
        print(f"error: writing results failed: {exc}", file=sys.stderr)
        return 3
    return 0 if all_passed else 1


# ----------------------------------------------------------------------
# oracle-check


def _check_rows_for(q: int) -> list[tuple[str, bool, str]]:
    rows = []
    group = build_group(q)
    phi = q - 1

    value_diag = orthogonality_sum(group, 1, q + 1)
    value_off = orthogonality_sum(group, 2, 1)
    ok = abs(value_diag - phi) <= 1e-9 * phi and abs(value_off) <= 1e-9 * phi
    rows.append(("orthogonality", ok, f"diag={value_diag:.6f} off={value_off:.2e}"))

    rng = np.random.default_rng(q)
    f = rng.standard_normal(q - 1) + 1j * rng.standard_normal(q - 1)
    transformed = dft_over_group(group, f)
    sample = range(0, q - 1, max(1, (q - 1) // 16))
    worst = 0.0
    for j in sample:
        naive = np.sum(f * group.character_values(j))
        worst = max(worst, abs(naive - transformed[j]) / max(abs(naive), 1.0))
    rows.append(("group-dft vs naive", worst <= 1e-9, f"max rel diff {worst:.2e}"))

    for sigma, label in ((1.0, "digamma"), (0.75, "hurwitz")):
        batch = l_value_batch(group, sigma)
        worst = 0.0
        for lv in batch[:: max(1, len(batch) // 8)]:
            single = l_value(group.character(lv.chi_index), sigma)
            worst = max(worst, abs(single.value - lv.value))
        rows.append((f"batch vs single ({label})", worst <= 1e-9, f"max abs diff {worst:.2e}"))

    x = min(7.0, q - 1.5)
    scheme = linear_scheme(x)
    y = max(x, 100.0)
    n_limit = k_limit = 512
    s2_char = square_sum_characters(group, scheme, n_limit)
    s2_cong = square_sum_congruence(q, scheme, n_limit)
    s1_char = weighted_sum_characters(group, scheme, 1.0, y, n_limit, k_limit)
    s1_cong = weighted_sum_congruence(q, scheme, 1.0, y, n_limit, k_limit)
    d2 = abs(s2_char - s2_cong) / s2_cong
    d1 = abs(s1_char - s1_cong) / abs(s1_cong)
    rows.append(("dual-oracle quotient sums", d1 <= 1e-9 and d2 <= 1e-9, f"s1 {d1:.2e} s2 {d2:.2e}"))
    return rows


def oracle_check(q_list) -> int:
    """Run the self-check suite and print one PASS/FAIL line per check."""
    all_ok = True
    for q in q_list:
        for name, ok, detail in _check_rows_for(q):
            all_ok &= ok
            print(f"q={q:<8} {name:<28} {'PASS' if ok else 'FAIL'}  {detail}")
    print("oracle-check:", "all checks passed" if all_ok else "FAILURES detected")
    return 0 if all_ok else 1


def main(argv=None) -> int:
    try:
        config = parse_config(sys.argv[1:] if argv is None else argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
