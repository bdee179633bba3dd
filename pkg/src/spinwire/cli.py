"""Command line front end: deterministic reports over the library.

Five subcommands cover the library surface: mu-table (interaction
matrix entries), spectrum (per-sector bound levels with predicted
matches), degeneracy (cross-sector multiplet table), verify (structural
conditions plus commutator residual studies), and ladder (raising
operator and Casimir checks per multiplet). Every number in the output
comes from a library call; the CLI only formats.

Exit codes: 0 success, 1 verification failure (a check that ran and
failed), 2 usage or configuration error. Output is byte-stable for a
fixed config: floats are formatted at 12 significant digits, orderings
are fixed, and no timestamps or environment data are emitted.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Iterable, Sequence

from .config import ConfigError, RunConfig, load_config
from .interaction import check_conditions, mu_difference, mu_from_alphas, mu_from_betas, mu_squared_diagonal
from .operator_lattice import (
    COMMUTATOR_PAIRS,
    commutator_residual,
    casimir_check,
    ladder_check,
    ladder_grid,
)
from .radial_solver import Multiplet, Spectrum, assemble, build_sector, degeneracy_report, solve_bound
from .spin_algebra import build_spin_rep

USAGE_ERROR = 2
VERIFICATION_FAILURE = 1


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _cell(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return _fmt(x)
    return str(x)


def _round_floats(obj: Any) -> Any:
    """Round every float to 12 significant digits for stable JSON."""
    if isinstance(obj, float):
        return float(_fmt(obj))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def half_label(two_x: int) -> str:
    """Human-readable rational for a doubled integer: 3 -> '3/2', 4 -> '2'."""
    if two_x % 2 == 0:
        return str(two_x // 2)
    return f"{two_x}/2"


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None or out_path == "-":
        sys.stdout.write(text)
    else:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _json_text(obj: Any) -> str:
    return json.dumps(_round_floats(obj), indent=2) + "\n"


def _parallel_map(fn: Callable, items: Sequence, threads: int) -> list:
    """Order-preserving map, fanned out when threads > 1."""
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _solve_sectors(config: RunConfig, threads: int) -> list[Spectrum]:
    def solve(two_jz: int) -> Spectrum:
        sector = build_sector(config.spec, two_jz, config.mass)
        return solve_bound(assemble(sector, config.spec, config.radial))

    return _parallel_map(solve, config.sector_values, threads)


# ---------------------------------------------------------------- mu-table


def cmd_mu_table(config: RunConfig, fmt: str, out: str | None, threads: int) -> int:
    config.spec.validate()
    rep = build_spin_rep(config.two_s)
    labels = [int(two_k) for two_k in rep.two_k_values]

    tables = []
    for phi in config.angles:
        forms = [("alphas", mu_from_alphas(config.spec, phi).matrix)]
        if config.betas is not None:
            forms.append(("betas", mu_from_betas(config.betas, phi).matrix))
        tables.append((phi, forms))

    diag = mu_squared_diagonal(config.spec)
    diff = None
    if config.betas is not None:
        diff = mu_difference(config.spec, config.betas, config.angles)

    if fmt == "csv":
        rows: list[Sequence[Any]] = []
        for phi, forms in tables:
            for form, matrix in forms:
                for i, row_two_k in enumerate(labels):
                    for j, col_two_k in enumerate(labels):
                        rows.append(
                            (
                                "entry",
                                form,
                                phi,
                                row_two_k,
                                col_two_k,
                                float(matrix[i, j].real),
                                float(matrix[i, j].imag),
                            )
                        )
        for i, two_k in enumerate(labels):
            rows.append(("mu_squared", "alphas", None, two_k, two_k, float(diag[i]), 0.0))
        if diff is not None:
            rows.append(("form_difference", "both", None, None, None, diff, 0.0))
        text = _csv_text(
            ("kind", "form", "angle", "row_two_k", "col_two_k", "re", "im"), rows
        )
    else:
        doc: dict[str, Any] = {
            "two_s": config.two_s,
            "two_k_labels": list(labels),
            "tables": [
                {
                    "angle": phi,
                    "forms": [
                        {
                            "form": form,
                            "entries": [
                                [
                                    [float(matrix[i, j].real), float(matrix[i, j].imag)]
                                    for j in range(len(labels))
                                ]
                                for i in range(len(labels))
                            ],
                        }
                        for form, matrix in forms
                    ],
                }
                for phi, forms in tables
            ],
            "mu_squared_diagonal": [
                {"two_k": two_k, "value": float(diag[i])}
                for i, two_k in enumerate(labels)
            ],
        }
        if diff is not None:
            doc["max_form_difference"] = diff
        text = _json_text(doc)
    _emit(text, out)
    return 0


# ---------------------------------------------------------------- spectrum


def _multiplet_lookup(multiplets: Sequence[Multiplet]) -> dict[tuple[int, int], Multiplet]:
    lookup: dict[tuple[int, int], Multiplet] = {}
    for m in multiplets:
        for two_jz, level_index, _energy in m.members:
            lookup[(two_jz, level_index)] = m
    return lookup


def cmd_spectrum(config: RunConfig, fmt: str, out: str | None, threads: int) -> int:
    config.spec.validate()
    spectra = _solve_sectors(config, threads)
    report = degeneracy_report(spectra, config.spec, rel_tol=config.tolerances.rel_tol)
    lookup = _multiplet_lookup(report.multiplets)

    rows = []
    for spectrum in spectra:
        two_jz = spectrum.sector.two_jz
        for level_index, energy in enumerate(spectrum.energies):
            m = lookup.get((two_jz, level_index))
            inferred = m.inferred_two_j if m is not None and m.consistent else None
            channel = m.channel_two_k if m is not None else None
            predicted = m.predicted if m is not None else None
            rel_err = m.level_rel_err(float(energy)) if m is not None else None
            rows.append(
                (
                    two_jz,
                    level_index,
                    float(energy),
                    inferred,
                    channel,
                    predicted,
                    rel_err,
                )
            )

    if fmt == "csv":
        text = _csv_text(
            (
                "two_jz",
                "level_index",
                "energy",
                "inferred_two_j",
                "channel_two_k",
                "predicted_energy",
                "rel_err",
            ),
            rows,
        )
    else:
        text = _json_text(
            {
                "levels": [
                    {
                        "two_jz": r[0],
                        "jz_label": half_label(r[0]),
                        "level_index": r[1],
                        "energy": r[2],
                        "inferred_two_j": r[3],
                        "j_label": None if r[3] is None else half_label(r[3]),
                        "channel_two_k": r[4],
                        "predicted_energy": r[5],
                        "rel_err": r[6],
                    }
                    for r in rows
                ]
            }
        )
    _emit(text, out)
    return 0


# ---------------------------------------------------------------- degeneracy


def _multiplet_sort_key(m: Multiplet) -> tuple[float, int]:
    return (m.mean_energy, m.members[0][0])


def cmd_degeneracy(config: RunConfig, fmt: str, out: str | None, threads: int) -> int:
    config.spec.validate()
    spectra = _solve_sectors(config, threads)
    report = degeneracy_report(spectra, config.spec, rel_tol=config.tolerances.rel_tol)
    multiplets = sorted(report.multiplets, key=_multiplet_sort_key)

    if fmt == "csv":
        rows = []
        for m in multiplets:
            rows.append(
                (
                    m.inferred_two_j,
                    None if m.inferred_two_j is None else half_label(m.inferred_two_j),
                    m.mean_energy,
                    m.spread_rel,
                    m.multiplicity,
                    ";".join(str(t) for t in m.sectors),
                    m.consistent,
                    m.truncated,
                    m.channel_two_k,
                    m.channel_ambiguous,
                    m.matched_two_k,
                    m.predicted,
                    m.rel_err,
                )
            )
        text = _csv_text(
            (
                "inferred_two_j",
                "j_label",
                "mean_energy",
                "spread_rel",
                "multiplicity",
                "sectors_two_jz",
                "consistent",
                "truncated",
                "channel_two_k",
                "channel_ambiguous",
                "matched_two_k",
                "predicted_energy",
                "rel_err",
            ),
            rows,
        )
    else:
        text = _json_text(
            {
                "two_s": report.two_s,
                "mass": report.mass,
                "rel_tol": report.rel_tol,
                "scanned_two_jz": list(report.scanned_two_jz),
                "multiplets": [
                    {
                        "inferred_two_j": m.inferred_two_j,
                        "j_label": None
                        if m.inferred_two_j is None
                        else half_label(m.inferred_two_j),
                        "mean_energy": m.mean_energy,
                        "spread_rel": m.spread_rel,
                        "multiplicity": m.multiplicity,
                        "members": [
                            {
                                "two_jz": two_jz,
                                "jz_label": half_label(two_jz),
                                "level_index": level_index,
                                "energy": energy,
                            }
                            for two_jz, level_index, energy in m.members
                        ],
                        "consistent": m.consistent,
                        "truncated": m.truncated,
                        "channel_two_k": m.channel_two_k,
                        "channel_ambiguous": m.channel_ambiguous,
                        "matched_two_k": m.matched_two_k,
                        "predicted_energy": m.predicted,
                        "rel_err": m.rel_err,
                    }
                    for m in multiplets
                ],
            }
        )
    _emit(text, out)
    return 0


# ---------------------------------------------------------------- verify


def cmd_verify(config: RunConfig, fmt: str, out: str | None, threads: int) -> int:
    if config.refinement_levels < 3:
        raise ConfigError(
            f"verify needs plane.refinement_levels >= 3 for an order fit, "
            f"got {config.refinement_levels}"
        )
    conditions = check_conditions(config.spec, tol=config.tolerances.condition_tol)
    grids = config.plane_refinements()

    def study(pair: str):
        return commutator_residual(
            pair,
            config.spec,
            config.mass,
            config.packet,
            grids,
            threshold=config.tolerances.residual_threshold,
        )

    reports = _parallel_map(study, COMMUTATOR_PAIRS, threads)
    passed = conditions.passed and all(r.verdict for r in reports)

    if fmt == "csv":
        rows: list[Sequence[Any]] = []
        for chk in conditions.checks:
            rows.append(
                ("condition", chk.name, None, None, None, chk.max_violation, chk.tol, None, chk.passed, None)
            )
        for rep in reports:
            for spacing, residual, relative in zip(
                rep.spacings, rep.residuals, rep.relative_residuals
            ):
                rows.append(
                    (
                        "pair",
                        rep.pair,
                        spacing,
                        residual,
                        relative,
                        rep.order,
                        rep.order_fit_residual,
                        rep.threshold,
                        rep.verdict,
                        rep.fitted_constant,
                    )
                )
        text = _csv_text(
            (
                "kind",
                "name",
                "spacing",
                "residual",
                "relative_residual",
                "order",
                "order_fit_residual",
                "threshold",
                "verdict",
                "fitted_constant",
            ),
            rows,
        )
    else:
        pair_docs = []
        for rep in reports:
            doc = {
                "pair": rep.pair,
                "spacings": list(rep.spacings),
                "residuals": list(rep.residuals),
                "relative_residuals": list(rep.relative_residuals),
                "order": rep.order,
                "order_fit_residual": rep.order_fit_residual,
                "verdict": rep.verdict,
                "threshold": rep.threshold,
            }
            if rep.fitted_constant is not None:
                doc["fitted_constant"] = rep.fitted_constant
            pair_docs.append(doc)
        text = _json_text(
            {
                "check_conditions": {
                    "passed": conditions.passed,
                    "angles": list(conditions.angles),
                    "checks": [
                        {
                            "name": chk.name,
                            "max_violation": chk.max_violation,
                            "tol": chk.tol,
                            "passed": chk.passed,
                        }
                        for chk in conditions.checks
                    ],
                },
                "pairs": pair_docs,
                "passed": passed,
            }
        )
    _emit(text, out)
    return 0 if passed else VERIFICATION_FAILURE


# ---------------------------------------------------------------- ladder


def _checkable(m: Multiplet, rel_tol: float) -> str | None:
    """Reason the multiplet is skipped, or None when it can be checked."""
    if not m.consistent:
        return "sector pattern is not a full {-j..j} multiplet"
    if m.truncated:
        return "touches the scanned sector range edge"
    if not m.mean_energy < 0.0:
        return "not a bound cluster"
    if m.rel_err is None:
        return "no nonzero channel to match against"
    if m.rel_err > rel_tol:
        return "energy does not sit on the predicted tower"
    return None


def cmd_ladder(config: RunConfig, fmt: str, out: str | None, threads: int) -> int:
    config.spec.validate()
    spectra = _solve_sectors(config, threads)
    report = degeneracy_report(spectra, config.spec, rel_tol=config.tolerances.rel_tol)
    multiplets = sorted(report.multiplets, key=_multiplet_sort_key)

    tol = config.tolerances
    checked = []
    skipped = []
    all_passed = True
    for m in multiplets:
        reason = _checkable(m, tol.rel_tol)
        if reason is not None:
            skipped.append(
                {
                    "mean_energy": m.mean_energy,
                    "sectors_two_jz": list(m.sectors),
                    "reason": reason,
                }
            )
            continue
        casimir = casimir_check(m, config.spec, config.mass)
        casimir_ok = casimir.rel_dev < tol.casimir_rel_max
        levels = []
        for base in config.plane_refinements():
            grid = ladder_grid(m.mean_energy, config.mass, base)
            ladder = ladder_check(spectra, config.spec, config.mass, m, grid=grid)
            levels.append((grid, ladder))
        finest = levels[-1][1]
        tops_ok = all(
            step.norm_ratio < tol.ladder_top_max
            for step in finest.steps
            if step.two_jz_to is None
        )
        overlaps_ok = all(
            step.overlap is not None and step.overlap >= tol.ladder_overlap_min
            for step in finest.steps
            if step.two_jz_to is not None
        )
        passed = casimir_ok and tops_ok and overlaps_ok
        all_passed = all_passed and passed
        checked.append((m, casimir, casimir_ok, levels, passed))

    if fmt == "csv":
        rows = []
        for m, casimir, casimir_ok, levels, passed in checked:
            for grid, ladder in levels:
                for step in ladder.steps:
                    rows.append(
                        (
                            m.inferred_two_j,
                            half_label(m.inferred_two_j),
                            m.mean_energy,
                            casimir.lhs,
                            casimir.rhs,
                            casimir.rel_dev,
                            grid.half_extent,
                            grid.n,
                            grid.spacing,
                            step.two_jz_from,
                            half_label(step.two_jz_from),
                            step.two_jz_to,
                            None if step.two_jz_to is None else half_label(step.two_jz_to),
                            step.norm_ratio,
                            step.overlap,
                            step.leakage,
                            passed,
                        )
                    )
        text = _csv_text(
            (
                "two_j",
                "j_label",
                "mean_energy",
                "casimir_lhs",
                "casimir_rhs",
                "casimir_rel_dev",
                "half_extent",
                "grid_n",
                "spacing",
                "two_jz_from",
                "jz_from_label",
                "two_jz_to",
                "jz_to_label",
                "norm_ratio",
                "overlap",
                "leakage",
                "passed",
            ),
            rows,
        )
    else:
        text = _json_text(
            {
                "multiplets": [
                    {
                        "two_j": m.inferred_two_j,
                        "j_label": half_label(m.inferred_two_j),
                        "mean_energy": m.mean_energy,
                        "casimir": {
                            "two_j": casimir.two_j,
                            "energy": casimir.energy,
                            "channel_two_k": casimir.channel_two_k,
                            "lhs": casimir.lhs,
                            "rhs": casimir.rhs,
                            "rel_dev": casimir.rel_dev,
                            "passed": casimir_ok,
                        },
                        "levels": [
                            {
                                "half_extent": grid.half_extent,
                                "n": grid.n,
                                "spacing": grid.spacing,
                                "steps": [
                                    {
                                        "two_jz_from": step.two_jz_from,
                                        "jz_from_label": half_label(step.two_jz_from),
                                        "two_jz_to": step.two_jz_to,
                                        "jz_to_label": None
                                        if step.two_jz_to is None
                                        else half_label(step.two_jz_to),
                                        "norm_ratio": step.norm_ratio,
                                        "overlap": step.overlap,
                                        "leakage": step.leakage,
                                    }
                                    for step in ladder.steps
                                ],
                            }
                            for grid, ladder in levels
                        ],
                        "passed": passed,
                    }
                    for m, casimir, casimir_ok, levels, passed in checked
                ],
                "skipped": skipped,
                "passed": all_passed,
            }
        )
    _emit(text, out)
    return 0 if all_passed else VERIFICATION_FAILURE


# ---------------------------------------------------------------- dispatch


_COMMANDS = {
    "mu-table": (cmd_mu_table, "csv"),
    "spectrum": (cmd_spectrum, "csv"),
    "degeneracy": (cmd_degeneracy, "csv"),
    "verify": (cmd_verify, "json"),
    "ladder": (cmd_ladder, "json"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinwire",
        description="Spectra and symmetry verification for planar spin-orbit models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON config path, or - for stdin")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument(
            "--format",
            choices=("csv", "json"),
            default=None,
            help="output format (default: csv for tables, json for verify/ladder)",
        )
        p.add_argument("--threads", type=int, default=1, help="worker threads (default 1)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads < 1:
        print(f"error: --threads must be a positive integer, got {args.threads}",
              file=sys.stderr)
        return USAGE_ERROR
    command, default_fmt = _COMMANDS[args.command]
    fmt = args.format if args.format is not None else default_fmt
    try:
        config = load_config(args.config)
        return command(config, fmt, args.out, args.threads)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
