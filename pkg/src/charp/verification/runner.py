"""Runs the checks over weight lists and reference table blocks."""

from __future__ import annotations

import logging

from ..irreducibles import CharacterEngine, InvariantError
from ..roots import format_weight
from .checks import GOLDEN, CheckReport, check_linkage, check_positivity, verify_weight
from .golden import GoldenRows, GoldenTable

log = logging.getLogger(__name__)


def verify_weights(engine: CharacterEngine, weights, golden: GoldenRows | None) -> list[CheckReport]:
    reports = []
    for lam in weights:
        log.info("verifying %s", format_weight(lam))
        reports += verify_weight(engine, tuple(lam), golden)
    return reports


def compare_block(table: GoldenTable, engine: CharacterEngine, rows: int | None = None) -> list[CheckReport]:
    """The first ``rows`` reference rows of one block (all by default) against computed D rows."""
    reference_rows = table.rows[:rows]
    label = f"{GOLDEN} {table.table_id}"
    top = reference_rows[-1][0]
    try:
        D = engine.matrix_D_on(engine.closed_index([lam for lam, _ in reference_rows]))
    except InvariantError as exc:
        return [CheckReport(label, top, [str(exc)])]
    reports = [check_positivity(top, D), check_linkage(top, D, engine.config.prime)]
    for lam, _ in reference_rows:
        listed = table.row(lam)
        row = D.row(lam)
        bad = []
        for nu, want in listed.items():
            if row.get(nu, 0) != want:
                bad.append(f"[H^0({format_weight(lam)}) : L({format_weight(nu)})] reference {want}, "
                           f"computed {row.get(nu, 0)}")
        for nu, got in row.items():
            if nu not in listed:
                bad.append(f"computed factor L({format_weight(nu)}) x{got} of H^0({format_weight(lam)}) "
                           f"is not listed")
        reports.append(CheckReport(label, lam, bad))
    return reports


def verify_tables(engine: CharacterEngine, tables, golden: GoldenRows | None = None) -> list[CheckReport]:
    reports = []
    for t in tables:
        log.info("table %s: %d rows below %s", t.table_id, len(t.rows), format_weight(t.weights[-1]))
        reports += compare_block(t, engine)
    return reports
