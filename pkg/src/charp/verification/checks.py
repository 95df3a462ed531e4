"""Consistency checks on computed characters and decomposition matrices.

Every check returns a CheckReport listing its violations, so a caller can
run them all and print one summary.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..irreducibles import CharacterEngine, InvariantError
from ..roots import Weight, dominant_weights_below, dual_weight, format_weight, strongly_linked
from ..weyl import DecompMatrix
from .golden import GoldenRows

SYMMETRY_DIMS = "symmetry-dims"
SYMMETRY_FACTORS = "symmetry-factors"
POSITIVITY = "positivity"
LINKAGE = "linkage"
GOLDEN = "golden"


@dataclass
class CheckReport:
    check: str
    lam: Weight
    violations: list[str] = field(default_factory=list)
    status: str = ""

    def __post_init__(self):
        if not self.status:
            self.status = "pass" if not self.violations else "fail"

    @property
    def ok(self) -> bool:
        return self.status in ("pass", "not covered")

    def line(self) -> str:
        head = f"{self.check:17s} {format_weight(self.lam):12s} {self.status}"
        return head + "".join(f"\n    {v}" for v in self.violations)

    def to_record(self) -> dict:
        return {"check": self.check, "lambda": list(self.lam), "status": self.status,
                "violations": list(self.violations)}


def check_symmetry_dims(engine: CharacterEngine, lam: Weight) -> CheckReport:
    """dim L(lam)_mu = dim L(lam*)_{mu*} for every dominant mu <= lam."""
    lam = tuple(lam)
    dual = dual_weight(lam)
    row = engine.restricted_ch(lam)
    row_dual = row if dual == lam else engine.restricted_ch(dual)
    bad = []
    for mu in dominant_weights_below(lam):
        a, b = row.get(mu, 0), row_dual.get(dual_weight(mu), 0)
        if a != b:
            bad.append(f"dim L({format_weight(lam)})_{format_weight(mu)} = {a} but "
                       f"dim L({format_weight(dual)})_{format_weight(dual_weight(mu))} = {b}")
    return CheckReport(SYMMETRY_DIMS, lam, bad)


def check_symmetry_factors(lam: Weight, D: DecompMatrix, D_dual: DecompMatrix | None = None) -> CheckReport:
    """Row lam* of D_dual is row lam of D with every weight reversed.

    For a self-dual lam pass D_dual=None; the row must then be invariant.
    """
    lam = tuple(lam)
    dual = dual_weight(lam)
    other = D if D_dual is None else D_dual
    if D_dual is None and dual != lam:
        raise ValueError(f"{lam} is not self-dual, pass the matrix for {dual}")
    row = D.row(lam)
    mirrored = {dual_weight(nu): m for nu, m in row.items()}
    got = other.row(dual)
    bad = [f"[H^0({format_weight(dual)}) : L({format_weight(nu)})] = {got.get(nu, 0)}, "
           f"mirror gives {mirrored.get(nu, 0)}"
           for nu in sorted(set(mirrored) | set(got)) if got.get(nu, 0) != mirrored.get(nu, 0)]
    return CheckReport(SYMMETRY_FACTORS, lam, bad)


def check_positivity(lam: Weight, D: DecompMatrix) -> CheckReport:
    """Entries of D are nonnegative integers with unit diagonal and nothing above it."""
    r = D.rows
    bad = []
    if not np.issubdtype(r.dtype, np.integer):
        bad.append(f"entries have dtype {r.dtype}")
    for i, j in np.argwhere(r < 0):
        bad.append(f"[H^0({format_weight(D.index[i])}) : L({format_weight(D.index[j])})] = {r[i, j]}")
    for i in np.flatnonzero(np.diag(r) != 1):
        bad.append(f"diagonal entry at {format_weight(D.index[i])} is {r[i, i]}")
    for i, j in np.argwhere(np.triu(r, 1)):
        bad.append(f"entry above the diagonal at ({format_weight(D.index[i])}, {format_weight(D.index[j])})")
    return CheckReport(POSITIVITY, tuple(lam), bad)


def check_linkage(lam: Weight, D: DecompMatrix, p: int) -> CheckReport:
    """Every composition factor L(nu) of H^0(mu) has nu strongly linked to mu."""
    bad = []
    for i, mu in enumerate(D.index):
        for j in range(i):
            if D.rows[i, j] and not strongly_linked(D.index[j], mu, p):
                bad.append(f"L({format_weight(D.index[j])}) occurs in H^0({format_weight(mu)}) "
                           f"without strong linkage")
    return CheckReport(LINKAGE, tuple(lam), bad)


def compare_with_golden(lam: Weight, D: DecompMatrix, golden: GoldenRows) -> CheckReport:
    """Row lam of D against the reference (or mirrored) row, entry by entry.

    Reference weights missing from D's index count as discrepancies, and so
    do nonzero entries of D at weights the reference row does not list.
    """
    lam = tuple(lam)
    hit = golden.get(lam)
    if hit is None:
        return CheckReport(GOLDEN, lam, [], status="not covered")
    source, listed = hit
    row = D.row(lam)
    bad = []
    for nu, want in listed.items():
        if nu not in D.index:
            if want:
                bad.append(f"table {source}: {format_weight(nu)} listed with {want}, not in the computed index")
            continue
        got = row.get(nu, 0)
        if got != want:
            bad.append(f"table {source}: [H^0({format_weight(lam)}) : L({format_weight(nu)})] "
                       f"reference {want}, computed {got}")
    for nu, got in row.items():
        if nu not in listed:
            bad.append(f"table {source}: computed factor L({format_weight(nu)}) x{got} is not listed")
    return CheckReport(GOLDEN, lam, bad)


def verify_weight(engine: CharacterEngine, lam: Weight, golden: GoldenRows | None = None,
                  mode: str = "block") -> list[CheckReport]:
    """All checks for one restricted lam (plus the golden comparison when given)."""
    lam = tuple(lam)
    p = engine.config.prime
    dual = dual_weight(lam)
    try:
        reports = [check_symmetry_dims(engine, lam)]
        D = engine.matrix_D(lam, mode)
        D_dual = None if dual == lam else engine.matrix_D(dual, mode)
    except InvariantError as exc:
        # a broken structural guarantee shows up as a positivity failure
        return [CheckReport(POSITIVITY, lam, [str(exc)])]
    reports.append(check_symmetry_factors(lam, D, D_dual))
    reports.append(check_positivity(lam, D))
    reports.append(check_linkage(lam, D, p))
    if golden is not None:
        reports.append(compare_with_golden(lam, D, golden))
    return reports
