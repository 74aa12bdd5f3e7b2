"""Audit of candidate closed-form shortcuts against the exact oracle.

Each catalog entry is a closed-form expression for a post-measurement
quantity (a Bloch component, normalization, LAQC, or concurrence of the
swapped state) or for a base-family quantifier.  The audit evaluates the
expression on a parameter grid, recomputes the same quantity through the
16x16 projective-measurement oracle pipeline, and classifies the formula
as CONFIRMED (max deviation <= 1e-9) or DISCREPANT, always carrying the
quantified deviation profile.  Discrepant entries keep a short note with
the structural cause found numerically (a sign pattern, a constant
factor, a missing validity threshold).

The audit is the single place where the historical shortcut variants
live; the computation paths elsewhere in the package never use them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .correlations import (
    concurrence,
    g3_computational,
    g3_printed,
    laqc_family,
    laqc_xstate,
    pair_information,
)
from .swap import MeasurementState, swap_oracle
from .xstate import (
    bloch_from_xstate,
    density_matrix,
    gamma_cap,
    make_family,
    random_xstate,
    xstate_from_density,
)

CONFIRM_TOL = 1e-9
DEFAULT_GRID = 11
DEFAULT_SAMPLES = 60
AUDIT_SEED = 20250

_BLOCH_KEYS = ("x3", "y3", "t1", "t2", "t3")


@dataclass(frozen=True)
class AuditRow:
    formula_id: str
    description: str
    grid_points: int
    max_abs_deviation: float
    classification: str
    note: str
    worst_case: dict = field(default_factory=dict)

    @staticmethod
    def build(formula_id, description, devs, cases, note_if_bad):
        devs = np.asarray(devs, dtype=float)
        k = int(np.argmax(devs))
        max_dev = float(devs[k])
        confirmed = max_dev <= CONFIRM_TOL
        return AuditRow(
            formula_id=formula_id,
            description=description,
            grid_points=len(devs),
            max_abs_deviation=max_dev,
            classification="CONFIRMED" if confirmed else "DISCREPANT",
            note="" if confirmed else note_if_bad,
            worst_case={} if confirmed else dict(cases[k]),
        )


@dataclass(frozen=True)
class AuditReport:
    rows: tuple

    def counts(self):
        confirmed = sum(1 for r in self.rows if r.classification == "CONFIRMED")
        return {"confirmed": confirmed, "discrepant": len(self.rows) - confirmed}

    def row(self, formula_id: str) -> AuditRow:
        for r in self.rows:
            if r.formula_id == formula_id:
                return r
        raise KeyError(formula_id)

    def as_dicts(self):
        return [
            {
                "formula_id": r.formula_id,
                "description": r.description,
                "grid_points": r.grid_points,
                "max_abs_deviation": r.max_abs_deviation,
                "classification": r.classification,
                "note": r.note,
                "worst_case": r.worst_case,
            }
            for r in self.rows
        ]


def _g(t):
    return pair_information(t)


def _post_catalog():
    """Closed-form candidates for the swapped state, per family.

    Werner, alpha and beta have unit normalization, so their Bloch
    candidates are stated in normalized form; the vv and mems candidates
    are pre-normalization components plus an explicit normalization.
    """

    def werner(z1, z2, xi):
        c, s = math.cos(xi), math.sin(xi)
        bloch = {
            "x3": -z1 * c,
            "y3": -z2 * c,
            "t1": z1 * z2 * s,
            "t2": -z1 * z2 * s,
            "t3": z1 * z2,
        }
        laqc = _g(z1 * z2 * s)
        conc = max(
            0.0,
            z1 * z2 * abs(s)
            - 0.5
            * math.sqrt(
                (1 - z1**2) * (1 - z2**2) + (z1 - z2) ** 2 * s**2
            ),
        )
        return bloch, None, laqc, conc

    def alpha(a1, a2, xi):
        c, s = math.cos(xi), math.sin(xi)
        bloch = {
            "x3": (1 - 2 * a1) * c,
            "y3": (1 - 2 * a2) * c,
            "t1": a1 * a2 * s,
            "t2": a1 * a2 * s,
            "t3": (1 - 2 * a1) * (1 - 2 * a2),
        }
        return bloch, None, _g(a1 * a2 * s), 0.0

    def beta(b1, b2, xi):
        c, s = math.cos(xi), math.sin(xi)
        t1m, t2m = 1 - 2 * b1, 1 - 2 * b2
        bloch = {
            "x3": t1m * c,
            "y3": t2m * c,
            "t1": s,
            "t2": -t1m * t2m * s,
            "t3": t1m * t2m,
        }
        laqc = None  # stated as g of the normalized t2; filled in situ
        conc = max(
            0.0,
            abs(s) * abs((2 * b1 - 1) * b2 + 1 - b1)
            - math.sqrt(
                (b1 - b2) ** 2 * s**2
                + 4 * b1 * b2 * (1 - b1) * (1 - b2)
            ),
        )
        return bloch, None, laqc, conc

    def vv(f1, f2, xi):
        c, s = math.cos(xi), math.sin(xi)
        raw = {
            "x3": (2 - (3 - f2) * f1 - f2) * (1 + c) + f1 * f2,
            "y3": (2 - (3 - f1) * f2 - f1) * (1 + c) + f1 * f2,
            "t1": f1 * f2 * s,
            "t2": -f1 * f2 * s,
            "t3": (2 - (3 - 4 * f2) * f1 - 3 * f2) * (1 + c) + f1 * f2,
        }
        norm = 1 + (1 - f1) * (1 - f2) + (2 - (f1 + f2)) * c
        laqc = _g(f1 * f2 * s / norm)
        conc = (
            max(
                0.0,
                0.25 * f1 * f2 * abs(s)
                - (1 - c) * math.sqrt(f1 * f2 * (1 - f1) * (1 - f2)),
            )
            / norm
        )
        return raw, norm, laqc, conc

    def mems(g1, g2, xi):
        c, s = math.cos(xi), math.sin(xi)
        cap1, cap2 = gamma_cap(g1), gamma_cap(g2)
        raw = {
            "x3": ((1 + 2 * cap2) * cap1 - cap2) * (1 + c)
            + 2 * (1 - 3 * cap1) * cap2,
            "y3": ((1 + 2 * cap1) * cap2 - cap1) * (1 + c)
            - 2 * (1 - cap1) * cap2,
            "t1": 0.5 * g1 * g2 * s,
            "t2": 0.5 * g1 * g2 * s,
            "t3": (cap2 - cap1) * (1 + c) - 2 * (1 - 3 * cap1) * cap2,
        }
        norm = (cap1 - cap2) * (1 + c) + 2 * (1 - cap1) * cap2
        laqc = _g(raw["t1"] / norm) if norm > 1e-12 else None
        return raw, norm, laqc, 0.0

    return {"werner": werner, "alpha": alpha, "beta": beta, "vv": vv, "mems": mems}


_POST_NOTES = {
    "werner": {},
    "alpha": {
        "x3": "sign flipped relative to the oracle (oracle: t3_ab cos xi)",
        "y3": "sign flipped relative to the oracle",
        "t2": "sign flipped: the oracle gives -t2_ab t2_cd sin xi",
        "conc": "holds only below the entanglement-transfer threshold; the "
        "oracle state is entangled for large parameter products "
        "(equal parameters above 2/3 at xi = pi/2)",
    },
    "beta": {
        "x3": "sign flipped relative to the oracle",
        "y3": "sign flipped relative to the oracle",
        "conc": "misses the |01>/|10> coherence branch; fails near "
        "opposite-extreme parameter pairs",
    },
    "vv": {
        "x3": "pre-normalization grouping does not reduce to the oracle map",
        "y3": "pre-normalization grouping does not reduce to the oracle map",
        "t2": "sign convention differs from the oracle",
        "t3": "pre-normalization grouping does not reduce to the oracle map",
        "conc": "structure mismatch: oracle gives "
        "[f1 f2 |sin xi| - 2(1+cos xi) sqrt(f1 f2 (1-f1)(1-f2))]/N",
    },
    "mems": {
        "x3": "grouping does not reduce to the oracle map",
        "y3": "grouping does not reduce to the oracle map",
        "t1": "global factor 2: oracle raw component is g1 g2 sin xi",
        "t2": "factor 2 and sign: oracle raw component is -g1 g2 sin xi",
        "t3": "grouping does not reduce to the oracle map",
        "norm": "global factor 2: substituting the family Bloch values into "
        "the general normalization gives twice this expression",
        "conc": "the swapped state keeps the |00><11| coherence while one "
        "anti-diagonal population vanishes, so its concurrence is "
        "gamma_ab gamma_cd |sin xi| / N > 0 off the boundaries",
    },
}


def _audit_posts(grid: int):
    catalog = _post_catalog()
    rows = []
    params = np.linspace(0.0, 1.0, grid)
    xis = np.linspace(-math.pi / 2, math.pi / 2, grid)
    for family, formulas in catalog.items():
        devs = {k: [] for k in _BLOCH_KEYS}
        dev_norm, dev_laqc, dev_conc = [], [], []
        cases = []
        for p1 in params:
            rho1 = density_matrix(make_family(family, p1))
            for p2 in params:
                rho2 = density_matrix(make_family(family, p2))
                for xi in xis:
                    m = MeasurementState(xi_meas=float(xi))
                    rho_ad, prob = swap_oracle(rho1, rho2, m)
                    state = xstate_from_density(rho_ad, tol=1e-9)
                    nb = bloch_from_xstate(state)
                    norm_true = 4.0 * prob
                    cand_bloch, cand_norm, cand_laqc, cand_conc = formulas(
                        p1, p2, float(xi)
                    )
                    truth = dict(zip(_BLOCH_KEYS, nb.as_tuple()))
                    pre = cand_norm is not None
                    for k in _BLOCH_KEYS:
                        ref = truth[k] * norm_true if pre else truth[k]
                        devs[k].append(abs(cand_bloch[k] - ref))
                    if pre:
                        dev_norm.append(abs(cand_norm - norm_true))
                    if family == "beta":
                        cand_laqc = _g(nb.t2)
                    if cand_laqc is not None:
                        dev_laqc.append(
                            abs(cand_laqc - laqc_xstate(state).closed)
                        )
                    dev_conc.append(abs(cand_conc - concurrence(rho_ad)))
                    cases.append(
                        {"p_ab": float(p1), "p_cd": float(p2), "xi": float(xi)}
                    )
        notes = _POST_NOTES[family]
        for k in _BLOCH_KEYS:
            rows.append(
                AuditRow.build(
                    f"{family}_post_{k}",
                    f"{family}: swapped-state {k} component"
                    + (" (pre-normalization)" if family in ("vv", "mems") else ""),
                    devs[k],
                    cases,
                    notes.get(k, "does not match the oracle map"),
                )
            )
        if dev_norm:
            rows.append(
                AuditRow.build(
                    f"{family}_post_norm",
                    f"{family}: swapped-state normalization factor",
                    dev_norm,
                    cases,
                    notes.get("norm", "does not match the oracle normalization"),
                )
            )
        rows.append(
            AuditRow.build(
                f"{family}_post_laqc",
                f"{family}: swapped-state LAQC closed form",
                dev_laqc,
                cases,
                notes.get("laqc", "does not match the pipeline LAQC"),
            )
        )
        rows.append(
            AuditRow.build(
                f"{family}_post_concurrence",
                f"{family}: swapped-state concurrence"
                + (" (claimed identically zero)" if family in ("alpha", "mems") else ""),
                dev_conc,
                cases,
                notes.get("conc", "does not match the spin-flip concurrence"),
            )
        )
    return rows


def _audit_literal_max(grid: int):
    rows = []
    params = np.linspace(0.0, 1.0, max(grid, 101))
    for family in ("werner", "alpha", "beta", "vv", "mems"):
        devs, cases = [], []
        for p in params:
            breakdown = laqc_xstate(make_family(family, float(p)))
            devs.append(abs(breakdown.literal_max - laqc_family(family, float(p))))
            cases.append({"param": float(p)})
        rows.append(
            AuditRow.build(
                f"literal_max_{family}",
                f"{family}: unrestricted max(g1, g2, quarter-weighted g3) "
                "against the family LAQC value",
                devs,
                cases,
                "the unrestricted maximum keeps classical readout directions; "
                "it overestimates whenever the strongest readout is classical",
            )
        )
    return rows


def _audit_g3_weight(samples: int, seed: int):
    rng = np.random.default_rng(seed)
    devs, ratios, cases = [], [], []
    for k in range(samples):
        x = random_xstate(rng)
        full = g3_computational(x)
        printed = g3_printed(x)
        devs.append(abs(printed - full))
        if full > 1e-9:
            ratios.append(printed / full)
        cases.append({"sample": k})
    note = (
        "systematic quarter weight: the printed variant equals exactly one "
        f"quarter of the z-readout mutual information (ratio spread "
        f"{np.ptp(ratios):.2e})"
    )
    return [
        AuditRow.build(
            "g3_quarter_weight",
            "quarter-weighted z-readout term against the plain z-readout "
            "mutual information",
            devs,
            cases,
            note,
        )
    ]


def _audit_general_map_variant(samples: int, seed: int):
    """Sign-variant general Bloch map against the oracle on random pairs."""
    rng = np.random.default_rng(seed)
    devs = {k: [] for k in _BLOCH_KEYS}
    cases = []
    for k in range(samples):
        xa, xc = random_xstate(rng), random_xstate(rng)
        pa, pc = bloch_from_xstate(xa), bloch_from_xstate(xc)
        xi = float(rng.uniform(-math.pi / 2, math.pi / 2))
        m = MeasurementState(xi_meas=xi)
        rho_ad, prob = swap_oracle(density_matrix(xa), density_matrix(xc), m)
        nb = bloch_from_xstate(xstate_from_density(rho_ad, tol=1e-9))
        norm_true = 4.0 * prob
        c, s = math.cos(xi), math.sin(xi)
        variant = {
            "x3": (1 - pc.x3 * c) * pa.x3 + (c - pc.x3) * pa.t3,
            "y3": (pa.y3 * pc.y3 - pc.t3) * c + (pc.y3 - pa.y3 * pc.t3),
            "t1": pa.t1 * pc.t1 * s,
            "t2": pa.t2 * pc.t2 * s,
            "t3": (pc.y3 * c - pc.t3) * pa.t3 + (pc.y3 - pc.t3 * c) * pa.x3,
        }
        truth = dict(zip(_BLOCH_KEYS, nb.as_tuple()))
        for key in _BLOCH_KEYS:
            devs[key].append(abs(variant[key] - truth[key] * norm_true))
        cases.append({"sample": k, "xi": xi})
    notes = {
        "x3": "cross terms carry the opposite sign (oracle: "
        "x3 + t3_ab x3_cd + (t3_ab + x3_ab x3_cd) cos xi)",
        "y3": "cross terms carry the opposite sign",
        "t2": "overall sign: the oracle gives -t2_ab t2_cd sin xi",
        "t3": "cross terms carry the opposite sign",
    }
    return [
        AuditRow.build(
            f"xmap_raw_{k}",
            f"general-map sign variant, raw {k} component, random X pairs",
            devs[k],
            cases,
            notes.get(k, "does not match the oracle map"),
        )
        for k in _BLOCH_KEYS
    ]


def audit_reference_formulas(
    grid: int = DEFAULT_GRID,
    samples: int = DEFAULT_SAMPLES,
    seed: int = AUDIT_SEED,
) -> AuditReport:
    """Run the full formula audit.

    grid controls the per-axis density of the (p_ab, p_cd, xi) family
    grids; samples and seed control the random-state checks.
    """
    rows = []
    rows += _audit_posts(grid)
    rows += _audit_literal_max(grid)
    rows += _audit_g3_weight(samples, seed)
    rows += _audit_general_map_variant(samples, seed)
    return AuditReport(rows=tuple(rows))
