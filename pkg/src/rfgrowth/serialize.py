"""Canonical JSON and CSV emission shared by the CLI and the test suite.

Identical inputs must produce byte-identical text, so everything here is
sorted, versioned, and free of wall-clock data unless the caller explicitly
passes a timing value.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from .growth import ExponentFit, GrowthProfile, WitnessStep
from .ideals import DeltaSweepReport
from .lattice import Lattice

TOOL_VERSION = "0.1.0"
SCHEMA_VERSION = 1


def canonical_json(doc: Mapping) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def json_document(
    kind: str,
    ring: Optional[str],
    params: Mapping,
    payload: Mapping,
    elapsed_ms: Optional[int] = None,
) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": TOOL_VERSION,
        "kind": kind,
        "params": dict(params),
    }
    if ring is not None:
        doc["ring"] = ring
    doc.update(payload)
    if elapsed_ms is not None:
        doc["elapsed_ms"] = elapsed_ms
    return canonical_json(doc)


def lattice_rows(lat: Lattice) -> list[list[int]]:
    return [list(r) for r in lat.basis]


def fraction_str(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def delta_payload(report: DeltaSweepReport) -> dict:
    return {
        "rows": [
            {"prime": p, "delta_p": d, "ideal_dim": dim} for p, d, dim in report.rows
        ],
        "stabilized": report.stabilized,
        "dissenting": list(report.dissenting),
    }


def profile_payload(profile: GrowthProfile) -> dict:
    return {
        "family": profile.family,
        "length": profile.length,
        "r_max": profile.r_max,
        "rows": [
            {
                "radius": row.radius,
                "maxD": row.value,
                "prime": row.prime,
                "exponent": row.exponent,
                "witness": list(row.witness),
            }
            for row in profile.rows
        ],
    }


def profile_csv(
    profile: GrowthProfile,
    seed: int = 0,
    elapsed_ms: Optional[int] = None,
) -> str:
    meta = (
        f"# rfgrowth profile schema={SCHEMA_VERSION} tool={TOOL_VERSION}"
        f" ring={profile.ring_name} family={profile.family}"
        f" length={profile.length} rmax={profile.r_max} seed={seed}"
    )
    if elapsed_ms is not None:
        meta += f" elapsed_ms={elapsed_ms}"
    lines = [meta, "radius,maxD,prime,exponent,witness"]
    for row in profile.rows:
        witness = ";".join(str(c) for c in row.witness)
        lines.append(f"{row.radius},{row.value},{row.prime},{row.exponent},{witness}")
    return "\n".join(lines) + "\n"


def witness_payload(steps: Sequence[WitnessStep], fit: Optional[ExponentFit]) -> dict:
    doc = {
        "steps": [
            {
                "step": s.step,
                "scalar": s.scalar,
                "vector": list(s.vector),
                "usable_prime": s.usable_prime,
                "value": s.value,
                "prime": s.prime,
                "exponent": s.exponent,
            }
            for s in steps
        ]
    }
    if fit is not None:
        doc["fit"] = {
            "slope": fit.slope,
            "intercept": fit.intercept,
            "points": fit.points,
            "degenerate": fit.degenerate,
        }
    return doc


def error_json(reason: str, message: str) -> str:
    return canonical_json({"error": reason, "message": message})
