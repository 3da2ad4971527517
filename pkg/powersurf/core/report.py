import csv
import json
from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path
from typing import Any, Dict, List, Optional

from .enumerator import CriticalOrbit, RegimeReport, published_label
from .surface import C_EDGE, C_SING, SurfaceSpec
from .topology import ComponentEstimate, SweepResult
from .verifier import ProbeResult, VerificationReport

SCHEMA_VERSION = "1.0"
SWEEP_COLUMNS = ["c", "regime", "n_orbits", "n_min", "n_saddle", "n_max", "chi", "genus", "p4_values"]


def _floats(values) -> List[float]:
    return [float(v) for v in values]


def orbit_to_dict(orbit: CriticalOrbit) -> Dict[str, Any]:
    return {
        "key": orbit.key,
        "kind": orbit.kind,
        "pattern": list(orbit.pattern),
        "t": orbit.t,
        "values": _floats(orbit.values),
        "representative": _floats(orbit.representative),
        "multipliers": _floats(orbit.multipliers),
        "p4": orbit.p4_value,
        "index": orbit.morse_index,
        "multiplicity": orbit.multiplicity,
        "published_label": published_label(orbit),
    }


def spec_to_dict(spec: SurfaceSpec) -> Dict[str, Any]:
    return {"c": spec.c, "tol_surface": spec.tol_surface, "tol_distinct": spec.tol_distinct}


def regime_report_to_dict(report: RegimeReport) -> Dict[str, Any]:
    n_min, n_saddle, n_max = report.counts
    return {
        "regime": report.regime.value,
        "summary": report.summary_line(),
        "counts": {"min": n_min, "saddle": n_saddle, "max": n_max},
        "n_singular": report.n_singular,
        "n_isolated": report.n_isolated,
        "total_points": report.total_points,
        "euler_characteristic": report.euler_characteristic,
        "n_components": report.n_components,
        "genus": report.genus,
        "orbits": [orbit_to_dict(o) for o in report.orbits],
    }


def verification_to_dict(report: VerificationReport) -> Dict[str, Any]:
    return {
        "n_starts": report.n_starts,
        "n_converged": report.n_converged,
        "n_diverged": report.n_diverged,
        "matched_orbits": dict(report.matched_orbits),
        "unmatched": [
            {"point": _floats(s.point), "multipliers": _floats(s.multipliers)} for s in report.unmatched
        ],
        "max_residual": report.max_residual,
        "seed": report.seed,
        "tol": report.tol,
        "all_orbits_hit": report.all_orbits_hit,
        "passed": report.passed,
    }


def component_estimate_to_dict(estimate: ComponentEstimate) -> Dict[str, Any]:
    return {
        "n_components": estimate.n_components,
        "n_samples": estimate.n_samples,
        "epsilon": estimate.epsilon,
        "largest_component_fraction": estimate.largest_component_fraction,
        "component_sizes": list(estimate.component_sizes),
    }


def probe_to_dict(result: ProbeResult) -> Dict[str, Any]:
    return {
        "verdict": result.verdict.value,
        "margin": result.margin,
        "n_samples": result.n_samples,
        "n_above": result.n_above,
        "n_below": result.n_below,
        "radius": result.radius,
        "singular": result.singular,
        "p4_center": result.p4_center,
    }


def boundary_constants() -> Dict[str, str]:
    return {"c_singular": f"{C_SING:.17g}", "c_edge": f"{C_EDGE:.17g}"}


@dataclass
class ReportDocument:
    """Everything one command prints, in a fixed key order."""
    command: str
    spec: SurfaceSpec
    regime_report: RegimeReport
    verification: Optional[VerificationReport] = None
    components: Optional[ComponentEstimate] = None
    probes: List[ProbeResult] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    constants: Optional[Dict[str, str]] = None
    schema_version: str = SCHEMA_VERSION

    def all_notes(self) -> List[str]:
        return list(self.regime_report.notes) + list(self.notes)

    def to_dict(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {
            "schema_version": self.schema_version,
            "command": self.command,
            "spec": spec_to_dict(self.spec),
            "analysis": regime_report_to_dict(self.regime_report),
        }
        if self.constants is not None:
            doc["constants"] = dict(self.constants)
        if self.verification is not None:
            doc["verification"] = verification_to_dict(self.verification)
        if self.components is not None:
            doc["components"] = component_estimate_to_dict(self.components)
        if self.probes:
            doc["singular_probes"] = [probe_to_dict(p) for p in self.probes]
        doc["notes"] = self.all_notes()
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, allow_nan=False)


def render_text(document: ReportDocument) -> str:
    report = document.regime_report
    lines = [
        f"powersurf {document.command} c={document.spec.c!r}",
        f"regime: {report.regime.value}",
        report.summary_line(),
    ]

    if document.constants:
        lines.append("constants:")
        lines.extend(f"  {name} = {value}" for name, value in document.constants.items())

    if report.orbits:
        lines.append("orbits:")
        for orbit in report.orbits:
            published = published_label(orbit)
            line = (f"  {orbit.kind:<9} {'-'.join(map(str, orbit.pattern)):<6} t={orbit.t:+.12f} "
                    f"p4={orbit.p4_value:.12g} index={orbit.morse_index} x{orbit.multiplicity}")
            if published:
                line += f" (published: {published})"
            lines.append(line)

    if document.verification is not None:
        v = document.verification
        hit = sum(1 for h in v.matched_orbits.values() if h)
        lines.append(f"verification: {v.n_converged}/{v.n_starts} converged, {hit}/{len(v.matched_orbits)} "
                     f"orbits hit, {len(v.unmatched)} unmatched, max residual {v.max_residual:.3e}")

    if document.components is not None:
        est = document.components
        lines.append(f"components: {est.n_components} (eps={est.epsilon}, {est.n_samples} samples, "
                     f"largest fraction {est.largest_component_fraction:.3f})")

    if document.probes:
        verdicts = sorted({p.verdict.value for p in document.probes})
        margin = min(p.margin for p in document.probes)
        lines.append(f"singular probes: {len(document.probes)} points, verdicts {', '.join(verdicts)}, "
                     f"min margin {margin:.3e}")

    notes = document.all_notes()
    if notes:
        lines.append("notes:")
        lines.extend(f"  - {note}" for note in notes)
    return "\n".join(lines) + "\n"


def _step_decimals(step: float) -> int:
    return max(0, -Decimal(repr(step)).normalize().as_tuple().exponent)


def sweep_rows(result: SweepResult, step: float) -> List[List[str]]:
    decimals = _step_decimals(step)
    rows = []
    for row in result.rows:
        rows.append([
            f"{row.c:.{decimals}f}",
            row.regime.value,
            str(row.n_orbits),
            *(str(n) for n in row.counts),
            "" if row.euler_characteristic is None else str(row.euler_characteristic),
            "" if row.genus is None else str(row.genus),
            ";".join(f"{v:.12g}" for v in row.p4_values),
        ])
    return rows


def write_sweep_csv(result: SweepResult, path, step: float) -> Path:
    path = Path(path)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(SWEEP_COLUMNS)
        writer.writerows(sweep_rows(result, step))
    return path


def format_transitions(result: SweepResult) -> str:
    lines = [f"{len(result.transitions)} transition(s):"]
    for tr in result.transitions:
        lines.append(f"  ({tr.c_left!r}, {tr.c_right!r}): {tr.regime_left.value} {tr.counts_left} -> "
                     f"{tr.regime_right.value} {tr.counts_right}")
    return "\n".join(lines) + "\n"
