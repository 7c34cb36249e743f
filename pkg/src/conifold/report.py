"""Turning results into deterministic JSON, CSV and fixed-width tables.

``to_jsonable`` maps every result type onto plain JSON values: exact
rationals become ``"p/q"`` strings, irrational surds carry both a symbolic
and a decimal form, floats keep 12 significant digits.  A bundle built from
such values survives ``json.loads(json.dumps(...))`` unchanged.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from fractions import Fraction

from .fredholm import FredholmReport
from .moduli import ModuliReport, StabilityReport
from .spectra import LinkSpectrum, spectrum_to_dict
from .surd import QuadSurd
from .topology import ConifoldTopology
from .weights import WeightValue

__all__ = ["SCHEMA_VERSION", "to_jsonable", "emit_json", "emit_csv", "emit_table", "emit_report"]

SCHEMA_VERSION = "1.0"


def _float(x: float):
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return float(f"{x:.12g}")


def _rational(q: Fraction):
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def to_jsonable(obj):
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, int):
        return int(obj)
    if isinstance(obj, float):
        return _float(obj)
    if isinstance(obj, Fraction):
        return _rational(obj)
    if isinstance(obj, QuadSurd):
        if obj.is_rational:
            return _rational(obj.a)
        return {"exact": str(obj), "decimal": _float(float(obj))}
    if isinstance(obj, LinkSpectrum):
        return spectrum_to_dict(obj)
    if isinstance(obj, WeightValue):
        return {
            "end": obj.end_index,
            "gamma": to_jsonable(obj.gamma),
            "mult": obj.multiplicity,
            "eigenvalue": to_jsonable(obj.eigenvalue),
            "approximate": obj.approximate,
        }
    if isinstance(obj, StabilityReport):
        out = _fields(obj)
        out["stable"] = obj.stable
        out["meets_moment_bound"] = obj.meets_moment_bound
        return out
    if isinstance(obj, FredholmReport):
        out = _fields(obj)
        out["full_target_index"] = obj.full_target_index
        return out
    if isinstance(obj, ConifoldTopology):
        out = _fields(obj)
        out["dim_h1c_tilde"] = obj.dim_h1c_tilde
        return out
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _fields(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalars
        return to_jsonable(obj.item())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _fields(obj) -> dict:
    return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}


def emit_json(bundle: dict) -> str:
    return json.dumps(bundle, sort_keys=True, indent=2) + "\n"


def _scalar(v) -> str:
    if isinstance(v, dict) and "exact" in v:
        return f"{v['exact']} ~ {v['decimal']}"
    return "-" if v is None else str(v)


def emit_csv(bundle: dict) -> str:
    """Weight rows ``(end, gamma, multiplicity)`` and dimension rows ``(case, window, dim)``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["record", "end", "gamma", "multiplicity", "case", "window", "dim"])
    for scan in bundle.get("weights", []):
        for per_end in scan["per_end"]:
            for row in per_end:
                w.writerow(["weight", row["end"], _scalar(row["gamma"]), row["mult"], "", "", ""])
    for rep in bundle.get("dim", []):
        dim = rep["moduli_dim"] if rep["moduli_dim"] is not None else rep["dim_I"]
        w.writerow(["dim", "", "", "", rep["case"], rep["window"] or "", dim])
    return buf.getvalue()


def emit_table(bundle: dict) -> str:
    lines = [f"conifold report (schema {bundle.get('schema_version')}), m = {bundle.get('m')}"]
    for e in bundle.get("ends", []):
        lines.append(f"  end {e['index']}: {e['kind']:<2}  link={e['link']:<12} rate={_scalar(e.get('rate'))}")
    if "topology" in bundle:
        t = bundle["topology"]
        lines.append("")
        lines.append("topology")
        for key in ("b1", "b1_c", "b1_c_bullet", "e", "s", "l", "dim_h1c_tilde"):
            lines.append(f"  {key:<14}{t.get(key)}")
    for j, spec in enumerate(bundle.get("spectrum", [])):
        lines.append("")
        lines.append(f"spectrum, end {j} (complete up to {spec['cutoff']})")
        for value, mult in spec["entries"]:
            lines.append(f"  {str(value):>14}  x{mult}")
    for scan in bundle.get("weights", []):
        lines.append("")
        lines.append(f"exceptional weights in [{scan['a']}, {scan['b']}]")
        for per_end in scan["per_end"]:
            for row in per_end:
                lines.append(f"  end {row['end']}  gamma={_scalar(row['gamma']):<28} mult={row['mult']}")
    for rep in bundle.get("fredholm", []):
        lines.append("")
        lines.append(f"Fredholm at {[_scalar(x) for x in rep['weights']]}")
        lines.append(f"  ker={_scalar(rep['ker_dim'])}  coker={_scalar(rep['coker_dim'])}  index={_scalar(rep['index'])}  target={rep['target']}")
        lines += _trail(rep)
    for rep in bundle.get("stability", []):
        lines.append("")
        lines.append(f"stability, end {rep['end_index']}: {'stable' if rep['stable'] else 'not stable'}")
        for g, exp, obs in zip((0, 1, 2), rep["expected_counts"], rep["observed_counts"]):
            lines.append(f"  γ={g}: expected {exp} observed {obs}")
        for x in rep["extra_exceptional"]:
            lines.append(f"  extra γ={_scalar(x['gamma'])} mult {x['mult']}")
    for rep in bundle.get("dim", []):
        lines.append("")
        lines.append(f"moduli ({rep['case']}, {rep['window'] or 'no ends'})")
        lines.append(f"  dim_I={rep['dim_I']}  dim_O={_scalar(rep['dim_O'])}  moduli_dim={_scalar(rep['moduli_dim'])}")
        lines += _trail(rep)
    return "\n".join(lines) + "\n"


def _trail(rep: dict) -> list[str]:
    out = [f"    | {step}" for step in rep.get("formula_trail", [])]
    out += [f"    ! {c}" for c in rep.get("caveats", [])]
    return out


def emit_report(bundle: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return emit_json(bundle)
    if fmt == "csv":
        return emit_csv(bundle)
    if fmt == "table":
        return emit_table(bundle)
    raise ValueError(f"unknown format {fmt!r}")
