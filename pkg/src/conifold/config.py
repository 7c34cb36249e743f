"""Job configuration: schema, link resolution and the batch driver."""

from __future__ import annotations

import copy
import json
import os
from fractions import Fraction
from pathlib import Path

import jsonschema

from . import fredholm as fh
from . import moduli as md
from . import spectra as sp
from .errors import InputError, StructuralError
from .fredholm import ConeEndSpec, ConifoldModel
from .report import SCHEMA_VERSION, to_jsonable
from .topology import AC, CS, assemble_topology, load_pair, topology_from_betti
from .weights import DEFAULT_MATCH_TOL, as_weight, exceptional_set, required_cutoff

__all__ = ["CONFIG_SCHEMA", "COMPUTATIONS", "validate_config", "load_config", "set_pointer", "build_model", "run_job"]

COMPUTATIONS = ("spectrum", "weights", "fredholm", "stability", "dim", "topology")

_number = {"oneOf": [{"type": "number"}, {"type": "string", "pattern": r"^\s*-?\d+(\.\d*)?(/\d+)?\s*$"}]}

_link = {
    "type": "object",
    "required": ["type"],
    "properties": {
        "type": {"enum": ["sphere", "flat_torus", "harvey_lawson", "circle", "product", "mesh", "explicit"]},
        "cutoff": _number,
        "gram": {"type": "array", "minItems": 1, "items": {"type": "array", "items": _number}},
        "radius": _number,
        "factors": {"type": "array", "minItems": 2, "maxItems": 2, "items": {"$ref": "#/$defs/link"}},
        "path": {"type": "string"},
        "count": {"type": "integer", "minimum": 1},
        "cluster_tol": {"type": "number", "exclusiveMinimum": 0},
        "entries": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "array", "prefixItems": [_number, {"type": "integer", "minimum": 1}], "minItems": 2, "maxItems": 2},
        },
        "dim_link": {"type": "integer", "minimum": 1},
        "exact": {"type": "boolean"},
    },
    "allOf": [
        {"if": {"properties": {"type": {"const": "flat_torus"}}}, "then": {"required": ["gram"]}},
        {"if": {"properties": {"type": {"const": "product"}}}, "then": {"required": ["factors"]}},
        {"if": {"properties": {"type": {"const": "mesh"}}}, "then": {"required": ["path"]}},
        {"if": {"properties": {"type": {"const": "explicit"}}}, "then": {"required": ["entries", "cutoff"]}},
    ],
    "additionalProperties": False,
}

CONFIG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$defs": {"link": _link},
    "type": "object",
    "required": ["m", "ends", "compute"],
    "properties": {
        "m": {"type": "integer", "minimum": 3},
        "ends": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["kind", "link"],
                "properties": {
                    "kind": {"enum": [CS, AC]},
                    "rate": _number,
                    "sym_dim": {"type": "integer", "minimum": 0},
                    "link": {"$ref": "#/$defs/link"},
                },
                "additionalProperties": False,
            },
        },
        "topology": {
            "type": "object",
            "properties": {
                "complex": {"type": "string"},
                "betti": {
                    "type": "object",
                    "properties": {k: {"type": "integer", "minimum": 0} for k in ("b1", "b1_c", "b1_c_bullet", "b0")},
                    "required": ["b1"],
                    "additionalProperties": False,
                },
            },
            "minProperties": 1,
            "maxProperties": 1,
            "additionalProperties": False,
        },
        "compute": {"type": "array", "minItems": 1, "uniqueItems": True, "items": {"enum": list(COMPUTATIONS)}},
        "scan": {
            "type": "array",
            "items": {"type": "object", "required": ["a", "b"], "properties": {"a": _number, "b": _number}, "additionalProperties": False},
        },
        "rates": {"type": "array", "items": {"type": "array", "items": _number}},
        "match_tol": {"type": "number", "exclusiveMinimum": 0},
        "format": {"enum": ["table", "json", "csv"]},
    },
    "additionalProperties": False,
}


class ConfigError(StructuralError):
    """Schema violation; ``diagnostics`` holds ``(json_pointer, message)`` pairs."""

    def __init__(self, diagnostics: list[tuple[str, str]]):
        self.diagnostics = diagnostics
        super().__init__("; ".join(f"{p}: {m}" for p, m in diagnostics))


def _pointer(path) -> str:
    return "/" + "/".join(str(p).replace("~", "~0").replace("/", "~1") for p in path) if path else "/"


def validate_config(cfg: dict) -> None:
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(cfg), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errors:
        raise ConfigError([(_pointer(e.absolute_path), e.message) for e in errors])


def set_pointer(doc: dict, pointer: str, value) -> dict:
    """Return a copy of ``doc`` with the JSON-pointer location set to ``value``."""
    doc = copy.deepcopy(doc)
    if not pointer.startswith("/"):
        raise InputError(f"override path {pointer!r} must be a JSON pointer starting with '/'")
    parts = [p.replace("~1", "/").replace("~0", "~") for p in pointer[1:].split("/")]
    node = doc
    for p in parts[:-1]:
        try:
            node = node[int(p)] if isinstance(node, list) else node.setdefault(p, {})
        except (ValueError, IndexError) as exc:
            raise InputError(f"override path {pointer!r} does not exist") from exc
    last = parts[-1]
    if isinstance(node, list):
        try:
            node[int(last)] = value
        except (ValueError, IndexError) as exc:
            raise InputError(f"override path {pointer!r} does not exist") from exc
    else:
        node[last] = value
    return doc


def load_config(path) -> tuple[dict, Path]:
    path = Path(path)
    try:
        cfg = json.loads(path.read_text())
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise StructuralError(f"config {path} is not valid JSON: {exc}") from exc
    return cfg, path.resolve().parent


def _match_tol(cfg: dict) -> float:
    if "match_tol" in cfg:
        return float(cfg["match_tol"])
    env = os.environ.get("CONIFOLD_MATCH_TOL")
    if env:
        try:
            tol = float(env)
        except ValueError as exc:
            raise InputError(f"CONIFOLD_MATCH_TOL={env!r} is not a number") from exc
        if not tol > 0:
            raise InputError("CONIFOLD_MATCH_TOL must be positive")
        return tol
    return DEFAULT_MATCH_TOL


def _link_dim(link: dict, m: int) -> int:
    t = link["type"]
    if t in ("sphere", "harvey_lawson", "mesh"):
        return m - 1
    if t == "flat_torus":
        return len(link["gram"])
    if t == "circle":
        return 1
    if t == "product":
        return sum(_link_dim(f, m) for f in link["factors"])
    return int(link.get("dim_link", m - 1))


def _spectrum(link: dict, m: int, cutoff, base: Path) -> sp.LinkSpectrum:
    t = link["type"]
    if "cutoff" in link and t not in ("explicit", "mesh"):
        cutoff = as_weight(link["cutoff"])
    if t == "sphere":
        return sp.sphere_spectrum(m, cutoff)
    if t == "harvey_lawson":
        return sp.flat_torus_spectrum(sp.harvey_lawson_gram(m), cutoff)
    if t == "flat_torus":
        return sp.flat_torus_spectrum([[as_weight(x) for x in row] for row in link["gram"]], cutoff)
    if t == "circle":
        return sp.circle_spectrum(cutoff, as_weight(link.get("radius", 1)))
    if t == "product":
        a, b = (_spectrum(f, _link_dim(f, m) + 1, cutoff, base) for f in link["factors"])
        return sp.product_spectrum(a, b, cutoff)
    if t == "explicit":
        exact = link.get("exact", all(isinstance(v, (int, str)) for v, _ in link["entries"]))
        return sp.explicit_spectrum(
            [tuple(e) for e in link["entries"]], _link_dim(link, m), as_weight(link["cutoff"]) if exact else float(link["cutoff"]), True, exact
        )
    if t == "mesh":
        from .mesh import mesh_spectrum, read_off

        path = Path(link["path"])
        path = path if path.is_absolute() else base / path
        try:
            mesh = read_off(path)
        except OSError as exc:
            raise InputError(f"cannot read mesh {path}: {exc}") from exc
        return mesh_spectrum(mesh, int(link.get("count", 30)), float(link.get("cluster_tol", 0.05)))
    raise StructuralError(f"unknown link type {t!r}")


def _needed_cutoff(cfg: dict, rate_vectors: list, j: int):
    """Largest eigenvalue any requested computation can consult on end ``j``."""
    m = cfg["m"]
    need = Fraction(2 * m)
    points = [vec[j] for vec in rate_vectors]
    for s in cfg.get("scan", [{"a": 0, "b": 2}]):
        points += [as_weight(s["a"]), as_weight(s["b"])]
    for x in points:
        c = required_cutoff(x, x, m)
        if c > need:
            need = c
    return need


def build_model(cfg: dict, base: Path | str = ".", with_topology: bool = True) -> ConifoldModel | None:
    """Resolve every end's spectrum and the topology; None for a compact job."""
    base = Path(base)
    m = cfg["m"]
    ends_cfg = cfg["ends"]
    if not ends_cfg:
        return None
    rate_vectors = _rate_vectors(cfg)
    ends = []
    for j, e in enumerate(ends_cfg):
        dim = _link_dim(e["link"], m)
        if dim != m - 1:
            raise StructuralError(f"end {j}: link of dimension {dim} in a conifold of dimension {m}")
        spec = _spectrum(e["link"], m, _needed_cutoff(cfg, rate_vectors, j), base)
        ends.append(ConeEndSpec(e["kind"], spec, e.get("rate"), e.get("sym_dim")))
    topo = _topology(cfg, base, [e["kind"] for e in ends_cfg]) if with_topology else None
    return ConifoldModel(m, ends, topo)


def _rate_vectors(cfg: dict) -> list[tuple]:
    out = []
    if all("rate" in e for e in cfg["ends"]) and cfg["ends"]:
        out.append(tuple(as_weight(e["rate"]) for e in cfg["ends"]))
    for vec in cfg.get("rates", []):
        if len(vec) != len(cfg["ends"]):
            raise InputError(f"rate vector {vec} has {len(vec)} components for {len(cfg['ends'])} ends")
        out.append(tuple(as_weight(x) for x in vec))
    return out


def _topology(cfg: dict, base: Path, kinds: list[str]):
    t = cfg.get("topology")
    if t is None:
        return None
    if "complex" in t:
        path = Path(t["complex"])
        path = path if path.is_absolute() else base / path
        try:
            pair = load_pair(path)
        except OSError as exc:
            raise InputError(f"cannot read complex {path}: {exc}") from exc
        tags = sorted(c.tag for c in pair.components)
        if tags != sorted(kinds):
            raise StructuralError(f"complex boundary tags {tags} do not match end kinds {sorted(kinds)}")
        return assemble_topology(pair)
    return topology_from_betti(t["betti"], kinds)


def run_job(cfg: dict, base: Path | str = ".", compute=None) -> dict:
    """Validate ``cfg`` and run the requested computations into a JSON-ready bundle."""
    validate_config(cfg)
    compute = list(cfg["compute"] if compute is None else compute)
    tol = _match_tol(cfg)
    m = cfg["m"]
    bundle: dict = {
        "schema_version": SCHEMA_VERSION,
        "m": m,
        "match_tol": tol,
        "ends": [
            {"index": j, "kind": e["kind"], "link": e["link"]["type"], "rate": e.get("rate"), "sym_dim": e.get("sym_dim")}
            for j, e in enumerate(cfg["ends"])
        ],
    }
    model = build_model(cfg, base, with_topology=bool({"dim", "topology"} & set(compute)))
    if model is None:
        if set(compute) - {"dim", "topology"}:
            raise InputError("a configuration without ends supports only dim and topology")
        topo = _topology(cfg, Path(base), [])
        if topo is None:
            raise InputError("a compact job needs a topology section")
        if "topology" in compute:
            bundle["topology"] = to_jsonable(topo)
        if "dim" in compute:
            bundle["dim"] = [to_jsonable(md.dim_compact(topo.b1))]
        return to_jsonable(bundle)

    rate_vectors = _rate_vectors(cfg)
    if "topology" in compute:
        if model.topology is None:
            raise InputError("topology requested but the configuration has no topology section")
        bundle["topology"] = to_jsonable(model.topology)
    if "spectrum" in compute:
        bundle["spectrum"] = [to_jsonable(e.spectrum) for e in model.ends]
    if "weights" in compute:
        scans = []
        for s in cfg.get("scan", [{"a": 0, "b": 2}]):
            a, b = as_weight(s["a"]), as_weight(s["b"])
            ex = exceptional_set(model.pairs(), a, b)
            scans.append({"a": to_jsonable(a), "b": to_jsonable(b), "per_end": to_jsonable(ex.per_end), "total": ex.total()})
        bundle["weights"] = scans
    if "fredholm" in compute:
        if not rate_vectors:
            raise InputError("fredholm needs a rate on every end or a 'rates' list")
        bundle["fredholm"] = [to_jsonable(fh.laplacian_dims(model, w, tol)) for w in rate_vectors]
    if "stability" in compute:
        bundle["stability"] = [
            to_jsonable(md.stability_check(e, m, j, tol)) for j, e in enumerate(model.ends) if e.kind == CS
        ]
    if "dim" in compute:
        w = model.default_rates()
        if model.s and model.l:
            cs = [w[j] for j in model.indices(CS)]
            ac = [w[j] for j in model.indices(AC)]
            rep = md.dim_csac(model, cs, ac, tol)
        elif model.s:
            rep = md.dim_cs(model, w, tol)
        else:
            rep = md.dim_ac(model, w, tol)
        bundle["dim"] = [to_jsonable(rep)]
    return to_jsonable(bundle)
