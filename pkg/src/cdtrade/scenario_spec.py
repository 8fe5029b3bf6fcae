"""JSON scenario specifications: schema, parsing and canonical serialization.

Tables are row-major with explicit axis labels::

    {"axes": [{"name": "S", "labels": [0, 1]}, ...], "values": [...]}

Kernels split their axes into ``inputs`` and ``outputs``; feedback maps give
``inputs``, an ``output`` axis and integer ``values`` indexing into it.
"""

from __future__ import annotations

import copy
import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources

import jsonschema
import numpy as np

from .prob import DeterministicMap, DistortionFn, FiniteDist, JointTable, Kernel

__all__ = [
    "SCHEMA_VERSION",
    "KINDS",
    "SpecError",
    "ScenarioSpec",
    "load_spec",
    "builtin_spec",
    "builtin_names",
    "apply_override",
    "build_joint",
    "build_kernel",
    "build_map",
    "build_distortion",
    "build_dist",
]

SCHEMA_VERSION = 1
KINDS = ("p2p", "p2p-causal", "bc", "mac", "qg-p2p", "qg-bc", "qg-mac", "radar",
         "isac-md", "isac-mu", "binary-bc", "double-usage")


class SpecError(ValueError):
    """The document does not satisfy the scenario schema."""


_AXIS = {
    "type": "object",
    "required": ["name", "labels"],
    "properties": {"name": {"type": "string"}, "labels": {"type": "array", "minItems": 1}},
    "additionalProperties": False,
}
_NUMS = {"type": "array", "items": {"type": "number"}}
_GRID = {"type": "array", "items": {"type": "number"}, "minItems": 1}
_POS = {"type": "number", "exclusiveMinimum": 0}
_NONNEG = {"type": "number", "minimum": 0}
_JOINT = {
    "type": "object",
    "required": ["axes", "values"],
    "properties": {"axes": {"type": "array", "items": _AXIS, "minItems": 1}, "values": _NUMS},
    "additionalProperties": False,
}
_KERNEL = {
    "type": "object",
    "required": ["inputs", "outputs", "values"],
    "properties": {
        "inputs": {"type": "array", "items": _AXIS, "minItems": 1},
        "outputs": {"type": "array", "items": _AXIS, "minItems": 1},
        "values": _NUMS,
    },
    "additionalProperties": False,
}
_MAP = {
    "oneOf": [
        {"type": "null"},
        {
            "type": "object",
            "required": ["inputs", "output", "values"],
            "properties": {
                "inputs": {"type": "array", "items": _AXIS, "minItems": 1},
                "output": _AXIS,
                "values": {"type": "array", "items": {"type": "integer", "minimum": 0}},
            },
            "additionalProperties": False,
        },
    ]
}
_DIST = {
    "oneOf": [
        {"const": "hamming"},
        {
            "type": "object",
            "required": ["values"],
            "properties": {"values": {"type": "array", "items": _NUMS, "minItems": 1},
                           "recon": {"type": "array", "minItems": 1}},
            "additionalProperties": False,
        },
    ]
}
_PMF = {
    "type": "object",
    "required": ["labels", "values"],
    "properties": {"labels": {"type": "array", "minItems": 1}, "values": _NUMS},
    "additionalProperties": False,
}


def _obj(required, props):
    return {"type": "object", "required": list(required), "properties": props, "additionalProperties": False}


_P2P = _obj(["pss_t", "channel", "D_grid"], {
    "pss_t": _JOINT, "channel": _KERNEL, "feedback": _MAP, "distortion": _DIST, "D_grid": _GRID,
})
PARAMETER_SCHEMAS = {
    "p2p": _P2P,
    "p2p-causal": _P2P,
    "bc": _obj(["pss_t", "channel", "n_samples"], {
        "pss_t": _JOINT, "channel": _KERNEL, "feedback": _MAP, "d1": _DIST, "d2": _DIST,
        "n_samples": {"type": "integer", "minimum": 1},
        "u_size": {"type": "integer", "minimum": 1},
        "v1_size": {"type": "integer", "minimum": 1},
        "v2_size": {"type": "integer", "minimum": 1},
    }),
    "mac": _obj(["psss", "channel", "n_samples"], {
        "psss": _JOINT, "channel": _KERNEL, "feedback1": _MAP, "feedback2": _MAP, "distortion": _DIST,
        "n_samples": {"type": "integer", "minimum": 1},
        "D": {"type": "number"},
    }),
    "qg-p2p": _obj(["P", "Q", "N", "N_T", "D_grid"], {
        "P": _NONNEG, "Q": _POS, "N": _POS, "N_T": {"type": "array", "items": _NONNEG, "minItems": 1},
        "D_grid": _GRID,
    }),
    "qg-bc": _obj(["P", "Q", "N1", "N2", "N_T", "D2", "alpha_grid", "d1sq_grid"], {
        "P": _NONNEG, "Q": _POS, "N1": _POS, "N2": _POS, "N_T": _NONNEG, "D2": _POS,
        "alpha_grid": _GRID, "d1sq_grid": _GRID,
    }),
    "qg-mac": _obj(["P1", "P2", "Q", "N", "N_T", "d1sq", "d2sq", "alpha1_grid", "alpha2_grid"], {
        "P1": _NONNEG, "P2": _NONNEG, "Q": _POS, "N": _POS, "N_T": _NONNEG,
        "d1sq": _NONNEG, "d2sq": _NONNEG, "alpha1_grid": _GRID, "alpha2_grid": _GRID,
    }),
    "radar": _obj(["prior", "echo"], {"prior": _PMF, "echo": _KERNEL, "distortion": _DIST}),
    "isac-md": _obj(["prior", "echo", "downlink", "D_grid"], {
        "prior": _PMF, "echo": _KERNEL, "downlink": _KERNEL, "distortion": _DIST, "D_grid": _GRID,
    }),
    "isac-mu": _obj(["prior", "channel", "D_grid"], {
        "prior": _PMF, "channel": _KERNEL, "distortion": _DIST, "D_grid": _GRID,
        "u_size": {"type": "integer", "minimum": 2},
    }),
    "binary-bc": _obj(["p1", "p2", "alpha_grid"], {
        "p1": {"type": "number", "minimum": 0, "maximum": 0.5},
        "p2": {"type": "number", "minimum": 0, "maximum": 0.5},
        "alpha_grid": _GRID,
    }),
    "double-usage": _obj([], {"n_grid": {"type": "integer", "minimum": 2}}),
}

SOLVER_SCHEMA = _obj([], {
    "v_size": {"type": "integer", "minimum": 1},
    "u_size": {"type": "integer", "minimum": 1},
    "n_starts": {"type": "integer", "minimum": 1},
    "seed": {"type": "integer", "minimum": 0},
    "tol": _POS,
    "max_iter": {"type": "integer", "minimum": 1},
})

SPEC_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "kind", "name", "parameters"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "kind": {"enum": list(KINDS)},
        "name": {"type": "string", "pattern": "^[A-Za-z0-9_.-]+$"},
        "description": {"type": "string"},
        "parameters": {"type": "object"},
        "solver": SOLVER_SCHEMA,
    },
    "additionalProperties": False,
}


def _validate(doc: dict) -> None:
    try:
        jsonschema.validate(doc, SPEC_SCHEMA)
        jsonschema.validate(doc["parameters"], PARAMETER_SCHEMAS[doc["kind"]])
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SpecError(f"{where}: {exc.message}") from None


@dataclass
class ScenarioSpec:
    kind: str
    name: str
    parameters: dict
    solver: dict = field(default_factory=dict)
    description: str = ""

    def to_dict(self) -> dict:
        doc = {"schema_version": SCHEMA_VERSION, "kind": self.kind, "name": self.name}
        if self.description:
            doc["description"] = self.description
        doc["parameters"] = copy.deepcopy(self.parameters)
        if self.solver:
            doc["solver"] = copy.deepcopy(self.solver)
        return doc

    def to_json(self) -> str:
        """Canonical text: sorted keys, two-space indent, trailing newline."""
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def sha256(self) -> str:
        return hashlib.sha256(self.to_json().encode("utf-8")).hexdigest()

    @classmethod
    def from_dict(cls, doc: dict) -> "ScenarioSpec":
        if not isinstance(doc, dict):
            raise SpecError("spec must be a JSON object")
        _validate(doc)
        return cls(doc["kind"], doc["name"], copy.deepcopy(doc["parameters"]),
                   copy.deepcopy(doc.get("solver", {})), doc.get("description", ""))

    @classmethod
    def from_json(cls, text: str) -> "ScenarioSpec":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid JSON: {exc}") from None
        return cls.from_dict(doc)


def builtin_names() -> list[str]:
    root = resources.files("cdtrade") / "specs"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def builtin_spec(name: str) -> ScenarioSpec:
    path = resources.files("cdtrade") / "specs" / f"{name}.json"
    if not path.is_file():
        raise SpecError(f"no builtin spec {name!r}; available: {', '.join(builtin_names())}")
    return ScenarioSpec.from_json(path.read_text(encoding="utf-8"))


def load_spec(ref: str) -> ScenarioSpec:
    """A file path, or the name of a builtin spec."""
    import os

    if os.path.exists(ref):
        with open(ref, encoding="utf-8") as fh:
            return ScenarioSpec.from_json(fh.read())
    return builtin_spec(ref)


def apply_override(spec: ScenarioSpec, assignment: str) -> ScenarioSpec:
    """``key=value`` on the document; dotted keys descend, values parse as JSON when possible.

    Bare keys refer to ``parameters`` (``P=10``); ``solver.seed=3`` and
    ``parameters.P=10`` address sections explicitly.
    """
    if "=" not in assignment:
        raise SpecError(f"override {assignment!r} is not key=value")
    key, raw = assignment.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    doc = spec.to_dict()
    path = key.strip().split(".")
    if path[0] not in ("parameters", "solver", "name", "description", "kind"):
        path = ["parameters"] + path
    node = doc
    for p in path[:-1]:
        node = node.setdefault(p, {})
        if not isinstance(node, dict):
            raise SpecError(f"override {key!r} descends into a non-object")
    node[path[-1]] = value
    return ScenarioSpec.from_dict(doc)


# ---------------------------------------------------------------------------
# Builders


def _axes(items):
    return tuple((a["name"], tuple(a["labels"])) for a in items)


def _shaped(values, shape, what):
    arr = np.asarray(values, dtype=float)
    if arr.size != int(np.prod(shape)):
        raise SpecError(f"{what}: expected {int(np.prod(shape))} values for shape {shape}, got {arr.size}")
    return arr.reshape(shape)


def build_joint(obj) -> JointTable:
    axes = _axes(obj["axes"])
    return JointTable(axes, _shaped(obj["values"], tuple(len(l) for _, l in axes), "joint table"))


def build_kernel(obj) -> Kernel:
    ins, outs = _axes(obj["inputs"]), _axes(obj["outputs"])
    shape = tuple(len(l) for _, l in ins + outs)
    return Kernel(tuple(l for _, l in ins), tuple(l for _, l in outs), _shaped(obj["values"], shape, "kernel"))


def build_map(obj, inputs, default_output=(0,)) -> DeterministicMap:
    """``None`` gives the constant map over ``inputs``."""
    if obj is None:
        return DeterministicMap.constant(inputs, default_output)
    ins = _axes(obj["inputs"])
    shape = tuple(len(l) for _, l in ins)
    table = np.asarray(obj["values"], dtype=np.intp)
    if table.size != int(np.prod(shape)):
        raise SpecError(f"feedback map: expected {int(np.prod(shape))} values, got {table.size}")
    return DeterministicMap(tuple(l for _, l in ins), tuple(obj["output"]["labels"]), table.reshape(shape))


def build_distortion(obj, states) -> DistortionFn:
    if obj is None or obj == "hamming":
        return DistortionFn.hamming(states)
    return DistortionFn(np.asarray(obj["values"], dtype=float), obj.get("recon"))


def build_dist(obj) -> FiniteDist:
    return FiniteDist(tuple(obj["labels"]), np.asarray(obj["values"], dtype=float))
