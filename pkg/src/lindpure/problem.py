"""JSON problem descriptions and report serialization.

Complex numbers travel as ``[re, im]`` pairs; a matrix is a list of rows of
such pairs.  A problem file looks like::

    {
      "dim": 2,
      "generators": [
        {"hamiltonian": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],
         "lindblad_ops": [[[[0, 0], [1, 0]], [[0, 0], [0, 0]]]]}
      ],
      "controls": [ ... ],                       # optional control Hamiltonians
      "schedule": [{"duration": 0.5, "controls": [0.3]}],   # optional
      "parameters": {"t": 1.0, "n_steps": [16, 32], "tol": 1e-10,
                     "seed": 0, "max_dim": null, "j": 0}
    }
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np

from .gkls import ControlSchedule, GklsGenerator

HERMITIAN_TOL = 1e-8
KNOWN_PARAMETERS = {"t", "n_steps", "tol", "seed", "max_dim", "j"}


class SpecError(ValueError):
    """Raised when a problem description cannot be parsed."""


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    dim: int
    generators: tuple[GklsGenerator, ...]
    controls: tuple[np.ndarray, ...] = ()
    schedule: ControlSchedule | None = None
    parameters: dict = field(default_factory=dict)
    sha256: str = ""


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(obj, what: str = "matrix") -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise SpecError(f"{what}: entries must be [re, im] number pairs") from exc
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise SpecError(f"{what}: expected a square matrix of [re, im] pairs, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise SpecError(f"{what}: non-finite entry")
    return arr[..., 0] + 1j * arr[..., 1]


def canonical_hash(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def parse_spec(text: str) -> ProblemSpec:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"malformed JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise SpecError("problem description must be a JSON object")
    return spec_from_dict(raw)


def spec_from_dict(raw: dict) -> ProblemSpec:
    try:
        dim = int(raw["dim"])
        gens_raw = raw["generators"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError("problem needs an integer 'dim' and a 'generators' list") from exc
    if dim < 1 or not isinstance(gens_raw, list):
        raise SpecError("'dim' must be positive and 'generators' a list")

    def square(obj, what):
        m = matrix_from_json(obj, what)
        if m.shape != (dim, dim):
            raise SpecError(f"{what}: shape {m.shape} does not match dim {dim}")
        return m

    gens = []
    for i, g in enumerate(gens_raw):
        if not isinstance(g, dict) or "hamiltonian" not in g:
            raise SpecError(f"generator {i}: needs a 'hamiltonian'")
        h = square(g["hamiltonian"], f"generator {i} hamiltonian")
        if np.abs(h - h.conj().T).max() > HERMITIAN_TOL:
            raise SpecError(f"generator {i}: Hamiltonian is not Hermitian")
        ops = tuple(
            square(l, f"generator {i} lindblad op {a}")
            for a, l in enumerate(g.get("lindblad_ops", []))
        )
        gens.append(GklsGenerator((h + h.conj().T) / 2, ops))

    controls = []
    for k, c in enumerate(raw.get("controls", []) or []):
        h = square(c, f"control {k}")
        if np.abs(h - h.conj().T).max() > HERMITIAN_TOL:
            raise SpecError(f"control {k}: Hamiltonian is not Hermitian")
        controls.append((h + h.conj().T) / 2)

    schedule = None
    if raw.get("schedule") is not None:
        try:
            segs = [(s["duration"], tuple(s.get("controls", []))) for s in raw["schedule"]]
            schedule = ControlSchedule(tuple(segs))
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecError(f"schedule: {exc}") from exc
        if schedule.segments and schedule.n_controls != len(controls):
            raise SpecError("schedule control count does not match 'controls'")

    params = raw.get("parameters", {}) or {}
    if not isinstance(params, dict):
        raise SpecError("'parameters' must be an object")
    unknown = set(params) - KNOWN_PARAMETERS
    if unknown:
        raise SpecError(f"unknown parameters: {sorted(unknown)}")

    return ProblemSpec(
        dim=dim,
        generators=tuple(gens),
        controls=tuple(controls),
        schedule=schedule,
        parameters=dict(params),
        sha256=canonical_hash(raw),
    )


def generator_to_json(g: GklsGenerator) -> dict:
    return {
        "hamiltonian": matrix_to_json(g.hamiltonian),
        "lindblad_ops": [matrix_to_json(l) for l in g.lindblad_ops],
    }


def spec_to_dict(dim: int, gens, parameters: dict | None = None) -> dict:
    out = {"dim": dim, "generators": [generator_to_json(g) for g in gens]}
    if parameters:
        out["parameters"] = parameters
    return out
