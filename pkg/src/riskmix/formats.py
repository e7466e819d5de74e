"""Reading distributions, joint laws and spectral measures from files.

Distribution JSON::

    {"atoms": [{"x": -10.0, "p": 0.1}, {"x": 0.0, "p": 0.5}, {"x": 5.0, "p": 0.4}]}

Sample CSV: one real per line, with an optional ``value`` header.

Joint JSON: ``{"probs": [...], "values": [[...], ...]}``.
Spectral JSON: ``{"points": [{"alpha": 0.2, "weight": 0.5}, ...]}``.
"""

from __future__ import annotations

import json
from pathlib import Path

from .coupling import JointScenarios
from .distribution import DiscreteDistribution, from_samples, make_discrete
from .errors import ParseError
from .spectral import SpectralMeasure, make_spectral


def _read_json(path) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a JSON object")
    return data


def _real(x, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"{where}: expected a number, got {x!r}")
    return float(x)


def distribution_from_json(data: dict, where: str = "<json>") -> DiscreteDistribution:
    atoms = data.get("atoms")
    if not isinstance(atoms, list):
        raise ParseError(f"{where}: missing 'atoms' list")
    pairs = []
    for i, atom in enumerate(atoms):
        if not isinstance(atom, dict) or "x" not in atom or "p" not in atom:
            raise ParseError(f"{where}: atom {i} needs 'x' and 'p'")
        pairs.append((_real(atom["x"], f"{where} atom {i}"), _real(atom["p"], f"{where} atom {i}")))
    return make_discrete(pairs)


def read_samples(path) -> list[float]:
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    rows = [ln.strip() for ln in lines if ln.strip()]
    if rows and rows[0].lower() == "value":
        rows = rows[1:]
    out = []
    for n, row in enumerate(rows, 1):
        try:
            out.append(float(row))
        except ValueError:
            raise ParseError(f"{path}: line {n} is not a real number: {row!r}") from None
    return out


def load_distribution(path) -> DiscreteDistribution:
    """JSON atoms for ``*.json`` files, sample CSV otherwise."""
    if str(path).lower().endswith(".json"):
        return distribution_from_json(_read_json(path), str(path))
    return from_samples(read_samples(path))


def load_joint(path) -> JointScenarios:
    data = _read_json(path)
    probs, values = data.get("probs"), data.get("values")
    if not isinstance(probs, list) or not isinstance(values, list):
        raise ParseError(f"{path}: joint law needs 'probs' and 'values' lists")
    if not all(isinstance(row, list) for row in values):
        raise ParseError(f"{path}: 'values' must be a list of rows")
    return JointScenarios(
        tuple(_real(p, str(path)) for p in probs),
        tuple(tuple(_real(v, str(path)) for v in row) for row in values),
    )


def load_spectral(path) -> SpectralMeasure:
    data = _read_json(path)
    points = data.get("points")
    if not isinstance(points, list):
        raise ParseError(f"{path}: missing 'points' list")
    pairs = []
    for i, pt in enumerate(points):
        if not isinstance(pt, dict) or "alpha" not in pt or "weight" not in pt:
            raise ParseError(f"{path}: point {i} needs 'alpha' and 'weight'")
        pairs.append((_real(pt["alpha"], str(path)), _real(pt["weight"], str(path))))
    return make_spectral(pairs)


def write_json(path, obj) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")
