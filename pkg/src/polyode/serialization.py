"""File formats: system/instance JSON, trajectory CSV, JSON reports.

Numbers are written with 17 significant digits so that doubles round-trip
bit-exactly.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .constraints import SolvableInstance
from .errors import ValidationError
from .polysys import PolynomialSystem
from .trajectory import Trajectory


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def system_to_dict(system: PolynomialSystem) -> dict:
    return {
        "n": system.n,
        "m": system.m,
        "coefficients": [
            {"eq": eq, "exponents": list(index), "re": value.real, "im": value.imag}
            for (eq, index), value in system.coefficients.items()
        ],
    }


def system_from_dict(data: dict) -> PolynomialSystem:
    try:
        n = int(data["n"])
        m = int(data["m"])
        entries = data["coefficients"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed system document: {exc}") from exc
    coeffs = {}
    for entry in entries:
        try:
            eq = int(entry["eq"])
            exponents = tuple(int(e) for e in entry["exponents"])
            value = complex(float(entry["re"]), float(entry["im"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed coefficient entry {entry!r}: {exc}") from exc
        if (eq, exponents) in coeffs:
            raise ValidationError(f"duplicate coefficient key ({eq}, {exponents})")
        coeffs[(eq, exponents)] = value
    return PolynomialSystem(n, m, coeffs)


def write_system_file(system: PolynomialSystem, path) -> None:
    Path(path).write_text(json.dumps(system_to_dict(system), indent=2) + "\n")


def parse_system_file(path) -> PolynomialSystem:
    return system_from_dict(_load_json(path))


def instance_to_dict(instance: SolvableInstance) -> dict:
    doc = system_to_dict(instance.system)
    doc["z0"] = [[z.real, z.imag] for z in instance.z0]
    doc["k"] = [instance.k.real, instance.k.imag]
    return doc


def instance_from_dict(data: dict, tol: float = 1e-10) -> SolvableInstance:
    system = system_from_dict(data)
    try:
        z0 = np.array([complex(re, im) for re, im in data["z0"]], dtype=complex)
        k = complex(data["k"][0], data["k"][1])
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ValidationError(f"malformed instance document: {exc}") from exc
    return SolvableInstance(system, z0, k, tol=tol)


def write_instance_file(instance: SolvableInstance, path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(instance), indent=2) + "\n")


def parse_instance_file(path, tol: float = 1e-10) -> SolvableInstance:
    return instance_from_dict(_load_json(path), tol=tol)


def _load_json(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: expected a JSON object")
    return data


def write_trajectory_csv(traj: Trajectory, path, periodic: bool = False) -> None:
    """Write a trajectory; columns are (t, re_z1, im_z1, ...) or, for the
    periodized real form, (t, x1, y1, ...)."""
    n = traj.dimension
    if periodic:
        header = ["t"] + [c for i in range(1, n + 1) for c in (f"x{i}", f"y{i}")]
    else:
        header = ["t"] + [c for i in range(1, n + 1) for c in (f"re_z{i}", f"im_z{i}")]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for t, state in zip(traj.times, traj.states):
            row = [_fmt(t)]
            for z in state:
                row.extend([_fmt(z.real), _fmt(z.imag)])
            writer.writerow(row)


def read_trajectory_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Read a trajectory CSV back into (times, complex states)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if not header or header[0] != "t" or len(header) % 2 == 0:
            raise ValidationError(f"{path}: unexpected trajectory header {header!r}")
        rows = [[float(x) for x in row] for row in reader if row]
    if not rows:
        raise ValidationError(f"{path}: empty trajectory")
    data = np.array(rows)
    times = data[:, 0]
    states = data[:, 1::2] + 1j * data[:, 2::2]
    return times, states


def write_report(report: dict, path) -> None:
    Path(path).write_text(json.dumps(report, indent=2) + "\n")
