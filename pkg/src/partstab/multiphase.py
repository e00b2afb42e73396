"""Multiphase composition: compatibility, reduction, and the disconnected witness.

A connected multiphase partitioning reduces to independent two-phase
problems, so its verdict is the lattice meet of the per-interface verdicts
under Stable > Neutral > Unstable.  Disconnected partitionings in strictly
convex domains are unstable, witnessed by the constant-per-interface
variation f_i = 1/L_i.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .geometry import ArcInterface
from .oracle import J_evaluate
from .spectrum import NEUTRAL, STABLE, UNSTABLE, StabilityVerdict, classify

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["connected", "interfaces"],
    "additionalProperties": False,
    "properties": {
        "connected": {"type": "boolean"},
        "interfaces": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["gamma", "kappa", "kappa_signed", "length", "sigma"],
                "additionalProperties": False,
                "properties": {
                    "gamma": {"type": "number", "exclusiveMinimum": 0},
                    "kappa": {"type": "number", "minimum": 0},
                    "kappa_signed": {"type": "number"},
                    "length": {"type": "number", "exclusiveMinimum": 0},
                    "sigma": {
                        "type": "array",
                        "items": {"type": "number", "minimum": 0},
                        "minItems": 2,
                        "maxItems": 2,
                    },
                },
            },
        },
    },
}


@dataclass(frozen=True)
class MultiphaseConfig:
    """Interfaces plus the signed curvatures entering the compatibility identity.

    The unsigned kappa on each ArcInterface feeds the spectral systems;
    kappa_signed carries the orientation bookkeeping for sum(gamma*kappa) = 0.
    """

    interfaces: tuple[ArcInterface, ...]
    kappa_signed: tuple[float, ...]
    connected: bool

    def __post_init__(self):
        if not self.interfaces:
            raise ValueError("at least one interface is required")
        if len(self.kappa_signed) != len(self.interfaces):
            raise ValueError("kappa_signed must match interfaces in length")
        for i, (arc, ks) in enumerate(zip(self.interfaces, self.kappa_signed)):
            if not math.isclose(abs(ks), arc.kappa, rel_tol=1e-9, abs_tol=1e-12):
                raise ValueError(
                    f"interface {i}: |kappa_signed|={abs(ks)} disagrees with kappa={arc.kappa}")


def load_config(source) -> MultiphaseConfig:
    """Build a MultiphaseConfig from a dict, JSON string, or file path.

    Schema violations are reported with JSON-pointer-style paths.
    """
    import jsonschema

    if isinstance(source, (str, Path)) and Path(str(source)).exists():
        data = json.loads(Path(source).read_text())
    elif isinstance(source, str):
        data = json.loads(source)
    else:
        data = source
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        msgs = ["/" + "/".join(str(p) for p in e.absolute_path) + ": " + e.message
                for e in errors]
        raise ValueError("invalid multiphase config: " + "; ".join(msgs))
    arcs, signed = [], []
    for item in data["interfaces"]:
        arcs.append(ArcInterface(item["kappa"], item["length"],
                                 item["sigma"][0], item["sigma"][1], item["gamma"]))
        signed.append(float(item["kappa_signed"]))
    return MultiphaseConfig(tuple(arcs), tuple(signed), bool(data["connected"]))


def mean_curvature_residual(config: MultiphaseConfig) -> float:
    """Signed residual sum(gamma_i * kappa_i_signed); ~0 for minimality candidates."""
    return float(sum(arc.gamma * ks
                     for arc, ks in zip(config.interfaces, config.kappa_signed)))


def lagrange_multipliers(config: MultiphaseConfig, tol: float = 1e-8) -> np.ndarray:
    """Phase multipliers in the gauge lambda_1 = 0, from the chain recursion
    lambda_{j+1} = lambda_j + gamma_j kappa_j around the interface cycle.

    The cycle closes exactly when the mean-curvature identity holds; a
    residual above tolerance means the configuration is not minimal.
    """
    residual = mean_curvature_residual(config)
    scale = max(1.0, *(arc.gamma * arc.kappa for arc in config.interfaces))
    if abs(residual) > tol * scale:
        raise ValueError(
            f"inconsistent configuration: sum(gamma*kappa_signed) = {residual:.3e} != 0")
    lams = [0.0]
    for arc, ks in zip(config.interfaces[:-1], config.kappa_signed[:-1]):
        lams.append(lams[-1] + arc.gamma * ks)
    return np.array(lams)


def weighted_J(config: MultiphaseConfig, fs: Sequence[np.ndarray],
               check_normalization: bool = False, tol: float = 1e-6) -> float:
    """Weighted second-variation form sum(gamma_i * J_i(f_i)).

    Each f_i is sampled on a uniform grid over its own interface and must
    have (trapezoid) zero mean; joint normalization sum int f_i^2 = 1 is
    checked only when requested.
    """
    if len(fs) != len(config.interfaces):
        raise ValueError(f"expected {len(config.interfaces)} sample vectors, got {len(fs)}")
    total = 0.0
    sq_mass = 0.0
    for i, (arc, f) in enumerate(zip(config.interfaces, fs)):
        f = np.asarray(f, dtype=float)
        grid = np.linspace(0.0, arc.length, f.size)
        mean = float(np.trapezoid(f, grid)) / arc.length
        scale = max(1.0, float(np.abs(f).max(initial=0.0)))
        if abs(mean) > tol * scale:
            raise ValueError(f"interface {i}: variation mean {mean:.3e} exceeds tolerance")
        total += arc.gamma * J_evaluate(arc, f)
        sq_mass += float(np.trapezoid(f * f, grid))
    if check_normalization and abs(sq_mass - 1.0) > tol:
        raise ValueError(f"joint normalization sum int f^2 = {sq_mass:.6g} != 1")
    return total


_RANK = {STABLE: 0, NEUTRAL: 1, UNSTABLE: 2}


def verdict_meet(classes: Sequence[str]) -> str:
    """Lattice meet under Stable > Neutral > Unstable."""
    return max(classes, key=_RANK.__getitem__)


def reduce_and_classify(config: MultiphaseConfig, tol: float = 1e-8) -> StabilityVerdict:
    """Classify a connected configuration interface by interface."""
    if not config.connected:
        raise ValueError("disconnected configuration: use disconnected_witness")
    parts = tuple(classify(arc, tol=tol) for arc in config.interfaces)
    combined = verdict_meet([p.classification for p in parts])
    mus = [p.mu1 for p in parts if p.mu1 is not None]
    mu1 = min(mus) if mus else None
    if combined == UNSTABLE:
        bad = next(p for p in parts if p.classification == UNSTABLE)
        return StabilityVerdict(UNSTABLE, mu1, bad.evidence, bad.witness, parts)
    evidence = "spectrum-positive" if combined == STABLE else parts[0].evidence
    return StabilityVerdict(combined, mu1, evidence, None, parts)


def disconnected_witness(config: MultiphaseConfig) -> tuple[float, str]:
    """Second variation of the constant-per-interface volume-preserving
    variation f_i = 1/L_i:

        delta2A = -sum gamma_i / L_i^2 * (kappa_i^2 L_i + sigma_i1 + sigma_i2)

    Strictly negative whenever any curvature is positive, which is the
    instability witness for disconnected partitionings.
    """
    if config.connected:
        raise ValueError("connected configuration has no disconnection witness")
    total = 0.0
    for arc in config.interfaces:
        total -= arc.gamma / arc.length ** 2 * (
            arc.kappa ** 2 * arc.length + arc.sigma1 + arc.sigma2)
    desc = ("constant variation f_i = 1/L_i on each interface; "
            f"delta2A = {total:.12g}")
    return total, desc


def classify_config(config: MultiphaseConfig, tol: float = 1e-8) -> StabilityVerdict:
    """Dispatch on connectivity: reduction for connected configurations,
    the constant-variation witness for disconnected ones."""
    if config.connected:
        return reduce_and_classify(config, tol=tol)
    value, _ = disconnected_witness(config)
    if value < -tol:
        return StabilityVerdict(UNSTABLE, None, "disconnected-witness", None)
    # every term vanished: flat segments on flat walls, strict convexity fails
    return StabilityVerdict(NEUTRAL, None, "disconnected-witness", None)
