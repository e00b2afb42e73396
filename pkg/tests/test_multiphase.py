import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from partstab import (NEUTRAL, STABLE, UNSTABLE, ArcInterface,
                      MultiphaseConfig, case_modes, classify, classify_config,
                      disconnected_witness, lagrange_multipliers, load_config,
                      mean_curvature_residual, reconstruct_eigenfunction,
                      reduce_and_classify, weighted_J)
from partstab.multiphase import verdict_meet


def tri_config(connected=True):
    """Three unit arcs with signed curvatures summing to zero."""
    arcs = (ArcInterface(1.0, 1.0, 1.0, 1.0),
            ArcInterface(1.0, 1.0, 1.0, 1.0),
            ArcInterface(0.0, 1.0, 1.0, 1.0))
    return MultiphaseConfig(arcs, (1.0, -1.0, 0.0), connected)


def test_config_validation():
    with pytest.raises(ValueError):
        MultiphaseConfig((), (), True)
    arc = ArcInterface(1.0, 1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        MultiphaseConfig((arc,), (1.0, 2.0), True)
    with pytest.raises(ValueError):
        MultiphaseConfig((arc,), (0.5,), True)  # |kappa_signed| != kappa


def test_load_config_roundtrip(tmp_path):
    data = {"connected": True,
            "interfaces": [{"gamma": 2.0, "kappa": 1.0, "kappa_signed": -1.0,
                            "length": 3.0, "sigma": [0.5, 0.0]}]}
    for source in (data, json.dumps(data)):
        cfg = load_config(source)
        assert cfg.interfaces[0].gamma == 2.0
        assert cfg.kappa_signed == (-1.0,)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(data))
    assert load_config(path).connected


def test_load_config_reports_schema_paths():
    bad = {"connected": True,
           "interfaces": [{"gamma": 1.0, "kappa": 1.0, "kappa_signed": 1.0,
                           "length": -2.0, "sigma": [0.0, 0.0]}]}
    with pytest.raises(ValueError, match=r"/interfaces/0/length"):
        load_config(bad)
    with pytest.raises(ValueError, match="connected"):
        load_config({"interfaces": []})


def test_mean_curvature_residual():
    assert mean_curvature_residual(tri_config()) == 0.0
    cfg = MultiphaseConfig((ArcInterface(1.0, 1.0, 0.0, 0.0, gamma=2.0),),
                           (1.0,), True)
    assert mean_curvature_residual(cfg) == pytest.approx(2.0)


def test_lagrange_multipliers_chain():
    cfg = tri_config()
    lams = lagrange_multipliers(cfg)
    assert lams[0] == 0.0
    for j in range(len(lams) - 1):
        step = cfg.interfaces[j].gamma * cfg.kappa_signed[j]
        assert lams[j + 1] - lams[j] == pytest.approx(step)


def test_lagrange_multipliers_rejects_incompatible():
    cfg = MultiphaseConfig((ArcInterface(1.0, 1.0, 0.0, 0.0),), (1.0,), True)
    with pytest.raises(ValueError, match="inconsistent"):
        lagrange_multipliers(cfg)


def test_weighted_J_zero_variation():
    cfg = tri_config()
    fs = [np.zeros(101) for _ in cfg.interfaces]
    assert weighted_J(cfg, fs) == 0.0
    with pytest.raises(ValueError):
        weighted_J(cfg, fs[:2])


def test_weighted_J_rejects_nonzero_mean():
    cfg = tri_config()
    fs = [np.ones(101), np.zeros(101), np.zeros(101)]
    with pytest.raises(ValueError, match="mean"):
        weighted_J(cfg, fs)


def test_weighted_J_single_interface_eigenvalue():
    # one flat-boundary interface with weight gamma: J = gamma * mu
    arc = ArcInterface(1.0, 2.0, 0.0, 0.0, gamma=2.0)
    cfg = MultiphaseConfig((arc,), (1.0,), True)
    mode = case_modes(arc, "I")[0]
    f = reconstruct_eigenfunction(mode, arc, 4001)
    assert weighted_J(cfg, [f], check_normalization=True) == pytest.approx(
        2.0 * mode.mu, rel=1e-4)


def test_weighted_J_joint_normalization():
    # two identical interfaces sharing the mass equally: J = sum(gamma) mu / 2
    arc1 = ArcInterface(1.0, 2.0, 0.0, 0.0, gamma=1.0)
    arc2 = ArcInterface(1.0, 2.0, 0.0, 0.0, gamma=3.0)
    cfg = MultiphaseConfig((arc1, arc2), (1.0, -1.0), True)
    mode = case_modes(arc1, "I")[0]
    f = reconstruct_eigenfunction(mode, arc1, 4001) / math.sqrt(2.0)
    assert weighted_J(cfg, [f, f], check_normalization=True) == pytest.approx(
        (1.0 + 3.0) * mode.mu / 2.0, rel=1e-4)


def test_verdict_meet_lattice():
    assert verdict_meet([STABLE, STABLE]) == STABLE
    assert verdict_meet([STABLE, NEUTRAL]) == NEUTRAL
    assert verdict_meet([NEUTRAL, UNSTABLE, STABLE]) == UNSTABLE


def test_reduce_matches_per_interface_meet():
    cfg = tri_config()
    verdict = reduce_and_classify(cfg)
    parts = [classify(a) for a in cfg.interfaces]
    assert verdict.classification == verdict_meet([p.classification for p in parts])
    assert verdict.mu1 == pytest.approx(min(p.mu1 for p in parts))
    assert len(verdict.parts) == 3


def test_reduce_reports_unstable_witness():
    arcs = (ArcInterface(1.0, 0.5, 1.0, 1.0),   # stable
            ArcInterface(1.0, 4.0, 1.0, 1.0))   # unstable
    cfg = MultiphaseConfig(arcs, (1.0, -1.0), True)
    verdict = reduce_and_classify(cfg)
    assert verdict.classification == UNSTABLE
    assert verdict.evidence == "crit1-interval"
    assert verdict.witness is not None


def test_reduce_rejects_disconnected():
    with pytest.raises(ValueError):
        reduce_and_classify(tri_config(connected=False))
    with pytest.raises(ValueError):
        disconnected_witness(tri_config(connected=True))


def test_disconnected_witness_reference_value():
    # three unit arcs, kappa = sigma = 1: each term 3/1, total -9
    arcs = (ArcInterface(1.0, 1.0, 1.0, 1.0),) * 3
    cfg = MultiphaseConfig(arcs, (1.0, -1.0, 1.0), False)
    value, desc = disconnected_witness(cfg)
    assert value == -9.0
    assert "1/L_i" in desc
    assert classify_config(cfg).classification == UNSTABLE
    assert classify_config(cfg).evidence == "disconnected-witness"


def test_disconnected_flat_segments_are_neutral():
    # all curvatures vanish: the witness gives exactly zero
    arcs = (ArcInterface(0.0, 1.0, 0.0, 0.0), ArcInterface(0.0, 2.0, 0.0, 0.0))
    cfg = MultiphaseConfig(arcs, (0.0, 0.0), False)
    value, _ = disconnected_witness(cfg)
    assert value == 0.0
    assert classify_config(cfg).classification == NEUTRAL


@settings(max_examples=25, deadline=None)
@given(st.lists(
    st.tuples(st.floats(0.0, 2.0), st.floats(0.2, 8.0),
              st.floats(0.0, 2.0), st.floats(0.0, 2.0), st.booleans()),
    min_size=1, max_size=3))
def test_reduction_lattice_property(rows):
    arcs = tuple(ArcInterface(k, L, s1, s2) for k, L, s1, s2, _ in rows)
    signed = tuple(-k if neg else k for (k, *_, neg) in rows)
    cfg = MultiphaseConfig(arcs, signed, True)
    verdict = classify_config(cfg)
    expected = verdict_meet([classify(a).classification for a in arcs])
    assert verdict.classification == expected
