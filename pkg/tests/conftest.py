"""Shared fixtures: named orderings, random ordering draws, model files."""

import json

import numpy as np
import pytest

from pdm_polar import Ordering, make_ambiguity


@pytest.fixture
def named_orderings():
    return {o.token: o.ambiguity() for o in Ordering}


@pytest.fixture
def rng():
    return np.random.default_rng(20101029)


def random_ordering(rng, scale=2.0):
    """A valid random triple: alpha, gamma free, beta fixed by the sum rule."""
    alpha = float(rng.uniform(-scale, scale))
    gamma = float(rng.uniform(-scale, scale))
    return make_ambiguity(alpha, -1.0 - alpha - gamma, gamma)


def write_model(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


@pytest.fixture
def coulomb_model_file(tmp_path):
    return write_model(
        tmp_path,
        "coulomb.json",
        {
            "f": "flat",
            "potential": {"coulomb_like": {"omega": 1.0 / 3.0}},
            "ordering": "bendaniel-duke",
        },
    )


@pytest.fixture
def oscillator_model_file(tmp_path):
    return write_model(
        tmp_path,
        "oscillator.json",
        {
            "f": "flat",
            "potential": {"oscillator_like": {"a": 1.0, "d": 4.0}},
            "ordering": "bendaniel-duke",
        },
    )


@pytest.fixture
def flat_model_file(tmp_path):
    return write_model(
        tmp_path,
        "flat.json",
        {"f": "flat", "ordering": "bendaniel-duke"},
    )


@pytest.fixture
def cos2_model_file(tmp_path):
    return write_model(
        tmp_path,
        "cos2.json",
        {
            "f": "cos2",
            "potential": {"power_well": {"v0": 1.0, "k": 1}},
            "ordering": "mustafa-mazharimousavi",
        },
    )
