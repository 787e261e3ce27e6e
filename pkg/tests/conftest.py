"""Shared fixtures: problem factories and the default tolerances."""

from dataclasses import replace
import json

import numpy as np
import pytest

from StefanExact import config_parser
from StefanExact.modules.stefan_model import (
    PhaseProps,
    StefanProblem,
    h0_threshold,
)


def build_problem(
    alpha=0., gamma=1., t_i=1., t_inf=1., h0=None, k_l=1., d_l=1., k_s=1.,
    d_s=1., multiple=3.
):
    """Return a problem; h0 defaults to multiple times the threshold."""
    problem = StefanProblem(
        alpha=alpha, gamma=gamma, t_i=t_i, t_inf=t_inf, h0=1.,
        liquid=PhaseProps(k=k_l, d=d_l), solid=PhaseProps(k=k_s, d=d_s))
    if h0 is None:
        h0 = multiple*h0_threshold(problem)
    return replace(problem, h0=h0)


def random_problem(rng, multiple=3., alpha_range=(.2, 3.5)):
    """alpha uniform, the other parameters log-uniform in [0.5, 2]."""
    values = np.exp(rng.uniform(np.log(.5), np.log(2.), 8))
    gamma, t_i, t_inf, k_l, d_l, k_s, d_s = (float(v) for v in values[:7])
    return build_problem(
        alpha=float(rng.uniform(*alpha_range)), gamma=gamma, t_i=t_i,
        t_inf=t_inf, k_l=k_l, d_l=d_l, k_s=k_s, d_s=d_s, multiple=multiple)


@pytest.fixture
def make_problem():
    return build_problem


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def tolerances():
    return config_parser.Config("config.txt").get_tolerances()


@pytest.fixture
def write_config(tmp_path):
    """Write a JSON run configuration and return its path."""
    def writer(document, name="run.json"):
        path = tmp_path/name
        path.write_text(json.dumps(document), encoding="utf-8")
        return path
    return writer


@pytest.fixture
def unit_document():
    """alpha = 0 and every parameter 1, h0 = 10."""
    return {
        "problem": {
            "alpha": 0, "gamma": 1, "t_i": 1, "t_inf": 1, "h0": 10,
            "liquid": {"k": 1, "d": 1}, "solid": {"k": 1, "d": 1},
        },
    }
