"""Weighted Bergman spaces on the unit disc: weights, kernels, Toeplitz and
composition operators.

Weights, measures and symbols are given as dicts in the same schema as the
command-line configuration files, e.g. ``{"family": "standard", "alpha": 1}``.
Reports come back as dicts.
"""

import json

from . import _bergman
from ._bergman import ConfigError, DomainError

__all__ = [
    "ConfigError",
    "DomainError",
    "weight_density",
    "omega_hat",
    "omega_star",
    "moment",
    "box_mass",
    "classify",
    "kernel_eval",
    "kernel_diag",
    "toeplitz_matrix",
    "berezin",
    "criteria",
    "composition_matrix",
    "schatten_composition",
    "schatten_norm",
    "suite_names",
    "run_suite",
]


def _spec(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def weight_density(weight, r):
    return _bergman.weight_density(_spec(weight), r)


def omega_hat(weight, r):
    return _bergman.omega_hat(_spec(weight), r)


def omega_star(weight, r):
    return _bergman.omega_star(_spec(weight), r)


def moment(weight, n):
    return _bergman.moment(_spec(weight), n)


def box_mass(weight, modulus):
    return _bergman.box_mass(_spec(weight), modulus)


def classify(weight):
    return json.loads(_bergman.classify(_spec(weight)))


def kernel_eval(weight, z, zeta, order=0):
    """Returns (value, truncation error estimate, terms used)."""
    return _bergman.kernel_eval(_spec(weight), complex(z), complex(zeta), order)


def kernel_diag(weight, z):
    return _bergman.kernel_diag(_spec(weight), complex(z))


def toeplitz_matrix(measure, weight, N):
    return _bergman.toeplitz_matrix(_spec(measure), _spec(weight), N)


def berezin(measure, weight, z):
    return _bergman.berezin(_spec(measure), _spec(weight), complex(z))


def criteria(measure, weight, p, q, r=0.5):
    return json.loads(_bergman.criteria(_spec(measure), _spec(weight), p, q, r))


def composition_matrix(symbol, weight, N):
    return _bergman.composition_matrix(_spec(symbol), _spec(weight), N)


def schatten_composition(symbol, weight, p, N=128):
    return json.loads(_bergman.schatten_composition(_spec(symbol), _spec(weight), p, N))


def schatten_norm(matrix, p):
    return json.loads(_bergman.schatten_norm(matrix, p))


def suite_names():
    return list(_bergman.suite_names()) + ["geometry"]


def run_suite(name):
    return json.loads(_bergman.run_suite(name))
