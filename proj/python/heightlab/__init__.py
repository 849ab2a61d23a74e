"""Heights, Weil functions and exceptional-set experiments over number fields."""

import json
from fractions import Fraction

from . import _core
from ._core import HeightlabError, commands, count_points

__all__ = [
    "HeightlabError",
    "commands",
    "count_points",
    "delta_sigma",
    "enumerate_points",
    "fw_weights",
    "gamma_beta",
    "h0_twist",
    "log_height",
    "run_experiment",
    "simplex_select",
    "subspace_cover",
]


def _text(q):
    return str(Fraction(q))


def run_experiment(command, config, precision=0, jobs=1):
    """Run a harness command on a config dict; returns (report dict, csv text, exit code)."""
    text = config if isinstance(config, str) else json.dumps(config)
    report, csv, code = _core.run_experiment(command, text, precision, jobs)
    return json.loads(report), csv, code


def enumerate_points(n, bound):
    return [tuple(p) for p in _core.enumerate_points(n, bound)]


def log_height(point, digits=40):
    """Midpoint and radius of the enclosure of h(x)."""
    return _core.log_height(list(point), digits)


def subspace_cover(points, exact=True, max_subspaces=0):
    """Cover by proper linear subspaces: (equations per subspace, assignment, fell_back, sorted points)."""
    eqs, assignment, fell_back, pts = _core.subspace_cover([list(p) for p in points], exact, max_subspaces)
    eqs = [[[Fraction(a) for a in row] for row in sub] for sub in eqs]
    return eqs, list(assignment), fell_back, [tuple(p) for p in pts]


def fw_weights(n, d):
    eps, c = _core.fw_weights(n, [[_text(x) for x in row] for row in d])
    return Fraction(eps), [[Fraction(x) for x in row] for row in c]


def simplex_select(b, c):
    return [Fraction(x) for x in _core.simplex_select([_text(x) for x in b], _text(c))]


def h0_twist(n, m, ell):
    return int(_core.h0_twist(n, m, ell))


def gamma_beta(n, m_max):
    gamma, sup, ratios = _core.gamma_beta(n, m_max)
    return Fraction(gamma), Fraction(sup), [Fraction(r) for r in ratios]


def delta_sigma(betas, b):
    return [tuple(int(a) for a in t) for t in _core.delta_sigma([_text(x) for x in betas], b)]
