"""Positivity checks for kernels, Laplace transforms and Levy-Khintchine representations.

Report-producing functions return plain dicts (the same JSON shapes the
command-line tool emits). Library errors raise LkposError, whose ``kind``
attribute names the error category.
"""

import json as _json

from . import _lkpos
from ._lkpos import LkposError, __version__, catalog_names, e_lambda, f_lambda, gram_minus, gram_plus

__all__ = [
    "LkposError",
    "__version__",
    "bernstein_check",
    "catalog_check",
    "catalog_entry",
    "catalog_eval",
    "catalog_names",
    "cnd_check",
    "completely_monotone_check",
    "e_lambda",
    "f_lambda",
    "gram_minus",
    "gram_plus",
    "laplace",
    "psd_check",
    "reflection_negative_check",
    "reflection_positive_check",
    "run_cli",
    "synth",
]

_INF = float("inf")


def _encode(obj):
    return obj if isinstance(obj, str) else _json.dumps(obj)


def catalog_entry(name, **params):
    return _json.loads(_lkpos.catalog_entry(name, params))


def catalog_eval(name, ts, **params):
    return _lkpos.catalog_eval(name, params, list(ts))


def catalog_check(name, **params):
    """Runs every known and refuted flag of a catalog entry through its checker."""
    return _json.loads(_lkpos.catalog_check(name, params))


def psd_check(matrix, points=None, tol=None):
    pts = list(points) if points is not None else [float(i) for i in range(len(matrix))]
    return _json.loads(_lkpos.psd_check(matrix, pts, tol))


def cnd_check(matrix, points=None, tol=None):
    pts = list(points) if points is not None else [float(i) for i in range(len(matrix))]
    return _json.loads(_lkpos.cnd_check(matrix, pts, tol))


def completely_monotone_check(f, grid, lo=0.0, hi=_INF):
    return _json.loads(_lkpos.completely_monotone_check(f, list(grid), lo, hi))


def bernstein_check(f, grid, lo=0.0, hi=_INF):
    return _json.loads(_lkpos.bernstein_check(f, list(grid), lo, hi))


def reflection_positive_check(f, a, n=None):
    args = (f, a) if n is None else (f, a, n)
    return _json.loads(_lkpos.reflection_positive_check(*args))


def reflection_negative_check(f, a, hs=None, n=None):
    kwargs = {}
    if hs is not None:
        kwargs["hs"] = list(hs)
    if n is not None:
        kwargs["n"] = n
    return _json.loads(_lkpos.reflection_negative_check(f, a, **kwargs))


def synth(rep, ts, form="", tol=1e-10):
    """Evaluates a representation (dict or JSON text) at each t."""
    return _lkpos.synth(_encode(rep), list(ts), form, tol)


def laplace(measure, t, tol=1e-12):
    return _lkpos.laplace(_encode(measure), t, tol)


def run_cli(*args):
    """Runs the command-line tool in-process; returns (exit_code, stdout, stderr)."""
    return _lkpos.run_cli([str(a) for a in args])
