"""Formal Laurent series engine: convergence-aware bilateral arithmetic,
inverse-series solvers, powers and composition, and annulus analysis.

Series are described by JSON-style spec dicts, e.g.
``{"kind": "finite", "params": {"coeffs": [[0, 1, 0], [1, -1, 0]]}}``;
every function returns the engine's report as a plain dict.
"""

import json as _json

try:
    from . import _core
except ImportError:  # running from a build tree with _core on sys.path
    import _core

InvalidInput = _core.InvalidInput
CapExceeded = _core.CapExceeded


def _spec(s):
    if s is None:
        return ""
    if isinstance(s, str):
        return s
    return _json.dumps(s)


def classify(spec):
    """Closed-form inverse classification (constant/arithmetic/geometric/monomial)."""
    return _json.loads(_core.classify(_spec(spec)))


def invert(spec, method="auto", window=32, depths=(), split=None, max_terms=4096, tol=1e-10):
    """Inverse-series solver; returns classification, witness and evidence."""
    return _json.loads(
        _core.invert(_spec(spec), method, window, list(depths), _spec(split), max_terms, tol))


def multiply(a, b, lo=-16, hi=16, max_terms=4096, tol=1e-10):
    return _json.loads(_core.multiply(_spec(a), _spec(b), lo, hi, max_terms, tol))


def power(spec, k, lo=-16, hi=16, multinomial=False, finv=None, max_terms=4096, tol=1e-10):
    return _json.loads(
        _core.power(_spec(spec), k, lo, hi, multinomial, _spec(finv), max_terms, tol))


def compose(g, f, finv=None, lo=-16, hi=16, max_terms=4096, tol=1e-10):
    return _json.loads(_core.compose(_spec(g), _spec(f), _spec(finv), lo, hi, max_terms, tol))


def check_rd(f, g, h, hinv=None, lo=-8, hi=8, max_terms=4096, tol=1e-10):
    """Right-distributive-law probe: (f o h)(g o h) vs (fg) o h."""
    return _json.loads(
        _core.check_rd(_spec(f), _spec(g), _spec(h), _spec(hinv), lo, hi, max_terms, tol))


def check_cr(f, g, ginv=None, lo=-8, hi=8, max_terms=4096, tol=1e-10):
    """Chain-rule probe: (f o g)' vs (f' o g) g'."""
    return _json.loads(_core.check_cr(_spec(f), _spec(g), _spec(ginv), lo, hi, max_terms, tol))


def radii(spec, window=128):
    return _json.loads(_core.radii(_spec(spec), window))


def boundary(spec, a=None, b=None, k_max=8, max_terms=4096, tol=1e-10):
    pa = [a[0], a[1]] if a is not None else []
    pb = [b[0], b[1]] if b is not None else []
    return _json.loads(_core.boundary(_spec(spec), pa, pb, k_max, max_terms, tol))


def bilateral_sum(spec, max_terms=4096, tol=1e-10):
    return _json.loads(_core.bilateral_sum(_spec(spec), max_terms, tol))


def eval_coeff(spec, n):
    """Coefficient at index n as a (re, im) tuple."""
    return tuple(_core.eval_coeff(_spec(spec), n))
