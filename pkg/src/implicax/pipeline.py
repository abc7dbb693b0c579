"""End-to-end implicitization: analyze, pick a strand degree, compute the
determinant (or minors gcd, or resultant), extract the reduced equation and
the map degree, and verify by evaluation.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass

from .arith import Poly, normalize, perfect_power_decompose, unit_multiple_of
from .errors import ConsistencyError, HypothesisViolation, ImplicaxError
from .geometry import BasePointReport, analyze_parameterization
from .linalg import DEFAULT_SEED
from .resultants import curve_implicitize_resultant
from .strands import (
    check_rank_profile,
    complex_determinant,
    gcd_of_maximal_minors,
    z_strand,
)

__all__ = ["ImplicitResult", "analyze", "implicitize", "verify"]

METHODS = ("det-complex", "gcd-minors", "resultant")


@dataclass
class ImplicitResult:
    """Implicit equation package: determinant = unit * reduced ** exponent."""

    determinant: Poly
    reduced: Poly
    exponent: int
    nu_used: int
    method: str
    report: BasePointReport
    verified: bool
    minor_sizes: list | None = None
    dehomogenized: Poly | None = None  # resultant method only

    @property
    def degree(self):
        return self.determinant.total_degree()


def analyze(param, run_syzygetic=None, syzygetic_nu_max=None):
    """Base-point diagnostics; never raises on degenerate input."""
    return analyze_parameterization(
        param, run_syzygetic=run_syzygetic, syzygetic_nu_max=syzygetic_nu_max
    )


def verify(reduced, param, trials=20, seed=DEFAULT_SEED):
    """Evaluation oracle: reduced(f(x)) == 0 at `trials` random points.

    Points with f identically zero are rejected (resampled); failing to find
    enough valid points is an error.
    """
    if trials < 1:
        raise ImplicaxError("need at least one trial")
    ring = param.ring
    field = ring.field
    rng = random.Random("%s:verify" % (seed,))
    x_names = ring.names[: ring.nx]
    t_names = param.t_names()
    done = 0
    attempts = 0
    while done < trials:
        attempts += 1
        if attempts > 60 * trials:
            raise ImplicaxError(
                "could not sample %d points off the base locus" % trials
            )
        if field.char:
            pt = {nm: field.random(rng) for nm in x_names}
        else:
            pt = {nm: rng.randint(-9, 9) for nm in x_names}
        vals = [p.evaluate(pt) for p in param.polys]
        if all(v.is_zero() for v in vals):
            continue
        sub = {nm: v for nm, v in zip(t_names, vals)}
        if not reduced.evaluate(sub).is_zero():
            return False
        done += 1
    return True


def implicitize(
    param,
    nu=None,
    method="det-complex",
    seed=DEFAULT_SEED,
    allow_sub_bound=False,
    check_eval=20,
    run_syzygetic=False,
):
    """Compute the implicit equation of the closed image of f.

    Default strand degree is the proven bound (n-2)(d-1); smaller degrees
    sometimes work but must be requested with allow_sub_bound.  The result
    carries the full diagnostics report and the verification status.
    """
    if method not in METHODS:
        raise ImplicaxError("unknown method %r (choose from %s)" % (method, METHODS))
    param.require_map_shape()
    report = analyze(param, run_syzygetic=run_syzygetic)
    if report.base_locus_dim > 0:
        raise HypothesisViolation(
            "positive-dimensional base locus: the strand theorems need "
            "isolated base points"
        )
    if not report.generically_finite:
        raise HypothesisViolation(
            "map is not generically finite (predicted degree 0)"
        )
    bound = report.nu_bound
    if nu is None:
        nu_used = bound
    else:
        nu_used = nu
        if nu_used < bound:
            if not allow_sub_bound:
                raise ImplicaxError(
                    "degree %d is below the proven bound %d; pass "
                    "allow_sub_bound to try it anyway" % (nu_used, bound)
                )
            warnings.warn(
                "strand degree %d below the proven bound %d: the method may "
                "fail or give a wrong-degree result" % (nu_used, bound),
                stacklevel=2,
            )
    minor_sizes = None
    dehom = None
    if method == "resultant":
        out = curve_implicitize_resultant(param)
        det = out.homogeneous
        dehom = out.dehomogenized
    else:
        strand = z_strand(param, nu_used)
        if method == "det-complex":
            cd = complex_determinant(strand, seed=seed)
            det = cd.value
            minor_sizes = cd.minor_sizes()
        else:
            check_rank_profile(strand, seed=seed)
            det = gcd_of_maximal_minors(strand, seed=seed)
    det = normalize(det)
    predicted = report.predicted_degree
    if det.total_degree() != predicted:
        raise ConsistencyError(
            "determinant degree %d does not match the predicted degree %d"
            % (det.total_degree(), predicted)
        )
    reduced, exponent = perfect_power_decompose(det)
    if not unit_multiple_of(reduced**exponent, det):
        raise ConsistencyError("power decomposition failed to reproduce the determinant")
    if reduced.total_degree() * exponent != predicted:
        raise ConsistencyError(
            "deg(reduced) * exponent = %d * %d does not match predicted %d"
            % (reduced.total_degree(), exponent, predicted)
        )
    verified = False
    if check_eval:
        if not verify(reduced, param, trials=check_eval, seed=seed):
            raise ConsistencyError(
                "evaluation oracle failed: the computed equation does not "
                "vanish on the parameterization"
            )
        verified = True
    return ImplicitResult(
        determinant=det,
        reduced=reduced,
        exponent=exponent,
        nu_used=nu_used,
        method=method,
        report=report,
        verified=verified,
        minor_sizes=minor_sizes,
        dehomogenized=dehom,
    )
