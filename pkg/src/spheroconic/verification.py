"""Randomised numerical checks of the auxiliary inequalities.

Each check draws parameters under the stated hypotheses, evaluates the
inequality in vectorised form and records the number of violations and
the first counterexample, if any.  Strict inequalities are tested without
slack; non-strict ones allow a rounding margin relative to the size of the
terms involved.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .uniqueness import find_v0
from .variation import abc_arrays, bernstein_arrays, bernstein_poly

NU_MAX = 50.0
NU_MIN = 1e-4
MIN_GAP = 1e-6
ROUND_TOL = 1e-12


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one randomised inequality check.

    ``worst`` is the largest value of the quantity required to be
    negative (or non-positive), scaled by the size of its terms.
    """

    name: str
    hypothesis: str
    samples: int
    violations: int
    worst: float
    counterexample: dict = None

    @property
    def passed(self):
        return self.violations == 0

    def as_dict(self):
        return {
            "name": self.name, "hypothesis": self.hypothesis, "samples": self.samples,
            "violations": self.violations, "worst": self.worst, "passed": self.passed,
            "counterexample": self.counterexample,
        }


@dataclass(frozen=True)
class LemmaReport:
    seed: int
    samples: int
    checks: tuple = field(default_factory=tuple)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def as_dict(self):
        return {"seed": self.seed, "samples": self.samples, "passed": self.passed,
                "checks": [c.as_dict() for c in self.checks]}

    def lines(self):
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            yield f"{status} {c.name}: {c.violations}/{c.samples} violations, worst {c.worst:.3e}"


def _first(mask, params):
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        return None
    i = int(idx[0])
    return {k: float(np.asarray(v)[i]) for k, v in params.items()}


def _result(name, hypothesis, value, strict, scale, params):
    """``value`` must be ``< 0`` (strict) or ``<= ROUND_TOL * scale``."""
    value = np.asarray(value, dtype=float)
    scale = np.maximum(np.asarray(scale, dtype=float), np.finfo(float).tiny)
    bad = value >= 0.0 if strict else value > ROUND_TOL * scale
    bad |= ~np.isfinite(value)
    return CheckResult(name, hypothesis, int(value.size), int(bad.sum()),
                       float(np.max(value / scale)), _first(bad, params))


def sample_pairs(rng, n, lower=0.0, upper=NU_MAX):
    """Pairs ``upper >= nu01 > nu02 > lower`` with a relative gap of at least ``MIN_GAP``.

    Half of the samples are log-uniform so small values and narrow gaps
    are represented.
    """
    lo = max(lower, NU_MIN)
    k = n // 2
    u = rng.uniform(lo, upper, size=(n - k, 2))
    w = np.exp(rng.uniform(math.log(lo), math.log(upper), size=(k, 2)))
    x = np.vstack([u, w])
    nu01, nu02 = x.max(axis=1), x.min(axis=1)
    narrow = nu01 - nu02 < MIN_GAP * nu01
    nu01 = np.where(narrow, nu02 * (1.0 + 2.0 * MIN_GAP), nu01)
    return nu01, nu02


def sample_nested(rng, nu01, nu02):
    """``nu01 > nu11 >= nu12 > nu02``."""
    s = np.sort(rng.uniform(0.0, 1.0, size=(len(nu01), 2)), axis=1)
    span = nu01 - nu02
    nu12 = nu02 + span * np.maximum(s[:, 0], 1e-9)
    nu11 = nu02 + span * np.minimum(s[:, 1], 1.0 - 1e-9)
    return nu11, np.minimum(nu12, nu11)


def sample_axes(rng, n, midpoint=False):
    """Unit vectors with ``r3^2 >= r1^2``, or ``r3^2 >= r1^2 + r2^2`` if ``midpoint``."""
    r = rng.normal(size=(n, 3))
    r /= np.linalg.norm(r, axis=1)[:, None]
    if midpoint:
        bad = r[:, 2] ** 2 < r[:, 0] ** 2 + r[:, 1] ** 2
        # rejection sampling
        while np.any(bad):
            m = int(bad.sum())
            t = rng.normal(size=(m, 3))
            r[bad] = t / np.linalg.norm(t, axis=1)[:, None]
            bad = r[:, 2] ** 2 < r[:, 0] ** 2 + r[:, 1] ** 2
    else:
        swap = r[:, 2] ** 2 < r[:, 0] ** 2
        r[swap] = r[swap][:, [2, 1, 0]]
    return r[:, 0], r[:, 1], r[:, 2]


def check_lemma3(rng, n):
    nu01, nu02 = sample_pairs(rng, n)
    _, _, C, _ = abc_arrays(nu01, nu02)
    return _result("lemma3: C < 0", "nu01 > nu02 > 0", C, True, np.abs(C),
                   {"nu01": nu01, "nu02": nu02})


def check_lemma4(rng, n):
    nu01, nu02 = sample_pairs(rng, n)
    A, _, C, _ = abc_arrays(nu01, nu02)
    return _result("lemma4: A < C", "nu01 > nu02 > 0", A - C, True, np.abs(A) + np.abs(C),
                   {"nu01": nu01, "nu02": nu02})


def check_lemma5(rng, n, v0):
    nu01, nu02 = sample_pairs(rng, n, lower=v0)
    A, B, C, _ = abc_arrays(nu01, nu02)
    params = {"nu01": nu01, "nu02": nu02}
    scale = np.abs(A) + np.abs(B) + np.abs(C)
    lt = _result("lemma5: B < A", "nu02 > v0", B - A, True, scale, params)
    ge = _result("lemma5: 2A - B - C >= 0", "nu02 > v0", -(2 * A - B - C), False, scale, params)
    return lt, ge


def check_lemma6(rng, n, v0):
    nu01, nu02 = sample_pairs(rng, n, lower=v0)
    r1, r2, r3 = sample_axes(rng, n)
    A, B, C, _ = abc_arrays(nu01, nu02)
    val = (2 * B - A - C) * r3**2 + (A - C) * (r2**2 - r1**2)
    scale = np.abs(A) + np.abs(B) + np.abs(C)
    return _result("lemma6", "nu02 > v0, r3^2 >= r1^2", val, False, scale,
                   {"nu01": nu01, "nu02": nu02, "r1": r1, "r2": r2, "r3": r3})


def check_lemma7(rng, n, v0):
    nu01, nu02 = sample_pairs(rng, n, lower=v0)
    nu11, nu12 = sample_nested(rng, nu01, nu02)
    r1, r2, r3 = sample_axes(rng, n)
    A, B, C, _ = abc_arrays(nu01, nu02)
    val = (r1**2 * r2**2 * (C - A) * (nu11 - nu12) + r1**2 * r3**2 * (B - C) * (1 + nu12)
           + r2**2 * r3**2 * (B - A) * (1 + nu11))
    scale = (np.abs(A) + np.abs(B) + np.abs(C)) * (1 + nu11)
    return _result("lemma7", "nu02 > v0, nesting, r3^2 >= r1^2", val, False, scale,
                   {"nu01": nu01, "nu02": nu02, "nu11": nu11, "nu12": nu12,
                    "r1": r1, "r2": r2, "r3": r3})


def check_chain(rng, n, v0):
    nu01, nu02 = sample_pairs(rng, n, lower=v0)
    A, B, C, _ = abc_arrays(nu01, nu02)
    worst = np.maximum(np.maximum(B - A, A - C), C)
    return _result("chain: B < A < C < 0", "nu02 > v0", worst, True,
                   np.abs(A) + np.abs(B) + np.abs(C), {"nu01": nu01, "nu02": nu02})


def check_bernstein(rng, n, v0):
    """``p0 < 0`` and ``p1..p4 <= 0`` for off-center half-turn axes."""
    nu01, nu02 = sample_pairs(rng, n, lower=v0)
    nu11, nu12 = sample_nested(rng, nu01, nu02)
    r1, r2, r3 = sample_axes(rng, n, midpoint=True)
    A, B, C, _ = abc_arrays(nu01, nu02)
    p = bernstein_arrays(A, B, C, nu11, nu12, r1, r2, r3)
    scale = (np.abs(A) + np.abs(B) + np.abs(C)) * (1 + nu11)
    params = {"nu01": nu01, "nu02": nu02, "nu11": nu11, "nu12": nu12,
              "r1": r1, "r2": r2, "r3": r3}
    hyp = "nu02 > v0, nesting, r3^2 >= r1^2 + r2^2"
    out = [_result("bernstein: p0 < 0", hyp, p[0], True, scale, params)]
    rest = p[1:].max(axis=0)
    out.append(_result("bernstein: p1..p4 <= 0", hyp, rest, False, scale, params))
    # the quartic itself, which the sign pattern is meant to bound
    t = np.linspace(0.0, 1.0, 101)[1:-1, None]
    poly = bernstein_poly(p, t).max(axis=0)
    out.append(_result("half-turn quartic P(t) < 0 on (0, 1)", hyp, poly, True, scale, params))
    return tuple(out)


def check_j_integrand(points=201):
    """Positivity of ``2v^2 + (4 - 3t^2) v + 3t^4 - 3t^2 + 2`` on ``[0, 2] x [0, 1]``."""
    v, t = np.meshgrid(np.linspace(0.0, 2.0, points), np.linspace(0.0, 1.0, points))
    val = 2 * v**2 + (4 - 3 * t**2) * v + 3 * t**4 - 3 * t**2 + 2
    return _result("J integrand derivative > 0", "v in [0, 2], t in [0, 1]", -val.ravel(),
                   True, np.ones(val.size), {"v": v.ravel(), "t": t.ravel()})


def verify_lemmas(samples=10_000, seed=42):
    """Run the whole suite with ``samples`` draws per check."""
    if samples < 1:
        raise ValueError("samples must be positive")
    rng = np.random.default_rng(seed)
    v0 = find_v0()
    checks = [check_lemma3(rng, samples), check_lemma4(rng, samples)]
    checks += check_lemma5(rng, samples, v0)
    checks += [check_lemma6(rng, samples, v0), check_lemma7(rng, samples, v0),
               check_chain(rng, samples, v0)]
    checks += check_bernstein(rng, samples, v0)
    checks.append(check_j_integrand())
    return LemmaReport(seed=seed, samples=samples, checks=tuple(checks))


__all__ = [
    "CheckResult", "LemmaReport", "verify_lemmas", "sample_pairs", "sample_nested",
    "sample_axes",
]
