"""The acceptance battery: ten numbered criteria with tolerances and runtime budgets.

Each criterion returns a CriterionResult.  A criterion passes when its
numerical claim holds and it finished within its budget.  Elapsed time is
the only field that varies between runs; ``canonical_json`` drops it so two
runs with the same seed compare byte for byte.
"""

from __future__ import annotations

import itertools
import json
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import specfun
from .errors import HilbertZetaError
from .kernel import coth_minus_one
from .quad import QuadConfig, integrate_semi_infinite
from .radial import RadialIntegrand, SupportHint, mc_oracle, reduce_radial
from .sharp import Tf_norm, extrapolate_to_zero, opnorm_search, sharpness_sweep
from .specfun import ProblemParams, surface_constant
from .verify import (
    check_full_coth,
    check_inequality,
    full_coth_battery,
    equivalent_J,
    forward_battery,
    reverse_battery,
)
from .weights import omega, theta, theta_decay_fit, truncated_weight, varpi

__all__ = ["CriterionResult", "CRITERIA", "run_criteria", "run_suite", "canonical_json", "VOLATILE_FIELDS"]

VOLATILE_FIELDS = ("elapsed_s", "timestamp")

WEIGHT_PAIRS = ((1, 1.0), (2, 1.0), (2, 2.0), (3, 2.0))
WEIGHT_SIGMAS = (1.5, 2.0, 5.0)
POINT_NORMS = (1e-2, 1e-1, 1.0, 1e1, 1e2)
BATTERY_DIMS = ((1, 1, 1.0, 1.0), (2, 1, 2.0, 1.0))


@dataclass(frozen=True)
class CriterionResult:
    id: int
    name: str
    passed: bool
    measured: float
    tolerance: str
    elapsed_s: float
    budget_s: float
    detail: dict = field(default_factory=dict)
    error: Optional[str] = None

    @property
    def within_budget(self) -> bool:
        return self.elapsed_s <= self.budget_s

    def as_dict(self) -> dict:
        out = asdict(self)
        out["within_budget"] = self.within_budget
        return out


def _finite(x: float) -> float:
    return float(x) if math.isfinite(x) else float("nan")


def mellin_identity(seed: int) -> tuple[bool, float, dict]:
    worst = 0.0
    per = {}
    for sigma in (1.1, 1.5, 2.0, 3.0, 5.0, 10.0):
        res = integrate_semi_infinite(
            lambda v, s=sigma: coth_minus_one(v) * v ** (s - 1.0), 0.0, QuadConfig(rel_tol=1e-12),
            left_exponent=sigma - 2.0, decay_rate=2.0,
        ).require("Mellin integral")
        closed = specfun.mellin_coth_constant(sigma)
        per[str(sigma)] = abs(res.value - closed) / closed
        worst = max(worst, per[str(sigma)])
    return worst <= 1e-10, worst, {"rel_error": per}


def radial_reduction(seed: int) -> tuple[bool, float, dict]:
    worst_q, worst_z = 0.0, 0.0
    zs = {}
    for s, g in itertools.product((1, 2, 3), (1, 2, 3)):
        for eps in (0.25, 1.0, 2.0):
            ri = RadialIntegrand(s, g, lambda r, s=s, e=eps: r ** (-s - e), SupportHint.UNIT_BALL_EXTERIOR,
                                 tail_exponent=eps)
            closed = surface_constant(s, g) / eps
            worst_q = max(worst_q, abs(reduce_radial(ri).require().value - closed) / closed)
        # Monte Carlo at eps = 2 with proposal tail index eps/2 (finite variance)
        ri = RadialIntegrand(s, g, lambda r, s=s: r ** (-s - 2.0), SupportHint.UNIT_BALL_EXTERIOR, tail_exponent=2.0)
        est, se = mc_oracle(ri, 1_000_000, seed=seed, tail_index=1.0)
        z = (est - surface_constant(s, g) / 2.0) / se
        zs[f"{s},{g}"] = z
        worst_z = max(worst_z, abs(z))
    return worst_q <= 1e-9 and worst_z <= 3.0, worst_q, {"worst_quadrature_rel_error": worst_q,
                                                         "worst_mc_z": worst_z, "mc_z": zs}


def weight_constancy(seed: int) -> tuple[bool, float, dict]:
    worst_omega, worst_varpi = 0.0, 0.0
    for (m, alpha), sigma in itertools.product(WEIGHT_PAIRS, WEIGHT_SIGMAS):
        for y in POINT_NORMS:
            worst_omega = max(worst_omega, omega(sigma, y, m, alpha).rel_deviation)
            for n, beta in WEIGHT_PAIRS:
                worst_varpi = max(worst_varpi, varpi(sigma, y, n, beta, alpha=alpha, m=m).rel_deviation)
    worst = max(worst_omega, worst_varpi)
    return worst <= 1e-8, worst, {"worst_omega": worst_omega, "worst_varpi": worst_varpi}


def truncated_weight_and_decay(seed: int) -> tuple[bool, float, dict]:
    worst = 0.0
    for (m, alpha), sigma_t in itertools.product(WEIGHT_PAIRS, WEIGHT_SIGMAS):
        for y in POINT_NORMS:
            worst = max(worst, truncated_weight(sigma_t, y, m, alpha).deviation)
    slopes, ok = {}, worst <= 1e-9
    for sigma_t in (2.0, 3.0):
        fit = theta_decay_fit(sigma_t, (10.0, 1e2, 1e3))
        slopes[str(sigma_t)] = fit.slope
        ok = ok and abs(fit.slope + (sigma_t - 1.0)) <= 0.05 and fit.slope <= fit.guaranteed_bound(1.5)
    ts = [theta(2.0, t).theta for t in POINT_NORMS]
    monotone = all(a > b for a, b in zip(ts, ts[1:]))
    return ok and monotone, worst, {"worst_identity_deviation": worst, "theta_slopes": slopes,
                                    "theta_monotone": monotone}


def forward_inequality(seed: int) -> tuple[bool, float, dict]:
    worst_ratio, count, ok, failures = 0.0, 0, True, []
    for dims in BATTERY_DIMS:
        for sigma, p in itertools.product((1.5, 2.0), (1.5, 2.0, 3.0)):
            params = ProblemParams(*dims, sigma, p)
            for label, f, g in forward_battery(params):
                rep = check_inequality(f, g, params, label=label)
                count += 1
                worst = max(rep.ratio, rep.J_ratio)
                worst_ratio = max(worst_ratio, worst)
                if not (rep.passed and worst <= 1.0 - 1e-6):
                    ok = False
                    failures.append(f"{dims} sigma={sigma} p={p} {label}")
    return ok and count >= 10, worst_ratio, {"pairs": count, "worst_ratio": worst_ratio, "failures": failures}


def sharpness(seed: int) -> tuple[bool, float, dict]:
    params = ProblemParams(1, 1, 1.0, 1.0, 2.0, 2.0)
    pts = sharpness_sweep(params, (0.2, 0.02, 0.002))
    ratios = [pt.ratio for pt in pts]
    increasing = all(a < b < 1.0 for a, b in zip(ratios, ratios[1:]))
    gap_ratio = pts[2].gap / pts[1].gap
    limit, residual = extrapolate_to_zero(pts)
    direct = pts[0].I_tilde_direct
    direct_dev = abs(direct - pts[0].I_tilde) / pts[0].I_tilde
    ok = increasing and 0.05 <= gap_ratio <= 0.3 and abs(limit - 1.0) <= 2.0 * residual and direct_dev <= 1e-8
    return ok, gap_ratio, {"ratios": ratios, "gap_ratio": gap_ratio, "limit": limit, "residual": residual,
                           "direct_rel_deviation": direct_dev}


def reverse_inequality(seed: int) -> tuple[bool, float, dict]:
    lowest, ok, failures = math.inf, True, []
    for dims in BATTERY_DIMS:
        for sigma, p in itertools.product((1.5, 2.0), (0.5, -1.0)):
            params = ProblemParams(*dims, sigma, p)
            for label, f, g in reverse_battery(params):
                rep = check_inequality(f, g, params, label=label)
                lowest = min(lowest, rep.ratio, rep.J_ratio)
                if not rep.passed:
                    ok = False
                    failures.append(f"{dims} sigma={sigma} p={p} {label}")
    return ok, lowest, {"lowest_ratio": lowest, "failures": failures}


def full_coth_forms(seed: int) -> tuple[bool, float, dict]:
    worst_gap, ok, failures, count = 0.0, True, [], 0
    for dims in BATTERY_DIMS:
        params = ProblemParams(*dims, 2.0, 2.0)
        for label, f, g in full_coth_battery(params):
            rep = check_full_coth(f, g, params, label=label)
            count += 1
            worst_gap = max(worst_gap, rep.extras["decomposition_gap"] / rep.I)
            if not rep.passed:
                ok = False
                failures.append(f"{dims} {label}")
    return ok and count >= 5, worst_gap, {"pairs": count, "worst_relative_gap": worst_gap, "failures": failures}


def operator_norm(seed: int) -> tuple[bool, float, dict]:
    params = ProblemParams(1, 1, 1.0, 1.0, 2.0, 3.0)
    worst = 0.0
    for label, f, _ in forward_battery(params):
        a = Tf_norm(f, params).value
        b = equivalent_J(f, params).require("J").value
        worst = max(worst, abs(a - b) / b)
    params = ProblemParams(1, 1, 1.0, 1.0, 2.0, 2.0)
    est = opnorm_search(params, "eps")
    reach = est.best_ratio / est.K_value
    ok = worst <= 1e-10 and est.within_bound(1e-8) and reach >= 0.99
    return ok, reach, {"norm_identity_worst": worst, "best_over_K": reach,
                       "argmax_eps": est.argmax_params["eps"], "search_converged": est.converged}


CRITERIA: dict[int, tuple[str, str, float, Callable[[int], tuple[bool, float, dict]]]] = {
    1: ("Mellin identity", "rel <= 1e-10", 1.0, mellin_identity),
    2: ("radial reduction and Monte-Carlo oracle", "rel <= 1e-9, |z| <= 3", 60.0, radial_reduction),
    3: ("weight constancy", "rel <= 1e-8", 30.0, weight_constancy),
    4: ("truncated weight identity and theta decay", "<= 1e-9 K2, slope within 0.05", 10.0,
        truncated_weight_and_decay),
    5: ("forward inequality battery", "ratio <= 1 - 1e-6", 120.0, forward_inequality),
    6: ("sharpness of the constant", "gap ratio in [0.05, 0.3], limit within 2x residual", 60.0, sharpness),
    7: ("reverse inequality battery", "ratio > 1", 60.0, reverse_inequality),
    8: ("full-coth forms and kernel decomposition", "within quadrature error", 60.0, full_coth_forms),
    9: ("operator norm", "identity <= 1e-10, best/K in [0.99, 1 + 1e-8]", 60.0, operator_norm),
}
DETERMINISM = (10, "determinism", "byte-identical canonical JSON, suite <= 600 s", 600.0)


def _run_one(cid: int, seed: int) -> CriterionResult:
    name, tol, budget, func = CRITERIA[cid]
    start = time.perf_counter()
    error = None
    try:
        ok, measured, detail = func(seed)
    except HilbertZetaError as exc:
        ok, measured, detail, error = False, float("nan"), {}, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    return CriterionResult(cid, name, bool(ok and elapsed <= budget), _finite(measured), tol, elapsed, budget,
                           detail, error)


def run_criteria(ids: Optional[Sequence[int]] = None, seed: int = 0,
                 progress: Optional[Callable[[CriterionResult], None]] = None) -> list[CriterionResult]:
    """Run the numbered criteria 1-9 (all of them by default) in order."""
    ids = sorted(CRITERIA) if ids is None else sorted(set(ids))
    unknown = [i for i in ids if i not in CRITERIA]
    if unknown:
        raise KeyError(f"unknown criteria {unknown}")
    out = []
    for cid in ids:
        res = _run_one(cid, seed)
        out.append(res)
        if progress:
            progress(res)
    return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def canonical_json(doc) -> str:
    """Sorted-key JSON with the volatile fields removed at every depth."""

    def strip(x):
        if isinstance(x, dict):
            return {k: strip(v) for k, v in x.items() if k not in VOLATILE_FIELDS}
        if isinstance(x, list):
            return [strip(v) for v in x]
        return x

    return json.dumps(strip(_jsonable(doc)), sort_keys=True, separators=(",", ":"))


def run_suite(ids: Optional[Sequence[int]] = None, seed: int = 0,
              progress: Optional[Callable[[CriterionResult], None]] = None) -> list[CriterionResult]:
    """The selected criteria of 1-9 (all by default), then criterion 10 when selected.

    Criterion 10 reruns the same selection and compares both passes in
    canonical form; its budget covers both passes.
    """
    selected = set(CRITERIA) | {DETERMINISM[0]} if ids is None else set(ids)
    start = time.perf_counter()
    numbered = sorted(selected - {DETERMINISM[0]})
    first = run_criteria(numbered, seed, progress) if numbered else []
    if DETERMINISM[0] not in selected:
        return first
    second = run_criteria(numbered, seed) if numbered else []
    same = canonical_json([r.as_dict() for r in first]) == canonical_json([r.as_dict() for r in second])
    elapsed = time.perf_counter() - start
    cid, name, tol, budget = DETERMINISM
    res = CriterionResult(cid, name, bool(same and elapsed <= budget), float(same), tol, elapsed, budget,
                          {"identical": same, "criteria_compared": numbered})
    if progress:
        progress(res)
    return first + [res]
