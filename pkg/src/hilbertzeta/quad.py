"""Adaptive Gauss-Kronrod quadrature on finite and semi-infinite intervals.

Every integral is split into *segments*: an interval of a (possibly
transformed) variable together with the transformed integrand.  All panels
of all segments take part in one global adaptive loop, so the requested
tolerance applies to the total and effort goes where the error is.

Integrands are called with numpy arrays of abscissae and must return arrays
of the same length.  An integrand may also return a 2-D array of shape
(k, N); only the first row steers the subdivision, the remaining rows are
integrated on the same panels (used to carry inner error estimates through
nested integrals).

Endpoint handling:

* a left power singularity ``f(x) ~ (x - a)^lam`` is absorbed with
  ``x = a + (b - a) t^(1/(lam+1))``,
* an exponential tail ``f(x) ~ exp(-kappa x)`` past a pivot ``P`` is mapped
  with ``x = P - log(t)/kappa``,
* a power tail ``f(x) ~ x^(-1-delta)`` is mapped with ``x = P t^(-1/delta)``,
* with no hint the tail uses ``x = P / t``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ConvergenceError, IntegrandError, ParameterError

__all__ = [
    "EndpointBehavior",
    "QuadConfig",
    "QuadResult",
    "integrate_finite",
    "integrate_semi_infinite",
    "integrate_double_radial",
    "integrate_semi_infinite_batch",
    "integrate_finite_batch",
    "BatchResult",
    "default_pivot",
]

# 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208626368899,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

# node layout on [-1, 1]: 10 negative, centre, 10 positive
_NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
_KW = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
_GW = np.zeros(21)
_GW[1:10:2] = _WG
_GW[11:20:2] = _WG[::-1]

_EPS = np.finfo(float).eps
_TINY = np.finfo(float).tiny
_LOG_MAX = math.log(np.finfo(float).max)


class EndpointBehavior(str, enum.Enum):
    REGULAR = "regular"
    INTEGRABLE_SINGULARITY_LEFT = "integrable_singularity_left"
    EXPONENTIAL_DECAY_RIGHT = "exponential_decay_right"


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-14
    max_subdivisions: int = 2000
    endpoint_behavior: EndpointBehavior = EndpointBehavior.REGULAR

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ParameterError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ParameterError("max_subdivisions must be at least 1")
        object.__setattr__(self, "endpoint_behavior", EndpointBehavior(self.endpoint_behavior))

    def tightened(self, factor: float) -> "QuadConfig":
        return replace(self, rel_tol=self.rel_tol * factor, abs_tol=self.abs_tol * factor)


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error_estimate: float
    evaluations: int
    converged: bool

    def require(self, what: str = "integral") -> "QuadResult":
        """Return self, or raise ConvergenceError if the result did not converge."""
        if not self.converged:
            raise ConvergenceError(
                f"{what} did not converge: value={self.value!r}, error estimate={self.abs_error_estimate!r}",
                result=self,
            )
        return self

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(
            self.value + other.value,
            self.abs_error_estimate + other.abs_error_estimate,
            self.evaluations + other.evaluations,
            self.converged and other.converged,
        )


@dataclass
class _Segment:
    func: Callable[[np.ndarray], np.ndarray]
    lo: float
    hi: float


def _evaluate(func, x: np.ndarray) -> np.ndarray:
    y = np.asarray(func(x), dtype=float)
    if y.ndim == 0:
        y = np.full(x.shape, float(y))
    if y.shape[-1] != x.shape[-1]:
        raise IntegrandError(f"integrand returned shape {y.shape} for {x.shape[-1]} abscissae")
    if np.isnan(y).any():
        raise IntegrandError("integrand returned NaN")
    return y


def _panel_rules(func, lo: np.ndarray, hi: np.ndarray, aux: Optional[np.ndarray] = None):
    """Apply the 21-point Kronrod rule to many panels of one segment at once.

    With ``aux`` (one value per panel) the integrand is called as
    func(x, aux repeated per node).
    """
    centre = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    x = (centre[:, None] + half[:, None] * _NODES[None, :]).ravel()
    if aux is None:
        y = _evaluate(func, x)
    else:
        y = np.asarray(func(x, np.repeat(aux, 21)), dtype=float)
    rows = y.reshape(-1, x.size) if y.ndim > 1 else y[None, :]
    fv = rows.reshape(rows.shape[0], lo.size, 21)
    kron = (fv * _KW).sum(axis=2) * half
    gauss = (fv[0] * _GW).sum(axis=1) * half
    resabs = (np.abs(fv[0]) * _KW).sum(axis=1) * np.abs(half)
    mean = kron[0] / np.where(half != 0, half, 1.0) * 0.5
    resasc = (np.abs(fv[0] - mean[:, None]) * _KW).sum(axis=1) * np.abs(half)
    err = np.abs(kron[0] - gauss)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc != 0) & (err != 0), scaled, err)
    floor = 50.0 * _EPS * resabs
    err = np.where(resabs > _TINY / (50.0 * _EPS), np.maximum(err, floor), err)
    if not np.isfinite(kron).all():
        raise IntegrandError("integrand is not integrable on a panel (infinite rule value)")
    return kron, err, x.size


def _adaptive(segments: Sequence[_Segment], cfg: QuadConfig) -> tuple[np.ndarray, float, int, bool]:
    """Global adaptive bisection over all panels of all segments.

    Returns (values per channel, error estimate of channel 0, evaluations,
    converged).
    """
    seg_id = []
    lo = []
    hi = []
    for i, seg in enumerate(segments):
        if seg.hi > seg.lo:
            seg_id.append(i)
            lo.append(seg.lo)
            hi.append(seg.hi)
    if not seg_id:
        return np.zeros(1), 0.0, 0, True
    seg_id = np.array(seg_id)
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)

    def run(sid, plo, phi):
        vals = []
        errs = []
        evals = 0
        order = []
        for s in np.unique(sid):
            mask = sid == s
            v, e, n = _panel_rules(segments[s].func, plo[mask], phi[mask])
            vals.append(v)
            errs.append(e)
            evals += n
            order.append(np.flatnonzero(mask))
        idx = np.concatenate(order)
        nch = vals[0].shape[0]
        v_out = np.empty((nch, sid.size))
        e_out = np.empty(sid.size)
        v_out[:, idx] = np.concatenate(vals, axis=1)
        e_out[idx] = np.concatenate(errs)
        return v_out, e_out, evals

    vals, errs, evaluations = run(seg_id, lo, hi)
    while True:
        total = math.fsum(vals[0])
        total_err = math.fsum(errs)
        tol = max(cfg.abs_tol, cfg.rel_tol * abs(total))
        if total_err <= tol:
            converged = True
            break
        if seg_id.size >= cfg.max_subdivisions:
            converged = False
            break
        # bisect the worst panels until the untouched error is below tol/2
        order = np.argsort(-errs, kind="stable")
        cum = np.cumsum(errs[order])
        n_split = int(np.searchsorted(cum, total_err - 0.5 * tol) + 1)
        n_split = max(1, min(n_split, order.size, cfg.max_subdivisions - seg_id.size))
        pick = order[:n_split]
        mid = 0.5 * (lo[pick] + hi[pick])
        resolvable = (mid > lo[pick]) & (mid < hi[pick])
        if not resolvable.any():
            converged = False
            break
        pick = pick[resolvable]
        mid = mid[resolvable]
        keep = np.ones(seg_id.size, dtype=bool)
        keep[pick] = False
        new_sid = np.concatenate([seg_id[pick], seg_id[pick]])
        new_lo = np.concatenate([lo[pick], mid])
        new_hi = np.concatenate([mid, hi[pick]])
        nv, ne, n = run(new_sid, new_lo, new_hi)
        evaluations += n
        seg_id = np.concatenate([seg_id[keep], new_sid])
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        vals = np.concatenate([vals[:, keep], nv], axis=1)
        errs = np.concatenate([errs[keep], ne])
    # sort panels so the summation order is independent of the split history
    order = np.lexsort((lo, seg_id))
    values = np.array([math.fsum(row[order]) for row in vals])
    return values, math.fsum(errs[order]), evaluations, converged


def _scatter(vals: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Place values computed on ``mask`` into zeros of the full length."""
    full = np.zeros(vals.shape[:-1] + mask.shape)
    full[..., mask] = vals
    return full


def _finite_segment(f, a: float, b: float, left_exponent: Optional[float]) -> _Segment:
    if left_exponent is None:
        return _Segment(f, a, b)
    if not left_exponent > -1:
        raise ParameterError(f"left endpoint exponent {left_exponent!r} is not integrable")
    k = 1.0 / (left_exponent + 1.0)
    width = b - a

    def g(t):
        x = a + width * t ** k
        jac = width * k * t ** (k - 1.0)
        ok = x > a
        return _scatter(_evaluate(f, x[ok]) * jac[ok], ok)

    return _Segment(g, 0.0, 1.0)


def default_pivot(a: float, decay_rate: Optional[float] = None) -> float:
    """max(a, 10/decay_rate), or max(a, 1) without a rate: the start of the mapped tail.

    The rate sets the scale; a fixed floor of 1 would turn a fast decay
    into a needle near a that the first panel never samples.
    """
    if decay_rate:
        return max(a, 10.0 / decay_rate)
    return max(a, 1.0)


def _tail_segment(f, pivot: float, decay_rate, tail_exponent, rel_tol: float) -> _Segment:
    if decay_rate is not None and tail_exponent is not None:
        raise ParameterError("give either decay_rate or tail_exponent, not both")
    if decay_rate is not None:
        if not decay_rate > 0:
            raise ParameterError("decay_rate must be positive")
        kappa = float(decay_rate)

        def g(t):
            x = pivot - np.log(t) / kappa
            return _evaluate(f, x) / (kappa * t)

        return _Segment(g, 0.0, 1.0)

    delta = 1.0 if tail_exponent is None else float(tail_exponent)
    if not delta > 0:
        raise ParameterError(f"power tail exponent {delta!r} is not integrable")
    # mass beyond the largest representable abscissa, relative to the tail
    unreachable = math.exp(delta * (math.log(pivot) - _LOG_MAX + 5.0))
    if unreachable > rel_tol:
        raise ParameterError(
            f"power tail with exponent {delta!r} carries mass beyond the double range; "
            "subtract the asymptotic tail analytically"
        )
    inv = 1.0 / delta
    log_scale = math.log(pivot * inv)

    def g(t):
        logt = np.log(t)
        logx = math.log(pivot) - inv * logt
        logjac = log_scale - (inv + 1.0) * logt
        ok = (logx < _LOG_MAX - 1.0) & (logjac < _LOG_MAX - 1.0)
        return _scatter(_evaluate(f, np.exp(logx[ok])) * np.exp(logjac[ok]), ok)

    return _Segment(g, 0.0, 1.0)


def _result(segments, cfg: QuadConfig, channels: bool = False):
    values, err, evals, converged = _adaptive(segments, cfg)
    res = QuadResult(float(values[0]), float(err), int(evals), bool(converged))
    if channels:
        return res, values
    return res


def _resolve_left(cfg: QuadConfig, left_exponent):
    if cfg.endpoint_behavior == EndpointBehavior.INTEGRABLE_SINGULARITY_LEFT and left_exponent is None:
        raise ParameterError("integrable_singularity_left requires left_exponent")
    return left_exponent


def integrate_finite(
    f,
    a: float,
    b: float,
    cfg: Optional[QuadConfig] = None,
    *,
    left_exponent: Optional[float] = None,
    breakpoints: Sequence[float] = (),
) -> QuadResult:
    """Integrate f over [a, b].

    ``left_exponent`` declares ``f(x) ~ (x - a)^left_exponent`` near a; the
    first panel then absorbs the power law by substitution.
    """
    cfg = cfg or QuadConfig()
    if not a < b:
        raise ParameterError(f"integrate_finite requires a < b, got [{a!r}, {b!r}]")
    left_exponent = _resolve_left(cfg, left_exponent)
    return _result(_build_finite(f, a, b, left_exponent, breakpoints), cfg)


def _build_finite(f, a, b, left_exponent, breakpoints) -> list[_Segment]:
    cuts = [a] + sorted(c for c in set(breakpoints) if a < c < b) + [b]
    segments = [_finite_segment(f, cuts[0], cuts[1], left_exponent)]
    segments += [_Segment(f, lo, hi) for lo, hi in zip(cuts[1:-1], cuts[2:])]
    return segments


def _build_semi_infinite(f, a, cfg, decay_rate, tail_exponent, pivot, left_exponent, breakpoints):
    if cfg.endpoint_behavior == EndpointBehavior.EXPONENTIAL_DECAY_RIGHT and decay_rate is None and tail_exponent is None:
        decay_rate = 1.0
    left_exponent = _resolve_left(cfg, left_exponent)
    if pivot is None:
        pivot = default_pivot(a, decay_rate)
        if breakpoints:
            pivot = max(pivot, max(breakpoints))
    if pivot < a:
        raise ParameterError("pivot must not lie left of the lower limit")
    segments = []
    if pivot > a:
        segments += _build_finite(f, a, pivot, left_exponent, breakpoints)
    segments.append(_tail_segment(f, pivot, decay_rate, tail_exponent, cfg.rel_tol))
    return segments


def integrate_semi_infinite(
    f,
    a: float,
    cfg: Optional[QuadConfig] = None,
    *,
    decay_rate: Optional[float] = None,
    tail_exponent: Optional[float] = None,
    pivot: Optional[float] = None,
    left_exponent: Optional[float] = None,
    breakpoints: Sequence[float] = (),
) -> QuadResult:
    """Integrate f over [a, inf).

    The interval is split at a pivot (default ``max(a, 10/decay_rate)``
    or the largest breakpoint); the tail beyond it is mapped onto (0, 1]
    using the decay hint, see the module docstring.
    """
    cfg = cfg or QuadConfig()
    if not a >= 0:
        raise ParameterError(f"integrate_semi_infinite requires a >= 0, got {a!r}")
    segments = _build_semi_infinite(f, a, cfg, decay_rate, tail_exponent, pivot, left_exponent, breakpoints)
    return _result(segments, cfg)


@dataclass(frozen=True)
class BatchResult:
    """Results of many independent integrals solved together."""

    values: np.ndarray
    abs_error_estimates: np.ndarray
    evaluations: int
    converged: np.ndarray

    def __len__(self):
        return self.values.size

    def __getitem__(self, i) -> QuadResult:
        return QuadResult(float(self.values[i]), float(self.abs_error_estimates[i]), 0, bool(self.converged[i]))


def _batch_templates(f, a, pivot, cuts, left_exponent, decay_rate, tail_exponent):
    """Segment templates shared by all problems of a batch.

    Each template maps a panel variable t and per-node problem indices to
    (x, jacobian); the caller evaluates f(x, index).
    """
    templates = []
    for j in range(cuts.shape[1] - 1):
        lo_j, hi_j = cuts[:, j], cuts[:, j + 1]
        if j == 0 and left_exponent is not None:
            k = 1.0 / (left_exponent + 1.0)

            def tmpl(t, idx, lo_j=lo_j, hi_j=hi_j, k=k):
                width = hi_j[idx] - lo_j[idx]
                return lo_j[idx] + width * t ** k, width * k * t ** (k - 1.0)

            templates.append((tmpl, np.zeros_like(lo_j), np.where(hi_j > lo_j, 1.0, 0.0)))
        else:
            # geometric map on (lo, hi) with lo > 0: power laws spanning many decades stay cheap
            geometric = lo_j > 0
            log_ratio = np.where(geometric, np.log(np.where(geometric & (hi_j > lo_j), hi_j / np.where(geometric, lo_j, 1.0), 1.0)), 0.0)

            def tmpl(t, idx, lo_j=lo_j, hi_j=hi_j, geometric=geometric, log_ratio=log_ratio):
                g = geometric[idx]
                lr = log_ratio[idx]
                x_geo = lo_j[idx] * np.exp(t * lr)
                x_lin = lo_j[idx] + t * (hi_j[idx] - lo_j[idx])
                return np.where(g, x_geo, x_lin), np.where(g, x_geo * lr, hi_j[idx] - lo_j[idx])

            templates.append((tmpl, np.zeros_like(lo_j), np.where(hi_j > lo_j, 1.0, 0.0)))
    if decay_rate is None and tail_exponent is None:
        return templates
    if decay_rate is not None:

        def tail(t, idx):
            kappa = decay_rate[idx]
            return pivot[idx] - np.log(t) / kappa, 1.0 / (kappa * t)

    else:
        inv = 1.0 / tail_exponent

        def tail(t, idx):
            logt = np.log(t)
            logx = np.log(pivot[idx]) - inv * logt
            logjac = np.log(pivot[idx] * inv) - (inv + 1.0) * logt
            return np.exp(np.minimum(logx, _LOG_MAX - 1.0)), np.exp(np.minimum(logjac, _LOG_MAX - 1.0))

    templates.append((tail, np.zeros(a.size), np.ones(a.size)))
    return templates


def integrate_semi_infinite_batch(
    f,
    a: np.ndarray,
    cfg: Optional[QuadConfig] = None,
    *,
    decay_rate: Optional[np.ndarray] = None,
    tail_exponent: Optional[float] = None,
    left_exponent: Optional[float] = None,
    breakpoints: Optional[np.ndarray] = None,
    markers: Optional[np.ndarray] = None,
) -> BatchResult:
    """Solve N independent integrals of f(x, i) over [a_i, inf) in one adaptive loop.

    ``f(x, idx)`` evaluates problem ``idx[j]`` at ``x[j]``.  ``decay_rate``
    (one rate per problem) or the shared ``tail_exponent`` selects the tail
    map as in ``integrate_semi_infinite``; ``left_exponent`` is shared;
    ``breakpoints`` has shape (N, B) and marks kinks, which also push the
    pivot out.  ``markers`` (shape (N, M)) are scale hints that only become
    cuts when they fall below the pivot; a marker far out in an exponential
    tail would otherwise stretch the finite part until the integrand's mass
    is a needle that no panel samples.  Each problem is refined until its own
    error estimate meets the tolerance, so results agree with separate calls
    up to that tolerance while the Python overhead is paid once per round.
    """
    cfg = cfg or QuadConfig()
    a = np.asarray(a, dtype=float)
    n = a.size
    if decay_rate is not None and tail_exponent is not None:
        raise ParameterError("give either decay_rate or tail_exponent, not both")
    if decay_rate is None and (tail_exponent is None or not tail_exponent > 0):
        raise ParameterError("the batch engine needs a decay rate or a positive tail exponent")
    if left_exponent is not None and not left_exponent > -1:
        raise ParameterError(f"left endpoint exponent {left_exponent!r} is not integrable")
    bps = np.zeros((n, 0)) if breakpoints is None else np.asarray(breakpoints, dtype=float).reshape(n, -1)
    if decay_rate is not None:
        decay_rate = np.broadcast_to(np.asarray(decay_rate, dtype=float), (n,))
        pivot = np.maximum(a, 10.0 / decay_rate)
    else:
        pivot = np.maximum(a, 1.0)
    if bps.shape[1]:
        pivot = np.maximum(pivot, bps.max(axis=1))
    if decay_rate is None:
        unreachable = np.exp(tail_exponent * (np.log(pivot) - _LOG_MAX + 5.0))
        if (unreachable > cfg.rel_tol).any():
            raise ParameterError("power tail carries mass beyond the double range")
    if markers is not None:
        bps = np.hstack([bps, np.asarray(markers, dtype=float).reshape(n, -1)])
    inner_cuts = np.sort(np.clip(bps, a[:, None], pivot[:, None]), axis=1)
    cuts = np.hstack([a[:, None], inner_cuts, pivot[:, None]])
    templates = _batch_templates(f, a, pivot, cuts, left_exponent, decay_rate, tail_exponent)
    return _solve_batch(f, templates, n, cfg)


def _solve_batch(f, templates, n: int, cfg: QuadConfig) -> BatchResult:
    """Adaptive loop over N problems sharing segment templates."""

    def func_for(tmpl):
        def g(t, idx):
            x, jac = tmpl(t, idx)
            out = np.zeros(t.shape)
            ok = (jac > 0) & np.isfinite(x)
            if ok.any():
                out[ok] = _evaluate(lambda xx: f(xx, idx[ok]), x[ok]) * jac[ok]
            return out
        return g

    funcs = [func_for(t) for t, _, _ in templates]
    prob = np.concatenate([np.arange(n)] * len(templates))
    tid = np.repeat(np.arange(len(templates)), n)
    lo = np.concatenate([t[1] for t in templates])
    hi = np.concatenate([t[2] for t in templates])
    live = hi > lo
    prob, tid, lo, hi = prob[live], tid[live], lo[live], hi[live]

    def run(prob, tid, lo, hi):
        vals = np.empty(prob.size)
        errs = np.empty(prob.size)
        evals = 0
        for j in np.unique(tid):
            mask = tid == j
            v, e, k = _panel_rules(funcs[j], lo[mask], hi[mask], aux=prob[mask])
            vals[mask] = v[0]
            errs[mask] = e
            evals += k
        return vals, errs, evals

    vals, errs, evaluations = run(prob, tid, lo, hi)
    while True:
        total = np.bincount(prob, vals, n)
        total_err = np.bincount(prob, errs, n)
        counts = np.bincount(prob, minlength=n)
        tol = np.maximum(cfg.abs_tol, cfg.rel_tol * np.abs(total))
        active = (total_err > tol) & (counts < cfg.max_subdivisions)
        if not active.any():
            break
        # per problem, bisect the worst panels until the rest carry less than tol/2
        # errors in units of each problem's tolerance, so one running sum serves all problems
        scaled = errs / tol[prob]
        order = np.lexsort((-scaled, prob))
        e_sorted = scaled[order]
        p_sorted = prob[order]
        cum = np.cumsum(e_sorted)
        start = np.concatenate([[0.0], cum])[np.searchsorted(p_sorted, np.arange(n))]
        before = cum - e_sorted - start[p_sorted]
        split_sorted = active[p_sorted] & (before < (total_err / tol)[p_sorted] - 0.5)
        pick = order[split_sorted]
        mid = 0.5 * (lo[pick] + hi[pick])
        ok = (mid > lo[pick]) & (mid < hi[pick])
        if not ok.any():
            break
        pick, mid = pick[ok], mid[ok]
        keep = np.ones(prob.size, dtype=bool)
        keep[pick] = False
        n_prob = np.concatenate([prob[pick], prob[pick]])
        n_tid = np.concatenate([tid[pick], tid[pick]])
        n_lo = np.concatenate([lo[pick], mid])
        n_hi = np.concatenate([mid, hi[pick]])
        nv, ne, k = run(n_prob, n_tid, n_lo, n_hi)
        evaluations += k
        prob = np.concatenate([prob[keep], n_prob])
        tid = np.concatenate([tid[keep], n_tid])
        lo = np.concatenate([lo[keep], n_lo])
        hi = np.concatenate([hi[keep], n_hi])
        vals = np.concatenate([vals[keep], nv])
        errs = np.concatenate([errs[keep], ne])
    order = np.lexsort((lo, tid, prob))
    values = np.bincount(prob[order], vals[order], n)
    total_err = np.bincount(prob[order], errs[order], n)
    tol = np.maximum(cfg.abs_tol, cfg.rel_tol * np.abs(values))
    return BatchResult(values, total_err, int(evaluations), total_err <= tol)

def integrate_finite_batch(
    f,
    a: np.ndarray,
    b: np.ndarray,
    cfg: Optional[QuadConfig] = None,
    *,
    left_exponent: Optional[float] = None,
    breakpoints: Optional[np.ndarray] = None,
) -> BatchResult:
    """Solve N independent integrals of f(x, i) over [a_i, b_i] in one adaptive loop."""
    cfg = cfg or QuadConfig()
    a = np.asarray(a, dtype=float)
    n = a.size
    b = np.broadcast_to(np.asarray(b, dtype=float), (n,))
    if not (b > a).all():
        raise ParameterError("integrate_finite_batch requires a < b for every problem")
    if left_exponent is not None and not left_exponent > -1:
        raise ParameterError(f"left endpoint exponent {left_exponent!r} is not integrable")
    bps = np.zeros((n, 0)) if breakpoints is None else np.asarray(breakpoints, dtype=float).reshape(n, -1)
    cuts = np.hstack([a[:, None], np.sort(np.clip(bps, a[:, None], b[:, None]), axis=1), b[:, None]])
    templates = _batch_templates(f, a, b, cuts, left_exponent, None, None)
    return _solve_batch(f, templates, n, cfg)


def integrate_double_radial(
    k,
    cfg: Optional[QuadConfig] = None,
    *,
    inner_hints: Optional[Callable[[np.ndarray], dict]] = None,
    outer_hints: Optional[dict] = None,
    inner_tightening: float = 0.05,
    outer_map: Optional[Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]] = None,
    inner_abs_tol: float = _TINY,
) -> QuadResult:
    """Nested semi-infinite quadrature of k(r, rho) over (0, inf)^2.

    The outer integral runs over rho, the inner over r.  ``k`` takes arrays
    r and rho of equal shape.  For each batch of outer abscissae,
    ``inner_hints(rho)`` returns keyword arguments of
    ``integrate_semi_infinite_batch`` (``a`` for the lower limits, default
    0, plus decay_rate, tail_exponent, left_exponent, breakpoints) and all
    inner integrals of the batch are solved together.  ``outer_hints`` are
    the keyword arguments of the outer ``integrate_semi_infinite`` call,
    with ``lower`` for an outer lower limit other than 0.

    The inner integrals are solved to ``inner_tightening`` times the outer
    relative tolerance, with the absolute floor ``inner_abs_tol`` (none by
    default); the reported error is the outer error plus the integral
    of the inner error estimates.  ``outer_map(rho, inner)`` turns the inner
    integrals into the outer integrand and returns it together with its
    derivative in ``inner``, which propagates the inner errors; without it
    the outer integrand is the inner integral itself.
    """
    cfg = cfg or QuadConfig()
    # inner values may be tiny where the outer weight is huge: relative control by default
    inner_cfg = replace(cfg.tightened(inner_tightening), abs_tol=inner_abs_tol)
    inner_hints = inner_hints or (lambda rho: {"tail_exponent": 1.0})
    outer_hints = dict(outer_hints or {})
    state = {"evals": 0, "converged": True}

    def outer(rho):
        hints = dict(inner_hints(rho))
        a = np.broadcast_to(np.asarray(hints.pop("a", 0.0), dtype=float), rho.shape)
        res = integrate_semi_infinite_batch(lambda r, idx: k(r, rho[idx]), a, inner_cfg, **hints)
        state["evals"] += res.evaluations
        state["converged"] &= bool(res.converged.all())
        vals, errs = res.values, res.abs_error_estimates
        if outer_map is not None:
            vals, slope = outer_map(rho, vals)
            errs = np.abs(slope) * errs
        return np.vstack([vals, errs])

    segments = _build_semi_infinite(
        outer,
        outer_hints.get("lower", 0.0),
        cfg,
        outer_hints.get("decay_rate"),
        outer_hints.get("tail_exponent"),
        outer_hints.get("pivot"),
        outer_hints.get("left_exponent"),
        outer_hints.get("breakpoints", ()),
    )
    res, channels = _result(segments, cfg, channels=True)
    err = res.abs_error_estimate + abs(float(channels[1]))
    return QuadResult(res.value, err, res.evaluations + state["evals"], res.converged and state["converged"])
