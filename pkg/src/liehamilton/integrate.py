"""t-dependent Lie systems ``X = sum_a b_a(t) X_a`` and an embedded
Dormand-Prince 5(4) integrator with dense output."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .lie_algebra import closure_constants
from .polyfield import VectorField

# ------------------------------------------------------------ coefficients


@dataclass(frozen=True)
class Constant:
    value: float

    def __call__(self, t: float) -> float:
        return self.value

    def to_dict(self) -> dict:
        return {"type": "constant", "value": self.value}


@dataclass(frozen=True)
class PolyT:
    """``c0 + c1 t + c2 t^2 + ...``"""

    coeffs: tuple

    def __call__(self, t: float) -> float:
        out = 0.0
        for c in reversed(self.coeffs):
            out = out * t + c
        return out

    def to_dict(self) -> dict:
        return {"type": "poly", "coeffs": list(self.coeffs)}


@dataclass(frozen=True)
class TrigSum:
    """``sum a_i cos(w_i t) + b_i sin(w_i t)`` with terms ``(a_i, b_i, w_i)``."""

    terms: tuple

    def __call__(self, t: float) -> float:
        return sum(a * math.cos(w * t) + b * math.sin(w * t) for a, b, w in self.terms)

    def bound(self) -> float:
        return sum(abs(a) + abs(b) for a, b, _ in self.terms)

    def to_dict(self) -> dict:
        return {"type": "trig", "terms": [list(x) for x in self.terms]}


CoefficientSpec = Constant | PolyT | TrigSum


def coefficient_from_dict(d) -> CoefficientSpec:
    """Parse a descriptor; bare numbers are constants."""
    if isinstance(d, (int, float)):
        return Constant(float(d))
    kind = d.get("type")
    if kind == "constant":
        spec = Constant(float(d["value"]))
    elif kind == "poly":
        spec = PolyT(tuple(float(c) for c in d["coeffs"]))
    elif kind == "trig":
        spec = TrigSum(tuple((float(a), float(b), float(w)) for a, b, w in d["terms"]))
    else:
        raise ValueError(f"unknown coefficient type {kind!r}")
    vals = [getattr(spec, "value", 0.0)] + list(getattr(spec, "coeffs", ())) + \
        [x for term in getattr(spec, "terms", ()) for x in term]
    if not all(math.isfinite(v) for v in vals):
        raise ValueError("coefficient parameters must be finite")
    return spec


def random_trig(rng: np.random.Generator, nterms: int = 3, bound: float = 1.0,
                max_freq: float = 3.0) -> TrigSum:
    """Random trigonometric sum with ``sup |b(t)| <= bound``."""
    amps = rng.uniform(-1, 1, size=(nterms, 2))
    amps *= bound / np.abs(amps).sum()
    freqs = rng.uniform(0.5, max_freq, size=nterms)
    return TrigSum(tuple((float(a), float(b), float(w)) for (a, b), w in zip(amps, freqs)))


# ------------------------------------------------------------ systems

@dataclass(frozen=True)
class TDSystem:
    """``dx/dt = sum_a coeffs[a](t) fields[a](x)``.  Fields are polynomial
    :class:`VectorField` objects or callables ``x -> ndarray``."""

    dim: int
    fields: tuple
    coeffs: tuple
    names: tuple = ()

    def __post_init__(self):
        if len(self.fields) != len(self.coeffs):
            raise ValueError(f"{len(self.fields)} fields but {len(self.coeffs)} coefficients")
        for f in self.fields:
            if isinstance(f, VectorField) and f.ring.ncoords != self.dim:
                raise ValueError("field dimension does not match the system")
        object.__setattr__(self, "_evals", tuple(f.numeric() if isinstance(f, VectorField) else f
                                                 for f in self.fields))

    def __call__(self, t: float, x) -> np.ndarray:
        out = np.zeros(self.dim)
        for b, f in zip(self.coeffs, self._evals):
            c = b(t)
            if c:
                out += c * f(x)
        return out


# ------------------------------------------------------------ integrator

class IntegrationError(RuntimeError):
    def __init__(self, message: str, t: float):
        super().__init__(f"{message} at t = {float(t)!r}")
        self.t = float(t)


class StepSizeUnderflow(IntegrationError):
    pass


class NonFiniteState(IntegrationError):
    pass


# Dormand-Prince 5(4) tableau
_C = np.array([0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1, 1])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_E = _B - np.array([5179 / 57600, 0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
# continuous extension (4th order), rows = stages, columns = powers of theta
_P = np.array([
    [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0, 0, 0, 0],
    [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

ERROR_FLOOR = 1e-12


def _stages(f, t, x, h, k0):
    K = np.empty((7, x.size))
    K[0] = k0
    # overflow shows up as a non-finite state and is handled by the caller
    with np.errstate(over="ignore", invalid="ignore"):
        for s in range(1, 7):
            K[s] = f(t + _C[s] * h, x + h * np.dot(_A[s], K[:s]))
    return K


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    stats: dict = field(default_factory=dict)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t"] + [f"x{i + 1}" for i in range(self.states.shape[1])])
        for t, x in zip(self.times, self.states):
            w.writerow([f"{t:.17g}"] + [f"{v:.17g}" for v in x])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text

    def to_json(self) -> dict:
        return {"times": [float(t) for t in self.times], "states": self.states.tolist(),
                "stats": dict(self.stats)}


def integrate(sys: TDSystem | Callable, x0, t_span, tol: float = 1e-8, t_eval=None,
              h0: float | None = None, max_steps: int = 1_000_000,
              fixed_step: float | None = None) -> Trajectory:
    """Integrate ``dx/dt = sys(t, x)`` over ``t_span``.

    Adaptive mode keeps the local error estimate below ``tol`` in the scaled
    max-norm ``|err_i| / (tol + tol |x_i|)`` (floor 1e-12).  ``fixed_step``
    switches to constant steps (no error control).  With ``t_eval`` the
    states are sampled by the 4th-order continuous extension.
    """
    x = np.array(x0, dtype=float)
    t0, t1 = (float(v) for v in t_span)
    if not tol > 0:
        raise ValueError("tol must be positive")
    if not t1 != t0:
        raise ValueError("empty time span")
    if not np.all(np.isfinite(x)):
        raise NonFiniteState("initial state is not finite", t0)
    direction = 1.0 if t1 > t0 else -1.0
    f = sys
    tol = max(tol, ERROR_FLOOR)
    t_eval = None if t_eval is None else np.asarray(t_eval, dtype=float)
    if t_eval is not None and np.any(np.diff(t_eval) * direction <= 0):
        raise ValueError("t_eval must be strictly monotone in the integration direction")

    times, states = [t0], [x.copy()]
    if t_eval is not None:
        times, states = [], []
        ei = 0
        while ei < t_eval.size and t_eval[ei] == t0:
            times.append(t0)
            states.append(x.copy())
            ei += 1
    stats = {"steps": 0, "rejected": 0, "fev": 1, "max_error_estimate": 0.0}

    t = t0
    k0 = f(t, x)
    span = abs(t1 - t0)
    if fixed_step is not None:
        h = abs(fixed_step)
    elif h0 is not None:
        h = abs(h0)
    else:
        scale = tol + tol * np.abs(x)
        d0, d1 = np.max(np.abs(x) / scale), np.max(np.abs(k0) / scale)
        h = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
        h = min(h, span)
    min_h = 16 * np.spacing(max(abs(t0), abs(t1), 1.0))

    while (t1 - t) * direction > 0:
        if stats["steps"] + stats["rejected"] >= max_steps:
            raise StepSizeUnderflow("step budget exhausted", t)
        h = min(h, abs(t1 - t))
        hs = h * direction
        K = _stages(f, t, x, hs, k0)
        stats["fev"] += 6
        with np.errstate(over="ignore", invalid="ignore"):
            x_new = x + hs * (_B @ K)
        if not np.all(np.isfinite(x_new)):
            if fixed_step is not None or h <= min_h:
                raise NonFiniteState("state became non-finite", t)
            h *= 0.2
            stats["rejected"] += 1
            continue
        scale = tol + tol * np.maximum(np.abs(x), np.abs(x_new))
        err = float(np.max(np.abs(hs * (_E @ K)) / scale))
        if fixed_step is None and err > 1.0:
            stats["rejected"] += 1
            h *= max(0.2, 0.9 * err ** -0.2)
            if h < min_h:
                raise StepSizeUnderflow("step size underflow (possible blow-up)", t)
            continue
        stats["steps"] += 1
        stats["max_error_estimate"] = max(stats["max_error_estimate"], err * float(np.max(scale)))
        t_new = t + hs if abs(t1 - (t + hs)) > min_h else t1
        k1 = K[6]
        if t_eval is None:
            times.append(t_new)
            states.append(x_new.copy())
        else:
            while ei < t_eval.size and (t_new - t_eval[ei]) * direction >= 0:
                theta = (t_eval[ei] - t) / hs
                Q = K.T @ _P
                times.append(float(t_eval[ei]))
                states.append(x + hs * (Q @ theta ** np.arange(1, 5)))
                ei += 1
        t, x, k0 = t_new, x_new, k1
        if fixed_step is None:
            h *= min(5.0, max(0.2, 0.9 * (err if err > 0 else 1e-10) ** -0.2))
    return Trajectory(np.array(times), np.array(states), stats)


def drift(traj: Trajectory, f: Callable) -> float:
    """``max_t |f(x(t)) - f(x(t0))|``."""
    ref = f(traj.states[0])
    return float(max(abs(f(x) - ref) for x in traj.states))


def vg_closure_report(fields: Sequence[VectorField]):
    """Exact structure constants of ``span(fields)``, or the first bracket
    that leaves the span (a falsy ``ClosureFailure``)."""
    if not all(isinstance(X, VectorField) for X in fields):
        raise TypeError("closure reports need polynomial vector fields")
    return closure_constants(list(fields))


def trajectory_json(traj: Trajectory, **extra) -> str:
    data = traj.to_json()
    data.update(extra)
    return json.dumps(data, default=float)
