"""Discrete index transforms with Bessel and Lommel kernels.

Three transform pairs are implemented, each as a forward series and an
integral analysis map:

``ReJ``
    ``f(x) = sum_{n>=0} a_n Re J_{in}(x) / cosh(pi n/2)`` and
    ``a_n = int_0^inf Re J_{in}(x) f(x) dx / cosh(pi n/2)``.
``ImJ``
    the same with ``Im J_{in} / sinh(pi n/2)`` and ``n >= 1``.
``Lommel``
    ``f(x) = sum_{n>=1} a_n G_n S_{mu,in}(x)`` and
    ``a_n = G_n int_0^inf S_{mu,in}(x) f(x) dx`` with
    ``G_n = |Gamma((1 - mu + i n)/2)|**2``.

Each pair has an inversion recovering ``a_n`` from ``f`` through the
elementary kernels

* ``Phi_n(x) = int_0^pi sin(x cosh u) sinh u cos(n u) du``,
* ``Psi_n(x) = int_0^pi cos(x cosh u) sinh u cos(n u) du``,
* ``Omega_n(x) = int_0^pi sin(x cosh u - pi mu/2) sinh u sin(n u) du``,

and an inversion recovering ``f`` from its coefficients when ``f`` is
generated by a periodic profile ``psi``.

With ``v = cosh u`` the kernels are ``int_1^C e^{i x v} phi(v) dv`` with
``C = cosh(pi)``, ``phi = cos(n acosh v)`` or ``sin(n acosh v)``.  For large
``x`` they are evaluated from the endpoint asymptotic expansions at ``v = 1``
and ``v = C``, whose coefficients follow from the Chebyshev-type equation
``(1 - v^2) y'' - v y' - n^2 y = 0`` satisfied by both choices of ``phi``.
Elsewhere composite Gauss-Legendre quadrature in ``u`` is used.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from . import specfun
from .exceptions import AdmissibilityError, DomainError, ProfileClassError
from .quad import EvalReport, QuadConfig, integrate_finite, integrate_oscillatory_improper

COSH_PI = math.cosh(math.pi)
SINH_PI = math.sinh(math.pi)

#: Tolerances used by the inversion and analysis maps when none are given.
INVERSION_CONFIG = QuadConfig(abs_tol=1e-8, rel_tol=1e-8)

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)
_EXPANSION_TOL = 1e-13

CORRECTION_MODES = ("consistent", "theorem", "proof")


# ---------------------------------------------------------------------------
# Data types


@dataclass(frozen=True)
class TransformKind:
    """Selects one of the three transform pairs.

    Parameters
    ----------
    tag : {"ReJ", "ImJ", "Lommel"}
    mu : float, optional
        Lommel parameter, required for and only for ``Lommel``, with
        ``-5/4 < mu < 0``.
    """

    tag: str
    mu: float | None = None

    _ALIASES = {"rej": "ReJ", "re": "ReJ", "imj": "ImJ", "im": "ImJ", "lommel": "Lommel"}

    def __post_init__(self):
        tag = self._ALIASES.get(str(self.tag).lower())
        if tag is None:
            raise ValueError(f"unknown transform kind {self.tag!r}")
        object.__setattr__(self, "tag", tag)
        if tag == "Lommel":
            if self.mu is None:
                raise DomainError("Lommel kind needs mu")
            mu = float(self.mu)
            if not -1.25 < mu < 0.0:
                raise DomainError(f"Lommel kind needs -5/4 < mu < 0, got {mu}")
            object.__setattr__(self, "mu", mu)
        elif self.mu is not None:
            raise DomainError(f"{tag} kind takes no mu")

    @classmethod
    def rej(cls) -> "TransformKind":
        return cls("ReJ")

    @classmethod
    def imj(cls) -> "TransformKind":
        return cls("ImJ")

    @classmethod
    def lommel(cls, mu: float) -> "TransformKind":
        return cls("Lommel", mu)

    @property
    def min_index(self) -> int:
        return 0 if self.tag == "ReJ" else 1

    @property
    def admissibility(self) -> str:
        return "summable" if self.tag == "Lommel" else "weighted"

    def check_index(self, n: int) -> int:
        if isinstance(n, (bool, np.bool_)) or int(n) != n or n < self.min_index:
            raise DomainError(f"index {n!r} outside the index set of {self.tag}")
        return int(n)

    def __str__(self) -> str:
        return self.tag if self.mu is None else f"{self.tag}(mu={self.mu:g})"


@dataclass(frozen=True)
class CoeffSeq:
    """Finite coefficient sequence ``a_start, ..., a_N``.

    Parameters
    ----------
    start_index : {0, 1}
    coeffs : sequence of float
    admissibility : {"weighted", "summable"}
        ``weighted`` means ``sum n |a_n| < inf`` (Bessel pairs), ``summable``
        means ``sum |a_n| < inf`` (Lommel pair).  Both hold for any finite
        sequence; the tag records which pair the sequence is meant for.
    """

    start_index: int
    coeffs: tuple
    admissibility: str = "weighted"

    def __post_init__(self):
        if self.start_index not in (0, 1):
            raise AdmissibilityError("start_index must be 0 or 1")
        arr = tuple(float(c) for c in self.coeffs)
        if not all(math.isfinite(c) for c in arr):
            raise AdmissibilityError("coefficients must be finite")
        object.__setattr__(self, "coeffs", arr)
        if self.admissibility not in ("weighted", "summable"):
            raise AdmissibilityError(f"unknown admissibility class {self.admissibility!r}")

    @classmethod
    def for_kind(cls, kind: TransformKind, coeffs: Sequence[float], start_index: int | None = None):
        start = kind.min_index if start_index is None else start_index
        seq = cls(start, tuple(coeffs), kind.admissibility)
        seq.check_for(kind)
        return seq

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.start_index, self.start_index + len(self.coeffs))

    @property
    def weighted_norm(self) -> float:
        return float(np.sum(self.indices * np.abs(self.coeffs)))

    @property
    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))

    def items(self):
        return zip(self.indices.tolist(), self.coeffs)

    def check_for(self, kind: TransformKind) -> None:
        """Raise `AdmissibilityError` unless the sequence suits `kind`."""
        if self.start_index < kind.min_index:
            raise AdmissibilityError(f"{kind.tag} sequences start at n = {kind.min_index}")
        if self.admissibility != kind.admissibility:
            raise AdmissibilityError(
                f"{kind.tag} needs a {kind.admissibility} sequence, got {self.admissibility}")


@dataclass(frozen=True)
class PeriodicProfile:
    """Trigonometric polynomial ``psi(u) = sum c_k cos(k u) + sum s_k sin(k u)``.

    Both coefficient lists are indexed from ``k = 0``; ``sin_coeffs[0]`` must
    vanish.  Parity, ``psi(0)`` and a Lipschitz constant are derived.
    """

    cos_coeffs: tuple = ()
    sin_coeffs: tuple = ()
    parity: str = field(init=False)
    psi_at_zero: float = field(init=False)
    lipschitz_const: float = field(init=False)

    PRESETS = {"1-cos": ((1.0, -1.0), ()), "sin": ((), (0.0, 1.0)),
               "cos": ((0.0, 1.0), ()), "zero": ((), ())}

    def __post_init__(self):
        c = tuple(float(v) for v in self.cos_coeffs)
        s = tuple(float(v) for v in self.sin_coeffs)
        if not all(math.isfinite(v) for v in c + s):
            raise ProfileClassError("profile coefficients must be finite")
        if s and s[0] != 0.0:
            raise ProfileClassError("sin_coeffs[0] multiplies sin(0 u) and must be 0")
        object.__setattr__(self, "cos_coeffs", c)
        object.__setattr__(self, "sin_coeffs", s)
        has_c, has_s = any(c), any(s)
        parity = "none" if (has_c and has_s) else ("odd" if has_s else "even")
        object.__setattr__(self, "parity", parity)
        object.__setattr__(self, "psi_at_zero", float(sum(c)))
        lip = sum(k * abs(v) for k, v in enumerate(c)) + sum(k * abs(v) for k, v in enumerate(s))
        object.__setattr__(self, "lipschitz_const", float(lip))

    @classmethod
    def preset(cls, name: str) -> "PeriodicProfile":
        try:
            c, s = cls.PRESETS[name]
        except KeyError:
            raise ValueError(f"unknown profile preset {name!r}; choose from {sorted(cls.PRESETS)}")
        return cls(c, s)

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        for k, v in enumerate(self.cos_coeffs):
            if v:
                out = out + v * np.cos(k * u)
        for k, v in enumerate(self.sin_coeffs):
            if v:
                out = out + v * np.sin(k * u)
        return out

    @property
    def scale(self) -> float:
        return float(sum(map(abs, self.cos_coeffs)) + sum(map(abs, self.sin_coeffs)))

    def check_for(self, kind: TransformKind) -> None:
        """Raise `ProfileClassError` unless the profile fits the inversion class of `kind`."""
        if kind.tag in ("ReJ", "ImJ"):
            if any(self.sin_coeffs):
                raise ProfileClassError(f"{kind.tag} profiles must be even")
            if abs(self.psi_at_zero) > 1e-12 * max(1.0, self.scale):
                raise ProfileClassError(f"{kind.tag} profiles need psi(0) = 0, got {self.psi_at_zero:g}")


# ---------------------------------------------------------------------------
# Kernels


def _as_kind(kind) -> TransformKind:
    return kind if isinstance(kind, TransformKind) else TransformKind(kind)


@lru_cache(maxsize=512)
def _endpoint_coeffs(n: int, odd: bool, nterms: int = 40):
    """Taylor data of ``phi = cos(n acosh v)`` (or ``sin``) at both endpoints.

    Returns derivatives at ``v = C`` and, for the lower end, either the
    derivatives at ``v = 1`` or the coefficients of ``(v - 1)**(k + 1/2)``.
    """
    d_up = np.zeros(nterms)
    if odd:
        d_up[1] = n * (-1.0) ** n / SINH_PI
    else:
        d_up[0] = (-1.0) ** n
    one_minus = 1.0 - COSH_PI ** 2
    for k in range(nterms - 2):
        d_up[k + 2] = ((2 * k + 1) * COSH_PI * d_up[k + 1] + (k * k + n * n) * d_up[k]) / one_minus
    low = np.zeros(nterms)
    if odd:
        low[0] = n * math.sqrt(2.0)
        for k in range(nterms - 1):
            low[k + 1] = -((k + 0.5) ** 2 + n * n) * low[k] / ((k + 1.5) * (2 * k + 2))
        gam = np.array([math.gamma(k + 1.5) for k in range(nterms)])
        low = low * gam
    else:
        low[0] = 1.0
        for k in range(nterms - 1):
            low[k + 1] = -(k * k + n * n) * low[k] / (2 * k + 1)
    for arr in (d_up, low):
        arr.setflags(write=False)
    return d_up, low


def _asymptotic_sum(coef: np.ndarray, x: np.ndarray, powers: np.ndarray, phases: np.ndarray):
    """Sum ``coef_k e^{i phase_k} x^{-power_k}`` up to the smallest term."""
    logx = np.log(x)[:, None]
    with np.errstate(divide="ignore"):
        mag = np.where(coef != 0, np.log(np.abs(coef) + 1e-300), -np.inf)[None, :] - powers[None, :] * logx
    size = np.exp(np.minimum(mag, 700.0))
    # last index where terms are still decreasing (ignoring exact zeros)
    nz = coef != 0
    sizes_nz = np.where(nz[None, :], size, np.nan)
    run = np.fmin.accumulate(np.where(np.isnan(sizes_nz), np.inf, sizes_nz), axis=1)
    increasing = (sizes_nz > run) & nz[None, :]
    first_bad = np.where(increasing.any(axis=1), np.argmax(increasing, axis=1), coef.size)
    keep = np.arange(coef.size)[None, :] < first_bad[:, None]
    terms = np.where(keep, np.sign(coef)[None, :] * size, 0.0) * np.exp(1j * phases)[None, :]
    total = terms.sum(axis=1)
    # Truncated where terms start growing: the error is of the order of the
    # smallest term.  A series that never grows has error below its last term.
    smallest = np.take_along_axis(run, np.maximum(first_bad - 1, 0)[:, None], axis=1)[:, 0]
    tail = np.where(nz[-1], size[:, -1], 0.0)
    return total, np.where(first_bad < coef.size, smallest, tail)


def _expansion(n: int, odd: bool, x: np.ndarray):
    """Endpoint expansion of ``I(x) = int_1^C e^{i x v} phi(v) dv`` with an error estimate."""
    d_up, low = _endpoint_coeffs(n, odd)
    k = np.arange(d_up.size)
    # (-1)^k / (i x)^{k+1} = (-1)^k e^{-i pi (k+1)/2} x^{-(k+1)}
    ph = k * math.pi - 0.5 * math.pi * (k + 1)
    up, up_err = _asymptotic_sum(d_up, x, k + 1.0, ph)
    if odd:
        lo, lo_err = _asymptotic_sum(low, x, k + 1.5, 0.5 * math.pi * (k + 1.5))
    else:
        lo, lo_err = _asymptotic_sum(low, x, k + 1.0, ph + math.pi)
    value = np.exp(1j * COSH_PI * x) * up + np.exp(1j * x) * lo
    err = up_err + lo_err + 1e-16 * (np.abs(up) + np.abs(lo))
    return value, err


def _u_panels(xmax: float, n: int) -> np.ndarray:
    """Panel edges on ``[0, pi]``: equal phase steps of ``x cosh u`` plus a width cap."""
    m = int(math.ceil(max(xmax, 0.0) * (COSH_PI - 1.0) / 2.5))
    edges = [np.arccosh(1.0 + (COSH_PI - 1.0) * np.arange(m + 1) / m)] if m else []
    cap = min(0.25, 2.0 / max(n, 1))
    edges.append(np.linspace(0.0, math.pi, int(math.ceil(math.pi / cap)) + 1))
    edges = np.unique(np.round(np.concatenate(edges), 15))
    edges[-1] = math.pi
    return edges


def _kernel_quadrature(tag: str, n: int, x: np.ndarray, mu: float | None) -> np.ndarray:
    edges = _u_panels(float(x.max()), n)
    if x.size * edges.size * 16 > specfun._BLOCK_ENTRIES:
        return specfun.in_blocks(lambda xb: _kernel_quadrature(tag, n, xb, mu), x, edges.size * 16)
    a, b = edges[:-1], edges[1:]
    u = (0.5 * (a + b)[:, None] + 0.5 * (b - a)[:, None] * _GL_NODES[None, :]).ravel()
    w = (0.5 * (b - a)[:, None] * _GL_WEIGHTS[None, :]).ravel()
    phase = x[:, None] * np.cosh(u)[None, :]
    if tag == "ReJ":
        vals = np.sin(phase) * (np.sinh(u) * np.cos(n * u))[None, :]
    elif tag == "ImJ":
        vals = np.cos(phase) * (np.sinh(u) * np.cos(n * u))[None, :]
    else:
        vals = np.sin(phase - 0.5 * math.pi * mu) * (np.sinh(u) * np.sin(n * u))[None, :]
    return vals @ w


def kernel_values(kind, n: int, x, *, with_error: bool = False):
    """Vectorized inversion kernel ``Phi_n``, ``Psi_n`` or ``Omega_n``.

    Parameters
    ----------
    kind : TransformKind or str
    n : int
        Index; ``n >= 1`` for the Lommel kernel.
    x : array_like
        Positive arguments.
    with_error : bool
        Also return an absolute error estimate.

    Notes
    -----
    The endpoint expansion is used wherever its own truncation estimate is
    below ``1e-13``; remaining points use Gauss-Legendre panels that resolve
    every oscillation of ``sin(x cosh u)``.
    """
    kind = _as_kind(kind)
    n = kind.check_index(n) if kind.tag == "Lommel" else specfun._check_order(n)
    xa = np.asarray(x, dtype=float).ravel()
    if np.any(~(xa > 0)):
        raise DomainError("kernels are defined for x > 0")
    odd = kind.tag == "Lommel"
    val, err = specfun.in_blocks(lambda xb: _expansion(n, odd, xb), xa, 2 * _endpoint_coeffs(n, odd)[0].size)
    if kind.tag == "ReJ":
        out = val.imag
    elif kind.tag == "ImJ":
        out = val.real
    else:
        out = (np.exp(-0.5j * math.pi * kind.mu) * val).imag
    direct = ~(err <= _EXPANSION_TOL)
    if direct.any():
        out[direct] = _kernel_quadrature(kind.tag, n, xa[direct], kind.mu)
        err[direct] = 1e-14 * (COSH_PI - 1.0)
    out = out.reshape(np.shape(x))
    if with_error:
        return out, err.reshape(np.shape(x))
    return float(out) if out.ndim == 0 else out


def kernel(kind, n: int, x: float, cfg: QuadConfig | None = None) -> float:
    """Inversion kernel at one point by adaptive quadrature of its definition.

    This is the reference route; :func:`kernel_values` is the fast route.

    Examples
    --------
    >>> import math
    >>> x = 2.0
    >>> abs(kernel("ReJ", 0, x) - (math.cos(x) - math.cos(x * COSH_PI)) / x) < 1e-9
    True
    """
    kind = _as_kind(kind)
    n = kind.check_index(n) if kind.tag == "Lommel" else specfun._check_order(n)
    if not x > 0:
        raise DomainError("kernels are defined for x > 0")
    cfg = cfg or QuadConfig(abs_tol=1e-12, rel_tol=1e-12)
    if kind.tag == "ReJ":
        def f(u):
            return np.sin(x * np.cosh(u)) * np.sinh(u) * np.cos(n * u)
    elif kind.tag == "ImJ":
        def f(u):
            return np.cos(x * np.cosh(u)) * np.sinh(u) * np.cos(n * u)
    else:
        mu = kind.mu

        def f(u):
            return np.sin(x * np.cosh(u) - 0.5 * math.pi * mu) * np.sinh(u) * np.sin(n * u)
    return integrate_finite(f, 0.0, math.pi, cfg, breakpoints=_u_panels(x, n)).value


# ---------------------------------------------------------------------------
# Forward transforms


def _basis(kind: TransformKind, n: int, x: np.ndarray) -> np.ndarray:
    if kind.tag == "ReJ":
        return specfun.jin_normalized(n, x)[0]
    if kind.tag == "ImJ":
        return specfun.jin_normalized(n, x)[1]
    return specfun.lommel_scaled(kind.mu, n, x)


def synthesize(kind, a: CoeffSeq, x):
    """Forward series of a finite coefficient sequence.

    Parameters
    ----------
    kind : TransformKind or str
    a : CoeffSeq
        Sequence admissible for `kind`.
    x : float or array_like
        Positive arguments.

    Returns
    -------
    float or ndarray
        ``sum a_n re_n(x)`` (ReJ), ``sum a_n im_n(x)`` (ImJ) or
        ``sum a_n G_n S_{mu,in}(x)`` (Lommel).

    Examples
    --------
    >>> a = CoeffSeq.for_kind(TransformKind.rej(), [1.0])
    >>> round(synthesize("ReJ", a, 1.0), 10)
    0.7651976866
    """
    kind = _as_kind(kind)
    a.check_for(kind)
    xa = specfun._check_positive(x)
    out = np.zeros(np.shape(xa))
    for n, c in a.items():
        if c:
            out = out + c * _basis(kind, n, xa)
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# Improper integrals against the transform kernels


def _hints(half_period: float, offset: float = 0.0) -> Callable[[int], float]:
    return lambda k: offset + (k + 1) * half_period


def _improper(g, half_period: float, cfg: QuadConfig, drift: float | None, scale: float = 1.0,
              offset: float = 0.0) -> EvalReport:
    """``scale * int_0^inf g`` with the tolerance applying to the scaled value."""
    inner = QuadConfig(abs_tol=cfg.abs_tol / scale, rel_tol=cfg.rel_tol, max_panels=cfg.max_panels,
                       osc_max_lobes=cfg.osc_max_lobes, accel_order=cfg.accel_order)
    rep = integrate_oscillatory_improper(g, _hints(half_period, offset), inner, drift_exponent=drift)
    return EvalReport(scale * rep.value, scale * rep.err_est, rep.panels_used, rep.lobes_used, rep.converged)


def _default_half_period(kind: TransformKind) -> float:
    # Bessel kernels oscillate like cos(x - pi/4); products with functions
    # carrying the same frequency beat at frequency 2.  Lommel kernels do not
    # oscillate, so the function's own unit frequency is the slowest.
    return 0.5 * math.pi if kind.tag != "Lommel" else math.pi


def analyze(kind, f: Callable, n: int, cfg: QuadConfig | None = None, *,
            drift_exponent: float | None = None, half_period: float | None = None) -> EvalReport:
    """Coefficient ``a_n`` of `f` by the improper integral against the transform kernel.

    Parameters
    ----------
    kind : TransformKind or str
    f : callable
        Vectorized function on ``(0, inf)``.
    n : int
        Index in the index set of `kind`.
    cfg : QuadConfig, optional
        Tolerances for the returned coefficient.
    drift_exponent : float, optional
        Exponent ``p`` of a non-oscillating tail ``int_X^inf ~ X**-p`` in the
        product, if any.  Profile-generated functions have ``p = 3/2`` for the
        Bessel kinds and none for the Lommel kind.
    half_period : float, optional
        Half-period of the slowest oscillation of the integrand.

    Returns
    -------
    EvalReport

    Examples
    --------
    >>> psi = PeriodicProfile.preset("1-cos")
    >>> rep = analyze("ReJ", profile_function("ReJ", psi), 1, drift_exponent=1.5)
    >>> round(rep.value, 6)
    -1.570796
    """
    kind = _as_kind(kind)
    n = kind.check_index(n)
    cfg = cfg or INVERSION_CONFIG

    def g(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        pos = x > 0
        out[pos] = _basis(kind, n, x[pos]) * f(x[pos])
        return out

    return _improper(g, half_period or _default_half_period(kind), cfg, drift_exponent,
                     offset=0.25 * math.pi if kind.tag != "Lommel" else 0.0)


def _lommel_prefactor(mu: float, n: int) -> tuple[float, float]:
    """Sign and log of ``2**(1 - mu) sinh(pi n) / pi**3``."""
    log_sinh = math.pi * n + math.log1p(-math.exp(-2 * math.pi * n)) - math.log(2.0)
    return 1.0, (1.0 - mu) * math.log(2.0) + log_sinh - 3.0 * math.log(math.pi)


def invert_to_sequence(kind, f: Callable, n: int, cfg: QuadConfig | None = None, *,
                       drift_exponent: float | None = -1.0, half_period: float | None = None) -> EvalReport:
    """Recover ``a_n`` from ``f`` with the elementary inversion kernels.

    ``(2/pi) int Phi_n f`` (ReJ, ``n >= 1``; the weight is ``1/pi`` for
    ``n = 0``), ``-(2/pi) int Psi_n f`` (ImJ) or
    ``2**(1-mu) sinh(pi n) / pi**3 int Omega_n f`` (Lommel), each improper.

    Parameters
    ----------
    kind : TransformKind or str
    f : callable
        Vectorized function, typically a :func:`synthesize` output.
    n : int
    cfg : QuadConfig, optional
        Tolerances for the returned coefficient.
    drift_exponent : float or None
        Non-oscillating tail exponent of ``kernel * f``; the default ``-1``
        selects the value for series outputs (``1/2`` for the Bessel kinds,
        none for Lommel).
    half_period : float, optional
        Half-period of the slowest oscillation of the integrand.

    Returns
    -------
    EvalReport

    Examples
    --------
    >>> kind = TransformKind.lommel(-0.5)
    >>> a = CoeffSeq.for_kind(kind, [1.0, 0.5])
    >>> rep = invert_to_sequence(kind, lambda x: synthesize(kind, a, x), 2)
    >>> round(rep.value, 6)
    0.5
    """
    kind = _as_kind(kind)
    n = kind.check_index(n)
    cfg = cfg or INVERSION_CONFIG
    if drift_exponent == -1.0:
        drift_exponent = None if kind.tag == "Lommel" else 0.5
    if kind.tag == "Lommel":
        _, log_scale = _lommel_prefactor(kind.mu, n)
        scale = math.exp(log_scale)
    else:
        # cos(n u) has squared norm pi/2 on [0, pi] for n >= 1 but pi for
        # n = 0, so the zeroth coefficient carries half the weight.
        scale = (1.0 if n == 0 else 2.0) / math.pi
        if kind.tag == "ImJ":
            scale = -scale

    def g(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        pos = x > 0
        out[pos] = kernel_values(kind, n, x[pos]) * f(x[pos])
        return out

    rep = _improper(g, half_period or _default_half_period(kind), cfg, drift_exponent,
                    scale=abs(scale), offset=0.25 * math.pi if kind.tag != "Lommel" else 0.0)
    sign = 1.0 if scale > 0 else -1.0
    return EvalReport(sign * rep.value, rep.err_est, rep.panels_used, rep.lobes_used, rep.converged)


def correction_term(kind, x, mode: str = "theorem"):
    """Explicit addend of the printed function inversions for the Bessel kinds.

    ``mode="theorem"`` gives ``(2/(x pi)) sin(x (C-1)/2) sin(x (C+1)/2)`` for
    ReJ (``cos`` in the second factor for ImJ); ``mode="proof"`` the same with
    the opposite sign.
    """
    kind = _as_kind(kind)
    x = np.asarray(x, dtype=float)
    first = np.sin(0.5 * x * (COSH_PI - 1.0))
    second = np.sin(0.5 * x * (COSH_PI + 1.0)) if kind.tag == "ReJ" else np.cos(0.5 * x * (COSH_PI + 1.0))
    term = 2.0 / (x * math.pi) * first * second
    if mode == "proof":
        term = -term
    elif mode != "theorem":
        raise ValueError(f"correction mode must be 'theorem' or 'proof', got {mode!r}")
    return float(term) if term.ndim == 0 else term


def invert_to_function(kind, a: CoeffSeq, x, *, correction: str = "consistent"):
    """Reconstruct a profile-generated function from its coefficients.

    Parameters
    ----------
    kind : TransformKind or str
    a : CoeffSeq
        Coefficients of `kind`, as produced by :func:`analyze` or
        :func:`profile_coefficients`.
    x : float or array_like
        Positive arguments.
    correction : {"consistent", "theorem", "proof"}
        Treatment of the ``n = 0`` term for the Bessel kinds.

        ``consistent`` (default) uses the reconstruction that holds for every
        admissible profile:
        ``(a_0/pi) Phi_0 + (2/pi) sum_{n>=1} a_n Phi_n`` for ReJ and
        ``(2/pi) sum_{n>=1} a_n (Psi_0 - Psi_n)`` for ImJ (the latter uses
        ``psi(0) = 0`` to eliminate the unavailable ``n = 0`` coefficient).

        ``theorem`` and ``proof`` add the printed explicit term
        (:func:`correction_term`) with either sign to ``(2/pi) sum a_n K_n``.
        They reproduce ``f`` only for special profiles and are kept for
        comparison.

        Ignored for the Lommel kind, which has no correction term.

    Returns
    -------
    float or ndarray

    Examples
    --------
    >>> psi = PeriodicProfile.preset("1-cos")
    >>> a = profile_coeff_seq("ReJ", psi, 3)
    >>> f = invert_to_function("ReJ", a, 2.0)
    >>> abs(f - build_profile_function("ReJ", psi, 2.0)) < 1e-10
    True
    """
    kind = _as_kind(kind)
    a.check_for(kind)
    xa = specfun._check_positive(x)
    flat = np.atleast_1d(xa).astype(float)
    out = np.zeros_like(flat)
    if kind.tag == "Lommel":
        for n, c in a.items():
            if c:
                _, log_scale = _lommel_prefactor(kind.mu, n)
                weight = math.copysign(math.exp(log_scale + math.log(abs(c))), c)
                out += weight * kernel_values(kind, n, flat)
    elif correction == "consistent":
        if kind.tag == "ReJ":
            for n, c in a.items():
                if c:
                    out += (1.0 if n == 0 else 2.0) / math.pi * c * kernel_values(kind, n, flat)
        else:
            psi0 = kernel_values(kind, 0, flat)
            for n, c in a.items():
                if c:
                    out += 2.0 / math.pi * c * (psi0 - kernel_values(kind, n, flat))
    elif correction in ("theorem", "proof"):
        out += correction_term(kind, flat, correction)
        for n, c in a.items():
            if c:
                out += 2.0 / math.pi * c * kernel_values(kind, n, flat)
    else:
        raise ValueError(f"unknown correction mode {correction!r}; choose from {CORRECTION_MODES}")
    out = out.reshape(np.shape(xa))
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Profile-generated functions


def build_profile_function(kind, psi: PeriodicProfile, x: float, cfg: QuadConfig | None = None) -> float:
    """Profile-generated function at one point by quadrature of its definition.

    ``int_0^pi sin(x cosh u) psi(u) sinh u du`` (ReJ), the same with ``cos``
    (ImJ), or ``int_{-pi}^{pi} sin(x cosh u - pi mu/2) psi(u) sinh u du``
    (Lommel).

    Raises
    ------
    ProfileClassError
        If `psi` is outside the class the inversion requires.

    Examples
    --------
    >>> psi = PeriodicProfile.preset("1-cos")
    >>> f = build_profile_function("ReJ", psi, 2.0)
    >>> abs(f - profile_function("ReJ", psi)(2.0)) < 1e-10
    True
    """
    kind = _as_kind(kind)
    psi.check_for(kind)
    if not x > 0:
        raise DomainError("profile functions are defined for x > 0")
    cfg = cfg or QuadConfig(abs_tol=1e-12, rel_tol=1e-12)
    edges = _u_panels(x, len(psi.cos_coeffs) + len(psi.sin_coeffs))
    if kind.tag == "ReJ":
        return integrate_finite(lambda u: np.sin(x * np.cosh(u)) * psi(u) * np.sinh(u),
                                0.0, math.pi, cfg, breakpoints=edges).value
    if kind.tag == "ImJ":
        return integrate_finite(lambda u: np.cos(x * np.cosh(u)) * psi(u) * np.sinh(u),
                                0.0, math.pi, cfg, breakpoints=edges).value
    shift = 0.5 * math.pi * kind.mu
    edges = np.concatenate([-edges[::-1], edges])
    return integrate_finite(lambda u: np.sin(x * np.cosh(u) - shift) * psi(u) * np.sinh(u),
                            -math.pi, math.pi, cfg, breakpoints=edges).value


def profile_function(kind, psi: PeriodicProfile) -> Callable[[np.ndarray], np.ndarray]:
    """Vectorized profile-generated function as a kernel combination.

    Expanding ``psi`` in its trigonometric terms gives
    ``sum c_k Phi_k`` (ReJ), ``sum c_k Psi_k`` (ImJ) and
    ``2 sum s_k Omega_k`` (Lommel; even terms integrate to zero).
    """
    kind = _as_kind(kind)
    psi.check_for(kind)
    if kind.tag == "Lommel":
        terms = [(k, 2.0 * s) for k, s in enumerate(psi.sin_coeffs) if s and k >= 1]
    else:
        terms = [(k, c) for k, c in enumerate(psi.cos_coeffs) if c]

    def f(x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(np.shape(x))
        for k, c in terms:
            out = out + c * kernel_values(kind, k, x)
        return float(out) if out.ndim == 0 else out

    return f


def profile_coefficients(kind, psi: PeriodicProfile, n: int, cfg: QuadConfig | None = None) -> float:
    """Coefficient ``a_n`` of a profile-generated function from the profile alone.

    ``int_0^pi psi cos(n u) du`` for ReJ, its negative for ImJ, and
    ``2**mu pi**2 / sinh(pi n) int_{-pi}^{pi} psi sin(n u) du`` for Lommel.
    These equal what :func:`analyze` returns for :func:`profile_function`.

    Examples
    --------
    >>> psi = PeriodicProfile.preset("1-cos")
    >>> [round(profile_coefficients("ReJ", psi, n) / math.pi, 12) + 0.0 for n in range(3)]
    [1.0, -0.5, 0.0]
    """
    kind = _as_kind(kind)
    n = kind.check_index(n)
    cfg = cfg or QuadConfig(abs_tol=1e-13, rel_tol=1e-13)
    if kind.tag == "Lommel":
        val = integrate_finite(lambda u: psi(u) * np.sin(n * u), -math.pi, math.pi, cfg).value
        log_pref = kind.mu * math.log(2.0) + 2.0 * math.log(math.pi) - (
            math.pi * n + math.log1p(-math.exp(-2 * math.pi * n)) - math.log(2.0))
        return math.exp(log_pref) * val
    val = integrate_finite(lambda u: psi(u) * np.cos(n * u), 0.0, math.pi, cfg).value
    return val if kind.tag == "ReJ" else -val


def profile_coeff_seq(kind, psi: PeriodicProfile, n_max: int) -> CoeffSeq:
    """:func:`profile_coefficients` for every index up to `n_max`."""
    kind = _as_kind(kind)
    coeffs = [profile_coefficients(kind, psi, n) for n in range(kind.min_index, n_max + 1)]
    return CoeffSeq.for_kind(kind, coeffs)


def analyze_profile(kind, psi: PeriodicProfile, n: int, cfg: QuadConfig | None = None) -> EvalReport:
    """:func:`analyze` applied to a profile-generated function with the matching tail model."""
    kind = _as_kind(kind)
    drift = None if kind.tag == "Lommel" else 1.5
    return analyze(kind, profile_function(kind, psi), n, cfg, drift_exponent=drift)
