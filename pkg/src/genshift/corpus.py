"""Named test functions used by the verification drivers and experiments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DomainError
from .jacobi import JacobiBasis, PolynomialCoeffs, jacobi_table
from .spaces import FunctionHandle, SampledFunction, load_function_csv

__all__ = ["CorpusFunction", "corpus", "corpus_entries"]


@dataclass(frozen=True)
class CorpusFunction:
    name: str
    params: dict
    handle: FunctionHandle
    d_smooth_bounded: bool  # whether D f = (1-x^2)f'' - (2mu+2)x f' stays bounded

    def __call__(self, x):
        return self.handle(x)

    @property
    def fn(self):
        return self.handle.fn

    @property
    def d1(self):
        return self.handle.d1

    @property
    def d2(self):
        return self.handle.d2

    @property
    def poly(self):
        return self.handle.poly


def _abs_power(gamma: float) -> CorpusFunction:
    if gamma <= 0.0:
        raise DomainError(f"abs_power needs gamma > 0, got {gamma}")

    def fn(x):
        return np.abs(x) ** gamma

    d1 = None
    d2 = None
    if gamma > 1.0:
        d1 = lambda x: gamma * np.sign(x) * np.abs(x) ** (gamma - 1.0)
    if gamma > 2.0:
        d2 = lambda x: gamma * (gamma - 1.0) * np.abs(x) ** (gamma - 2.0)
    elif gamma == 2.0:
        d1 = lambda x: 2.0 * np.asarray(x, float)
        d2 = lambda x: 2.0 * np.ones_like(np.asarray(x, float))
    return CorpusFunction(
        name="abs_power",
        params={"gamma": gamma},
        handle=FunctionHandle(fn=fn, d1=d1, d2=d2, label=f"|x|^{gamma}"),
        d_smooth_bounded=gamma >= 2.0,
    )


def _bump(s: float) -> CorpusFunction:
    if s <= 0.0:
        raise DomainError(f"bump needs s > 0, got {s}")

    def fn(x):
        return (1.0 - x * x) ** s

    def d1(x):
        return -2.0 * s * x * (1.0 - x * x) ** (s - 1.0)

    def d2(x):
        u = 1.0 - x * x
        if s == 1.0:
            return -2.0 * s * np.ones_like(np.asarray(x, float))
        return -2.0 * s * u ** (s - 1.0) + 4.0 * s * (s - 1.0) * x * x * u ** (s - 2.0)

    poly = None
    if float(s).is_integer():
        # exact Jacobi-basis representation via interpolation at deg+1 Chebyshev points
        deg = 2 * int(s)
        basis = JacobiBasis(0.0, 0.0)
        xs = np.cos(np.pi * (2 * np.arange(deg + 1) + 1) / (2 * (deg + 1)))
        table = jacobi_table(deg, basis, xs)
        coeffs = np.linalg.solve(table.T, fn(xs))
        poly = PolynomialCoeffs(basis, coeffs)
    return CorpusFunction(
        name="bump",
        params={"s": s},
        handle=FunctionHandle(fn=fn, d1=d1, d2=d2, label=f"(1-x^2)^{s}", poly=poly),
        d_smooth_bounded=s >= 1.0,
    )


def _runge() -> CorpusFunction:
    fn = lambda x: 1.0 / (1.0 + 25.0 * x * x)
    d1 = lambda x: -50.0 * x / (1.0 + 25.0 * x * x) ** 2
    d2 = lambda x: (3750.0 * x * x - 50.0) / (1.0 + 25.0 * x * x) ** 3
    return CorpusFunction(
        name="runge",
        params={},
        handle=FunctionHandle(fn=fn, d1=d1, d2=d2, label="1/(1+25x^2)"),
        d_smooth_bounded=True,
    )


def _jacobi_series(s: float, K: int, mu: float) -> CorpusFunction:
    if s <= 0.0:
        raise DomainError(f"jacobi_series needs decay s > 0, got {s}")
    if K < 1:
        raise DomainError(f"jacobi_series needs K >= 1, got {K}")
    coeffs = np.zeros(K + 1)
    for k in range(1, K + 1):
        coeffs[k] = float(k) ** (-s)
    poly = PolynomialCoeffs(JacobiBasis(mu, mu), coeffs)
    handle = FunctionHandle.from_poly(poly, label=f"sum k^-{s} R_k (K={K}, mu={mu})")
    return CorpusFunction(
        name="jacobi_series",
        params={"s": s, "K": K, "mu": mu},
        handle=handle,
        d_smooth_bounded=True,
    )


def _poly(coeffs, basis) -> CorpusFunction:
    if isinstance(basis, (tuple, list)):
        basis = JacobiBasis(float(basis[0]), float(basis[1]))
    poly = PolynomialCoeffs(basis, np.asarray(coeffs, dtype=float))
    handle = FunctionHandle.from_poly(poly, label=f"poly deg {poly.degree}")
    return CorpusFunction(
        name="poly",
        params={"coeffs": list(map(float, poly.coeffs)), "basis": (basis.a, basis.b)},
        handle=handle,
        d_smooth_bounded=True,
    )


def _user_csv(path=None, xs=None, values=None) -> CorpusFunction:
    if path is not None:
        sampled = load_function_csv(path)
    elif xs is not None and values is not None:
        sampled = SampledFunction(np.asarray(xs, float), np.asarray(values, float))
    else:
        raise ContractError("user_csv needs either a path or xs/values arrays")
    return CorpusFunction(
        name="user_csv",
        params={"points": int(sampled.abscissae.size)},
        handle=sampled.to_handle(),
        d_smooth_bounded=False,
    )


_ENTRIES = {
    "abs_power": ("|x|^gamma", {"gamma": 1.0}),
    "jacobi_series": ("sum_{k=1..K} k^-s R_k^{(mu,mu)}", {"s": 1.5, "K": 16, "mu": 1.0}),
    "bump": ("(1-x^2)^s", {"s": 1.0}),
    "runge": ("1/(1+25 x^2)", {}),
    "poly": ("coefficients in a normalized Jacobi basis", {"coeffs": [0.0, 1.0], "basis": (1.0, 1.0)}),
    "user_csv": ("two-column (x, value) CSV data", {}),
}


def corpus(name: str, **params) -> CorpusFunction:
    """Build a corpus member by name; see ``corpus_entries`` for the catalog."""
    if name == "abs_power":
        return _abs_power(float(params.get("gamma", 1.0)))
    if name == "jacobi_series":
        return _jacobi_series(
            float(params.get("s", 1.5)), int(params.get("K", 16)), float(params.get("mu", 1.0))
        )
    if name == "bump":
        return _bump(float(params.get("s", 1.0)))
    if name == "runge":
        return _runge()
    if name == "poly":
        return _poly(params.get("coeffs", [0.0, 1.0]), params.get("basis", (1.0, 1.0)))
    if name == "user_csv":
        return _user_csv(
            path=params.get("path"), xs=params.get("xs"), values=params.get("values")
        )
    raise ContractError(f"unknown corpus function {name!r}; known: {sorted(_ENTRIES)}")


def corpus_entries():
    """Catalog of corpus names with descriptions and default parameters."""
    return [
        {"name": name, "description": desc, "defaults": defaults}
        for name, (desc, defaults) in sorted(_ENTRIES.items())
    ]
