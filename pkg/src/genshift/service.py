"""FastAPI service exposing the library as JSON endpoints.

The service is pure compute: requests carry function specs and parameters,
responses carry values, reports, and tables.  File emission and exit codes
are the client's concern (see cli.py).
"""

from __future__ import annotations

import math
from typing import List, Optional, Union

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .approx import best_approx_sequence
from .corpus import CorpusFunction, corpus, corpus_entries
from .errors import ContractError, DomainError, NumericsError
from .smoothness import k_functional, modulus
from .spaces import SpaceParams, check_admissible
from .translation import asym_translate, sym_translate
from .verify import (
    ExperimentConfig,
    run_equivalence_experiment,
    run_jackson_experiment,
    verify_commutation,
    verify_integral_identity,
    verify_markov,
    verify_translation_identities,
)

app = FastAPI(
    title="genshift service",
    description=(
        "Generalized translation operators on [-1,1], moduli of smoothness, "
        "weighted best polynomial approximation, and Jackson-type verification."
    ),
    version=__version__,
)


class FunctionSpec(BaseModel):
    """Wire format for a corpus function.

    ``name`` picks the family; scalar parameters go in ``params``;
    ``coeffs``/``basis`` serve the ``poly`` family; ``xs``/``values`` carry
    inlined CSV data for ``user_csv``.
    """

    name: str
    params: dict = Field(default_factory=dict)
    coeffs: Optional[List[float]] = None
    basis: Optional[List[float]] = None
    xs: Optional[List[float]] = None
    values: Optional[List[float]] = None

    def build(self) -> CorpusFunction:
        kwargs = dict(self.params)
        if self.name == "poly":
            if self.coeffs is not None:
                kwargs["coeffs"] = self.coeffs
            if self.basis is not None:
                kwargs["basis"] = tuple(self.basis)
        if self.name == "user_csv":
            if self.xs is not None:
                kwargs["xs"] = self.xs
                kwargs["values"] = self.values
        return corpus(self.name, **kwargs)


class SpaceSpec(BaseModel):
    p: Union[float, str] = "inf"
    alpha: float = 0.0
    mu: float = 0.0

    def build(self) -> SpaceParams:
        return SpaceParams(self.p, self.alpha, self.mu)


class HealthResponse(BaseModel):
    status: str
    version: str


class AdmissibleResponse(BaseModel):
    ok: bool
    detail: str


class TranslateRequest(BaseModel):
    function: FunctionSpec
    mu: float = 1.0
    ts: List[float]
    xs: List[float]
    operator: str = "asym"  # asym | sym (sym interprets t as the angle, y = cos t)


class TranslateResponse(BaseModel):
    ts: List[float]
    xs: List[float]
    values: List[List[float]]  # values[i][j] = operator at (ts[i], xs[j])


class ModulusRequest(BaseModel):
    function: FunctionSpec
    space: SpaceSpec
    deltas: List[float]


class ModulusRow(BaseModel):
    delta: float
    value: float
    argmax_t: float
    t_grid_size: int


class ModulusResponse(BaseModel):
    rows: List[ModulusRow]


class KFunctionalRequest(BaseModel):
    function: FunctionSpec
    space: SpaceSpec
    deltas: List[float]
    degree: Optional[int] = None


class KFunctionalRow(BaseModel):
    delta: float
    value: float
    degree: int
    iterations: int


class KFunctionalResponse(BaseModel):
    rows: List[KFunctionalRow]


class BestApproxRequest(BaseModel):
    function: FunctionSpec
    space: SpaceSpec
    n_max: int = 16


class BestApproxResponse(BaseModel):
    n: List[int]
    values: List[float]
    sums: List[float]  # S(n) = n^-2 sum_{v<=n} v E_v


class Lemma1Request(BaseModel):
    mu_list: List[float] = Field(default_factory=lambda: [0.5, 1.0, 2.0, 3.0])
    n_max: int = 20
    grid_points: int = 41
    include_controls: bool = True
    tolerances: dict = Field(default_factory=dict)


class CommutationRequest(BaseModel):
    mu_list: List[float] = Field(default_factory=lambda: [1.0, 2.0])
    degree: int = 6
    draws: int = 2
    seed: int = 12345
    tolerance: float = 1e-6


class IntegralRequest(BaseModel):
    mu_list: List[float] = Field(default_factory=lambda: [1.0, 2.0])
    ys: List[float] = Field(default_factory=lambda: [-0.5, 0.0, 0.5, 0.9])
    degree: int = 4
    seed: int = 12345
    tolerance: float = 1e-6


class MarkovRequest(BaseModel):
    space: SpaceSpec
    degrees: List[int] = Field(default_factory=lambda: [8, 16, 32])
    draws: int = 200
    rho: float = 0.5
    seed: int = 12345


class JacksonExperimentRequest(BaseModel):
    function: FunctionSpec
    space: SpaceSpec
    n_min: int = 2
    n_max: int = 64
    seed: int = 12345


class EquivalenceRequest(BaseModel):
    function: FunctionSpec
    space: SpaceSpec
    deltas: List[float] = Field(default_factory=lambda: [math.pi / 2**k for k in range(1, 9)])
    seed: int = 12345


class ReportsResponse(BaseModel):
    reports: List[dict]
    tables: List[dict] = Field(default_factory=list)


def _wrap_errors(fn):
    try:
        return fn()
    except (DomainError, ContractError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    except NumericsError as exc:
        raise HTTPException(status_code=500, detail=f"numerics: {exc}")


@app.get("/health", response_model=HealthResponse)
def health():
    return HealthResponse(status="ok", version=__version__)


@app.get("/corpus")
def corpus_catalog():
    return {"entries": corpus_entries()}


@app.post("/admissible", response_model=AdmissibleResponse)
def admissible(space: SpaceSpec):
    verdict = _wrap_errors(lambda: check_admissible(space.build()))
    return AdmissibleResponse(ok=verdict.ok, detail=verdict.detail)


@app.post("/translate", response_model=TranslateResponse)
def translate(req: TranslateRequest):
    def run():
        f = req.function.build()
        values = []
        for t in req.ts:
            xs = np.asarray(req.xs, dtype=float)
            if req.operator == "asym":
                row = asym_translate(f.handle, t, req.mu, xs)
            elif req.operator == "sym":
                row = sym_translate(f.handle, math.cos(t), req.mu, xs)
            else:
                raise ContractError(f"unknown operator {req.operator!r}")
            values.append(np.atleast_1d(row).tolist())
        return TranslateResponse(ts=list(req.ts), xs=list(req.xs), values=values)

    return _wrap_errors(run)


@app.post("/modulus", response_model=ModulusResponse)
def modulus_endpoint(req: ModulusRequest):
    def run():
        f = req.function.build()
        space = req.space.build()
        rows = []
        for d in req.deltas:
            r = modulus(f.handle, d, space)
            rows.append(
                ModulusRow(delta=r.delta, value=r.value, argmax_t=r.argmax_t, t_grid_size=r.t_grid_size)
            )
        return ModulusResponse(rows=rows)

    return _wrap_errors(run)


@app.post("/kfunctional", response_model=KFunctionalResponse)
def kfunctional_endpoint(req: KFunctionalRequest):
    def run():
        f = req.function.build()
        space = req.space.build()
        rows = []
        for d in req.deltas:
            r = k_functional(f.handle, d, space, req.degree)
            rows.append(
                KFunctionalRow(delta=r.delta, value=r.value, degree=r.degree, iterations=r.iterations)
            )
        return KFunctionalResponse(rows=rows)

    return _wrap_errors(run)


@app.post("/bestapprox", response_model=BestApproxResponse)
def bestapprox_endpoint(req: BestApproxRequest):
    def run():
        f = req.function.build()
        space = req.space.build()
        values, sums, _ = best_approx_sequence(f.handle, req.n_max, space)
        return BestApproxResponse(n=list(range(1, req.n_max + 1)), values=values, sums=sums)

    return _wrap_errors(run)


@app.post("/verify/lemma1", response_model=ReportsResponse)
def verify_lemma1_endpoint(req: Lemma1Request):
    def run():
        reports = verify_translation_identities(
            req.mu_list,
            n_max=req.n_max,
            grid_points=req.grid_points,
            tolerances=req.tolerances,
            include_controls=req.include_controls,
        )
        return ReportsResponse(reports=[r.to_dict(include_runtime=True) for r in reports])

    return _wrap_errors(run)


@app.post("/verify/commutation", response_model=ReportsResponse)
def verify_commutation_endpoint(req: CommutationRequest):
    def run():
        reports = []
        for mu in req.mu_list:
            for k in range(req.draws):
                reports.append(
                    verify_commutation(
                        mu, seed=req.seed + k, degree=req.degree, tolerance=req.tolerance
                    )
                )
        return ReportsResponse(reports=[r.to_dict(include_runtime=True) for r in reports])

    return _wrap_errors(run)


@app.post("/verify/integral", response_model=ReportsResponse)
def verify_integral_endpoint(req: IntegralRequest):
    def run():
        rng = np.random.default_rng(req.seed)
        reports = []
        for mu in req.mu_list:
            coeffs = rng.standard_normal(req.degree + 1)
            f = corpus("poly", coeffs=coeffs.tolist(), basis=(mu, mu))
            reports.append(verify_integral_identity(f, req.ys, mu, tolerance=req.tolerance))
        return ReportsResponse(reports=[r.to_dict(include_runtime=True) for r in reports])

    return _wrap_errors(run)


@app.post("/verify/markov", response_model=ReportsResponse)
def verify_markov_endpoint(req: MarkovRequest):
    def run():
        report, table = verify_markov(
            req.space.build(),
            degrees=tuple(req.degrees),
            draws=req.draws,
            rho=req.rho,
            seed=req.seed,
        )
        return ReportsResponse(
            reports=[report.to_dict(include_runtime=True)], tables=[table.to_dict()]
        )

    return _wrap_errors(run)


@app.post("/experiment/jackson", response_model=ReportsResponse)
def experiment_jackson_endpoint(req: JacksonExperimentRequest):
    def run():
        f = req.function.build()
        space = req.space.build()
        report, table = run_jackson_experiment(
            f, space, range(req.n_min, req.n_max + 1), ExperimentConfig(seed=req.seed)
        )
        return ReportsResponse(
            reports=[report.to_dict(include_runtime=True)], tables=[table.to_dict()]
        )

    return _wrap_errors(run)


@app.post("/experiment/equivalence", response_model=ReportsResponse)
def experiment_equivalence_endpoint(req: EquivalenceRequest):
    def run():
        f = req.function.build()
        space = req.space.build()
        report, table = run_equivalence_experiment(
            f, space, req.deltas, ExperimentConfig(seed=req.seed)
        )
        return ReportsResponse(
            reports=[report.to_dict(include_runtime=True)], tables=[table.to_dict()]
        )

    return _wrap_errors(run)
