"""FastAPI service exposing the counting, recursion, construction,
optimization, detection, realizability and verification operations."""

from __future__ import annotations

import math

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..construction import (
    FusionSpec,
    build_recursive,
    build_verified,
    get_example,
)
from ..counting import PointConfig, build_similarity_hypergraph, count_eps_similar
from ..errors import SimtriError
from ..geometry import TriangleShape
from ..hypergraph import (
    Hypergraph3,
    contains_pattern,
    get_pattern,
    is_iterated_threepartite,
    pattern_library,
    six_vertex_dichotomy_sweep,
)
from ..optimize import f_eval, maximize_f, p_eval
from ..realize import (
    realize_pattern,
    scan_shape_space,
    verify_equilateral_grid_case,
)
from ..recursion import (
    compute_h,
    verify_gamma_bounds,
    verify_density_monotone,
    verify_supermultiplicative,
    verify_upper_bound,
)
from . import models as m

app = FastAPI(
    title="simtri",
    description="Counting and constructing planar sets rich in almost-similar triangles",
    version=__version__,
)


@app.exception_handler(SimtriError)
async def _domain_error(request: Request, exc: SimtriError):
    return JSONResponse(
        status_code=400,
        content={"detail": f"{type(exc).__name__}: {exc}"},
    )


@app.exception_handler(ValueError)
async def _value_error(request: Request, exc: ValueError):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.exception_handler(KeyError)
async def _key_error(request: Request, exc: KeyError):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


def shape_from_spec(spec: m.ShapeSpec) -> TriangleShape:
    if spec.z is not None:
        return TriangleShape.from_z(complex(spec.z[0], spec.z[1]))
    a, b, c = spec.angles_deg
    scale = 180.0 / (a + b + c)
    return TriangleShape.from_degrees(a * scale, b * scale, c * scale)


def _hypergraph(spec: m.HypergraphSpec) -> Hypergraph3:
    return Hypergraph3.from_edges(spec.r, spec.edges)


@app.get("/health", response_model=m.HealthResponse, response_model_by_alias=True)
def health():
    return m.HealthResponse(status="ok", version=__version__)


@app.post("/count", response_model=m.CountResponse, response_model_by_alias=True,
          response_model_exclude_none=True)
def count(req: m.CountRequest):
    T = shape_from_spec(req.shape)
    eps = math.radians(req.eps_deg)
    P = PointConfig.from_list(req.points)
    if req.include_edges:
        sc = build_similarity_hypergraph(P, T, eps)
        return m.CountResponse(
            n=len(P), total=sc.total, edges=sorted(sc.hypergraph.edges)
        )
    return m.CountResponse(n=len(P), total=count_eps_similar(P, T, eps))


@app.post("/hn", response_model=m.HnResponse, response_model_by_alias=True)
def hn(req: m.HnRequest):
    table = compute_h(req.n_max)
    rows = []
    for n, h in enumerate(table.values):
        ub = (n**3 - n) // 24
        split = table.splits[n]
        rows.append(
            m.HnRow(
                n=n,
                h=h,
                a=None if split is None else split[0],
                b=None if split is None else split[1],
                c=None if split is None else split[2],
                upper_bound=ub,
                gap=ub - h,
            )
        )
    return m.HnResponse(rows=rows)


@app.post("/build", response_model=m.BuildResponse, response_model_by_alias=True,
          response_model_exclude_none=True)
def build(req: m.BuildRequest):
    if req.example is not None:
        ex = get_example(req.example)
        spec = FusionSpec(
            Q=ex.Q, T=ex.T, eps=math.radians(req.eps_deg), x=ex.optimum_x
        )
    else:
        c = req.custom
        spec = FusionSpec(
            Q=PointConfig.from_list(c.points),
            T=shape_from_spec(c.shape),
            eps=math.radians(c.eps_deg),
            x=tuple(c.weights),
        )
    built = build_verified(spec, req.n) if req.verify_recount else build_recursive(
        spec, req.n
    )
    recount = (
        count_eps_similar(built.config, spec.T, spec.eps)
        if req.verify_recount
        else None
    )
    return m.BuildResponse(
        n=built.n,
        points=[(float(x), float(y)) for x, y in built.config.points],
        predicted_count=built.predicted,
        recount=recount,
        rho=built.rho,
        tree=built.tree,
    )


@app.post("/optimize", response_model=m.OptimizeResponse, response_model_by_alias=True)
def optimize(req: m.OptimizeRequest):
    if req.example is not None:
        ex = get_example(req.example)
        F = build_similarity_hypergraph(ex.Q, ex.T, math.radians(0.5)).hypergraph
    else:
        F = _hypergraph(req.hypergraph)
    res = maximize_f(F, starts=req.starts, tol=req.tol, seed=req.seed)
    return m.OptimizeResponse(
        value=res.value,
        x_star=[float(v) for v in res.x_star.x],
        starts_used=res.starts_used,
        converged=res.converged,
    )


@app.post("/detect", response_model=m.DetectResponse, response_model_by_alias=True,
          response_model_exclude_none=True)
def detect(req: m.DetectRequest):
    H = _hypergraph(req.hypergraph)
    names = req.patterns or [p.name for p in pattern_library()]
    results = {}
    for name in names:
        pat = get_pattern(name)
        mapping = contains_pattern(H, pat)
        results[name] = m.DetectResult(found=mapping is not None, mapping=mapping)
    itp = is_iterated_threepartite(H) if H.r <= 12 else None
    return m.DetectResponse(results=results, iterated_threepartite=itp)


@app.post("/realize", response_model=m.RealizeResponse, response_model_by_alias=True,
          response_model_exclude_none=True)
def realize(req: m.RealizeRequest):
    T = shape_from_spec(req.shape)
    res = realize_pattern(req.pattern, T.z, req.tol)
    return m.RealizeResponse(
        found=res.found,
        points=None
        if res.Q is None
        else [(float(x), float(y)) for x, y in res.Q.points],
        branch_trace=res.branch_trace,
        residual=res.residual if math.isfinite(res.residual) else -1.0,
    )


@app.post("/scan", response_model=m.ScanResponse, response_model_by_alias=True)
def scan(req: m.ScanRequest):
    result = scan_shape_space(req.pattern, req.grid_steps, req.tol, req.threads)
    return m.ScanResponse(
        fraction=result.fraction,
        rows=[
            m.ScanRowModel(
                alpha=r.alpha,
                beta=r.beta,
                gamma=r.gamma,
                realizable=r.realizable,
                residual=r.residual,
            )
            for r in result.rows
        ],
    )


@app.post(
    "/verify/appendix",
    response_model=m.VerifyAppendixResponse,
    response_model_by_alias=True,
)
def verify_appendix(req: m.VerifyAppendixRequest):
    table = compute_h(req.n_max)
    rep_ub = verify_upper_bound(table)
    rep_mono = verify_density_monotone(table.values, 3)
    rep_super = verify_supermultiplicative(table.values, 3)
    from fractions import Fraction

    rep_gamma = verify_gamma_bounds(table.values, 3, Fraction(1, 4))
    fact_violations = _f_range_sample(req.f_range_samples, req.seed)
    ok = (
        rep_ub.ok
        and rep_mono.ok
        and rep_super.ok
        and rep_gamma.ok
        and fact_violations == 0
    )
    return m.VerifyAppendixResponse(
        ok=ok,
        upper_bound_violations=len(rep_ub.violations),
        monotone_violations=len(rep_mono.violations),
        supermultiplicative_violations=len(rep_super.violations),
        gamma_bounds_violations=len(rep_gamma.violations),
        f_range_violations=fact_violations,
        gamma_estimate=rep_ub.gamma_estimate,
    )


def _f_range_sample(samples: int, seed: int) -> int:
    """Random (F, x) draws checking 0 < f(x) < 1/6 for covering hypergraphs."""
    import itertools

    rng = np.random.default_rng(seed)
    bad = 0
    for _ in range(samples):
        r = int(rng.integers(3, 9))
        triples = list(itertools.combinations(range(1, r + 1), 3))
        while True:
            take = rng.random(len(triples)) < rng.uniform(0.1, 0.9)
            edges = [t for t, keep in zip(triples, take) if keep]
            if edges and len({v for e in edges for v in e}) == r:
                break
        F = Hypergraph3.from_edges(r, edges)
        x = rng.dirichlet(np.ones(r))
        x = np.maximum(x, 1e-9)
        x = x / x.sum()
        val = f_eval(F, list(x))
        if not (0.0 < val < 1.0 / 6.0):
            bad += 1
    return bad


@app.post(
    "/verify/sweep", response_model=m.VerifySweepResponse, response_model_by_alias=True
)
def verify_sweep():
    res = six_vertex_dichotomy_sweep()
    return m.VerifySweepResponse(
        ok=res["counterexamples"] == 0,
        checked=res["checked"],
        counterexamples=res["counterexamples"],
    )


@app.post(
    "/verify/gridcase",
    response_model=m.VerifyGridCaseResponse,
    response_model_by_alias=True,
)
def verify_gridcase():
    return m.VerifyGridCaseResponse(ok=verify_equilateral_grid_case())
