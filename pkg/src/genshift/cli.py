"""Command-line client for the genshift service.

By default commands run against an in-process instance of the FastAPI app;
``--server URL`` points them at a remote instance instead.  Experiment and
verification commands write CSV/JSON tables plus summary.json into --out and
exit nonzero when a non-control check fails (or a control unexpectedly
passes).
"""

from __future__ import annotations

import json
import math
import sys

import click

from .reports import ExperimentTable, VerificationReport, report_emit
from .spaces import load_function_csv


class ServiceClient:
    """POST/GET wrapper over either a remote server or the in-process app."""

    def __init__(self, server=None):
        if server:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=3600.0)
        else:
            from fastapi.testclient import TestClient

            from .service import app

            self._client = TestClient(app)

    def post(self, path, payload):
        resp = self._client.post(path, json=payload)
        if resp.status_code != 200:
            raise click.ClickException(f"{path} -> HTTP {resp.status_code}: {resp.text}")
        return resp.json()

    def get(self, path):
        resp = self._client.get(path)
        if resp.status_code != 200:
            raise click.ClickException(f"{path} -> HTTP {resp.status_code}: {resp.text}")
        return resp.json()


def _load_config(path):
    if not path:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _opt(value, config, key, default):
    """Flag wins over config file wins over default."""
    if value is not None:
        return value
    if key in config:
        return config[key]
    return default


def _parse_list(text, cast=float):
    return [cast(tok) for tok in str(text).replace(",", " ").split()]


def _fn_payload(fn, fn_params, csv_path, coeffs, basis):
    payload = {"name": fn, "params": {}}
    for item in fn_params:
        key, _, val = item.partition("=")
        if not _:
            raise click.ClickException(f"--fn-param expects key=value, got {item!r}")
        payload["params"][key] = float(val)
    if coeffs:
        payload["coeffs"] = _parse_list(coeffs)
    if basis:
        payload["basis"] = _parse_list(basis)
    if csv_path:
        sampled = load_function_csv(csv_path)
        payload["name"] = "user_csv"
        payload["xs"] = sampled.abscissae.tolist()
        payload["values"] = sampled.values.tolist()
    return payload


def _space_payload(p, alpha, mu):
    return {"p": "inf" if str(p).lower() in ("inf", "infinity") else float(p), "alpha": alpha, "mu": mu}


def _emit(payload, out, fmt, config_echo, seed):
    reports = [VerificationReport.from_dict(d) for d in payload.get("reports", [])]
    tables = [ExperimentTable.from_dict(d) for d in payload.get("tables", [])]
    summary, code, written = report_emit(
        reports, tables, out, fmt=fmt, config_echo=config_echo, seed=seed
    )
    for r in reports:
        tag = "control" if r.is_control else "check"
        click.echo(f"[{ 'PASS' if r.passed else 'FAIL' }] {tag} {r.name}")
    click.echo(f"wrote {len(written)} file(s) to {out}")
    return code


common_options = [
    click.option("--out", default=None, help="Output directory (default ./out)"),
    click.option("--format", "fmt", default=None, type=click.Choice(["csv", "json"]), help="Table format"),
    click.option("--seed", default=None, type=int, help="Random seed"),
    click.option("--config", "config_path", default=None, help="JSON config file (flags override)"),
    click.option("--server", default=None, help="Remote service URL (default: in-process)"),
]


def add_options(opts):
    def wrap(fn):
        for opt in reversed(opts):
            fn = opt(fn)
        return fn

    return wrap


@click.group()
def main():
    """Generalized-translation smoothness toolkit."""


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("genshift.service:app", host=host, port=port)


@main.group()
def corpus():
    """Corpus of named test functions."""


@corpus.command("list")
@add_options([click.option("--server", default=None)])
def corpus_list(server):
    """List available corpus functions."""
    client = ServiceClient(server)
    for entry in client.get("/corpus")["entries"]:
        click.echo(f"{entry['name']:>14}: {entry['description']}  defaults={entry['defaults']}")


@main.group()
def verify():
    """Identity and inequality verification suites."""


@verify.command("lemma1")
@click.option("--mu", default=None, help="Comma-separated mu values")
@click.option("--n-max", default=None, type=int)
@click.option("--grid-points", default=None, type=int)
@click.option("--tol", default=None, type=float, help="Override the normalization tolerance")
@click.option("--no-controls", is_flag=True, default=False)
@add_options(common_options)
def verify_lemma1(mu, n_max, grid_points, tol, no_controls, out, fmt, seed, config_path, server):
    """Translation-operator identity suite (normalization, eigenfunction,
    evenness, duality, coefficient transport) plus negative controls."""
    config = _load_config(config_path)
    payload = {
        "mu_list": _parse_list(_opt(mu, config, "mu", "0.5,1,2,3")),
        "n_max": _opt(n_max, config, "n_max", 20),
        "grid_points": _opt(grid_points, config, "grid_points", 41),
        "include_controls": not no_controls,
    }
    tol_val = _opt(tol, config, "tol", None)
    if tol_val is not None:
        payload["tolerances"] = {"normalization": tol_val}
    result = ServiceClient(server).post("/verify/lemma1", payload)
    code = _emit(result, _opt(out, config, "out", "out"), _opt(fmt, config, "format", "csv"),
                 payload, _opt(seed, config, "seed", None))
    sys.exit(code)


@verify.command("commutation")
@click.option("--mu", default=None, help="Comma-separated mu values")
@click.option("--degree", default=None, type=int)
@click.option("--draws", default=None, type=int)
@click.option("--tol", default=None, type=float)
@add_options(common_options)
def verify_commutation_cmd(mu, degree, draws, tol, out, fmt, seed, config_path, server):
    """tau(Df) = D_x tau f = D_y tau f for random polynomials."""
    config = _load_config(config_path)
    payload = {
        "mu_list": _parse_list(_opt(mu, config, "mu", "1,2")),
        "degree": _opt(degree, config, "degree", 6),
        "draws": _opt(draws, config, "draws", 2),
        "seed": _opt(seed, config, "seed", 12345),
        "tolerance": _opt(tol, config, "tol", 1e-6),
    }
    result = ServiceClient(server).post("/verify/commutation", payload)
    code = _emit(result, _opt(out, config, "out", "out"), _opt(fmt, config, "format", "csv"),
                 payload, payload["seed"])
    sys.exit(code)


@verify.command("integral")
@click.option("--mu", default=None, help="Comma-separated mu values")
@click.option("--y", "ys", default=None, help="Comma-separated y anchors")
@click.option("--degree", default=None, type=int)
@click.option("--tol", default=None, type=float)
@add_options(common_options)
def verify_integral_cmd(mu, ys, degree, tol, out, fmt, seed, config_path, server):
    """Double-integral representations of tau_y f - f and tau_y f - tau_0 f."""
    config = _load_config(config_path)
    payload = {
        "mu_list": _parse_list(_opt(mu, config, "mu", "1,2")),
        "ys": _parse_list(_opt(ys, config, "y", "-0.5,0,0.5,0.9")),
        "degree": _opt(degree, config, "degree", 4),
        "seed": _opt(seed, config, "seed", 12345),
        "tolerance": _opt(tol, config, "tol", 1e-6),
    }
    result = ServiceClient(server).post("/verify/integral", payload)
    code = _emit(result, _opt(out, config, "out", "out"), _opt(fmt, config, "format", "csv"),
                 payload, payload["seed"])
    sys.exit(code)


@verify.command("markov")
@click.option("--mu", default=None, type=float)
@click.option("--p", default=None)
@click.option("--alpha", default=None, type=float)
@click.option("--degrees", default=None, help="Comma-separated degrees")
@click.option("--draws", default=None, type=int)
@click.option("--rho", default=None, type=float)
@add_options(common_options)
def verify_markov_cmd(mu, p, alpha, degrees, draws, rho, out, fmt, seed, config_path, server):
    """Markov-Bernstein ratio sweep over random polynomials."""
    config = _load_config(config_path)
    payload = {
        "space": _space_payload(
            _opt(p, config, "p", "inf"),
            _opt(alpha, config, "alpha", 0.5),
            _opt(mu, config, "mu", 1.0),
        ),
        "degrees": [int(v) for v in _parse_list(_opt(degrees, config, "degrees", "8,16,32"))],
        "draws": _opt(draws, config, "draws", 200),
        "rho": _opt(rho, config, "rho", 0.5),
        "seed": _opt(seed, config, "seed", 12345),
    }
    result = ServiceClient(server).post("/verify/markov", payload)
    code = _emit(result, _opt(out, config, "out", "out"), _opt(fmt, config, "format", "csv"),
                 payload, payload["seed"])
    sys.exit(code)


_fn_options = [
    click.option("--fn", default=None, help="Corpus function name"),
    click.option("--fn-param", "fn_params", multiple=True, help="key=value, repeatable"),
    click.option("--csv", "csv_path", default=None, help="Two-column CSV (x,value)"),
    click.option("--coeffs", default=None, help="Comma-separated coefficients (poly)"),
    click.option("--basis", default=None, help="Comma-separated basis pair a,b (poly)"),
]


@main.group()
def experiment():
    """Jackson and modulus/K-functional equivalence experiments."""


@experiment.command("jackson")
@add_options(_fn_options)
@click.option("--mu", default=None, type=float)
@click.option("--p", default=None)
@click.option("--alpha", default=None, type=float)
@click.option("--n-max", default=None, type=int)
@add_options(common_options)
def experiment_jackson(fn, fn_params, csv_path, coeffs, basis, mu, p, alpha, n_max,
                       out, fmt, seed, config_path, server):
    """Table of E_n, omega(f,1/n), S(n) and the two ratio columns."""
    config = _load_config(config_path)
    mu_v = _opt(mu, config, "mu", 1.0)
    payload = {
        "function": _fn_payload(_opt(fn, config, "fn", "abs_power"), fn_params, csv_path, coeffs, basis),
        "space": _space_payload(
            _opt(p, config, "p", "inf"), _opt(alpha, config, "alpha", mu_v / 2.0), mu_v
        ),
        "n_min": 2,
        "n_max": _opt(n_max, config, "n_max", 64),
        "seed": _opt(seed, config, "seed", 12345),
    }
    result = ServiceClient(server).post("/experiment/jackson", payload)
    code = _emit(result, _opt(out, config, "out", "out"), _opt(fmt, config, "format", "csv"),
                 payload, payload["seed"])
    sys.exit(code)


@experiment.command("equivalence")
@add_options(_fn_options)
@click.option("--mu", default=None, type=float)
@click.option("--p", default=None)
@click.option("--alpha", default=None, type=float)
@click.option("--delta-grid", default=None, help="Comma-separated deltas (default pi/2^k, k=1..8)")
@add_options(common_options)
def experiment_equivalence(fn, fn_params, csv_path, coeffs, basis, mu, p, alpha, delta_grid,
                           out, fmt, seed, config_path, server):
    """Table of omega, K-hat, rho, and rho*cos^{2mu}(delta/2) over deltas."""
    config = _load_config(config_path)
    mu_v = _opt(mu, config, "mu", 1.0)
    deltas = _opt(delta_grid, config, "delta_grid", None)
    payload = {
        "function": _fn_payload(_opt(fn, config, "fn", "abs_power"), fn_params, csv_path, coeffs, basis),
        "space": _space_payload(
            _opt(p, config, "p", "inf"), _opt(alpha, config, "alpha", mu_v / 2.0), mu_v
        ),
        "seed": _opt(seed, config, "seed", 12345),
    }
    if deltas is not None:
        payload["deltas"] = _parse_list(deltas)
    else:
        payload["deltas"] = [math.pi / 2**k for k in range(1, 9)]
    result = ServiceClient(server).post("/experiment/equivalence", payload)
    code = _emit(result, _opt(out, config, "out", "out"), _opt(fmt, config, "format", "csv"),
                 payload, payload["seed"])
    sys.exit(code)


@main.command()
@add_options(_fn_options)
@click.option("--mu", default=None, type=float)
@click.option("--t", "ts", default=None, help="Comma-separated t values")
@click.option("--x", "xs", default=None, help="Comma-separated x values")
@click.option("--operator", default="asym", type=click.Choice(["asym", "sym"]))
@add_options(common_options)
def translate(fn, fn_params, csv_path, coeffs, basis, mu, ts, xs, operator,
              out, fmt, seed, config_path, server):
    """Evaluate a generalized translation on a (t, x) grid."""
    config = _load_config(config_path)
    payload = {
        "function": _fn_payload(_opt(fn, config, "fn", "runge"), fn_params, csv_path, coeffs, basis),
        "mu": _opt(mu, config, "mu", 1.0),
        "ts": _parse_list(_opt(ts, config, "t", "0.5")),
        "xs": _parse_list(_opt(xs, config, "x", "-0.75,-0.5,-0.25,0,0.25,0.5,0.75")),
        "operator": operator,
    }
    result = ServiceClient(server).post("/translate", payload)
    rows = [
        [t, x, v]
        for t, rowvals in zip(result["ts"], result["values"])
        for x, v in zip(result["xs"], rowvals)
    ]
    table = ExperimentTable(name="translate", headers=["t", "x", "value"], rows=rows)
    _, code, written = report_emit([], [table], _opt(out, config, "out", "out"),
                                   fmt=_opt(fmt, config, "format", "csv"), config_echo=payload)
    for r in rows[:12]:
        click.echo(f"t={r[0]:+.4f} x={r[1]:+.4f} -> {r[2]:+.10f}")
    if len(rows) > 12:
        click.echo(f"... ({len(rows)} rows total)")
    click.echo(f"wrote {len(written)} file(s)")
    sys.exit(code)


@main.command()
@add_options(_fn_options)
@click.option("--mu", default=None, type=float)
@click.option("--p", default=None)
@click.option("--alpha", default=None, type=float)
@click.option("--delta-grid", default=None, help="Comma-separated deltas")
@add_options(common_options)
def modulus(fn, fn_params, csv_path, coeffs, basis, mu, p, alpha, delta_grid,
            out, fmt, seed, config_path, server):
    """Generalized modulus of smoothness omega(f, delta)."""
    config = _load_config(config_path)
    mu_v = _opt(mu, config, "mu", 1.0)
    payload = {
        "function": _fn_payload(_opt(fn, config, "fn", "abs_power"), fn_params, csv_path, coeffs, basis),
        "space": _space_payload(
            _opt(p, config, "p", "inf"), _opt(alpha, config, "alpha", mu_v / 2.0), mu_v
        ),
        "deltas": _parse_list(_opt(delta_grid, config, "delta_grid", "0.1,0.5,1.0,2.0")),
    }
    result = ServiceClient(server).post("/modulus", payload)
    rows = [[r["delta"], r["value"], r["argmax_t"]] for r in result["rows"]]
    table = ExperimentTable(name="modulus", headers=["delta", "omega", "argmax_t"], rows=rows)
    _, code, written = report_emit([], [table], _opt(out, config, "out", "out"),
                                   fmt=_opt(fmt, config, "format", "csv"), config_echo=payload)
    for r in rows:
        click.echo(f"delta={r[0]:.6f} omega={r[1]:.10f} argmax_t={r[2]:.6f}")
    click.echo(f"wrote {len(written)} file(s)")
    sys.exit(code)


@main.command()
@add_options(_fn_options)
@click.option("--mu", default=None, type=float)
@click.option("--p", default=None)
@click.option("--alpha", default=None, type=float)
@click.option("--n-max", default=None, type=int)
@add_options(common_options)
def bestapprox(fn, fn_params, csv_path, coeffs, basis, mu, p, alpha, n_max,
               out, fmt, seed, config_path, server):
    """Best-approximation sequence E_1..E_n and sums S(n)."""
    config = _load_config(config_path)
    payload = {
        "function": _fn_payload(_opt(fn, config, "fn", "abs_power"), fn_params, csv_path, coeffs, basis),
        "space": _space_payload(
            _opt(p, config, "p", "inf"), _opt(alpha, config, "alpha", 0.0),
            _opt(mu, config, "mu", 0.0)
        ),
        "n_max": _opt(n_max, config, "n_max", 16),
    }
    result = ServiceClient(server).post("/bestapprox", payload)
    rows = list(map(list, zip(result["n"], result["values"], result["sums"])))
    table = ExperimentTable(name="bestapprox", headers=["n", "E_n", "S_n"], rows=rows)
    _, code, written = report_emit([], [table], _opt(out, config, "out", "out"),
                                   fmt=_opt(fmt, config, "format", "csv"), config_echo=payload)
    for r in rows:
        click.echo(f"n={r[0]:>3} E_n={r[1]:.10f} S_n={r[2]:.10f}")
    click.echo(f"wrote {len(written)} file(s)")
    sys.exit(code)


if __name__ == "__main__":
    main()
