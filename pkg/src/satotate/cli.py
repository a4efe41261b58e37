"""Command-line front end: one structured document per invocation.

Exit codes: 0 success, 2 invalid input, 3 refusal (budget or tolerance).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np
import sympy

from . import symfunc
from .errors import Refusal
from .scalars import QSqrt

SCHEMA = "satotate.result/1"
CACHE_VERSION = 1


class CacheError(Refusal):
    pass


# ---------------------------------------------------------------------------
# Kostka-Foulkes cache file


def _key(lam, mu) -> str:
    return ",".join(map(str, lam)) + "|" + ",".join(map(str, mu))


def _parse_key(key: str):
    lam, mu = key.split("|")
    parts = lambda s: tuple(int(x) for x in s.split(",") if x)
    return parts(lam), parts(mu)


def _checksum(entries: dict) -> str:
    blob = json.dumps(entries, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def save_cache(path, table: dict | None = None) -> int:
    """Write the Kostka-Foulkes table atomically; returns the entry count."""
    table = symfunc.KOSTKA_FOULKES_TABLE if table is None else table
    entries = {_key(l, m): [int(c) for c in K.coeffs] for (l, m), K in table.items()}
    doc = {"version": CACHE_VERSION, "entries": entries, "sha256": _checksum(entries)}
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(doc, fh, sort_keys=True)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return len(entries)


def load_cache(path) -> dict:
    """Read a cache file; any damage rejects the whole file."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise CacheError(f"cache {path} is not valid JSON (truncated?): {exc}") from None
    if not isinstance(doc, dict) or doc.get("version") != CACHE_VERSION:
        raise CacheError(f"cache {path} has version {doc.get('version') if isinstance(doc, dict) else None}, expected {CACHE_VERSION}")
    entries = doc.get("entries")
    if not isinstance(entries, dict) or doc.get("sha256") != _checksum(entries):
        raise CacheError(f"cache {path} failed its checksum")
    table = {}
    for key, coeffs in entries.items():
        table[_parse_key(key)] = symfunc.QPolynomial(coeffs)
    return table


def cache_roundtrip(path, table: dict) -> dict:
    save_cache(path, table)
    return load_cache(path)


# ---------------------------------------------------------------------------
# serialization


def rational(x) -> dict:
    x = Fraction(x)
    return {"num": x.numerator, "den": x.denominator}


def encode(x, tol=None):
    if isinstance(x, QSqrt):
        return {"a": rational(x.a), "b": rational(x.b), "relation": f"u^2={x.p}", "exact": True}
    if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
        return {**rational(x), "exact": True}
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": f"{x.real:.15g}", "im": f"{x.imag:.15g}", "tolerance": tol}
    if isinstance(x, (float, np.floating)):
        return {"decimal": f"{float(x):.15g}", "tolerance": tol}
    return x


def poly_terms(poly) -> list:
    return [{"weight": list(w), "coefficient": encode(c) if isinstance(c, QSqrt) else encode(Fraction(c))}
            for w, c in sorted(poly.terms.items(), reverse=True)]


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for k, v in _flatten(doc):
        w.writerow([k, json.dumps(v) if not isinstance(v, str) else v])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# argument parsing


def ints(s: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in s.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}") from None


def floats(s: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in s.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {s!r}") from None


def matrix(s: str) -> np.ndarray:
    rows = [floats(r) for r in s.split(";")]
    if len({len(r) for r in rows}) != 1 or len(rows[0]) != len(rows):
        raise argparse.ArgumentTypeError("matrix rows must be ';'-separated and square")
    return np.array(rows)


def prime(s: str) -> int:
    try:
        p = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}") from None
    if not sympy.isprime(p):
        raise argparse.ArgumentTypeError(f"{p} is not prime")
    return p


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValueError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--cache", type=Path, help="Kostka-Foulkes cache file")
    common.add_argument("--threads", type=int, default=1, help="recorded; computations run in one thread")
    common.add_argument("--tolerance", type=float, default=1e-6)
    common.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical output)")

    ap = _Parser(prog="satotate", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("gamma", parents=[common])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--prime", type=prime)
    s.add_argument("--m", type=ints, required=True)

    s = sub.add_parser("moment", parents=[common])
    s.add_argument("--nu", type=ints, required=True)
    s.add_argument("--prime", type=prime, required=True)
    s.add_argument("--routes", default="kato,hecke,quad")

    s = sub.add_parser("satake", parents=[common])
    s.add_argument("--xi", type=ints, required=True)
    s.add_argument("--prime", type=prime, required=True)

    s = sub.add_parser("convolve", parents=[common])
    s.add_argument("--a", type=ints, required=True)
    s.add_argument("--b", type=ints, required=True)
    s.add_argument("--prime", type=prime, required=True)
    s.add_argument("--method", choices=("satake", "cosets", "both"), default="satake")

    s = sub.add_parser("degree", parents=[common])
    s.add_argument("--n", type=int)
    s.add_argument("--xi", type=ints, required=True)
    s.add_argument("--prime", type=prime, required=True)
    s.add_argument("--method", choices=("auto", "closed", "enumerate", "satake"), default="auto")

    s = sub.add_parser("orbital-gl2", parents=[common])
    s.add_argument("--case", required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--prime", type=prime, required=True)
    s.add_argument("--disc-val", type=int, default=0)
    s.add_argument("--charpoly", type=ints, help="1,b,c for x^2+bx+c: also run the lattice count")
    s.add_argument("--xi", type=ints)

    s = sub.add_parser("spherical", parents=[common])
    s.add_argument("--lambda", dest="lam", type=floats, required=True)
    s.add_argument("--g", type=matrix, required=True, help="rows separated by ';'")
    s.add_argument("--method", choices=("product-angles", "monte-carlo"), default="product-angles")
    s.add_argument("--nodes", type=int, default=32)
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("weyl-term", parents=[common])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--omega", type=float, default=1.0)

    s = sub.add_parser("density", parents=[common])
    s.add_argument("--ensemble", required=True)
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--sigma", type=floats, required=True, help="one support per test function")
    s.add_argument("--method", choices=("direct", "fourier", "both"), default="both")
    s.add_argument("--max-support", type=float)
    s.add_argument("--include-atom", action="store_true")

    s = sub.add_parser("recursion-check", parents=[common])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k1", type=int, required=True)
    s.add_argument("--k2", type=int, required=True)
    s.add_argument("--prime", type=prime, required=True)
    return ap


# ---------------------------------------------------------------------------
# commands


def cmd_gamma(a):
    from .plancherel import gamma_coeff
    if len(a.m) != a.n - 1:
        raise ValueError(f"gamma for n = {a.n} takes {a.n - 1} indices")
    return {"gamma": encode(gamma_coeff(a.m, a.prime))}


def cmd_moment(a):
    from .plancherel import moment_report
    routes = tuple(r for r in a.routes.split(",") if r)
    rep = moment_report(a.nu, a.prime, routes, tolerance=a.tolerance)
    out = {name: encode(v, a.tolerance) for name, v in rep.routes}
    return {"routes": out, "agreement": rep.agreement}


def cmd_satake(a):
    from .hecke import HeckeElement, satake
    phi = satake(HeckeElement.basis(a.xi, a.prime))
    return {"monomial": poly_terms(phi)}


def cmd_convolve(a):
    from .hecke import HeckeElement, convolve
    if len(a.a) != len(a.b):
        raise ValueError("operands have different ranks")
    h = convolve(HeckeElement.basis(a.a, a.prime), HeckeElement.basis(a.b, a.prime), method=a.method)
    return {"terms": [{"xi": list(x), "coefficient": encode(c)} for x, c in sorted(h.terms.items(), reverse=True)]}


def cmd_degree(a):
    from .hecke import degree
    if a.n is not None and a.n != len(a.xi):
        raise ValueError(f"--n {a.n} does not match xi of length {len(a.xi)}")
    return {"degree": encode(degree(a.xi, a.prime, method=a.method))}


def cmd_orbital(a):
    from .orbital import GL2OrbitalInput, gl2_invariants, gl2_orbital, gl2_orbital_oracle
    out = {"table": encode(gl2_orbital(GL2OrbitalInput(a.prime, a.case, a.m, a.disc_val)))}
    if a.charpoly is not None:
        if a.xi is None or len(a.xi) != 2 or len(a.charpoly) != 3:
            raise ValueError("--charpoly needs three coefficients and --xi two entries")
        case, dval, _ = gl2_invariants(a.charpoly, a.prime)
        res = gl2_orbital_oracle(a.charpoly, a.xi, a.prime)
        out["oracle"] = {"value": encode(res.value), "case": case, "disc_val": dval,
                         "count": res.count, "radius": res.radius}
        m = a.xi[0] - a.xi[1]
        try:
            tab = gl2_orbital(GL2OrbitalInput(a.prime, case, m, dval))
            out["oracle"]["table_at_class"] = encode(tab)
            out["oracle"]["agreement"] = tab == res.value
        except ValueError as exc:
            out["oracle"]["table_at_class"] = str(exc)
    return out


def cmd_spherical(a):
    from .spherical import QuadratureSpec, spherical_phi
    q = QuadratureSpec(a.method, a.nodes, a.seed, tol=min(a.tolerance, 1e-6))
    v = spherical_phi(a.lam, a.g, q)
    return {"phi": encode(v.value, v.error), "nodes": v.nodes}


def cmd_weyl(a):
    from .spherical import weyl_main_term
    m = weyl_main_term(a.omega, a.t, a.n)
    return {"integral": encode(m.value, 1e-9 * abs(m.value)), "exponent": encode(m.exponent, 1e-6), "d": m.d}


def cmd_density(a):
    from .ensembles import BandLimitedTestFn, density_pairing
    if len(a.sigma) != a.k:
        raise ValueError(f"k = {a.k} needs {a.k} values of --sigma")
    phis = [BandLimitedTestFn(s) for s in a.sigma]
    methods = ("direct", "fourier") if a.method == "both" else (a.method,)
    out, vals, meta = {}, [], {}
    for m in methods:
        r = density_pairing(a.ensemble, a.k, phis, method=m, max_support=a.max_support,
                            include_atom=a.include_atom)
        out[m] = encode(r.value, r.tail_bound if m == "direct" else 0.0)
        vals.append(r.value)
        meta = r.metadata
    res = {"pairing": out, "metadata": meta}
    if len(vals) == 2:
        res["agreement"] = abs(vals[0] - vals[1]) <= a.tolerance
    return res


def cmd_recursion(a):
    from .plancherel import recursion_check
    r = recursion_check(a.k1, a.k2, a.prime, a.n)
    return {"holds": r.holds, "lhs": encode(r.lhs), "rhs": encode(r.rhs)}


COMMANDS = {
    "gamma": cmd_gamma,
    "moment": cmd_moment,
    "satake": cmd_satake,
    "convolve": cmd_convolve,
    "degree": cmd_degree,
    "orbital-gl2": cmd_orbital,
    "spherical": cmd_spherical,
    "weyl-term": cmd_weyl,
    "density": cmd_density,
    "recursion-check": cmd_recursion,
}

_SKIP = {"command", "format", "cache", "timing", "tolerance", "threads"}


def _inputs(a) -> dict:
    out = {}
    for k, v in sorted(vars(a).items()):
        if k in _SKIP or v is None:
            continue
        if isinstance(v, np.ndarray):
            v = v.tolist()
        elif isinstance(v, tuple):
            v = list(v)
        out[k] = v
    return out


def run(argv: Sequence[str]) -> tuple[int, str]:
    """Execute one command; returns (exit code, rendered document)."""
    fmt = "csv" if "--format" in argv and "csv" in argv else "json"
    start = time.perf_counter()
    try:
        a = build_parser().parse_args(list(argv))
        fmt = a.format
        if a.cache is not None and a.cache.exists():
            symfunc.KOSTKA_FOULKES_TABLE.update(load_cache(a.cache))
        outputs = COMMANDS[a.command](a)
        if a.cache is not None:
            save_cache(a.cache)
        doc = {"schema": SCHEMA, "command": a.command, "argv": list(argv), "status": "ok",
               "inputs": _inputs(a), "outputs": outputs,
               "settings": {"tolerance": a.tolerance, "threads": a.threads}}
        if a.timing:
            doc["seconds"] = round(time.perf_counter() - start, 6)
        code = 0
    except Refusal as exc:
        doc = {"schema": SCHEMA, "argv": list(argv), "status": "refused",
               "reason": type(exc).__name__, "message": str(exc)}
        partial = getattr(exc, "partial", None)
        if partial is not None:
            doc["partial"] = encode(partial) if not isinstance(partial, list) else [encode(x) for x in partial]
        code = 3
    except (ValueError, ArithmeticError) as exc:
        doc = {"schema": SCHEMA, "argv": list(argv), "status": "invalid",
               "reason": type(exc).__name__, "message": str(exc)}
        code = 2
    return code, render(doc, fmt)


def main(argv: Sequence[str] | None = None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
