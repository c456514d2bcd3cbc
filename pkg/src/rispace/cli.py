"""Command-line entry point.

Every subcommand builds a :class:`CommandRequest`, runs it through
:func:`run` and writes the resulting report once, as JSON (sorted keys,
17 significant digits) or CSV.  Reports carry a header with the seed,
the grid and the tolerances, so identical requests give byte-identical
output.

Exit codes: 0 ok, 2 parse error, 3 inadmissible input, 4 numerical
failure, 5 I/O error.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

import click
import numpy as np

from . import __version__
from . import optimal_orlicz as _oo
from . import optimal_ri as _ri
from . import young as _young
from .errors import InadmissibleError, NumericalError, ParseError, RispaceError
from .numerics import LogGrid
from .optimal_ri import FamilyMember
from .rearrange import (PowerLogFunction, StepFunction, decreasing_rearrangement,
                        maximal_rearrangement, rearrangement_of_powerlog)
from .spaces import LorentzZygmund, Space, norm, parse_space

EXIT_OK, EXIT_PARSE, EXIT_INADMISSIBLE, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4, 5

SUBCOMMANDS = ("norm", "rearrange", "conjugate", "boyd", "optimal-target", "optimal-domain",
               "orlicz-target", "orlicz-domain", "verify-reduction", "orlicz-reduce")

TOLERANCES = {"plateau": _ri.PLATEAU_FACTOR, "growth": _ri.GROWTH_FACTOR,
              "dual_agreement": _ri.DUAL_AGREEMENT, "index_ambiguity": _oo.INDEX_AMBIGUITY}

# tolerances a request may override, per subcommand
OVERRIDABLE = {"verify-reduction": {"plateau", "growth"},
               "orlicz-reduce": {"plateau", "growth"}}

YOUNG_KINDS = ("young", "power", "linf", "exp")

CSV_COLUMNS = ("id", "scale", "lhs", "rhs", "ratio")


class UnknownFamily(ParseError):
    """A test-family name outside the registry."""


class IoError(RispaceError, OSError):
    """Reading or writing a file failed."""


# ---------------------------------------------------------------------------
# parsing


def parse_spec(text: str):
    """A :class:`~rispace.spaces.Space` or a :class:`~rispace.young.YoungFunction`.

    Young recipes (``young:``, ``power:``, ``linf``, ``exp:``) and paths to
    YoungFunction JSON files give Young functions; everything else goes
    through :func:`~rispace.spaces.parse_space`.
    """
    raw = text.strip()
    kind = raw.partition(":")[0].strip().lower()
    if kind in YOUNG_KINDS:
        return _young.parse_young(raw)
    if raw.endswith(".json"):
        return _young.YoungFunction.from_json(_read_text(raw))
    return parse_space(raw)


def _young_of(text: str) -> _young.YoungFunction:
    obj = parse_spec(text)
    if not isinstance(obj, _young.YoungFunction):
        raise ParseError("expected a Young function recipe or file", text, 0)
    return obj


def _space_of(text: str) -> Space:
    obj = parse_spec(text)
    if not isinstance(obj, Space):
        raise ParseError("expected a space, got a Young function recipe", text, 0)
    return obj


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise IoError(f"cannot read {path!r}: {exc}") from exc


def function_from_dict(data: dict):
    """StepFunction (``pieces``) or PowerLogFunction (``gamma``) from JSON data."""
    if not isinstance(data, dict):
        raise ParseError(f"expected a function object, got {type(data).__name__}")
    if "pieces" in data:
        return StepFunction.from_dict(data)
    if "gamma" in data:
        return PowerLogFunction.from_dict(data)
    raise ParseError("function JSON needs 'pieces' or 'gamma'", json.dumps(data, sort_keys=True), 0)


def load_function(text: str):
    """Function from inline JSON (starting with ``{``) or a JSON file path."""
    raw = text.strip()
    body = raw if raw.startswith("{") else _read_text(raw)
    try:
        data = json.loads(body)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", body, exc.pos) from None
    try:
        return function_from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"invalid function data: {exc}", raw, 0) from None


# ---------------------------------------------------------------------------
# standard families

_FAMILY_RE = re.compile(r"^\s*([a-z_]+)\s*(?:\((.*)\))?\s*$")
_FAMILY_ARGS = {"peetre": (), "standard": (), "sharpness": ("beta", "q"),
                "steps": ("seed", "k"), "orlicz": ("k_max",)}


def _family_args(name: str, body: str | None, text: str) -> dict[str, float]:
    keys = _FAMILY_ARGS[name]
    out: dict[str, float] = {}
    if body is None or not body.strip():
        return out
    for i, item in enumerate(body.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            key, val = (keys[i] if i < len(keys) else f"#{i}"), key
        key = key.strip()
        if key not in keys:
            raise UnknownFamily(f"unknown parameter {key!r} for family {name}", text,
                                text.find(item))
        try:
            out[key] = float(val.strip().replace("∞", "inf"))
        except ValueError:
            raise ParseError(f"parameter {key!r} is not a number", text, text.find(item)) from None
    return out


def peetre_family() -> list[FamilyMember]:
    """Indicators ``chi_(0,10^k)``, ``|k| <= 4``, and ``s^(-1/4) chi_(10^-k, 1)``, ``k <= 4``."""
    out = [FamilyMember(f"chi=1e{k:+d}", StepFunction(((10.0 ** k, 1.0),)), float(k))
           for k in range(-4, 5)]
    out += [FamilyMember(f"pow=1e-{k}", PowerLogFunction(1.0, 0.25, 0.0, 0.0, (10.0 ** -k, 1.0)),
                         float(10 + k)) for k in range(1, 5)]
    return out


def steps_family(seed: int, k: int) -> list[FamilyMember]:
    """``k`` seeded step functions, at most 8 pieces, log-uniform measures and values."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(k):
        j = int(rng.integers(1, 9))
        pieces = zip(10.0 ** rng.uniform(-3, 2, j), 10.0 ** rng.uniform(-2, 2, j))
        out.append(FamilyMember(f"step-{i}", StepFunction(pieces), float(i)))
    return out


def standard_family(name: str, seed: int | None = None) -> list[FamilyMember]:
    """Deterministic family from its registry name.

    ``peetre`` (alias ``standard``), ``sharpness(beta,q)`` (the functions
    ``s^(-1/q) ell^(-beta) chi_(eps,1)`` for ``eps = 1e-2, ..., 1e-8``),
    ``steps(seed,k)`` and ``orlicz(k_max)`` (heights ``10^(j/2)``).
    ``seed`` fills in a ``steps`` family given without one.

    Raises
    ------
    UnknownFamily
        For names or parameters outside the registry.
    """
    mt = _FAMILY_RE.match(name)
    if mt is None or mt.group(1) not in _FAMILY_ARGS:
        raise UnknownFamily(f"unknown family {name!r}", name, 0)
    kind = mt.group(1)
    args = _family_args(kind, mt.group(2), name)
    if kind == "steps" and "seed" not in args and seed is not None:
        args["seed"] = float(seed)
    missing = [k for k in _FAMILY_ARGS[kind] if k not in args and kind in ("sharpness", "steps")]
    if missing:
        raise UnknownFamily(f"family {kind} needs {', '.join(missing)}", name, len(name))
    if kind in ("peetre", "standard"):
        return peetre_family()
    if kind == "sharpness":
        if not (args["q"] >= 1 and math.isfinite(args["beta"])):
            raise UnknownFamily("sharpness needs q >= 1 and a finite beta", name, 0)
        return _ri.sharpness_family(args["beta"], args["q"])
    if kind == "steps":
        seed, k = args["seed"], args["k"]
        if seed != int(seed) or k != int(k) or seed < 0 or k < 1:
            raise UnknownFamily("steps needs integers seed >= 0 and k >= 1", name, 0)
        return steps_family(int(seed), int(k))
    k_max = args.get("k_max", 16)
    if k_max != int(k_max) or k_max < 0:
        raise UnknownFamily("orlicz needs an integer k_max >= 0", name, 0)
    return _oo.standard_orlicz_family(int(k_max))


def load_family(text: str, default: str = "peetre", seed: int | None = None) -> list[FamilyMember]:
    """Registry family, or a JSON file holding a list of functions or members."""
    raw = text.strip()
    if raw == "standard":
        raw = default
    if not raw.endswith(".json"):
        return standard_family(raw, seed)
    data = json.loads(_read_text(raw))
    if isinstance(data, dict):
        data = data.get("members", data.get("functions"))
    if not isinstance(data, list):
        raise ParseError("family JSON must be a list", raw, 0)
    out = []
    for i, item in enumerate(data):
        if isinstance(item, dict) and "f" in item:
            out.append(FamilyMember(str(item.get("id", i)), function_from_dict(item["f"]),
                                    float(item.get("scale", i))))
        else:
            out.append(FamilyMember(str(i), function_from_dict(item), float(i)))
    return out


# ---------------------------------------------------------------------------
# serialization


def _format_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def _to_plain(obj):
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if hasattr(obj, "_asdict"):
        return obj._asdict()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj


def dumps(obj, indent: int = 0) -> str:
    """JSON text with sorted keys and fixed 17-significant-digit floats.

    Non-finite floats are written as the strings ``"inf"``, ``"-inf"``
    and ``"nan"``.
    """
    obj = _to_plain(obj)
    pad, inner = "  " * indent, "  " * (indent + 1)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(obj[k], indent + 1)}"
                 for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(inner + dumps(v, indent + 1) for v in obj) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


_NONFINITE = {"inf": math.inf, "-inf": -math.inf, "nan": math.nan}


def _restore(obj):
    if isinstance(obj, dict):
        return {k: _restore(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_restore(v) for v in obj]
    if isinstance(obj, str) and obj in _NONFINITE:
        return _NONFINITE[obj]
    return obj


def loads(text: str):
    """Inverse of :func:`dumps`."""
    return _restore(json.loads(text))


def to_csv(report) -> str:
    """CSV with columns ``id,scale,lhs,rhs,ratio`` from ``report["records"]``."""
    data = _to_plain(report)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rec in data.get("records", []):
        rec = _to_plain(rec)
        w.writerow([rec["id"]] + [_format_float(float(rec[k])).strip('"')
                                  for k in CSV_COLUMNS[1:]])
    return buf.getvalue()


def emit_report(report, path: str | None, format: str = "json") -> None:
    """Write ``report`` to ``path`` (stdout when None or ``-``).

    Raises
    ------
    IoError
        If the file cannot be written.
    """
    if format not in ("json", "csv"):
        raise ParseError(f"unknown format {format!r}")
    text = dumps(report) + "\n" if format == "json" else to_csv(report)
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise IoError(f"cannot write {path!r}: {exc}") from exc


def read_report(path: str) -> dict:
    """Read back a JSON report written by :func:`emit_report`."""
    return loads(_read_text(path))


# ---------------------------------------------------------------------------
# requests


@dataclass
class CommandRequest:
    """One CLI invocation.

    ``specs`` holds the parsed-as-text arguments, ``paths`` the output
    files and ``tolerances`` the overrides; unknown tolerance keys are
    rejected.
    """

    subcommand: str
    specs: dict = field(default_factory=dict)
    paths: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ParseError(f"unknown subcommand {self.subcommand!r}")
        try:
            LogGrid.from_env()
        except ValueError as exc:
            raise ParseError(str(exc)) from None
        allowed = OVERRIDABLE.get(self.subcommand, set())
        for key in self.tolerances:
            if key not in allowed:
                raise ParseError(f"unknown tolerance {key!r} for {self.subcommand}")

    @property
    def effective_tolerances(self) -> dict:
        return {**TOLERANCES, **{k: float(v) for k, v in self.tolerances.items()}}

    def header(self) -> dict:
        return {"command": self.subcommand, "args": dict(self.specs), "seed": self.seed,
                "grid": LogGrid.from_env().to_dict(), "tolerances": self.effective_tolerances,
                "version": __version__}


def _orders(req: CommandRequest) -> tuple[int, int]:
    try:
        m, n = int(req.specs["m"]), int(req.specs["n"])
    except (KeyError, ValueError):
        raise ParseError("--m and --n must be integers") from None
    return m, n


def _result_of(obj) -> dict:
    if isinstance(obj, (_ri.NoTarget, _ri.NoDomain)):
        return {"kind": "none", "space": "none", "reason": obj.reason}
    out = {"kind": type(obj).__name__, "space": obj.spec()}
    if isinstance(obj, LorentzZygmund):
        out.update(obj.to_dict())
    return out


def _young_summary(A: _young.YoungFunction) -> dict:
    return {"name": A.describe(), "p0": A.p0, "alpha0": A.alpha0, "pinf": A.pinf,
            "alphainf": A.alphainf, "cap": A.cap}


def _emit_young(paths: list[str], functions: list[_young.YoungFunction]) -> None:
    for path, A in zip(paths, functions):
        try:
            Path(path).write_text(dumps(A.to_dict()) + "\n")
        except OSError as exc:
            raise IoError(f"cannot write {path!r}: {exc}") from exc


def _split_emit(req: CommandRequest, k: int) -> list[str]:
    raw = req.paths.get("emit")
    if not raw:
        return []
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    if len(parts) > k:
        raise ParseError(f"--emit takes at most {k} paths", raw, 0)
    return parts


def run(req: CommandRequest) -> dict:
    """Execute a request and return the report (header included)."""
    s, tol = req.specs, req.effective_tolerances
    cmd = req.subcommand
    if cmd == "norm":
        res = norm(_space_of(s["space"]), load_function(s["f"]))
        body = {"value": res.value, "method": res.method, "est_error": res.est_error}
    elif cmd == "rearrange":
        f = load_function(s["f"])
        if isinstance(f, StepFunction):
            fs = decreasing_rearrangement(f)
            ts = [float(t) for t in s.get("t") or ()]
            body = {"rearrangement": fs.to_dict(),
                    "maximal": [{"t": t, "value": maximal_rearrangement(f, t)} for t in ts]}
        else:
            body = {"rearrangement": rearrangement_of_powerlog(f).to_dict(), "maximal": []}
    elif cmd == "conjugate":
        A = _young_of(s["A"])
        C = _young.conjugate(A)
        _emit_young(_split_emit(req, 1), [C])
        body = {"A": _young_summary(A), "conjugate": _young_summary(C)}
    elif cmd == "boyd":
        A = _young_of(s["A"])
        b = _young.boyd_indices(A)
        body = {"A": _young_summary(A), "lower": b.lower, "upper": b.upper,
                "slow_convergence": b.slow_convergence}
    elif cmd in ("optimal-target", "optimal-domain"):
        m, n = _orders(req)
        X = _space_of(s["space"])
        params = _ri._lz_params(X)
        if params is None:
            raise InadmissibleError(f"{X.spec()} is not a Lorentz-Zygmund space")
        p, q, alpha = params
        fn = _ri.optimal_target_lz if cmd == "optimal-target" else _ri.optimal_domain_lz
        body = {"input": X.spec(), "result": _result_of(fn(p, q, alpha, m, n))}
    elif cmd == "orlicz-target":
        m, n = _orders(req)
        A = _young_of(s["A"])
        res = _oo.optimal_orlicz_target(A, m, n)
        _emit_young(_split_emit(req, 2), [res.A_m, res.E_m])
        body = {"A": _young_summary(A), "result": res.to_dict(),
                "target": res.target.spec()}
    elif cmd == "orlicz-domain":
        m, n = _orders(req)
        B = _young_of(s["B"])
        res = _oo.optimal_orlicz_domain(B, m, n)
        out = {"kind": res.kind}
        if isinstance(res, _oo.NoDomainAtAll):
            out["reason"] = res.reason
        else:
            out.update(B_m=_young_summary(res.B_m), upper_index=res.upper_index)
            _emit_young(_split_emit(req, 1), [res.B_m])
        body = {"B": _young_summary(B), "result": out}
    elif cmd == "verify-reduction":
        m, n = _orders(req)
        X, Y = _space_of(s["X"]), _space_of(s["Y"])
        fam = load_family(s.get("family") or "standard", "peetre", req.seed)
        rep = _ri.verify_reduction(X, Y, m, n, fam, tol["plateau"], tol["growth"])
        body = {"X": X.spec(), "Y": Y.spec(), **rep.to_dict()}
    else:
        m, n = _orders(req)
        A, B = _young_of(s["A"]), _young_of(s["B"])
        fam = load_family(s.get("family") or "standard", "orlicz", req.seed)
        rep = _oo.orlicz_reduction_check(A, B, m, n, fam, tol["plateau"], tol["growth"])
        body = {"A": _young_summary(A), "B": _young_summary(B), **rep.to_dict()}
    return {"header": req.header(), **body}


def exit_code_of(exc: BaseException) -> int:
    """Exit code for an error raised while running a request."""
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    if isinstance(exc, (OSError, IoError)):
        return EXIT_IO
    if isinstance(exc, (InadmissibleError, _oo.NoTargetAtAll, _oo.DomainConditionFails)):
        return EXIT_INADMISSIBLE
    if isinstance(exc, (NumericalError, RispaceError, ArithmeticError, ValueError)):
        return EXIT_NUMERIC
    raise exc


def execute(req: CommandRequest) -> int:
    """Run ``req``, write its report and return the exit code."""
    try:
        report = run(req)
        emit_report(report, req.paths.get("out"), req.paths.get("format", "json"))
    except Exception as exc:
        code = exit_code_of(exc)
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        return code
    return EXIT_OK


# ---------------------------------------------------------------------------
# click wiring


def _parse_tol(items) -> dict:
    out = {}
    for item in items:
        key, eq, val = item.partition("=")
        if not eq:
            raise ParseError(f"expected key=value, got {item!r}", item, 0)
        try:
            out[key.strip()] = float(val)
        except ValueError:
            raise ParseError(f"tolerance {key!r} is not a number", item, len(key) + 1) from None
    return out


def _dispatch(subcommand: str, specs: dict, out=None, fmt="json", emit=None,
              tol=(), seed=None) -> None:
    try:
        req = CommandRequest(subcommand, {k: v for k, v in specs.items() if v not in (None, ())},
                             {"out": out, "format": fmt, "emit": emit}, _parse_tol(tol), seed)
    except ParseError as exc:
        click.echo(f"error: ParseError: {exc}", err=True)
        sys.exit(EXIT_PARSE)
    sys.exit(execute(req))


_out = click.option("--out", default=None, help="Report path (default stdout).")
_fmt = click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
_m = click.option("--m", type=int, required=True, help="Order of the derivative.")
_n = click.option("--n", type=int, required=True, help="Dimension.")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="rispace")
def main():
    """Rearrangement-invariant spaces and optimal Sobolev-type embeddings."""


@main.command("norm")
@click.option("--space", required=True)
@click.option("--f", "f", required=True, help="Function JSON (inline or path).")
@_out
@_fmt
def norm_cmd(space, f, out, fmt):
    """Norm of a function in a space."""
    _dispatch("norm", {"space": space, "f": f}, out, fmt)


@main.command("rearrange")
@click.option("--f", "f", required=True, help="Function JSON (inline or path).")
@click.option("--t", "t", multiple=True, type=float, help="Points for f**.")
@_out
@_fmt
def rearrange_cmd(f, t, out, fmt):
    """Nonincreasing rearrangement (and f** at the given points)."""
    _dispatch("rearrange", {"f": f, "t": list(t)}, out, fmt)


@main.command("conjugate")
@click.option("--A", "A", required=True)
@click.option("--emit", default=None, help="Path for the conjugate's JSON.")
@_out
@_fmt
def conjugate_cmd(A, emit, out, fmt):
    """Young conjugate of a Young function."""
    _dispatch("conjugate", {"A": A}, out, fmt, emit)


@main.command("boyd")
@click.option("--A", "A", required=True)
@_out
@_fmt
def boyd_cmd(A, out, fmt):
    """Boyd indices of a Young function."""
    _dispatch("boyd", {"A": A}, out, fmt)


@main.command("optimal-target")
@click.option("--space", required=True)
@_m
@_n
@_out
@_fmt
def optimal_target_cmd(space, m, n, out, fmt):
    """Optimal r.i. target of a Lorentz-Zygmund domain."""
    _dispatch("optimal-target", {"space": space, "m": m, "n": n}, out, fmt)


@main.command("optimal-domain")
@click.option("--space", required=True)
@_m
@_n
@_out
@_fmt
def optimal_domain_cmd(space, m, n, out, fmt):
    """Optimal r.i. domain of a Lorentz-Zygmund target."""
    _dispatch("optimal-domain", {"space": space, "m": m, "n": n}, out, fmt)


@main.command("orlicz-target")
@click.option("--A", "A", required=True)
@_m
@_n
@click.option("--emit", default=None, help="Comma-separated paths for A_m and E_m JSON.")
@_out
@_fmt
def orlicz_target_cmd(A, m, n, emit, out, fmt):
    """Optimal Orlicz and r.i. targets of an Orlicz domain."""
    _dispatch("orlicz-target", {"A": A, "m": m, "n": n}, out, fmt, emit)


@main.command("orlicz-domain")
@click.option("--B", "B", required=True)
@_m
@_n
@click.option("--emit", default=None, help="Path for the B_m JSON.")
@_out
@_fmt
def orlicz_domain_cmd(B, m, n, emit, out, fmt):
    """Orlicz domain trichotomy of an Orlicz target."""
    _dispatch("orlicz-domain", {"B": B, "m": m, "n": n}, out, fmt, emit)


@main.command("verify-reduction")
@click.option("--X", "X", required=True)
@click.option("--Y", "Y", required=True)
@_m
@_n
@click.option("--family", default="standard")
@click.option("--seed", type=int, default=None, help="Seed for steps families; recorded.")
@click.option("--tol", multiple=True, help="Tolerance override key=value (plateau, growth).")
@_out
@_fmt
def verify_reduction_cmd(X, Y, m, n, family, seed, tol, out, fmt):
    """Ratios ||Hf||_Y / ||f||_X on a test family."""
    _dispatch("verify-reduction", {"X": X, "Y": Y, "m": m, "n": n, "family": family},
              out, fmt, None, tol, seed)


@main.command("orlicz-reduce")
@click.option("--A", "A", required=True)
@click.option("--B", "B", required=True)
@_m
@_n
@click.option("--family", default="standard")
@click.option("--seed", type=int, default=None, help="Seed for steps families; recorded.")
@click.option("--tol", multiple=True, help="Tolerance override key=value (plateau, growth).")
@_out
@_fmt
def orlicz_reduce_cmd(A, B, m, n, family, seed, tol, out, fmt):
    """The three equivalent statements for L^A -> L^B."""
    _dispatch("orlicz-reduce", {"A": A, "B": B, "m": m, "n": n, "family": family},
              out, fmt, None, tol, seed)


__all__ = [
    "CommandRequest", "IoError", "UnknownFamily", "dumps", "emit_report", "execute",
    "exit_code_of", "load_family", "load_function", "loads", "main", "parse_spec",
    "peetre_family", "read_report", "run", "standard_family", "steps_family", "to_csv",
]
