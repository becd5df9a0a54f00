"""Command-line front end: ``secantcert certify | gen | eval``.

Tensor documents are UTF-8 JSON::

    {"dims": [m, n, l],
     "entries": [{"re": "p/q", "im": "p/q"}, ...],   # lexicographic (i, j, k)
     "metadata": {...}}                              # optional

Exit codes: 0 accept, 1 reject, 2 no witness or not applicable, 3 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import fields, is_dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Optional, Sequence

import numpy as np

from . import __version__
from .linalg import DimensionError, GaussianRational, IndexSet, Matrix, PreconditionError, det, rank
from .tensor import Tensor3, slice_space, slices
from .verdict import Verdict

EXIT_INPUT_ERROR = 3

TARGETS = ("br3-333", "br4-333", "br4-334", "br4-444", "rank-l")
GENERATORS = (
    "rank-r",
    "salmon",
    "block-diag-334",
    "generic",
    "symmetric-333",
    "diagonal",
    "rank-l-case1",
    "rank-l-case2",
)
QUANTITIES = ("strassen", "ranksCLCR", "quadric-rank", "degrees", "decompose")


class InputError(Exception):
    """A malformed document or incompatible request; maps to exit code 3."""


# ---------------------------------------------------------------------------
# documents


def scalar_to_json(x: GaussianRational) -> dict[str, str]:
    re, im = x.to_strings()
    return {"re": re, "im": im}


def scalar_from_json(obj: Any, where: str) -> GaussianRational:
    if not isinstance(obj, dict) or set(obj) - {"re", "im"} or "re" not in obj:
        raise InputError(f"{where}: expected an object with 're' and optional 'im'")
    re, im = obj["re"], obj.get("im", "0")
    if not isinstance(re, str) or not isinstance(im, str):
        raise InputError(f"{where}: scalar parts must be rational strings")
    try:
        return GaussianRational.parse(re, im)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from None


def serialize(t: Tensor3, metadata: Optional[dict] = None) -> str:
    doc: dict[str, Any] = {"dims": list(t.dims), "entries": [scalar_to_json(e) for e in t.entries]}
    if metadata:
        doc["metadata"] = metadata
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def parse(text: str) -> tuple[Tensor3, dict]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InputError("document must be a JSON object")
    unknown = set(doc) - {"dims", "entries", "metadata"}
    if unknown:
        raise InputError(f"unknown top-level keys: {sorted(unknown)}")
    dims = doc.get("dims")
    if not (isinstance(dims, list) and len(dims) == 3 and all(isinstance(d, int) and d >= 1 for d in dims)):
        raise InputError("'dims' must be three positive integers")
    entries = doc.get("entries")
    if not isinstance(entries, list):
        raise InputError("'entries' must be an array")
    m, n, l = dims
    if len(entries) != m * n * l:
        raise InputError(f"'entries' has {len(entries)} scalars, dims need {m * n * l}")
    vals = [scalar_from_json(e, f"entries[{k}]") for k, e in enumerate(entries)]
    meta = doc.get("metadata", {})
    if not isinstance(meta, dict):
        raise InputError("'metadata' must be an object")
    return Tensor3(m, n, l, vals), meta


# ---------------------------------------------------------------------------
# reports


def to_jsonable(obj: Any) -> Any:
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, GaussianRational):
        return scalar_to_json(obj)
    if isinstance(obj, Fraction):
        return scalar_to_json(GaussianRational(obj))
    if isinstance(obj, Matrix):
        return [[to_jsonable(x) for x in obj.row(i)] for i in range(obj.rows)]
    if isinstance(obj, Tensor3):
        return {"dims": list(obj.dims), "entries": [scalar_to_json(e) for e in obj.entries]}
    if isinstance(obj, IndexSet):
        return list(obj)
    if isinstance(obj, Enum):
        return obj.value
    if is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj]
    if isinstance(obj, (complex, np.complexfloating, float, np.floating)):
        c = complex(obj)
        return {"re": repr(c.real), "im": repr(c.imag)}
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def verdict_report(target: str, verdict: Verdict, elapsed: float, extra: Optional[dict] = None) -> dict:
    report = {
        "target": target,
        "verdict": verdict.outcome.value,
        "exit_code": verdict.outcome.exit_code,
        "reasons": [
            {"condition": r.condition, "holds": r.holds, "mode": r.mode, "data": to_jsonable(r.data), "note": r.note}
            for r in verdict.reasons
        ],
        "witnesses": to_jsonable(verdict.witnesses),
        "timing_seconds": round(elapsed, 6),
    }
    if extra:
        report.update(to_jsonable(extra))
    return report


def _emit(report: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
        return
    for key in ("target", "quantity", "verdict", "rule"):
        if key in report:
            out.write(f"{key}: {report[key]}\n")
    for r in report.get("reasons", []):
        mode = "" if r["mode"] is None else f" mode {r['mode']}"
        out.write(f"  {'ok  ' if r['holds'] else 'FAIL'} {r['condition']}{mode}\n")
    for key, val in report.items():
        if key not in ("target", "quantity", "verdict", "rule", "reasons", "witnesses", "exit_code"):
            out.write(f"{key}: {json.dumps(val, sort_keys=True)}\n")


# ---------------------------------------------------------------------------
# commands


def _require_dims(t: Tensor3, dims: tuple[int, int, int], target: str) -> None:
    if t.dims != dims:
        raise InputError(f"{target} needs a {'x'.join(map(str, dims))} tensor, got {'x'.join(map(str, t.dims))}")


def cmd_certify(t: Tensor3, target: str, trials: int, seed: int, method: str) -> dict:
    from .certify444 import check_equations_444, decide_444
    from .secant import decide_rank_l
    from .strassen import decide_333_br3, decide_333_br4
    from .symmetrize import decide_334

    start = time.perf_counter()
    extra: dict[str, Any] = {}
    if target == "br3-333":
        _require_dims(t, (3, 3, 3), target)
        v = decide_333_br3(t, seed)
    elif target == "br4-333":
        _require_dims(t, (3, 3, 3), target)
        v = decide_333_br4(t)
    elif target == "br4-334":
        _require_dims(t, (3, 3, 4), target)
        v = decide_334(t)
    elif target == "br4-444":
        _require_dims(t, (4, 4, 4), target)
        if method == "sampled":
            v = check_equations_444(t, trials, seed)
            extra["method"] = "sampled"
        else:
            trace = decide_444(t, seed)
            v = trace.verdict
            extra.update(method="decide", rule=trace.rule, span_dims=trace.span_dims, notes=list(trace.notes))
    elif target == "rank-l":
        v = decide_rank_l(t, trials, seed)
    else:  # argparse restricts the choices
        raise InputError(f"unknown target {target!r}")
    extra.setdefault("span_dims", {m: slice_space(t, m).span_dim for m in (1, 2, 3)})
    return verdict_report(target, v, time.perf_counter() - start, extra)


def _parse_dims(text: Optional[str], default: tuple[int, int, int]) -> tuple[int, int, int]:
    if text is None:
        return default
    try:
        dims = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"--dims must be m,n,l integers, got {text!r}") from None
    if len(dims) != 3 or min(dims) < 1:
        raise InputError(f"--dims must be three positive integers, got {text!r}")
    return dims  # type: ignore[return-value]


def cmd_gen(name: str, seed: int, bound: int, dims: Optional[str], r: Optional[int], l: Optional[int]) -> str:
    from . import generators as g

    meta: dict[str, Any] = {"generator": name, "seed": seed, "bound": bound}
    witnessed = None
    if name == "rank-r":
        m, n, ll = _parse_dims(dims, (4, 4, 4))
        rr = 4 if r is None else r
        if rr < 1:
            raise InputError("--r must be at least 1")
        witnessed = g.random_rank_r(m, n, ll, rr, seed, bound)
    elif name == "salmon":
        t = g.salmon_counterexample(seed, bound)
    elif name == "block-diag-334":
        t = g.block_diag_334(seed, bound)
    elif name == "generic":
        m, n, ll = _parse_dims(dims, (4, 4, 4))
        t = g.generic_tensor(m, n, ll, seed, bound)
    elif name == "symmetric-333":
        t = g.symmetric_slices_333(seed, bound)
    elif name == "diagonal":
        m, n, ll = _parse_dims(dims, (l or 3,) * 3)
        witnessed = g.diagonal_family(l or ll, m, n)
    elif name == "rank-l-case1":
        m, n, ll = _parse_dims(dims, (4, 4, 3))
        witnessed = g.rank_l_case1(m, n, ll, seed, bound)
    elif name == "rank-l-case2":
        witnessed = g.rank_l_case2(l or 4, seed, bound)
    else:
        raise InputError(f"unknown generator {name!r}")
    if witnessed is not None:
        t = witnessed.tensor
        meta["claimed_rank_bound"] = witnessed.claimed_rank_bound
        meta["factors"] = [[[str(x) for x in vec] for vec in f] for f in witnessed.factors]
    return serialize(t, meta)


def cmd_eval(t: Optional[Tensor3], quantity: str, args) -> dict:
    from .secant import decompose_numeric, numeric_residual, quadric_space, segre_degree, veronese_degree
    from .symmetrize import build_system

    out: dict[str, Any] = {"quantity": quantity}
    if quantity == "degrees":
        if args.m is None:
            raise InputError("degrees needs --m (and --n for the Segre degree)")
        try:
            if args.n is not None:
                out["segre_degree"] = segre_degree(args.m, args.n)
            if args.m >= 2:
                out["veronese_degree"] = veronese_degree(args.m)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        return out
    if t is None:
        raise InputError(f"{quantity} needs an input document")
    if quantity == "strassen":
        _require_dims(t, (3, 3, 3), quantity)
        d = det(build_system(list(slices(t, 3)), "R").coeff)
        out.update(det_CR=scalar_to_json(d), vanishes=not d)
    elif quantity == "ranksCLCR":
        if t.m != t.n:
            raise InputError("ranksCLCR needs square mode-3 slices")
        for side in ("L", "R"):
            sysm = build_system(list(slices(t, 3)), side)
            out[f"rank_C{side}"] = rank(sysm.coeff)
            out[f"shape_C{side}"] = list(sysm.coeff.shape)
            if sysm.coeff.is_square():
                out[f"det_C{side}"] = scalar_to_json(det(sysm.coeff))
    elif quantity == "quadric-rank":
        if t.l < 2:
            raise InputError("quadric-rank needs at least two mode-3 slices")
        qs = quadric_space(slices(t, 3))
        out.update(rank_C=rank(qs.coeff), dim_S=qs.dim_span, dim_perp=qs.dim_perp)
    elif quantity == "decompose":
        target = args.rank if args.rank is not None else t.l
        factors = decompose_numeric(t, target, args.tolerance, args.seed)
        out["certified"] = False
        out["found"] = factors is not None
        if factors is not None:
            out["residual"] = numeric_residual(t, factors)
            out["factors"] = to_jsonable([list(f) for f in factors])
    return out


# ---------------------------------------------------------------------------
# argument handling


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors are input errors
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="secantcert", description="Exact border-rank certification for small 3-tensors.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("certify", help="decide a border-rank or rank question")
    c.add_argument("target", choices=TARGETS)
    c.add_argument("input", nargs="?", default="-", help="tensor document (default: stdin)")
    c.add_argument("--trials", type=int, default=20)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--method", choices=("decide", "sampled"), default="decide", help="br4-444 only")
    c.add_argument("--report", choices=("json", "text"), default="json")

    g = sub.add_parser("gen", help="write a seeded test tensor")
    g.add_argument("generator", choices=GENERATORS)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--bound", type=int, default=3)
    g.add_argument("--dims")
    g.add_argument("--r", type=int)
    g.add_argument("--l", type=int)
    g.add_argument("-o", "--output", default="-")

    e = sub.add_parser("eval", help="print exact invariants")
    e.add_argument("quantity", choices=QUANTITIES)
    e.add_argument("input", nargs="?", default="-", help="tensor document (default: stdin; unused by degrees)")
    e.add_argument("--m", type=int)
    e.add_argument("--n", type=int)
    e.add_argument("--rank", type=int)
    e.add_argument("--tolerance", type=float, default=1e-8)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--report", choices=("json", "text"), default="json")
    return p


def _read(path: str) -> tuple[Tensor3, dict]:
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from None
    return parse(text)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "certify":
            if args.trials < 1:
                raise InputError("--trials must be at least 1")
            t, _ = _read(args.input)
            report = cmd_certify(t, args.target, args.trials, args.seed, args.method)
            _emit(report, args.report, sys.stdout)
            return report["exit_code"]
        if args.command == "gen":
            if args.bound < 1:
                raise InputError("--bound must be at least 1")
            text = cmd_gen(args.generator, args.seed, args.bound, args.dims, args.r, args.l)
            if args.output == "-":
                sys.stdout.write(text)
            else:
                with open(args.output, "w", encoding="utf-8") as fh:
                    fh.write(text)
            return 0
        t = None if args.quantity == "degrees" else _read(args.input)[0]
        _emit(cmd_eval(t, args.quantity, args), args.report, sys.stdout)
        return 0
    except (InputError, DimensionError, PreconditionError, ValueError) as exc:
        sys.stderr.write(f"secantcert: error: {exc}\n")
        return EXIT_INPUT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
