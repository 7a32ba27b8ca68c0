"""Command-line front end: ``merolib <command> [options]``.

Every command prints one JSON object ``{command, input, result, ...}``.
Exit status: 0 success, 1 rejected precondition (negative crossing, Demazure
product not w0, suite failure), 2 undecided or a cap was hit, 3 malformed
input or unknown command.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .braidvar import (
    BraidWord,
    NotFullDemazure,
    CONVENTION as BRAID_CONVENTION,
    Permutation,
    count_points as braid_count,
    demazure,
    presentation_from_json,
    presentation_to_json,
    variety_presentation,
)
from .caps import CapExceeded, Caps
from .exactalg import CoordinateRing, is_prime
from .groebner import RationalSection, is_regular
from .holonomy import (
    ChartPoint,
    CrossingWord,
    PositivityError,
    hopf_orbit_census,
    intersection_vector,
    is_positive,
    local_lift,
    merodromy,
    reduce_word,
    restrict_to_chart,
    verify_local_to_global,
)
from .quiverhh import Chain, Quiver, ho_trace, parse_rep, trace_space

EXIT_OK, EXIT_REJECTED, EXIT_UNDECIDED, EXIT_USAGE = 0, 1, 2, 3

CONVENTIONS = {
    "braid": BRAID_CONVENTION,
    "trace": "tr(A_k...A_1) for the walk a_1...a_k",
    "chart": "e_i -> vertex dimension, [rho^m] -> rho^m",
}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str  # e.g. "hh0", "braid count", "hopf census"
    params: dict = field(default_factory=dict)
    caps: Caps = field(default_factory=Caps.from_env)
    primes: tuple = (3, 5, 7, 11)
    seed: int = 0
    format: str = "json"
    timing: bool = False

    def __post_init__(self):
        bad = [p for p in self.primes if not is_prime(p)]
        if bad:
            raise ValueError(f"not prime: {bad}")
        if self.format not in ("json", "table"):
            raise ValueError(f"unknown format {self.format!r}")


@dataclass
class RunReport:
    config: RunConfig
    result: object = None
    exit_code: int = EXIT_OK
    extras: dict = field(default_factory=dict)
    seconds: float | None = None

    def to_dict(self):
        out = {"command": self.config.command, "input": self.config.params, "result": self.result}
        out.update(self.extras)
        if self.config.timing and self.seconds is not None:
            out["seconds"] = round(self.seconds, 6)
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, default=str)

    def to_table(self):
        rows = []

        def walk(prefix, value):
            if isinstance(value, dict):
                for k, v in value.items():
                    walk(f"{prefix}.{k}" if prefix else str(k), v)
            else:
                rows.append((prefix, json.dumps(value, default=str) if isinstance(value, list) else str(value)))

        walk("", self.to_dict())
        width = max((len(k) for k, _ in rows), default=0)
        return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


# -- command handlers ------------------------------------------------------------------


def _hh0(cfg):
    p = cfg.params
    q = Quiver.from_spec(p["quiver"])
    ts = trace_space(q, int(p["max_len"]), cfg.caps)
    return {"dim": ts.dim, "basis": ts.labels()}, EXIT_OK, {}


def _ho(cfg):
    p = cfg.params
    q = Quiver.from_spec(p["quiver"])
    chain = Chain.parse(p["chain"], q)
    rep = parse_rep(p["rep"], q)
    return {"chain": str(chain), "value": str(ho_trace(chain, rep))}, EXIT_OK, {}


def _braid_word(p):
    return BraidWord.parse(int(p["strands"]), p["word"])


def _braid_demazure(cfg):
    word = _braid_word(cfg.params)
    w = demazure(word)
    return {"permutation": str(w), "length": w.length(), "is_longest": w == Permutation.longest(word.strands)}, EXIT_OK, {}


def _braid_variety(cfg):
    word = _braid_word(cfg.params)
    try:
        pres = variety_presentation(word)
    except NotFullDemazure as exc:
        return {"rejected": str(exc)}, EXIT_REJECTED, {}
    text = presentation_to_json(pres)
    out = cfg.params.get("out")
    if out:
        Path(out).write_text(text + "\n")
    return json.loads(text), EXIT_OK, {}


def _braid_count(cfg):
    p = cfg.params
    pres = presentation_from_json(Path(p["pres"]).read_text())
    q = int(p["q"])
    return {"q": q, "count": braid_count(pres, q, cfg.caps)}, EXIT_OK, {}


def _lift(cfg):
    p = cfg.params
    word = CrossingWord.parse(p["crossings"], p.get("disks"))
    info = {
        "intersection_vector": list(intersection_vector(word)),
        "homologically_positive": is_positive(word, "homological"),
        "geometrically_positive": is_positive(word, "geometric"),
        "reduced": [f"{'+' if s > 0 else '-'}{d}" for _, (d, s) in reduce_word(word)],
    }
    try:
        lift = local_lift(word)
    except PositivityError as exc:
        info.update(rejected=str(exc), index=exc.index)
        return info, EXIT_REJECTED, {}
    info.update(
        quiver=lift.quiver.to_text(),
        chain=str(lift),
        chart=str(restrict_to_chart(lift, int(p.get("rank", 1)))),
    )
    return info, EXIT_OK, {}


def _ints(text):
    return [int(t) for t in text.replace(" ", "").split(",") if t]


def _merodromy(cfg):
    p = cfg.params
    point = ChartPoint(tuple(_ints(p["chart"])))
    value = merodromy(point, _ints(p["cycle"]))
    q = p.get("q")
    if q is not None:
        value = int(value.numerator * pow(value.denominator, -1, int(q)) % int(q)) if hasattr(value, "numerator") else value % int(q)
    return {"value": str(value)}, EXIT_OK, {}


def _load_ring(spec):
    if spec == "builtin:hopf":
        return CoordinateRing.hopf()
    path = spec[5:] if spec.startswith("file:") else spec
    return CoordinateRing.from_dict(json.loads(Path(path).read_text()))


def _regular(cfg):
    p = cfg.params
    ring = _load_ring(p["ring"])
    section = RationalSection(p["num"], p["den"], ring)
    res = is_regular(section, cfg.caps, cfg.primes)
    code = EXIT_UNDECIDED if res.status == "undecided" else EXIT_OK
    return res.to_dict(), code, {}


def _hopf_census(cfg):
    return hopf_orbit_census(int(cfg.params["q"]), cfg.caps), EXIT_OK, {}


def _verify(cfg):
    p = cfg.params
    rep = verify_local_to_global(
        word=p.get("crossings"),
        spikes=p.get("spikes"),
        rank=int(p.get("rank", 1)),
        q=int(p.get("q", 5)),
        samples=int(p.get("samples", 50)),
        seed=cfg.seed,
        caps=cfg.caps,
    )
    d = rep.to_dict()
    if rep.rejected:
        return d, EXIT_REJECTED, {}
    tally = d.pop("tally")
    return d, EXIT_OK if rep.ok else EXIT_REJECTED, {"tally": tally}


def _suite(cfg):
    from .suite import run_suite

    out = run_suite(cfg.params["name"], cfg.seed)
    return out, EXIT_OK if out["passed"] else EXIT_REJECTED, {}


HANDLERS = {
    "hh0": _hh0,
    "ho": _ho,
    "braid demazure": _braid_demazure,
    "braid variety": _braid_variety,
    "braid count": _braid_count,
    "lift": _lift,
    "merodromy": _merodromy,
    "regular": _regular,
    "hopf census": _hopf_census,
    "verify": _verify,
    "suite": _suite,
}


def dispatch(cfg: RunConfig) -> RunReport:
    handler = HANDLERS.get(cfg.command)
    if handler is None:
        return RunReport(cfg, {"error": f"unknown command {cfg.command!r}"}, EXIT_USAGE)
    start = time.perf_counter()
    try:
        result, code, extras = handler(cfg)
    except CapExceeded as exc:
        result, code, extras = {"status": "undecided", "reason": str(exc)}, EXIT_UNDECIDED, {}
    except (KeyError, ValueError, OSError, SyntaxError) as exc:
        result, code, extras = {"error": f"{type(exc).__name__}: {exc}"}, EXIT_USAGE, {}
    report = RunReport(cfg, result, code, extras, time.perf_counter() - start)
    report.extras.setdefault("caps", cfg.caps.as_dict())
    report.extras.setdefault("conventions", CONVENTIONS)
    return report


# -- argument parsing ------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--caps", default="", help="overrides like d=6,u=3 (on top of MEROLIB_CAPS)")
    common.add_argument("--primes", default="3,5,7,11", help="primes tried for pole certificates")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--timing", action="store_true", help="add wall-clock seconds to the output")

    parser = _Parser(prog="merolib", description="Exact computations for trace spaces, braid varieties and relative cycles.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("hh0", parents=[common], help="basis and dimension of the truncated trace space")
    p.add_argument("--quiver", required=True, help="cyclic:N, loop, linear:N or file:PATH")
    p.add_argument("--max-len", type=int, required=True, dest="max_len")

    p = sub.add_parser("ho", parents=[common], help="trace pairing of a chain with a representation")
    p.add_argument("--quiver", required=True)
    p.add_argument("--chain", required=True)
    p.add_argument("--rep", required=True)

    braid = sub.add_parser("braid", help="braid words and braid varieties")
    bsub = braid.add_subparsers(dest="braid_command", parser_class=_Parser)
    for name in ("demazure", "variety"):
        b = bsub.add_parser(name, parents=[common])
        b.add_argument("--strands", type=int, required=True)
        b.add_argument("--word", required=True)
        if name == "variety":
            b.add_argument("--out")
    b = bsub.add_parser("count", parents=[common])
    b.add_argument("--pres", required=True)
    b.add_argument("--q", type=int, required=True)

    p = sub.add_parser("lift", parents=[common], help="local trace lift of a crossing word")
    p.add_argument("--crossings", required=True)
    p.add_argument("--disks", type=int)
    p.add_argument("--rank", type=int, default=1)

    p = sub.add_parser("merodromy", parents=[common], help="chart monomial of a relative class")
    p.add_argument("--chart", required=True)
    p.add_argument("--cycle", required=True)
    p.add_argument("--q", type=int)

    p = sub.add_parser("regular", parents=[common], help="decide regularity of num/den on a ring")
    p.add_argument("--ring", required=True, help="builtin:hopf or a JSON file {variables, relations, units}")
    p.add_argument("--num", required=True)
    p.add_argument("--den", required=True)

    hopf = sub.add_parser("hopf", help="Hopf-link character variety")
    hsub = hopf.add_subparsers(dest="hopf_command", parser_class=_Parser)
    h = hsub.add_parser("census", parents=[common])
    h.add_argument("--q", type=int, required=True)

    p = sub.add_parser("verify", parents=[common], help="local-to-global agreement check")
    p.add_argument("--spikes", type=int)
    p.add_argument("--crossings")
    p.add_argument("--rank", type=int, default=1)
    p.add_argument("--q", type=int, default=5)
    p.add_argument("--samples", type=int, default=50)

    p = sub.add_parser("suite", parents=[common], help="run a seeded check battery")
    p.add_argument("name", choices=("acceptance", "oracles"))
    return parser


_GLOBAL = ("format", "caps", "primes", "seed", "timing", "command", "braid_command", "hopf_command")


def config_from_args(argv) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    command = ns.get("command")
    if command is None:
        raise UsageError("no command given")
    if command in ("braid", "hopf"):
        sub = ns.get(f"{command}_command")
        if sub is None:
            raise UsageError(f"{command} needs a subcommand")
        command = f"{command} {sub}"
    params = {k: v for k, v in ns.items() if k not in _GLOBAL and v is not None}
    caps = Caps.from_env()
    if ns.get("caps"):
        caps = caps.update(ns["caps"])
    primes = tuple(int(t) for t in ns.get("primes", "3,5,7,11").split(",") if t)
    return RunConfig(command, params, caps, primes, ns.get("seed", 0), ns.get("format", "json"), ns.get("timing", False))


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = config_from_args(argv)
    except (UsageError, ValueError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_USAGE
    report = dispatch(cfg)
    print(report.to_table() if cfg.format == "table" else report.to_json())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
