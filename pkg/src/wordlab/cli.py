"""``wordlab`` command line: named experiments with reproducible artifacts.

Exit codes: 0 success, 2 budget exceeded, 3 oracle validation failure,
64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import time
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import __version__
from .cayley import (
    cayley_graph,
    check_gap_diameter,
    csv_row,
    kesten_return,
    lambda1,
    random_generating_pairs,
    walk_deviation,
)
from .experiments import chebotarev_average, chebotarev_specs, pgl_contrast, random_relator_survey
from .ffield import is_prime, primes_in
from .fricke import (
    EXAMPLE_WORDS,
    OracleFailure,
    InsufficientData,
    count_series,
    estimate_components,
    estimate_dim,
    trace_poly,
    variety_spec,
)
from .freeword import RNG_ALGORITHM, BadLetter, parse_word
from .matgroup import DEFAULT_ELEMENT_BUDGET, BudgetExceeded, conjugacy_classes, enumerate_group
from .measures import (
    DEFAULT_PAIR_BUDGET,
    NotReached,
    centralizer_tail,
    default_workers,
    fiber_count,
    generic_element,
    lq_distance,
    mixing_time,
    word_exponent,
    word_measure_exact,
    word_measure_mc,
)
from .spectra import character_table, spectral_decay_profile, zeta

SCHEMA_VERSION = 1
EXIT_OK, EXIT_BUDGET, EXIT_ORACLE, EXIT_USAGE = 0, 2, 3, 64

log = logging.getLogger("wordlab")

COMMANDS = (
    "word-measure",
    "mixing-time",
    "char-table",
    "zeta",
    "fiber-count",
    "centralizer-tail",
    "spectral-decay",
    "cayley-gap",
    "walk-bound",
    "kesten",
    "trace-poly",
    "charvariety-count",
    "charvariety-dim",
    "chebotarev-avg",
    "random-relator-survey",
    "pgl-contrast",
)


class UsageError(Exception):
    pass


@dataclass
class ExperimentConfig:
    command: str
    group: str | None = None
    p: int | None = None
    primes: str | None = None
    word: str | None = None
    q: str | None = None
    t_max: int | None = None
    threshold: float | None = None
    samples: int | None = None
    seed: int | None = None
    delta: float | None = None
    s: float | None = None
    r: int | None = None
    lmax: int | None = None
    steps: int | None = None
    pairs: int | None = None
    lengths: str | None = None
    window: str | None = None
    element_budget: int = DEFAULT_ELEMENT_BUDGET
    pair_budget: int = DEFAULT_PAIR_BUDGET
    point_budget: int = 125_000_000
    output: str | None = None
    format: str = "json"

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> ExperimentConfig:
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in names})


def parse_header(text: str) -> ExperimentConfig:
    """Recover the config from a JSON or CSV artifact produced by this CLI."""
    text = text.lstrip()
    if text.startswith("{"):
        return ExperimentConfig.from_dict(json.loads(text)["config"])
    for line in text.splitlines():
        if line.startswith("# config="):
            return ExperimentConfig.from_dict(json.loads(line[len("# config=") :]))
    raise ValueError("no config header found")


def _prime_range(spec: str) -> list[int]:
    try:
        if ":" in spec:
            lo, hi = (int(v) for v in spec.split(":"))
            return primes_in(lo, hi)
        return [int(v) for v in spec.split(",") if v]
    except ValueError as exc:
        raise UsageError(f"bad prime range {spec!r}; expected lo:hi or a comma list") from exc


def _word(text: str | None):
    if text is None:
        raise UsageError("--word is required")
    if text in EXAMPLE_WORDS:
        return EXAMPLE_WORDS[text]
    try:
        return parse_word(text)
    except BadLetter as exc:
        raise UsageError(str(exc)) from exc


def _group(cfg: ExperimentConfig):
    if cfg.p is None:
        raise UsageError("--p is required")
    if not is_prime(cfg.p) or cfg.p == 2:
        raise UsageError("--p must be an odd prime")
    G = enumerate_group(cfg.group or "SL2", cfg.p, budget=cfg.element_budget)
    return G, conjugacy_classes(G)


def _q(value):
    if value in (None, "2"):
        return 2
    if value == "1":
        return 1
    if value in ("inf", "infinity"):
        return math.inf
    raise UsageError(f"--q must be 1, 2 or inf, got {value!r}")


# -- commands ---------------------------------------------------------------
# Each returns (printed summary, result payload for JSON, optional CSV rows).


def cmd_word_measure(cfg, workers):
    G, cd = _group(cfg)
    w = _word(cfg.word)
    if cfg.samples:
        mu = word_measure_mc(w, G, cd, cfg.samples, cfg.seed or 0)
    else:
        mu = word_measure_exact(w, G, cd, budget=cfg.pair_budget, workers=workers)
    payload = mu.to_json()
    payload["epsilon_hat"] = word_exponent(mu)
    rows = [{"class": r["class"], "size": r["size"], "numerator": r["numerator"], "mass": r["mass"]} for r in payload["masses"]]
    return f"{G.name} {w}: {cd.k} classes, epsilon_hat={payload['epsilon_hat']:.6f}", payload, rows


def cmd_mixing_time(cfg, workers):
    G, cd = _group(cfg)
    w = _word(cfg.word)
    mu = word_measure_exact(w, G, cd, budget=cfg.pair_budget, workers=workers)
    q = _q(cfg.q)
    t = mixing_time(mu, q, cfg.t_max or 10, cfg.threshold if cfg.threshold is not None else 0.5)
    value = t if isinstance(t, int) else str(t)
    return str(value), {"group": G.name, "word": str(w), "q": str(cfg.q or "2"), "mixing_time": value}, None


def cmd_char_table(cfg, workers):
    G, cd = _group(cfg)
    ct = character_table(cd, seed=cfg.seed or 0)
    payload = ct.to_json()
    return " ".join(str(d) for d in sorted(ct.degrees)), payload, None


def cmd_zeta(cfg, workers):
    G, cd = _group(cfg)
    ct = character_table(cd, seed=cfg.seed or 0)
    s = 2.0 if cfg.s is None else cfg.s
    value = zeta(ct, s)
    return f"{value:.12g}", {"group": G.name, "s": s, "zeta": value, "degrees": [int(d) for d in ct.degrees]}, None


def cmd_fiber_count(cfg, workers):
    G, cd = _group(cfg)
    w = _word(cfg.word)
    g = generic_element(G) if G.kind in ("SL2", "GL2", "PGL2") else G.identity
    count, ratio = fiber_count(w, G, g, cd, budget=cfg.pair_budget)
    payload = {"group": G.name, "word": str(w), "element": G.element(g).tolist(), "count": count, "lang_weil_ratio": ratio}
    return f"{count} {ratio:.9f}", payload, None


def cmd_centralizer_tail(cfg, workers):
    G, cd = _group(cfg)
    w = _word(cfg.word)
    mu = word_measure_exact(w, G, cd, budget=cfg.pair_budget, workers=workers)
    d = 0.5 if cfg.delta is None else cfg.delta
    value = centralizer_tail(mu, d)
    return f"{value:.12g}", {"group": G.name, "word": str(w), "delta": d, "probability": value}, None


def cmd_spectral_decay(cfg, workers):
    G, cd = _group(cfg)
    w = _word(cfg.word)
    ct = character_table(cd, seed=cfg.seed or 0)
    prof = spectral_decay_profile(w, ct)
    rows = [{"character": i, "degree": d, "ratio": r} for i, (d, r) in enumerate(zip(prof.degrees, prof.ratios))]
    payload = {"group": G.name, "word": str(w), "epsilon_hat": prof.epsilon_hat, "flagged": prof.flagged, "rows": rows}
    return f"epsilon_hat={prof.epsilon_hat:.6f}", payload, rows


def cmd_cayley_gap(cfg, workers):
    G, cd = _group(cfg)
    rows = []
    for a, b in random_generating_pairs(G, cfg.pairs or 5, cfg.seed or 0):
        rows.append(csv_row(cayley_graph(G, (a, b))))
    ok = all(r["bound_slack"] >= -1e-9 for r in rows)
    return f"{len(rows)} pairs, gap-diameter bound {'holds' if ok else 'VIOLATED'}", {"rows": rows, "holds": ok}, rows


def cmd_walk_bound(cfg, workers):
    G, cd = _group(cfg)
    steps = cfg.steps or 40
    rows = []
    for a, b in random_generating_pairs(G, cfg.pairs or 5, cfg.seed or 0):
        g = cayley_graph(G, (a, b))
        rep = walk_deviation(g, steps)
        rows.append({"p": G.p, "generators_hash": g.generators_hash, "steps": steps, "deviation": rep["deviation"], "bound": rep["bound"], "holds": rep["holds"]})
    ok = all(r["holds"] for r in rows)
    return f"{len(rows)} pairs, walk bound {'holds' if ok else 'VIOLATED'}", {"rows": rows, "holds": ok}, rows


def cmd_kesten(cfg, workers):
    res = kesten_return(cfg.r or 2, cfg.lmax or 30, cfg.samples or 100_000, cfg.seed or 0)
    rows = [{"length": l, "hits": h, "rate": x, "reference": ref} for l, h, x, ref in zip(res.lengths, res.hits, res.rates, res.reference)]
    payload = asdict(res) | {"target": res.target}
    return f"slope={res.slope:.6f} target={res.target:.6f} (plain {res.plain_slope:.6f})", payload, rows


def cmd_trace_poly(cfg, workers):
    w = _word(cfg.word)
    P = trace_poly(w, validate=True)
    return repr(P), {"word": str(w), "polynomial": repr(P), "degree": P.degree, "validated_primes": [101, 103]}, None


def _series_for(cfg, workers):
    w = _word(cfg.word)
    spec = variety_spec(w)
    primes = _prime_range(cfg.primes or "5:97")
    series = count_series(spec, primes, budget=cfg.point_budget, workers=workers)
    return w, spec, series


def cmd_charvariety_count(cfg, workers):
    w, spec, series = _series_for(cfg, workers)
    rows = [{"p": r.p, "raw": r.raw, "excluded": r.excluded, "net": r.net} for r in series.rows]
    payload = {"word": str(w), "rows": rows, "delta": spec.metadata["delta"], "excluded_box": list(spec.excluded)}
    return series.to_csv().rstrip(), payload, rows


def cmd_charvariety_dim(cfg, workers):
    w, spec, series = _series_for(cfg, workers)
    est = estimate_dim(series)
    payload = {
        "word": str(w),
        "dim": est.label,
        "slope": est.slope,
        "residual": est.residual,
        "primes": series.primes,
        "net": series.net,
        "delta": spec.metadata["delta"],
        "note": "net counts strike a superset of the finite exceptional set; O(1) ambiguity",
    }
    if est.dim is not None and len(series.rows) >= 25:
        payload["components"] = estimate_components(series, est.dim)
    return est.label, payload, None


def cmd_chebotarev_avg(cfg, workers):
    lo, hi = (int(v) for v in (cfg.window or "1000:10000").split(":"))
    out = [chebotarev_average(spec, lo, hi) for spec in chebotarev_specs().values()]
    return "\n".join(f"{r['label']}: {r['estimate']:.4f}" for r in out), {"rows": out}, out


def cmd_random_relator_survey(cfg, workers):
    lengths = [int(v) for v in (cfg.lengths or "8,12,16").split(",")]
    primes = _prime_range(cfg.primes or "11:53")
    res = random_relator_survey(cfg.samples or 5, lengths, primes, cfg.seed or 0)
    lines = [f"length {k}: finite fraction {v['fraction_finite']:.3f} ({v['samples']} words)" for k, v in res["summary"].items()]
    rows = [{"length": r["length"], "word": r["word"], "dim": r["dim"], "net": " ".join(map(str, r["net"]))} for r in res["rows"]]
    return "\n".join(lines), res, rows


def cmd_pgl_contrast(cfg, workers):
    primes = _prime_range(cfg.primes or "5:13")
    rows = pgl_contrast(primes)
    flat = [{k: v for k, v in r.items() if k != "ratios"} for r in rows]
    return "\n".join(f"{r['group']} t={r['t']}: max|ratio-1|={r['max_deviation']:.4f}" for r in flat), {"rows": rows}, flat


HANDLERS = {name: globals()["cmd_" + name.replace("-", "_")] for name in COMMANDS}


# -- plumbing -----------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wordlab", description="Word maps on finite groups: exact experiments.")
    parser.add_argument("--version", action="version", version=f"wordlab {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--group", default="SL2", type=str.upper, choices=["SL2", "GL2", "PGL2", "SL3", "GL3"])
        sp.add_argument("--p", type=int)
        sp.add_argument("--primes")
        sp.add_argument("--word")
        sp.add_argument("--q", choices=["1", "2", "inf"])
        sp.add_argument("--t-max", type=int)
        sp.add_argument("--threshold", type=float)
        sp.add_argument("--samples", "--trials", dest="samples", type=int)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--delta", type=float)
        sp.add_argument("--s", type=float)
        sp.add_argument("--r", type=int)
        sp.add_argument("--lmax", type=int)
        sp.add_argument("--steps", type=int)
        sp.add_argument("--pairs", type=int)
        sp.add_argument("--lengths")
        sp.add_argument("--window")
        sp.add_argument("--element-budget", type=int, default=DEFAULT_ELEMENT_BUDGET)
        sp.add_argument("--pair-budget", type=int, default=DEFAULT_PAIR_BUDGET)
        sp.add_argument("--point-budget", type=int, default=125_000_000)
        sp.add_argument("--output", "-o")
        sp.add_argument("--format", choices=["json", "csv"], default="json")
        sp.add_argument("--workers", type=int, help="worker pool size (default: WORDLAB_THREADS or CPU count)")
    return parser


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not serializable: {type(obj)}")


def render_artifact(cfg: ExperimentConfig, payload, rows) -> str:
    header = {"schema_version": SCHEMA_VERSION, "version": __version__, "rng": RNG_ALGORITHM, "config": cfg.to_dict()}
    if cfg.format == "csv":
        buf = io.StringIO()
        buf.write(f"# schema_version={SCHEMA_VERSION}\n# version={__version__}\n# rng={RNG_ALGORITHM}\n")
        buf.write("# config=" + json.dumps(cfg.to_dict(), sort_keys=True) + "\n")
        rows = rows if rows is not None else [payload]
        if rows:
            keys = list(rows[0].keys())
            writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n", extrasaction="ignore")
            writer.writeheader()
            for row in rows:
                writer.writerow({k: (json.dumps(v, default=_json_default) if isinstance(v, (list, dict)) else v) for k, v in row.items()})
        return buf.getvalue()
    return json.dumps(header | {"result": payload}, sort_keys=True, indent=1, default=_json_default) + "\n"


def run(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.command is None:
            raise UsageError("a subcommand is required: " + ", ".join(COMMANDS))
        workers = ns.workers or default_workers()
        opts = {k: v for k, v in vars(ns).items() if k != "workers"}
        cfg = ExperimentConfig.from_dict(opts)
        started = time.monotonic()
        summary, payload, rows = HANDLERS[cfg.command](cfg, workers)
        log.info("%s finished in %.1fs", cfg.command, time.monotonic() - started)
    except UsageError as exc:
        print(f"wordlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"wordlab: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OracleFailure as exc:
        print(f"wordlab: validation failed: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except InsufficientData as exc:
        print(f"wordlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(summary)
    if cfg.output:
        with open(cfg.output, "w", newline="") as fh:
            fh.write(render_artifact(cfg, payload, rows))
    return EXIT_OK


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
