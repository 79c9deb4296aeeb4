"""Composite experiments built from the core modules."""

from __future__ import annotations

import math

import numpy as np

from .ffield import primes_in
from .fricke import (
    X,
    InsufficientData,
    count_series,
    diagnostic_spec,
    estimate_components,
    estimate_dim,
    variety_spec,
)
from .freeword import RNG_ALGORITHM, Word, commutator, convolve_words, make_rng, sample_word
from .matgroup import conjugacy_classes, enumerate_group
from .measures import convolution_power, fiber_ratios, word_measure_exact

__all__ = [
    "commutator_power_word",
    "fgi_deviation",
    "pgl_contrast",
    "chebotarev_specs",
    "chebotarev_average",
    "random_relator_survey",
]


def commutator_power_word(t: int) -> Word:
    """``[x1,y1] * [x2,y2] * ... `` on ``2t`` letters."""
    w = commutator()
    for _ in range(t - 1):
        w = convolve_words(w, commutator())
    return w


def fgi_deviation(kind: str, p: int, t: int) -> dict:
    """Fiber ratios of ``[x,y]^{*t}`` over every class of ``kind(F_p)``."""
    G = enumerate_group(kind, p)
    cd = conjugacy_classes(G)
    tau = word_measure_exact(commutator(), G, cd)
    mu = convolution_power(tau, t) if t > 1 else tau
    ratios = fiber_ratios(mu, 2 * t)
    dev = np.abs(ratios - 1)
    return {
        "group": G.name,
        "p": p,
        "t": t,
        "order": G.order,
        "classes": cd.k,
        "ratios": ratios.tolist(),
        "class_sizes": cd.sizes.tolist(),
        "max_deviation": float(dev.max()),
        "bound": 5 / math.sqrt(p),
        "fraction_of_classes_far": float(np.mean(dev > 0.25)),
    }


def pgl_contrast(primes, ts=(2, 3)) -> list[dict]:
    """SL2 versus PGL2 fiber-ratio deviations for commutator convolution powers."""
    rows = []
    for t in ts:
        for p in primes:
            for kind in ("SL2", "PGL2"):
                r = fgi_deviation(kind, p, t)
                rows.append({k: r[k] for k in ("group", "p", "t", "max_deviation", "bound", "fraction_of_classes_far")} | {"ratios": r["ratios"]})
    return rows


def chebotarev_specs() -> dict:
    return {
        "x^2+1": diagnostic_spec([X * X + 1], 1, label="x^2+1"),
        "x^2-2": diagnostic_spec([X * X - 2], 1, label="x^2-2"),
        "(x^2+1)(x^2-2)": diagnostic_spec([(X * X + 1) * (X * X - 2)], 1, label="(x^2+1)(x^2-2)"),
    }


def chebotarev_average(spec, lo: int, hi: int, dim: int = 0) -> dict:
    primes = primes_in(lo, hi)
    series = count_series(spec, primes)
    est = estimate_components(series, dim, (lo, hi))
    return {"label": spec.label, "window": [lo, hi], "primes": len(primes), "dim": dim, "estimate": est}


def random_relator_survey(
    samples: int,
    lengths=range(8, 25, 4),
    primes=None,
    seed: int = 0,
    model: str = "reduced",
) -> dict:
    """Sample one-relator words, count their principal parts mod p, estimate dimension."""
    primes = list(primes) if primes is not None else primes_in(11, 53)
    rng = make_rng(seed)
    rows = []
    for ell in lengths:
        for _ in range(samples):
            w = sample_word(model, ell, rng)
            series = count_series(variety_spec(w), primes)
            try:
                est = estimate_dim(series, min_primes=min(8, len(primes)))
                dim = est.label
            except InsufficientData:
                dim = "insufficient"
            comp = None
            if dim == "0":
                comp = float(np.mean(series.net))
            rows.append({"length": ell, "word": str(w), "net": series.net, "dim": dim, "components": comp})
    by_len = {}
    for ell in lengths:
        sel = [r for r in rows if r["length"] == ell]
        finite = [r for r in sel if r["dim"] in ("0", "empty")]
        by_len[str(ell)] = {"samples": len(sel), "fraction_finite": len(finite) / max(1, len(sel))}
    return {"seed": seed, "rng": RNG_ALGORITHM, "primes": primes, "rows": rows, "summary": by_len}
