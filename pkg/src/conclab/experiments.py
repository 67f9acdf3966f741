"""Configuration-driven experiment runners with deterministic CSV output.

Every experiment is fully specified by a flat JSON-style mapping (unknown
keys are rejected), expands to an ordered grid of work items, and emits
one CSV table whose bytes depend only on the mathematical part of the
configuration.  Rows may be computed by a worker pool; each grid point
owns a stream id equal to its grid index, so results are identical for
any worker count and rows are always written in grid order.
"""

import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from . import __version__
from .amenability import boundary_ratio, folner_chain
from .freegroup import (
    ActionConvention,
    evaluate_A2_claim,
    verify_A1_separation,
)
from .groups import group_from_spec, parse_generators
from .montecarlo import check_fibre_inequality, estimate_tube_measure
from .permutations import equicontinuity_counterexample
from .sphere import (
    LevyConstants,
    SphereQuery,
    exponential_decay_ratio,
    levy_lower_bound,
    recursive_tube_lower_bound,
    tube_measure,
)
from .streams import SampleStream

__all__ = [
    "ConfigError",
    "default_config",
    "load_config",
    "run_experiment",
    "run_tube",
    "run_free_group",
    "run_folner",
    "run_hamming",
    "run_fibre",
    "Table",
    "render_csv",
    "EXPERIMENTS",
]


class ConfigError(ValueError):
    """Invalid or unknown experiment configuration."""


@dataclass
class Table:
    name: str
    columns: list
    rows: list
    meta: dict = field(default_factory=dict)


# keys that do not influence the mathematical content of the outputs
_NON_MATH_KEYS = ("out", "svg", "workers")

_DEFAULTS = {
    "tube": {
        "experiment": "tube",
        "seed": 20260801,
        "samples": 100000,
        "grid": {
            "n": [100, 200, 400, 800, 1600],
            "k": "ceil-sqrt",
            "epsilon": [0.2],
            "C": [0.1],
        },
        "levy": {"c1": math.sqrt(math.pi / 2.0), "c2": 0.5},
        "workers": 1,
        "out": "out",
        "svg": False,
    },
    "free-group": {
        "experiment": "free-group",
        "seed": 20260801,
        "samples": 20000,
        "ball_radius": 6,
        "convention": "paper",
        "index_range": 4,
        "workers": 1,
        "out": "out",
        "svg": False,
    },
    "folner": {
        "experiment": "folner",
        "seed": 20260801,
        "group": {"kind": "Z"},
        "generators": None,
        "length": 50,
        "workers": 1,
        "out": "out",
        "svg": False,
    },
    "hamming": {
        "experiment": "hamming",
        "seed": 20260801,
        "max_n": 200,
        "workers": 1,
        "out": "out",
        "svg": False,
    },
    "fibre": {
        "experiment": "fibre",
        "seed": 20260801,
        "samples": 100000,
        "grid": [
            [5, 8, 0.9, 0.35],
            [6, 9, 1.2, 0.3],
            [4, 7, 1.0, 0.4],
            [3, 6, 0.8, 0.45],
            [5, 10, 1.1, 0.25],
        ],
        "workers": 1,
        "out": "out",
        "svg": False,
    },
}

_GRID_KEYS = {"tube": {"n", "k", "epsilon", "C"}}


def default_config(experiment: str) -> dict:
    if experiment not in _DEFAULTS:
        raise ConfigError(
            f"unknown experiment {experiment!r}; expected one of {sorted(_DEFAULTS)}"
        )
    return json.loads(json.dumps(_DEFAULTS[experiment]))


def load_config(experiment: str, config: dict | None = None, overrides: dict | None = None) -> dict:
    """Merge defaults, an optional config mapping, and flag overrides.

    Unknown keys are rejected; the experiment name in the config must
    match the requested experiment.
    """
    merged = default_config(experiment)
    for source in (config or {}, overrides or {}):
        for key, value in source.items():
            if value is None:
                continue
            if key not in merged:
                raise ConfigError(f"unknown configuration key {key!r} for {experiment}")
            if key == "experiment" and value != experiment:
                raise ConfigError(
                    f"configuration is for {value!r}, requested {experiment!r}"
                )
            if key == "grid" and experiment in _GRID_KEYS:
                if not isinstance(value, dict):
                    raise ConfigError("tube grid must be a mapping")
                unknown = set(value) - _GRID_KEYS[experiment]
                if unknown:
                    raise ConfigError(f"unknown grid keys {sorted(unknown)}")
                merged["grid"] = {**merged["grid"], **value}
            else:
                merged[key] = value
    _validate(merged)
    return merged


def _validate(cfg: dict) -> None:
    kind = cfg["experiment"]
    if not isinstance(cfg.get("seed"), int) or cfg["seed"] < 0:
        raise ConfigError("seed must be a nonnegative integer")
    if cfg.get("workers") is not None and (not isinstance(cfg["workers"], int) or cfg["workers"] < 1):
        raise ConfigError("workers must be a positive integer")
    if "samples" in cfg and (not isinstance(cfg["samples"], int) or cfg["samples"] < 1):
        raise ConfigError("samples must be a positive integer")
    if kind == "tube":
        grid = cfg["grid"]
        if not grid["n"] or any((not isinstance(n, int)) or n < 1 for n in grid["n"]):
            raise ConfigError("grid.n must be a nonempty list of positive integers")
        k = grid["k"]
        if k != "ceil-sqrt" and (
            not isinstance(k, list) or any((not isinstance(v, int)) or v < 0 for v in k)
        ):
            raise ConfigError("grid.k must be 'ceil-sqrt' or a list of nonnegative integers")
        if any(not (0.0 < e < math.pi / 2.0) for e in grid["epsilon"]):
            raise ConfigError("grid.epsilon entries must lie in (0, pi/2)")
        if any(c <= 0.0 for c in grid["C"]):
            raise ConfigError("grid.C entries must be positive")
        levy = cfg["levy"]
        if set(levy) - {"c1", "c2"}:
            raise ConfigError("levy override accepts only c1 and c2")
        LevyConstants(float(levy["c1"]), float(levy["c2"]))
    elif kind == "free-group":
        if cfg["convention"] not in ("paper", "inverse"):
            raise ConfigError("convention must be 'paper' or 'inverse'")
        if not isinstance(cfg["ball_radius"], int) or not (2 <= cfg["ball_radius"] <= 12):
            raise ConfigError("ball_radius must be an integer in [2, 12]")
        if not isinstance(cfg["index_range"], int) or cfg["index_range"] < 1:
            raise ConfigError("index_range must be a positive integer")
    elif kind == "folner":
        if not isinstance(cfg["length"], int) or cfg["length"] < 1:
            raise ConfigError("length must be a positive integer")
        try:
            group_from_spec(cfg["group"])
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    elif kind == "hamming":
        if not isinstance(cfg["max_n"], int) or cfg["max_n"] < 4 or cfg["max_n"] % 2:
            raise ConfigError("max_n must be an even integer >= 4")
    elif kind == "fibre":
        for row in cfg["grid"]:
            if len(row) != 4:
                raise ConfigError("fibre grid rows are [n, N, cap_radius, epsilon]")
            n, N, r, e = row
            if not (isinstance(n, int) and isinstance(N, int) and 1 <= n < N):
                raise ConfigError("fibre grid needs integer 1 <= n < N")
            if not (0.0 < r <= math.pi and 0.0 < e <= math.pi / 2.0):
                raise ConfigError("fibre grid needs cap_radius in (0, pi], epsilon in (0, pi/2]")


def config_hash(cfg: dict) -> str:
    math_cfg = {k: v for k, v in cfg.items() if k not in _NON_MATH_KEYS}
    digest = hashlib.sha256(
        json.dumps(math_cfg, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()
    return digest[:16]


# ---------------------------------------------------------------------------
# tube experiment


def _tube_points(cfg: dict) -> list:
    grid = cfg["grid"]
    ks = grid["k"]
    points = []
    for n in grid["n"]:
        k_values = [math.ceil(math.sqrt(n))] if ks == "ceil-sqrt" else ks
        for k in k_values:
            for eps in grid["epsilon"]:
                for c in grid["C"]:
                    points.append((n, k, float(eps), float(c)))
    return points


def _tube_row(task):
    cfg, index, (n, k, eps, c_decay) = task
    levy = LevyConstants(float(cfg["levy"]["c1"]), float(cfg["levy"]["c2"]))
    q = SphereQuery(n, n + k, eps)
    exact = tube_measure(q)
    mc = estimate_tube_measure(q, SampleStream(cfg["seed"], index), cfg["samples"])
    if k >= 1:
        bounds = recursive_tube_lower_bound(q, levy)
        ratio = exponential_decay_ratio(n, k, eps, c_decay)
        levy_value = levy_lower_bound(n, eps, levy)
        return {
            "n": n,
            "k": k,
            "epsilon": eps,
            "C": c_decay,
            "tube_exact": exact.value,
            "tube_mc": mc.mean,
            "tube_mc_stderr": mc.std_error,
            "levy_bound": levy_value,
            "recursive_bound": bounds.product.value,
            "simplified_bound": bounds.simplified.value,
            "exp_minus_Cn_ratio": ratio.ratio,
            "log_ratio": ratio.log_ratio,
        }
    return {
        "n": n,
        "k": k,
        "epsilon": eps,
        "C": c_decay,
        "tube_exact": exact.value,
        "tube_mc": mc.mean,
        "tube_mc_stderr": mc.std_error,
        "levy_bound": None,
        "recursive_bound": None,
        "simplified_bound": None,
        "exp_minus_Cn_ratio": None,
        "log_ratio": None,
    }


_TUBE_COLUMNS = [
    "n",
    "k",
    "epsilon",
    "C",
    "tube_exact",
    "tube_mc",
    "tube_mc_stderr",
    "levy_bound",
    "recursive_bound",
    "simplified_bound",
    "exp_minus_Cn_ratio",
    "log_ratio",
]


def _run_grid(cfg, points, row_fn):
    tasks = [(cfg, i, p) for i, p in enumerate(points)]
    workers = cfg.get("workers") or 1
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(row_fn, tasks))
    return [row_fn(t) for t in tasks]


def run_tube(cfg: dict) -> Table:
    points = _tube_points(cfg)
    rows = _run_grid(cfg, points, _tube_row)
    violations = sum(
        1
        for r in rows
        if r["recursive_bound"] is not None
        and not (
            r["simplified_bound"] <= r["recursive_bound"] * (1 + 1e-12) + 1e-15
            and r["recursive_bound"] <= r["tube_exact"] * (1 + 1e-12) + 1e-15
        )
    )
    meta = {"dominance_violations": violations}
    return Table("tube", _TUBE_COLUMNS, [[r[c] for c in _TUBE_COLUMNS] for r in rows], meta)


# ---------------------------------------------------------------------------
# free group experiment

_FREE_GROUP_COLUMNS = [
    "class",
    "convention",
    "samples",
    "violations_of_A1_chain",
    "min_over_i_distribution_quantiles",
    "fraction_below_one_sixth",
    "candidate_vector_min",
]


def run_free_group(cfg: dict) -> Table:
    convention = (
        ActionConvention.PAPER if cfg["convention"] == "paper" else ActionConvention.INVERSE
    )
    a1 = verify_A1_separation(
        cfg["samples"], cfg["ball_radius"], SampleStream(cfg["seed"], 1), convention
    )
    a2 = evaluate_A2_claim(
        cfg["samples"],
        cfg["ball_radius"],
        SampleStream(cfg["seed"], 2),
        index_range=range(1, cfg["index_range"] + 1),
        convention=convention,
    )
    quantiles = ";".join(
        f"q{q:02d}:{_fmt_float(v)}" for q, v in sorted(a2.min_norm_quantiles.items())
    )
    rows = [
        ["A1", cfg["convention"], cfg["samples"], a1.chain_violations, None, None, None],
        [
            "A2",
            cfg["convention"],
            cfg["samples"],
            None,
            quantiles,
            a2.fraction_below_one_sixth,
            a2.candidate_min,
        ],
    ]
    meta = {
        "ball_radius": cfg["ball_radius"],
        "a1_inclusion_exceptions": a1.inclusion_exceptions,
        "a1_min_translated_norm": _fmt_float(a1.min_translated_norm),
        "a1_certificate_margin": _fmt_float(a1.certificate.margin),
        "a2_pigeonhole_exceptions": a2.pigeonhole_exceptions,
        "candidate_meets_stated_bound": int(a2.candidate_meets_stated_bound),
    }
    return Table("free_group", _FREE_GROUP_COLUMNS, rows, meta)


# ---------------------------------------------------------------------------
# folner experiment

_FOLNER_COLUMNS = ["group", "position", "set_size", "boundary_ratio"]


def run_folner(cfg: dict) -> Table:
    group = group_from_spec(cfg["group"])
    generators = (
        parse_generators(group, cfg["generators"]) if cfg.get("generators") else None
    )
    chain = folner_chain(group, cfg["length"], generators)
    rows = [
        [group.name, i + 1, len(c.elements), boundary_ratio(c)]
        for i, c in enumerate(chain)
    ]
    return Table("folner", _FOLNER_COLUMNS, rows, {"length": cfg["length"]})


# ---------------------------------------------------------------------------
# hamming experiment

_HAMMING_COLUMNS = ["n", "phi_before", "phi_after", "amplification"]


def run_hamming(cfg: dict) -> Table:
    rows = []
    for n in range(4, cfg["max_n"] + 1, 2):
        row = equicontinuity_counterexample(n)
        rows.append([n, row.phi_before, row.phi_after, row.amplification])
    return Table("hamming", _HAMMING_COLUMNS, rows, {"max_n": cfg["max_n"]})


# ---------------------------------------------------------------------------
# fibre experiment

_FIBRE_COLUMNS = [
    "n",
    "N",
    "cap_radius",
    "epsilon",
    "lhs_estimate",
    "lhs_stderr",
    "rhs_exact",
    "margin",
    "violation",
]


def _fibre_row(task):
    cfg, index, (n, N, cap_radius, eps) = task
    report = check_fibre_inequality(
        n, N, cap_radius, eps, SampleStream(cfg["seed"], index), cfg["samples"]
    )
    return [
        n,
        N,
        cap_radius,
        eps,
        report.lhs.mean,
        report.lhs.std_error,
        report.rhs,
        report.margin,
        report.violation,
    ]


def run_fibre(cfg: dict) -> Table:
    points = [tuple(row) for row in cfg["grid"]]
    rows = _run_grid(cfg, points, _fibre_row)
    violations = sum(1 for r in rows if r[-1])
    return Table("fibre", _FIBRE_COLUMNS, rows, {"violation_count": violations})


EXPERIMENTS = {
    "tube": run_tube,
    "free-group": run_free_group,
    "folner": run_folner,
    "hamming": run_hamming,
    "fibre": run_fibre,
}


def run_experiment(experiment: str, cfg: dict) -> Table:
    return EXPERIMENTS[experiment](cfg)


# ---------------------------------------------------------------------------
# CSV rendering: UTF-8, '#'-prefixed metadata, 12 significant digits


def _fmt_float(x: float) -> str:
    if x != x:
        return "nan"
    if x == math.inf:
        return "inf"
    if x == -math.inf:
        return "-inf"
    return "%.12g" % x


def _fmt_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return _fmt_float(v)
    return str(v)


def render_csv(table: Table, cfg: dict) -> str:
    lines = [
        f"# tool=conclab {__version__}",
        f"# experiment={cfg['experiment']}",
        f"# seed={cfg['seed']}",
        f"# config_hash={config_hash(cfg)}",
    ]
    for key in sorted(table.meta):
        lines.append(f"# {key}={_fmt_cell(table.meta[key])}")
    lines.append(",".join(table.columns))
    for row in table.rows:
        lines.append(",".join(_fmt_cell(v) for v in row))
    return "\n".join(lines) + "\n"
