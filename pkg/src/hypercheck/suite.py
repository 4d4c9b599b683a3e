"""Batch runner: registered checkers x targets x parameter grids.

A suite config is a JSON object::

    {
      "schema": 1,
      "seed": 42,
      "targets": [
        {"name": "and2", "generator": "and", "params": {"n": 3, "p": 0.5, "t": 2}},
        {"name": "stored", "file": "table.json"},
        {"name": "pair",  "generator": "and", "params": {...},
         "second": {"generator": "dictator", "params": {...}}}
      ],
      "checkers": ["level-d", "classical-hyper"],
      "grids": {"q": [2, 4], "d": [0, 1], "rho": [0.2], "p": [0.5], "mask": [1]}
    }

Every checker runs on every compatible target at every combination of the
grid axes it consumes.  Items execute concurrently but reports keep config
order, and all randomness is seeded from the config, so identical
config+seed gives byte-identical output.
"""

from __future__ import annotations

import hashlib
import io
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__, families, gaussian, inequalities
from .errors import ConfigError
from .families import VectorFamily, generate_example, vector_family_from_dict
from .reports import InequalityReport
from .serialize import dumps, fmt_float, loads
from .space import FunctionTable, table_from_json


@dataclass(frozen=True)
class CheckerSpec:
    name: str
    kind: str                  # "table" | "family" | "pair" | "none"
    required: tuple[str, ...]
    optional: tuple[str, ...]
    runner: object


def _run_table(fn, **fixed):
    def run(obj, params, tol_scale):
        return fn(obj, **fixed, **params, tol_scale=tol_scale)
    return run


def _one_var(obj, params, tol_scale):
    x = gaussian.standardized_two_point(params["p"])
    return gaussian.check_one_var_bound(x, params["d"], params["rho"], params["q"],
                                        tol_scale=tol_scale)


def _pairing(pair, params, tol_scale):
    h, g = pair
    return families.check_disjointness_pairing(h, g, params["p"], tol_scale=tol_scale)


def _vector_bound(obj, params, tol_scale):
    fam, gens = obj
    if gens is None:
        raise ConfigError("vector-bound needs symmetry generators on the family")
    return families.check_vector_bound(fam, gens, tol_scale=tol_scale)


def _coupling(obj, params, tol_scale):
    fam, _ = obj
    return families.check_coupling_bound(fam, params.get("p"), tol_scale=tol_scale)


CHECKERS: dict[str, CheckerSpec] = {}


def _register(name, kind, required, optional, runner):
    CHECKERS[name] = CheckerSpec(name, kind, tuple(required), tuple(optional), runner)


_register("tensorization", "table", ("rho", "q"), (),
          _run_table(gaussian.check_tensorization))
_register("one-var-encoding", "none", ("p", "d", "rho", "q"), (), _one_var)
_register("classical-hyper", "table", ("q",), (),
          _run_table(inequalities.check_classical_hyper))
_register("derivative-norm-bound", "table", ("rho", "q"), (),
          _run_table(inequalities.check_derivative_norm_bound))
for _variant in ("main", "alt", "cor1", "cor2"):
    _register(f"global-hyper-{_variant}", "table", ("q",), (),
              _run_table(inequalities.check_global_hyper, variant=_variant))
_register("restriction-implies-derivative", "table", ("norm_p", "d"), (),
          _run_table(inequalities.check_restriction_implies_derivative))
_register("level-d", "table", ("d",), (),
          _run_table(inequalities.check_level_d))
_register("level-d-general", "table", ("gamma1", "gamma2", "d"), (),
          _run_table(inequalities.check_level_d_general))
_register("level-globalness", "table", ("d",), ("gamma1", "gamma2"),
          _run_table(inequalities.check_level_globalness))
_register("level-given-global", "table", ("d",), ("gamma", "r"),
          _run_table(inequalities.check_lemma_level_given_global))
_register("level-qnorm", "table", ("d", "q"), (),
          _run_table(inequalities.qnorm_level_bound))
_register("noise-eigenfunction", "table", ("d",), (),
          _run_table(families.check_noise_eigenfunction))
_register("restriction-rate", "table", ("r",), (),
          _run_table(families.check_restriction_rate))
_register("disjointness-pairing", "pair", ("p",), (), _pairing)
_register("smeared-level1", "table", ("p",), (),
          _run_table(families.check_smeared_level1))
_register("density-decrease", "table", ("p", "mask"), (),
          _run_table(families.check_density_decrease))
_register("intersecting-measure", "table", ("p",), (),
          _run_table(families.check_intersecting_bound))
_register("coupling", "family", (), ("p",), _coupling)
_register("vector-bound", "family", (), (), _vector_bound)


@dataclass
class SuiteConfig:
    seed: int
    targets: list[dict]
    checkers: list[str]
    grids: dict[str, list]
    tolerance_scale: float = 1.0
    mc_samples: int = gaussian.DEFAULT_MC_SAMPLES
    raw: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, obj: dict) -> "SuiteConfig":
        if not isinstance(obj, dict):
            raise ConfigError("suite config must be a JSON object")
        checkers = list(obj.get("checkers", []))
        for name in checkers:
            if name not in CHECKERS:
                raise ConfigError(f"unknown checker {name!r}; have {sorted(CHECKERS)}")
        grids = {k: list(v) for k, v in obj.get("grids", {}).items()}
        targets = list(obj.get("targets", []))
        for t in targets:
            if not isinstance(t, dict) or "name" not in t:
                raise ConfigError(f"target missing a name: {t}")
            if ("generator" in t) == ("file" in t):
                raise ConfigError(f"target {t['name']!r} needs exactly one of generator/file")
        return cls(seed=int(obj.get("seed", 42)), targets=targets,
                   checkers=checkers, grids=grids,
                   tolerance_scale=float(obj.get("tolerance_scale", 1.0)),
                   mc_samples=int(obj.get("mc_samples", gaussian.DEFAULT_MC_SAMPLES)),
                   raw=obj)

    def config_hash(self) -> str:
        return hashlib.sha256(dumps(self.raw).encode()).hexdigest()


def _load_target_object(spec: dict, seed: int):
    """Returns ("table", FunctionTable) | ("family", (fam, gens)) | pair."""
    def load_one(sub: dict):
        if "file" in sub:
            text = Path(sub["file"]).read_text()
            obj = loads(text)
            if isinstance(obj, dict) and "members" in obj:
                return "family", vector_family_from_dict(obj)
            return "table", table_from_json(text)
        params = dict(sub.get("params", {}))
        if sub["generator"].startswith("random"):
            params.setdefault("seed", seed)
        made = generate_example(sub["generator"], params)
        if isinstance(made, VectorFamily):
            return "family", (made, sub.get("generators"))
        return "table", made

    kind, obj = load_one(spec)
    if "second" in spec:
        kind2, obj2 = load_one(spec["second"])
        if kind != "table" or kind2 != "table":
            raise ConfigError("paired targets must both be tables")
        return "pair", (obj, obj2)
    return kind, obj


@dataclass
class SuiteReport:
    reports: list[InequalityReport]
    versions: dict
    seed: int

    @property
    def summary(self) -> dict:
        counts = {"pass": 0, "fail": 0, "vacuous": 0, "out_of_hypothesis": 0}
        for r in self.reports:
            if r.out_of_hypothesis:
                counts["out_of_hypothesis"] += 1
            elif r.vacuous:
                counts["vacuous"] += 1
            elif r.passed:
                counts["pass"] += 1
            else:
                counts["fail"] += 1
        return counts

    @property
    def fail_count(self) -> int:
        return self.summary["fail"]

    def to_json(self) -> str:
        return dumps({
            "schema": 1,
            "versions": self.versions,
            "seed": self.seed,
            "summary": self.summary,
            "reports": [r.to_dict() for r in self.reports],
        })

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("target,theorem_id,lhs,rhs,margin,pass,vacuous,out_of_hypothesis,params\n")
        for r in self.reports:
            params = dict(r.params)
            target = params.pop("target", "")
            cell = dumps(params).strip().replace('"', '""')
            out.write(",".join([
                str(target), r.theorem_id,
                fmt_float(r.lhs), fmt_float(r.rhs), fmt_float(r.margin),
                str(r.passed).lower(), str(r.vacuous).lower(),
                str(r.out_of_hypothesis).lower(), f'"{cell}"',
            ]) + "\n")
        return out.getvalue()


def plan_items(config: SuiteConfig):
    """The (target_name, object, checker, params) list, in config order."""
    items = []
    for tspec in config.targets:
        kind, obj = _load_target_object(tspec, config.seed)
        for name in config.checkers:
            spec = CHECKERS[name]
            if spec.kind != "none" and spec.kind != kind:
                raise ConfigError(
                    f"checker {name!r} needs a {spec.kind} target, "
                    f"but {tspec['name']!r} is a {kind}")
            axes = []
            for param in spec.required:
                if param not in config.grids:
                    raise ConfigError(f"checker {name!r} needs grid axis {param!r}")
                axes.append([(param, v) for v in config.grids[param]])
            for param in spec.optional:
                if param in config.grids:
                    axes.append([(param, v) for v in config.grids[param]])
            for combo in itertools.product(*axes):
                items.append((tspec["name"], obj, spec, dict(combo)))
    return items


def run_suite(config: SuiteConfig, max_workers: int | None = None) -> SuiteReport:
    items = plan_items(config)

    def run_item(item):
        target_name, obj, spec, params = item
        report = spec.runner(obj, params, config.tolerance_scale)
        report.params = {"target": target_name, **params, **report.params}
        return report

    if max_workers == 1 or len(items) <= 1:
        reports = [run_item(it) for it in items]
    else:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            reports = list(pool.map(run_item, items))
    return SuiteReport(
        reports=reports,
        versions={"library": __version__, "config_sha256": config.config_hash()},
        seed=config.seed,
    )


def load_config(path: str) -> SuiteConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    obj = loads(text)
    return SuiteConfig.from_dict(obj)
