"""Command-line interface.

Subcommands: generate, decompose, noise, certify, check, suite.  Exit code
is 0 only when no non-vacuous failure occurred; vacuous and
out-of-hypothesis reports are summarized but do not fail a run.

Output files land in --out; a bare filename is placed under
$HYPERCHECK_OUT_DIR when that is set.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__, acceptance, families, inequalities, operators, suite
from .errors import HypercheckError
from .serialize import dumps, loads
from .space import table_from_json, table_to_json


def _out_path(name: str) -> Path:
    path = Path(name)
    base = os.environ.get("HYPERCHECK_OUT_DIR")
    if base and path.parent == Path("."):
        return Path(base) / path
    return path


def _write(text: str, out: str | None) -> None:
    if out:
        path = _out_path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    else:
        sys.stdout.write(text)


def _load_table(path: str):
    return table_from_json(Path(path).read_text())


def _load_any(path: str):
    text = Path(path).read_text()
    obj = loads(text)
    if isinstance(obj, dict) and "members" in obj:
        return families.vector_family_from_dict(obj)
    return table_from_json(text)


def _parse_value(text: str):
    try:
        return loads(text)
    except HypercheckError:
        return text


def _params_from(args_list) -> dict:
    params = {}
    for item in args_list or []:
        if "=" not in item:
            raise SystemExit(f"--param expects key=value, got {item!r}")
        key, _, value = item.partition("=")
        params[key] = _parse_value(value)
    return params


def cmd_generate(args) -> int:
    made = families.generate_example(args.name, _params_from(args.param))
    if isinstance(made, families.VectorFamily):
        _write(dumps(families.vector_family_to_dict(made)), args.out)
    else:
        _write(table_to_json(made), args.out)
    return 0


def cmd_decompose(args) -> int:
    f = _load_table(args.input)
    dec = operators.efron_stein(f)
    _write(dec.to_json(), args.out)
    return 0


def cmd_noise(args) -> int:
    f = _load_table(args.input)
    if args.method == "spectral":
        out = operators.noise_spectral(f, args.rho)
    else:
        out = operators.noise_resample(f, args.rho)
    _write(table_to_json(out), args.out)
    return 0


def cmd_certify(args) -> int:
    f = _load_table(args.input)
    from .space import lp_norm
    gamma = args.gamma if args.gamma is not None else lp_norm(f, args.norm_p)
    if args.kind == "derivative":
        cert = inequalities.certify_derivative_global(f, args.norm_p, args.depth, gamma)
    else:
        cert = inequalities.certify_restriction_global(f, args.norm_p, args.depth, gamma)
    _write(dumps(cert.to_dict()), args.out)
    return 0


_CHECK_OPTION_NAMES = ("q", "rho", "d", "p", "mask", "norm_p", "gamma",
                       "gamma1", "gamma2", "r")


def cmd_check(args) -> int:
    spec = suite.CHECKERS.get(args.theorem_id)
    if spec is None:
        raise SystemExit(f"unknown theorem id {args.theorem_id!r}; "
                         f"have {sorted(suite.CHECKERS)}")
    params = {}
    for name in _CHECK_OPTION_NAMES:
        value = getattr(args, name)
        if value is not None:
            params[name] = value
    missing = [p for p in spec.required if p not in params]
    if missing:
        raise SystemExit(f"{args.theorem_id} needs --{' --'.join(missing)}")
    params = {k: v for k, v in params.items()
              if k in spec.required or k in spec.optional}
    if spec.kind == "none":
        obj = None
    elif spec.kind == "pair":
        if not args.input or not args.input2:
            raise SystemExit("paired checker needs --input and --input2")
        obj = (_load_table(args.input), _load_table(args.input2))
    else:
        if not args.input:
            raise SystemExit("checker needs --input")
        obj = _load_any(args.input)
        if spec.kind == "family" and not isinstance(obj, tuple):
            raise SystemExit("checker needs a vector-family input")
        if spec.kind == "table" and isinstance(obj, tuple):
            raise SystemExit("checker needs a function-table input")
    report = spec.runner(obj, params, args.tolerance_scale)
    _write(dumps(report.to_dict()), args.out)
    return 0 if not report.failed else 1


def cmd_suite(args) -> int:
    if args.default or not args.config:
        results = acceptance.run_all(echo=print)
        failures = [r for r in results if not r.ok]
        print(f"{len(results) - len(failures)}/{len(results)} criteria passed")
        if args.out:
            _write(dumps({"schema": 1,
                          "library": __version__,
                          "criteria": [{"number": r.number, "title": r.title,
                                        "pass": r.ok, "detail": r.detail,
                                        "elapsed_s": r.elapsed}
                                       for r in results]}), args.out)
        return 0 if not failures else 1
    config = suite.load_config(args.config)
    if args.seed is not None:
        config.seed = args.seed
        config.raw["seed"] = args.seed
    if args.tolerance_scale != 1.0:
        config.tolerance_scale = args.tolerance_scale
    if args.mc_samples is not None:
        config.mc_samples = args.mc_samples
    report = suite.run_suite(config)
    text = report.to_csv() if args.format == "csv" else report.to_json()
    _write(text, args.out)
    summary = report.summary
    print(f"pass {summary['pass']}  fail {summary['fail']}  "
          f"vacuous {summary['vacuous']}  out-of-hypothesis {summary['out_of_hypothesis']}",
          file=sys.stderr)
    return 0 if report.fail_count == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypercheck",
        description="verify hypercontractivity-type inequalities on finite product spaces")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="emit a named example table or family")
    p.add_argument("name", help=f"one of {sorted(families.GENERATORS)}")
    p.add_argument("--param", action="append", metavar="KEY=VALUE")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("decompose", help="full orthogonal decomposition of a table")
    p.add_argument("--input", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_decompose)

    p = sub.add_parser("noise", help="apply the noise operator")
    p.add_argument("--input", required=True)
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--method", choices=("resample", "spectral"), default="resample")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_noise)

    p = sub.add_parser("certify", help="exhaustive globalness certificate")
    p.add_argument("--input", required=True)
    p.add_argument("--kind", choices=("derivative", "restriction"), required=True)
    p.add_argument("--norm-p", dest="norm_p", type=float, default=2.0)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--gamma", type=float)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_certify)

    p = sub.add_parser("check", help="run one named checker")
    p.add_argument("theorem_id")
    p.add_argument("--input")
    p.add_argument("--input2")
    p.add_argument("--q", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--d", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--mask", type=int)
    p.add_argument("--norm-p", dest="norm_p", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--gamma1", type=float)
    p.add_argument("--gamma2", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--tolerance-scale", dest="tolerance_scale", type=float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("suite", help="run a config grid or the default acceptance program")
    p.add_argument("--config")
    p.add_argument("--default", action="store_true",
                   help="run the built-in acceptance criteria")
    p.add_argument("--seed", type=int)
    p.add_argument("--mc-samples", dest="mc_samples", type=int)
    p.add_argument("--tolerance-scale", dest="tolerance_scale", type=float, default=1.0)
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(fn=cmd_suite)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except HypercheckError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
