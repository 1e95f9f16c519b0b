"""Command-line front end.

Exit codes: 0 success, 1 a validation check failed, 2 usage error,
3 the quadrature did not converge.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace

import numpy as np

from . import dielectric
from .dielectric import Constant, is_constant, permittivity_at, static_permittivity
from .lifshitz import ForceConvergenceError, StackConfig, force_rational, force_series
from .perturbation import PerturbativeInput, force_perturbative
from .quadrature import QuadratureError, QuadratureSpec
from .report import ReportRow, rows_to_csv, rows_to_json
from .validation import format_table, run_checks

EXIT_OK, EXIT_VALIDATION, EXIT_USAGE, EXIT_NONCONVERGENCE = 0, 1, 2, 3

AXES = ("gap_d", "delta_rel", "eps1", "eps2", "eps3")
METHODS = ("rational", "series", "perturbative")
# Two constants count as a symmetric perturbative stack if they match to this.
_SYMMETRY_RTOL = 1e-9


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class Case:
    """One fully specified calculation: what ``force`` runs and what a sweep row holds."""

    stack: StackConfig
    media: tuple[str, str, str]
    method: str = "rational"
    rel_tol: float = 1e-8
    n_max: int = 20
    delta_rel: float | None = None


@dataclass(frozen=True)
class SweepPlan:
    axis: str
    values: tuple[float, ...]
    base: Case

    def __post_init__(self):
        if self.axis not in AXES:
            raise UsageError(f"--axis: must be one of {', '.join(AXES)}")
        if not self.values:
            raise UsageError("--values: sweep needs at least one value")
        diffs = np.diff(self.values)
        if not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise UsageError("--values: sweep values must be strictly monotone")

    def cases(self) -> list[Case]:
        return [_vary(self.base, self.axis, v) for v in self.values]


def _vary(base: Case, axis: str, value: float) -> Case:
    try:
        if axis == "gap_d":
            return replace(base, stack=replace(base.stack, d=value))
        if axis == "delta_rel":
            e3 = _constant_value(base.stack.eps3, "--eps3")
            return _symmetric_case(base, e3, value)
        index = int(axis[-1])
        stack = replace(base.stack, **{axis: Constant(value)})
        media = list(base.media)
        media[index - 1] = "constant"
        return replace(base, stack=stack, media=tuple(media), delta_rel=_implied_delta(stack))
    except ValueError as exc:
        raise UsageError(f"--values: {axis}={value!r}: {exc}") from exc


def _constant_value(model, flag) -> float:
    if not is_constant(model):
        raise UsageError(f"{flag}: a constant permittivity is required here")
    return permittivity_at(model, 0.0)


def _symmetric_case(base: Case, eps3: float, delta: float) -> Case:
    if not 0 <= delta < 1:
        raise ValueError("relative contrast must lie in [0, 1)")
    stack = replace(base.stack, eps1=Constant(eps3 * (1 + delta)), eps2=Constant(eps3 * (1 - delta)), eps3=Constant(eps3))
    return replace(base, stack=stack, media=("constant",) * 3, delta_rel=delta)


def _implied_delta(stack: StackConfig) -> float | None:
    """Relative contrast if the stack is constant and symmetric about the gap, else ``None``."""
    if not stack.dispersion_free:
        return None
    e1, e2, e3 = (permittivity_at(m, 0.0) for m in (stack.eps1, stack.eps2, stack.eps3))
    delta = (e1 - e3) / e3
    if math.isclose(e2, e3 * (1 - delta), rel_tol=_SYMMETRY_RTOL, abs_tol=0.0) and 0 <= delta < 1:
        return delta
    return None


def run_case(case: Case):
    stack = case.stack
    if case.method == "perturbative":
        if case.delta_rel is None:
            raise UsageError("--method perturbative: needs constant eps1 = eps3(1+D), eps2 = eps3(1-D) (or --delta)")
        e3 = permittivity_at(stack.eps3, 0.0)
        result = force_perturbative(PerturbativeInput(case.delta_rel, e3, stack.d, stack.area))
    elif case.method == "series":
        result = force_series(stack, QuadratureSpec(rel_tol=case.rel_tol), n_max=case.n_max)
    else:
        result = force_rational(stack, QuadratureSpec(rel_tol=case.rel_tol))
    eps = tuple(static_permittivity(m) for m in (stack.eps1, stack.eps2, stack.eps3))
    return ReportRow.from_result(
        result, method=case.method, media=case.media, eps=eps, gap=stack.d, area=stack.area, delta_rel=case.delta_rel
    )


def _medium(args, index: int, registry):
    value = getattr(args, f"eps{index}")
    name = getattr(args, f"material{index}")
    if value is not None and name is not None:
        raise UsageError(f"--eps{index}/--material{index}: give one, not both")
    if value is not None:
        try:
            return Constant(value), "constant"
        except ValueError as exc:
            raise UsageError(f"--eps{index}: {exc}") from exc
    if name is not None:
        try:
            return dielectric.lookup(registry(), name).model, name
        except KeyError as exc:
            raise UsageError(f"--material{index}: {exc.args[0]}") from exc
    raise UsageError(f"--eps{index}: missing (or use --material{index})")


def _load_registry(args):
    cache = {}

    def load():
        if "m" not in cache:
            try:
                if args.materials_file:
                    cache["m"] = dielectric.registry_load(args.materials_file)
                else:
                    cache["m"] = dielectric.default_registry()
            except (OSError, dielectric.RegistryError) as exc:
                raise UsageError(f"--materials-file: {exc}") from exc
        return cache["m"]

    return load


def _case_from_args(args, need_media=(1, 2, 3)) -> Case:
    registry = _load_registry(args)
    if args.gap is None:
        raise UsageError("--gap: required (meters)")
    if not args.tol or not 0 < args.tol <= 1e-2:
        raise UsageError("--tol: must lie in (0, 1e-2]")
    if args.n_max < 0:
        raise UsageError("--n-max: must be >= 0")

    if args.delta is not None:
        if args.eps1 is not None or args.eps2 is not None or args.material1 or args.material2:
            raise UsageError("--delta: derives eps1 and eps2 from eps3; do not also give them")
        model3, name3 = _medium(args, 3, registry)
        e3 = _constant_value(model3, "--eps3")
        base = Case(StackConfig.constant(e3, e3, e3, _positive(args.gap, "--gap"), _positive(args.area, "--area")),
                    ("constant", "constant", name3), args.method, args.tol, args.n_max)
        try:
            case = _symmetric_case(base, e3, args.delta)
        except ValueError as exc:
            raise UsageError(f"--delta: {exc}") from exc
        return case

    models, names = [], []
    for i in (1, 2, 3):
        if i in need_media:
            m, n = _medium(args, i, registry)
        else:
            m, n = Constant(1.0), "constant"
        models.append(m)
        names.append(n)
    try:
        stack = StackConfig(*models, d=_positive(args.gap, "--gap"), area=_positive(args.area, "--area"))
    except ValueError as exc:
        raise UsageError(f"--eps3/--material3: {exc}") from exc
    return Case(stack, tuple(names), args.method, args.tol, args.n_max, _implied_delta(stack))


def _positive(value, flag):
    if value is None or not value > 0 or not math.isfinite(value):
        raise UsageError(f"{flag}: must be a positive number")
    return value


def _add_stack_flags(p):
    for i in (1, 2, 3):
        p.add_argument(f"--eps{i}", type=float, help=f"constant permittivity of medium {i}")
        p.add_argument(f"--material{i}", help=f"registry name for medium {i}")
    p.add_argument("--materials-file", help="TOML materials registry (default: bundled registry)")
    p.add_argument("--gap", type=float, help="gap width d in meters")
    p.add_argument("--area", type=float, default=1e-4, help="plate area in m^2 (default 1e-4)")
    p.add_argument("--delta", type=float, help="relative contrast D: eps1 = eps3(1+D), eps2 = eps3(1-D)")
    p.add_argument("--method", choices=METHODS, default="rational")
    p.add_argument("--n-max", type=int, default=20, help="last series term for --method series")
    p.add_argument("--tol", type=float, default=1e-8, help="relative quadrature tolerance")
    p.add_argument("--units", choices=("si", "cgs"), default="si")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="casimir-lifshitz", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    force = sub.add_parser("force", help="pressure and force for one stack")
    _add_stack_flags(force)
    force.add_argument("--format", choices=("json", "csv"), default="json")

    sweep = sub.add_parser("sweep", help="one row per value of a swept parameter, written as CSV")
    _add_stack_flags(sweep)
    sweep.add_argument("--axis", required=True, choices=AXES)
    sweep.add_argument("--values", help="comma-separated values")
    sweep.add_argument("--range", nargs=3, metavar=("START", "STOP", "COUNT"), help="generated values")
    sweep.add_argument("--spacing", choices=("linear", "log"), default="linear")
    sweep.add_argument("--output", "-o", required=True, help="CSV path")
    sweep.add_argument("--jobs", type=int, default=1, help="worker processes; output order is fixed")

    validate = sub.add_parser("validate", help="run the checkpoint suite")
    validate.add_argument("--json", action="store_true")
    validate.add_argument("--tol", type=float, default=1e-6)

    materials = sub.add_parser("materials", help="materials registry")
    msub = materials.add_subparsers(dest="materials_command", required=True)
    mlist = msub.add_parser("list", help="list registry entries")
    mlist.add_argument("--materials-file")
    return parser


def _sweep_values(args) -> tuple[float, ...]:
    if (args.values is None) == (args.range is None):
        raise UsageError("--values/--range: give exactly one")
    if args.values is not None:
        try:
            return tuple(float(v) for v in args.values.split(",") if v.strip())
        except ValueError as exc:
            raise UsageError(f"--values: {exc}") from exc
    try:
        start, stop, count = float(args.range[0]), float(args.range[1]), int(args.range[2])
    except ValueError as exc:
        raise UsageError(f"--range: {exc}") from exc
    if count < 1:
        raise UsageError("--range: COUNT must be >= 1")
    if args.spacing == "log":
        if start <= 0 or stop <= 0:
            raise UsageError("--range: log spacing needs positive end points")
        return tuple(float(v) for v in np.geomspace(start, stop, count))
    return tuple(float(v) for v in np.linspace(start, stop, count))


def cmd_force(args) -> int:
    row = run_case(_case_from_args(args))
    text = rows_to_json([row], args.units) if args.format == "json" else rows_to_csv([row], args.units)
    sys.stdout.write(text.rstrip("\r\n") + "\n")
    return EXIT_OK


def cmd_sweep(args) -> int:
    values = _sweep_values(args)
    if not values:
        raise UsageError("--values: sweep needs at least one value")
    skip = {"eps1": (1,), "eps2": (2,), "eps3": (3,), "delta_rel": (1, 2)}.get(args.axis, ())
    if args.axis == "gap_d" and args.gap is None:
        args.gap = values[0]
    base = _case_from_args(args, need_media=tuple(i for i in (1, 2, 3) if i not in skip))
    cases = SweepPlan(args.axis, values, base).cases()

    rows = []
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(run_case, c) for c in cases]
            for i, fut in enumerate(futures):
                rows.append(_row_or_fail(fut.result, args.axis, values[i]))
    else:
        for case, value in zip(cases, values):
            rows.append(_row_or_fail(lambda: run_case(case), args.axis, value))

    # Write to a sibling temp file first so a failure never leaves a partial CSV.
    directory = os.path.dirname(os.path.abspath(args.output))
    fd, tmp = tempfile.mkstemp(prefix=".sweep-", suffix=".csv", dir=directory)
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as fh:
            fh.write(rows_to_csv(rows, args.units))
        os.replace(tmp, args.output)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return EXIT_OK


class _RowFailure(Exception):
    pass


def _row_or_fail(compute, axis, value):
    try:
        return compute()
    except QuadratureError as exc:
        raise _RowFailure(f"row {axis}={value!r}: {exc}") from exc


def cmd_validate(args) -> int:
    checks = run_checks(QuadratureSpec(rel_tol=args.tol))
    if args.json:
        print(json.dumps({"passed": all(c.passed for c in checks), "checks": [asdict(c) for c in checks]}, indent=2))
    else:
        print(format_table(checks))
        failed = sum(not c.passed for c in checks)
        print(f"\n{len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_VALIDATION


def cmd_materials_list(args) -> int:
    try:
        materials = dielectric.registry_load(args.materials_file) if args.materials_file else dielectric.default_registry()
    except (OSError, dielectric.RegistryError) as exc:
        raise UsageError(f"--materials-file: {exc}") from exc
    for m in materials:
        kind = type(m.model).__name__.lower()
        print(f"{m.name}\t{kind}\teps(0)={static_permittivity(m.model):.6g}\t{m.provenance}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"force": cmd_force, "sweep": cmd_sweep, "validate": cmd_validate, "materials": cmd_materials_list}
    try:
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _RowFailure as exc:
        print(f"{parser.prog} sweep: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (ForceConvergenceError, QuadratureError) as exc:
        print(f"{parser.prog} {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
